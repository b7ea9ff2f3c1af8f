from typing import Any

import numpy as np
from pydantic import BaseModel


def frozen_array(value: Any, dtype: Any = float) -> np.ndarray:
    """Copy ``value`` into a read-only array of ``dtype``"""
    array = np.array(value, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


class ArrayModel(BaseModel):
    """Base for immutable schemas holding numpy arrays"""

    class Config:
        arbitrary_types_allowed = True
        frozen = True
