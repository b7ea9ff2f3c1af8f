from typing import Any

import numpy as np
from pydantic import field_validator, model_validator

from app.schemas.base import ArrayModel, frozen_array
from app.schemas.grid import Grid


class ScalarFieldSeries(ArrayModel):
    """N scalar fields on a grid, stored as an N x n_y x n_z array"""

    grid: Grid
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, value: Any) -> np.ndarray:
        return frozen_array(value, float)

    @model_validator(mode="after")
    def _check_values(self) -> "ScalarFieldSeries":
        if self.values.ndim != 3 or self.values.shape[1:] != self.grid.shape:
            raise ValueError(
                f"values must have shape (N, {self.grid.n_y}, {self.grid.n_z}), "
                f"got {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values contain NaN or Inf")
        return self

    @property
    def n_snapshots(self) -> int:
        return self.values.shape[0]


class SnapshotMatrix(ArrayModel):
    """p x N matrix whose column k is the flattened snapshot k"""

    grid: Grid
    data: np.ndarray
    field_name: str = "field"

    @field_validator("data", mode="before")
    @classmethod
    def _coerce_data(cls, value: Any) -> np.ndarray:
        return frozen_array(value, float)

    @model_validator(mode="after")
    def _check_data(self) -> "SnapshotMatrix":
        if self.data.ndim != 2 or self.data.shape[0] != self.grid.p:
            raise ValueError(
                f"data must have {self.grid.p} rows, got shape {self.data.shape}"
            )
        if self.data.shape[1] < 2:
            raise ValueError("a snapshot matrix needs at least 2 snapshots")
        if not np.all(np.isfinite(self.data)):
            raise ValueError("data contain NaN or Inf")
        return self

    @property
    def n_snapshots(self) -> int:
        return self.data.shape[1]
