from typing import Tuple

import numpy as np
from pydantic import BaseModel, Field


class Grid(BaseModel):
    """Geometry of the y-z plane sampled by every snapshot"""

    n_y: int = Field(ge=2, description="horizontal grid points")
    n_z: int = Field(ge=2, description="vertical grid points")
    dy: float = Field(gt=0, allow_inf_nan=False, description="spacing along y (km)")
    dz: float = Field(gt=0, allow_inf_nan=False, description="spacing along z (km)")
    h: float = Field(gt=0, allow_inf_nan=False, description="seconds per snapshot")

    class Config:
        frozen = True

    @property
    def p(self) -> int:
        return self.n_y * self.n_z

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_y, self.n_z)

    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        """Meshgrid of (y, z) positions in km, each shaped n_y x n_z"""
        y = np.arange(self.n_y) * self.dy
        z = np.arange(self.n_z) * self.dz
        return np.meshgrid(y, z, indexing="ij")
