from typing import Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.schemas.base import ArrayModel, frozen_array


class AdmmConfig(BaseModel):
    rho: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    eps_primal: float = Field(default=1e-6, gt=0, allow_inf_nan=False)
    eps_dual: float = Field(default=1e-6, gt=0, allow_inf_nan=False)
    k_max: int = Field(default=10000, ge=1)

    class Config:
        frozen = True


class AdmmOutcome(ArrayModel):
    """Raw result of one ADMM run"""

    b_sparse: np.ndarray
    iterations: int
    converged: bool
    primal_residual: float
    dual_residual: float

    @field_validator("b_sparse", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> np.ndarray:
        return frozen_array(value, complex)


class SparseSolution(ArrayModel):
    """Sparse amplitudes for one sparsity weight, polished on their support"""

    gamma: float = Field(ge=0)
    b_sparse: np.ndarray
    support: Tuple[int, ...]
    b_polished: np.ndarray
    j_sp: float = Field(ge=0)
    j_pol: float = Field(ge=0)
    j_loss_percent: float = Field(ge=0)
    j_pol_percent: float = Field(ge=0)
    iterations: int
    converged: bool

    @field_validator("b_sparse", "b_polished", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> np.ndarray:
        return frozen_array(value, complex)

    @model_validator(mode="after")
    def _check(self) -> "SparseSolution":
        r = self.b_sparse.shape[0]
        if self.b_polished.shape != (r,):
            raise ValueError("b_polished and b_sparse must have the same length")
        if len(self.support) > r or any(not 0 <= j < r for j in self.support):
            raise ValueError("support indices out of range")
        off_support = np.ones(r, dtype=bool)
        off_support[list(self.support)] = False
        if np.any(self.b_polished[off_support] != 0):
            raise ValueError("b_polished must be zero off the support")
        return self

    @property
    def cardinality(self) -> int:
        return len(self.support)


class SweepPoint(BaseModel):
    gamma: float
    cardinality: int = 0
    support: Tuple[int, ...] = ()
    j_sp: float = float("nan")
    j_pol: float = float("nan")
    j_loss_percent: float = float("nan")
    j_pol_percent: float = float("nan")
    iterations: int = 0
    converged: bool = False
    error: Optional[str] = None

    class Config:
        frozen = True

    @property
    def failed(self) -> bool:
        return self.error is not None

    @property
    def status(self) -> str:
        """ok, stalled (hit k_max) or failed (solver raised)"""
        if self.failed:
            return "failed"
        return "ok" if self.converged else "stalled"


class SweepResult(BaseModel):
    """Accuracy versus complexity curve over a grid of sparsity weights"""

    points: List[SweepPoint]
    gamma_grid: Tuple[float, ...]

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check(self) -> "SweepResult":
        gammas = [point.gamma for point in self.points]
        if any(b < a for a, b in zip(gammas, gammas[1:])):
            raise ValueError("sweep points must be sorted by ascending gamma")
        return self
