from enum import Enum
from typing import Any

import numpy as np
from pydantic import field_validator, model_validator

from app.schemas.base import ArrayModel, frozen_array
from app.schemas.grid import Grid


class ModeKind(str, Enum):
    """How DMD modes are lifted back to the full space"""

    PROJECTED = "projected"
    EXACT = "exact"


class SvdTruncation(ArrayModel):
    """Rank-r factors of the snapshot matrix, Y ~ U diag(sigma) V^T"""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    @field_validator("U", "sigma", "V", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> np.ndarray:
        return frozen_array(value, float)

    @model_validator(mode="after")
    def _check(self) -> "SvdTruncation":
        r = self.sigma.shape[0]
        if self.sigma.ndim != 1 or r < 1:
            raise ValueError("sigma must be a non-empty vector")
        if self.U.ndim != 2 or self.U.shape[1] != r:
            raise ValueError(f"U must have {r} columns, got {self.U.shape}")
        if self.V.ndim != 2 or self.V.shape[1] != r:
            raise ValueError(f"V must have {r} columns, got {self.V.shape}")
        if np.any(self.sigma <= 0) or np.any(np.diff(self.sigma) > 0):
            raise ValueError("singular values must be positive and descending")
        return self

    @property
    def rank(self) -> int:
        return self.sigma.shape[0]


class DmdDecomposition(ArrayModel):
    """Everything the sparse stage and the diagnostics need from one DMD run"""

    svd: SvdTruncation
    a_tilde: np.ndarray
    eigenvectors: np.ndarray
    eigenvalues: np.ndarray
    modes: np.ndarray
    vandermonde: np.ndarray
    amplitudes: np.ndarray
    # amplitude QP: J(b) = b^H P b - 2 Re(d^H b) + energy
    qp_matrix: np.ndarray
    qp_vector: np.ndarray
    energy: float
    grid: Grid
    mode_kind: ModeKind = ModeKind.PROJECTED
    field_name: str = "field"

    @field_validator("a_tilde", mode="before")
    @classmethod
    def _coerce_real(cls, value: Any) -> np.ndarray:
        return frozen_array(value, float)

    @field_validator(
        "eigenvectors",
        "eigenvalues",
        "modes",
        "vandermonde",
        "amplitudes",
        "qp_matrix",
        "qp_vector",
        mode="before",
    )
    @classmethod
    def _coerce_complex(cls, value: Any) -> np.ndarray:
        return frozen_array(value, complex)

    @model_validator(mode="after")
    def _check(self) -> "DmdDecomposition":
        r = self.svd.rank
        expected = {
            "a_tilde": (r, r),
            "eigenvectors": (r, r),
            "eigenvalues": (r,),
            "modes": (self.grid.p, r),
            "amplitudes": (r,),
            "qp_matrix": (r, r),
            "qp_vector": (r,),
        }
        for name, shape in expected.items():
            actual = getattr(self, name).shape
            if actual != shape:
                raise ValueError(f"{name} must have shape {shape}, got {actual}")
        if self.vandermonde.ndim != 2 or self.vandermonde.shape[0] != r:
            raise ValueError(f"vandermonde must have {r} rows")
        if self.energy <= 0:
            raise ValueError("energy must be positive")
        return self

    @property
    def rank(self) -> int:
        return self.svd.rank

    @property
    def n_snapshots(self) -> int:
        return self.vandermonde.shape[1]
