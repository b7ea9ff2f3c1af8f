from typing import Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.schemas.base import ArrayModel, frozen_array
from app.schemas.grid import Grid


class ModeSpec(ArrayModel):
    """One term phi * lambda^k * b of a generated superposition"""

    eigenvalue: complex
    amplitude: complex
    pattern: np.ndarray

    @field_validator("pattern", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> np.ndarray:
        return frozen_array(value, complex)

    @model_validator(mode="after")
    def _check(self) -> "ModeSpec":
        if self.pattern.ndim != 1:
            raise ValueError("pattern must be a vector")
        if abs(np.linalg.norm(self.pattern) - 1.0) > 1e-12:
            raise ValueError("pattern must have unit 2-norm")
        return self


class GroundTruth(ArrayModel):
    modes: List[ModeSpec]
    grid: Grid
    noise_sigma: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    seed: int = 0
    field_name: str = "synthetic"


# Fixture JSON documents


class BubbleSpec(BaseModel):
    center: Tuple[float, float]
    widths: Tuple[float, float]

    @field_validator("widths")
    @classmethod
    def _positive(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if min(value) <= 0:
            raise ValueError("bubble widths must be positive")
        return value


class PatternSpec(BaseModel):
    real: BubbleSpec
    imag: Optional[BubbleSpec] = None
    conjugate: bool = False


class ModeEntry(BaseModel):
    eigenvalue: Tuple[float, float]
    amplitude: Tuple[float, float]
    pattern: PatternSpec


class FixtureSpec(BaseModel):
    grid: Grid
    modes: List[ModeEntry]
    noise_sigma: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    seed: int = 0
    field_name: str = "synthetic"
