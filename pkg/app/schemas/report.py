from enum import Enum

from pydantic import BaseModel


class ModeClass(str, Enum):
    STEADY = "steady"
    GROWING = "growing"
    DECAYING = "decaying"


class ModeReport(BaseModel):
    """One row of a mode table: label is the 1-based DMD index"""

    label: int
    amplitude_mag: float
    eigenvalue: complex
    modulus: float
    period_steps: float
    period_physical: float
    classification: ModeClass

    class Config:
        frozen = True
