from enum import Enum
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from app.schemas.decomposition import ModeKind
from app.schemas.sparse import AdmmConfig
from app.storage.factory import SnapshotFormat


class Command(str, Enum):
    DECOMPOSE = "decompose"
    SPDMD = "spdmd"
    SWEEP = "sweep"
    SYNTH = "synth"


class Observable(str, Enum):
    RAW = "raw"
    VELOCITY_MAGNITUDE = "velocity_magnitude"
    VORTICITY_MAGNITUDE = "vorticity_magnitude"


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class RunManifest(BaseModel):
    """Everything one CLI run needs, validated before any work starts"""

    command: Command
    out: Path
    input: Optional[Path] = None
    input_vy: Optional[Path] = None
    input_vz: Optional[Path] = None
    input_format: Optional[SnapshotFormat] = None
    observable: Observable = Observable.RAW
    rank: Optional[int] = Field(default=None, ge=1)
    mode_kind: ModeKind = ModeKind.PROJECTED
    gamma: Optional[float] = Field(default=None, ge=0)
    gamma_min: Optional[float] = Field(default=None, gt=0)
    gamma_max: Optional[float] = Field(default=None, gt=0)
    n_grid: int = Field(default=100, ge=2)
    admm: AdmmConfig = AdmmConfig()
    report_format: ReportFormat = ReportFormat.CSV
    point: Optional[Tuple[int, int]] = None
    seed: Optional[int] = None
    spec: Optional[Path] = None
    steps: Optional[int] = Field(default=None, ge=2)

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check(self) -> "RunManifest":
        if self.command == Command.SYNTH:
            if self.spec is None or self.steps is None:
                raise ValueError("synth needs --spec and --steps")
            return self

        two_component = self.input_vy is not None or self.input_vz is not None
        if self.observable == Observable.RAW:
            if self.input is None or two_component:
                raise ValueError("raw observable needs --input only")
        elif self.input is not None or self.input_vy is None or self.input_vz is None:
            raise ValueError(
                f"{self.observable.value} needs --input-vy and --input-vz only"
            )

        has_range = self.gamma_min is not None or self.gamma_max is not None
        if self.command == Command.SPDMD:
            if self.gamma is None or has_range:
                raise ValueError("spdmd needs --gamma and no sweep range")
        elif self.command == Command.SWEEP:
            if self.gamma is not None:
                raise ValueError("sweep takes a range, not --gamma")
            if self.gamma_min is None or self.gamma_max is None:
                raise ValueError("sweep needs --gamma-min and --gamma-max")
            if self.gamma_min >= self.gamma_max:
                raise ValueError("--gamma-min must be below --gamma-max")
        return self
