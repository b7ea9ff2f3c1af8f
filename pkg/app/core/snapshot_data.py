"""Gridded snapshot series: flattening, observables and file ingestion.

Flattening is column-major with y fastest: grid point (m, l) lands at flat
index ``l * n_y + m`` (0-based).
"""
import logging
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from app.core.errors import BoundsError, DataError, DimensionError
from app.schemas.grid import Grid
from app.schemas.snapshot import ScalarFieldSeries, SnapshotMatrix
from app.storage.factory import CodecFactory, SnapshotFormat

logger = logging.getLogger(__name__)


def flatten(field: np.ndarray, grid: Grid) -> np.ndarray:
    field = np.asarray(field, dtype=float)
    if field.shape != grid.shape:
        raise DimensionError(f"field shape {field.shape} does not match grid {grid.shape}")
    return field.reshape(-1, order="F")


def unflatten(vector: np.ndarray, grid: Grid) -> np.ndarray:
    vector = np.asarray(vector)
    if vector.shape != (grid.p,):
        raise DimensionError(f"vector of length {vector.size} does not match p={grid.p}")
    return vector.reshape(grid.shape, order="F")


def grid_index(grid: Grid, m: int, l: int) -> int:
    """Flat row of grid point (m, l), both 0-based"""
    if not (0 <= m < grid.n_y and 0 <= l < grid.n_z):
        raise BoundsError(f"grid point ({m}, {l}) outside {grid.n_y} x {grid.n_z}")
    return l * grid.n_y + m


def _check_pair(vy: ScalarFieldSeries, vz: ScalarFieldSeries) -> None:
    if vy.grid != vz.grid:
        raise DimensionError("velocity components live on different grids")
    if vy.n_snapshots != vz.n_snapshots:
        raise DimensionError(
            f"velocity components have {vy.n_snapshots} and {vz.n_snapshots} snapshots"
        )


def velocity_magnitude(vy: ScalarFieldSeries, vz: ScalarFieldSeries) -> ScalarFieldSeries:
    """Pointwise sqrt(u_y^2 + u_z^2)"""
    _check_pair(vy, vz)
    values = np.sqrt(vy.values**2 + vz.values**2)
    return ScalarFieldSeries(grid=vy.grid, values=values)


def vorticity_magnitude(vy: ScalarFieldSeries, vz: ScalarFieldSeries) -> ScalarFieldSeries:
    """|du_z/dy - du_y/dz| with central differences inside, one-sided at the edges"""
    _check_pair(vy, vz)
    grid = vy.grid
    if grid.n_y < 2 or grid.n_z < 2:
        raise DimensionError("vorticity needs at least 2 points along each axis")
    # axis 1 is y, axis 2 is z
    duz_dy = np.gradient(vz.values, grid.dy, axis=1, edge_order=1)
    duy_dz = np.gradient(vy.values, grid.dz, axis=2, edge_order=1)
    return ScalarFieldSeries(grid=grid, values=np.abs(duz_dy - duy_dz))


def from_series(series: ScalarFieldSeries, field_name: str = "field") -> SnapshotMatrix:
    data = np.stack([flatten(field, series.grid) for field in series.values], axis=1)
    return SnapshotMatrix(grid=series.grid, data=data, field_name=field_name)


def to_series(matrix: SnapshotMatrix) -> ScalarFieldSeries:
    values = np.stack([unflatten(column, matrix.grid) for column in matrix.data.T])
    return ScalarFieldSeries(grid=matrix.grid, values=values)


def split_shifted(y_full: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Split p x (N+1) data into Y (columns 0..N-1) and Y' (columns 1..N)"""
    y_full = np.asarray(y_full, dtype=float)
    if y_full.ndim != 2 or y_full.shape[1] < 2:
        raise DimensionError(f"need at least 2 snapshots, got shape {y_full.shape}")
    return y_full[:, :-1], y_full[:, 1:]


def _resolve_format(path: Union[str, Path], fmt: Optional[SnapshotFormat]) -> SnapshotFormat:
    return SnapshotFormat(fmt) if fmt is not None else CodecFactory.infer_format(path)


def load_snapshots(
    path: Union[str, Path], fmt: Optional[SnapshotFormat] = None
) -> SnapshotMatrix:
    fmt = _resolve_format(path, fmt)
    frame = CodecFactory.create_codec(fmt).read(path)
    try:
        matrix = SnapshotMatrix(grid=frame.grid, data=frame.data, field_name=frame.field_name)
    except ValidationError as exc:
        raise DataError(f"{path}: {exc}") from exc
    logger.debug("loaded %s: p=%d N=%d", path, matrix.grid.p, matrix.n_snapshots)
    return matrix


def save_snapshots(
    matrix: SnapshotMatrix, path: Union[str, Path], fmt: Optional[SnapshotFormat] = None
) -> None:
    fmt = _resolve_format(path, fmt)
    CodecFactory.create_codec(fmt).write(path, matrix.grid, matrix.data, matrix.field_name)


def observable(
    kind: str, vy: ScalarFieldSeries, vz: ScalarFieldSeries
) -> ScalarFieldSeries:
    """Derive a scalar observable from a two-component velocity series"""
    if kind == "velocity_magnitude":
        return velocity_magnitude(vy, vz)
    if kind == "vorticity_magnitude":
        return vorticity_magnitude(vy, vz)
    raise ValueError(f"Unsupported observable: {kind}")


def load_modes(
    real_path: Union[str, Path], imag_path: Union[str, Path]
) -> Tuple[Grid, np.ndarray]:
    """Read back exported DMD modes as a p x r complex matrix.

    Mode files hold r columns, so r = 1 is valid here even though a
    snapshot series needs at least 2.
    """
    real = CodecFactory.create_codec(_resolve_format(real_path, None)).read(real_path)
    imag = CodecFactory.create_codec(_resolve_format(imag_path, None)).read(imag_path)
    if real.grid != imag.grid or real.data.shape != imag.data.shape:
        raise DimensionError(
            f"mode parts disagree: {real.data.shape} on {real.grid.shape} vs "
            f"{imag.data.shape} on {imag.grid.shape}"
        )
    return real.grid, real.data + 1j * imag.data
