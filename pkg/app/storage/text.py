"""CSV snapshot files.

The first line is ``# ny=<int> nz=<int> N=<int> dy=<f> dz=<f> h=<f> field=<name>``,
then one snapshot per line as p comma-separated values in flattening order.
Legacy headers may omit dy, dz and h.
"""
import io
import re
from typing import Dict

import numpy as np
from pydantic import ValidationError

from app.core.errors import DataError, FormatError, LengthError
from app.schemas.grid import Grid
from app.storage.base import SnapshotCodec, SnapshotFrame

_PAIR = re.compile(r"(ny|nz|N|dy|dz|h)=(\S+)")


class CsvCodec(SnapshotCodec):
    """CSV implementation of the SnapshotCodec interface"""

    def __init__(self, default_dy: float, default_dz: float, default_h: float):
        self.default_dy = default_dy
        self.default_dz = default_dz
        self.default_h = default_h

    def dumps(self, grid: Grid, data: np.ndarray, field_name: str) -> bytes:
        data = np.asarray(data, dtype=float)
        if data.ndim != 2 or data.shape[0] != grid.p:
            raise LengthError(f"expected {grid.p} rows, got shape {data.shape}")
        header = (
            f"ny={grid.n_y} nz={grid.n_z} N={data.shape[1]} dy={grid.dy!r} "
            f"dz={grid.dz!r} h={grid.h!r} field={field_name}"
        )
        buffer = io.StringIO()
        # 17 significant digits round-trip float64 exactly
        np.savetxt(buffer, data.T, fmt="%.17g", delimiter=",", header=header, comments="# ")
        return buffer.getvalue().encode("utf-8")

    def _parse_header(self, line: str) -> Dict[str, str]:
        if not line.startswith("#"):
            raise FormatError("CSV snapshot file must start with a '#' header")
        head, _, field_name = line[1:].partition("field=")
        fields = dict(_PAIR.findall(head))
        missing = {"ny", "nz", "N"} - fields.keys()
        if missing:
            raise FormatError(f"header is missing {sorted(missing)}")
        fields["field"] = field_name.strip() or "field"
        return fields

    def loads(self, payload: bytes) -> SnapshotFrame:
        try:
            text = payload.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError("CSV snapshot file is not valid UTF-8") from exc
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise FormatError("empty snapshot file")

        fields = self._parse_header(lines[0])
        try:
            n_snapshots = int(fields["N"])
            grid = Grid(
                n_y=int(fields["ny"]),
                n_z=int(fields["nz"]),
                dy=float(fields.get("dy", self.default_dy)),
                dz=float(fields.get("dz", self.default_dz)),
                h=float(fields.get("h", self.default_h)),
            )
        except (ValueError, ValidationError) as exc:
            raise FormatError(f"invalid header: {exc}") from exc

        rows = lines[1:]
        if len(rows) != n_snapshots:
            raise LengthError(f"header promises {n_snapshots} snapshots, found {len(rows)}")
        if not rows:
            raise LengthError("snapshot file has a header but no snapshots")
        try:
            table = np.loadtxt(io.StringIO("\n".join(rows)), delimiter=",", ndmin=2)
        except ValueError as exc:
            raise FormatError(f"malformed snapshot rows: {exc}") from exc
        if table.shape[1] != grid.p:
            raise LengthError(f"snapshots have {table.shape[1]} values, expected {grid.p}")
        if not np.all(np.isfinite(table)):
            bad = int(np.flatnonzero(~np.isfinite(table).all(axis=1))[0])
            raise DataError(f"snapshot {bad} contains NaN or Inf")
        return SnapshotFrame(grid, np.ascontiguousarray(table.T), fields["field"])
