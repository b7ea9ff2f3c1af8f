"""SNPB v1 little-endian snapshot files.

Layout: magic ``SNPB``, u32 version, u32 n_y, u32 n_z, u32 N, f64 dy,
f64 dz, f64 h, u32 byte length + UTF-8 field name, then p*N f64 values,
one flattened snapshot after another in time order.
"""
from struct import Struct

import numpy as np
from pydantic import ValidationError

from app.core.errors import DataError, FormatError, LengthError
from app.schemas.grid import Grid
from app.storage.base import SnapshotCodec, SnapshotFrame

MAGIC = b"SNPB"
VERSION = 1

_HEADER = Struct("<4sIIIIddd")
_NAME_LENGTH = Struct("<I")


class BinaryCodec(SnapshotCodec):
    """SNPB implementation of the SnapshotCodec interface"""

    def dumps(self, grid: Grid, data: np.ndarray, field_name: str) -> bytes:
        data = np.asarray(data, dtype="<f8")
        if data.ndim != 2 or data.shape[0] != grid.p:
            raise LengthError(f"expected {grid.p} rows, got shape {data.shape}")
        name = field_name.encode("utf-8")
        header = _HEADER.pack(
            MAGIC, VERSION, grid.n_y, grid.n_z, data.shape[1], grid.dy, grid.dz, grid.h
        )
        # rows of data.T are snapshots
        return header + _NAME_LENGTH.pack(len(name)) + name + data.T.tobytes()

    def loads(self, payload: bytes) -> SnapshotFrame:
        if len(payload) < _HEADER.size + _NAME_LENGTH.size:
            raise FormatError("file too short for an SNPB header")
        magic, version, n_y, n_z, n_snapshots, dy, dz, h = _HEADER.unpack_from(payload)
        if magic != MAGIC:
            raise FormatError(f"bad magic bytes {magic!r}")
        if version != VERSION:
            raise FormatError(f"unsupported SNPB version {version}")
        try:
            grid = Grid(n_y=n_y, n_z=n_z, dy=dy, dz=dz, h=h)
        except ValidationError as exc:
            raise FormatError(f"invalid grid in header: {exc}") from exc

        offset = _HEADER.size
        (name_length,) = _NAME_LENGTH.unpack_from(payload, offset)
        offset += _NAME_LENGTH.size
        if len(payload) < offset + name_length:
            raise LengthError("field name runs past the end of the file")
        try:
            field_name = payload[offset : offset + name_length].decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError("field name is not valid UTF-8") from exc
        offset += name_length

        expected = grid.p * n_snapshots * 8
        available = len(payload) - offset
        if available != expected:
            raise LengthError(
                f"header promises {expected} payload bytes, file has {available}"
            )
        values = np.frombuffer(payload, dtype="<f8", count=grid.p * n_snapshots, offset=offset)
        if not np.all(np.isfinite(values)):
            raise DataError("payload contains NaN or Inf")
        data = values.reshape(n_snapshots, grid.p).T.astype(np.float64)
        return SnapshotFrame(grid, data, field_name)
