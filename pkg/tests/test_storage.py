import csv
import json

import numpy as np
import pytest

from app.core import snapshot_data
from app.core.errors import DataError, FormatError, LengthError
from app.repositories.artifact_repository import ArtifactRepository, format_cell, to_plain
from app.schemas.grid import Grid
from app.schemas.snapshot import SnapshotMatrix
from app.storage import CodecFactory, SnapshotFormat
from app.storage.binary import BinaryCodec
from app.storage.text import CsvCodec
from config.config import settings


@pytest.fixture
def matrix():
    grid = Grid(n_y=3, n_z=2, dy=0.5, dz=20 / 96, h=30.0)
    data = np.random.default_rng(4).standard_normal((6, 5)) * 1e3
    return SnapshotMatrix(grid=grid, data=data, field_name="vorticity")


@pytest.mark.parametrize("suffix", ["snpb", "csv"])
def test_round_trip_is_bit_exact(tmp_path, matrix, suffix):
    path = tmp_path / f"data.{suffix}"
    snapshot_data.save_snapshots(matrix, path)
    loaded = snapshot_data.load_snapshots(path)
    assert loaded.grid == matrix.grid
    assert loaded.field_name == "vorticity"
    assert loaded.data.tobytes() == matrix.data.tobytes()


def test_snpb_header_layout(matrix):
    payload = BinaryCodec().dumps(matrix.grid, matrix.data, matrix.field_name)
    assert payload[:4] == b"SNPB"
    assert int.from_bytes(payload[4:8], "little") == 1
    # header, name length, name, then p * N doubles
    assert len(payload) == 44 + 4 + len("vorticity") + 6 * 5 * 8


def test_snpb_full_size_header():
    grid = Grid(n_y=40, n_z=97, dy=0.5, dz=20 / 96, h=30.0)
    data = np.zeros((3880, 121))
    frame = BinaryCodec().loads(BinaryCodec().dumps(grid, data, "u"))
    assert frame.data.shape == (3880, 121)


def test_snpb_truncated_payload(matrix):
    payload = BinaryCodec().dumps(matrix.grid, matrix.data, matrix.field_name)
    with pytest.raises(LengthError):
        BinaryCodec().loads(payload[:-8])


def test_snpb_bad_magic_and_empty(matrix):
    payload = BinaryCodec().dumps(matrix.grid, matrix.data, matrix.field_name)
    with pytest.raises(FormatError):
        BinaryCodec().loads(b"NOPE" + payload[4:])
    with pytest.raises(FormatError):
        BinaryCodec().loads(b"")


def test_snpb_rejects_non_finite(matrix):
    data = np.array(matrix.data)
    data[2, 3] = np.inf
    payload = BinaryCodec().dumps(matrix.grid, data, matrix.field_name)
    with pytest.raises(DataError):
        BinaryCodec().loads(payload)


def test_csv_legacy_header_uses_default_geometry():
    text = "# ny=2 nz=2 N=2\n1,2,3,4\n5,6,7,8\n"
    frame = CodecFactory.create_codec(SnapshotFormat.CSV).loads(text.encode())
    assert frame.grid.dy == settings.DEFAULT_DY
    assert frame.grid.dz == settings.DEFAULT_DZ
    assert frame.grid.h == settings.DEFAULT_H
    np.testing.assert_array_equal(frame.data[:, 1], [5, 6, 7, 8])


def test_csv_errors():
    codec = CsvCodec(default_dy=1.0, default_dz=1.0, default_h=1.0)
    with pytest.raises(FormatError):
        codec.loads(b"")
    with pytest.raises(FormatError):
        codec.loads(b"1,2,3,4\n")
    with pytest.raises(LengthError):
        codec.loads(b"# ny=2 nz=2 N=3\n1,2,3,4\n5,6,7,8\n")
    with pytest.raises(LengthError):
        codec.loads(b"# ny=2 nz=2 N=1\n1,2,3\n")
    with pytest.raises(DataError):
        codec.loads(b"# ny=2 nz=2 N=1\n1,nan,3,4\n")
    with pytest.raises(FormatError):
        codec.loads(b"# ny=2 nz=2 N=2\n1,2,3,4\n5,6\n")
    with pytest.raises(FormatError):
        codec.loads(b"# ny=2 nz=2 N=1\n1,x,3,4\n")


def test_format_inferred_from_suffix():
    assert CodecFactory.infer_format("a/b.CSV") == SnapshotFormat.CSV
    assert CodecFactory.infer_format("a/b.snpb") == SnapshotFormat.SNPB
    assert CodecFactory.infer_format("a/b") == SnapshotFormat.SNPB


def test_to_plain_and_cells():
    assert to_plain(np.array([1 + 2j])) == [[1.0, 2.0]]
    assert to_plain(float("inf")) == "Inf"
    assert to_plain(np.float64("nan")) is None
    assert format_cell(0.1) == "0.1"
    assert format_cell(float("nan")) == "nan"
    assert format_cell(True) == "true"


def test_repository_writes_artifacts(tmp_path, matrix):
    repository = ArtifactRepository(tmp_path / "out")
    repository.write_json("doc.json", {"b": np.array([1j]), "period": np.inf})
    repository.write_csv("table.csv", ["k", "value"], [(0, 0.1), (1, 1 / 3)])
    repository.write_matrix("modes.snpb", matrix.grid, matrix.data[:, :1], "modes")

    assert json.loads((tmp_path / "out" / "doc.json").read_text()) == {
        "b": [[0.0, 1.0]],
        "period": "Inf",
    }
    with open(tmp_path / "out" / "table.csv", newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows == [["k", "value"], ["0", "0.1"], ["1", repr(1 / 3)]]
    frame = BinaryCodec().read(tmp_path / "out" / "modes.snpb")
    assert frame.data.shape == (6, 1)
    assert len(repository.written) == 3


def test_csv_codec_requires_default_geometry(monkeypatch):
    monkeypatch.setattr(settings, "DEFAULT_DY", None)
    with pytest.raises(ValueError, match="DEFAULT_DY"):
        CodecFactory.create_codec(SnapshotFormat.CSV)
