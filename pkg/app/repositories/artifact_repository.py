import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Iterable, List, Sequence

import numpy as np

from app.schemas.grid import Grid
from app.storage.factory import CodecFactory, SnapshotFormat

logger = logging.getLogger(__name__)


def to_plain(value: Any) -> Any:
    """Convert numpy and complex values into JSON-ready builtins.

    Complex numbers become [re, im]; infinities become "Inf" as in the
    published mode tables; NaN becomes null.
    """
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [to_plain(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [to_plain(float(value.real)), to_plain(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "Inf" if value > 0 else "-Inf"
        return value
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "value"):
        return value.value
    return value


def format_cell(value: Any) -> str:
    plain = to_plain(value)
    if plain is None:
        return "nan"
    if isinstance(plain, float):
        return repr(plain)
    if isinstance(plain, bool):
        return "true" if plain else "false"
    return str(plain)


class ArtifactRepository:
    """Writes report artifacts into one output directory"""

    def __init__(self, out_dir: Path, matrix_format: SnapshotFormat = SnapshotFormat.SNPB):
        """
        Initialize repository with an output directory

        Args:
            out_dir: Directory receiving every artifact, created if missing
            matrix_format: Codec used for matrix artifacts
        """
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.codec = CodecFactory.create_codec(matrix_format)
        self.written: List[Path] = []

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def _record(self, path: Path) -> Path:
        self.written.append(path)
        logger.info("wrote %s", path)
        return path

    def write_json(self, name: str, document: Any) -> Path:
        """
        Write a JSON document with a fixed key order

        Args:
            name: File name inside the output directory
            document: Mapping or sequence, numpy values allowed

        Returns:
            Path of the written file
        """
        text = json.dumps(to_plain(document), indent=2, allow_nan=False) + "\n"
        path = self.path(name)
        path.write_text(text, encoding="utf-8")
        return self._record(path)

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        """
        Write a CSV table, floats in shortest round-trip form

        Args:
            name: File name inside the output directory
            header: Column names
            rows: Row values

        Returns:
            Path of the written file
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(value) for value in row])
        path = self.path(name)
        path.write_text(buffer.getvalue(), encoding="utf-8")
        return self._record(path)

    def write_matrix(self, name: str, grid: Grid, data: np.ndarray, field_name: str) -> Path:
        """Write a p x K real matrix through the snapshot codec"""
        path = self.path(name)
        self.codec.write(path, grid, np.asarray(data, dtype=float), field_name)
        return self._record(path)
