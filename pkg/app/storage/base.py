from abc import ABC, abstractmethod
from pathlib import Path
from typing import NamedTuple, Union

import numpy as np

from app.schemas.grid import Grid


class SnapshotFrame(NamedTuple):
    """Decoded file contents: a grid, a p x N matrix and its label"""

    grid: Grid
    data: np.ndarray
    field_name: str


class SnapshotCodec(ABC):
    """Abstract snapshot file codec that can be implemented for different formats"""

    @abstractmethod
    def dumps(self, grid: Grid, data: np.ndarray, field_name: str) -> bytes:
        """Encode a p x N matrix"""
        pass

    @abstractmethod
    def loads(self, payload: bytes) -> SnapshotFrame:
        """Decode a payload produced by ``dumps``"""
        pass

    def write(
        self, path: Union[str, Path], grid: Grid, data: np.ndarray, field_name: str
    ) -> None:
        Path(path).write_bytes(self.dumps(grid, data, field_name))

    def read(self, path: Union[str, Path]) -> SnapshotFrame:
        return self.loads(Path(path).read_bytes())
