from enum import Enum
from pathlib import Path
from typing import Union

from app.storage.base import SnapshotCodec
from app.storage.binary import BinaryCodec
from app.storage.text import CsvCodec
from app.utils import require_setting
from config.config import settings


class SnapshotFormat(str, Enum):
    """Supported snapshot file formats"""

    SNPB = "snpb"
    CSV = "csv"


class CodecFactory:
    """Factory for creating snapshot codecs"""

    @staticmethod
    def create_codec(fmt: SnapshotFormat) -> SnapshotCodec:
        """
        Create a codec for the specified format

        Args:
            fmt: File format to read or write

        Returns:
            Configured codec
        """
        if fmt == SnapshotFormat.SNPB:
            return BinaryCodec()
        elif fmt == SnapshotFormat.CSV:
            return CsvCodec(
                default_dy=require_setting(settings, "DEFAULT_DY"),
                default_dz=require_setting(settings, "DEFAULT_DZ"),
                default_h=require_setting(settings, "DEFAULT_H"),
            )
        raise ValueError(f"Unsupported snapshot format: {fmt}")

    @staticmethod
    def infer_format(path: Union[str, Path]) -> SnapshotFormat:
        """CSV for a ``.csv`` suffix, SNPB otherwise"""
        return SnapshotFormat.CSV if Path(path).suffix.lower() == ".csv" else SnapshotFormat.SNPB
