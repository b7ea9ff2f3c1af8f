from app.storage.base import SnapshotCodec, SnapshotFrame
from app.storage.factory import CodecFactory, SnapshotFormat

__all__ = ["SnapshotCodec", "SnapshotFrame", "CodecFactory", "SnapshotFormat"]
