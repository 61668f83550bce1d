"""Append-only persistence of contexts, chronicles, and users."""

from .backend import FileBackend, MemoryBackend, snapshot_hash
from .entities import CHUNK, EntityStore
from . import codec

__all__ = [
    "CHUNK",
    "EntityStore",
    "FileBackend",
    "MemoryBackend",
    "codec",
    "snapshot_hash",
]
