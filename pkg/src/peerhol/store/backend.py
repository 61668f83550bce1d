"""Key-value backends behind the entity store.

Two implementations share one tiny interface: an in-memory map for tests and
a log-structured single file for real use.  The file is replayed into memory
on open; every put appends a record, so earlier states stay in the file and
the newest record for a key wins.
"""

import hashlib
import os
import struct

from ..errors import StorageFailure

MAGIC = b"PEERHOLSTORE0001"  # 16 bytes, includes the format version


class MemoryBackend:
    def __init__(self):
        self.data = {}

    def get(self, key):
        return self.data.get(key)

    def put(self, key, value):
        if not isinstance(value, bytes):
            raise StorageFailure("backend values must be bytes")
        self.data[key] = value

    def keys(self):
        return list(self.data.keys())

    def close(self):
        pass


class FileBackend:
    """Single-file append log: MAGIC, then [keylen][key][vallen][val]* with
    little-endian 32-bit lengths."""

    def __init__(self, path):
        self.path = path
        self.data = {}
        exists = os.path.exists(path) and os.path.getsize(path) > 0
        if exists:
            self._replay()
            self._fh = open(path, "ab")
        else:
            os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
            self._fh = open(path, "ab")
            if self._fh.tell() == 0:
                self._fh.write(MAGIC)
                self._fh.flush()

    def _replay(self):
        with open(self.path, "rb") as fh:
            head = fh.read(len(MAGIC))
            if head != MAGIC:
                raise StorageFailure(f"{self.path} is not a store file")
            while True:
                raw = fh.read(4)
                if not raw:
                    break
                if len(raw) < 4:
                    raise StorageFailure("truncated record header")
                (klen,) = struct.unpack("<I", raw)
                key = fh.read(klen)
                raw = fh.read(4)
                if len(key) < klen or len(raw) < 4:
                    raise StorageFailure("truncated record")
                (vlen,) = struct.unpack("<I", raw)
                val = fh.read(vlen)
                if len(val) < vlen:
                    raise StorageFailure("truncated record body")
                self.data[key.decode("utf-8")] = val

    def get(self, key):
        return self.data.get(key)

    def put(self, key, value):
        if not isinstance(value, bytes):
            raise StorageFailure("backend values must be bytes")
        kb = key.encode("utf-8")
        self._fh.write(struct.pack("<I", len(kb)))
        self._fh.write(kb)
        self._fh.write(struct.pack("<I", len(value)))
        self._fh.write(value)
        self._fh.flush()
        self.data[key] = value

    def keys(self):
        return list(self.data.keys())

    def close(self):
        self._fh.close()


def snapshot_hash(backend):
    """Hash of the whole visible key-value state, for append-only audits."""
    h = hashlib.sha256()
    for key in sorted(backend.keys()):
        h.update(key.encode("utf-8"))
        h.update(b"\x00")
        h.update(backend.get(key))
        h.update(b"\x01")
    return h.hexdigest()
