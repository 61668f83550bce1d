"""Entity-level persistence: chained context records, chronicles, users.

Contexts pack into entities of up to CHUNK quintuples.  A child extends its
parent's entity in place when the parent is the current tail, the owner
matches, and the chain has room; otherwise it starts a new entity.  The
random ids and the clock are injectable so stores can be reproduced byte for
byte in tests.
"""

import random
import time

from ..errors import StorageFailure, UnknownContext, UnknownParent
from ..refs import ContextRef
from . import codec

CHUNK = 64

_CTX = "ctx:"
_CHR = "chr:"
_USER = "user:"
_META = "meta:"


def _default_clock():
    return int(time.time() * 1000)


class EntityStore:
    def __init__(self, backend, rng=None, clock=None, version="0.1.0"):
        self.backend = backend
        self.rng = rng if rng is not None else random.Random()
        self.clock = clock if clock is not None else _default_clock
        self.version = version

    # ------------------------------------------------------------ contexts

    def _new_key(self):
        while True:
            key = f"{self.rng.getrandbits(128):032x}"
            if self.backend.get(_CTX + key) is None:
                return key

    def load_entity(self, entity_key):
        data = self.backend.get(_CTX + entity_key)
        if data is None:
            return None
        return codec.decode_entity(data)

    def append_context(self, parent, owner, kind, C, A, V, U):
        """Store one context; returns its ContextRef.

        parent is a ContextRef or None (root only).
        """
        quintuple = codec.enc_quintuple(kind, C, A, V, U)
        if parent is not None:
            pent = self.load_entity(parent.entity)
            if pent is None:
                raise UnknownParent(f"no entity {parent.entity}")
            if parent.index >= len(pent["chain"]):
                raise UnknownParent(f"no context {parent}")
            if (
                parent.index == len(pent["chain"]) - 1
                and len(pent["chain"]) < CHUNK
                and pent["owner"] == owner
            ):
                pent["chain"].append(quintuple)
                self.backend.put(_CTX + parent.entity, codec.encode_entity(pent))
                return ContextRef(parent.entity, parent.index + 1)
        key = self._new_key()
        entity = {
            "v": codec.FORMAT_VERSION,
            "id": key,
            "parent_id": None if parent is None else parent.entity,
            "parent_index": None if parent is None else parent.index,
            "owner": owner,
            "timestamp": self.clock(),
            "proofpeerversion": self.version,
            "chain": [quintuple],
        }
        self.backend.put(_CTX + key, codec.encode_entity(entity))
        return ContextRef(key, 0)

    def replace_context(self, ref, kind, C, A, V, U):
        """Swap one chain element in place.

        Only used while a context is being built: fact theorems reference the
        context's own ref, which exists only after the first append.
        """
        entity = self.load_entity(ref.entity)
        if entity is None or not (0 <= ref.index < len(entity["chain"])):
            raise UnknownContext(f"no context {ref}")
        entity["chain"][ref.index] = codec.enc_quintuple(kind, C, A, V, U)
        self.backend.put(_CTX + ref.entity, codec.encode_entity(entity))

    def load_context(self, ref):
        """Returns (kind, C, A, V, U, parent_ref, owner) for one context."""
        entity = self.load_entity(ref.entity)
        if entity is None:
            raise UnknownContext(f"no entity {ref.entity}")
        if not (0 <= ref.index < len(entity["chain"])):
            raise UnknownContext(f"no context {ref}")
        kind, C, A, V, U = codec.dec_quintuple(entity["chain"][ref.index])
        if ref.index == 0:
            if entity["parent_id"] is None:
                parent = None
            else:
                parent = ContextRef(entity["parent_id"], entity["parent_index"])
        else:
            parent = ContextRef(ref.entity, ref.index - 1)
        return kind, C, A, V, U, parent, entity["owner"]

    def context_exists(self, ref):
        entity = self.load_entity(ref.entity)
        return entity is not None and 0 <= ref.index < len(entity["chain"])

    def all_context_keys(self):
        return [k[len(_CTX):] for k in self.backend.keys() if k.startswith(_CTX)]

    # ----------------------------------------------------------- chronicles

    def put_chronicle(self, record):
        key = _CHR + record["owner"] + ":" + record["name"]
        self.backend.put(key, codec.dumps(record))

    def get_chronicle(self, owner, name):
        data = self.backend.get(_CHR + owner + ":" + name)
        if data is None:
            return None
        return codec.loads(data)

    def list_chronicles(self):
        out = []
        for key in sorted(self.backend.keys()):
            if key.startswith(_CHR):
                out.append(codec.loads(self.backend.get(key)))
        return out

    # ---------------------------------------------------------------- users

    def put_user(self, record):
        self.backend.put(_USER + record["login"], codec.dumps(record))

    def get_user(self, login):
        data = self.backend.get(_USER + login)
        if data is None:
            return None
        return codec.loads(data)

    def list_users(self):
        out = []
        for key in sorted(self.backend.keys()):
            if key.startswith(_USER):
                out.append(codec.loads(self.backend.get(key)))
        return out

    # ----------------------------------------------------------------- meta

    def put_meta(self, name, obj):
        self.backend.put(_META + name, codec.dumps(obj))

    def get_meta(self, name):
        data = self.backend.get(_META + name)
        if data is None:
            return None
        return codec.loads(data)
