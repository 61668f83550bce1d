"""Canonical serialization of entities, terms, and script values.

Everything is JSON with sorted keys and no whitespace, so equal structures
always produce equal bytes.  The entity format is versioned; decoding rejects
unknown versions and unknown fields instead of guessing.
"""

import json

from ..errors import CodecError
from ..kernel import consts
from ..kernel.terms import App, Const, Lam, Term, Var
from ..kernel.theorems import Theorem, _mint
from ..kernel.types import PROP, SET, Fun, LogicType
from ..refs import ContextRef
from .. import values as V

FORMAT_VERSION = 1

_ENTITY_FIELDS = {
    "v", "id", "parent_id", "parent_index", "owner", "timestamp",
    "proofpeerversion", "chain",
}


def dumps(obj):
    return json.dumps(
        obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True
    ).encode("utf-8")


def loads(data):
    try:
        return json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CodecError(f"malformed record: {e}") from None


# ---------------------------------------------------------------- types

def enc_type(ty):
    if ty == SET:
        return "set"
    if ty == PROP:
        return "prop"
    if isinstance(ty, Fun):
        return [enc_type(ty.dom), enc_type(ty.cod)]
    raise CodecError(f"not a logical type: {ty!r}")


def dec_type(obj):
    if obj == "set":
        return SET
    if obj == "prop":
        return PROP
    if isinstance(obj, list) and len(obj) == 2:
        return Fun(dec_type(obj[0]), dec_type(obj[1]))
    raise CodecError(f"malformed type: {obj!r}")


# ---------------------------------------------------------------- terms

def enc_term(t):
    if isinstance(t, Var):
        return ["v", t.index]
    if isinstance(t, Const):
        if t.instance is None:
            return ["c", t.name]
        return ["c", t.name, enc_type(t.instance)]
    if isinstance(t, Lam):
        return ["l", enc_type(t.domain), enc_term(t.body)]
    if isinstance(t, App):
        return ["a", enc_term(t.fun), enc_term(t.arg)]
    raise CodecError(f"not a term: {t!r}")


def dec_term(obj):
    if not isinstance(obj, list) or not obj:
        raise CodecError(f"malformed term: {obj!r}")
    tag = obj[0]
    try:
        if tag == "v" and len(obj) == 2:
            return Var(obj[1])
        if tag == "c" and len(obj) in (2, 3):
            inst = dec_type(obj[2]) if len(obj) == 3 else None
            return Const(obj[1], inst)
        if tag == "l" and len(obj) == 3:
            return Lam(dec_type(obj[1]), dec_term(obj[2]))
        if tag == "a" and len(obj) == 3:
            return App(dec_term(obj[1]), dec_term(obj[2]))
    except (ValueError, TypeError) as e:
        raise CodecError(f"malformed term: {e}") from None
    raise CodecError(f"malformed term: {obj!r}")


# ---------------------------------------------------------------- refs

def enc_ref(ref):
    return f"{ref.entity}/{ref.index}"


def dec_ref(text):
    try:
        return ContextRef.parse(text)
    except (ValueError, AttributeError):
        raise CodecError(f"malformed context reference: {text!r}") from None


# ---------------------------------------------------------------- values

def enc_value(v):
    if isinstance(v, V.IntVal):
        return {"t": "int", "v": v.value}
    if isinstance(v, V.StrVal):
        return {"t": "str", "v": v.value}
    if isinstance(v, V.BoolVal):
        return {"t": "bool", "v": v.value}
    if isinstance(v, V.TypeVal):
        return {"t": "type", "v": enc_type(v.ty)}
    if isinstance(v, V.TermVal):
        return {"t": "term", "v": enc_term(v.term), "ref": enc_ref(v.ref)}
    if isinstance(v, V.ThmVal):
        return {
            "t": "thm",
            "v": enc_term(v.thm.proposition),
            "ref": enc_ref(v.thm.context_ref),
        }
    if isinstance(v, V.CtxVal):
        return {"t": "ctx", "ref": enc_ref(v.ref)}
    if isinstance(v, V.ListVal):
        return {"t": "list", "v": [enc_value(x) for x in v.items]}
    if isinstance(v, V.VectorVal):
        return {"t": "vector", "v": [enc_value(x) for x in v.items]}
    if isinstance(v, V.SetVal):
        return {"t": "set", "v": [enc_value(x) for x in v.items]}
    if isinstance(v, V.MapVal):
        return {
            "t": "map",
            "v": [[enc_value(k), enc_value(x)] for k, x in v.pairs],
        }
    if isinstance(v, V.FunVal):
        return {"t": "fun", "src": v.source, "ref": enc_ref(v.ctx_ref)}
    raise CodecError(f"cannot encode value {v!r}")


def dec_value(obj):
    if not isinstance(obj, dict) or "t" not in obj:
        raise CodecError(f"malformed value: {obj!r}")
    tag = obj["t"]
    if tag == "int":
        return V.IntVal(obj["v"])
    if tag == "str":
        return V.StrVal(obj["v"])
    if tag == "bool":
        return V.BoolVal(obj["v"])
    if tag == "type":
        return V.TypeVal(dec_type(obj["v"]))
    if tag == "term":
        return V.TermVal(dec_term(obj["v"]), dec_ref(obj["ref"]))
    if tag == "thm":
        return V.ThmVal(_mint(dec_term(obj["v"]), dec_ref(obj["ref"])))
    if tag == "ctx":
        return V.CtxVal(dec_ref(obj["ref"]))
    if tag == "list":
        return V.ListVal([dec_value(x) for x in obj["v"]])
    if tag == "vector":
        return V.VectorVal([dec_value(x) for x in obj["v"]])
    if tag == "set":
        return V.SetVal([dec_value(x) for x in obj["v"]])
    if tag == "map":
        return V.MapVal([(dec_value(k), dec_value(x)) for k, x in obj["v"]])
    if tag == "fun":
        # Re-hydrated lazily: the interpreter parses src on first call.
        return V.FunVal(
            name="", params=(), body=None, captured={}, group={},
            ctx_ref=dec_ref(obj["ref"]), source=obj["src"],
        )
    raise CodecError(f"unknown value tag {tag!r}")


# ---------------------------------------------------------------- entities

def enc_quintuple(kind, C, A, Vmap, U):
    return [
        kind,
        [[name, enc_type(ty)] for name, ty in C],
        [enc_term(a) for a in A],
        {name: enc_value(val) for name, val in Vmap.items()},
        sorted(U),
    ]


def dec_quintuple(obj):
    if not isinstance(obj, list) or len(obj) != 5:
        raise CodecError("chain elements must be (kind, C, A, V, U)")
    kind, C, A, Vmap, U = obj
    return (
        kind,
        tuple((name, dec_type(ty)) for name, ty in C),
        tuple(dec_term(a) for a in A),
        {name: dec_value(val) for name, val in Vmap.items()},
        frozenset(U),
    )


def encode_entity(entity):
    unknown = set(entity) - _ENTITY_FIELDS
    if unknown:
        raise CodecError(f"unknown entity fields: {sorted(unknown)}")
    if not entity.get("chain"):
        raise CodecError("entity chain must be non-empty")
    return dumps(entity)


def decode_entity(data):
    obj = loads(data)
    if not isinstance(obj, dict):
        raise CodecError("entity record must be an object")
    if obj.get("v") != FORMAT_VERSION:
        raise CodecError(f"unsupported entity version {obj.get('v')!r}")
    unknown = set(obj) - _ENTITY_FIELDS
    if unknown:
        raise CodecError(f"unknown entity fields: {sorted(unknown)}")
    if not obj.get("chain"):
        raise CodecError("entity chain must be non-empty")
    return obj
