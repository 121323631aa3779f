"""Runtime values carried in messages and stored in attribute environments.

Values are plain Python objects: ``int``, ``bool``, ``str``, ``frozenset`` (sets),
``tuple`` and the :data:`UNDEF` singleton.  Python treats ``True == 1``; AbC does
not, so every comparison goes through :func:`value_key`, which tags each value
with its kind.
"""

from __future__ import annotations

import json
from typing import Any, Iterable


class _Undef:
    """The undefined value, written ``undef`` in source and shown as ``⊥``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEF"

    def __reduce__(self):
        return "UNDEF"


UNDEF = _Undef()


def is_value(v: Any) -> bool:
    if v is UNDEF or isinstance(v, (bool, int, str)):
        return True
    if isinstance(v, (tuple, frozenset)):
        return all(is_value(x) for x in v)
    return False


def kind(v: Any) -> str:
    if v is UNDEF:
        return "undef"
    if isinstance(v, bool):
        return "bool"
    if isinstance(v, int):
        return "int"
    if isinstance(v, str):
        return "str"
    if isinstance(v, frozenset):
        return "set"
    if isinstance(v, tuple):
        return "tuple"
    raise TypeError(f"not an AbC value: {v!r}")


def value_key(v: Any) -> tuple:
    """Total, kind-tagged ordering key; two values are equal iff their keys are."""
    if v is UNDEF:
        return (0,)
    if isinstance(v, bool):
        return (1, v)
    if isinstance(v, int):
        return (2, v)
    if isinstance(v, str):
        return (3, v)
    if isinstance(v, tuple):
        return (4, tuple(value_key(x) for x in v))
    if isinstance(v, frozenset):
        return (5, tuple(sorted(value_key(x) for x in v)))
    raise TypeError(f"not an AbC value: {v!r}")


def value_eq(a: Any, b: Any) -> bool:
    return value_key(a) == value_key(b)


def make_set(items: Iterable[Any]) -> frozenset:
    return frozenset(items)


def sorted_elements(s: frozenset) -> list:
    return sorted(s, key=value_key)


def format_value(v: Any) -> str:
    """Render a value in the concrete syntax accepted by the parser."""
    if v is UNDEF:
        return "undef"
    if isinstance(v, bool):
        return "tt" if v else "ff"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, frozenset):
        return "{" + ", ".join(format_value(x) for x in sorted_elements(v)) + "}"
    if isinstance(v, tuple):
        return "<" + ", ".join(format_value(x) for x in v) + ">"
    raise TypeError(f"not an AbC value: {v!r}")


def encode_value(v: Any) -> dict:
    """JSON form used by traces: ``{"int": 3}``, ``{"set": [...]}``, ``{"undef": true}``..."""
    k = kind(v)
    if k == "undef":
        return {"undef": True}
    if k == "set":
        return {"set": [encode_value(x) for x in sorted_elements(v)]}
    if k == "tuple":
        return {"tuple": [encode_value(x) for x in v]}
    return {k: v}


def decode_value(obj: dict) -> Any:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"malformed encoded value: {obj!r}")
    (k, payload), = obj.items()
    if k == "undef":
        return UNDEF
    if k == "bool":
        return bool(payload)
    if k == "int":
        return int(payload)
    if k == "str":
        return str(payload)
    if k == "set":
        return frozenset(decode_value(x) for x in payload)
    if k == "tuple":
        return tuple(decode_value(x) for x in payload)
    raise ValueError(f"unknown value tag {k!r}")
