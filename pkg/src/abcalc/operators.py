"""Builtin expression operators and atomic relations.

Operators must be pure.  Ill-typed or undefined operands raise :class:`EvalFault`;
the semantics decides whether that means "unsatisfied" or "abort".
"""

from __future__ import annotations

from typing import Any, Callable

from .errors import EvalFault
from .values import UNDEF, kind, value_eq


def _ints(name, *args):
    for a in args:
        if not (isinstance(a, int) and not isinstance(a, bool)):
            raise EvalFault(f"{name}: expected int operands, got {[kind(x) for x in args]}")
    return args


def _set(name, s):
    if not isinstance(s, frozenset):
        raise EvalFault(f"{name}: expected a set, got {kind(s)}")
    return s


def _add(a, b):
    _ints("+", a, b)
    return a + b


def _sub(a, b):
    _ints("-", a, b)
    return a - b


def _mul(a, b):
    _ints("*", a, b)
    return a * b


def _mod(a, b):
    _ints("%", a, b)
    if b == 0:
        raise EvalFault("%: modulo by zero")
    return a % b


def _neg(a):
    _ints("neg", a)
    return -a


def _union(a, b):
    return _set("union", a) | _set("union", b)


def _insert(s, e):
    if e is UNDEF:
        raise EvalFault("insert: undef element")
    return _set("insert", s) | {e}


def _minex(s):
    """Least natural number not in ``s``."""
    _set("minex", s)
    ints = {x for x in s if isinstance(x, int) and not isinstance(x, bool)}
    i = 0
    while i in ints:
        i += 1
    return i


def _card(s):
    if isinstance(s, (frozenset, tuple)):
        return len(s)
    raise EvalFault(f"card: expected a set or tuple, got {kind(s)}")


def _rank(y):
    # cluster preference over unit demand
    return 1 if value_eq(y, "H") else 0


_LCG_MOD = 2 ** 31


def _nextrand(r):
    _ints("nextrand", r)
    return (r * 1103515245 + 12345) % _LCG_MOD


def _angle(r):
    # heading in milliradians, [0, 2*pi)
    _ints("angle", r)
    return r % 6284


def _mkset(*items):
    if any(x is UNDEF for x in items):
        raise EvalFault("set literal: undef element")
    return frozenset(items)


def _mktuple(*items):
    return tuple(items)


OPERATORS: dict[str, tuple[Callable[..., Any], int | None]] = {
    "+": (_add, 2),
    "-": (_sub, 2),
    "*": (_mul, 2),
    "%": (_mod, 2),
    "neg": (_neg, 1),
    "union": (_union, 2),
    "insert": (_insert, 2),
    "minex": (_minex, 1),
    "card": (_card, 1),
    "rank": (_rank, 1),
    "nextrand": (_nextrand, 1),
    "angle": (_angle, 1),
    "set": (_mkset, None),
    "tuple": (_mktuple, None),
}

INFIX = {"+": 1, "-": 1, "*": 2, "%": 2}


def register_operator(name: str, fn: Callable[..., Any], arity: int | None = None):
    """Register a pure helper usable as ``name(e1, ..., en)`` in programs."""
    if name in INFIX or name in ("set", "tuple"):
        raise ValueError(f"cannot redefine operator {name!r}")
    OPERATORS[name] = (fn, arity)


def apply_operator(name: str, args: list) -> Any:
    try:
        fn, arity = OPERATORS[name]
    except KeyError:
        raise EvalFault(f"unknown operator {name!r}") from None
    if arity is not None and len(args) != arity:
        raise EvalFault(f"{name}: expected {arity} arguments, got {len(args)}")
    if name not in ("tuple",) and any(a is UNDEF for a in args):
        raise EvalFault(f"{name}: undef operand")
    try:
        return fn(*args)
    except EvalFault:
        raise
    except (TypeError, ValueError, ArithmeticError) as exc:
        raise EvalFault(f"{name}: {exc}") from exc


def _ordered(name, a, b):
    if kind(a) != kind(b) or kind(a) not in ("int", "str"):
        raise EvalFault(f"{name}: incomparable operands {kind(a)} and {kind(b)}")


def _lt(a, b):
    _ordered("<", a, b)
    return a < b


def _le(a, b):
    _ordered("<=", a, b)
    return a <= b


def _gt(a, b):
    _ordered(">", a, b)
    return a > b


def _ge(a, b):
    _ordered(">=", a, b)
    return a >= b


def _member(a, s):
    if not isinstance(s, (frozenset, tuple)):
        raise EvalFault(f"in: expected a set, got {kind(s)}")
    return any(value_eq(a, x) for x in s)


RELATIONS: dict[str, Callable[..., bool]] = {
    "=": value_eq,
    "!=": lambda a, b: not value_eq(a, b),
    "<": _lt,
    "<=": _le,
    ">": _gt,
    ">=": _ge,
    "in": _member,
    "notin": lambda a, s: not _member(a, s),
}

INFIX_RELATIONS = ("=", "!=", "<", "<=", ">", ">=", "in", "notin")


def register_relation(name: str, fn: Callable[..., bool]):
    if name in INFIX_RELATIONS:
        raise ValueError(f"cannot redefine relation {name!r}")
    RELATIONS[name] = fn
