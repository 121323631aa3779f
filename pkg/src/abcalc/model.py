"""Abstract syntax and state of AbC systems.

Every node is an immutable value.  Transitions build new components and
systems instead of mutating old ones, so states can be shared, hashed and
deduplicated freely.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field, fields
from typing import Any, Iterator, Union

from .values import UNDEF, format_value, value_key



def node(cls):
    """Frozen dataclass whose hash is computed once and cached.

    Process terms are hashed constantly while deduplicating states, so the
    default recursive dataclass hash would dominate exploration time.
    """
    cls = dataclass(frozen=True, eq=False)(cls)
    names = tuple(f.name for f in fields(cls))
    tag = cls.__name__

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((tag,) + tuple(getattr(self, n) for n in names))
            self.__dict__["_h"] = h
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self):
            return NotImplemented
        if hash(self) != hash(other):
            return False
        return all(getattr(self, n) == getattr(other, n) for n in names)

    cls.__hash__ = __hash__
    cls.__eq__ = __eq__
    return cls


# ---------------------------------------------------------------- expressions


@dataclass(frozen=True, eq=False)
class Const:
    value: Any

    def _key(self):
        k = self.__dict__.get("_k")
        if k is None:
            k = self.__dict__["_k"] = value_key(self.value)
        return k

    def __eq__(self, other):
        return isinstance(other, Const) and self._key() == other._key()

    def __hash__(self):
        return hash(("Const", self._key()))

    def __repr__(self):
        return f"Const({format_value(self.value)})"


@node
class Var:
    """A name bound by an input binder or a ``let``."""
    name: str


@node
class Attr:
    """Bare attribute ``a``; in a communication predicate it names the partner's attribute."""
    name: str


@node
class ThisAttr:
    """``this.a``: always the executing component's own attribute."""
    name: str


@node
class Op:
    name: str
    args: tuple = ()


Expr = Union[Const, Var, Attr, ThisAttr, Op]

# ----------------------------------------------------------------- predicates


@node
class Tt:
    pass


@node
class Ff:
    pass


TT = Tt()
FF = Ff()


@node
class Atom:
    rel: str
    args: tuple


@node
class And:
    left: "Pred"
    right: "Pred"


@node
class Or:
    left: "Pred"
    right: "Pred"


@node
class Not:
    operand: "Pred"


Pred = Union[Tt, Ff, Atom, And, Or, Not]

# ------------------------------------------------------------------ processes

# An update sequence is a tuple of (attribute, Expr) pairs, applied left to right.
Updates = tuple


@node
class Nil:
    pass


NIL = Nil()


@node
class Input:
    pred: Pred
    binders: tuple
    updates: Updates
    cont: "Process"

    def __post_init__(self):
        if len(set(self.binders)) != len(self.binders):
            raise ValueError(f"input binders must be distinct: {self.binders}")


@node
class Output:
    exprs: tuple
    pred: Pred
    updates: Updates
    cont: "Process"


@node
class Aware:
    guard: Pred
    body: "Process"


@node
class Sum:
    left: "Process"
    right: "Process"


@node
class Par:
    left: "Process"
    right: "Process"


@node
class Call:
    name: str


# Derived operators; removed by parser.expand_macros.

@node
class If:
    cond: Pred
    then: "Process"
    orelse: "Process"


@node
class Let:
    name: str
    expr: Expr
    body: "Process"


@node
class SetAttr:
    attr: str
    expr: Expr
    body: "Process"


Process = Union[Nil, Input, Output, Aware, Sum, Par, Call, If, Let, SetAttr]
CORE_PROCESSES = (Nil, Input, Output, Aware, Sum, Par, Call)

# ---------------------------------------------------------------- environment


class Env(Mapping):
    """Immutable attribute environment.  Absent attributes read as UNDEF."""

    __slots__ = ("_data", "_hash", "_sorted")

    def __init__(self, data=()):
        self._data = dict(data)
        self._hash = None
        self._sorted = None

    def __getitem__(self, key):
        return self._data[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def lookup(self, attr: str):
        return self._data.get(attr, UNDEF)

    def set(self, attr: str, value) -> "Env":
        data = dict(self._data)
        data[attr] = value
        return Env(data)

    def _key(self):
        if self._sorted is None:
            self._sorted = tuple(sorted((k, value_key(v)) for k, v in self._data.items()))
        return self._sorted

    def __eq__(self, other):
        if not isinstance(other, Env):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        items = ", ".join(f"{k}={format_value(self._data[k])}" for k in sorted(self._data))
        return "{" + items + "}"


def restrict(env: Mapping, interface) -> Env:
    """The part of ``env`` visible to partners: interface attributes, UNDEF if unset."""
    get = env.lookup if isinstance(env, Env) else (lambda a: env.get(a, UNDEF))
    return Env({a: get(a) for a in interface})


def update_env(env: Env, attr: str, value) -> Env:
    return env.set(attr, value)


# --------------------------------------------------------- components, system


@node
class Component:
    id: str
    env: Env
    interface: frozenset
    process: Process

    def __post_init__(self):
        if not isinstance(self.env, Env):
            object.__setattr__(self, "env", Env(self.env))
        object.__setattr__(self, "interface", frozenset(self.interface))
        missing = [a for a in self.interface if a not in self.env]
        if missing:
            env = self.env
            for a in sorted(missing):
                env = env.set(a, UNDEF)
            object.__setattr__(self, "env", env)


@dataclass(frozen=True)
class System:
    components: tuple
    defs: Mapping = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        ids = [c.id for c in self.components]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate component ids: {dup}")

    def index(self, component_id) -> int:
        for i, c in enumerate(self.components):
            if c.id == component_id:
                return i
        raise KeyError(component_id)

    def component(self, component_id) -> Component:
        return self.components[self.index(component_id)]

    def replace(self, i: int, comp: Component) -> "System":
        comps = list(self.components)
        comps[i] = comp
        return System(tuple(comps), self.defs)


# --------------------------------------------------------------------- labels

OUT, IN, DISCARD = "out", "in", "discard"


@dataclass(frozen=True, eq=False)
class Label:
    kind: str
    env: Env
    pred: Pred
    values: tuple

    def _key(self):
        k = self.__dict__.get("_k")
        if k is None:
            k = (self.kind, self.env, self.pred, tuple(value_key(v) for v in self.values))
            self.__dict__["_k"] = k
        return k

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Label) and self._key() == other._key()

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = self.__dict__["_h"] = hash(self._key())
        return h

    def as_kind(self, kind: str) -> "Label":
        return Label(kind, self.env, self.pred, self.values)

    @property
    def silent(self) -> bool:
        return isinstance(self.pred, Ff)


# --------------------------------------------------------------- substitution


def subst_expr(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Op):
        return Op(e.name, tuple(subst_expr(a, mapping) for a in e.args))
    return e


def subst_pred(p: Pred, mapping: Mapping[str, Expr]) -> Pred:
    if isinstance(p, Atom):
        return Atom(p.rel, tuple(subst_expr(a, mapping) for a in p.args))
    if isinstance(p, And):
        return And(subst_pred(p.left, mapping), subst_pred(p.right, mapping))
    if isinstance(p, Or):
        return Or(subst_pred(p.left, mapping), subst_pred(p.right, mapping))
    if isinstance(p, Not):
        return Not(subst_pred(p.operand, mapping))
    return p


def _subst_updates(updates, mapping):
    return tuple((a, subst_expr(e, mapping)) for a, e in updates)


def subst_process(p: Process, mapping: Mapping[str, Expr]) -> Process:
    """Replace free occurrences of names; inner binders shadow."""
    if not mapping:
        return p
    if isinstance(p, (Nil, Call)):
        return p
    if isinstance(p, Input):
        inner = {k: v for k, v in mapping.items() if k not in p.binders}
        if not inner:
            return p
        return Input(subst_pred(p.pred, inner), p.binders,
                     _subst_updates(p.updates, inner), subst_process(p.cont, inner))
    if isinstance(p, Output):
        return Output(tuple(subst_expr(e, mapping) for e in p.exprs), subst_pred(p.pred, mapping),
                      _subst_updates(p.updates, mapping), subst_process(p.cont, mapping))
    if isinstance(p, Aware):
        return Aware(subst_pred(p.guard, mapping), subst_process(p.body, mapping))
    if isinstance(p, Sum):
        return Sum(subst_process(p.left, mapping), subst_process(p.right, mapping))
    if isinstance(p, Par):
        return Par(subst_process(p.left, mapping), subst_process(p.right, mapping))
    if isinstance(p, If):
        return If(subst_pred(p.cond, mapping), subst_process(p.then, mapping),
                  subst_process(p.orelse, mapping))
    if isinstance(p, Let):
        inner = {k: v for k, v in mapping.items() if k != p.name}
        return Let(p.name, subst_expr(p.expr, mapping), subst_process(p.body, inner))
    if isinstance(p, SetAttr):
        return SetAttr(p.attr, subst_expr(p.expr, mapping), subst_process(p.body, mapping))
    raise TypeError(f"not a process: {p!r}")


def substitute(process: Process, binders, values) -> Process:
    """``process[values/binders]``: received values replace the binder names."""
    binders = tuple(binders)
    values = tuple(values)
    if len(binders) != len(values):
        raise ValueError(f"arity mismatch: {len(binders)} binders, {len(values)} values")
    return subst_process(process, {x: Const(v) for x, v in zip(binders, values)})


# ---------------------------------------------------------------- inspection


def expr_names(e: Expr, acc: set | None = None) -> set:
    """Var names occurring in an expression."""
    acc = set() if acc is None else acc
    if isinstance(e, Var):
        acc.add(e.name)
    elif isinstance(e, Op):
        for a in e.args:
            expr_names(a, acc)
    return acc


def pred_exprs(p: Pred) -> Iterator[Expr]:
    if isinstance(p, Atom):
        yield from p.args
    elif isinstance(p, (And, Or)):
        yield from pred_exprs(p.left)
        yield from pred_exprs(p.right)
    elif isinstance(p, Not):
        yield from pred_exprs(p.operand)


def free_names(p: Process) -> set:
    """Free variable names (not attributes) of a process term."""
    out: set = set()

    def of_pred(pr, bound):
        for e in pred_exprs(pr):
            out.update(expr_names(e) - bound)

    def walk(q, bound):
        if isinstance(q, Input):
            inner = bound | set(q.binders)
            of_pred(q.pred, inner)
            for _, e in q.updates:
                out.update(expr_names(e) - inner)
            walk(q.cont, inner)
        elif isinstance(q, Output):
            for e in q.exprs:
                out.update(expr_names(e) - bound)
            of_pred(q.pred, bound)
            for _, e in q.updates:
                out.update(expr_names(e) - bound)
            walk(q.cont, bound)
        elif isinstance(q, Aware):
            of_pred(q.guard, bound)
            walk(q.body, bound)
        elif isinstance(q, (Sum, Par)):
            walk(q.left, bound)
            walk(q.right, bound)
        elif isinstance(q, If):
            of_pred(q.cond, bound)
            walk(q.then, bound)
            walk(q.orelse, bound)
        elif isinstance(q, Let):
            out.update(expr_names(q.expr) - bound)
            walk(q.body, bound | {q.name})
        elif isinstance(q, SetAttr):
            out.update(expr_names(q.expr) - bound)
            walk(q.body, bound)

    walk(p, set())
    return out


def calls(p: Process) -> set:
    """Names of all definitions referenced by a process term."""
    if isinstance(p, Call):
        return {p.name}
    if isinstance(p, (Input, Output)):
        return calls(p.cont)
    if isinstance(p, (Aware, Let, SetAttr)):
        return calls(p.body)
    if isinstance(p, (Sum, Par)):
        return calls(p.left) | calls(p.right)
    if isinstance(p, If):
        return calls(p.then) | calls(p.orelse)
    return set()
