"""Hypothesis generators for small AbC terms, components and systems."""

from __future__ import annotations

from functools import lru_cache

from hypothesis import strategies as st

from abcalc.model import (
    FF, NIL, OUT, TT, And, Atom, Attr, Aware, Call, Component, Const, Env, Input, Label, Not,
    Op, Or, Output, Par, Sum, System, ThisAttr, Var,
)

ATTRS = ("a", "b", "c")
BINDERS = ("x", "y")
RELS = ("=", "!=", "<", "<=")
ints = st.integers(min_value=0, max_value=2)


@lru_cache(maxsize=None)
def exprs(bound=(), this=True, depth=1):
    leaves = [ints.map(Const), st.sampled_from(ATTRS).map(Attr)]
    if this:
        leaves.append(st.sampled_from(ATTRS).map(ThisAttr))
    if bound:
        leaves.append(st.sampled_from(tuple(bound)).map(Var))
    leaf = st.one_of(*leaves)
    if depth <= 0:
        return leaf
    return st.one_of(leaf, st.tuples(leaf, leaf).map(lambda ab: Op("+", ab)))


@lru_cache(maxsize=None)
def preds(bound=(), this=True, depth=2):
    atom = st.builds(lambda r, a, b: Atom(r, (a, b)), st.sampled_from(RELS),
                     exprs(bound, this), exprs(bound, this))
    leaf = st.one_of(st.just(TT), st.just(FF), atom, atom)
    if depth <= 0:
        return leaf
    sub = preds(bound, this, depth - 1)
    return st.one_of(leaf, st.builds(And, sub, sub), st.builds(Or, sub, sub),
                     st.builds(Not, sub))


@lru_cache(maxsize=None)
def updates(bound=()):
    # "this.a" and "a" mean the same in updates; only plain sums keep them fault-free
    e = st.one_of(ints.map(Const), st.sampled_from(ATTRS).map(ThisAttr),
                  *([st.sampled_from(tuple(bound)).map(Var)] if bound else []))
    return st.lists(st.tuples(st.sampled_from(ATTRS), e), max_size=2).map(tuple)


@st.composite
def processes(draw, depth=2, bound=(), calls=True):
    choices = ["nil", "out", "in"]
    if calls:
        choices.append("call")
    if depth > 0:
        choices += ["aware", "sum", "par", "out", "in"]
    kind = draw(st.sampled_from(choices))
    sub = _processes(depth - 1, bound, calls) if depth > 0 else st.just(NIL)
    if kind == "nil":
        return NIL
    if kind == "call":
        return Call("P")
    if kind == "out":
        vals = draw(_output_values(bound))
        pred = draw(st.one_of(st.just(FF), st.just(TT), preds(bound)))
        return Output(tuple(vals), pred, draw(updates(bound)), draw(sub))
    if kind == "in":
        binders = tuple(draw(st.lists(st.sampled_from(BINDERS), max_size=2, unique=True)))
        inner = tuple(sorted(set(bound) | set(binders)))
        cont = _processes(depth - 1, inner, calls) if depth > 0 else st.just(NIL)
        pred = draw(st.one_of(st.just(TT), preds(inner, depth=1)))
        return Input(pred, binders, draw(updates(inner)), draw(cont))
    if kind == "aware":
        return Aware(draw(preds(bound, depth=1)), draw(sub))
    if kind == "sum":
        return Sum(draw(sub), draw(sub))
    return Par(draw(sub), draw(sub))


@lru_cache(maxsize=None)
def _processes(depth, bound, calls):
    return processes(depth, bound, calls)


@lru_cache(maxsize=None)
def _output_values(bound):
    leaves = [ints.map(Const), st.sampled_from(ATTRS).map(ThisAttr)]
    if bound:
        leaves.append(st.sampled_from(bound).map(Var))
    return st.lists(st.one_of(*leaves), max_size=2)


# P is always prefixed, so recursion through it stays guarded.
DEFS_P = {
    "P": Sum(Input(Atom("=", (Var("x"), Attr("a"))), ("x",), (("b", Var("x")),), Call("P")),
             Output((ThisAttr("a"),), Atom("<", (Attr("b"), Const(2))), (), NIL)),
}

envs = st.fixed_dictionaries({a: ints for a in ATTRS}).map(Env)
interfaces = st.sets(st.sampled_from(ATTRS)).map(frozenset)


@st.composite
def components(draw, cid="c0", depth=2):
    iface = draw(st.one_of(st.just(frozenset(ATTRS)), interfaces))
    return Component(cid, draw(envs), iface, draw(_processes(depth, (), True)))


def _input_arities(p):
    if isinstance(p, Input):
        return {len(p.binders)}
    if isinstance(p, (Sum, Par)):
        return _input_arities(p.left) | _input_arities(p.right)
    if isinstance(p, Aware):
        return _input_arities(p.body)
    return set()


@st.composite
def out_labels(draw, arities=()):
    iface = draw(st.one_of(st.just(frozenset(ATTRS)), interfaces))
    env = Env({a: draw(ints) for a in sorted(iface)})
    size = draw(st.sampled_from(sorted(arities))) if arities else draw(st.integers(0, 2))
    values = tuple(draw(ints) for _ in range(size))
    pred = draw(st.one_of(st.just(TT), preds(this=False, depth=1)))
    return Label(OUT, env, pred, values)


@st.composite
def component_and_label(draw):
    comp = draw(components())
    arities = _input_arities(comp.process) if draw(st.booleans()) else set()
    return comp, draw(out_labels(tuple(sorted(arities)))), DEFS_P


@st.composite
def small_system(draw):
    n = draw(st.integers(min_value=1, max_value=3))
    comps = tuple(draw(components(f"c{i}", depth=1)) for i in range(n))
    return System(comps, DEFS_P)
