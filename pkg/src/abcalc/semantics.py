"""Transition relations for components and systems.

Everything here is a pure function of immutable inputs.  Transitions are
enumerated in a fixed order (component order, then left-to-right through the
process term) so that seeded runs replay exactly.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from .errors import EvalFault, SemanticsAbort
from .model import (
    DISCARD, IN, OUT, And, Atom, Attr, Aware, Call, Component, Const, Env, Ff, Input,
    Label, Nil, Not, Op, Or, Output, Par, Sum, System, ThisAttr, Tt, Var, restrict, substitute,
)
from .operators import RELATIONS, apply_operator
from .printer import pp_expr, pp_pred
from .values import UNDEF

log = logging.getLogger(__name__)

EMPTY_ENV = Env()

SENDER, ACCEPTED, DISCARDED = "sender", "accepted", "discarded"


@dataclass(frozen=True)
class ComponentTransition:
    label: Label
    successor: Component


@dataclass(frozen=True)
class SystemTransition:
    label: Label
    successor: System
    delivery: tuple  # one of SENDER / ACCEPTED / DISCARDED per component
    sender: int

    def outcomes(self) -> dict:
        comps = self.successor.components
        return {comps[i].id: d for i, d in enumerate(self.delivery) if d != SENDER}


# ------------------------------------------------------------- evaluation


def _eval(e, other: Env, own: Env, binding):
    """Evaluate ``e``: bare attributes read ``other``, ``this.a`` reads ``own``."""
    t = type(e)
    if t is Const:
        return e.value
    if t is Attr:
        return other.lookup(e.name)
    if t is ThisAttr:
        return own.lookup(e.name)
    if t is Var:
        if binding is None or e.name not in binding:
            raise EvalFault(f"unbound variable {e.name!r}")
        return binding[e.name]
    if t is Op:
        return apply_operator(e.name, [_eval(a, other, own, binding) for a in e.args])
    raise EvalFault(f"not an expression: {e!r}")


def eval_expr(expr, env: Env, binding=None):
    """Value of ``expr`` in ``env``; ``a`` and ``this.a`` both read ``env``."""
    return _eval(expr, env, env, binding)


def _holds(p, other: Env, own: Env, binding) -> bool:
    t = type(p)
    if t is Tt:
        return True
    if t is Ff:
        return False
    if t is And:
        return _holds(p.left, other, own, binding) and _holds(p.right, other, own, binding)
    if t is Or:
        return _holds(p.left, other, own, binding) or _holds(p.right, other, own, binding)
    if t is Not:
        return not _holds(p.operand, other, own, binding)
    if t is Atom:
        try:
            args = [_eval(a, other, own, binding) for a in p.args]
            if any(v is UNDEF for v in args):
                return False
            fn = RELATIONS.get(p.rel)
            if fn is None:
                raise EvalFault(f"unknown relation {p.rel!r}")
            return bool(fn(*args))
        except EvalFault as exc:
            log.warning("predicate %s treated as unsatisfied: %s", pp_pred(p), exc)
            return False
    raise TypeError(f"not a predicate: {p!r}")


def satisfies(env: Env, pred) -> bool:
    """``env ⊨ pred`` for a closed predicate; attribute names read ``env``."""
    return _holds(pred, env, EMPTY_ENV, None)


def _close_expr(e, env):
    t = type(e)
    if t is ThisAttr:
        return Const(env.lookup(e.name))
    if t is Op:
        return Op(e.name, tuple(_close_expr(a, env) for a in e.args))
    return e


def close_predicate(pred, env: Env):
    """Replace every ``this.a`` by its value in ``env``; bare names stay."""
    t = type(pred)
    if t is Atom:
        return Atom(pred.rel, tuple(_close_expr(a, env) for a in pred.args))
    if t in (And, Or):
        return t(close_predicate(pred.left, env), close_predicate(pred.right, env))
    if t is Not:
        return Not(close_predicate(pred.operand, env))
    return pred


def apply_updates(env: Env, updates, binding=None, component=None) -> Env:
    """Apply ``[a := E]`` pairs left to right, each against the env built so far."""
    for attr, e in updates:
        try:
            value = eval_expr(e, env, binding)
        except EvalFault as exc:
            raise SemanticsAbort(f"update [{attr} := {pp_expr(e)}] failed: {exc}",
                                 component) from None
        env = env.set(attr, value)
    return env


# ------------------------------------------------------ component outputs


def _outputs(p, env, defs, cid):
    """Yield (values, closed pred, updates, successor process) for enabled outputs."""
    t = type(p)
    if t is Output:
        try:
            values = tuple(eval_expr(e, env) for e in p.exprs)
        except EvalFault as exc:
            exprs = ", ".join(pp_expr(e) for e in p.exprs)
            raise SemanticsAbort(f"output ({exprs}) failed: {exc}", cid) from None
        yield values, close_predicate(p.pred, env), p.updates, p.cont
    elif t is Aware:
        if _holds(p.guard, env, env, None):
            yield from _outputs(p.body, env, defs, cid)
    elif t is Sum:
        yield from _outputs(p.left, env, defs, cid)
        yield from _outputs(p.right, env, defs, cid)
    elif t is Par:
        for v, pr, u, left in _outputs(p.left, env, defs, cid):
            yield v, pr, u, Par(left, p.right)
        for v, pr, u, right in _outputs(p.right, env, defs, cid):
            yield v, pr, u, Par(p.left, right)
    elif t is Call:
        yield from _outputs(defs[p.name], env, defs, cid)
    elif t in (Nil, Input):
        return
    else:
        raise TypeError(f"not a core process: {p!r}")


def component_outputs(component: Component, defs) -> list:
    """Every output transition of ``component``, in syntactic order."""
    env = component.env
    exposed = restrict(env, component.interface)
    result = []
    for values, pred, updates, cont in _outputs(component.process, env, defs, component.id):
        label = Label(OUT, exposed, pred, values)
        new_env = apply_updates(env, updates, None, component.id)
        succ = Component(component.id, new_env, component.interface, cont)
        result.append(ComponentTransition(label, succ))
    return result


# ----------------------------------------------------- component receives


def _accepts(p, env, label, defs):
    """Yield (input prefix, successor process) for inputs accepting ``label``."""
    t = type(p)
    if t is Input:
        if len(p.binders) != len(label.values):
            return
        binding = dict(zip(p.binders, label.values))
        if _holds(p.pred, label.env, env, binding):
            yield p, substitute(p.cont, p.binders, label.values)
    elif t is Aware:
        if _holds(p.guard, env, env, None):
            yield from _accepts(p.body, env, label, defs)
    elif t is Sum:
        yield from _accepts(p.left, env, label, defs)
        yield from _accepts(p.right, env, label, defs)
    elif t is Par:
        for prefix, left in _accepts(p.left, env, label, defs):
            yield prefix, Par(left, p.right)
        for prefix, right in _accepts(p.right, env, label, defs):
            yield prefix, Par(p.left, right)
    elif t is Call:
        yield from _accepts(defs[p.name], env, label, defs)
    elif t in (Nil, Output):
        return
    else:
        raise TypeError(f"not a core process: {p!r}")


def _receive(component: Component, label: Label, defs, exposed_ok: bool) -> list:
    if exposed_ok:
        env = component.env
        result = []
        for prefix, cont in _accepts(component.process, env, label, defs):
            binding = dict(zip(prefix.binders, label.values))
            new_env = apply_updates(env, prefix.updates, binding, component.id)
            succ = Component(component.id, new_env, component.interface, cont)
            result.append(ComponentTransition(label.as_kind(IN), succ))
        if result:
            return result
    return [ComponentTransition(label.as_kind(DISCARD), component)]


def receiver_predicate_holds(component: Component, label: Label) -> bool:
    """Whether the receiver's exposed attributes meet the sender's closed predicate."""
    return satisfies(restrict(component.env, component.interface), label.pred)


def component_receive(component: Component, out_label: Label, defs) -> list:
    """Accept transitions for ``out_label``, or the single discard if there are none."""
    return _receive(component, out_label, defs, receiver_predicate_holds(component, out_label))


# ----------------------------------------------------------------- system


class TransitionCache:
    """Memo tables for one definitions table.

    Components are hashable values, so outputs and receptions computed for a
    component in one state are reused in every other state containing it.
    """

    def __init__(self, defs, limit: int = 500_000):
        self.defs = defs
        self.limit = limit
        self._outs: dict = {}
        self._recv: dict = {}
        self._interned: dict = {}

    def intern(self, comp: Component) -> Component:
        """The canonical object equal to ``comp``, so later comparisons are by identity."""
        return self._interned.setdefault(comp, comp)

    def _canonical(self, transitions):
        return [ComponentTransition(t.label, self.intern(t.successor)) for t in transitions]

    def outputs(self, comp: Component) -> list:
        hit = self._outs.get(comp)
        if hit is None:
            if len(self._outs) > self.limit:
                self._outs.clear()
            hit = self._outs[comp] = self._canonical(component_outputs(comp, self.defs))
        return hit

    def receive(self, comp: Component, label: Label) -> list:
        key = (comp, label)
        hit = self._recv.get(key)
        if hit is None:
            if len(self._recv) > self.limit:
                self._recv.clear()
            hit = self._recv[key] = self._canonical(component_receive(comp, label, self.defs))
        return hit


def system_step(system: System, full_delivery: bool = False, cache=None) -> list:
    """Every system transition, deduplicated, in deterministic order.

    A silent output (predicate ``ff``) is discarded by everyone without
    consulting receivers unless ``full_delivery`` is set.
    """
    comps = system.components
    defs = system.defs
    if cache is None or cache.defs is not defs:
        cache = TransitionCache(defs)
    result = []
    seen = set()
    for i, sender in enumerate(comps):
        for out in cache.outputs(sender):
            label = out.label
            options = []
            for j, c in enumerate(comps):
                if j == i:
                    options.append(((SENDER, out.successor),))
                elif label.silent and not full_delivery:
                    options.append(((DISCARDED, c),))
                else:
                    options.append(tuple((ACCEPTED if tr.label.kind == IN else DISCARDED,
                                          tr.successor) for tr in cache.receive(c, label)))
            for combo in itertools.product(*options):
                delivery = tuple(d for d, _ in combo)
                succ = System(tuple(c for _, c in combo), defs)
                key = (label, succ, delivery)
                if key in seen:
                    continue
                seen.add(key)
                result.append(SystemTransition(label, succ, delivery, i))
    return result


def quiescent(system: System) -> bool:
    return not any(component_outputs(c, system.defs) for c in system.components)
