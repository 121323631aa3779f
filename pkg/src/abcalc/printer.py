"""Concrete syntax for AST nodes.  Output always re-parses to an equal AST."""

from __future__ import annotations

from .model import (
    And, Atom, Attr, Aware, Call, Component, Const, Env, Ff, If, Input, Let, Nil, Not, Op,
    Or, Output, Par, SetAttr, Sum, System, ThisAttr, Tt, Var,
)
from .operators import INFIX, INFIX_RELATIONS
from .values import format_value

_REL_TEXT = {"in": "in", "notin": "notin"}


def pp_expr(e, level: int = 0) -> str:
    if isinstance(e, Const):
        return format_value(e.value)
    if isinstance(e, (Var, Attr)):
        return e.name
    if isinstance(e, ThisAttr):
        return f"this.{e.name}"
    if isinstance(e, Op):
        if e.name in INFIX and len(e.args) == 2:
            prec = INFIX[e.name]
            text = f"{pp_expr(e.args[0], prec)} {e.name} {pp_expr(e.args[1], prec + 1)}"
            return f"({text})" if level > prec else text
        if e.name == "neg" and len(e.args) == 1:
            arg = e.args[0]
            inner = pp_expr(arg, 3)
            if isinstance(arg, Const) or inner.startswith("-"):
                inner = f"({inner})"
            return "-" + inner
        if e.name == "set":
            return "{" + ", ".join(pp_expr(a) for a in e.args) + "}"
        if e.name == "tuple":
            return "<" + ", ".join(pp_expr(a) for a in e.args) + ">"
        return f"{e.name}(" + ", ".join(pp_expr(a) for a in e.args) + ")"
    raise TypeError(f"not an expression: {e!r}")


def pp_pred(p, level: int = 0) -> str:
    if isinstance(p, Tt):
        return "tt"
    if isinstance(p, Ff):
        return "ff"
    if isinstance(p, Atom):
        if p.rel in INFIX_RELATIONS and len(p.args) == 2:
            text = f"{pp_expr(p.args[0])} {_REL_TEXT.get(p.rel, p.rel)} {pp_expr(p.args[1])}"
            return f"({text})" if level > 2 else text
        return f"{p.rel}(" + ", ".join(pp_expr(a) for a in p.args) + ")"
    if isinstance(p, Or):
        text = f"{pp_pred(p.left, 0)} || {pp_pred(p.right, 1)}"
        return f"({text})" if level > 0 else text
    if isinstance(p, And):
        text = f"{pp_pred(p.left, 1)} && {pp_pred(p.right, 2)}"
        return f"({text})" if level > 1 else text
    if isinstance(p, Not):
        return "!" + pp_pred(p.operand, 3)
    raise TypeError(f"not a predicate: {p!r}")


def _pp_updates(updates) -> str:
    if not updates:
        return ""
    return "[" + ", ".join(f"{a} := {pp_expr(e)}" for a, e in updates) + "]"


def _pp_target(pred) -> str:
    if isinstance(pred, (Tt, Ff)):
        return pp_pred(pred)
    return f"({pp_pred(pred)})"


def pp_process(p, level: int = 0) -> str:
    if isinstance(p, Nil):
        return "0"
    if isinstance(p, Call):
        return p.name
    if isinstance(p, Sum):
        text = f"{pp_process(p.left, 0)} + {pp_process(p.right, 1)}"
        return f"({text})" if level > 0 else text
    if isinstance(p, Par):
        text = f"{pp_process(p.left, 1)} | {pp_process(p.right, 2)}"
        return f"({text})" if level > 1 else text
    if isinstance(p, Output):
        head = "(" + ", ".join(pp_expr(e) for e in p.exprs) + ")@" + _pp_target(p.pred)
        return f"{head}.{_pp_updates(p.updates)}{pp_process(p.cont, 2)}"
    if isinstance(p, Input):
        head = f"({pp_pred(p.pred)})(" + ", ".join(p.binders) + ")"
        return f"{head}.{_pp_updates(p.updates)}{pp_process(p.cont, 2)}"
    if isinstance(p, Aware):
        return f"<{pp_pred(p.guard)}>{pp_process(p.body, 2)}"
    if isinstance(p, If):
        return (f"if {pp_pred(p.cond)} then {pp_process(p.then, 2)} "
                f"else {pp_process(p.orelse, 2)}")
    if isinstance(p, Let):
        return f"let {p.name} = {pp_expr(p.expr)} in {pp_process(p.body, 2)}"
    if isinstance(p, SetAttr):
        return f"set({p.attr}, {pp_expr(p.expr)}) {pp_process(p.body, 2)}"
    raise TypeError(f"not a process: {p!r}")


def pp_env(env) -> str:
    items = ", ".join(f"{k} = {format_value(env[k])}" for k in sorted(env))
    return "{" + items + "}"


def pp_interface(interface) -> str:
    return "{" + ", ".join(sorted(interface)) + "}"


def pp_component(c: Component) -> str:
    return f"{c.id} {pp_env(c.env)} : {pp_interface(c.interface)} = {pp_process(c.process)}"


def pp_system(s: System) -> str:
    return "\n".join(pp_component(c) for c in s.components)


def pretty_print(node) -> str:
    """Render a process, predicate, expression, component or system."""
    from . import model

    if isinstance(node, (Nil, Call, Sum, Par, Output, Input, Aware, If, Let, SetAttr)):
        return pp_process(node)
    if isinstance(node, (Tt, Ff, Atom, And, Or, Not)):
        return pp_pred(node)
    if isinstance(node, (Const, Var, Attr, ThisAttr, Op)):
        return pp_expr(node)
    if isinstance(node, model.Component):
        return pp_component(node)
    if isinstance(node, model.System):
        return pp_system(node)
    if isinstance(node, Env):
        return pp_env(node)
    raise TypeError(f"cannot pretty-print {node!r}")
