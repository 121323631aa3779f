"""Recursive-descent parser for ``.abc`` programs.

Grammar sketch (``+`` binds loosest, then ``|``, then prefixes)::

    program   := item*
    item      := "def" NAME "=" process ";"
               | "const" NAME "=" value ";"
               | "component" NAME envlit ":" "{" names "}" "=" process ";"
               | "inject" INT NAME NAME "=" value ";"
    process   := par ("+" par)*
    par       := unary ("|" unary)*
    unary     := "0" | NAME | "<" pred ">" unary | prefix "." updates? unary
               | "(" process ")" | "{" process "}"
               | "if" pred "then" unary "else" unary
               | "let" NAME "=" expr "in" unary | "set" "(" NAME "," expr ")" unary
    prefix    := "(" exprs ")" "@" target updates? | "(" pred ")" "(" names ")" updates?

A bare name inside an input's scope that matches one of its binders is a
variable; any other bare name is an attribute.  A bare expression used as a
predicate means ``expr = tt``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import EvalFault, LoadError, ParseError
from .model import (
    FF, NIL, TT, And, Atom, Attr, Aware, Call, Component, Const, Env, If, Input, Let, Nil,
    Not, Op, Or, Output, Par, SetAttr, Sum, System, ThisAttr, Var, calls,
    subst_process,
)
from .operators import OPERATORS, RELATIONS, apply_operator
from .values import UNDEF

KEYWORDS = {
    "def", "const", "component", "inject", "this", "tt", "ff", "undef", "in", "notin",
    "if", "then", "else", "let", "set",
}

_UNICODE = {"∧": "&&", "∨": "||", "¬": "!", "≠": "!=", "≤": "<=", "≥": ">=", "∈": "in",
            "∉": "notin", "⊥": "undef"}

_TOKEN_RE = re.compile(r"""
    (?P<nl>\n)
  | (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<sym>:=|&&|\|\||!=|<=|>=|[=<>!(){}\[\],.@+\-*%|;:]|[∧∨¬≠≤≥∈∉⊥])
""", re.VERBOSE)

REL_SYMS = ("=", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class Token:
    kind: str  # int | str | name | kw | sym | eof
    text: str
    line: int
    col: int

    def describe(self):
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok_text = m.group()
        col = pos - line_start + 1
        pos = m.end()
        if kind == "nl":
            line += 1
            line_start = pos
            continue
        if kind in ("ws", "comment"):
            continue
        if kind == "sym" and tok_text in _UNICODE:
            mapped = _UNICODE[tok_text]
            kind = "kw" if mapped in KEYWORDS else "sym"
            tok_text = mapped
        elif kind == "name" and tok_text in KEYWORDS:
            kind = "kw"
        tokens.append(Token(kind, tok_text, line, col))
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass(frozen=True)
class ComponentDecl:
    id: str
    env: Env
    interface: frozenset
    process: object


@dataclass(frozen=True)
class Injection:
    """Scripted environment change: before step ``step``, set ``attr`` of ``component``."""
    step: int
    component: str
    attr: str
    value: object

    def __eq__(self, other):
        from .values import value_eq
        return (isinstance(other, Injection) and (self.step, self.component, self.attr)
                == (other.step, other.component, other.attr)
                and value_eq(self.value, other.value))

    def __hash__(self):
        return hash((self.step, self.component, self.attr))


@dataclass
class SourceProgram:
    defs: dict = field(default_factory=dict)
    components: list = field(default_factory=list)
    injections: list = field(default_factory=list)
    consts: dict = field(default_factory=dict)

    def to_system(self) -> System:
        comps = tuple(Component(d.id, d.env, d.interface, d.process) for d in self.components)
        return System(comps, dict(self.defs))


class _Parser:
    def __init__(self, text: str, consts=None):
        self.toks = tokenize(text)
        self.pos = 0
        self.consts: dict = dict(consts or {})
        self.furthest = (-1, set(), "")

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, offset=1) -> Token:
        return self.toks[min(self.pos + offset, len(self.toks) - 1)]

    def at(self, text, kind=None) -> bool:
        t = self.tok
        return t.text == text and t.kind in ((kind,) if kind else ("sym", "kw"))

    def fail(self, *expected, message=None):
        t = self.tok
        if self.pos > self.furthest[0]:
            self.furthest = (self.pos, set(expected), message or "")
        elif self.pos == self.furthest[0]:
            self.furthest[1].update(expected)
        raise ParseError(message or f"unexpected {t.describe()}", t.line, t.col, expected)

    def error(self) -> ParseError:
        pos, expected, message = self.furthest
        t = self.toks[max(pos, 0)]
        return ParseError(message or f"unexpected {t.describe()}", t.line, t.col, expected)

    def expect(self, text, kind=None) -> Token:
        if not self.at(text, kind):
            self.fail(repr(text))
        t = self.tok
        self.pos += 1
        return t

    def accept(self, text, kind=None) -> bool:
        if self.at(text, kind):
            self.pos += 1
            return True
        return False

    def name(self, what="name") -> str:
        t = self.tok
        if t.kind != "name":
            self.fail(what)
        self.pos += 1
        return t.text

    def attr_name(self) -> str:
        if self.accept("this"):
            self.expect(".")
        return self.name("attribute")

    def attempt(self, method, *args):
        saved = self.pos
        try:
            return method(*args)
        except ParseError:
            self.pos = saved
            return None

    # -- program

    def program(self) -> SourceProgram:
        prog = SourceProgram(consts=self.consts)
        ids = set()
        while self.tok.kind != "eof":
            t = self.tok
            if self.accept("def"):
                k = self.name("definition name")
                if k in prog.defs:
                    raise LoadError(f"{t.line}:{t.col}: duplicate definition {k!r}")
                self.expect("=")
                prog.defs[k] = self.process()
                self.expect(";")
            elif self.accept("const"):
                k = self.name("constant name")
                self.expect("=")
                self.consts[k] = self.value()
                self.expect(";")
            elif self.accept("component"):
                cid = self.name("component id")
                if cid in ids:
                    raise LoadError(f"{t.line}:{t.col}: duplicate component id {cid!r}")
                ids.add(cid)
                env = self.env_literal()
                self.expect(":")
                iface = self.interface_literal()
                self.expect("=")
                proc = self.process()
                self.expect(";")
                prog.components.append(ComponentDecl(cid, env, iface, proc))
            elif self.accept("inject"):
                if self.tok.kind != "int":
                    self.fail("step number")
                step = int(self.tok.text)
                self.pos += 1
                cid = self.name("component id")
                attr = self.attr_name()
                self.expect("=")
                prog.injections.append(Injection(step, cid, attr, self.value()))
                self.expect(";")
            else:
                self.fail("'def'", "'const'", "'component'", "'inject'")
        return prog

    def env_literal(self) -> Env:
        self.expect("{")
        data = {}
        if not self.at("}"):
            while True:
                a = self.name("attribute")
                self.expect("=")
                data[a] = self.value()
                if not self.accept(","):
                    break
        self.expect("}")
        return Env(data)

    def interface_literal(self) -> frozenset:
        self.expect("{")
        names = []
        if not self.at("}"):
            names.append(self.name("attribute"))
            while self.accept(","):
                names.append(self.name("attribute"))
        self.expect("}")
        return frozenset(names)

    def value(self):
        t = self.tok
        e = self.expr()
        try:
            return _const_value(e)
        except (EvalFault, ValueError) as exc:
            raise ParseError(f"constant value expected ({exc})", t.line, t.col) from None

    # -- processes

    def process(self):
        left = self.par()
        while self.accept("+"):
            left = Sum(left, self.par())
        return left

    def par(self):
        left = self.unary()
        while self.accept("|"):
            left = Par(left, self.unary())
        return left

    def unary(self):
        t = self.tok
        if t.kind == "int":
            if t.text != "0":
                self.fail("process", message=f"unexpected {t.describe()} (only 0 is a process)")
            self.pos += 1
            return NIL
        if t.kind == "name":
            self.pos += 1
            return Call(t.text)
        if self.accept("if"):
            cond = self.pred()
            self.expect("then")
            then = self.unary()
            self.expect("else")
            return If(cond, then, self.unary())
        if self.accept("let"):
            x = self.name("variable")
            self.expect("=")
            e = self.expr()
            self.expect("in")
            body = self.unary()
            return Let(x, e, _bind_process(body, {x}))
        if self.accept("set"):
            self.expect("(")
            a = self.attr_name()
            self.expect(",")
            e = self.expr()
            self.expect(")")
            return SetAttr(a, e, self.unary())
        if self.accept("<"):
            guard = self.pred(aware=True)
            self.expect(">")
            return Aware(guard, self.unary())
        if self.accept("{"):
            p = self.process()
            self.expect("}")
            return p
        if self.at("("):
            out = self.attempt(self.output_prefix)
            if out is not None:
                return out
            inp = self.attempt(self.input_prefix)
            if inp is not None:
                return inp
            self.expect("(")
            p = self.process()
            self.expect(")")
            return p
        self.fail("process")

    def updates(self):
        ups = []
        while self.accept("["):
            while True:
                a = self.attr_name()
                self.expect(":=")
                ups.append((a, self.expr()))
                if not self.accept(","):
                    break
            self.expect("]")
        return ups

    def continuation(self):
        ups = self.updates()
        self.expect(".")
        ups += self.updates()
        return tuple(ups), self.unary()

    def output_prefix(self):
        self.expect("(")
        exprs = []
        if not self.at(")"):
            exprs.append(self.expr())
            while self.accept(","):
                exprs.append(self.expr())
        self.expect(")")
        self.expect("@")
        if self.accept("tt"):
            target = TT
        elif self.accept("ff"):
            target = FF
        else:
            self.expect("(")
            target = self.pred()
            self.expect(")")
        ups, cont = self.continuation()
        return Output(tuple(exprs), target, ups, cont)

    def input_prefix(self):
        self.expect("(")
        pred = self.pred()
        self.expect(")")
        self.expect("(")
        binders = []
        t = self.tok
        if not self.at(")"):
            binders.append(self.name("binder"))
            while self.accept(","):
                binders.append(self.name("binder"))
        self.expect(")")
        if len(set(binders)) != len(binders):
            raise ParseError(f"input binders must be distinct: {binders}", t.line, t.col)
        ups, cont = self.continuation()
        names = set(binders)
        return Input(_bind_pred(pred, names), tuple(binders),
                     tuple((a, _bind_expr(e, names)) for a, e in ups),
                     _bind_process(cont, names))

    # -- predicates

    def pred(self, aware=False):
        left = self.pred_and(aware)
        while self.accept("||"):
            left = Or(left, self.pred_and(aware))
        return left

    def pred_and(self, aware):
        left = self.pred_not(aware)
        while self.accept("&&"):
            left = And(left, self.pred_not(aware))
        return left

    def pred_not(self, aware):
        if self.accept("!"):
            return Not(self.pred_not(aware))
        return self.pred_primary(aware)

    def _at_relation(self):
        t = self.tok
        return (t.kind == "sym" and t.text in REL_SYMS) or (t.kind == "kw" and t.text in ("in", "notin"))

    def _grouped(self, aware=False):
        self.expect("(")
        p = self.pred()
        self.expect(")")
        t = self.tok
        if aware and t.kind == "sym" and t.text == ">":
            return p  # closes the surrounding guard
        if self._at_relation() or (t.kind == "sym" and t.text in ("+", "-", "*", "%")):
            self.fail("predicate")
        return p

    def pred_primary(self, aware):
        if self.at("("):
            grouped = self.attempt(self._grouped, aware)
            if grouped is not None:
                return grouped
        t = self.tok
        if t.kind == "name" and self.peek().text == "(" and t.text in RELATIONS \
                and t.text not in OPERATORS:
            self.pos += 2
            args = self.expr_list(")")
            return Atom(t.text, tuple(args))
        lhs = self.expr()
        if self._at_relation():
            rel = self.tok.text
            if rel == ">" and aware:
                saved = self.pos
                self.pos += 1
                try:
                    rhs = self.expr()
                    ok = self.tok.kind == "sym" and self.tok.text in (">", "&&", "||")
                except ParseError:
                    ok = False
                if ok:
                    return Atom(rel, (lhs, rhs))
                self.pos = saved
                return _bare(lhs)
            self.pos += 1
            return Atom(rel, (lhs, self.expr()))
        return _bare(lhs)

    # -- expressions

    def expr_list(self, close):
        items = []
        if not self.at(close):
            items.append(self.expr())
            while self.accept(","):
                items.append(self.expr())
        self.expect(close)
        return items

    def expr(self):
        left = self.term()
        while self.tok.kind == "sym" and self.tok.text in ("+", "-"):
            op = self.tok.text
            self.pos += 1
            left = Op(op, (left, self.term()))
        return left

    def term(self):
        left = self.factor()
        while self.tok.kind == "sym" and self.tok.text in ("*", "%"):
            op = self.tok.text
            self.pos += 1
            left = Op(op, (left, self.factor()))
        return left

    def factor(self):
        if self.accept("-"):
            if self.tok.kind == "int":
                n = int(self.tok.text)
                self.pos += 1
                return Const(-n)
            return Op("neg", (self.factor(),))
        return self.primary()

    def primary(self):
        t = self.tok
        if t.kind == "int":
            self.pos += 1
            return Const(int(t.text))
        if t.kind == "str":
            self.pos += 1
            return Const(json.loads(t.text))
        if t.kind == "kw":
            if t.text in ("tt", "ff", "undef"):
                self.pos += 1
                return Const({"tt": True, "ff": False, "undef": UNDEF}[t.text])
            if t.text == "this":
                self.pos += 1
                self.expect(".")
                return ThisAttr(self.name("attribute"))
        if t.kind == "name":
            self.pos += 1
            if self.at("("):
                if t.text not in OPERATORS:
                    raise LoadError(f"{t.line}:{t.col}: unknown operator {t.text!r}")
                self.pos += 1
                return _fold(Op(t.text, tuple(self.expr_list(")"))))
            if t.text in self.consts:
                return Const(self.consts[t.text])
            return Attr(t.text)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.accept("{"):
            return _fold(Op("set", tuple(self.expr_list("}"))))
        if self.accept("<"):
            return _fold(Op("tuple", tuple(self.expr_list(">"))))
        self.fail("expression")


def _bare(e):
    if isinstance(e, Const) and isinstance(e.value, bool):
        return TT if e.value else FF
    return Atom("=", (e, Const(True)))


def _fold(op: Op):
    """Constant set and tuple literals become values."""
    if op.name in ("set", "tuple") and all(isinstance(a, Const) for a in op.args):
        return Const(apply_operator(op.name, [a.value for a in op.args]))
    return op


def _const_value(e):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Op):
        return apply_operator(e.name, [_const_value(a) for a in e.args])
    raise ValueError(f"{type(e).__name__} is not constant")


# -- name binding: Attr(x) -> Var(x) for names in scope


def _bind_expr(e, names):
    if isinstance(e, Attr) and e.name in names:
        return Var(e.name)
    if isinstance(e, Op):
        return Op(e.name, tuple(_bind_expr(a, names) for a in e.args))
    return e


def _bind_pred(p, names):
    if isinstance(p, Atom):
        return Atom(p.rel, tuple(_bind_expr(a, names) for a in p.args))
    if isinstance(p, (And, Or)):
        return type(p)(_bind_pred(p.left, names), _bind_pred(p.right, names))
    if isinstance(p, Not):
        return Not(_bind_pred(p.operand, names))
    return p


def _bind_process(p, names):
    if isinstance(p, (Nil, Call)):
        return p
    if isinstance(p, Input):
        return Input(_bind_pred(p.pred, names), p.binders,
                     tuple((a, _bind_expr(e, names)) for a, e in p.updates),
                     _bind_process(p.cont, names))
    if isinstance(p, Output):
        return Output(tuple(_bind_expr(e, names) for e in p.exprs), _bind_pred(p.pred, names),
                      tuple((a, _bind_expr(e, names)) for a, e in p.updates),
                      _bind_process(p.cont, names))
    if isinstance(p, Aware):
        return Aware(_bind_pred(p.guard, names), _bind_process(p.body, names))
    if isinstance(p, (Sum, Par)):
        return type(p)(_bind_process(p.left, names), _bind_process(p.right, names))
    if isinstance(p, If):
        return If(_bind_pred(p.cond, names), _bind_process(p.then, names),
                  _bind_process(p.orelse, names))
    if isinstance(p, Let):
        return Let(p.name, _bind_expr(p.expr, names), _bind_process(p.body, names))
    if isinstance(p, SetAttr):
        return SetAttr(p.attr, _bind_expr(p.expr, names), _bind_process(p.body, names))
    raise TypeError(p)


# -- macro expansion


def expand_macros(p):
    """Rewrite if/let/set into core constructors.

    ``if c then P else Q``  ->  ``<c>P + <!c>Q``
    ``let x = E in P``      ->  ``P[E/x]``
    ``set(a, E)P``          ->  ``()@ff.[a := E]P``
    """
    if isinstance(p, (Nil, Call)):
        return p
    if isinstance(p, If):
        return Sum(Aware(p.cond, expand_macros(p.then)),
                   Aware(Not(p.cond), expand_macros(p.orelse)))
    if isinstance(p, Let):
        return expand_macros(subst_process(p.body, {p.name: p.expr}))
    if isinstance(p, SetAttr):
        return Output((), FF, ((p.attr, p.expr),), expand_macros(p.body))
    if isinstance(p, Input):
        return Input(p.pred, p.binders, p.updates, expand_macros(p.cont))
    if isinstance(p, Output):
        return Output(p.exprs, p.pred, p.updates, expand_macros(p.cont))
    if isinstance(p, Aware):
        return Aware(p.guard, expand_macros(p.body))
    if isinstance(p, (Sum, Par)):
        return type(p)(expand_macros(p.left), expand_macros(p.right))
    raise TypeError(p)


# -- load-time checks


def _unguarded_calls(p) -> set:
    """Definitions reachable without passing an action prefix."""
    if isinstance(p, Call):
        return {p.name}
    if isinstance(p, (Sum, Par)):
        return _unguarded_calls(p.left) | _unguarded_calls(p.right)
    if isinstance(p, (Aware, Let, SetAttr)):
        return set() if isinstance(p, SetAttr) else _unguarded_calls(p.body)
    if isinstance(p, If):
        return _unguarded_calls(p.then) | _unguarded_calls(p.orelse)
    return set()


def check_program(prog: SourceProgram):
    bodies = list(prog.defs.items()) + [(f"component {d.id}", d.process) for d in prog.components]
    for owner, body in bodies:
        missing = sorted(calls(body) - set(prog.defs))
        if missing:
            raise LoadError(f"{owner}: unresolved process name(s) {', '.join(missing)}")
    graph = {k: _unguarded_calls(v) for k, v in prog.defs.items()}
    state: dict = {}

    def visit(k, path):
        if state.get(k) == 1:
            cycle = path[path.index(k):] + [k]
            raise LoadError("unguarded recursion: " + " -> ".join(cycle))
        if state.get(k) == 2:
            return
        state[k] = 1
        for nxt in sorted(graph[k]):
            visit(nxt, path + [k])
        state[k] = 2

    for k in sorted(graph):
        visit(k, [])
    ids = {d.id for d in prog.components}
    for inj in prog.injections:
        if inj.component not in ids:
            raise LoadError(f"inject: unknown component {inj.component!r}")


def parse_program(text: str, expand: bool = True) -> SourceProgram:
    """Parse ``.abc`` source.  With ``expand`` the result holds core syntax only."""
    parser = _Parser(text)
    try:
        prog = parser.program()
    except ParseError:
        raise parser.error() from None
    check_program(prog)
    if expand:
        prog.defs = {k: expand_macros(v) for k, v in prog.defs.items()}
        prog.components = [ComponentDecl(d.id, d.env, d.interface, expand_macros(d.process))
                           for d in prog.components]
    return prog


def load_program(text: str) -> tuple[System, list]:
    """Parse, expand and check a program; return the system and its scripted injections."""
    prog = parse_program(text)
    return prog.to_system(), list(prog.injections)


def _parse_fragment(text, method, bound=(), consts=None, **kw):
    parser = _Parser(text, consts)
    try:
        node = getattr(parser, method)(**kw)
        if parser.tok.kind != "eof":
            parser.fail("end of input")
    except ParseError:
        raise parser.error() from None
    return node


def parse_process(text: str, bound=(), consts=None, expand=False):
    p = _parse_fragment(text, "process", consts=consts)
    if bound:
        p = _bind_process(p, set(bound))
    return expand_macros(p) if expand else p


def parse_predicate(text: str, bound=(), consts=None):
    p = _parse_fragment(text, "pred", consts=consts)
    return _bind_pred(p, set(bound)) if bound else p


def parse_expr(text: str, bound=(), consts=None):
    e = _parse_fragment(text, "expr", consts=consts)
    return _bind_expr(e, set(bound)) if bound else e


def parse_value(text: str):
    return _parse_fragment(text, "value")


def pretty_program(prog: SourceProgram) -> str:
    from .printer import pp_env, pp_interface, pp_process
    from .values import format_value

    lines = [f"const {k} = {format_value(v)};" for k, v in prog.consts.items()]
    lines += [f"def {k} = {pp_process(v)};" for k, v in prog.defs.items()]
    lines += [f"component {d.id} {pp_env(d.env)} : {pp_interface(d.interface)} = "
              f"{pp_process(d.process)};" for d in prog.components]
    lines += [f"inject {i.step} {i.component} {i.attr} = {format_value(i.value)};"
              for i in prog.injections]
    return "\n".join(lines) + "\n"
