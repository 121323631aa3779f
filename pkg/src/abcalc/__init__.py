"""Interpreter, simulator and explorer for attribute-based communication."""

from .errors import AbcError, EvalFault, LoadError, ParseError, SemanticsAbort
from .explorer import Counterexample, TransitionGraph, check_invariant, explore
from .model import (
    Component, Env, Label, System, restrict, substitute, update_env,
)
from .parser import load_program, parse_predicate, parse_process, parse_program
from .printer import pp_process, pp_system, pretty_print
from .runtime import SimConfig, TraceEvent, inject, replay, run
from .semantics import (
    component_outputs, component_receive, quiescent, satisfies, system_step,
)
from .values import UNDEF

__all__ = [
    "AbcError", "EvalFault", "LoadError", "ParseError", "SemanticsAbort",
    "Counterexample", "TransitionGraph", "check_invariant", "explore",
    "Component", "Env", "Label", "System", "restrict", "substitute", "update_env",
    "load_program", "parse_predicate", "parse_process", "parse_program",
    "pp_process", "pp_system", "pretty_print",
    "SimConfig", "TraceEvent", "inject", "replay", "run",
    "component_outputs", "component_receive", "quiescent", "satisfies", "system_step",
    "UNDEF",
]
