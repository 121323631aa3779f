"""Seeded simulator: drives ``system_step`` one transition at a time."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import LoadError, SemanticsAbort
from .model import IN, Env, System, update_env
from .parser import Injection
from .printer import pp_pred
from .semantics import (
    ACCEPTED, DISCARDED, component_outputs, component_receive, quiescent, system_step,
)
from .values import encode_value

SCHEDULERS = ("rr", "rand")


@dataclass
class SimConfig:
    seed: int = 0
    max_steps: int = 10_000
    scheduler: str = "rr"
    trace_sink: Optional[str] = None
    injections: list = field(default_factory=list)

    def __post_init__(self):
        if self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")
        if self.scheduler not in SCHEDULERS:
            raise ValueError(f"unknown scheduler {self.scheduler!r}; use one of {SCHEDULERS}")


@dataclass
class TraceEvent:
    """One line of a trace.

    For ``inject`` events ``sender`` names the component whose attribute was
    set and ``env`` holds the single written attribute.
    """
    step: int
    kind: str  # send | silent | inject | quiescent
    sender: Optional[str] = None
    env: dict = field(default_factory=dict)
    pred: Optional[str] = None
    values: list = field(default_factory=list)
    outcomes: dict = field(default_factory=dict)
    note: Optional[str] = None

    def to_json(self) -> str:
        return json.dumps({
            "step": self.step,
            "kind": self.kind,
            "sender": self.sender,
            "env": {k: encode_value(v) for k, v in sorted(self.env.items())},
            "pred": self.pred,
            "values": [encode_value(v) for v in self.values],
            "outcomes": dict(self.outcomes),
            "note": self.note,
        })


def inject(system: System, component_id: str, attr: str, value) -> System:
    """Set one attribute of one component without producing a transition."""
    try:
        i = system.index(component_id)
    except KeyError:
        raise LoadError(f"inject: unknown component {component_id!r}") from None
    c = system.components[i]
    return system.replace(i, type(c)(c.id, update_env(c.env, attr, value), c.interface,
                                     c.process))


class _OutputCache:
    """Output transitions per component slot, reused while the slot is untouched."""

    def __init__(self, defs):
        self.defs = defs
        self.slots: dict = {}

    def get(self, i, comp):
        hit = self.slots.get(i)
        if hit is not None and hit[0] is comp:
            return hit[1]
        outs = component_outputs(comp, self.defs)
        self.slots[i] = (comp, outs)
        return outs


def run(system: System, config: SimConfig):
    """Simulate until quiescence or ``config.max_steps`` transitions.

    Returns ``(final_system, events)``.  Scripted injections due at step ``s``
    are applied before transition ``s``; if the system goes quiet with
    injections still pending, the next batch is applied at once.
    """
    rng = random.Random(config.seed)
    pending = sorted(config.injections, key=lambda inj: inj.step)
    events: list = []
    cache = _OutputCache(system.defs)
    pointer = 0
    step = 0
    n = len(system.components)

    def apply_due(sys, limit, note=None):
        while pending and pending[0].step <= limit:
            inj = pending.pop(0)
            sys = inject(sys, inj.component, inj.attr, inj.value)
            events.append(TraceEvent(step, "inject", inj.component, {inj.attr: inj.value},
                                     note=note))
        return sys

    try:
        while True:
            system = apply_due(system, step)
            comps = system.components
            enabled = [(i, cache.get(i, c)) for i, c in enumerate(comps)]
            enabled = [(i, outs) for i, outs in enabled if outs]
            if not enabled:
                if pending:
                    system = apply_due(system, pending[0].step, note="deferred")
                    continue
                events.append(TraceEvent(step, "quiescent"))
                break
            if step >= config.max_steps:
                break
            if config.scheduler == "rr":
                i, outs = min(enabled, key=lambda e: (e[0] - pointer) % n)
                pointer = (i + 1) % n
            else:
                i, outs = enabled[rng.randrange(len(enabled))]
            out = outs[rng.randrange(len(outs))] if len(outs) > 1 else outs[0]
            label = out.label
            new = list(comps)
            new[i] = out.successor
            outcomes = {}
            for j, c in enumerate(comps):
                if j == i:
                    continue
                if label.silent:
                    outcomes[c.id] = DISCARDED
                    continue
                trs = component_receive(c, label, system.defs)
                tr = trs[rng.randrange(len(trs))] if len(trs) > 1 else trs[0]
                outcomes[c.id] = ACCEPTED if tr.label.kind == IN else DISCARDED
                new[j] = tr.successor
            events.append(TraceEvent(step, "silent" if label.silent else "send", comps[i].id,
                                     dict(label.env), pp_pred(label.pred), list(label.values),
                                     outcomes))
            system = System(tuple(new), system.defs)
            step += 1
    except SemanticsAbort as exc:
        raise exc.at_step(step)
    finally:
        if config.trace_sink:
            write_trace(events, config.trace_sink)
    return system, events


def write_trace(events, path):
    with open(path, "w", encoding="utf-8") as fh:
        for ev in events:
            fh.write(ev.to_json() + "\n")


def trace_text(events) -> str:
    return "".join(ev.to_json() + "\n" for ev in events)


def replay(system: System, events) -> bool:
    """Check that every event of a trace is a transition of its pre-state.

    Tracks the set of states compatible with the trace, since a trace does not
    record which of several accepting inputs a receiver used.
    """
    states = [system]
    for ev in events:
        if ev.kind == "inject":
            ((attr, value),) = ev.env.items()
            states = [inject(s, ev.sender, attr, value) for s in states]
            continue
        if ev.kind == "quiescent":
            return any(quiescent(s) for s in states)
        nxt = []
        for s in states:
            for tr in system_step(s):
                sender = s.components[tr.sender]
                if (sender.id == ev.sender and tr.label.env == Env(ev.env)
                        and _same_values(tr.label.values, ev.values)
                        and pp_pred(tr.label.pred) == ev.pred
                        and tr.outcomes() == ev.outcomes
                        and tr.successor not in nxt):
                    nxt.append(tr.successor)
        if not nxt:
            return False
        states = nxt
    return True


def _same_values(a, b):
    from .values import value_eq
    return len(a) == len(b) and all(value_eq(x, y) for x, y in zip(a, b))


__all__ = [
    "SCHEDULERS", "SimConfig", "TraceEvent", "Injection", "inject", "quiescent", "run",
    "replay", "write_trace", "trace_text",
]
