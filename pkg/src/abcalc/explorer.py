"""Bounded breadth-first construction of the reachable transition graph."""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from .model import Label, System
from .printer import pp_pred, pp_system
from .semantics import TransitionCache, system_step
from .values import encode_value

DEFAULT_DEPTH = 64
DEFAULT_STATES = 200_000


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    sender: str
    label: Label
    delivery: tuple


@dataclass
class TransitionGraph:
    states: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    initial: int = 0
    truncated: bool = False
    depth: list = field(default_factory=list)
    parent: list = field(default_factory=list)  # index into edges, None for the root
    expanded: list = field(default_factory=list)
    out_edges: list = field(default_factory=list)

    def successors(self, i):
        return [self.edges[k] for k in self.out_edges[i]]

    def terminal_states(self):
        """Expanded states without successors, i.e. quiescent ones."""
        return [i for i in range(len(self.states)) if self.expanded[i] and not self.out_edges[i]]

    def path_to(self, i) -> list:
        path = []
        while self.parent[i] is not None:
            e = self.edges[self.parent[i]]
            path.append(e)
            i = e.src
        return path[::-1]


def _key(system: System):
    return system.components


def explore(system: System, depth_bound: int = DEFAULT_DEPTH,
            state_bound: int = DEFAULT_STATES) -> TransitionGraph:
    if depth_bound < 0 or state_bound < 0:
        raise ValueError("bounds must be >= 0")
    g = TransitionGraph()
    if state_bound == 0:
        g.truncated = True
        return g
    index = {}

    def add(s, d, parent):
        index[_key(s)] = len(g.states)
        g.states.append(s)
        g.depth.append(d)
        g.parent.append(parent)
        g.expanded.append(False)
        g.out_edges.append([])
        return len(g.states) - 1

    cache = TransitionCache(system.defs)
    add(system, 0, None)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        s = g.states[i]
        transitions = system_step(s, cache=cache)
        if g.depth[i] >= depth_bound:
            if transitions:
                g.truncated = True
            continue
        g.expanded[i] = True
        for tr in transitions:
            k = _key(tr.successor)
            j = index.get(k)
            if j is None:
                if len(g.states) >= state_bound:
                    g.truncated = True
                    g.expanded[i] = False
                    continue
                j = add(tr.successor, g.depth[i] + 1, len(g.edges))
                queue.append(j)
            g.out_edges[i].append(len(g.edges))
            g.edges.append(Edge(i, j, s.components[tr.sender].id, tr.label, tr.delivery))
    return g


@dataclass
class Counterexample:
    state: int
    path: list

    def describe(self, graph: TransitionGraph) -> str:
        lines = [f"violation at state {self.state} after {len(self.path)} step(s)"]
        for n, e in enumerate(self.path):
            lines.append(f"  {n}: {e.sender} sends ({', '.join(map(repr, e.label.values))})"
                         f" @ {pp_pred(e.label.pred)}")
        lines.append("  state: " + pp_system(graph.states[self.state]).replace("\n", "\n         "))
        return "\n".join(lines)


def check_invariant(graph: TransitionGraph, prop: Callable[[System], bool]) -> Optional[Counterexample]:
    """None if every state satisfies ``prop``, else a shortest path to a violation."""
    for i, s in enumerate(graph.states):  # breadth-first order: first hit is shallowest
        if not prop(s):
            return Counterexample(i, graph.path_to(i))
    return None


def state_hash(system: System) -> str:
    return hashlib.sha256(pp_system(system).encode()).hexdigest()


def graph_to_json(graph: TransitionGraph) -> dict:
    return {
        "initial": graph.initial,
        "truncated": graph.truncated,
        "states": [{"hash": state_hash(s), "depth": d, "pretty": pp_system(s)}
                   for s, d in zip(graph.states, graph.depth)],
        "edges": [{
            "src": e.src, "dst": e.dst, "sender": e.sender,
            "env": {k: encode_value(v) for k, v in sorted(e.label.env.items())},
            "pred": pp_pred(e.label.pred),
            "values": [encode_value(v) for v in e.label.values],
            "delivery": list(e.delivery),
        } for e in graph.edges],
    }


def dump_graph(graph: TransitionGraph, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_json(graph), fh, indent=1)
