"""Distributed graph colouring: every vertex runs ``F | T | D | A``.

Vertices exchange ``("try", colour, round)`` and ``("done", colour, round)``
messages with their neighbours.  A vertex keeps its tentative colour when no
neighbour with a greater id picked the same one in that round.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..model import System
from ..parser import load_program
from ..values import UNDEF

COLOURING_DEFS = '''\
def F = <send && !assigned>
    set(colour, minex(this.used))
    ("try", this.colour, this.round)@(this.id in N).[send := ff]F;

def T = ((x = "try") && (this.id > id) && (this.round = z))(x, y, z).
            [counter := counter + 1]T
      + ((x = "try") && (this.id < id) && (this.round = z))(x, y, z).
            [counter := counter + 1, constraints := union(constraints, {y})]T
      + ((x = "try") && (this.id > id) && (this.round < z))(x, y, z).
            [round := z, send := tt, counter := 1, constraints := {}]T
      + ((x = "try") && (this.id < id) && (this.round < z))(x, y, z).
            [round := z, send := tt, counter := 1, constraints := {y}]T;

def D = ((x = "done") && (this.round >= z))(x, y, z).
            [done := done + 1, used := union(used, {y})]D
      + ((x = "done") && (this.round < z))(x, y, z).
            [round := z, done := done + 1, constraints := {}, send := tt, counter := 0,
             used := union(used, {y})]D;

def A = <(this.counter = card(this.N) - this.done)
         && (this.colour notin union(this.constraints, this.used))>
    ("done", this.colour, this.round + 1)@(this.id in N).[assigned := tt]0;
'''


@dataclass(frozen=True)
class GraphSpec:
    vertices: tuple
    adjacency: dict  # vertex -> frozenset of neighbours

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        adj = {v: frozenset(self.adjacency.get(v, ())) for v in self.vertices}
        object.__setattr__(self, "adjacency", adj)
        for v, ns in adj.items():
            if v in ns:
                raise ValueError(f"self-loop at vertex {v}")
            for w in ns:
                if w not in adj:
                    raise ValueError(f"vertex {v} lists unknown neighbour {w}")
                if v not in adj[w]:
                    raise ValueError(f"asymmetric adjacency: {w} in N{v} but {v} not in N{w}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "GraphSpec":
        adj = {v: set() for v in range(n)}
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        return cls(tuple(range(n)), adj)

    @property
    def edges(self) -> list:
        return sorted({tuple(sorted((v, w))) for v in self.vertices for w in self.adjacency[v]})


def complete_graph(n: int) -> GraphSpec:
    return GraphSpec.from_edges(n, itertools.combinations(range(n), 2))


def nonisomorphic_graphs(n: int) -> list:
    """One representative per isomorphism class of simple graphs on ``n`` vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    seen = set()
    result = []
    for mask in range(1 << len(pairs)):
        edges = [p for k, p in enumerate(pairs) if mask >> k & 1]
        canon = min(tuple(sorted(tuple(sorted((pi[a], pi[b]))) for a, b in edges))
                    for pi in perms)
        if canon not in seen:
            seen.add(canon)
            result.append(GraphSpec.from_edges(n, canon))
    return result


def _set_literal(items) -> str:
    return "{" + ", ".join(str(i) for i in sorted(items)) + "}"


def colouring_source(spec: GraphSpec) -> str:
    lines = ["# Distributed graph colouring.",
             f"# vertices: {len(spec.vertices)}, edges: {spec.edges}", "", COLOURING_DEFS]
    for v in spec.vertices:
        lines.append(
            f"component v{v} {{id = {v}, N = {_set_literal(spec.adjacency[v])}, round = 0, "
            f"done = 0, constraints = {{}}, used = {{}}, send = tt, assigned = ff, "
            f"counter = 0, colour = undef}} : {{id, N}} = F | T | D | A;")
    return "\n".join(lines) + "\n"


def build_graph_colouring(spec: GraphSpec) -> System:
    system, _ = load_program(colouring_source(spec))
    return system


def _vertex_table(system: System) -> dict:
    table = {}
    for c in system.components:
        env = c.env
        if "id" not in env or "N" not in env or "assigned" not in env:
            raise ValueError(f"component {c.id} is not a colouring vertex")
        table[env["id"]] = env
    return table


def _adjacent_conflict(table, require_assigned: bool) -> bool:
    for v, env in table.items():
        for w in env["N"]:
            other = table.get(w)
            if other is None:
                raise ValueError(f"vertex {v} names missing neighbour {w}")
            both = env["assigned"] is True and other["assigned"] is True
            if both and env["colour"] is not UNDEF and env["colour"] == other["colour"]:
                return True
            if require_assigned and not both:
                return True
    return False


def check_proper_colouring(system: System) -> bool:
    """Every vertex assigned and no edge joins two vertices of the same colour."""
    table = _vertex_table(system)
    if any(env["assigned"] is not True for env in table.values()):
        return False
    return not _adjacent_conflict(table, require_assigned=True)


def proper_when_assigned(system: System) -> bool:
    """No two adjacent vertices that are both assigned share a colour."""
    return not _adjacent_conflict(_vertex_table(system), require_assigned=False)


def colouring_rounds(events) -> int:
    """Number of rounds used: the largest round carried by a done-message."""
    rounds = [ev.values[2] for ev in events
              if ev.kind == "send" and ev.values and ev.values[0] == "done"]
    return max(rounds, default=0)


GRAPHS = {
    "k1": lambda: complete_graph(1),
    "k2": lambda: complete_graph(2),
    "k3": lambda: complete_graph(3),
    "k4": lambda: complete_graph(4),
    "p4": lambda: GraphSpec.from_edges(4, [(0, 1), (1, 2), (2, 3)]),
    "c4": lambda: GraphSpec.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
    "star4": lambda: GraphSpec.from_edges(4, [(0, 1), (0, 2), (0, 3)]),
}
