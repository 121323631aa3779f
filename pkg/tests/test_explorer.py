import json

from abcalc.explorer import check_invariant, dump_graph, explore, graph_to_json, state_hash
from abcalc.model import System
from abcalc.parser import load_program
from abcalc.semantics import system_step

COUNTERS = """
def Up = <k < 2>()@ff.[k := k + 1]Up;
component a {k = 0} : {} = Up;
component b {k = 0} : {} = Up;
"""


def brute_force_states(system, depth):
    """Reachable states by plain recursion, no interning or caches."""
    seen = {system.components}
    frontier = [system]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            for t in system_step(s):
                if t.successor.components not in seen:
                    seen.add(t.successor.components)
                    nxt.append(t.successor)
        frontier = nxt
    return seen


def test_counts_match_the_product_of_two_counters():
    system, _ = load_program(COUNTERS)
    g = explore(system)
    assert len(g.states) == 9 and len(g.edges) == 12 and not g.truncated
    assert {s.components for s in g.states} == brute_force_states(system, 10)
    (final,) = g.terminal_states()
    assert [c.env["k"] for c in g.states[final].components] == [2, 2]


def test_depth_and_state_bounds_set_truncation():
    system, _ = load_program(COUNTERS)
    g = explore(system, depth_bound=1)
    assert g.truncated and len(g.states) == 3
    g = explore(system, state_bound=4)
    assert g.truncated and len(g.states) == 4
    assert explore(system, state_bound=0).truncated


def test_counterexample_is_a_shortest_path():
    system, _ = load_program(COUNTERS)
    g = explore(system)
    cex = check_invariant(g, lambda s: sum(c.env["k"] for c in s.components) < 3)
    assert cex is not None and len(cex.path) == 3
    assert "violation" in cex.describe(g)
    assert check_invariant(g, lambda s: True) is None


def test_path_replays_from_initial_state():
    system, _ = load_program(COUNTERS)
    g = explore(system)
    for i in range(len(g.states)):
        state = g.states[g.initial]
        for edge in g.path_to(i):
            assert edge.src == g.states.index(state)
            state = g.states[edge.dst]
        assert state == g.states[i]


def test_graph_dump(tmp_path):
    system, _ = load_program(COUNTERS)
    g = explore(system)
    path = tmp_path / "g.json"
    dump_graph(g, str(path))
    data = json.loads(path.read_text())
    assert data == graph_to_json(g)
    assert len(data["states"]) == 9 and data["truncated"] is False
    assert data["states"][0]["hash"] == state_hash(system)


def test_empty_system():
    g = explore(System(()))
    assert len(g.states) == 1 and not g.edges and g.terminal_states() == [0]
