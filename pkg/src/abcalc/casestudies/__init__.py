"""Generators for the four case-study systems and their goal oracles."""

from ..semantics import quiescent
from .allocation import (
    AllocationSpec, InconsistentPartners, allocation_scenario, allocation_source,
    blocking_pairs, build_stable_allocation, check_stable_matching, example_spec, matching,
    proposal_bound, proposal_counts, random_spec,
)
from .colouring import (
    GRAPHS, GraphSpec, build_graph_colouring, check_proper_colouring, colouring_rounds,
    colouring_source, complete_graph, nonisomorphic_graphs, proper_when_assigned,
)
from .conference import (
    ConferenceSpec, Participant, Room, build_conference, check_dest_consistency,
    conference_scenario, conference_source, default_spec, dest_inconsistencies,
)
from .swarm import (
    SwarmSpec, battery_scenario, build_swarm, rescuer_count, roles, swarm_scenario,
    swarm_source, victim_scenario,
)


def _stable_or_false(system):
    try:
        return check_stable_matching(system)
    except InconsistentPartners:
        return False


def _at_quiescence(check):
    def prop(system):
        return not quiescent(system) or check(system)
    return prop


def _proposal_bound(system):
    clusters = sum(1 for c in system.components if "id_r" in c.env)
    limit = proposal_bound(clusters)
    return all(c.env["proposals"] <= limit for c in system.components if "proposals" in c.env)


# Named state properties usable with ``explore --check`` and ``check --oracle``.
ORACLES = {
    "proper-colouring": check_proper_colouring,
    "proper-when-assigned": proper_when_assigned,
    "stable-matching": _stable_or_false,
    "no-blocking-pair-at-quiescence": _at_quiescence(_stable_or_false),
    "proposal-bound": _proposal_bound,
    "dest-consistent": check_dest_consistency,
    "dest-consistent-at-quiescence": _at_quiescence(check_dest_consistency),
}

__all__ = [
    "AllocationSpec", "InconsistentPartners", "allocation_scenario", "allocation_source",
    "blocking_pairs", "build_stable_allocation", "check_stable_matching", "example_spec",
    "matching", "proposal_bound", "proposal_counts", "random_spec", "GRAPHS", "GraphSpec",
    "build_graph_colouring", "check_proper_colouring", "colouring_rounds", "colouring_source",
    "complete_graph", "nonisomorphic_graphs", "proper_when_assigned", "ConferenceSpec",
    "Participant", "Room", "build_conference", "check_dest_consistency",
    "conference_scenario", "conference_source", "default_spec", "dest_inconsistencies",
    "SwarmSpec", "battery_scenario", "build_swarm", "rescuer_count", "roles",
    "swarm_scenario", "swarm_source", "victim_scenario", "ORACLES",
]
