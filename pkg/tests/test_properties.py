"""Property-based checks of the transition relations and the environment."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from abcalc.model import DISCARD, IN, Const, restrict, subst_pred
from abcalc.semantics import (
    _holds, close_predicate, component_outputs, component_receive, satisfies, system_step,
)

import strategies as st_abc

PROPS = settings(max_examples=1000, deadline=None, suppress_health_check=list(HealthCheck))


@PROPS
@given(st_abc.component_and_label())
def test_discard_iff_no_accept(case):
    comp, label, defs = case
    kinds = [t.label.kind for t in component_receive(comp, label, defs)]
    assert (DISCARD in kinds) == (IN not in kinds)
    assert kinds.count(DISCARD) <= 1


@PROPS
@given(st_abc.component_and_label())
def test_discard_leaves_component_unchanged(case):
    comp, label, defs = case
    for t in component_receive(comp, label, defs):
        if t.label.kind == DISCARD:
            assert t.successor == comp


@PROPS
@given(st_abc.component_and_label())
def test_accepts_keep_label_values_and_touch_known_attributes(case):
    """Updates happen within the accepting step and only write declared attributes."""
    comp, label, defs = case
    for t in component_receive(comp, label, defs):
        if t.label.kind == IN:
            assert t.label.values == label.values
            changed = {a for a in set(comp.env) | set(t.successor.env)
                       if comp.env.lookup(a) != t.successor.env.lookup(a)}
            assert changed <= set(st_abc.ATTRS)


@PROPS
@given(st_abc.components())
def test_output_label_env_is_the_interface(comp):
    for t in component_outputs(comp, st_abc.DEFS_P):
        assert set(t.label.env) == set(comp.interface)
        assert t.label.env == restrict(comp.env, comp.interface)


@PROPS
@given(st_abc.small_system())
def test_silent_moves_need_no_receivers(system):
    assert system_step(system) == system_step(system, full_delivery=True)


@PROPS
@given(st_abc.small_system())
def test_every_transition_has_one_sender(system):
    for t in system_step(system):
        assert t.delivery.count("sender") == 1
        assert t.delivery[t.sender] == "sender"


@PROPS
@given(st_abc.envs, st_abc.interfaces, st_abc.interfaces)
def test_restrict_is_idempotent_and_monotone(env, i, j):
    once = restrict(env, i)
    assert restrict(once, i) == once
    assert restrict(restrict(env, i | j), i) == once


@PROPS
@given(st_abc.envs, st.sampled_from(st_abc.ATTRS + ("z",)), st.integers(-3, 3))
def test_set_then_lookup(env, attr, value):
    new = env.set(attr, value)
    assert new.lookup(attr) == value
    for other in st_abc.ATTRS:
        if other != attr:
            assert new.lookup(other) == env.lookup(other)
    assert env.lookup(attr) != value or new == env


binding = st.fixed_dictionaries({"x": st_abc.ints, "y": st_abc.ints})


@PROPS
@given(st_abc.preds(bound=("x", "y"), depth=2), st_abc.envs, st_abc.envs, binding)
def test_direct_evaluation_matches_substitute_close_satisfy(pred, other, own, values):
    """Receivers evaluate predicates without building substituted, closed copies."""
    reference = satisfies(other, close_predicate(
        subst_pred(pred, {k: Const(v) for k, v in values.items()}), own))
    assert _holds(pred, other, own, values) == reference
