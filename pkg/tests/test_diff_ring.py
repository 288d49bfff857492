"""Shift, prolongation, level closures and the bounded closure operations."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigma_groups.diff_ring import (
    AmbientSpec,
    GroupSpec,
    closure_ideal,
    level_closure,
    level_order,
    perfect_closure_step,
    prolongation_ideal,
    reflexive_closure,
    shift,
    shift_down,
    sigma_generators,
    trivial_group,
)
from sigma_groups.errors import BudgetExceeded, LevelTooSmall
from sigma_groups.groebner import groebner, ideal_contains, ideal_equal, normal_form
from sigma_groups.textio import format_poly, parse_poly

P = parse_poly


def spec(ambient, gens, name=""):
    return GroupSpec.parse(ambient, gens, name)


def ideal_of(ambient, gens, level):
    amb = AmbientSpec.of(*ambient)
    return groebner([P(g) for g in gens] + amb.relations(level), level_order(amb, level))


MU2 = spec([("Gm", 1)], ["y1*s1(y1)^2 - 1"], "mu2")
REC2 = spec([("Ga", 1)], ["s2(y1) + y1"])
KILL = spec([("Ga", 1)], ["s1(y1)"])


# -- shift ---------------------------------------------------------------------------


def test_shift_examples():
    assert shift(P("y1 + 2"), 1) == P("s1(y1) + 2")
    p = P("y1*s1(x1_2) - iy3")
    assert shift(p, 0) == p
    assert shift(shift(p, 1), 1) == shift(p, 2)
    assert shift_down(shift(p, 3), 3) == p


def test_shift_down_below_zero():
    with pytest.raises(ValueError):
        shift_down(P("y1 + s1(y1)"))


_ATOMS = ["y1", "s1(y1)", "y2", "s2(y2)", "x1_1", "iy1", "3", "1/2"]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(_ATOMS), min_size=1, max_size=4),
       st.lists(st.sampled_from(_ATOMS), min_size=1, max_size=4),
       st.integers(0, 3))
def test_shift_is_a_ring_map(a, b, t):
    p = sum((P(x) for x in a), P("0"))
    q = P("1")
    for x in b:
        q = q * P(x)
    assert shift(p * q, t) == shift(p, t) * shift(q, t)
    assert shift(p + q, t) == shift(p, t) + shift(q, t)


# -- ambient -------------------------------------------------------------------------


def test_ambient_coordinates():
    amb = AmbientSpec.of(("Ga", 1), ("Gm", 1), ("GLn", 2))
    assert [format_poly(P(t)) for t in ["y1", "y2", "iy2", "idet"]] == [
        "y1", "y2", "iy2", "idet"]
    assert {next(iter(P(t).variables())) for t in ["y1", "iy2", "x2_1", "idet"]} <= set(amb.coords())
    assert amb.dim() == 6
    assert len(amb.coords_at(1)) == 2 * len(amb.coords())
    assert not amb.is_abelian()
    assert len(amb.relations(2)) == 6


def test_ambient_json_roundtrip():
    amb = AmbientSpec.of(("Gm", 2), ("Ga", 1))
    assert AmbientSpec.from_json(amb.to_json()) == amb


def test_spec_json_roundtrip():
    g = spec([("Gm", 1), ("GLn", 2)], ["y1^2 - 1", "s1(x1_2)"], "demo")
    again = GroupSpec.from_json(g.to_json())
    assert again == g and again.name == "demo"


def test_spec_rejects_foreign_coordinates():
    with pytest.raises(ValueError):
        spec([("Ga", 1)], ["y2"])
    with pytest.raises(ValueError):
        spec([("Ga", 1)], ["iy1"])


def test_spec_order():
    assert MU2.order == 1
    assert REC2.order == 2
    assert spec([("Ga", 1)], []).order == 0


# -- prolongation ----------------------------------------------------------------


def test_prolongation_mu2_level0_is_free():
    ideal = prolongation_ideal(MU2, 0, 1)
    assert ideal_equal(ideal, ideal_of([("Gm", 1)], [], 0))


def test_prolongation_generators_at_level():
    ideal = prolongation_ideal(KILL, 2, 2)
    assert ideal_equal(ideal, ideal_of([("Ga", 1)], ["s1(y1)", "s2(y1)"], 2))


def test_prolongation_recurrence_has_no_low_consequence():
    assert prolongation_ideal(REC2, 1, 3).is_zero()


def test_prolongation_level_too_small():
    with pytest.raises(LevelTooSmall):
        prolongation_ideal(REC2, 3, 2)


def test_prolongation_is_monotone_in_N():
    g = spec([("Gm", 1)], ["y1^2*s1(y1)^2 - 1"])
    prev = prolongation_ideal(g, 1, 1)
    for N in range(2, 5):
        cur = prolongation_ideal(g, 1, N)
        assert ideal_contains(cur, prev)
        prev = cur


# -- level closures ----------------------------------------------------------------


def test_closure_mu2_level1():
    ideal, verified = closure_ideal(MU2, 1)
    assert verified
    assert ideal_equal(ideal, ideal_of([("Gm", 1)], ["y1*s1(y1)^2 - 1"], 1))


def test_closure_kill_level0_is_free():
    ideal, verified = closure_ideal(KILL, 0)
    assert verified and ideal.is_zero()


@pytest.mark.parametrize("i", [0, 1, 2])
def test_closure_trivial_group(i):
    ideal, verified = closure_ideal(trivial_group(AmbientSpec.of(("Ga", 1))), i)
    assert verified
    assert ideal_equal(ideal, ideal_of([("Ga", 1)], [f"s{t}(y1)" for t in range(i + 1)], i))


def test_closure_hidden_consequence():
    # y1 = 1 and s1(y1) = y1^2 force nothing new, but y1^2 = s1(y1), s1(y1)^2 = y1 give y1^4 = y1
    g = spec([("Ga", 1)], ["s1(y1) - y1^2", "s2(y1) - y1"])
    ideal, _ = closure_ideal(g, 0)
    assert normal_form(P("y1^4 - y1"), ideal).is_zero()
    assert not ideal.is_zero()


@pytest.mark.parametrize("g", [MU2, REC2, spec([("Gm", 1)], ["y1^2 - 1"])])
def test_contraction_consistency(g):
    for i in range(1, 3):
        low, _ = closure_ideal(g, i - 1)
        high, _ = closure_ideal(g, i)
        below = [b for b in high.basis if b.max_shift() <= i - 1]
        assert ideal_equal(groebner(below, level_order(g.ambient, i - 1)), low)


def test_closure_lookahead_must_be_positive():
    with pytest.raises(ValueError):
        closure_ideal(MU2, 1, lookahead=0)


def test_closure_budget():
    with pytest.raises(BudgetExceeded):
        closure_ideal(REC2, 1, cap=2)


def test_level_closure_metadata():
    res = level_closure(MU2, 2)
    assert res.cor43_holds and res.verified and res.N >= 2


# -- reflexive and perfect closures ------------------------------------------------


def test_reflexive_closure_kill():
    res = reflexive_closure(KILL, 2)
    assert res.closed_flag
    assert P("y1") in res.generators


def test_reflexive_closure_cube_roots():
    res = reflexive_closure(spec([("Gm", 1)], ["y1^3 - 1", "s1(y1) - 1"]), 2)
    assert res.closed_flag
    ideal = res.ideal(AmbientSpec.of(("Gm", 1)))
    assert normal_form(P("y1 - 1"), ideal).is_zero()


def test_reflexive_closure_fixpoint():
    res = reflexive_closure(spec([("Ga", 1)], ["y1"]), 1)
    assert res.closed_flag and res.added == ()


@pytest.mark.parametrize("g", [MU2, KILL, REC2, spec([("Gm", 1)], ["y1^3 - 1", "s1(y1) - 1"])])
def test_reflexive_closure_is_idempotent(g):
    bound = max(g.order, 2)
    once = reflexive_closure(g, bound)
    twice = reflexive_closure(GroupSpec(g.ambient, once.generators), bound)
    assert ideal_equal(once.ideal(g.ambient), twice.ideal(g.ambient))
    base = groebner(list(g.generators) + g.ambient.relations(bound), level_order(g.ambient, bound))
    assert ideal_contains(once.ideal(g.ambient), base)


def test_perfect_step_mixing():
    res = perfect_closure_step([P("y1*s1(y1)")], spec([("Ga", 1)], []), 3)
    assert not res.closed_flag
    assert normal_form(P("y1*s2(y1)"), res.ideal(AmbientSpec.of(("Ga", 1)))).is_zero()


def test_perfect_step_radical():
    res = perfect_closure_step([P("y1^2")], spec([("Ga", 1)], []), 1)
    assert P("y1") in res.added


def test_perfect_step_already_perfect():
    res = perfect_closure_step([P("y1")], spec([("Ga", 1)], []), 1)
    assert res.closed_flag and res.added == ()


# -- sigma generators ------------------------------------------------------------------


def test_sigma_generators_drop_shifts():
    amb = AmbientSpec.of(("Gm", 1))
    ideal = ideal_of([("Gm", 1)], ["y1^2 - 1", "s1(y1)^2 - 1", "s2(y1)^2 - 1"], 2)
    assert sigma_generators(amb, ideal, 2) == (P("y1^2 - 1"),)
