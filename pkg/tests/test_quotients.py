"""Takeuchi subspaces, generator selection and quotient presentations."""

import pytest

from sigma_groups.diff_ring import GroupSpec
from sigma_groups.groebner import INFINITE
from sigma_groups.quotients import (
    GROUP_LIKE,
    PRIMITIVE,
    generator_type,
    quotient_spec,
    takeuchi_subspace,
    verify_quotient_invariants,
)
from sigma_groups.textio import format_poly, parse_poly

P = parse_poly
GA = GroupSpec.parse([("Ga", 1)], [], "Ga")
GA_KILL = GroupSpec.parse([("Ga", 1)], ["s1(y1)"], "N")
GM = GroupSpec.parse([("Gm", 1)], [], "Gm")
MU2 = GroupSpec.parse([("Gm", 1)], ["y1^2 - 1"], "mu2")
PERIOD2 = GroupSpec.parse([("Gm", 1)], ["s2(y1) - y1"], "G")
PERIOD1 = GroupSpec.parse([("Gm", 1)], ["s2(y1) - y1", "s1(y1) - y1"], "N")


def texts(polys):
    return sorted(format_poly(p) for p in polys)


def test_takeuchi_additive():
    tb = takeuchi_subspace(GA, GA_KILL, D=1, level=3)
    assert texts(tb.basis) == texts([P(t) for t in ["1", "s1(y1)", "s2(y1)", "s3(y1)"]])


def test_takeuchi_n_equals_g_gives_constants():
    tb = takeuchi_subspace(MU2, MU2, D=2, level=1)
    assert texts(tb.basis) == ["1"]


def test_takeuchi_squares():
    tb = takeuchi_subspace(GM, MU2, D=2, level=1)
    got = {format_poly(b) for b in tb.basis}
    assert {"y1^2", "s1(y1)^2"} <= got


def test_takeuchi_needs_subgroup():
    with pytest.raises(ValueError):
        takeuchi_subspace(MU2, GM, D=1, level=0)


def test_generator_types():
    assert generator_type(P("y1^2"), GM, 0) == GROUP_LIKE
    assert generator_type(P("s1(y1)"), GA, 1) == PRIMITIVE
    assert generator_type(P("y1 + 1"), GA, 0) is None


def test_quotient_additive():
    res = quotient_spec(GA, GA_KILL)
    assert [format_poly(p) for _, p in res.generator_map] == ["s1(y1)"]
    assert res.quotient.ambient.to_json() == [{"kind": "Ga", "n": 1}]
    assert res.quotient.generators == ()
    assert res.generation_verified and res.kernel_ok and res.independent


def test_quotient_by_mu2():
    res = quotient_spec(GM, MU2)
    assert [format_poly(p) for _, p in res.generator_map][:1] == ["y1^2"]
    assert res.quotient.generators == ()
    assert res.takeuchi.generator_types[0] == GROUP_LIKE


def test_quotient_periodic():
    res = quotient_spec(PERIOD2, PERIOD1)
    rep = verify_quotient_invariants(PERIOD2, PERIOD1, res.quotient)
    assert rep.passed
    checks = {c[0]: c[1:] for c in rep.checks}
    assert checks["order"] == (2, 2, True)
    assert checks["limit_degree"] == (1, 1, True)


def test_trivial_quotient():
    res = quotient_spec(MU2, MU2)
    assert res.generator_map == ()
    assert res.quotient.ambient.factors == ()


def test_invariant_identities_with_infinity():
    res = quotient_spec(GM, MU2)
    rep = verify_quotient_invariants(GM, MU2, res.quotient)
    checks = {c[0]: c[1:] for c in rep.checks}
    assert checks["sigma_dim"] == (1, 1, True)
    assert checks["limit_degree"] == (INFINITE, INFINITE, True)
    assert rep.to_json()["passed"] is True
