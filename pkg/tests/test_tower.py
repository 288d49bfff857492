"""Towers of Zariski closures, growth groups and the invariants d, e, ld."""

import pytest

from sigma_groups.diff_ring import AmbientSpec, GroupSpec, trivial_group
from sigma_groups.errors import LevelNotBuilt, NotStabilized
from sigma_groups.groebner import INFINITE, MonomialOrder, groebner, ideal_equal, krull_dim
from sigma_groups.textio import parse_poly
from sigma_groups.tower import (
    build_tower,
    default_levels,
    growth_group,
    invariants,
    kernel_fiber,
    stabilization_level,
    tower_invariants,
)

P = parse_poly
UNITARY = ["s1(x1_1) - x2_2*idet", "s1(x1_2) + x2_1*idet",
           "s1(x2_1) + x1_2*idet", "s1(x2_2) - x1_1*idet"]


def spec(ambient, gens):
    return GroupSpec.parse(ambient, gens)


def ideal0(amb, gens):
    amb = AmbientSpec.of(*amb)
    return groebner([P(g) for g in gens] + amb.relations_exact(0), MonomialOrder.grevlex(amb.coords_exact(0)))


def shift_ideal(amb, gens, s):
    amb = AmbientSpec.of(*amb)
    return groebner([P(g) for g in gens] + amb.relations_exact(s), MonomialOrder.grevlex(amb.coords_exact(s)))


MU2 = spec([("Gm", 1)], ["y1*s1(y1)^2 - 1"])
MU3 = spec([("Gm", 1)], ["y1*s1(y1)^3 - 1"])
REC2 = spec([("Ga", 1)], ["s2(y1) + y1"])


def test_dims_free_gm():
    assert build_tower(spec([("Gm", 1)], []), 4).dims() == [1, 2, 3, 4, 5]


def test_dims_mu2():
    assert build_tower(MU2, 4).dims() == [1, 1, 1, 1, 1]


def test_dims_recurrence():
    assert build_tower(REC2, 5).dims() == [1, 2, 2, 2, 2, 2]


def test_dims_nondecreasing_and_consistent():
    t = build_tower(spec([("Gm", 2)], ["y1*s1(y2) - 1"]), 4)
    dims = t.dims()
    assert dims == sorted(dims)


def test_default_levels():
    assert default_levels(REC2) == 5
    assert default_levels(REC2, 3) == 6


def test_tower_needs_generator_levels():
    with pytest.raises(ValueError):
        build_tower(REC2, 1)


def test_level_not_built():
    t = build_tower(MU2, 3)
    with pytest.raises(LevelNotBuilt):
        t.level(4)
    with pytest.raises(LevelNotBuilt):
        kernel_fiber(t, 7)


# -- kernel fibers --------------------------------------------------------------------


def test_kernel_fiber_mu2():
    t = build_tower(MU2, 3)
    fib = kernel_fiber(t, 1)
    assert ideal_equal(fib, shift_ideal([("Gm", 1)], ["s1(y1)^2 - 1"], 1))
    assert t.level(1).fiber_vecdim == 2


def test_kernel_fiber_unitary_is_trivial():
    t = build_tower(spec([("GLn", 2)], UNITARY), 3)
    assert t.level(1).fiber_vecdim == 1


def test_kernel_fiber_free_ga():
    t = build_tower(spec([("Ga", 1)], []), 3)
    assert kernel_fiber(t, 1).is_zero()


def test_fiber_vecdims_nonincreasing():
    t = build_tower(MU3, 4)
    fv = [lv.fiber_vecdim for lv in t.levels[1:]]
    assert fv == [3, 3, 3, 3]


# -- stabilization and growth group ------------------------------------------------------


def test_stabilization_levels():
    assert stabilization_level(build_tower(MU2, 4)) == 1
    assert stabilization_level(build_tower(spec([("Gm", 1)], []), 4)) == 0
    assert stabilization_level(build_tower(trivial_group(AmbientSpec.of(("Gm", 1))), 3)) == 0


def test_not_stabilized_on_short_tower():
    t = build_tower(MU2, 1)
    with pytest.raises(NotStabilized) as exc:
        stabilization_level(t)
    assert exc.value.partial is t


def test_growth_groups():
    assert ideal_equal(growth_group(build_tower(MU3, 4)), ideal0([("Gm", 1)], ["y1^3 - 1"]))
    unitary = growth_group(build_tower(spec([("GLn", 2)], UNITARY), 3))
    triv = ideal0([("GLn", 2)], ["x1_1 - 1", "x1_2", "x2_1", "x2_2 - 1"])
    assert ideal_equal(unitary, triv)
    assert growth_group(build_tower(spec([("Ga", 1)], []), 3)).is_zero()


# -- invariants -------------------------------------------------------------------------


def test_invariants_mu2():
    rep = tower_invariants(MU2)
    assert (rep.m, rep.sigma_dim, rep.order, rep.limit_degree) == (1, 0, 1, 2)
    assert rep.verified


def test_invariants_recurrence():
    rep = tower_invariants(REC2)
    assert (rep.sigma_dim, rep.order, rep.limit_degree) == (0, 2, 1)


@pytest.mark.parametrize("kind", ["Gm", "Ga"])
def test_invariants_free(kind):
    rep = tower_invariants(spec([(kind, 1)], []))
    assert (rep.m, rep.sigma_dim, rep.order, rep.limit_degree) == (0, 1, INFINITE, INFINITE)


def test_infinite_markers_are_not_numbers():
    rep = tower_invariants(spec([("Gm", 1)], []))
    assert not isinstance(rep.order, int) and not isinstance(rep.limit_degree, int)
    js = rep.to_json()
    assert js["order"] == "infinite" and js["limit_degree"] == "infinite"


@pytest.mark.parametrize("gens", [["y1*s1(y1)^2 - 1"], ["y1^2*s2(y1)^2 - 1"], ["s1(y1) - y1"], []])
def test_sigma_dim_equals_growth_group_dimension(gens):
    t = build_tower(spec([("Gm", 1)], gens), 5)
    rep = invariants(t)
    gg = growth_group(t)
    assert krull_dim(gg) == rep.sigma_dim
    assert (rep.order == INFINITE) == (rep.sigma_dim > 0)
    assert (rep.limit_degree == INFINITE) == (rep.sigma_dim > 0)


@pytest.mark.parametrize("gens", [["y1*s1(y1)^2 - 1"], ["y1*s1(y1)^3 - 1"], ["y1^2*s2(y1)^2 - 1"], []])
def test_embedding_invariance(gens):
    gm = tower_invariants(spec([("Gm", 1)], gens))
    gl = tower_invariants(spec([("GLn", 1)], [g.replace("y1", "x1_1") for g in gens]))
    assert (gm.sigma_dim, gm.order, gm.limit_degree) == (gl.sigma_dim, gl.order, gl.limit_degree)


def test_report_json_shape():
    js = tower_invariants(MU2).to_json()
    assert set(js) >= {"m", "sigma_dim", "order", "limit_degree", "verified", "window", "growth_group"}
    assert js["growth_group"] == ["y1^2 - 1"]
