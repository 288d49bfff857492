"""Zariski-closure towers, growth groups and the numerical invariants.

Level i of the tower is the closure ideal I(G[i]) in the coordinates of
shifts 0..i.  The kernel fiber at level i is the fiber of the projection
G[i] -> G[i-1] over the identity, presented in the shift-i coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diff_ring import (
    DEFAULT_LOOKAHEAD,
    GroupSpec,
    level_closure,
    level_order,
    primary_part,
)
from .errors import LevelNotBuilt, NotStabilized
from .groebner import INFINITE, IdealBasis, MonomialOrder, groebner, ideal_equal, krull_dim, vecdim
from .polynomial import Polynomial
from .textio import format_poly


@dataclass(frozen=True)
class Level:
    i: int
    ideal: IdealBasis
    dim: int
    fiber: IdealBasis
    fiber_vecdim: object
    cor43_holds: bool
    verified: bool
    N: int

    def to_json(self):
        return {
            "i": self.i,
            "dim": self.dim,
            "fiber_vecdim": self.fiber_vecdim,
            "cor43_holds": self.cor43_holds,
            "verified": self.verified,
            "prolongation_depth": self.N,
            "ideal": [format_poly(g) for g in self.ideal.basis],
            "fiber": [format_poly(g) for g in self.fiber.basis],
        }


@dataclass(frozen=True)
class Tower:
    spec: GroupSpec
    levels: tuple
    lookahead: int

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def level(self, i: int) -> Level:
        if not 0 <= i < len(self.levels):
            raise LevelNotBuilt(f"level {i} not built (depth {self.depth})")
        return self.levels[i]

    def dims(self) -> list:
        return [lv.dim for lv in self.levels]

    def to_json(self):
        return {
            "spec": self.spec.to_json(),
            "lookahead": self.lookahead,
            "levels": [lv.to_json() for lv in self.levels],
        }


@dataclass(frozen=True)
class InvariantsReport:
    m: int
    sigma_dim: int
    order: object
    limit_degree: object
    verified: bool
    window: tuple = field(default=())
    growth_group: tuple = field(default=())
    notes: tuple = field(default=())

    def to_json(self):
        return {
            "m": self.m,
            "sigma_dim": self.sigma_dim,
            "order": self.order,
            "limit_degree": self.limit_degree,
            "verified": self.verified,
            "window": [list(w) for w in self.window],
            "growth_group": [format_poly(g) for g in self.growth_group],
            "notes": list(self.notes),
        }


def default_levels(spec: GroupSpec, lookahead: int = DEFAULT_LOOKAHEAD) -> int:
    return spec.order + lookahead + 1


def _fiber(spec: GroupSpec, ideal: IdealBasis, i: int) -> IdealBasis:
    amb = spec.ambient
    if ideal.is_unit():
        return groebner([Polynomial.const(1)], level_order(amb, 0))
    values = {v: Polynomial.const(amb.identity_value(v.base())) for v in amb.coords_at(i) if v.shift < i}
    gens = [g.substitute(values) for g in ideal.basis] if i else list(ideal.basis)
    return groebner(gens + amb.relations_exact(i), MonomialOrder.grevlex(amb.coords_exact(i)))


def build_tower(spec: GroupSpec, L: int | None = None, lookahead: int = DEFAULT_LOOKAHEAD,
                cap_extra: int | None = None) -> Tower:
    """Closure ideals, dimensions and kernel fibers for levels 0..L."""
    if L is None:
        L = default_levels(spec, lookahead)
    if L < spec.order:
        raise ValueError(f"need at least {spec.order} levels to see every generator")
    levels = []
    for i in range(L + 1):
        cap = None if cap_extra is None else i + cap_extra
        lc = level_closure(spec, i, lookahead, cap)
        dim = krull_dim(lc.ideal) if not lc.ideal.is_unit() else -1
        fib = _fiber(spec, lc.ideal, i)
        levels.append(Level(i, lc.ideal, dim, fib, vecdim(fib), lc.cor43_holds, lc.verified, lc.N))
    return Tower(spec, tuple(levels), lookahead)


def kernel_fiber(tower: Tower, i: int) -> IdealBasis:
    """Presentation of the kernel of G[i] -> G[i-1] in the shift-i coordinates.

    Level 0 has no predecessor and returns I(G[0]) itself.
    """
    return tower.level(i).fiber


def _normalized_fiber(tower: Tower, i: int) -> IdealBasis:
    """The level-i fiber renamed to shift-0 coordinates."""
    fib = tower.level(i).fiber
    amb = tower.spec.ambient
    gens = [g.map_vars(lambda v: v.shifted(-i)) for g in fib.basis]
    return groebner(gens, MonomialOrder.grevlex(amb.coords_exact(0)))


def stabilization_level(tower: Tower) -> int:
    """Smallest m after which every level satisfies the successor identity and repeats its fiber."""
    L = tower.depth
    m = L
    for i in range(L, 0, -1):
        lv = tower.level(i)
        if not lv.cor43_holds:
            break
        if not ideal_equal(_normalized_fiber(tower, i), _normalized_fiber(tower, i - 1)):
            break
        m = i - 1
    if L - m < tower.lookahead:
        raise NotStabilized(
            f"tower of depth {L} shows no stable window of {tower.lookahead} levels "
            f"(last change at level {m})",
            partial=tower,
        )
    return m


def growth_group(tower: Tower) -> IdealBasis:
    """Kernel fiber at the stabilization level, as a subgroup of the ambient (shift 0)."""
    return _normalized_fiber(tower, stabilization_level(tower))


def _fit_window(dims):
    """Longest suffix on which the dimension sequence is affine in i."""
    n = len(dims)
    start = n - 1
    if n >= 2:
        start = n - 2
        while start > 0 and dims[start] - dims[start - 1] == dims[start + 1] - dims[start]:
            start -= 1
    return start


def invariants(tower: Tower) -> InvariantsReport:
    """sigma-dimension, order, limit degree and stabilization level of the tower."""
    m = stabilization_level(tower)
    dims = tower.dims()
    L = tower.depth
    start = _fit_window(dims)
    start = max(start, 0)
    window = tuple((i, dims[i]) for i in range(start, L + 1))
    notes = []
    if L >= 1:
        d = dims[L] - dims[L - 1]
    else:
        d = 0
    e = dims[L] - d * (L + 1)
    verified = len(window) >= tower.lookahead + 1
    if not verified:
        notes.append(f"affine window of {len(window)} levels is shorter than lookahead+1")
    if not all(tower.level(i).verified for i in range(L + 1)):
        verified = False
        notes.append("some closure level failed the successor identity")
    if e < 0:
        verified = False
        notes.append("negative order on the fitted window")
    gg = _normalized_fiber(tower, m)
    gdim = krull_dim(gg) if not gg.is_unit() else -1
    if gdim != d:
        verified = False
        notes.append(f"growth group dimension {gdim} differs from sigma-dimension {d}")
    if d == 0:
        order = e
        ld = tower.level(m).fiber_vecdim
    else:
        order = INFINITE
        ld = INFINITE
    return InvariantsReport(m, d, order, ld, verified, window, primary_part(tower.spec.ambient, gg), tuple(notes))


def tower_invariants(spec: GroupSpec, L: int | None = None, lookahead: int = DEFAULT_LOOKAHEAD) -> InvariantsReport:
    return invariants(build_tower(spec, L, lookahead))
