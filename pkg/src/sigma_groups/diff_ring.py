"""Ambient groups, difference-polynomial group specs, prolongation and closures.

The base field is Q with the shift acting trivially on constants, so the
shift endomorphism is the pure index bump ``s^t(y) -> s^(t+1)(y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterable

from .errors import BudgetExceeded, LevelTooSmall
from .groebner import (
    IdealBasis,
    MonomialOrder,
    eliminate,
    groebner,
    ideal_equal,
    normal_form,
)
from .polynomial import Polynomial, Q, VarId
from .textio import format_poly, parse_poly

KINDS = ("Ga", "Gm", "GLn")
DEFAULT_LOOKAHEAD = 2
DEFAULT_CAP_EXTRA = 8


@dataclass(frozen=True)
class Factor:
    kind: str
    n: int
    offset: int = 0  # index of the first y-coordinate for Ga/Gm factors

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("factor size must be >= 1")


def _det(matrix):
    """Determinant by Leibniz expansion (n is tiny)."""
    n = len(matrix)
    total = Polynomial()
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for a in range(n):
            for b in range(a + 1, n):
                if seen[a] > seen[b]:
                    sign = -sign
        term = Polynomial.const(sign)
        for r, c in enumerate(perm):
            term = term * matrix[r][c]
        total = total + term
    return total


@dataclass(frozen=True)
class AmbientSpec:
    """Product of basic algebraic groups G_a^n, G_m^n, GL_n.

    G_a and G_m coordinates are numbered ``y1, y2, ...`` consecutively across
    factors; a G_m coordinate ``yj`` has inverse ``iyj``.  At most one GL_n
    factor is allowed; its entries are ``xj_k`` with inverse determinant
    ``idet``.
    """

    factors: tuple

    @classmethod
    def of(cls, *pairs) -> "AmbientSpec":
        factors = []
        offset = 0
        for kind, n in pairs:
            factors.append(Factor(kind, n, offset if kind != "GLn" else 0))
            if kind != "GLn":
                offset += n
        if sum(1 for f in factors if f.kind == "GLn") > 1:
            raise ValueError("at most one GLn factor is supported")
        return cls(tuple(factors))

    # -- coordinates ----------------------------------------------------
    def coords(self) -> tuple:
        """Shift-0 coordinates, inverse markers included."""
        out = []
        for f in self.factors:
            if f.kind == "GLn":
                out += [VarId("x", (j, k)) for j in range(1, f.n + 1) for k in range(1, f.n + 1)]
                out.append(VarId("idet", ()))
            else:
                for j in range(f.offset + 1, f.offset + f.n + 1):
                    out.append(VarId("y", (j,)))
                    if f.kind == "Gm":
                        out.append(VarId("iy", (j,)))
        return tuple(out)

    def primary_coords(self) -> tuple:
        return tuple(v for v in self.coords() if v.kind in ("x", "y"))

    def coords_at(self, level: int) -> tuple:
        return tuple(v.at(s) for s in range(level + 1) for v in self.coords())

    def coords_exact(self, shift: int) -> tuple:
        return tuple(v.at(shift) for v in self.coords())

    def factor_of(self, v: VarId) -> Factor:
        for f in self.factors:
            if f.kind == "GLn" and v.kind in ("x", "idet"):
                return f
            if f.kind != "GLn" and v.kind in ("y", "iy") and f.offset < v.index[0] <= f.offset + f.n:
                return f
        raise KeyError(f"{v} is not a coordinate of this ambient")

    def gl_size(self) -> int:
        for f in self.factors:
            if f.kind == "GLn":
                return f.n
        return 0

    def matrix(self, shift: int = 0, copy: str = ""):
        n = self.gl_size()
        return [
            [Polynomial.var(VarId("x", (j, k), shift, copy)) for k in range(1, n + 1)]
            for j in range(1, n + 1)
        ]

    def dim(self) -> int:
        return sum(f.n * f.n if f.kind == "GLn" else f.n for f in self.factors)

    def is_abelian(self) -> bool:
        return all(f.kind != "GLn" or f.n == 1 for f in self.factors)

    # -- structure ------------------------------------------------------
    def relations_exact(self, shift: int, copy: str = "") -> list:
        """Rabinowitsch relations for the coordinates at one shift."""
        rels = []
        for f in self.factors:
            if f.kind == "Gm":
                for j in range(f.offset + 1, f.offset + f.n + 1):
                    y = Polynomial.var(VarId("y", (j,), shift, copy))
                    iy = Polynomial.var(VarId("iy", (j,), shift, copy))
                    rels.append(y * iy - 1)
            elif f.kind == "GLn":
                det = _det(self.matrix(shift, copy))
                rels.append(Polynomial.var(VarId("idet", (), shift, copy)) * det - 1)
        return rels

    def relations(self, level: int, copy: str = "") -> list:
        return [r for s in range(level + 1) for r in self.relations_exact(s, copy)]

    def identity_value(self, v: VarId):
        """Value of coordinate ``v`` at the identity element."""
        if v.kind == "x":
            return Q(1) if v.index[0] == v.index[1] else Q(0)
        if v.kind in ("idet", "iy"):
            return Q(1)
        if self.factor_of(v).kind == "Gm":
            return Q(1)
        return Q(0)

    def to_json(self):
        return [{"kind": f.kind, "n": f.n} for f in self.factors]

    @classmethod
    def from_json(cls, data) -> "AmbientSpec":
        return cls.of(*[(d["kind"], int(d["n"])) for d in data])


def shift(p: Polynomial, t: int) -> Polynomial:
    """Apply the shift ``t`` times: every variable index moves up by ``t``."""
    if t == 0:
        return p
    return p.map_vars(lambda v: v.shifted(t))


def shift_down(p: Polynomial, t: int = 1) -> Polynomial:
    if p.min_shift() < t and not p.is_constant():
        raise ValueError("cannot shift below level 0")
    return p.map_vars(lambda v: v.shifted(-t))


def order_of(p: Polynomial) -> int:
    return p.max_shift()


@dataclass(frozen=True)
class GroupSpec:
    """A sigma-closed subgroup of an ambient group given by difference-polynomial generators."""

    ambient: AmbientSpec
    generators: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        coords = set(self.ambient.coords())
        for g in self.generators:
            for v in g.variables():
                if v.copy or v.base() not in coords:
                    raise ValueError(f"generator uses {v}, which is not an ambient coordinate")

    @property
    def order(self) -> int:
        return max((order_of(g) for g in self.generators), default=0)

    def with_generators(self, gens: Iterable[Polynomial], name: str | None = None) -> "GroupSpec":
        seen = []
        for g in list(self.generators) + list(gens):
            if g and g not in seen:
                seen.append(g)
        return GroupSpec(self.ambient, tuple(seen), self.name if name is None else name)

    def to_json(self):
        return {
            "name": self.name,
            "ambient": self.ambient.to_json(),
            "generators": [format_poly(g) for g in self.generators],
        }

    @classmethod
    def from_json(cls, data) -> "GroupSpec":
        return cls(
            AmbientSpec.from_json(data["ambient"]),
            tuple(parse_poly(t) for t in data.get("generators", [])),
            data.get("name", ""),
        )

    @classmethod
    def parse(cls, ambient, gens: Iterable[str], name: str = "") -> "GroupSpec":
        if not isinstance(ambient, AmbientSpec):
            ambient = AmbientSpec.of(*ambient)
        return cls(ambient, tuple(parse_poly(t) for t in gens), name)


def free_group(ambient: AmbientSpec, name: str = "") -> GroupSpec:
    return GroupSpec(ambient, (), name)


def augmentation_generators(ambient: AmbientSpec, level: int = 0) -> list:
    return [
        Polynomial.var(v.at(s)) - ambient.identity_value(v)
        for s in range(level + 1)
        for v in ambient.primary_coords()
    ]


def trivial_group(ambient: AmbientSpec, name: str = "trivial") -> GroupSpec:
    return GroupSpec(ambient, tuple(augmentation_generators(ambient, 0)), name)


# -- prolongation ---------------------------------------------------------


def level_order(ambient: AmbientSpec, level: int, copy: str = "") -> MonomialOrder:
    """Block order, one grevlex block per shift, highest shift largest.

    Every cut between shifts is an elimination order, so one Gröbner basis
    yields the contraction to each lower level at once.
    """
    blocks = [
        [v._replace(copy=copy) for v in ambient.coords_exact(s)] for s in range(level, -1, -1)
    ]
    return MonomialOrder.block(*blocks)


def prolonged_generators(spec: GroupSpec, N: int) -> list:
    gens = []
    for f in spec.generators:
        r = order_of(f)
        for t in range(0, N - r + 1):
            gens.append(shift(f, t))
    return gens + spec.ambient.relations(N)


@lru_cache(maxsize=512)
def _prolonged_gb(spec: GroupSpec, N: int) -> IdealBasis:
    return groebner(prolonged_generators(spec, N), level_order(spec.ambient, N))


def truncate(ideal: IdealBasis, ambient: AmbientSpec, i: int) -> IdealBasis:
    """Contraction of a level-ordered Gröbner basis to shifts <= i."""
    sel = tuple(g for g in ideal.basis if g.max_shift() <= i)
    if ideal.is_unit():
        sel = ideal.basis
    return IdealBasis(sel, level_order(ambient, i), sel)


def prolongation_ideal(spec: GroupSpec, i: int, N: int) -> IdealBasis:
    """Shifts of the generators up to level N, contracted to shifts <= i."""
    if N < i:
        raise LevelTooSmall(f"N={N} must be at least i={i}")
    return truncate(_prolonged_gb(spec, N), spec.ambient, i)


@dataclass(frozen=True)
class LevelClosure:
    ideal: IdealBasis
    verified: bool
    stabilized: bool
    cor43_holds: bool
    N: int


def same_ideal(a: IdealBasis, b: IdealBasis) -> bool:
    if a.order == b.order:
        return set(a.basis) == set(b.basis)
    return ideal_equal(a, b)


def successor_ideal(ambient: AmbientSpec, prev: IdealBasis, i: int) -> IdealBasis:
    """``<I, shift(I)>`` plus ambient relations, at level ``i``."""
    gens = list(prev.basis) + [shift(g, 1) for g in prev.basis] + ambient.relations(i)
    return groebner(gens, level_order(ambient, i))


@lru_cache(maxsize=1024)
def _closure(spec: GroupSpec, i: int, lookahead: int, cap: int) -> LevelClosure:
    N = i
    while True:
        if N + lookahead > cap:
            raise BudgetExceeded(
                f"closure at level {i} did not stabilize with prolongation cap {cap}"
            )
        a = prolongation_ideal(spec, i, N)
        b = prolongation_ideal(spec, i, N + lookahead)
        if same_ideal(a, b):
            break
        N += 1
    ideal = b
    if i == 0:
        cor43 = True
    else:
        prev = _closure(spec, i - 1, lookahead, max(cap - 1, i - 1 + lookahead))
        cor43 = same_ideal(successor_ideal(spec.ambient, prev.ideal, i), ideal)
    verified = cor43 or i <= spec.order
    return LevelClosure(ideal, verified, True, cor43, N)


def closure_ideal(spec: GroupSpec, i: int, lookahead: int = DEFAULT_LOOKAHEAD, cap: int | None = None):
    """Defining ideal of the level-i Zariski closure and a verification flag.

    The prolongation depth N grows until the contraction agrees with the one
    ``lookahead`` levels deeper.  ``verified`` additionally requires the
    successor identity ``I_i = <I_{i-1}, shift(I_{i-1})>`` unless level i still
    sees generators directly (i <= order of the spec).
    """
    if lookahead < 1:
        raise ValueError("lookahead must be >= 1")
    if cap is None:
        cap = i + DEFAULT_CAP_EXTRA
    res = _closure(spec, i, lookahead, cap)
    return res.ideal, res.verified


def level_closure(spec: GroupSpec, i: int, lookahead: int = DEFAULT_LOOKAHEAD, cap: int | None = None) -> LevelClosure:
    if cap is None:
        cap = i + DEFAULT_CAP_EXTRA
    return _closure(spec, i, lookahead, cap)


# -- closures of sigma-ideals ------------------------------------------------


@dataclass(frozen=True)
class ClosureResult:
    generators: tuple
    kind: str
    bound: int
    closed_flag: bool
    added: tuple = field(default=())

    def ideal(self, ambient: AmbientSpec) -> IdealBasis:
        gens = list(self.generators) + ambient.relations(self.bound)
        return groebner(gens, level_order(ambient, self.bound))


def _truncated_sigma_ideal(ambient, gens, bound) -> IdealBasis:
    full = []
    for g in gens:
        for t in range(0, bound - order_of(g) + 1):
            full.append(shift(g, t))
    return groebner(full + ambient.relations(bound), level_order(ambient, bound))


def primary_part(ambient: AmbientSpec, ideal: IdealBasis) -> tuple:
    """Basis of the contraction to non-inverse coordinates.

    Together with the ambient relations it generates the whole ideal, since
    every inverse coordinate is determined by its partner.
    """
    if ideal.is_unit():
        return (Polynomial.const(1),)
    primary = [v for v in ideal.ring if v.kind in ("x", "y")]
    return eliminate(ideal, primary).basis


def _reflexive_pass(ambient, ideal: IdealBasis, bound: int):
    upper = [v for v in ambient.coords_at(bound) if v.shift >= 1]
    contracted = eliminate(ideal, upper)
    return [shift_down(g) for g in contracted.basis]


def reflexive_closure(spec: GroupSpec, bound: int, max_rounds: int | None = None) -> ClosureResult:
    """Bounded reflexive closure: adjoin every f with shift(f) in the ideal."""
    if bound < spec.order:
        raise LevelTooSmall("bound must be at least the generator order")
    amb = spec.ambient
    gens = list(spec.generators)
    ideal = _truncated_sigma_ideal(amb, gens, bound)
    rounds = bound + 1 if max_rounds is None else max_rounds
    added = []
    closed = False
    for _ in range(rounds):
        new = [p for p in _reflexive_pass(amb, ideal, bound) if not normal_form(p, ideal).is_zero()]
        if not new:
            closed = True
            break
        gens += new
        added += new
        ideal = _truncated_sigma_ideal(amb, gens, bound)
    return ClosureResult(primary_part(amb, ideal), "reflexive", bound, closed, tuple(added))


def _monomial_split(p: Polynomial):
    """Split p = f*g syntactically: a common variable factor, or a bare monomial."""
    terms = list(p.items())
    if len(terms) == 1:
        m, c = terms[0]
        if len(m) >= 2 or (len(m) == 1 and m[0][1] >= 2):
            v, e = m[0]
            f = Polynomial.monomial({v: 1})
            return f, Polynomial({_divide_mono(m, v): c})
        return None
    common = None
    for m, _ in terms:
        exps = dict(m)
        common = exps if common is None else {v: min(e, exps.get(v, 0)) for v, e in common.items()}
    common = {v: e for v, e in (common or {}).items() if e}
    if not common:
        return None
    v = min(common, key=lambda x: (x.shift, x))
    f = Polynomial.monomial({v: 1})
    g = Polynomial({_divide_mono(m, v): c for m, c in terms})
    return f, g


def _divide_mono(m, v):
    out = []
    for w, e in m:
        if w == v:
            if e > 1:
                out.append((w, e - 1))
        else:
            out.append((w, e))
    return tuple(out)


def perfect_closure_step(gens: Iterable[Polynomial], spec: GroupSpec, bound: int) -> ClosureResult:
    """One bounded enrichment pass toward the perfect closure.

    Applies the reflexive closure, then the mixing rule ``f*g in I =>
    f*shift(g) in I`` on syntactically factored basis elements, then adjoins
    squarefree parts of univariate eliminants.  ``closed_flag`` is set only
    when nothing new was found.
    """
    from .univariate import squarefree_part, to_univariate, from_univariate

    amb = spec.ambient
    base = spec.with_generators(gens)
    if bound < base.order:
        raise LevelTooSmall("bound must be at least the generator order")
    refl = reflexive_closure(base, bound)
    current = list(base.generators) + list(refl.added)
    ideal = _truncated_sigma_ideal(amb, current, bound)
    added = list(refl.added)

    mixed = []
    for b in ideal.basis:
        split = _monomial_split(b)
        if split is None:
            continue
        f, g = split
        for cand in (f * shift(g, 1), g * shift(f, 1)):
            if cand.max_shift() <= bound and not normal_form(cand, ideal).is_zero():
                if cand.monic() not in [m.monic() for m in mixed]:
                    mixed.append(cand)
    if mixed:
        current += mixed
        added += mixed
        ideal = _truncated_sigma_ideal(amb, current, bound)

    radical = []
    if not ideal.is_unit():
        for v in amb.coords_at(bound):
            elim = eliminate(ideal, [v])
            for g in elim.basis:
                if g.is_constant():
                    continue
                sq = from_univariate(squarefree_part(to_univariate(g, v)), v)
                if not normal_form(sq, ideal).is_zero():
                    radical.append(sq)
    if radical:
        current += radical
        added += radical
        ideal = _truncated_sigma_ideal(amb, current, bound)

    closed = not added
    return ClosureResult(primary_part(amb, ideal), "perfect", bound, closed, tuple(added))


def sigma_generators(ambient: AmbientSpec, ideal: IdealBasis, level: int) -> tuple:
    """A short list of difference generators for a level-``level`` ideal.

    Inverse coordinates are eliminated first (the relations restore them),
    then an element is kept only if the shifts of the ones kept so far do
    not already produce it.
    """
    if ideal.is_unit():
        return (Polynomial.const(1),)
    primary = [v for v in ambient.coords_at(level) if v.kind in ("x", "y")]
    contracted = eliminate(ideal, primary)
    kept = []
    current = groebner(ambient.relations(level), level_order(ambient, level))
    cands = sorted(contracted.basis, key=lambda g: (g.max_shift(), g.total_degree(), len(g), format_poly(g)))
    for g in cands:
        if normal_form(g, current).is_zero():
            continue
        kept.append(g)
        current = _truncated_sigma_ideal(ambient, kept, level)
    return tuple(kept)
