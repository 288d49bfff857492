"""Bounded quotients G/N through the Takeuchi subalgebra.

The coordinate ring of G/N is {f : Delta(f) - f (x) 1 in A (x) I_N}.  We
solve for it inside the span of standard monomials of bounded degree and
level, pick sigma-generators that are group-like or primitive, and present
the quotient as the closed image of the morphism they define.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .diff_ring import DEFAULT_LOOKAHEAD, AmbientSpec, GroupSpec, closure_ideal, shift
from .errors import BudgetExceeded, UnrecognizedGeneratorType
from .groebner import INFINITE, MonomialOrder, groebner, ideal_contains, normal_form
from .hopf import LEFT, RIGHT, comultiply, counit, tensor_ideal, to_copy
from .linalg import nullspace, rank, rref
from .polynomial import Polynomial, Q, VarId
from .textio import format_poly

DEFAULT_DEGREE = 4
MAX_CANDIDATES = 2000
GROUP_LIKE, PRIMITIVE = "group-like", "primitive"


@dataclass(frozen=True)
class TakeuchiBasis:
    group: GroupSpec
    normal: GroupSpec
    degree_bound: int
    level_bound: int
    basis: tuple
    sigma_generators: tuple = ()
    generator_types: tuple = ()
    normality: str = "automatic"

    def to_json(self):
        return {
            "degree_bound": self.degree_bound,
            "level_bound": self.level_bound,
            "basis": [format_poly(f) for f in self.basis],
            "sigma_generators": [format_poly(f) for f in self.sigma_generators],
            "generator_types": list(self.generator_types),
            "normality": self.normality,
        }


def _monomials(variables, degree):
    out = [Polynomial.const(1)]
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(variables, d):
            exps = {}
            for v in combo:
                exps[v] = exps.get(v, 0) + 1
            out.append(Polynomial.monomial(exps))
    return out


def _candidates(ideal, ambient: AmbientSpec, level: int, degree: int):
    """Standard monomials of the level ideal of total degree <= degree."""
    variables = list(ambient.coords_at(level))
    out = []
    for m in _monomials(variables, degree):
        if normal_form(m, ideal) == m:
            out.append(m)
            if len(out) > MAX_CANDIDATES:
                raise BudgetExceeded("too many candidate monomials; lower the degree bound")
    return out


def _coefficient_rows(residues):
    """Matrix with one column per residue and one row per monomial appearing."""
    monos = sorted({m for r in residues for m, _ in r.items()}, key=repr)
    index = {m: k for k, m in enumerate(monos)}
    rows = [[Q(0)] * len(residues) for _ in monos]
    for c, r in enumerate(residues):
        for m, v in r.items():
            rows[index[m]][c] = v
    return rows


def _combine(vec, cands) -> Polynomial:
    out = Polynomial()
    for c, m in zip(vec, cands):
        if c:
            out = out + m * c
    return out


def _preference(p: Polynomial):
    """Low shift, low degree and few inverse coordinates come first."""
    inverses = sum(e for m, _ in p.items() for v, e in m if v.kind in ("iy", "idet"))
    return (p.max_shift(), p.total_degree(), inverses, len(p), format_poly(p))


def _normality(G: GroupSpec) -> str:
    return "automatic" if G.ambient.is_abelian() else "asserted"


def takeuchi_subspace(G: GroupSpec, N: GroupSpec, D: int = DEFAULT_DEGREE, level: int = 1,
                      lookahead: int = DEFAULT_LOOKAHEAD) -> TakeuchiBasis:
    """Basis of {f : Delta(f) - f (x) 1 in <I_G(u)> + <I_N(v)>} in bounded degree and level."""
    if G.ambient != N.ambient:
        raise ValueError("G and N must share an ambient")
    amb = G.ambient
    IG, _ = closure_ideal(G, level, lookahead)
    IN, _ = closure_ideal(N, level, lookahead)
    if not ideal_contains(IN, IG):
        raise ValueError("N is not contained in G at this level")
    cands = _candidates(IG, amb, level, D)
    tens = tensor_ideal(amb, IG.basis, IN.basis, level)
    residues = [normal_form(comultiply(m, amb) - to_copy(m, LEFT), tens) for m in cands]
    rows = _coefficient_rows(residues)
    null = nullspace(rows, len(cands))
    # canonical basis: reduced echelon form with the largest candidates as pivots
    rev = list(reversed(range(len(cands))))
    red, _ = rref([[v[k] for k in rev] for v in null], len(cands))
    basis = [_combine([r[len(cands) - 1 - k] for k in range(len(cands))], cands) for r in red]
    basis = [b.monic() for b in basis]
    basis.sort(key=_preference)
    return TakeuchiBasis(G, N, D, level, tuple(basis), normality=_normality(G))


def generator_type(f: Polynomial, G: GroupSpec, level: int, lookahead: int = DEFAULT_LOOKAHEAD):
    """GROUP_LIKE, PRIMITIVE or None, modulo the closure ideal of G."""
    amb = G.ambient
    IG, _ = closure_ideal(G, level, lookahead)
    tens = tensor_ideal(amb, IG.basis, IG.basis, level)
    d = comultiply(f, amb)
    fu, fv = to_copy(f, LEFT), to_copy(f, RIGHT)
    if counit(f, amb) == 1 and normal_form(d - fu * fv, tens).is_zero():
        return GROUP_LIKE
    if counit(f, amb) == 0 and normal_form(d - fu - fv, tens).is_zero():
        return PRIMITIVE
    return None


def _inverse_of(f: Polynomial, ambient: AmbientSpec):
    from .morphisms import _inverse

    return _inverse(f, ambient)


def _subalgebra_ideal(G: GroupSpec, gens, types, level: int, lookahead: int):
    """Gröbner basis in which membership of f in k[shifts of gens] mod I_G is decidable."""
    amb = G.ambient
    IG, _ = closure_ideal(G, level, lookahead)
    tags, rels = [], []
    for j, (g, kind) in enumerate(zip(gens, types)):
        for t in range(level - g.max_shift() + 1):
            tag = VarId("y", (j + 1,), t, "t")
            tags.append(tag)
            rels.append(Polynomial.var(tag) - shift(g, t))
            if kind == GROUP_LIKE:
                inv = _inverse_of(g, amb)
                if inv is not None:
                    itag = VarId("iy", (j + 1,), t, "t")
                    tags.append(itag)
                    rels.append(Polynomial.var(itag) - shift(inv, t))
    order = MonomialOrder.block(list(amb.coords_at(level)), tags)
    return groebner(list(IG.basis) + rels, order)


def in_subalgebra(f: Polynomial, sub) -> bool:
    r = normal_form(f, sub)
    return all(v.copy == "t" for v in r.variables())


def select_sigma_generators(tb: TakeuchiBasis, lookahead: int = DEFAULT_LOOKAHEAD):
    """Greedy choice of group-like or primitive sigma-generators of the basis."""
    G, level = tb.group, tb.level_bound
    gens, types = [], []
    for f in tb.basis:
        if f.is_constant():
            continue
        if gens and in_subalgebra(f, _subalgebra_ideal(G, gens, types, level, lookahead)):
            continue
        kind = generator_type(f, G, level, lookahead)
        if kind is None:
            raise UnrecognizedGeneratorType(
                f"{format_poly(f)} is neither group-like nor primitive modulo the ideal of G")
        if kind == GROUP_LIKE and _inverse_of(f, G.ambient) is None:
            raise UnrecognizedGeneratorType(f"group-like {format_poly(f)} has no monomial inverse")
        gens.append(f)
        types.append(kind)
    return tuple(gens), tuple(types)


@dataclass(frozen=True)
class QuotientResult:
    quotient: GroupSpec
    generator_map: tuple  # pairs (quotient coordinate, Polynomial on G)
    takeuchi: TakeuchiBasis
    generation_verified: bool
    image_stabilized: bool
    kernel_ok: bool
    independent: bool
    notes: tuple = field(default=())

    def to_json(self):
        from .textio import format_var

        return {
            "quotient": self.quotient.to_json(),
            "generator_map": {format_var(h): format_poly(p) for h, p in self.generator_map},
            "takeuchi": self.takeuchi.to_json(),
            "generation_verified": self.generation_verified,
            "image_stabilized": self.image_stabilized,
            "kernel_ok": self.kernel_ok,
            "independent": self.independent,
            "notes": list(self.notes),
        }


def _quotient_ambient(types) -> AmbientSpec:
    pairs = [("Gm" if t == GROUP_LIKE else "Ga", 1) for t in types]
    return AmbientSpec.of(*pairs)


def quotient_spec(G: GroupSpec, N: GroupSpec, D: int = DEFAULT_DEGREE, level: int | None = None,
                  lookahead: int = DEFAULT_LOOKAHEAD) -> QuotientResult:
    """Presentation of G/N with the generator map recording pi*."""
    from .morphisms import MorphismSpec, factorize

    if level is None:
        level = max(G.order, N.order, 1)
    tb = takeuchi_subspace(G, N, D, level, lookahead)
    gens, types = select_sigma_generators(tb, lookahead)
    tb = TakeuchiBasis(tb.group, tb.normal, D, level, tb.basis, gens, types, tb.normality)
    notes = []
    if tb.normality == "asserted":
        notes.append("normality of N in a non-abelian ambient is assumed, not checked")

    qamb = _quotient_ambient(types)
    assignment = {VarId("y", (j + 1,)): g for j, g in enumerate(gens)}
    name = f"{G.name}/{N.name}" if G.name and N.name else "quotient"
    if not gens:
        quotient = GroupSpec(qamb, (), name)
        return QuotientResult(quotient, (), tb, True, True, True, True, tuple(notes))
    free = GroupSpec(qamb, (), "")
    pi = MorphismSpec.create(G, free, assignment)
    bound = max(G.order, N.order, 1) + 1
    fac = factorize(pi, bound, lookahead)
    quotient = GroupSpec(qamb, fac.image.generators, name)

    # generation: every basis element one level up lies in the generated subalgebra
    up = takeuchi_subspace(G, N, D, level + 1, lookahead)
    sub = _subalgebra_ideal(G, list(gens), list(types), level + 1, lookahead)
    generation = all(in_subalgebra(f, sub) for f in up.basis)
    if not generation:
        notes.append("the chosen generators miss part of the subspace one level up")

    IN, _ = closure_ideal(N, level, lookahead)
    kernel_ok = all(normal_form(g - counit(g, G.ambient), IN).is_zero() for g in gens)
    IG, _ = closure_ideal(G, level, lookahead)
    independent = rank(_coefficient_rows([normal_form(g, IG) for g in gens])) == len(gens) if gens else True
    return QuotientResult(quotient, tuple(pi.assignment), tb, generation, fac.stabilized,
                          kernel_ok, independent, tuple(notes))


# -- invariant identities ----------------------------------------------------


def _add(a, b):
    return INFINITE if INFINITE in (a, b) else a + b


def _mul(a, b):
    return INFINITE if INFINITE in (a, b) else a * b


@dataclass(frozen=True)
class QuotientInvariantsReport:
    group: object
    normal: object
    quotient: object
    checks: tuple  # (name, lhs, rhs, passed)

    @property
    def passed(self) -> bool:
        return all(c[3] for c in self.checks)

    def to_json(self):
        return {
            "group": self.group.to_json(),
            "normal": self.normal.to_json(),
            "quotient": self.quotient.to_json(),
            "checks": [{"identity": n, "lhs": l, "rhs": r, "pass": p} for n, l, r, p in self.checks],
            "passed": self.passed,
        }


def verify_quotient_invariants(G: GroupSpec, N: GroupSpec, quotient: GroupSpec,
                               lookahead: int = DEFAULT_LOOKAHEAD) -> QuotientInvariantsReport:
    """sigma-dim and order add, limit degree multiplies, across 1 -> N -> G -> G/N -> 1."""
    from .tower import build_tower, invariants

    rg, rn, rq = (invariants(build_tower(s, None, lookahead)) for s in (G, N, quotient))
    checks = []
    rhs = rn.sigma_dim + rq.sigma_dim
    checks.append(("sigma_dim", rg.sigma_dim, rhs, rg.sigma_dim == rhs))
    rhs = _add(rn.order, rq.order)
    checks.append(("order", rg.order, rhs, rg.order == rhs))
    rhs = _mul(rq.limit_degree, rn.limit_degree)
    checks.append(("limit_degree", rg.limit_degree, rhs, rg.limit_degree == rhs))
    return QuotientInvariantsReport(rg, rn, rq, tuple(checks))
