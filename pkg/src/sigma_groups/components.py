"""Components and sigma-components of groups with finite-dimensional level algebras.

The level-L algebra k[G[L]] is a finite-dimensional Q-algebra; its
connected components correspond to its primitive idempotents.  These are
found by splitting with minimal polynomials of well-chosen elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import univariate as U
from .diff_ring import DEFAULT_LOOKAHEAD, GroupSpec, closure_ideal, level_order, shift
from .errors import Unsupported
from .groebner import INFINITE, IdealBasis, groebner, normal_form, standard_monomials, vecdim
from .hopf import counit
from .linalg import rref
from .polynomial import Polynomial, Q
from .textio import format_poly

DEFAULT_FACTOR_CAP = U.DEFAULT_FACTOR_DEGREE_CAP
_COMBINATION_TRIES = 6


class FiniteAlgebra:
    """Q[x]/J for a zero-dimensional ideal J given by a Gröbner basis."""

    def __init__(self, ideal: IdealBasis):
        self.ideal = ideal
        basis = standard_monomials(ideal)
        if basis is None:
            raise Unsupported("the level algebra is not finite-dimensional")
        self.basis = basis
        self._index = {next(iter(b.items()))[0]: k for k, b in enumerate(basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self.ideal)

    def vector(self, p: Polynomial):
        v = [Q(0)] * self.dim
        for m, c in self.reduce(p).items():
            v[self._index[m]] = c
        return v

    def is_zero(self, p: Polynomial) -> bool:
        return self.reduce(p).is_zero()

    def min_poly(self, a: Polynomial):
        """Minimal polynomial of a, constant term first."""
        powers = [self.vector(Polynomial.const(1))]
        cur = Polynomial.const(1)
        a = self.reduce(a)
        for _ in range(self.dim):
            cur = self.reduce(cur * a)
            powers.append(self.vector(cur))
            k = len(powers)
            # solve sum_{j<k-1} c_j a^j = -a^(k-1)
            cols = [[powers[j][r] for j in range(k)] for r in range(self.dim)]
            red, piv = rref(cols, k)
            if k - 1 not in piv:
                # a^(k-1) is a combination of lower powers
                coeffs = [Q(0)] * k
                coeffs[k - 1] = Q(1)
                for row, p in zip(red, piv):
                    coeffs[p] = -row[k - 1]
                return U.trim(coeffs)
        raise AssertionError("minimal polynomial degree exceeded the dimension")


def _candidates(variables):
    """Coordinates first, then deterministic linear combinations."""
    for v in variables:
        yield Polynomial.var(v)
    for t in range(1, _COMBINATION_TRIES + 1):
        p = Polynomial()
        for j, v in enumerate(variables):
            p = p + Polynomial.var(v) * (t + 1) ** j * (-1 if (t + j) % 2 else 1)
        yield p


def _split_idempotents(alg: FiniteAlgebra, a: Polynomial, mp, cap: int):
    """Orthogonal idempotents from the coprime-power factorization of mp, or None."""
    factors = U.factor(mp, cap)
    if len(factors) < 2:
        return None
    parts = [U.mul_pow(f, k) for f, k in factors]
    out = []
    for j, pj in enumerate(parts):
        rest = [Q(1)]
        for k, pk in enumerate(parts):
            if k != j:
                rest = U.mul(rest, pk)
        g, s, t = U.xgcd(rest, pj)
        # s*rest = 1 mod pj and 0 mod rest
        e = U.compose_in_algebra(U.mul(s, rest), a, alg.reduce)
        out.append(e)
    return out


def _primitive_idempotents(ideal: IdealBasis, variables, cap: int):
    alg = FiniteAlgebra(ideal)
    if alg.dim <= 1:
        return [Polynomial.const(1)] if alg.dim == 1 else []
    for a in _candidates(variables):
        mp = alg.min_poly(a)
        if U.degree(mp) == alg.dim:
            fac = U.factor(mp, cap)
            if len(fac) == 1 and fac[0][1] == 1:
                return [Polynomial.const(1)]  # a field
        idems = _split_idempotents(alg, a, mp, cap)
        if idems is None:
            continue
        out = []
        for e in idems:
            sub = groebner(list(ideal.basis) + [1 - e], ideal.order)
            for f in _primitive_idempotents(sub, variables, cap):
                out.append(alg.reduce(e * f))
        return out
    return [Polynomial.const(1)]


def _canonical(idems):
    return sorted(idems, key=lambda p: (len(p), format_poly(p)))


def idempotents(ideal: IdealBasis, cap: int = DEFAULT_FACTOR_CAP) -> list:
    """Complete list of primitive idempotents of Q[x]/ideal."""
    if ideal.is_unit():
        return []
    if vecdim(ideal) == INFINITE:
        raise Unsupported("idempotents need a finite-dimensional algebra")
    return _canonical(_primitive_idempotents(ideal, list(ideal.order.variables), cap))


@dataclass(frozen=True)
class Component:
    idempotent: Polynomial
    ideal: IdealBasis
    vecdim: int

    def to_json(self):
        return {
            "idempotent": format_poly(self.idempotent),
            "vecdim": self.vecdim,
            "ideal": [format_poly(g) for g in self.ideal.basis],
        }


@dataclass(frozen=True)
class ComponentReport:
    level: int
    algebra_vecdim: int
    idempotents: tuple
    components: tuple
    sigma_component_count: int | None = None
    identity_component_ideal: IdealBasis | None = None
    window: tuple = field(default=())
    stable: bool | None = None

    def to_json(self):
        out = {
            "level": self.level,
            "algebra_vecdim": self.algebra_vecdim,
            "count": len(self.components),
            "idempotents": [format_poly(e) for e in self.idempotents],
            "components": [c.to_json() for c in self.components],
        }
        if self.identity_component_ideal is not None:
            out["identity_component"] = [format_poly(g) for g in self.identity_component_ideal.basis]
        return out


def _level_ideal(spec: GroupSpec, L: int, lookahead: int):
    ideal, _ = closure_ideal(spec, L, lookahead)
    if not ideal.is_unit() and vecdim(ideal) == INFINITE:
        raise Unsupported(f"level-{L} algebra of {spec.name or 'the group'} is positive-dimensional")
    return ideal


def components_at_level(spec: GroupSpec, L: int, lookahead: int = DEFAULT_LOOKAHEAD,
                        cap: int = DEFAULT_FACTOR_CAP) -> ComponentReport:
    """Connected components of G[L], one ideal <I, 1 - e> per primitive idempotent e."""
    ideal = _level_ideal(spec, L, lookahead)
    idems = idempotents(ideal, cap)
    comps = []
    for e in idems:
        ci = groebner(list(ideal.basis) + [1 - e], ideal.order)
        comps.append(Component(e, ci, vecdim(ci)))
    return ComponentReport(L, vecdim(ideal), tuple(idems), tuple(comps))


def _stable_count(spec: GroupSpec, L: int, lookahead: int, cap: int) -> int:
    low = components_at_level(spec, L, lookahead, cap)
    high = components_at_level(spec, L + 1, lookahead, cap)
    ideal, _ = closure_ideal(spec, L + 1, lookahead)
    count = 0
    for c in low.idempotents:
        sc = shift(c, 1)
        for d in high.idempotents:
            over = normal_form(d * c - d, ideal).is_zero()
            if over and normal_form(d * sc - d, ideal).is_zero():
                count += 1
                break
    return count


def sigma_components(spec: GroupSpec, L: int, lookahead: int = DEFAULT_LOOKAHEAD,
                     cap: int = DEFAULT_FACTOR_CAP, cross_check: bool = True) -> ComponentReport:
    """Number of level-L components extending to a sigma-stable level-(L+1) component.

    With ``cross_check`` the count is recomputed on the window (L+1, L+2);
    ``stable`` records whether both windows agree.
    """
    report = components_at_level(spec, L, lookahead, cap)
    count = _stable_count(spec, L, lookahead, cap)
    window = [(L, L + 1)]
    stable = None
    if cross_check:
        again = _stable_count(spec, L + 1, lookahead, cap)
        window.append((L + 1, L + 2))
        stable = again == count
    return ComponentReport(report.level, report.algebra_vecdim, report.idempotents, report.components,
                           count, None, tuple(window), stable)


def identity_component(spec: GroupSpec, L: int, lookahead: int = DEFAULT_LOOKAHEAD,
                       cap: int = DEFAULT_FACTOR_CAP) -> IdealBasis:
    """I(G[L]) plus every primitive idempotent vanishing at the identity."""
    ideal = _level_ideal(spec, L, lookahead)
    amb = spec.ambient
    idems = idempotents(ideal, cap)
    extra = [e for e in idems if counit(e, amb) == 0]
    return groebner(list(ideal.basis) + extra, level_order(amb, L))
