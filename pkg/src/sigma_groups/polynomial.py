"""Sparse multivariate polynomials over the rationals in shift-indexed variables."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple

from gmpy2 import mpq

# Coefficient domain.  Always normalized by gmpy2.
Q = mpq
_MPQ = type(Q(1))

_KIND_RANK = {"x": 5, "idet": 4, "y": 3, "iy": 2}
_COPY_RANK = {"": 3, "u": 2, "v": 1}


class VarId(NamedTuple):
    """One ambient coordinate ``sigma^shift(base)``.

    ``kind`` is ``"x"`` (GL_n entry, index ``(j, k)``), ``"idet"`` (inverse
    determinant, index ``()``), ``"y"`` (G_a / G_m coordinate, index
    ``(j,)``) or ``"iy"`` (inverse of a G_m coordinate).  ``copy`` separates
    auxiliary variable blocks: ``"u"``/``"v"`` for the two tensor factors,
    ``"t"`` for image tags, and so on; ordinary coordinates use ``""``.
    """

    kind: str
    index: tuple
    shift: int = 0
    copy: str = ""

    def shifted(self, t: int) -> "VarId":
        return self._replace(shift=self.shift + t)

    def at(self, shift: int) -> "VarId":
        return self._replace(shift=shift)

    def base(self) -> "VarId":
        return self._replace(shift=0, copy="")

    def tagged(self, copy: str) -> "VarId":
        return self._replace(copy=copy)

    def __str__(self):
        from .textio import format_var

        return format_var(self)


def var_rank(v: VarId):
    """Sort key: a larger key means a larger variable in monomial orders."""
    return (
        v.shift,
        _COPY_RANK.get(v.copy, 0),
        v.copy,
        _KIND_RANK.get(v.kind, 1),
        v.kind,
        tuple(-i for i in v.index),
    )


def canonical_vars(vs: Iterable[VarId]) -> tuple:
    """Variables sorted from largest to smallest."""
    return tuple(sorted(set(vs), key=var_rank, reverse=True))


def _mono_key(m):
    return tuple((var_rank(v), e) for v, e in m)


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _coerce(c):
    if isinstance(c, Fraction):
        return Q(c.numerator, c.denominator)
    return Q(c)


class Polynomial:
    """Immutable polynomial with exact rational coefficients.

    Terms are stored as a mapping from monomials to nonzero coefficients; a
    monomial is a sorted tuple of ``(VarId, exponent)`` pairs.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _coerce(c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, v: VarId) -> "Polynomial":
        return cls._raw({((v, 1),): Q(1)})

    @classmethod
    def monomial(cls, exps: Mapping[VarId, int], coeff=1) -> "Polynomial":
        m = tuple(sorted((v, e) for v, e in exps.items() if e))
        return cls({m: coeff})

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_term(self):
        return self._terms.get((), Q(0))

    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    def max_shift(self) -> int:
        return max((v.shift for v in self.variables()), default=0)

    def min_shift(self) -> int:
        return min((v.shift for v in self.variables()), default=0)

    def sorted_terms(self):
        """Terms from largest to smallest under a graded canonical order."""
        return sorted(
            self._terms.items(),
            key=lambda mc: (sum(e for _, e in mc[0]), _mono_key(mc[0])),
            reverse=True,
        )

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for m, c in b.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) or type(other) is _MPQ:
            c = _coerce(other)
            if not c:
                return Polynomial._raw({})
            return Polynomial._raw({m: v * c for m, v in self._terms.items()})
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = _coerce(c)
        return Polynomial._raw({m: v / c for m, v in self._terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = Polynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) or type(other) is _MPQ:
            return self._terms == Polynomial.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- transformations ----------------------------------------------
    def map_vars(self, f: Callable[[VarId], VarId]) -> "Polynomial":
        """Rename every variable through ``f`` (must be injective on the support)."""
        out = {}
        for m, c in self._terms.items():
            nm = tuple(sorted((f(v), e) for v, e in m))
            out[nm] = out.get(nm, 0) + c
        return Polynomial(out)

    def substitute(self, images: Mapping[VarId, "Polynomial"]) -> "Polynomial":
        """Ring homomorphism sending ``v`` to ``images[v]`` (identity elsewhere)."""
        cache = {}
        result = Polynomial._raw({})
        for m, c in self._terms.items():
            term = Polynomial.const(c)
            keep = []
            for v, e in m:
                img = images.get(v)
                if img is None:
                    keep.append((v, e))
                    continue
                key = (v, e)
                if key not in cache:
                    cache[key] = _as_poly(img) ** e
                term = term * cache[key]
            if keep:
                term = term * Polynomial._raw({tuple(keep): Q(1)})
            result = result + term
        return result

    def evaluate(self, values: Mapping[VarId, object]) -> "Polynomial":
        return self.substitute({v: Polynomial.const(c) for v, c in values.items()})

    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        lead = self.sorted_terms()[0][1]
        return self / lead

    def __repr__(self):
        from .textio import format_poly

        return f"Polynomial({format_poly(self)!r})"

    def __str__(self):
        from .textio import format_poly

        return format_poly(self)


def _as_poly(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)) or type(x) is _MPQ:
        return Polynomial.const(x)
    return NotImplemented


def var(kind: str, *index: int, shift: int = 0, copy: str = "") -> Polynomial:
    """Shorthand: ``var("y", 1, shift=2)`` is the polynomial ``s2(y1)``."""
    return Polynomial.var(VarId(kind, tuple(index), shift, copy))
