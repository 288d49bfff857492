"""Monomial orders, Buchberger's algorithm and the ideal-theoretic queries built on it.

Internally polynomials are dicts from exponent tuples (positions follow the
order's variable list, largest variable first) to ``mpq`` coefficients.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import NotGroebner, UnitIdeal
from .polynomial import Polynomial, Q, VarId, canonical_vars

INFINITE = "infinite"


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on a finite, explicitly listed set of variables.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``.  A block order
    compares the first block by grevlex, then the next, and so on; the first
    block holds the variables to be eliminated.
    """

    kind: str
    blocks: tuple

    @classmethod
    def grevlex(cls, variables: Iterable[VarId]) -> "MonomialOrder":
        return cls("grevlex", (canonical_vars(variables),))

    @classmethod
    def lex(cls, variables: Iterable[VarId]) -> "MonomialOrder":
        return cls("lex", (canonical_vars(variables),))

    @classmethod
    def block(cls, *blocks: Iterable[VarId]) -> "MonomialOrder":
        bs = tuple(canonical_vars(b) for b in blocks)
        bs = tuple(b for b in bs if b)
        seen = set()
        for b in bs:
            if seen & set(b):
                raise ValueError("blocks must be disjoint")
            seen |= set(b)
        if len(bs) <= 1:
            return cls("grevlex", bs or ((),))
        return cls("block", bs)

    @property
    def variables(self) -> tuple:
        return tuple(v for b in self.blocks for v in b)

    def key_function(self):
        kind = self.kind
        if kind == "lex":
            return lambda e: e
        if kind == "grevlex":
            return _grevlex_key
        bounds = []
        start = 0
        for b in self.blocks:
            bounds.append((start, start + len(b)))
            start += len(b)

        def key(e):
            out = ()
            for lo, hi in bounds:
                out += _grevlex_key(e[lo:hi])
            return out

        return key


def _grevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


@dataclass(frozen=True)
class IdealBasis:
    """Generators of an ideal in the ring ``Q[order.variables]``.

    ``basis`` holds the reduced Gröbner basis (sorted by leading monomial,
    smallest first) once computed; ``None`` otherwise.
    """

    generators: tuple
    order: MonomialOrder
    basis: tuple | None = None

    @property
    def is_groebner(self) -> bool:
        return self.basis is not None

    @property
    def ring(self) -> tuple:
        return self.order.variables

    def is_unit(self) -> bool:
        return self.basis is not None and len(self.basis) == 1 and self.basis[0].is_constant()

    def is_zero(self) -> bool:
        return self.basis is not None and not self.basis

    def leading_monomials(self) -> list:
        eng = _engine(self.order)
        return [eng.lm(eng.to_internal(g)) for g in self.basis]

    def __str__(self):
        from .textio import format_poly

        gens = self.basis if self.basis is not None else self.generators
        return "<" + ", ".join(format_poly(g) for g in gens) + ">"


class _Engine:
    """Buchberger machinery for one fixed order."""

    def __init__(self, order: MonomialOrder):
        self.order = order
        self.vars = order.variables
        self.pos = {v: i for i, v in enumerate(self.vars)}
        self.n = len(self.vars)
        self._key = order.key_function()
        self._keys = {}
        self._masks = {}

    # -- conversion ---------------------------------------------------
    def to_internal(self, p: Polynomial) -> dict:
        out = {}
        n = self.n
        pos = self.pos
        for m, c in p.items():
            e = [0] * n
            for v, k in m:
                try:
                    e[pos[v]] = k
                except KeyError:
                    raise ValueError(f"variable {v} is not in the ring of this order") from None
            out[tuple(e)] = c
        return out

    def to_poly(self, d: dict) -> Polynomial:
        vs = self.vars
        terms = {}
        for e, c in d.items():
            terms[tuple((vs[i], k) for i, k in enumerate(e) if k)] = c
        # monomial tuples must be sorted by VarId for canonical storage
        return Polynomial({tuple(sorted(m)): c for m, c in terms.items()})

    # -- order helpers ------------------------------------------------
    def key(self, e):
        k = self._keys.get(e)
        if k is None:
            k = self._key(e)
            self._keys[e] = k
        return k

    def negkey(self, e):
        return tuple(-x for x in self.key(e))

    def mask(self, e):
        m = self._masks.get(e)
        if m is None:
            m = 0
            for i, k in enumerate(e):
                if k:
                    m |= 1 << i
            self._masks[e] = m
        return m

    def lm(self, p: dict):
        return max(p, key=self.key)

    # -- core operations ----------------------------------------------
    def reduce(self, p: dict, basis: list, full: bool = True) -> dict:
        """Remainder of ``p`` on division by ``basis`` (list of (lm, mask, poly))."""
        p = dict(p)
        heap = [(self.negkey(m), m) for m in p]
        heapq.heapify(heap)
        rem = {}
        push = heapq.heappush
        while heap:
            _, m = heapq.heappop(heap)
            c = p.pop(m, None)
            if c is None:
                continue
            mm = self.mask(m)
            for lm, lmask, g in basis:
                if lmask & ~mm:
                    continue
                if any(a < b for a, b in zip(m, lm)):
                    continue
                q = tuple(a - b for a, b in zip(m, lm))
                for gm, gc in g.items():
                    if gm == lm:
                        continue
                    nm = tuple(a + b for a, b in zip(q, gm))
                    old = p.get(nm)
                    if old is None:
                        p[nm] = -c * gc
                        push(heap, (self.negkey(nm), nm))
                    else:
                        v = old - c * gc
                        if v:
                            p[nm] = v
                        else:
                            del p[nm]
                break
            else:
                rem[m] = c
                if not full:
                    rem.update(p)
                    return rem
        return rem

    def monic(self, p: dict) -> dict:
        c = p[self.lm(p)]
        if c == 1:
            return p
        inv = 1 / c
        return {m: v * inv for m, v in p.items()}

    def spoly(self, f, flm, g, glm):
        lcm = tuple(max(a, b) for a, b in zip(flm, glm))
        qf = tuple(a - b for a, b in zip(lcm, flm))
        qg = tuple(a - b for a, b in zip(lcm, glm))
        out = {}
        for m, c in f.items():
            if m == flm:
                continue
            nm = tuple(a + b for a, b in zip(qf, m))
            out[nm] = out.get(nm, 0) + c
        for m, c in g.items():
            if m == glm:
                continue
            nm = tuple(a + b for a, b in zip(qg, m))
            v = out.get(nm, 0) - c
            if v:
                out[nm] = v
            else:
                out.pop(nm, None)
        return out

    def groebner(self, polys: Sequence[dict]) -> list:
        """Reduced Gröbner basis (list of monic internal polys)."""
        n = self.n
        one = tuple([0] * n)
        store = []  # (lm, mask, poly)
        sugar = []
        active = []
        pairs = []  # ((sugar, lcm key), i, j, lcm)

        def divides(a, b):
            return all(x <= y for x, y in zip(a, b))

        def lcm(a, b):
            return tuple(max(x, y) for x, y in zip(a, b))

        def coprime(a, b):
            return not any(x and y for x, y in zip(a, b))

        def update(h):
            nonlocal active, pairs
            hlm = store[h][0]
            cands = list(active)
            kept = []
            while cands:
                g1 = cands.pop(0)
                l1 = lcm(hlm, store[g1][0])
                if coprime(hlm, store[g1][0]):
                    kept.append(g1)
                    continue
                if not any(divides(lcm(hlm, store[g2][0]), l1) for g2 in cands + kept):
                    kept.append(g1)
            new_pairs = []
            for g in kept:
                if coprime(hlm, store[g][0]):
                    continue
                l = lcm(hlm, store[g][0])
                s = max(sugar[g] + sum(l) - sum(store[g][0]), sugar[h] + sum(l) - sum(hlm))
                new_pairs.append(((s, self.key(l)), g, h, l))
            survivors = []
            for pr in pairs:
                _, a, b, l = pr
                if (
                    divides(hlm, l)
                    and lcm(store[a][0], hlm) != l
                    and lcm(store[b][0], hlm) != l
                ):
                    continue
                survivors.append(pr)
            pairs = survivors + new_pairs
            active = [g for g in active if not divides(hlm, store[g][0])] + [h]

        def add(p, s):
            p = self.monic(p)
            lm = self.lm(p)
            store.append((lm, self.mask(lm), p))
            sugar.append(s)
            update(len(store) - 1)
            return lm

        def current():
            return [store[i] for i in active]

        for f in polys:
            if not f:
                continue
            h = self.reduce(f, current())
            if not h:
                continue
            if self.lm(h) == one:
                return [{one: Q(1)}]
            add(h, max(sum(m) for m in f))

        while pairs:
            best = min(range(len(pairs)), key=lambda k: (pairs[k][0], pairs[k][1], pairs[k][2]))
            (s_deg, _), i, j, _ = pairs.pop(best)
            s = self.spoly(store[i][2], store[i][0], store[j][2], store[j][0])
            if not s:
                continue
            h = self.reduce(s, current())
            if not h:
                continue
            if self.lm(h) == one:
                return [{one: Q(1)}]
            add(h, s_deg)

        basis = current()
        reduced = []
        for k, (lm, mask, g) in enumerate(basis):
            others = [b for t, b in enumerate(basis) if t != k]
            tail = {m: c for m, c in g.items() if m != lm}
            r = self.reduce(tail, others)
            r[lm] = g[lm]
            reduced.append(r)
        reduced.sort(key=lambda p: self.key(self.lm(p)))
        return reduced


@lru_cache(maxsize=256)
def _engine(order: MonomialOrder) -> _Engine:
    return _Engine(order)


def default_order(polys: Iterable[Polynomial], extra: Iterable[VarId] = ()) -> MonomialOrder:
    vs = set(extra)
    for p in polys:
        vs |= p.variables()
    return MonomialOrder.grevlex(vs)


def groebner(gens: Iterable[Polynomial], order: MonomialOrder | None = None) -> IdealBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    >>> from sigma_groups.textio import parse_poly, parse_var
    >>> y1, y2 = parse_var("y1"), parse_var("y2")
    >>> str(groebner([parse_poly("y1^2 - y2"), parse_poly("y2^2 - y1")],
    ...              MonomialOrder.lex([y1, y2])))
    '<y2^4 - y2, -y2^2 + y1>'
    """
    gens = tuple(g for g in gens)
    if order is None:
        order = default_order(gens)
    eng = _engine(order)
    internal = [eng.to_internal(g) for g in gens if g]
    gb = eng.groebner(internal)
    return IdealBasis(gens, order, tuple(eng.to_poly(g) for g in gb))


def ensure_groebner(ideal: IdealBasis) -> IdealBasis:
    if ideal.is_groebner:
        return ideal
    return groebner(ideal.generators, ideal.order)


def normal_form(p: Polynomial, basis: IdealBasis) -> Polynomial:
    if not basis.is_groebner:
        raise NotGroebner("normal_form needs a Gröbner basis")
    eng = _engine(basis.order)
    gb = []
    for g in basis.basis:
        d = eng.to_internal(g)
        lm = eng.lm(d)
        gb.append((lm, eng.mask(lm), d))
    return eng.to_poly(eng.reduce(eng.to_internal(p), gb))


def contains(basis: IdealBasis, p: Polynomial) -> bool:
    return normal_form(p, ensure_groebner(basis)).is_zero()


def with_ring(ideal: IdealBasis, variables: Iterable[VarId]) -> IdealBasis:
    """The same ideal viewed in a (larger) grevlex ring."""
    order = MonomialOrder.grevlex(set(variables) | set(ideal.ring))
    return groebner(ideal.basis if ideal.is_groebner else ideal.generators, order)


def eliminate(ideal: IdealBasis, keep: Iterable[VarId]) -> IdealBasis:
    """Contraction of ``ideal`` to the subring in the ``keep`` variables."""
    keep = frozenset(keep)
    ring = set(ideal.ring)
    for g in ideal.generators:
        ring |= g.variables()
    drop = ring - keep
    gens = ideal.basis if ideal.is_groebner else ideal.generators
    kept_order = MonomialOrder.grevlex(keep)
    if not drop:
        return groebner(gens, kept_order)
    order = MonomialOrder.block(drop, keep)
    gb = groebner(gens, order)
    sel = tuple(g for g in gb.basis if g.variables() <= keep)
    return IdealBasis(sel, kept_order, sel)


def _independent_dim(lms: list, nvars: int) -> int:
    """Max size of a variable set containing the support of no leading monomial."""
    supports = [frozenset(i for i, k in enumerate(m) if k) for m in lms]
    # drop supports that contain another support
    supports = sorted(set(supports), key=len)
    minimal = []
    for s in supports:
        if not any(t <= s for t in minimal):
            minimal.append(s)

    @lru_cache(maxsize=None)
    def best(avail: frozenset, gens: frozenset) -> int:
        live = [s for s in gens if s <= avail]
        if not live:
            return len(avail)
        s = min(live, key=lambda t: (len(t), sorted(t)))
        out = 0
        for x in sorted(s):
            rest = frozenset(t for t in live if x not in t)
            out = max(out, best(avail - {x}, rest))
            if out == len(avail) - 1:
                break
        return out

    return best(frozenset(range(nvars)), frozenset(minimal))


def krull_dim(ideal: IdealBasis) -> int:
    ideal = ensure_groebner(ideal)
    if ideal.is_unit():
        raise UnitIdeal("Krull dimension of the zero ring is undefined")
    return _independent_dim(ideal.leading_monomials(), len(ideal.ring))


def standard_monomials(ideal: IdealBasis, limit: int | None = None):
    """Standard monomials as Polynomials, or ``None`` when there are infinitely many."""
    ideal = ensure_groebner(ideal)
    if ideal.is_unit():
        return []
    eng = _engine(ideal.order)
    lms = ideal.leading_monomials()
    n = eng.n
    bounds = [None] * n
    for m in lms:
        support = [i for i, k in enumerate(m) if k]
        if len(support) == 1:
            i = support[0]
            bounds[i] = m[i] if bounds[i] is None else min(bounds[i], m[i])
    if any(b is None for b in bounds):
        return None
    out = []
    cur = [0] * n

    def blocked(upto):
        for m in lms:
            if all((m[i] == 0) if i >= upto else (m[i] <= cur[i]) for i in range(n)):
                return True
        return False

    def rec(i):
        if limit is not None and len(out) > limit:
            return
        if i == n:
            out.append(tuple(cur))
            return
        for k in range(bounds[i]):
            cur[i] = k
            if blocked(i + 1):
                break
            rec(i + 1)
        cur[i] = 0

    rec(0)
    out.sort(key=eng.key)
    return [eng.to_poly({e: Q(1)}) for e in out]


def vecdim(ideal: IdealBasis):
    """Dimension of the quotient ring as a Q-vector space (``INFINITE`` if unbounded).

    The unit ideal presents the zero ring and yields 0.
    """
    ideal = ensure_groebner(ideal)
    if ideal.is_unit():
        return 0
    sm = standard_monomials(ideal)
    if sm is None:
        return INFINITE
    return len(sm)


def ideal_equal(a: IdealBasis, b: IdealBasis) -> bool:
    if a.order == b.order and a.is_groebner and b.is_groebner:
        return set(a.basis) == set(b.basis)
    ring = set(a.ring) | set(b.ring)
    for g in a.generators + b.generators:
        ring |= g.variables()
    order = MonomialOrder.grevlex(ring)
    ga = groebner(a.basis if a.is_groebner else a.generators, order)
    gb = groebner(b.basis if b.is_groebner else b.generators, order)
    return set(ga.basis) == set(gb.basis)


def ideal_contains(big: IdealBasis, small: IdealBasis) -> bool:
    """Whether every generator of ``small`` lies in ``big``."""
    ring = set(big.ring) | set(small.ring)
    order = MonomialOrder.grevlex(ring)
    gb = groebner(big.basis if big.is_groebner else big.generators, order)
    gens = small.basis if small.is_groebner else small.generators
    return all(normal_form(g, gb).is_zero() for g in gens)
