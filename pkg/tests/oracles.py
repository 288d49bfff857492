"""Independent oracles used by the test-suite.

None of these touch the Gröbner engine: they are plain linear algebra over
Q, univariate polynomial arithmetic, or exhaustive enumeration.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

from sigma_groups import univariate as U
from sigma_groups.linalg import rank
from sigma_groups.polynomial import Polynomial, Q, VarId


# -- diagonal groups: lattice oracle --------------------------------------------


def character_generator(exponents) -> Polynomial:
    """Turn {(j, shift): e} into the binomial  prod y_j^(shift)^e - 1  (Laurent via iy)."""
    num, den = {}, {}
    for (j, s), e in exponents.items():
        if e > 0:
            num[VarId("y", (j,), s)] = e
        elif e < 0:
            den[VarId("iy", (j,), s)] = -e
    return Polynomial.monomial({**num, **den}) - 1


def _module_matrix(gens, n):
    """Rows of univariate polynomials in sigma, one row per generator."""
    rows = []
    for g in gens:
        row = []
        for j in range(1, n + 1):
            coeffs = {}
            for (jj, s), e in g.items():
                if jj == j:
                    coeffs[s] = coeffs.get(s, 0) + e
            top = max(coeffs, default=-1)
            row.append(U.trim([Q(coeffs.get(s, 0)) for s in range(top + 1)]))
        rows.append(row)
    return rows


def lattice_sigma_dim(gens, n: int) -> int:
    """n minus the rank of the exponent matrix over Q(sigma), via evaluations."""
    rows = _module_matrix(gens, n)
    best = 0
    for x in (2, 3, 5, 7, 11, 13):
        mat = [[U.evaluate(p, Q(x)) for p in row] for row in rows]
        best = max(best, rank(mat) if mat else 0)
    return n - best


def _det2(a, b, c, d):
    return U.sub(U.mul(a, d), U.mul(b, c))


def lattice_order(gens, n: int):
    """dim_Q of Q[sigma]^n / M: degree of the gcd of the maximal minors (n <= 2)."""
    rows = _module_matrix(gens, n)
    if n == 1:
        minors = [r[0] for r in rows]
    elif n == 2:
        minors = [_det2(r1[0], r1[1], r2[0], r2[1]) for r1, r2 in combinations(rows, 2)]
    else:
        raise ValueError("only n <= 2 is supported")
    g = []
    for m in minors:
        g = U.gcd(g, m)
    return U.degree(g) if g else None


def random_character(rng: random.Random, n: int, max_shift: int = 1, size: int = 2):
    while True:
        exps = {}
        for j in range(1, n + 1):
            for s in range(max_shift + 1):
                e = rng.randint(-size, size)
                if e:
                    exps[(j, s)] = e
        if exps:
            return exps


# -- ideal membership: Macaulay matrices -----------------------------------------


def monomials_upto(variables, degree):
    out = []
    for exps in product(range(degree + 1), repeat=len(variables)):
        if sum(exps) <= degree:
            out.append(Polynomial.monomial(dict(zip(variables, exps))))
    return out


class Echelon:
    """Sparse row echelon form over Q; rows are dicts keyed by monomial."""

    def __init__(self):
        self.pivots = {}

    @staticmethod
    def _lead(row):
        return max(row, key=lambda m: (sum(k for _, k in m), m))

    def reduce(self, row):
        row = dict(row)
        done = {}
        while row:
            lead = self._lead(row)
            piv = self.pivots.get(lead)
            if piv is None:
                done[lead] = row.pop(lead)
                continue
            c = row[lead]
            for m, v in piv.items():
                w = row.get(m, 0) - c * v
                if w:
                    row[m] = w
                else:
                    row.pop(m, None)
        return done

    def insert(self, row) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        lead = self._lead(r)
        inv = 1 / r[lead]
        self.pivots[lead] = {m: v * inv for m, v in r.items()}
        return True


def macaulay_space(gens, variables, degree: int) -> Echelon:
    """Span of m * f over generators f and monomials m with deg(m f) <= degree."""
    ech = Echelon()
    for f in gens:
        if f.is_zero():
            continue
        for m in monomials_upto(variables, degree - f.total_degree()):
            ech.insert(dict((m * f).items()))
    return ech


def macaulay_member(p: Polynomial, gens, variables, degree: int) -> bool:
    """Is p a combination sum q_i f_i with every deg(q_i f_i) <= degree?"""
    return not macaulay_space(gens, variables, degree).reduce(dict(p.items()))


def certificate_degree(targets, gens, variables, limit: int):
    """Smallest D <= limit at which every target has a degree-D certificate."""
    start = max([f.total_degree() for f in gens] + [t.total_degree() for t in targets])
    for D in range(start, limit + 1):
        space = macaulay_space(gens, variables, D)
        if all(not space.reduce(dict(t.items())) for t in targets):
            return D
    return None


def random_polynomial(rng: random.Random, variables, degree: int, terms: int) -> Polynomial:
    p = Polynomial()
    for _ in range(terms):
        d = rng.randint(0, degree)
        exps = dict.fromkeys(variables, 0)
        for _ in range(d):
            exps[rng.choice(variables)] += 1
        p = p + Polynomial.monomial(exps, rng.choice([-3, -2, -1, 1, 2, 3]))
    return p


def box_standard_monomials(leading, nvars: int):
    """Count exponent vectors below the pure-power bounds not divisible by a leading monomial."""
    bounds = [None] * nvars
    for m in leading:
        support = [i for i, k in enumerate(m) if k]
        if len(support) == 1:
            i = support[0]
            bounds[i] = m[i] if bounds[i] is None else min(bounds[i], m[i])
    if any(b is None for b in bounds):
        return None
    count = 0
    for e in product(*[range(b) for b in bounds]):
        if not any(all(e[i] >= m[i] for i in range(nvars)) for m in leading):
            count += 1
    return count


def random_ideal(rng: random.Random):
    """Up to three variables, nv - 1 or nv generators of degree <= 3."""
    nv = rng.randint(2, 3)
    vs = [VarId("y", (j,)) for j in range(1, nv + 1)]
    gens = [random_polynomial(rng, vs, 3, rng.randint(2, 4)) for _ in range(rng.randint(nv - 1, nv))]
    return vs, [g for g in gens if not g.is_zero()]


# -- base changes of comodules ------------------------------------------------


def invert(B):
    """Inverse of a square matrix of Fractions by Gauss-Jordan, or None."""
    n = len(B)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(B)]
    for c in range(n):
        p = next((r for r in range(c, n) if aug[r][c]), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def random_invertible(rng: random.Random, n: int, size: int = 3):
    while True:
        B = [[Fraction(rng.randint(-size, size)) for _ in range(n)] for _ in range(n)]
        if invert(B) is not None:
            return B


def base_change(matrix, B):
    """Coefficient matrix in the basis v B, that is B^-1 a B."""
    n = len(matrix)
    Bi = invert(B)
    out = []
    for i in range(n):
        row = []
        for k in range(n):
            e = Polynomial()
            for j in range(n):
                for l in range(n):
                    c = Bi[i][j] * B[l][k]
                    if c:
                        e = e + matrix[j][l] * c
            row.append(e)
        out.append(row)
    return out
