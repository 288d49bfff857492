"""Dense univariate polynomials over Q: gcd, squarefree parts, factorization.

A polynomial is a list of coefficients, constant term first, with no
trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

from itertools import product
from math import gcd as igcd

from .errors import FactorDegreeExceeded
from .polynomial import Polynomial, Q, VarId

DEFAULT_FACTOR_DEGREE_CAP = 8


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a) -> int:
    return len(a) - 1


def add(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a, b):
    return add(a, [-c for c in b])


def mul(a, b):
    if not a or not b:
        return []
    out = [Q(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def scale(a, c):
    return trim([x * c for x in a])


def divmod_poly(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = [Q(x) for x in a]
    q = [Q(0)] * max(len(a) - len(b) + 1, 1)
    lead = Q(b[-1])
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        a = trim(a)
    return trim(q), a


def monic(a):
    if not a:
        return a
    return scale(a, 1 / Q(a[-1]))


def gcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [Q(1)], []
    t0, t1 = [], [Q(1)]
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return [], [], []
    inv = 1 / Q(r0[-1])
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def derivative(a):
    return trim([a[i] * i for i in range(1, len(a))])


def evaluate(a, x):
    acc = Q(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def squarefree_part(a):
    a = trim(a)
    if degree(a) <= 0:
        return monic(a)
    g = gcd(a, derivative(a))
    return monic(divmod_poly(a, g)[0])


def squarefree_decomposition(a):
    """Yun's algorithm: list of (factor, multiplicity) with squarefree coprime factors."""
    a = monic(trim(a))
    out = []
    if degree(a) <= 0:
        return out
    b = gcd(a, derivative(a))
    c = divmod_poly(a, b)[0]
    d = sub(divmod_poly(derivative(a), b)[0], derivative(c))
    i = 1
    while degree(c) > 0:
        g = gcd(c, d)
        if degree(g) > 0:
            out.append((g, i))
        c = divmod_poly(c, g)[0]
        d = sub(divmod_poly(d, g)[0], derivative(c))
        i += 1
    return out


def _primitive_integer(a):
    """Scale to a primitive integer polynomial with positive leading coefficient."""
    den = 1
    for c in a:
        den = den * c.denominator // igcd(den, int(c.denominator))
    ints = [int(c * den) for c in a]
    g = 0
    for x in ints:
        g = igcd(g, abs(x))
    ints = [x // g for x in ints]
    if ints[-1] < 0:
        ints = [-x for x in ints]
    return ints


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _interpolate(xs, ys):
    """Lagrange interpolation over Q."""
    result = []
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num = [Q(1)]
        den = Q(1)
        for j, xj in enumerate(xs):
            if j != i:
                num = mul(num, [Q(-xj), Q(1)])
                den *= xi - xj
        result = add(result, scale(num, Q(yi) / den))
    return result


def _find_factor(f_int, d):
    """A factor of degree exactly d of the integer polynomial, or None (Kronecker)."""
    f = [Q(c) for c in f_int]
    candidates = []
    x = 0
    step = 0
    while len(candidates) < 4 * (d + 1) and step < 200:
        for pt in ((x,) if x == 0 else (x, -x)):
            v = evaluate(f, pt)
            if v != 0:
                candidates.append((len(_divisors(int(v))), pt, int(v)))
        x += 1
        step += 1
    candidates.sort()
    pts = candidates[: d + 1]
    xs = [p for _, p, _ in pts]
    choices = []
    for k, (_, _, v) in enumerate(pts):
        ds = _divisors(v)
        choices.append(ds if k == 0 else ds + [-t for t in ds])
    for ys in product(*choices):
        g = _interpolate(xs, ys)
        if degree(g) != d:
            continue
        if any(c.denominator != 1 for c in g):
            continue
        q, r = divmod_poly(f, g)
        if not r and all(c.denominator != 0 for c in q):
            return g
    return None


def _rational_root(f_int):
    lead, const = f_int[-1], f_int[0]
    if const == 0:
        return Q(0)
    f = [Q(c) for c in f_int]
    for p in _divisors(const):
        for q in _divisors(lead):
            for r in (Q(p, q), Q(-p, q)):
                if evaluate(f, r) == 0:
                    return r
    return None


def _factor_squarefree(a, cap):
    a = monic(a)
    if degree(a) <= 1:
        return [a] if degree(a) == 1 else []
    f_int = _primitive_integer(a)
    r = _rational_root(f_int)
    if r is not None:
        lin = [-r, Q(1)]
        return [lin] + _factor_squarefree(divmod_poly(a, lin)[0], cap)
    n = degree(a)
    for d in range(2, n // 2 + 1):
        if d > cap:
            break
        g = _find_factor(f_int, d)
        if g is not None:
            g = monic(g)
            return _factor_squarefree(g, cap) + _factor_squarefree(divmod_poly(a, g)[0], cap)
    if n > cap:
        if n // 2 > cap:
            raise FactorDegreeExceeded(f"could not certify factorization of a degree-{n} polynomial")
        raise FactorDegreeExceeded(f"irreducible factor of degree {n} exceeds the cap {cap}")
    return [a]


def factor(a, cap: int = DEFAULT_FACTOR_DEGREE_CAP):
    """Irreducible factorization over Q: list of (monic factor, multiplicity)."""
    out = []
    for part, mult in squarefree_decomposition(a):
        for f in _factor_squarefree(part, cap):
            out.append((f, mult))
    out.sort(key=lambda fm: (degree(fm[0]), [tuple((c.numerator, c.denominator)) for c in fm[0]]))
    return out


def to_univariate(p: Polynomial, v: VarId):
    coeffs = {}
    for m, c in p.items():
        if any(w != v for w, _ in m):
            raise ValueError(f"{p} is not univariate in {v}")
        e = m[0][1] if m else 0
        coeffs[e] = c
    if not coeffs:
        return []
    return trim([coeffs.get(i, Q(0)) for i in range(max(coeffs) + 1)])


def from_univariate(a, v: VarId) -> Polynomial:
    return Polynomial({((((v, i),) if i else ())): c for i, c in enumerate(a) if c})


def compose_in_algebra(a, element, reduce):
    """Evaluate univariate ``a`` at ``element`` (Polynomial) with a reducer (Horner)."""
    acc = Polynomial()
    for c in reversed(a):
        acc = reduce(acc * element + c)
    return acc


def mul_pow(a, k: int):
    out = [Q(1)]
    for _ in range(k):
        out = mul(out, a)
    return out
