"""Finite-dimensional comodules: validity, line stabilizers, torus weights.

A comodule of dimension n is given by its coefficient matrix a, with
rho(v_j) = sum_i v_i (x) a_ij.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diff_ring import DEFAULT_LOOKAHEAD, GroupSpec, closure_ideal
from .errors import NotATorus, NotCharacterCoefficients
from .groebner import normal_form
from .hopf import LEFT, RIGHT, comultiply, counit, tensor_ideal, to_copy
from .linalg import rank, rref
from .polynomial import Polynomial, Q
from .textio import format_poly, parse_poly


@dataclass(frozen=True)
class Comodule:
    group: GroupSpec
    matrix: tuple  # rows of Polynomial

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def create(cls, group: GroupSpec, matrix) -> "Comodule":
        rows = []
        for row in matrix:
            rows.append(tuple(parse_poly(a) if isinstance(a, str) else Polynomial.const(a)
                              if not isinstance(a, Polynomial) else a for a in row))
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("coefficient matrix must be square")
        return cls(group, tuple(rows))

    def entry(self, i: int, j: int) -> Polynomial:
        return self.matrix[i][j]

    @property
    def level(self) -> int:
        return max([a.max_shift() for r in self.matrix for a in r] + [self.group.order])

    def to_json(self):
        return {
            "group": self.group.to_json(),
            "n": self.n,
            "matrix": [[format_poly(a) for a in r] for r in self.matrix],
        }

    @classmethod
    def from_json(cls, data) -> "Comodule":
        c = cls.create(GroupSpec.from_json(data["group"]), data["matrix"])
        if "n" in data and int(data["n"]) != c.n:
            raise ValueError("n does not match the matrix size")
        return c


def comodule_failures(c: Comodule, level: int | None = None, lookahead: int = DEFAULT_LOOKAHEAD) -> list:
    """Names of the comodule axioms that fail ("coassociativity", "counit")."""
    if level is None:
        level = c.level
    amb = c.group.ambient
    failures = []
    for i in range(c.n):
        for j in range(c.n):
            if counit(c.entry(i, j), amb) != (1 if i == j else 0):
                failures.append("counit")
                break
        if failures:
            break
    ideal, _ = closure_ideal(c.group, level, lookahead)
    tens = tensor_ideal(amb, ideal.basis, ideal.basis, level)
    ok = True
    for i in range(c.n):
        for j in range(c.n):
            rhs = Polynomial()
            for l in range(c.n):
                rhs = rhs + to_copy(c.entry(i, l), LEFT) * to_copy(c.entry(l, j), RIGHT)
            if not normal_form(comultiply(c.entry(i, j), amb) - rhs, tens).is_zero():
                ok = False
                break
        if not ok:
            break
    if not ok:
        failures.append("coassociativity")
    return failures


def check_comodule(c: Comodule, level: int | None = None, lookahead: int = DEFAULT_LOOKAHEAD) -> bool:
    return not comodule_failures(c, level, lookahead)


def stabilizer_ideal(c: Comodule, m: int) -> GroupSpec:
    """Stabilizer of the span of the first m basis vectors: a_ij = 0 for j <= m < i."""
    if not 0 <= m <= c.n:
        raise ValueError("m must lie between 0 and n")
    extra = [c.entry(i, j) for j in range(m) for i in range(m, c.n)]
    name = f"Stab_{m}({c.group.name})" if c.group.name else f"Stab_{m}"
    return c.group.with_generators(extra, name=name)


# -- tori ---------------------------------------------------------------------


def _character_of(m, ambient):
    """Laurent exponent vector of a monomial in torus coordinates."""
    exps = {}
    for v, e in m:
        if v.kind == "y":
            key, sgn = v, 1
        elif v.kind == "iy":
            key, sgn = v._replace(kind="y"), -1
        else:
            raise NotCharacterCoefficients(f"{v} is not a torus coordinate")
        exps[key] = exps.get(key, 0) + sgn * e
    return tuple(sorted((k, e) for k, e in exps.items() if e))


def character_polynomial(chi) -> Polynomial:
    exps = {}
    for v, e in chi:
        if e > 0:
            exps[v] = e
        else:
            exps[v._replace(kind="iy")] = -e
    return Polynomial.monomial(exps)


def character_expansion(p: Polynomial, ambient) -> dict:
    out = {}
    for m, c in p.items():
        chi = _character_of(m, ambient)
        out[chi] = out.get(chi, 0) + c
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class TorusLine:
    character: Polynomial
    vector: tuple

    def to_json(self):
        return {"character": format_poly(self.character), "vector": [str(x) for x in self.vector]}


def torus_decompose(c: Comodule) -> list:
    """Split V into lines on which the torus acts through a character.

    For each character chi the matrix C_chi of chi-coefficients is a
    projector; its column space is the weight space V_chi.
    """
    amb = c.group.ambient
    if any(f.kind != "Gm" for f in amb.factors) or c.group.generators:
        raise NotATorus("torus_decompose needs a free product of G_m factors")
    n = c.n
    expansions = [[character_expansion(c.entry(i, j), amb) for j in range(n)] for i in range(n)]
    chars = sorted({chi for row in expansions for e in row for chi in e},
                   key=lambda chi: format_poly(character_polynomial(chi)))
    lines = []
    for chi in chars:
        C = [[Q(expansions[i][j].get(chi, 0)) for j in range(n)] for i in range(n)]
        cols = [[C[i][j] for i in range(n)] for j in range(n)]
        red, _ = rref(cols, n)
        for vec in red:
            lines.append(TorusLine(character_polynomial(chi), tuple(vec)))
    if rank([list(l.vector) for l in lines]) != n or len(lines) != n:
        raise NotCharacterCoefficients("weight spaces do not form a direct sum decomposition of V")
    return lines


def character_multiset(lines) -> list:
    return sorted(format_poly(l.character) for l in lines)
