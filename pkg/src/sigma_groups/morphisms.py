"""Morphisms of sigma-algebraic groups through their dual maps.

A morphism G -> H is given by the dual map phi*, an assignment of a
difference polynomial in the source coordinates to every target
coordinate.  Since phi* commutes with the shift, sigma^s(h) is sent to
sigma^s(phi*(h)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diff_ring import (
    DEFAULT_LOOKAHEAD,
    AmbientSpec,
    GroupSpec,
    _det,
    closure_ideal,
    level_order,
    order_of,
    shift,
    sigma_generators,
)
from .errors import AmbientMismatch, BudgetExceeded, LevelTooSmall
from .groebner import IdealBasis, MonomialOrder, eliminate, groebner, ideal_contains, ideal_equal, normal_form
from .hopf import comultiply, counit, tensor_ideal, to_copy
from .polynomial import Polynomial, VarId
from .textio import format_poly, format_var, parse_poly, parse_var

UNKNOWN = "unknown"
TAG = "t"


def _inverse(p: Polynomial, ambient: AmbientSpec):
    """Inverse of a monomial in invertible coordinates, or None."""
    if len(p) != 1:
        return None
    (m, c), = p.items()
    inv = Polynomial.const(1 / c)
    for v, e in m:
        if v.kind == "y" and ambient.factor_of(v.base()).kind == "Gm":
            w = Polynomial.var(v._replace(kind="iy"))
        elif v.kind == "iy":
            w = Polynomial.var(v._replace(kind="y"))
        elif v.kind == "idet":
            w = _det(ambient.matrix(v.shift))
        else:
            return None
        inv = inv * w ** e
    return inv


@dataclass(frozen=True)
class MorphismSpec:
    source: GroupSpec
    target: GroupSpec
    assignment: tuple  # sorted pairs (target base coordinate, Polynomial)

    @classmethod
    def create(cls, source: GroupSpec, target: GroupSpec, assignment) -> "MorphismSpec":
        """Build from a mapping; images of inverse coordinates are derived when possible."""
        amap = {}
        for k, v in dict(assignment).items():
            key = parse_var(k) if isinstance(k, str) else k
            val = parse_poly(v) if isinstance(v, str) else v
            if isinstance(val, (int,)):
                val = Polynomial.const(val)
            amap[key] = val
        src_coords = set(source.ambient.coords())
        for h, img in amap.items():
            if h.shift or h.copy or h not in set(target.ambient.coords()):
                raise ValueError(f"{format_var(h)} is not a base coordinate of the target")
            for w in img.variables():
                if w.copy or w.base() not in src_coords:
                    raise ValueError(f"image of {format_var(h)} uses {w}, not a source coordinate")
        tam = target.ambient
        for h in tam.primary_coords():
            if h not in amap:
                raise ValueError(f"no image given for {format_var(h)}")
        for h in tam.coords():
            if h in amap:
                continue
            if h.kind == "iy":
                inv = _inverse(amap[h._replace(kind="y")], source.ambient)
            else:
                inv = _inverse(_det([[amap[VarId("x", (j, k))] for k in range(1, tam.gl_size() + 1)]
                                     for j in range(1, tam.gl_size() + 1)]), source.ambient)
            if inv is None:
                raise ValueError(f"cannot derive the image of {format_var(h)}; give it explicitly")
            amap[h] = inv
        pairs = tuple(sorted(amap.items(), key=lambda kv: tam.coords().index(kv[0])))
        return cls(source, target, pairs)

    @property
    def images(self) -> dict:
        return dict(self.assignment)

    @property
    def order(self) -> int:
        return max((order_of(p) for _, p in self.assignment), default=0)

    def pullback(self, p: Polynomial) -> Polynomial:
        """phi*(p) for a polynomial in the target coordinates."""
        images = self.images
        sub = {}
        for v in p.variables():
            if v.copy:
                continue
            sub[v] = shift(images[v.base()], v.shift)
        return p.substitute(sub)

    def to_json(self):
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "assignment": {format_var(h): format_poly(p) for h, p in self.assignment},
        }

    @classmethod
    def from_json(cls, data) -> "MorphismSpec":
        return cls.create(GroupSpec.from_json(data["source"]), GroupSpec.from_json(data["target"]),
                          data["assignment"])


def identity_embedding(sub: GroupSpec, target: GroupSpec | None = None) -> MorphismSpec:
    """Inclusion of ``sub`` into ``target`` (default: the free group on the same ambient)."""
    if target is None:
        target = GroupSpec(sub.ambient, (), "ambient")
    if target.ambient != sub.ambient:
        raise AmbientMismatch("inclusion needs a common ambient")
    return MorphismSpec.create(sub, target, {h: Polynomial.var(h) for h in sub.ambient.coords()})


def _tag(v: VarId) -> VarId:
    return v._replace(copy=TAG)


def _untag(p: Polynomial) -> Polynomial:
    return p.map_vars(lambda v: v._replace(copy="") if v.copy == TAG else v)


def _graph_ideal(phi: MorphismSpec, i: int, N: int, order: MonomialOrder, lookahead: int):
    src, _ = closure_ideal(phi.source, N, lookahead)
    gens = list(src.basis)
    for h in phi.target.ambient.coords_at(i):
        gens.append(Polynomial.var(_tag(h)) - phi.pullback(Polynomial.var(h)))
    return groebner(gens, order)


def image_ideal(phi: MorphismSpec, i: int, N: int | None = None,
                lookahead: int = DEFAULT_LOOKAHEAD) -> IdealBasis:
    """Defining ideal of the level-i closure of phi(G), i.e. ker(phi*) at shifts <= i."""
    need = i + phi.order
    if N is None:
        N = need
    if N < need:
        raise LevelTooSmall(f"N={N} must be at least i + order(phi) = {need}")
    tam = phi.target.ambient
    tags = [_tag(h) for h in tam.coords_at(i)]
    src_vars = list(phi.source.ambient.coords_at(N))
    order = MonomialOrder.block(src_vars, tags)
    graph = _graph_ideal(phi, i, N, order, lookahead)
    contracted = eliminate(graph, tags)
    gens = [_untag(g) for g in contracted.basis] + tam.relations(i)
    return groebner(gens, level_order(tam, i))


def kernel_group(phi: MorphismSpec) -> GroupSpec:
    """phi^{-1}(1): the source generators plus phi*(h) - epsilon(h)."""
    tam = phi.target.ambient
    extra = [phi.pullback(Polynomial.var(h)) - tam.identity_value(h) for h in tam.primary_coords()]
    return phi.source.with_generators(extra, name=f"ker({phi.source.name})" if phi.source.name else "kernel")


def preimage_group(phi: MorphismSpec, Z: GroupSpec) -> GroupSpec:
    """phi^{-1}(Z) for a subgroup Z of the target ambient."""
    if Z.ambient != phi.target.ambient:
        raise AmbientMismatch("Z must live in the target ambient")
    return phi.source.with_generators([phi.pullback(g) for g in Z.generators])


def _augmentation(ambient: AmbientSpec, level: int):
    return [Polynomial.var(v.at(s)) - ambient.identity_value(v)
            for s in range(level + 1) for v in ambient.primary_coords()]


def is_injective(phi: MorphismSpec, bound: int, lookahead: int = DEFAULT_LOOKAHEAD):
    """True, False or UNKNOWN.

    False when the kernel closure misses a coordinate of the augmentation
    ideal at some level <= bound.  True when every source coordinate up to
    shift ``bound`` lies in the subalgebra generated by the phi*-images.
    """
    K = kernel_group(phi)
    try:
        for i in range(max(bound, K.order) + 1):
            kid, _ = closure_ideal(K, i, lookahead)
            if kid.is_unit():
                continue
            if any(not normal_form(a, kid).is_zero() for a in _augmentation(K.ambient, min(i, bound))):
                return False
    except BudgetExceeded:
        return UNKNOWN
    N = bound + phi.order
    tags = [_tag(h) for h in phi.target.ambient.coords_at(bound)]
    order = MonomialOrder.block(list(phi.source.ambient.coords_at(N)), tags)
    try:
        graph = _graph_ideal(phi, bound, N, order, lookahead)
    except BudgetExceeded:
        return UNKNOWN
    if graph.is_unit():
        return True
    for v in phi.source.ambient.coords_at(bound):
        r = normal_form(Polynomial.var(v), graph)
        if any(w.copy != TAG for w in r.variables()):
            return UNKNOWN
    return True


def is_surjective(phi: MorphismSpec, bound: int, lookahead: int = DEFAULT_LOOKAHEAD):
    """True, False or UNKNOWN by comparing the image closure with the target closure."""
    try:
        for i in range(bound + 1):
            img = image_ideal(phi, i, lookahead=lookahead)
            tgt, _ = closure_ideal(phi.target, i, lookahead)
            if not ideal_equal(img, tgt):
                if ideal_contains(img, tgt):
                    return False
                return UNKNOWN
    except BudgetExceeded:
        return UNKNOWN
    return True


@dataclass(frozen=True)
class Factorization:
    image: GroupSpec
    surjection: MorphismSpec
    embedding: MorphismSpec
    composition_ok: bool
    stabilized: bool
    notes: tuple = field(default=())

    def to_json(self):
        return {
            "image": self.image.to_json(),
            "surjection": self.surjection.to_json(),
            "embedding": self.embedding.to_json(),
            "composition_ok": self.composition_ok,
            "stabilized": self.stabilized,
            "notes": list(self.notes),
        }


def factorize(phi: MorphismSpec, bound: int, lookahead: int = DEFAULT_LOOKAHEAD) -> Factorization:
    """phi = embedding o surjection through the closure of the image."""
    tam = phi.target.ambient
    img = image_ideal(phi, bound, lookahead=lookahead)
    gens = sigma_generators(tam, img, bound)
    image = GroupSpec(tam, gens, f"im({phi.source.name})" if phi.source.name else "image")
    surj = MorphismSpec(phi.source, image, phi.assignment)
    emb = identity_embedding(image, phi.target)
    composed = {h: surj.pullback(p) for h, p in emb.assignment}
    composition_ok = composed == phi.images
    notes = []
    try:
        again, _ = closure_ideal(image, bound, lookahead)
        stabilized = ideal_equal(again, img)
    except BudgetExceeded:
        stabilized = False
    if not stabilized:
        notes.append("image generators do not reproduce the image closure at the bound")
    return Factorization(image, surj, emb, composition_ok, stabilized, tuple(notes))


def check_morphism(phi: MorphismSpec, level: int, lookahead: int = DEFAULT_LOOKAHEAD) -> dict:
    """Certify at one level that phi maps G into H and respects the group laws."""
    src, _ = closure_ideal(phi.source, level + phi.order, lookahead)
    lvl = level + phi.order
    into = all(
        normal_form(phi.pullback(shift(g, t)), src).is_zero()
        for g in phi.target.generators
        for t in range(max(level - order_of(g), -1) + 1)
    )
    tens = tensor_ideal(phi.source.ambient, src.basis, src.basis, lvl)
    homo = True
    sam, tam = phi.source.ambient, phi.target.ambient
    for h, p in phi.assignment:
        lhs = comultiply(p, sam)
        d = comultiply(Polynomial.var(h), tam)
        sub = {}
        for w in d.variables():
            sub[w] = to_copy(phi.pullback(Polynomial.var(w._replace(copy=""))), w.copy)
        rhs = d.substitute(sub)
        if not normal_form(lhs - rhs, tens).is_zero():
            homo = False
            break
    unit = all(counit(p, sam) == tam.identity_value(h) for h, p in phi.assignment)
    return {"maps_into_target": into, "comultiplicative": homo, "counital": unit}
