"""Maps between Galois polarities and their carrier-level counterparts.

A polarity morphism is a compatible triple of monotone maps between the
two sides and the bases.  Each such triple corresponds to exactly one
stable map between the intermediate quotients, and the translation in
either direction is implemented and certified here.
"""

from __future__ import annotations

from .errors import DomainMismatch, MorphismInvalid, PartialInverseUndefined
from .order import (
    MonotoneMap,
    compose as compose_maps,
    is_cut_stable,
    is_order_embedding,
    tag_x,
    tag_y,
)
from .polarity import intermediate_structure, unique_3preorder


def structure_of(pol):
    """The intermediate quotient of a Galois polarity with its maps."""
    return intermediate_structure(pol, unique_3preorder(pol))


class PolarityMorphism:
    """A triple of monotone maps between Galois polarities.

    The triple must commute with the side embeddings, respect the
    cross-side order of the intermediate quotients, and reflect every
    absent relation pair back to an absent pair bounding it.
    """

    __slots__ = ("source", "target", "hx", "hp", "hy", "src_struct", "tgt_struct")

    def __init__(self, source, target, hx, hp, hy, _structs=None):
        if hx.source != source.x or hx.target != target.x:
            raise DomainMismatch("left component must map the left sides")
        if hy.source != source.y or hy.target != target.y:
            raise DomainMismatch("right component must map the right sides")
        if hp.source != source.base or hp.target != target.base:
            raise DomainMismatch("base component must map the bases")
        self.source = source
        self.target = target
        self.hx, self.hp, self.hy = hx, hp, hy
        if _structs is None:
            self.src_struct = structure_of(source)
            self.tgt_struct = structure_of(target)
        else:
            self.src_struct, self.tgt_struct = _structs
        self._validate()

    def _validate(self):
        s, t = self.source, self.target
        for p in s.base.elements:
            if self.hx(s.ex(p)) != t.ex(self.hp(p)):
                raise MorphismInvalid(
                    "commute-left", "left square does not commute", p
                )
            if self.hy(s.ey(p)) != t.ey(self.hp(p)):
                raise MorphismInvalid(
                    "commute-right", "right square does not commute", p
                )
        qs, qt = self.src_struct.quotient.poset, self.tgt_struct.quotient.poset
        ia, ib = self.src_struct.iota_x, self.src_struct.iota_y
        ja, jb = self.tgt_struct.iota_x, self.tgt_struct.iota_y
        for x in s.x.elements:
            for y in s.y.elements:
                if qs.leq(ib(y), ia(x)) and not qt.leq(
                    jb(self.hy(y)), ja(self.hx(x))
                ):
                    raise MorphismInvalid(
                        "cross-order", "cross-side order not respected", (y, x)
                    )
        for xp in t.x.elements:
            for yp in t.y.elements:
                if (xp, yp) in t.rel:
                    continue
                if not self._reflects(xp, yp):
                    raise MorphismInvalid(
                        "reflection",
                        "absent pair has no bounding absent pair",
                        (xp, yp),
                    )

    def _reflects(self, xp, yp):
        s, t = self.source, self.target
        for x in s.x.elements:
            if not all(
                s.x.leq(x, a)
                for a in s.x.elements
                if t.x.leq(xp, self.hx(a))
            ):
                continue
            for y in s.y.elements:
                if (x, y) in s.rel:
                    continue
                if not all(
                    s.y.leq(b, y)
                    for b in s.y.elements
                    if t.y.leq(self.hy(b), yp)
                ):
                    continue
                if not all(
                    (a, y) in s.rel
                    for a in s.x.elements
                    if (self.hx(a), yp) in t.rel
                ):
                    continue
                if all(
                    (x, b) in s.rel
                    for b in s.y.elements
                    if (xp, self.hy(b)) in t.rel
                ):
                    return True
        return False

    def __eq__(self, other):
        return (
            isinstance(other, PolarityMorphism)
            and self.hx == other.hx
            and self.hp == other.hp
            and self.hy == other.hy
        )

    def __hash__(self):
        return hash((id(self.source), id(self.target)))

    def is_embedding(self):
        s, t = self.source, self.target
        return (
            is_order_embedding(self.hx)
            and is_order_embedding(self.hp)
            and is_order_embedding(self.hy)
            and all(
                (x, y) in s.rel
                for x in s.x.elements
                for y in s.y.elements
                if (self.hx(x), self.hy(y)) in t.rel
            )
        )

    def is_isomorphism(self):
        return (
            self.is_embedding()
            and self.hx.is_surjective()
            and self.hp.is_surjective()
            and self.hy.is_surjective()
        )

    @classmethod
    def identity(cls, pol):
        return cls(
            pol,
            pol,
            MonotoneMap.identity(pol.x),
            MonotoneMap.identity(pol.base),
            MonotoneMap.identity(pol.y),
        )


def is_galois_stable(psi, src_struct, tgt_struct):
    """Order preserving, cut-stable, and carrying base and side images
    into the corresponding images."""
    if not is_cut_stable(psi):
        return False
    g_img = set(tgt_struct.gamma.image())
    x_img = set(tgt_struct.iota_x.image())
    y_img = set(tgt_struct.iota_y.image())
    return (
        all(psi(v) in g_img for v in src_struct.gamma.image())
        and all(psi(v) in x_img for v in src_struct.iota_x.image())
        and all(psi(v) in y_img for v in src_struct.iota_y.image())
    )


def psi_of(morphism):
    """The stable quotient map induced by a polarity morphism.

    Certified on the way out: well defined across equivalence classes,
    stable, an embedding exactly when the morphism embeds, and onto
    whenever both side components are.
    """
    src, tgt = morphism.src_struct, morphism.tgt_struct
    s = morphism.source
    assignment = {}
    for rep in src.quotient.poset.elements:
        cls = src.quotient.classes[rep]
        values = set()
        for side, raw in cls:
            if side == "X":
                values.add(tgt.iota_x(morphism.hx(raw)))
            else:
                values.add(tgt.iota_y(morphism.hy(raw)))
        assert len(values) == 1, "quotient map must not depend on representatives"
        assignment[rep] = values.pop()
    psi = MonotoneMap(src.quotient.poset, tgt.quotient.poset, assignment)
    assert is_galois_stable(psi, src, tgt), "induced quotient map must be stable"
    assert is_order_embedding(psi) == morphism.is_embedding(), (
        "quotient map embeds exactly when the morphism does"
    )
    if morphism.hx.is_surjective() and morphism.hy.is_surjective():
        assert psi.is_surjective(), "surjective components force an onto map"
    return psi


def _partial_inverse(emb, value, label):
    for p in emb.source.elements:
        if emb(p) == value:
            return p
    raise PartialInverseUndefined("%s misses the value %r" % (label, value))


def h_of(psi, source, target, _structs=None):
    """The polarity morphism recovered from a stable quotient map."""
    if _structs is None:
        src, tgt = structure_of(source), structure_of(target)
    else:
        src, tgt = _structs
    if psi.source != src.quotient.poset or psi.target != tgt.quotient.poset:
        raise DomainMismatch("map must run between the intermediate quotients")
    if not is_galois_stable(psi, src, tgt):
        raise MorphismInvalid("stability", "map is not stable", None)
    hx = MonotoneMap(
        source.x,
        target.x,
        {
            x: _partial_inverse(tgt.iota_x, psi(src.iota_x(x)), "left side")
            for x in source.x.elements
        },
    )
    hy = MonotoneMap(
        source.y,
        target.y,
        {
            y: _partial_inverse(tgt.iota_y, psi(src.iota_y(y)), "right side")
            for y in source.y.elements
        },
    )
    hp = MonotoneMap(
        source.base,
        target.base,
        {
            p: _partial_inverse(tgt.gamma, psi(src.gamma(p)), "base")
            for p in source.base.elements
        },
    )
    return PolarityMorphism(source, target, hx, hp, hy, _structs=(src, tgt))


def roundtrip_holds(morphism):
    """Translating a morphism to its quotient map and back returns it."""
    back = h_of(
        psi_of(morphism),
        morphism.source,
        morphism.target,
        _structs=(morphism.src_struct, morphism.tgt_struct),
    )
    return back == morphism


def stable_roundtrip_holds(psi, source, target):
    """Translating a stable map to a morphism and back returns it."""
    src, tgt = structure_of(source), structure_of(target)
    h = h_of(psi, source, target, _structs=(src, tgt))
    return psi_of(h) == psi


def compose(outer, inner):
    """Componentwise composition, certified against the quotient maps."""
    if inner.target is not outer.source and inner.target != outer.source:
        raise DomainMismatch("morphisms do not share the middle polarity")
    composed = PolarityMorphism(
        inner.source,
        outer.target,
        compose_maps(outer.hx, inner.hx),
        compose_maps(outer.hp, inner.hp),
        compose_maps(outer.hy, inner.hy),
        _structs=(inner.src_struct, outer.tgt_struct),
    )
    lhs = psi_of(composed)
    rhs = compose_maps(psi_of(outer), psi_of(inner))
    assert lhs == rhs, "quotient maps must compose with the morphisms"
    return composed
