"""The two-way passage between Galois polarities and dense completions.

A Galois polarity generates a dense completion of its base by cut
completing the intermediate quotient; a dense completion generates a
complete Galois polarity from the meet and join closures of its image.
The two constructions are adjoint, and this module materialises the
unit, the counit, the functor laws and the mediating-map universal
property as finite checks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CarrierTooLarge,
    ConditionOneFails,
    DomainMismatch,
    NotDelta1,
    NotGalois,
)
from .order import (
    Extension,
    MonotoneMap,
    compose as compose_maps,
    is_completion,
    is_delta1,
    is_order_embedding,
    macneille,
    macneille_lift,
    order_isomorphisms,
)
from .polarity import ExtensionPolarity, is_galois, r_l
from .morphisms import PolarityMorphism, psi_of, structure_of


class Delta1Completion:
    """A completion of a poset whose image is doubly dense."""

    __slots__ = ("base", "completion")

    def __init__(self, completion):
        if not is_delta1(completion):
            raise NotDelta1("target must be a complete lattice with a dense image")
        self.base = completion.base
        self.completion = completion

    @property
    def lattice(self):
        return self.completion.target

    def __call__(self, p):
        return self.completion(p)

    def __eq__(self, other):
        return (
            isinstance(other, Delta1Completion)
            and self.completion == other.completion
        )

    def __hash__(self):
        return hash(self.completion)


def _is_complete_hom(g):
    """On finite lattices: preserves both bounds and all binary meets
    and joins."""
    s, t = g.source, g.target
    if g(s.top()) != t.top() or g(s.bottom()) != t.bottom():
        return False
    for a in s.elements:
        for b in s.elements:
            if g(s.meet([a, b])) != t.meet([g(a), g(b)]):
                return False
            if g(s.join([a, b])) != t.join([g(a), g(b)]):
                return False
    return True


class Delta1Morphism:
    """A commuting square between dense completions whose lattice leg is
    a complete homomorphism."""

    __slots__ = ("source", "target", "f", "g")

    def __init__(self, source, target, f, g):
        if f.source != source.base or f.target != target.base:
            raise DomainMismatch("base leg must map the bases")
        if g.source != source.lattice or g.target != target.lattice:
            raise DomainMismatch("lattice leg must map the lattices")
        if not _is_complete_hom(g):
            raise DomainMismatch("lattice leg must be a complete homomorphism")
        for p in source.base.elements:
            if g(source(p)) != target(f(p)):
                raise DomainMismatch("square does not commute at %r" % (p,))
        self.source, self.target = source, target
        self.f, self.g = f, g

    def __eq__(self, other):
        return (
            isinstance(other, Delta1Morphism)
            and self.f == other.f
            and self.g == other.g
        )

    def is_isomorphism(self):
        return (
            self.f.is_injective()
            and self.f.is_surjective()
            and is_order_embedding(self.f)
            and self.g.is_injective()
            and self.g.is_surjective()
            and is_order_embedding(self.g)
        )

    @classmethod
    def identity(cls, d):
        return cls(
            d, d, MonotoneMap.identity(d.base), MonotoneMap.identity(d.lattice)
        )


def compose_delta1(outer, inner):
    if inner.target != outer.source:
        raise DomainMismatch("squares do not share the middle completion")
    return Delta1Morphism(
        inner.source,
        outer.target,
        compose_maps(outer.f, inner.f),
        compose_maps(outer.g, inner.g),
    )


def gamma_on_objects(pol):
    """The dense completion generated by a Galois polarity: cut complete
    the intermediate quotient and precompose with the base map."""
    if not is_galois(pol):
        raise NotGalois("only Galois polarities generate dense completions")
    struct = structure_of(pol)
    m = macneille(struct.quotient.poset)
    d = Extension(compose_maps(m.map, struct.gamma))
    return Delta1Completion(d)


def gamma_on_morphisms(morphism):
    """Lift a polarity morphism to the generated completions through the
    cut completion of its quotient map."""
    lift = macneille_lift(psi_of(morphism))
    return Delta1Morphism(
        gamma_on_objects(morphism.source),
        gamma_on_objects(morphism.target),
        morphism.hp,
        lift,
    )


def delta_on_objects(d):
    """The complete Galois polarity generated by a dense completion:
    sides are the meet and join closures of the image, related by the
    lattice order."""
    lat = d.lattice
    img = [d(p) for p in d.base.elements]
    x_elems = [
        v
        for v in lat.elements
        if lat.meet([w for w in img if lat.leq(v, w)]) == v
    ]
    y_elems = [
        v
        for v in lat.elements
        if lat.join([w for w in img if lat.leq(w, v)]) == v
    ]
    x_side = lat.restrict(x_elems)
    y_side = lat.restrict(y_elems)
    ex = Extension(MonotoneMap(d.base, x_side, {p: d(p) for p in d.base.elements}))
    ey = Extension(MonotoneMap(d.base, y_side, {p: d(p) for p in d.base.elements}))
    rel = frozenset(
        (a, b) for a in x_elems for b in y_elems if lat.leq(a, b)
    )
    pol = ExtensionPolarity(d.base, ex, ey, rel)
    assert is_galois(pol), "a dense completion must generate a Galois polarity"
    assert is_completion(ex) and is_completion(ey), (
        "generated sides must be complete"
    )
    return pol


def delta_on_morphisms(m):
    """Restrict the lattice leg of a completion square to the generated
    sides; the triple is validated as a polarity morphism."""
    src = delta_on_objects(m.source)
    tgt = delta_on_objects(m.target)
    hx = MonotoneMap(src.x, tgt.x, {v: m.g(v) for v in src.x.elements})
    hy = MonotoneMap(src.y, tgt.y, {v: m.g(v) for v in src.y.elements})
    return PolarityMorphism(src, tgt, hx, m.f, hy)


def is_complete_polarity(pol):
    return is_completion(pol.ex) and is_completion(pol.ey)


def _polarity_isos_over_base(src, tgt):
    """All polarity isomorphisms src -> tgt whose base component is the
    identity."""
    forced_x = {src.ex(p): tgt.ex(p) for p in src.base.elements}
    forced_y = {src.ey(p): tgt.ey(p) for p in src.base.elements}
    out = []
    for gx in order_isomorphisms(src.x, tgt.x, forced=forced_x):
        for gy in order_isomorphisms(src.y, tgt.y, forced=forced_y):
            rel_ok = all(
                ((gx(a), gy(b)) in tgt.rel) == ((a, b) in src.rel)
                for a in src.x.elements
                for b in src.y.elements
            )
            if rel_ok:
                out.append(
                    PolarityMorphism(
                        src, tgt, gx, MonotoneMap.identity(src.base), gy
                    )
                )
    return out


def unit(pol, unique_gate=8):
    """The canonical embedding of a Galois polarity into the one its
    completion generates.

    Always a polarity embedding; an isomorphism exactly when both sides
    are already complete, and then the only isomorphism over the
    identity base (checked exhaustively under the carrier gate).
    """
    d = gamma_on_objects(pol)
    image = delta_on_objects(d)
    struct = structure_of(pol)
    m = macneille(struct.quotient.poset)
    hx = MonotoneMap(
        pol.x, image.x, {x: m(struct.iota_x(x)) for x in pol.x.elements}
    )
    hy = MonotoneMap(
        pol.y, image.y, {y: m(struct.iota_y(y)) for y in pol.y.elements}
    )
    eta = PolarityMorphism(
        pol, image, hx, MonotoneMap.identity(pol.base), hy
    )
    assert eta.is_embedding(), "unit must embed"
    complete = is_complete_polarity(pol)
    assert eta.is_isomorphism() == complete, (
        "unit is an isomorphism exactly for complete polarities"
    )
    if complete and len(image.x) <= unique_gate and len(image.y) <= unique_gate:
        isos = _polarity_isos_over_base(pol, image)
        assert isos == [eta], "unit must be the only isomorphism over the base"
    return eta


def _class_value(members):
    values = {raw for _, raw in members}
    assert len(values) == 1, "quotient classes of a lattice order carry one value"
    return values.pop()


def counit_iso(d):
    """The isomorphism from the completion generated by the generated
    polarity back onto the original lattice: a cut goes to the join of
    the values sitting below it."""
    pol = delta_on_objects(d)
    back = gamma_on_objects(pol)
    struct = structure_of(pol)
    q = struct.quotient.poset
    m = macneille(q)
    lat = d.lattice
    value = {
        rep: _class_value(struct.quotient.classes[rep]) for rep in q.elements
    }
    assignment = {}
    for c in back.lattice.elements:
        assignment[c] = lat.join(
            [value[z] for z in q.elements if back.lattice.leq(m(z), c)]
        )
    t = MonotoneMap(back.lattice, lat, assignment)
    tau = Delta1Morphism(back, d, MonotoneMap.identity(d.base), t)
    assert tau.is_isomorphism(), "counit must be an isomorphism"
    return tau


def _complete_homs(src, tgt, forced, gate=6):
    """All complete homomorphisms src -> tgt agreeing with `forced`,
    by backtracking over a linear extension with monotone pruning."""
    if len(src) > gate or len(tgt) > gate + 2:
        raise CarrierTooLarge("lattice too large for homomorphism search")
    order = sorted(src.elements, key=lambda e: bin(src.cols[src.index[e]]).count("1"))
    out = []

    def extend(k, partial):
        if k == len(order):
            g = MonotoneMap(src, tgt, dict(partial))
            if _is_complete_hom(g):
                out.append(g)
            return
        e = order[k]
        choices = [forced[e]] if e in forced else list(tgt.elements)
        for v in choices:
            ok = True
            for prev, pv in partial.items():
                if src.leq(prev, e) and not tgt.leq(pv, v):
                    ok = False
                    break
                if src.leq(e, prev) and not tgt.leq(v, pv):
                    ok = False
                    break
            if ok:
                partial[e] = v
                extend(k + 1, partial)
                del partial[e]

    extend(0, {})
    return out


@dataclass
class MediatorReport:
    mediator: Delta1Morphism
    factors: bool
    unique: bool
    exhaustive: bool


def mediate(pol, d, h, hom_gate=6):
    """For a polarity morphism h from a Galois polarity into the polarity
    a completion generates, the factoring completion square through the
    unit, with a uniqueness check (exhaustive under the gate, else via
    the forced values on the dense image)."""
    if h.source is not pol and h.source != pol:
        raise DomainMismatch("morphism must start at the polarity")
    target_pol = delta_on_objects(d)
    if h.target != target_pol:
        raise DomainMismatch("morphism must land in the generated polarity")
    tau = counit_iso(d)
    mediator = compose_delta1(tau, gamma_on_morphisms(h))
    eta = unit(pol)
    back = delta_on_morphisms(mediator)
    from .morphisms import compose as compose_morphisms

    factors = compose_morphisms(back, eta) == h
    src_lat = mediator.source.lattice
    forced = {mediator.source(p): d(h.hp(p)) for p in pol.base.elements}
    struct = structure_of(pol)
    m = macneille(struct.quotient.poset)
    for x in pol.x.elements:
        forced[m(struct.iota_x(x))] = h.hx(x)
    for y in pol.y.elements:
        forced[m(struct.iota_y(y))] = h.hy(y)
    try:
        candidates = [
            g
            for g in _complete_homs(src_lat, d.lattice, forced, gate=hom_gate)
            if all(g(mediator.source(p)) == d(h.hp(p)) for p in pol.base.elements)
        ]
        unique = candidates == [mediator.g] or (
            len(candidates) == 1 and candidates[0] == mediator.g
        )
        exhaustive = True
    except CarrierTooLarge:
        # A complete homomorphism is forced by its values on the dense
        # image: every cut is the join of image elements below it.
        determined = all(
            mediator.g(c)
            == d.lattice.join(
                [
                    v
                    for cc, v in forced.items()
                    if src_lat.leq(cc, c)
                ]
            )
            for c in src_lat.elements
        )
        unique = determined
        exhaustive = False
    return MediatorReport(
        mediator=mediator, factors=factors, unique=unique, exhaustive=exhaustive
    )


@dataclass
class AdjunctionChecklist:
    unit_embeds: bool
    naturality: bool
    gamma_identity: bool
    delta_identity: bool
    gamma_composition: bool
    delta_composition: bool
    roundtrips: bool

    def ok(self):
        return all(
            (
                self.unit_embeds,
                self.naturality,
                self.gamma_identity,
                self.delta_identity,
                self.gamma_composition,
                self.delta_composition,
                self.roundtrips,
            )
        )


def check_adjunction(polarities, morphisms=(), composable=()):
    """Finite evidence for the adjunction: unit embeddings and round
    trips on the given polarities, naturality squares on the given
    morphisms, and functor laws on identities and composable pairs."""
    from .morphisms import compose as compose_morphisms

    unit_embeds = True
    roundtrips = True
    for pol in polarities:
        eta = unit(pol)
        if not eta.is_embedding():
            unit_embeds = False
        d = gamma_on_objects(pol)
        if not counit_iso(d).is_isomorphism():
            roundtrips = False
        if is_complete_polarity(pol) and not eta.is_isomorphism():
            roundtrips = False

    naturality = True
    for g in morphisms:
        lhs = compose_morphisms(
            delta_on_morphisms(gamma_on_morphisms(g)), unit(g.source)
        )
        rhs = compose_morphisms(unit(g.target), g)
        if lhs != rhs:
            naturality = False

    gamma_identity = True
    delta_identity = True
    for pol in polarities:
        ident = PolarityMorphism.identity(pol)
        d = gamma_on_objects(pol)
        if gamma_on_morphisms(ident) != Delta1Morphism.identity(d):
            gamma_identity = False
        if delta_on_morphisms(Delta1Morphism.identity(d)) != (
            PolarityMorphism.identity(delta_on_objects(d))
        ):
            delta_identity = False

    gamma_composition = True
    delta_composition = True
    for outer, inner in composable:
        composed = compose_morphisms(outer, inner)
        if gamma_on_morphisms(composed) != compose_delta1(
            gamma_on_morphisms(outer), gamma_on_morphisms(inner)
        ):
            gamma_composition = False
        sq = compose_delta1(gamma_on_morphisms(outer), gamma_on_morphisms(inner))
        if delta_on_morphisms(sq) != compose_morphisms(
            delta_on_morphisms(gamma_on_morphisms(outer)),
            delta_on_morphisms(gamma_on_morphisms(inner)),
        ):
            delta_composition = False

    return AdjunctionChecklist(
        unit_embeds=unit_embeds,
        naturality=naturality,
        gamma_identity=gamma_identity,
        delta_identity=delta_identity,
        gamma_composition=gamma_composition,
        delta_composition=delta_composition,
        roundtrips=roundtrips,
    )


def universal_property(pol, f, g):
    """For a polarity whose relation is the slice relation: two maps into
    a common poset agreeing on the base factor uniquely through the
    intermediate quotient exactly when the cross order is respected."""
    if pol.rel != r_l(pol.ex, pol.ey):
        raise DomainMismatch("relation must be the slice relation")
    if f.source != pol.x or g.source != pol.y or f.target != g.target:
        raise DomainMismatch("maps must leave the sides into a common poset")
    for p in pol.base.elements:
        if f(pol.ex(p)) != g(pol.ey(p)):
            raise DomainMismatch("maps must agree on the base image")
    struct = structure_of(pol)
    q = struct.quotient.poset
    for x in pol.x.elements:
        for y in pol.y.elements:
            if q.leq(struct.iota_y(y), struct.iota_x(x)) and not f.target.leq(
                g(y), f(x)
            ):
                raise ConditionOneFails(
                    "cross order not respected", (y, x)
                )
    assignment = {}
    for rep in q.elements:
        values = {
            f(raw) if side == "X" else g(raw)
            for side, raw in struct.quotient.classes[rep]
        }
        assert len(values) == 1, "mediating map must not depend on representatives"
        assignment[rep] = values.pop()
    u = MonotoneMap(q, f.target, assignment)
    for x in pol.x.elements:
        assert u(struct.iota_x(x)) == f(x)
    for y in pol.y.elements:
        assert u(struct.iota_y(y)) == g(y)
    return u
