"""Concept lattices of order polarities and the maps into them.

The lattice of closed left-sets is built as the intersection closure of
the attribute extents (one per right element) together with the full
left carrier; closed sets are carried as bit-masks over the left poset
and used directly as lattice element ids.
"""

from __future__ import annotations

from .errors import CarrierTooLarge, NotCompleteLattice, PreservationViolation
from .order import (
    Extension,
    MonotoneMap,
    Poset,
    UnionPreorder,
    _mask_iter,
    check_galois_connection,
    is_meet_extension,
    is_join_extension,
    tag_x,
    tag_y,
)


def polar_right(pol, xs):
    """Right elements related to everything in `xs`."""
    return frozenset(
        b for b in pol.y.elements if all((a, b) in pol.rel for a in xs)
    )


def polar_left(pol, ys):
    return frozenset(
        a for a in pol.x.elements if all((a, b) in pol.rel for b in ys)
    )


def xi(pol, x):
    """The extent generated by one left element."""
    return polar_left(pol, polar_right(pol, [x]))


def upsilon(pol, y):
    """The extent of one right element."""
    return polar_left(pol, [y])


class ConceptLattice:
    """The complete lattice of closed left-sets of a polarity.

    `poset` has the closed sets as bit-masks over the left carrier,
    ordered by inclusion; `xi_mask` / `upsilon_mask` locate the images
    of the two canonical maps.
    """

    __slots__ = ("polarity", "poset", "xi_mask", "upsilon_mask")

    def __init__(self, polarity, poset, xi_mask, upsilon_mask):
        self.polarity = polarity
        self.poset = poset
        self.xi_mask = xi_mask
        self.upsilon_mask = upsilon_mask

    def extent(self, mask):
        return self.polarity.x.elements_of(mask)

    def xi_map(self):
        return MonotoneMap(self.polarity.x, self.poset, dict(self.xi_mask))

    def upsilon_map(self):
        return MonotoneMap(self.polarity.y, self.poset, dict(self.upsilon_mask))


def concept_lattice(pol):
    X = pol.x
    full = (1 << len(X)) - 1
    attr = {
        b: X.mask_of(upsilon(pol, b)) for b in pol.y.elements
    }
    closed = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for c in frontier:
            for m in attr.values():
                d = c & m
                if d not in closed:
                    closed.add(d)
                    nxt.append(d)
        frontier = nxt
    ordered = sorted(closed)
    idx = {c: i for i, c in enumerate(ordered)}
    rows = []
    for c in ordered:
        r = 0
        for d in ordered:
            if c & ~d == 0:
                r |= 1 << idx[d]
        rows.append(r)
    lattice = Poset(ordered, rows)
    xi_mask = {a: X.mask_of(xi(pol, a)) for a in X.elements}
    return ConceptLattice(pol, lattice, xi_mask, attr)


def prop_order_preorder(pol):
    """The preorder on the tagged union defined pointwise from the
    relation alone: left-left by attribute-row containment, right-right
    by extent containment, across by the relation, and right-left by the
    rectangle condition.  Its agreement with the inclusion order of the
    canonical images in the concept lattice is what the tests check."""
    X, Y = pol.x, pol.y
    pairs = []
    for x1 in X.elements:
        for x2 in X.elements:
            if all((x1, y) in pol.rel for y in Y.elements if (x2, y) in pol.rel):
                pairs.append((tag_x(x1), tag_x(x2)))
    for y1 in Y.elements:
        for y2 in Y.elements:
            if all((x, y2) in pol.rel for x in X.elements if (x, y1) in pol.rel):
                pairs.append((tag_y(y1), tag_y(y2)))
    for x in X.elements:
        for y in Y.elements:
            if (x, y) in pol.rel:
                pairs.append((tag_x(x), tag_y(y)))
    for y in Y.elements:
        for x in X.elements:
            if all(
                (x1, y1) in pol.rel
                for x1 in X.elements
                if (x1, y) in pol.rel
                for y1 in Y.elements
                if (x, y1) in pol.rel
            ):
                pairs.append((tag_y(y), tag_x(x)))
    carrier = tuple(tag_x(a) for a in X.elements) + tuple(
        tag_y(b) for b in Y.elements
    )
    return UnionPreorder.from_pairs(carrier, pairs)


def inclusion_preorder(pol):
    """The same preorder read off from extent inclusion in the concept
    lattice; the independent route for the dual-route comparison."""
    lat = concept_lattice(pol)
    carrier = tuple(tag_x(a) for a in pol.x.elements) + tuple(
        tag_y(b) for b in pol.y.elements
    )

    def mask(e):
        side, raw = e
        return lat.xi_mask[raw] if side == "X" else lat.upsilon_mask[raw]

    pairs = [
        (a, b) for a in carrier for b in carrier if mask(a) & ~mask(b) == 0
    ]
    return UnionPreorder.from_pairs(carrier, pairs)


def xi_embedding(pol):
    """Whether the left canonical map embeds, decided by the pointwise
    condition and cross-checked against the lattice order."""
    X, Y = pol.x, pol.y
    pointwise = all(
        X.leq(x1, x2)
        == all((x1, y) in pol.rel for y in Y.elements if (x2, y) in pol.rel)
        for x1 in X.elements
        for x2 in X.elements
    )
    lat = concept_lattice(pol)
    direct = all(
        X.leq(x1, x2) == (lat.xi_mask[x1] & ~lat.xi_mask[x2] == 0)
        for x1 in X.elements
        for x2 in X.elements
    )
    assert pointwise == direct, "pointwise embedding test disagrees with lattice"
    return pointwise


def upsilon_embedding(pol):
    X, Y = pol.x, pol.y
    pointwise = all(
        Y.leq(y1, y2)
        == all((x, y2) in pol.rel for x in X.elements if (x, y1) in pol.rel)
        for y1 in Y.elements
        for y2 in Y.elements
    )
    lat = concept_lattice(pol)
    direct = all(
        Y.leq(y1, y2) == (lat.upsilon_mask[y1] & ~lat.upsilon_mask[y2] == 0)
        for y1 in Y.elements
        for y2 in Y.elements
    )
    assert pointwise == direct, "pointwise embedding test disagrees with lattice"
    return pointwise


def _require_completion(e, kind):
    if not e.target.is_complete_lattice():
        raise NotCompleteLattice("%s target must be a complete lattice" % kind)
    if kind == "meet" and not is_meet_extension(e):
        raise PreservationViolation("map is not a meet-completion")
    if kind == "join" and not is_join_extension(e):
        raise PreservationViolation("map is not a join-completion")


def f_map(ex, ey):
    """The lower adjoint Y -> X determined by a meet-completion and a
    join-completion of the same base: each right element goes to the
    join of the left images of the base elements below it.  Commutation
    with the base maps is verified."""
    _require_completion(ex, "meet")
    _require_completion(ey, "join")
    X, Y = ex.target, ey.target
    assignment = {
        y: X.join([ex(p) for p in ey.preimage_down(y)]) for y in Y.elements
    }
    f = MonotoneMap(Y, X, assignment)
    for p in ex.base.elements:
        if f(ey(p)) != ex(p):
            raise PreservationViolation(
                "adjoint does not extend the left base map", p
            )
    return f


def g_map(ex, ey):
    _require_completion(ex, "meet")
    _require_completion(ey, "join")
    X, Y = ex.target, ey.target
    assignment = {
        x: Y.meet([ey(p) for p in ex.preimage_up(x)]) for x in X.elements
    }
    g = MonotoneMap(X, Y, assignment)
    for p in ey.base.elements:
        if g(ex(p)) != ey(p):
            raise PreservationViolation(
                "adjoint does not extend the right base map", p
            )
    return g


def adjoint_pair(ex, ey):
    """Both adjoints, verified to form a Galois connection."""
    f = f_map(ex, ey)
    g = g_map(ex, ey)
    if not check_galois_connection(f, g):
        raise PreservationViolation("computed maps are not adjoint")
    return f, g


def _completely_meet_preserving(e, limit=14):
    src = e.base
    if len(src) > limit:
        raise CarrierTooLarge("preservation scan gated at %d elements" % limit)
    for mask in range(1 << len(src)):
        m = src.meet_index(mask)
        if m is None:
            continue
        imgs = [e(src.elements[i]) for i in _mask_iter(mask)]
        if e.target.meet(imgs) != e(src.elements[m]):
            return False
    return True


def _completely_join_preserving(e, limit=14):
    src = e.base
    if len(src) > limit:
        raise CarrierTooLarge("preservation scan gated at %d elements" % limit)
    for mask in range(1 << len(src)):
        j = src.join_index(mask)
        if j is None:
            continue
        imgs = [e(src.elements[i]) for i in _mask_iter(mask)]
        if e.target.join(imgs) != e(src.elements[j]):
            return False
    return True


def z_doubleprime(pol, ix, iy):
    """The right-left pairs read off through a pair of side completions:
    (y, x) is included when the lower adjoint sends the completed y
    below the completed x.  The completions must preserve all existing
    meets respectively joins of their sides."""
    if ix.base != pol.x or iy.base != pol.y:
        raise PreservationViolation("completions must extend the polarity sides")
    if not _completely_meet_preserving(ix):
        raise PreservationViolation(
            "left completion must preserve all existing meets"
        )
    if not _completely_join_preserving(iy):
        raise PreservationViolation(
            "right completion must preserve all existing joins"
        )
    ex2 = pol.ex.compose(ix)
    ey2 = pol.ey.compose(iy)
    f, g = adjoint_pair(ex2, ey2)
    mx, my = ix.target, iy.target
    out = set()
    for y in pol.y.elements:
        for x in pol.x.elements:
            via_f = mx.leq(f(iy(y)), ix(x))
            via_g = my.leq(iy(y), g(ix(x)))
            assert via_f == via_g, "the two adjoint readings must agree"
            if via_f:
                out.add((y, x))
    return frozenset(out)
