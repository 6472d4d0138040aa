"""Polarities between posets and their coherence hierarchy.

An order polarity is a pair of posets with a relation between them; an
extension polarity additionally embeds a common base poset into both
sides.  This module grades polarities by the coherence conditions they
satisfy, builds the canonical candidate preorders on the tagged union
of the two sides, and enumerates all preorders of a given grade.

The two subset-quantified conditions (and the subset-quantified parts
of the canonical relations) are evaluated through canonical witness
sets rather than a scan over all subsets of the base: a target element
is a meet of images over some admissible subset exactly when it is the
meet over the largest admissible subset of images above it.  The naive
scans live in `polab.oracles` and the two routes are compared in tests.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import (
    CarrierMismatch,
    CarrierTooLarge,
    NotCoherent,
    NotGalois,
    NotOnePreorder,
    PreservationViolation,
    UnknownId,
)
from .order import (
    Extension,
    MonotoneMap,
    Poset,
    UnionPreorder,
    X_SIDE,
    Y_SIDE,
    _mask_iter,
    is_join_extension,
    is_meet_extension,
    tag_x,
    tag_y,
    transitive_close,
)

DEFAULT_MAX_CARRIER = 7
MAX_CARRIER_ENV = "POLAB_MAX_CARRIER"

CONDITION_NAMES = ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8")


def carrier_gate(max_carrier=None):
    if max_carrier is not None:
        return max_carrier
    env = os.environ.get(MAX_CARRIER_ENV)
    if env:
        return int(env)
    return DEFAULT_MAX_CARRIER


class OrderPolarity:
    """Two posets joined by a relation between them."""

    __slots__ = ("x", "y", "rel")

    def __init__(self, x, y, rel):
        self.x = x
        self.y = y
        self.rel = frozenset(rel)
        for a, b in self.rel:
            if a not in x.index:
                raise UnknownId("relation uses unknown left element %r" % (a,))
            if b not in y.index:
                raise UnknownId("relation uses unknown right element %r" % (b,))

    def __eq__(self, other):
        return (
            isinstance(other, OrderPolarity)
            and self.x == other.x
            and self.y == other.y
            and self.rel == other.rel
        )

    def __hash__(self):
        return hash((self.x, self.y, self.rel))

    def holds(self, a, b):
        return (a, b) in self.rel


class ExtensionPolarity:
    """An order polarity whose sides both extend a common base poset."""

    __slots__ = ("base", "ex", "ey", "rel")

    def __init__(self, base, ex, ey, rel):
        if ex.base != base or ey.base != base:
            raise CarrierMismatch("both extensions must share the base poset")
        self.base = base
        self.ex = ex
        self.ey = ey
        self.rel = frozenset(rel)
        for a, b in self.rel:
            if a not in self.x.index:
                raise UnknownId("relation uses unknown left element %r" % (a,))
            if b not in self.y.index:
                raise UnknownId("relation uses unknown right element %r" % (b,))

    @classmethod
    def from_order_polarity(cls, pol):
        empty = Poset.antichain(())
        ex = Extension(MonotoneMap(empty, pol.x, {}))
        ey = Extension(MonotoneMap(empty, pol.y, {}))
        return cls(empty, ex, ey, pol.rel)

    @property
    def x(self):
        return self.ex.target

    @property
    def y(self):
        return self.ey.target

    @property
    def polarity(self):
        return OrderPolarity(self.x, self.y, self.rel)

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionPolarity)
            and self.base == other.base
            and self.ex == other.ex
            and self.ey == other.ey
            and self.rel == other.rel
        )

    def __hash__(self):
        return hash((self.base, self.ex, self.ey, self.rel))

    def with_relation(self, rel):
        return ExtensionPolarity(self.base, self.ex, self.ey, rel)

    def carrier(self):
        return tuple(tag_x(a) for a in self.x.elements) + tuple(
            tag_y(b) for b in self.y.elements
        )

    def union_relation(self, pairs):
        return UnionPreorder.from_pairs(self.carrier(), pairs)


class _Eval:
    """Index-level workspace for the condition checks on one polarity."""

    def __init__(self, pol):
        self.pol = pol
        self.X = pol.x
        self.Y = pol.y
        self.P = pol.base
        self.nx = len(self.X)
        self.ny = len(self.Y)
        self.np = len(self.P)
        self.exi = [self.X.index[pol.ex(p)] for p in self.P.elements]
        self.eyi = [self.Y.index[pol.ey(p)] for p in self.P.elements]
        self.rx = [0] * self.nx
        self.ry = [0] * self.ny
        for a, b in pol.rel:
            i, j = self.X.index[a], self.Y.index[b]
            self.rx[i] |= 1 << j
            self.ry[j] |= 1 << i
        self._real_meets = None
        self._real_joins = None

    def xe(self, i):
        return self.X.elements[i]

    def ye(self, j):
        return self.Y.elements[j]

    def pe(self, k):
        return self.P.elements[k]

    # -- plain conditions -------------------------------------------------

    def c1(self):
        for i1 in range(self.nx):
            for i2 in _mask_iter(self.X.rows[i1]):
                missing = self.rx[i2] & ~self.rx[i1]
                if missing:
                    j = next(_mask_iter(missing))
                    return False, (self.xe(i1), self.xe(i2), self.ye(j))
        return True, None

    def c2(self):
        for j1 in range(self.ny):
            for j2 in _mask_iter(self.Y.rows[j1]):
                missing = self.ry[j1] & ~self.ry[j2]
                if missing:
                    i = next(_mask_iter(missing))
                    return False, (self.xe(i), self.ye(j1), self.ye(j2))
        return True, None

    def c3(self):
        for k in range(self.np):
            if not self.rx[self.exi[k]] >> self.eyi[k] & 1:
                return False, self.pe(k)
        return True, None

    def c4(self):
        for k in range(self.np):
            left = self.ry[self.eyi[k]]
            right = self.rx[self.exi[k]]
            for i in _mask_iter(left):
                missing = right & ~self.rx[i]
                if missing:
                    j = next(_mask_iter(missing))
                    return False, (self.xe(i), self.pe(k), self.ye(j))
        return True, None

    def c5(self):
        for k in range(self.np):
            need = self.X.rows[self.exi[k]]
            for i1 in _mask_iter(self.ry[self.eyi[k]]):
                missing = need & ~self.X.rows[i1]
                if missing:
                    i2 = next(_mask_iter(missing))
                    return False, (self.xe(i1), self.pe(k), self.xe(i2))
        return True, None

    def c6(self):
        for k in range(self.np):
            need = self.Y.cols[self.eyi[k]]
            for j2 in _mask_iter(self.rx[self.exi[k]]):
                missing = need & ~self.Y.cols[j2]
                if missing:
                    j1 = next(_mask_iter(missing))
                    return False, (self.pe(k), self.ye(j1), self.ye(j2))
        return True, None

    # -- canonical witness sets for the subset-quantified conditions ------

    def realizable_meets(self, j):
        """Left elements expressible as the meet of images of base
        elements whose right image lies above the j-th right element."""
        if self._real_meets is None:
            self._real_meets = {}
        if j not in self._real_meets:
            out = 0
            for i in range(self.nx):
                members = 0
                for k in range(self.np):
                    if (
                        self.X.rows[i] >> self.exi[k] & 1
                        and self.Y.rows[j] >> self.eyi[k] & 1
                    ):
                        members |= 1 << self.exi[k]
                if self.X.meet_index(members) == i:
                    out |= 1 << i
            self._real_meets[j] = out
        return self._real_meets[j]

    def realizable_joins(self, i):
        """Right elements expressible as the join of images of base
        elements whose left image lies below the i-th left element."""
        if self._real_joins is None:
            self._real_joins = {}
        if i not in self._real_joins:
            out = 0
            for j in range(self.ny):
                members = 0
                for k in range(self.np):
                    if (
                        self.Y.cols[j] >> self.eyi[k] & 1
                        and self.X.cols[i] >> self.exi[k] & 1
                    ):
                        members |= 1 << self.eyi[k]
                if self.Y.join_index(members) == j:
                    out |= 1 << j
            self._real_joins[i] = out
        return self._real_joins[i]

    def c7(self):
        for j1 in range(self.ny):
            for i in _mask_iter(self.realizable_meets(j1)):
                missing = self.rx[i] & ~self.Y.rows[j1]
                if missing:
                    j2 = next(_mask_iter(missing))
                    return False, (self.xe(i), self.ye(j1), self.ye(j2))
        return True, None

    def c8(self):
        for i2 in range(self.nx):
            for j in _mask_iter(self.realizable_joins(i2)):
                missing = self.ry[j] & ~self.X.cols[i2]
                if missing:
                    i1 = next(_mask_iter(missing))
                    return False, (self.xe(i1), self.xe(i2), self.ye(j))
        return True, None

    def z_s_pairs(self):
        """Pairs (y, x) forced below-left by a meet of images."""
        out = set()
        for j in range(self.ny):
            real = self.realizable_meets(j)
            for i in range(self.nx):
                if real & self.X.cols[i]:
                    out.add((self.ye(j), self.xe(i)))
        return frozenset(out)

    def z_t_pairs(self):
        out = set()
        for i in range(self.nx):
            real = self.realizable_joins(i)
            for j in range(self.ny):
                if real & self.Y.rows[j]:
                    out.add((self.ye(j), self.xe(i)))
        return frozenset(out)

    # -- one-step saturation sets -----------------------------------------

    def z_x_pairs(self):
        out = set()
        for i1 in range(self.nx):
            for i2 in _mask_iter(self.X.rows[i1]):
                out.add((self.xe(i1), self.xe(i2)))
        for k in range(self.np):
            for i1 in _mask_iter(self.ry[self.eyi[k]]):
                for i2 in _mask_iter(self.X.rows[self.exi[k]]):
                    out.add((self.xe(i1), self.xe(i2)))
        return frozenset(out)

    def z_y_pairs(self):
        out = set()
        for j1 in range(self.ny):
            for j2 in _mask_iter(self.Y.rows[j1]):
                out.add((self.ye(j1), self.ye(j2)))
        for k in range(self.np):
            for j1 in _mask_iter(self.Y.cols[self.eyi[k]]):
                for j2 in _mask_iter(self.rx[self.exi[k]]):
                    out.add((self.ye(j1), self.ye(j2)))
        return frozenset(out)

    def z_yx_pairs(self):
        out = set()
        for k1 in range(self.np):
            for k2 in range(self.np):
                if not self.rx[self.exi[k1]] >> self.eyi[k2] & 1:
                    continue
                for j in _mask_iter(self.Y.cols[self.eyi[k1]]):
                    for i in _mask_iter(self.X.rows[self.exi[k2]]):
                        out.add((self.ye(j), self.xe(i)))
        return frozenset(out)

    def z_yx_alt_pairs(self):
        """Pairs (y, x) such that every base element sent below y on the
        right is below every base element sent above x on the left."""
        out = set()
        for j in range(self.ny):
            below = [k for k in range(self.np) if self.Y.cols[j] >> self.eyi[k] & 1]
            for i in range(self.nx):
                above = [k for k in range(self.np) if self.X.rows[i] >> self.exi[k] & 1]
                if all(
                    self.P.leq(self.pe(k1), self.pe(k2))
                    for k1 in below
                    for k2 in above
                ):
                    out.add((self.ye(j), self.xe(i)))
        return frozenset(out)

    def e1(self):
        for i1 in range(self.nx):
            for i2 in range(self.nx):
                if i1 == i2 or self.X.rows[i1] >> i2 & 1:
                    continue
                if not self.rx[i2] & ~self.rx[i1]:
                    return False, (self.xe(i1), self.xe(i2))
        return True, None

    def e2(self):
        for j1 in range(self.ny):
            for j2 in range(self.ny):
                if j1 == j2 or self.Y.rows[j1] >> j2 & 1:
                    continue
                if not self.ry[j1] & ~self.ry[j2]:
                    return False, (self.ye(j1), self.ye(j2))
        return True, None

    def s1(self):
        for k in range(self.np):
            if self.X.cols[self.exi[k]] != self.ry[self.eyi[k]]:
                return False, self.pe(k)
        return True, None

    def s2(self):
        for k in range(self.np):
            if self.Y.rows[self.eyi[k]] != self.rx[self.exi[k]]:
                return False, self.pe(k)
        return True, None


@dataclass
class NamedRelationSets:
    """The auxiliary pair-sets used by the canonical preorders."""

    z_x: frozenset
    z_y: frozenset
    z_yx: frozenset
    z_yx_alt: frozenset
    z_s: frozenset
    z_t: frozenset


def named_relation_sets(pol):
    ev = _Eval(pol)
    return NamedRelationSets(
        z_x=ev.z_x_pairs(),
        z_y=ev.z_y_pairs(),
        z_yx=ev.z_yx_pairs(),
        z_yx_alt=ev.z_yx_alt_pairs(),
        z_s=ev.z_s_pairs(),
        z_t=ev.z_t_pairs(),
    )


@dataclass
class CoherenceReport:
    """Per-condition verdicts and the derived grade of one polarity."""

    conditions: dict
    level: object
    entangled: bool
    meet_side: bool
    join_side: bool
    galois: bool
    s1: bool
    s2: bool

    def ok(self, name):
        return self.conditions[name][0]

    def witness(self, name):
        return self.conditions[name][1]


def check_coherence(pol):
    ev = _Eval(pol)
    conditions = {
        "C1": ev.c1(),
        "C2": ev.c2(),
        "C3": ev.c3(),
        "C4": ev.c4(),
        "C5": ev.c5(),
        "C6": ev.c6(),
        "C7": ev.c7(),
        "C8": ev.c8(),
        "E1": ev.e1(),
        "E2": ev.e2(),
        "S1": ev.s1(),
        "S2": ev.s2(),
    }
    level = None
    if conditions["C1"][0] and conditions["C2"][0]:
        level = 0
        if conditions["C3"][0] and conditions["C4"][0]:
            level = 1
            if conditions["C5"][0] and conditions["C6"][0]:
                level = 2
                if conditions["C7"][0] and conditions["C8"][0]:
                    level = 3
    meet_side = is_meet_extension(pol.ex)
    join_side = is_join_extension(pol.ey)
    entangled = conditions["E1"][0] and conditions["E2"][0]
    return CoherenceReport(
        conditions=conditions,
        level=level,
        entangled=entangled,
        meet_side=meet_side,
        join_side=join_side,
        galois=level == 3 and meet_side and join_side,
        s1=conditions["S1"][0],
        s2=conditions["S2"][0],
    )


def coherence_level(pol):
    return check_coherence(pol).level


def is_entangled(pol):
    ev = _Eval(pol)
    return ev.e1()[0] and ev.e2()[0]


def is_galois(pol):
    return check_coherence(pol).galois


def galois_via_S1S2(pol):
    """The short route: under 0-coherence with a meet-extension on the
    left and a join-extension on the right, the polarity is Galois
    exactly when both one-step slice conditions hold.  Agreement with
    the graded definition is asserted."""
    report = check_coherence(pol)
    if report.level is None:
        raise NotCoherent("polarity is not 0-coherent", report.witness("C1"))
    if not report.meet_side:
        raise PreservationViolation("left side is not a meet-extension")
    if not report.join_side:
        raise PreservationViolation("right side is not a join-extension")
    fast = report.s1 and report.s2
    assert fast == report.galois, "slice conditions disagree with the graded route"
    return fast


# -- canonical relations ---------------------------------------------------


def _tagged(pol, x_pairs=(), y_pairs=(), cross_xy=(), cross_yx=()):
    pairs = []
    pairs.extend((tag_x(a), tag_x(b)) for a, b in x_pairs)
    pairs.extend((tag_y(a), tag_y(b)) for a, b in y_pairs)
    pairs.extend((tag_x(a), tag_y(b)) for a, b in cross_xy)
    pairs.extend((tag_y(a), tag_x(b)) for a, b in cross_yx)
    carrier = pol.carrier()
    diag = [(e, e) for e in carrier]
    return UnionPreorder.from_pairs(carrier, diag + pairs)


def r_zero(pol):
    """The union of the two side orders with the relation itself.  Not
    transitively closed: whether it already is a preorder is the point."""
    return _tagged(
        pol,
        x_pairs=pol.x.pairs(),
        y_pairs=pol.y.pairs(),
        cross_xy=pol.rel,
    )


def r_hat_m(pol):
    """The one-step saturation of `r_zero` through the base images."""
    ev = _Eval(pol)
    out = _tagged(
        pol,
        x_pairs=ev.z_x_pairs(),
        y_pairs=ev.z_y_pairs(),
        cross_xy=pol.rel,
        cross_yx=ev.z_yx_pairs(),
    )
    if check_coherence(pol).level is not None and check_coherence(pol).level >= 1:
        verdict = is_n_preorder(pol, out, 1)
        assert verdict.ok, "saturation of a 1-coherent polarity must be a 1-preorder"
    return out


def r_hat_g(pol):
    """`r_zero` together with all pairs forced by meets and joins of
    image sets."""
    ev = _Eval(pol)
    return _tagged(
        pol,
        x_pairs=pol.x.pairs(),
        y_pairs=pol.y.pairs(),
        cross_xy=pol.rel,
        cross_yx=ev.z_s_pairs() | ev.z_t_pairs(),
    )


def r_l(ex, ey):
    """The slice relation: x related to y when some base element has its
    left image above x and its right image below y.  Always makes the
    sides 2-coherent, which is asserted."""
    pairs = set()
    X, Y, P = ex.target, ey.target, ex.base
    if ey.base != P:
        raise CarrierMismatch("extensions must share a base poset")
    for p in P.elements:
        for a in X.down(ex(p)):
            for b in Y.up(ey(p)):
                pairs.add((a, b))
    rel = frozenset(pairs)
    level = coherence_level(ExtensionPolarity(P, ex, ey, rel))
    assert level is not None and level >= 2, "slice relation must be 2-coherent"
    return rel


# -- graded preorders ------------------------------------------------------


@dataclass
class NPreorderVerdict:
    ok: bool
    clause: object = None
    witness: object = None

    def __bool__(self):
        return self.ok


def is_n_preorder(pol, rel, n):
    """Decide whether `rel` is an n-preorder for the polarity.

    Grades: 0 needs a preorder matching the relation across and both
    side orders along; 1 adds commutation of the two base images; 2 adds
    order reflection on both sides; 3 adds preservation of image meets
    and joins, checked through the canonical forced pair-sets.
    """
    if not 0 <= n <= 3:
        raise ValueError("grade must be between 0 and 3")
    carrier = pol.carrier()
    if rel.carrier != carrier:
        raise CarrierMismatch("relation carrier does not match the polarity")
    if not rel.is_reflexive():
        missing = next(
            e for i, e in enumerate(carrier) if not rel.rows[i] >> i & 1
        )
        return NPreorderVerdict(False, "reflexive", missing)
    tw = rel.transitivity_witness()
    if tw is not None:
        return NPreorderVerdict(False, "transitive", tw)
    X, Y = pol.x, pol.y
    for a in X.elements:
        for b in Y.elements:
            if rel.rel(tag_x(a), tag_y(b)) != ((a, b) in pol.rel):
                return NPreorderVerdict(False, "P1", (a, b))
    for a1, a2 in X.pairs():
        if not rel.rel(tag_x(a1), tag_x(a2)):
            return NPreorderVerdict(False, "P2", (a1, a2))
    for b1, b2 in Y.pairs():
        if not rel.rel(tag_y(b1), tag_y(b2)):
            return NPreorderVerdict(False, "P3", (b1, b2))
    if n >= 1:
        for p in pol.base.elements:
            xi, yi = tag_x(pol.ex(p)), tag_y(pol.ey(p))
            if not (rel.rel(xi, yi) and rel.rel(yi, xi)):
                return NPreorderVerdict(False, "commutation", p)
    if n >= 2:
        for a1 in X.elements:
            for a2 in X.elements:
                if rel.rel(tag_x(a1), tag_x(a2)) and not X.leq(a1, a2):
                    return NPreorderVerdict(False, "reflectX", (a1, a2))
        for b1 in Y.elements:
            for b2 in Y.elements:
                if rel.rel(tag_y(b1), tag_y(b2)) and not Y.leq(b1, b2):
                    return NPreorderVerdict(False, "reflectY", (b1, b2))
    if n >= 3:
        ev = _Eval(pol)
        for b, a in sorted(ev.z_s_pairs(), key=repr):
            if not rel.rel(tag_y(b), tag_x(a)):
                return NPreorderVerdict(False, "P4", (b, a))
        for b, a in sorted(ev.z_t_pairs(), key=repr):
            if not rel.rel(tag_y(b), tag_x(a)):
                return NPreorderVerdict(False, "P5", (b, a))
    return NPreorderVerdict(True)


@dataclass
class EnumerationResult:
    preorders: tuple
    truncated: bool

    def __iter__(self):
        return iter(self.preorders)

    def __len__(self):
        return len(self.preorders)


class _CapReached(Exception):
    pass


def enumerate_n_preorders(pol, n, cap=None, max_carrier=None):
    """All n-preorders for the polarity, exhaustively.

    Backtracks over the undetermined pairs with incremental transitive
    closure; pairs forced by every n-preorder are preloaded and pairs no
    n-preorder may contain are barred, so every leaf is a valid result.
    The carrier size is gated (override with `max_carrier` or the
    POLAB_MAX_CARRIER environment variable); `cap` bounds the number of
    results, with a truncation flag when the search was cut short.
    """
    carrier = pol.carrier()
    gate = carrier_gate(max_carrier)
    if len(carrier) > gate:
        raise CarrierTooLarge(
            "carrier has %d elements, gate is %d" % (len(carrier), gate)
        )
    nlen = len(carrier)
    index = {e: i for i, e in enumerate(carrier)}
    ev = _Eval(pol)

    forced = [0] * nlen
    forbidden = [0] * nlen

    def mark(rows, a, b):
        rows[index[a]] |= 1 << index[b]

    for a1, a2 in pol.x.pairs():
        mark(forced, tag_x(a1), tag_x(a2))
    for b1, b2 in pol.y.pairs():
        mark(forced, tag_y(b1), tag_y(b2))
    for a in pol.x.elements:
        for b in pol.y.elements:
            if (a, b) in pol.rel:
                mark(forced, tag_x(a), tag_y(b))
            else:
                mark(forbidden, tag_x(a), tag_y(b))
    if n >= 1:
        for p in pol.base.elements:
            mark(forced, tag_y(pol.ey(p)), tag_x(pol.ex(p)))
            mark(forced, tag_x(pol.ex(p)), tag_y(pol.ey(p)))
    if n >= 2:
        for a1 in pol.x.elements:
            for a2 in pol.x.elements:
                if not pol.x.leq(a1, a2):
                    mark(forbidden, tag_x(a1), tag_x(a2))
        for b1 in pol.y.elements:
            for b2 in pol.y.elements:
                if not pol.y.leq(b1, b2):
                    mark(forbidden, tag_y(b1), tag_y(b2))
    if n >= 3:
        for b, a in ev.z_s_pairs() | ev.z_t_pairs():
            mark(forced, tag_y(b), tag_x(a))

    transitive_close(forced)
    if any(forced[i] & forbidden[i] for i in range(nlen)):
        return EnumerationResult((), False)

    free = [
        (i, j)
        for i in range(nlen)
        for j in range(nlen)
        if i != j
        and not forced[i] >> j & 1
        and not forbidden[i] >> j & 1
    ]
    results = []
    truncated = False

    def closure_with(rows, i, j):
        new = list(rows)
        new[i] |= 1 << j
        return transitive_close(new)

    def dfs(rows, k, excluded):
        nonlocal truncated
        while k < len(free) and rows[free[k][0]] >> free[k][1] & 1:
            k += 1
        if k == len(free):
            if cap is not None and len(results) >= cap:
                truncated = True
                raise _CapReached
            results.append(UnionPreorder(carrier, list(rows)))
            return
        i, j = free[k]
        excluded.append((i, j))
        dfs(rows, k + 1, excluded)
        excluded.pop()
        new = closure_with(rows, i, j)
        if any(new[a] & forbidden[a] for a in range(nlen)):
            return
        for a, b in excluded:
            if new[a] >> b & 1:
                return
        dfs(new, k + 1, excluded)

    try:
        dfs(forced, 0, [])
    except _CapReached:
        pass
    return EnumerationResult(tuple(results), truncated)


CANONICAL_BUILDERS = (r_zero, r_hat_m, r_hat_m, r_hat_g)


@dataclass
class EquivalenceRow:
    n: int
    coherent: bool
    canonical_ok: bool
    some_exists: bool
    minimal: bool

    @property
    def consistent(self):
        return self.coherent == self.canonical_ok == self.some_exists and self.minimal


def coherence_equivalences(pol, cap=None, max_carrier=None):
    """For each grade: does the hierarchy condition hold, is the
    canonical relation a preorder of that grade, does any exist at all,
    and is the canonical one contained in every enumerated one."""
    level = coherence_level(pol)
    rows = []
    for n in range(4):
        canonical = CANONICAL_BUILDERS[n](pol)
        canonical_ok = is_n_preorder(pol, canonical, n).ok
        found = enumerate_n_preorders(pol, n, cap=cap, max_carrier=max_carrier)
        minimal = all(
            not any(
                canonical.rows[i] & ~u.rows[i] for i in range(len(canonical.carrier))
            )
            for u in found
        )
        rows.append(
            EquivalenceRow(
                n=n,
                coherent=level is not None and level >= n,
                canonical_ok=canonical_ok,
                some_exists=len(found) > 0,
                minimal=minimal,
            )
        )
    return rows


def entangled_consequences(pol, cap=None, max_carrier=None):
    """For an entangled polarity, every 1-preorder restricts on each side
    to exactly the side order (hence is a 2-preorder).  Returns the pairs
    (restrictions-exact, upgraded) for each enumerated 1-preorder."""
    if not is_entangled(pol):
        raise NotCoherent("polarity is not entangled")
    found = enumerate_n_preorders(pol, 1, cap=cap, max_carrier=max_carrier)
    out = []
    for u in found:
        exact = True
        for a1 in pol.x.elements:
            for a2 in pol.x.elements:
                if u.rel(tag_x(a1), tag_x(a2)) != pol.x.leq(a1, a2):
                    exact = False
        for b1 in pol.y.elements:
            for b2 in pol.y.elements:
                if u.rel(tag_y(b1), tag_y(b2)) != pol.y.leq(b1, b2):
                    exact = False
        out.append((exact, is_n_preorder(pol, u, 2).ok))
    return out


# -- the unique grade-3 preorder of a Galois polarity ----------------------


def _subset_meet_preserved(side_poset, iota, quotient, limit=12):
    """iota preserves every existing meet of a subset of its source; the
    subsets are scanned exhaustively below `limit` source elements."""
    src = side_poset
    q = quotient.poset
    n = len(src)
    if n > limit:
        raise CarrierTooLarge("side too large for the exhaustive meet scan")
    for mask in range(1 << n):
        g = src.meet_index(mask)
        if g is None:
            continue
        imgs = [iota(src.elements[i]) for i in _mask_iter(mask)]
        if q.meet(imgs) != iota(src.elements[g]):
            return False
    return True


def _subset_join_preserved(side_poset, iota, quotient, limit=12):
    src = side_poset
    q = quotient.poset
    n = len(src)
    if n > limit:
        raise CarrierTooLarge("side too large for the exhaustive join scan")
    for mask in range(1 << n):
        g = src.join_index(mask)
        if g is None:
            continue
        imgs = [iota(src.elements[i]) for i in _mask_iter(mask)]
        if q.join(imgs) != iota(src.elements[g]):
            return False
    return True


def _generates_by_joins(q, generators):
    gens = set(generators)
    for z in q.elements:
        if q.join([g for g in gens if q.leq(g, z)]) != z:
            return False
    return True


def _generates_by_meets(q, generators):
    gens = set(generators)
    for z in q.elements:
        if q.meet([g for g in gens if q.leq(z, g)]) != z:
            return False
    return True


def unique_3preorder(pol):
    """The single grade-3 preorder a Galois polarity admits.

    Certifies, beyond being a grade-3 preorder: agreement with the
    pointwise characterisation through the base, maximality-by-rigidity
    (closing in any one absent pair breaks the grade), the quotient
    embeddings preserving all existing meets respectively joins, and
    each side generating the quotient by joins respectively meets.
    """
    if not is_galois(pol):
        raise NotGalois("the unique grade-3 preorder needs a Galois polarity")
    u = r_hat_g(pol)
    assert u.is_preorder(), "canonical relation of a Galois polarity must close"
    verdict = is_n_preorder(pol, u, 3)
    assert verdict.ok, "canonical relation must be a grade-3 preorder"
    ev = _Eval(pol)
    alt = _tagged(
        pol,
        x_pairs=pol.x.pairs(),
        y_pairs=pol.y.pairs(),
        cross_xy=pol.rel,
        cross_yx=ev.z_yx_alt_pairs(),
    )
    assert alt == u, "pointwise characterisation must agree"
    nlen = len(u.carrier)
    for i in range(nlen):
        for j in range(nlen):
            if u.rows[i] >> j & 1:
                continue
            enlarged = UnionPreorder(
                u.carrier, transitive_close([r | (1 << j if k == i else 0) for k, r in enumerate(u.rows)])
            )
            assert not is_n_preorder(pol, enlarged, 3).ok, (
                "a second grade-3 preorder exists",
                (u.carrier[i], u.carrier[j]),
            )
    inter = intermediate_structure(pol, u)
    assert _subset_meet_preserved(pol.x, inter.iota_x, inter.quotient)
    assert _subset_join_preserved(pol.y, inter.iota_y, inter.quotient)
    assert _generates_by_joins(inter.quotient.poset, inter.iota_x.image())
    assert _generates_by_meets(inter.quotient.poset, inter.iota_y.image())
    return u


@dataclass
class IntermediateStructure:
    """The quotient of a graded preorder with the three maps into it."""

    quotient: object
    iota_x: MonotoneMap
    iota_y: MonotoneMap
    gamma: MonotoneMap


def intermediate_structure(pol, rel):
    verdict = is_n_preorder(pol, rel, 1)
    if not verdict.ok:
        raise NotOnePreorder(
            "relation is not a grade-1 preorder (%s)" % verdict.clause,
            verdict.witness,
        )
    quotient = rel.quotient()
    q = quotient.poset
    iota_x = MonotoneMap(
        pol.x, q, {a: quotient.project(tag_x(a)) for a in pol.x.elements}
    )
    iota_y = MonotoneMap(
        pol.y, q, {b: quotient.project(tag_y(b)) for b in pol.y.elements}
    )
    gamma = MonotoneMap(
        pol.base,
        q,
        {p: quotient.project(tag_x(pol.ex(p))) for p in pol.base.elements},
    )
    if is_galois(pol) and is_n_preorder(pol, rel, 3).ok:
        from .order import is_order_embedding

        assert is_order_embedding(gamma), "base must embed in the quotient"
        both = set(iota_x.image()) & set(iota_y.image())
        assert set(gamma.image()) <= both, "base image must land in both sides"
        # Equality needs every related pair to have a slice witness; a
        # pair like (top, top) related without one merges two non-image
        # elements.  See the decisions ledger.
        witnessed = all(
            any(
                pol.x.leq(a, pol.ex(p)) and pol.y.leq(pol.ey(p), b)
                for p in pol.base.elements
            )
            for a, b in pol.rel
        )
        if witnessed:
            assert set(gamma.image()) == both, (
                "base image must be the intersection of the side images"
            )
    return IntermediateStructure(
        quotient=quotient, iota_x=iota_x, iota_y=iota_y, gamma=gamma
    )
