"""Seeded random generators for posets, extensions and polarities.

Every generator takes a `random.Random` so test runs are repeatable.
Meet and join extensions are drawn as sub-posets of the cut completion
that contain the image: any such sub-poset keeps each of its elements
expressible from the image on the right side.
"""

from __future__ import annotations

import random

from .order import Extension, MonotoneMap, Poset, macneille, transitive_close
from .polarity import ExtensionPolarity, is_galois, r_l
from .extend import ExtensionContext


def random_poset(rng, size, theta=0.3):
    """Random poset on `size` elements: a random DAG on an index order,
    transitively closed."""
    names = ["e%d" % i for i in range(size)]
    rows = [1 << i for i in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() < theta:
                rows[i] |= 1 << j
    return Poset(tuple(names), transitive_close(rows))


def _cut_subposet(base, keep_theta, rng, prefix):
    """A random sub-poset of the cut completion containing the image."""
    m = macneille(base)
    image = {m(p) for p in base.elements}
    kept = [c for c in m.target.elements if c in image or rng.random() < keep_theta]
    sub = m.target.restrict(kept)
    renames = {c: "%s%d" % (prefix, k) for k, c in enumerate(sub.elements)}
    sub = sub.relabel(renames.__getitem__)
    return Extension(MonotoneMap(base, sub, {p: renames[m(p)] for p in base.elements}))


def random_meet_extension(rng, base, keep_theta=0.4, prefix="m"):
    return _cut_subposet(base, keep_theta, rng, prefix)


def random_join_extension(rng, base, keep_theta=0.4, prefix="j"):
    ext = _cut_subposet(base.dual(), keep_theta, rng, prefix)
    flipped = MonotoneMap(base, ext.target.dual(), {p: ext(p) for p in base.elements})
    return Extension(flipped)


def random_embedding(rng, base, keep_theta=0.4, junk=0, prefix="z"):
    """A random order embedding: a cut sub-poset of either orientation,
    possibly with a small poset glued in as an isolated component."""
    if rng.random() < 0.5:
        ext = random_meet_extension(rng, base, keep_theta, prefix)
    else:
        ext = random_join_extension(rng, base, keep_theta, prefix)
    if junk <= 0:
        return ext
    extra = random_poset(rng, junk)
    extra = extra.relabel(lambda e: "%siso_%s" % (prefix, e))
    t = ext.target
    elems = t.elements + extra.elements
    n = len(t)
    rows = [t.rows[i] for i in range(n)] + [
        extra.rows[i] << n for i in range(len(extra))
    ]
    glued = Poset(elems, tuple(rows))
    return Extension(
        MonotoneMap(base, glued, {p: ext(p) for p in base.elements})
    )


def random_relation(rng, x, y, theta=0.3):
    return frozenset(
        (a, b) for a in x.elements for b in y.elements if rng.random() < theta
    )


def random_extension_polarity(rng, base_size=3, keep_theta=0.4, junk_theta=0.3):
    """An arbitrary polarity over extensions: random relation, sides that
    may carry isolated components, no coherence promised."""
    base = random_poset(rng, base_size)
    jx = rng.randrange(3) if rng.random() < junk_theta else 0
    jy = rng.randrange(3) if rng.random() < junk_theta else 0
    ex = random_embedding(rng, base, keep_theta, junk=jx, prefix="x")
    ey = random_embedding(rng, base, keep_theta, junk=jy, prefix="y")
    rel = random_relation(rng, ex.target, ey.target)
    if rng.random() < 0.5:
        rel = rel | r_l(ex, ey)
    return ExtensionPolarity(base, ex, ey, rel)


def random_galois_polarity(rng, base_size=3, keep_theta=0.4):
    """A polarity that is Galois by construction: a meet extension on the
    left, a join extension on the right, and the slice relation."""
    base = random_poset(rng, base_size)
    ex = random_meet_extension(rng, base, keep_theta, prefix="x")
    ey = random_join_extension(rng, base, keep_theta, prefix="y")
    pol = ExtensionPolarity(base, ex, ey, r_l(ex, ey))
    assert is_galois(pol), "slice polarity over meet/join extensions must be Galois"
    return pol


def collapse_target():
    """The one-point slice polarity, the terminal object for morphisms."""
    point = Poset.antichain(("o",))
    e = Extension.identity(point)
    return ExtensionPolarity(point, e, e, frozenset({("o", "o")}))


def collapse_morphism(pol, target=None):
    """Everything onto the one-point polarity."""
    from .morphisms import PolarityMorphism

    if target is None:
        target = collapse_target()
    const = lambda poset: MonotoneMap(poset, target.base, dict.fromkeys(poset.elements, "o"))
    return PolarityMorphism(pol, target, const(pol.x), const(pol.base), const(pol.y))


def morphism_corpus(rng, count=60, base_size=4):
    """At least `count` validated morphisms between Galois polarities:
    identities, collapses, completion units and their composites."""
    from .delta1 import unit
    from .morphisms import PolarityMorphism, compose

    pt = collapse_target()
    out = [PolarityMorphism.identity(pt), collapse_morphism(pt, pt)]
    while len(out) < count:
        pol = random_galois_polarity(rng, rng.randint(1, base_size))
        ident = PolarityMorphism.identity(pol)
        fold = collapse_morphism(pol, pt)
        out += [ident, fold, compose(fold, ident)]
        if len(pol.x) <= 6 and len(pol.y) <= 6:
            eta = unit(pol)
            out += [eta, compose(collapse_morphism(eta.target, pt), eta)]
    return out


def random_context(rng, base_size=3, keep_theta=0.5, galois=False):
    """An extension context: an inner polarity plus one further extension
    of each side (meet-flavoured on the left, join-flavoured on the
    right so the Galois transfer clause stays exercisable)."""
    if galois:
        inner = random_galois_polarity(rng, base_size, keep_theta)
    else:
        inner = random_extension_polarity(rng, base_size, keep_theta, junk_theta=0.0)
    ix = random_meet_extension(rng, inner.x, keep_theta, prefix="xx")
    iy = random_join_extension(rng, inner.y, keep_theta, prefix="yy")
    return ExtensionContext(inner, ix, iy)
