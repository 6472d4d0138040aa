import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polab.errors import CarrierMismatch, CarrierTooLarge, NotZeroPreorder
from polab.extend import (
    ExtensionContext,
    check_extension_preservation,
    check_restriction_preservation,
    extend_relation,
    phi_map,
    relation_lattice_adjunction,
    restrict_relation,
    slice_extension_is_slice,
)
from polab.fixtures import load
from polab.order import Extension, Poset, UnionPreorder, macneille
from polab.polarity import coherence_level, r_hat_g, r_hat_m, r_zero
from polab.randgen import random_context


def seeded_contexts(max_base=3, galois=False):
    return st.builds(
        lambda seed, size: random_context(
            random.Random(seed), size, galois=galois
        ),
        st.integers(min_value=0, max_value=2**32 - 1),
        st.integers(min_value=1, max_value=max_base),
    )


def fixture_context(name, inner="G", ix="ix", iy="iy"):
    doc = load(name)
    pol = doc.polarities[inner]
    return ExtensionContext(
        pol, Extension(doc.maps[ix]), Extension(doc.maps[iy])
    )


class TestContext:
    def test_rejects_mismatched_sides(self):
        pol = load("fix_a").polarities["G"]
        wrong = macneille(Poset.chain("uv"))
        with pytest.raises(CarrierMismatch):
            ExtensionContext(pol, wrong, macneille(pol.y))

    def test_outer_sides_compose(self):
        ctx = fixture_context("fix_g", inner="G")
        for p in ctx.inner.base.elements:
            assert ctx.outer_ex(p) == ctx.ix(ctx.inner.ex(p))
            assert ctx.outer_ey(p) == ctx.iy(ctx.inner.ey(p))


class TestTransfer:
    def test_extend_then_restrict_on_fixture(self):
        ctx = fixture_context("fix_h", ix="id")
        rbar = extend_relation(ctx)
        assert restrict_relation(ctx, rbar) == ctx.inner.rel

    def test_restrict_is_monotone(self):
        ctx = fixture_context("fix_i")
        outer = load("fix_i").polarities["Gout"]
        small = restrict_relation(ctx, outer.rel - {("x", "y")})
        assert small <= restrict_relation(ctx, outer.rel)

    @given(seeded_contexts())
    @settings(deadline=None, max_examples=50)
    def test_upward_clauses(self, ctx):
        rep = check_extension_preservation(ctx)
        for key, clause in rep.items():
            assert clause.holds, (key, clause.note)

    @given(seeded_contexts(galois=True))
    @settings(deadline=None, max_examples=30)
    def test_downward_clauses(self, ctx):
        sbar = extend_relation(ctx)
        rep = check_restriction_preservation(ctx, sbar)
        for key, clause in rep.items():
            assert clause.holds, (key, clause.note)

    @given(seeded_contexts())
    @settings(deadline=None, max_examples=40)
    def test_slice_relations_travel_to_slice_relations(self, ctx):
        assert slice_extension_is_slice(ctx)


class TestPhi:
    def test_quotient_comparison_on_fixture(self):
        ctx = fixture_context("fix_g")
        outer = ctx.outer()
        pre = r_hat_g(outer).closed()
        res = phi_map(ctx, outer.rel, pre)
        assert all(res.grades.values())

    def test_rejects_non_preorders(self):
        ctx = fixture_context("fix_g")
        outer = ctx.outer()
        empty = UnionPreorder.from_pairs(outer.carrier(), [])
        with pytest.raises(NotZeroPreorder):
            phi_map(ctx, outer.rel, empty)

    @given(seeded_contexts(max_base=2))
    @settings(deadline=None, max_examples=30)
    def test_grades_always_transfer_down(self, ctx):
        rbar = extend_relation(ctx)
        outer = ctx.outer(rbar)
        level = coherence_level(outer)
        if level is None:
            return
        canonical = {0: r_zero, 1: r_hat_m, 2: r_hat_m, 3: r_hat_g}[level]
        pre = canonical(outer).closed()
        res = phi_map(ctx, rbar, pre)
        assert all(res.grades.values())


class TestAdjunction:
    def test_gate(self):
        rng = random.Random(5)
        while True:
            ctx = random_context(rng, 4)
            if len(ctx.ix.target) * len(ctx.iy.target) > 16:
                break
        with pytest.raises(CarrierTooLarge):
            relation_lattice_adjunction(ctx)

    def test_small_contexts_exhaustively(self):
        rng = random.Random(11)
        done = 0
        while done < 8:
            ctx = random_context(rng, 2)
            if len(ctx.inner.x) * len(ctx.inner.y) > 6:
                continue
            if len(ctx.ix.target) * len(ctx.iy.target) > 12:
                continue
            rep = relation_lattice_adjunction(ctx)
            assert rep.unit_holds and rep.counit_holds and rep.law_holds
            done += 1
