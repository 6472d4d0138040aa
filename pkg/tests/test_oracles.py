import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polab.errors import CarrierTooLarge
from polab.fixtures import identity_polarity, load
from polab.oracles import (
    naive_c7,
    naive_c8,
    naive_coherence_level,
    naive_p4,
    naive_p5,
    naive_z_s,
    naive_z_t,
    oracle_enumerate_preorders,
    oracle_naive_condition_check,
)
from polab.order import Poset
from polab.polarity import (
    check_coherence,
    coherence_level,
    named_relation_sets,
    r_hat_g,
    unique_3preorder,
)
from polab.randgen import random_extension_polarity, random_galois_polarity


def seeded_polarities(max_base=3):
    return st.builds(
        lambda seed, size: random_extension_polarity(random.Random(seed), size),
        st.integers(min_value=0, max_value=2**32 - 1),
        st.integers(min_value=1, max_value=max_base),
    )


class TestConditionOracles:
    @given(seeded_polarities())
    @settings(deadline=None, max_examples=60)
    def test_levels_agree(self, pol):
        assert coherence_level(pol) == naive_coherence_level(pol)

    @given(seeded_polarities())
    @settings(deadline=None, max_examples=60)
    def test_per_condition_verdicts_agree(self, pol):
        rep = check_coherence(pol)
        for name in ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8"):
            ok, _ = oracle_naive_condition_check(pol, name)
            assert rep.ok(name) == ok, name

    def test_fixture_witnesses_match_failures(self):
        pol = load("fix_c").polarities["G"]
        ok, witness = oracle_naive_condition_check(pol, "C5")
        assert not ok and witness is not None

    def test_unknown_condition(self):
        pol = load("fix_a").polarities["G"]
        with pytest.raises(ValueError):
            oracle_naive_condition_check(pol, "C9")


class TestSubsetOracles:
    @given(seeded_polarities())
    @settings(deadline=None, max_examples=40)
    def test_forced_pair_sets_agree(self, pol):
        ns = named_relation_sets(pol)
        assert ns.z_s == naive_z_s(pol)
        assert ns.z_t == naive_z_t(pol)

    @given(seeded_polarities())
    @settings(deadline=None, max_examples=30)
    def test_subset_conditions_match_the_report(self, pol):
        rep = check_coherence(pol)
        assert rep.ok("C7") == naive_c7(pol)[0]
        assert rep.ok("C8") == naive_c8(pol)[0]

    def test_quotient_preservation_oracles(self):
        rng = random.Random(17)
        for _ in range(10):
            pol = random_galois_polarity(rng, rng.randint(1, 3))
            u = unique_3preorder(pol)
            assert naive_p4(pol, u)[0]
            assert naive_p5(pol, u)[0]

    def test_gate(self):
        big = identity_polarity(Poset.antichain("abcdefghijk"))
        with pytest.raises(CarrierTooLarge):
            naive_c7(big)


class TestEnumerationOracle:
    def test_methods_agree(self):
        carrier = ("a", "b", "c", "d")
        forced = [("a", "b")]
        forbidden = [("c", "a")]
        pruned = oracle_enumerate_preorders(carrier, forced, forbidden)
        naive = oracle_enumerate_preorders(carrier, forced, forbidden, "naive")
        assert sorted(u.rows for u in pruned) == sorted(u.rows for u in naive)

    def test_counts_all_preorders_on_three_points(self):
        # 29 preorders on a 3-element set
        got = oracle_enumerate_preorders("abc", [], [])
        assert len(got) == 29

    def test_conflicting_constraints_give_nothing(self):
        got = oracle_enumerate_preorders("ab", [("a", "b")], [("a", "b")])
        assert got == []

    def test_gates(self):
        with pytest.raises(CarrierTooLarge):
            oracle_enumerate_preorders("abcdefg", [], [])
        with pytest.raises(CarrierTooLarge):
            oracle_enumerate_preorders("abcde", [], [], "naive")
