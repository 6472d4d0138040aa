import pytest

from polab.fixtures import CATALOGUE, identity_polarity, load, run_all
from polab.order import Poset
from polab.polarity import is_galois, r_l


class TestCatalogue:
    def test_ten_documents(self):
        assert len(CATALOGUE) == 10
        assert len({fx.name for fx in CATALOGUE}) == 10

    def test_all_documents_load(self):
        for fx in CATALOGUE:
            doc = load(fx.name)
            assert doc.polarities or doc.completions

    def test_every_check_passes(self):
        results = run_all()
        assert len(results) >= 25
        for r in results:
            assert r.ok, (r.fixture, r.label)

    def test_filtering(self):
        only_a = run_all(only="fix_a")
        assert {r.fixture for r in only_a} == {"fix_a"}

    def test_unknown_name_is_an_error(self):
        with pytest.raises(KeyError):
            run_all(only="fix_zz")


class TestIdentityPolarity:
    def test_slice_relation_over_the_identity(self):
        p = Poset.from_pairs("abc", [("a", "b"), ("a", "c")])
        pol = identity_polarity(p)
        assert pol.rel == r_l(pol.ex, pol.ey)
        assert pol.rel == frozenset(
            (a, b) for a in p.elements for b in p.elements if p.leq(a, b)
        )
        assert is_galois(pol)
