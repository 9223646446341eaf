import numpy as np
import pytest

from nomassoc import (
    DataError,
    EquivalenceLevel,
    check,
    from_scenarios,
    hierarchy_scan,
)
from nomassoc.equivalence import HIERARCHY
from nomassoc.reference import (
    fixture_e2_without_e1,
    fixture_e4_without_e3,
    fixture_e5_without_e4,
    fixture_relabeled_pair,
)


def independent_triple():
    """X1, X2 independent of each other and of Y (product masses)."""
    rows = []
    for y, py in (("0", 2.0), ("1", 3.0)):
        for a, pa in (("u", 1.0), ("v", 2.0)):
            for b, pb in (("s", 3.0), ("t", 1.0)):
                rows.append(((y, a, b), py * pa * pb))
    return from_scenarios(rows, names=("Y", "X1", "X2"))


class TestLevels:
    def test_perfect_prediction_without_mutual_determinism(self):
        ds = fixture_e2_without_e1()
        assert check(ds, "X1", "X2", "Y", "E2").holds
        report = check(ds, "X1", "X2", "Y", "E1")
        assert not report.holds
        assert "tau" in report.witness.comparison

    def test_equal_vectors_unequal_matrices(self):
        ds = fixture_e4_without_e3()
        assert check(ds, "X1", "X2", "Y", "E4").holds
        report = check(ds, "X1", "X2", "Y", "E3")
        assert not report.holds
        assert report.witness.labels == ("1", "2")
        assert report.witness.index == (0, 1)
        assert report.witness.lhs == pytest.approx(0.5, abs=1e-12)
        assert report.witness.rhs == pytest.approx(0.0, abs=1e-12)

    def test_equal_tau_unequal_vectors(self):
        ds = fixture_e5_without_e4()
        assert check(ds, "X1", "X2", "Y", "E5").holds
        report = check(ds, "X1", "X2", "Y", "E4")
        assert not report.holds
        # the first two components are swapped between the variables
        assert report.witness.index == (0,)

    def test_reflexivity(self):
        ds = fixture_e5_without_e4()
        for level in ("E1", "E2", "E2prime", "E3", "E4", "E5"):
            assert check(ds, "X1", "X1", "Y", level).holds

    def test_mutual_determinism_implies_equal_matrices(self):
        ds = fixture_relabeled_pair()
        assert check(ds, "X1", "X2", "Y", "E2prime").holds
        assert check(ds, "X1", "X2", "Y", "E3").holds

    def test_unknown_level(self):
        with pytest.raises(DataError):
            EquivalenceLevel("E9")


class TestHierarchyScan:
    def test_perfect_prediction_fixture(self):
        ds = fixture_e2_without_e1()
        verdicts = dict(hierarchy_scan(ds, "X1", "X2", "Y"))
        assert verdicts == {
            "E1": False, "E2": True, "E3": True, "E4": True, "E5": True
        }

    def test_relabelled_copy_all_hold(self):
        # X2 relabels X1 and Y is a function of X1: everything holds
        rows = [
            (("0", "a", "p"), 1.0),
            (("1", "b", "q"), 2.0),
            (("0", "c", "r"), 1.5),
        ]
        ds = from_scenarios(rows, names=("Y", "X1", "X2"))
        assert all(h for _, h in hierarchy_scan(ds, "X1", "X2", "Y"))

    def test_independent_variables(self):
        ds = independent_triple()
        verdicts = dict(hierarchy_scan(ds, "X1", "X2", "Y"))
        assert verdicts == {
            "E1": False, "E2": False, "E3": True, "E4": True, "E5": True
        }

    def test_order_matches_hierarchy(self):
        ds = independent_triple()
        names = [n for n, _ in hierarchy_scan(ds, "X1", "X2", "Y")]
        assert names == list(HIERARCHY)


class TestRelationLaws:
    def relabel_chain(self):
        # X2 and X3 are successive relabellings of X1; Y depends on X1 only
        rows = []
        for code, (a, b, c, m) in enumerate(
            (("a", "q", "j", 0.2), ("b", "r", "k", 0.5), ("c", "s", "l", 0.3))
        ):
            rows.append(((str(code % 2), a, b, c), m))
        return from_scenarios(rows, names=("Y", "X1", "X2", "X3"))

    def test_symmetry(self):
        for ds in (fixture_e4_without_e3(), fixture_e5_without_e4()):
            for level in ("E2", "E2prime", "E3", "E4", "E5"):
                ab = check(ds, "X1", "X2", "Y", level).holds
                ba = check(ds, "X2", "X1", "Y", level).holds
                assert ab == ba, level

    def test_transitivity_on_exact_fixture(self):
        ds = self.relabel_chain()
        for level in ("E2prime", "E3", "E4", "E5"):
            assert check(ds, "X1", "X2", "Y", level).holds
            assert check(ds, "X2", "X3", "Y", level).holds
            assert check(ds, "X1", "X3", "Y", level).holds

    def test_perfect_prediction_verdict_scheme_invariant(self):
        # a tau = 1 predicate has the same truth value under every regular
        # weighting scheme
        for ds, expected in (
            (fixture_e2_without_e1(), True),
            (fixture_e5_without_e4(), False),
        ):
            for scheme in ("gk", "equal", "invprob"):
                level = EquivalenceLevel("E2", alpha=scheme)
                assert check(ds, "X1", "X2", "Y", level).holds is expected


class TestBinaryResponseCollapse:
    def test_e3_e4_e5_agree_for_binary_response(self):
        rng = np.random.default_rng(3)
        agree = 0
        for _ in range(200):
            rows = []
            for a in "uv":
                for b in "st":
                    for y in "01":
                        m = int(rng.integers(0, 5))
                        if m:
                            rows.append(((y, a, b), float(m)))
            try:
                ds = from_scenarios(rows, names=("Y", "X1", "X2"))
            except DataError:
                continue
            if ds.variable("Y").cardinality < 2:
                continue
            try:
                r3 = check(ds, "X1", "X2", "Y", "E3").holds
                r4 = check(ds, "X1", "X2", "Y", "E4").holds
                r5 = check(ds, "X1", "X2", "Y", "E5").holds
            except DataError:
                continue
            assert r3 == r4 == r5
            agree += 1
        assert agree > 100  # enough informative trials
