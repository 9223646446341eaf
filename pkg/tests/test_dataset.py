import numpy as np
import pytest

from nomassoc import (
    DataError,
    ParseError,
    compose,
    contingency,
    expand_to_unit_rows,
    from_scenarios,
    load_delimited,
    split,
)
from nomassoc.reference import fixture_e5_without_e4, retail_dataset, retail_table


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadDelimited:
    def test_basic_read_back(self, tmp_path):
        path = write(tmp_path, "u,v\na,x\nb,x\na,x\n")
        ds = load_delimited(path)
        assert ds.names == ("u", "v")
        assert [v.cardinality for v in ds.variables] == [2, 1]
        assert ds.total_mass == 3.0
        assert ds.variable("u").levels == ("a", "b")  # first appearance

    def test_missing_own_category_appends_level(self, tmp_path):
        path = write(tmp_path, "u,v\na,x\n__NA__,x\nb,y\nc,__NA__\n")
        ds = load_delimited(path, missing_policy="own-category")
        assert "__NA__" in ds.variable("u").levels
        assert ds.variable("u").levels.index("__NA__") == 1
        assert ds.total_mass == 4.0

    def test_missing_drop_row(self, tmp_path):
        path = write(tmp_path, "u,v\na,x\n__NA__,x\nb,y\nc,__NA__\n")
        ds = load_delimited(path, missing_policy="drop-row")
        assert ds.n_rows == 2
        assert ds.total_mass == 2.0
        assert "__NA__" not in ds.variable("u").levels

    def test_ragged_row_reports_line(self, tmp_path):
        path = write(tmp_path, "u,v\na,x\nb\n")
        with pytest.raises(ParseError, match="line 3"):
            load_delimited(path)

    def test_empty_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_delimited(write(tmp_path, ""))
        with pytest.raises(ParseError):
            load_delimited(write(tmp_path, "u,v\n"))

    def test_mass_column(self, tmp_path):
        path = write(tmp_path, "u,w\na,2\nb,0.5\n")
        ds = load_delimited(path, mass_column="w")
        assert ds.names == ("u",)
        assert ds.total_mass == 2.5

    def test_bad_mass_rejected(self, tmp_path):
        for bad in ("-1", "nan", "inf", "zzz"):
            path = write(tmp_path, f"u,w\na,{bad}\n", name=f"m{bad}.csv")
            with pytest.raises(ParseError):
                load_delimited(path, mass_column="w")

    def test_duplicate_header(self, tmp_path):
        with pytest.raises(ParseError):
            load_delimited(write(tmp_path, "u,u\na,b\n"))

    def test_alternate_delimiter(self, tmp_path):
        path = write(tmp_path, "u;v\na;x\n")
        ds = load_delimited(path, delimiter=";")
        assert ds.names == ("u", "v")


class TestFromScenarios:
    def test_exact_masses_and_normalisation(self):
        ds = fixture_e5_without_e4()
        assert ds.total_mass == pytest.approx(1.0, abs=1e-15)
        assert ds.n_rows == 8

    def test_single_scenario_point_mass(self):
        ds = from_scenarios([(("a", "x"), 5.0)])
        assert ds.total_mass == 5.0
        table = contingency(ds, 0, 1)
        assert table.x_marginal.tolist() == [5.0]
        assert table.y_marginal.tolist() == [5.0]

    def test_y_marginal_of_perfect_prediction_fixture(self):
        # masses (2/7, 2/7, 2/7, 1/7) over Y in {1, 0}
        from nomassoc.reference import fixture_e2_without_e1

        ds = fixture_e2_without_e1()
        table = contingency(ds, "X1", "Y")
        p = table.y_probabilities()
        assert table.y_labels == ("1", "0")
        assert p == pytest.approx([3 / 7, 4 / 7], abs=1e-15)

    def test_duplicates_merge(self):
        ds = from_scenarios([(("a",), 1.0), (("a",), 2.0), (("b",), 1.0)])
        assert ds.n_rows == 2
        assert ds.total_mass == 4.0

    def test_arity_mismatch(self):
        with pytest.raises(DataError):
            from_scenarios([(("a", "x"), 1.0), (("b",), 1.0)])

    def test_nonpositive_mass(self):
        with pytest.raises(DataError):
            from_scenarios([(("a",), 0.0)])


class TestCompose:
    def test_singleton_identity(self):
        ds = fixture_e5_without_e4()
        comp = compose(ds, ["X1"])
        assert comp.observed_cardinality == ds.variable("X1").cardinality
        # code-preserving up to relabelling: level k of the composite is
        # exactly level k of the variable (labels are already sorted here)
        codes = ds.codes[ds.index_of("X1")]
        assert np.array_equal(comp.row_codes, codes)

    def test_observed_pairs_only(self):
        ds = fixture_e5_without_e4()
        comp = compose(ds, ["X1", "X2"])
        # the eight scenarios visit six distinct (X1, X2) pairs; the two
        # repeated pairs (1,1) and (4,4) merge
        assert comp.observed_cardinality == 6
        assert set(comp.scenario_labels) == {
            ("1", "1"), ("1", "2"), ("1", "3"),
            ("2", "1"), ("3", "1"), ("4", "4"),
        }
        bound = ds.variable("X1").cardinality * ds.variable("X2").cardinality
        assert comp.observed_cardinality <= bound

    def test_lexicographic_order(self):
        ds = from_scenarios(
            [(("b", "y"), 1.0), (("a", "z"), 1.0), (("a", "y"), 1.0)]
        )
        comp = compose(ds, [0, 1])
        # member codes: a=1? no -- levels are first-appearance: b=0, a=1
        assert comp.scenario_codes.tolist() == sorted(
            comp.scenario_codes.tolist()
        )

    def test_empty_and_duplicate_members(self):
        ds = fixture_e5_without_e4()
        with pytest.raises(DataError):
            compose(ds, [])
        with pytest.raises(DataError):
            compose(ds, ["X1", "X1"])


class TestContingency:
    def test_retail_reconstruction(self):
        table = retail_table()
        assert table.mass[2][1] == 2363
        assert table.y_marginal.tolist() == [2499, 7384, 7344, 3794, 2637, 342]
        assert table.total == 24000

    def test_loan_fixture_total(self):
        from nomassoc.reference import loan_tables

        table = loan_tables("Risk")["OnTime"]
        assert table.mass.tolist() == [[11, 2, 52], [306, 24, 255]]
        assert table.total == 650

    def test_product_masses_are_independent(self):
        a = np.array([2.0, 3.0])
        b = np.array([1.0, 4.0, 5.0])
        scenarios = [
            ((f"a{i}", f"b{j}"), a[i] * b[j])
            for i in range(2)
            for j in range(3)
        ]
        ds = from_scenarios(scenarios)
        t = contingency(ds, 0, 1)
        outer = np.outer(t.x_marginal, t.y_marginal) / t.total
        assert np.allclose(t.mass, outer, atol=1e-12)

    def test_overlap_rejected(self):
        ds = fixture_e5_without_e4()
        with pytest.raises(DataError):
            contingency(ds, ["X1", "X2"], "X1")

    def test_round_trip_masses_exact(self):
        ds = fixture_e5_without_e4()
        t = contingency(ds, ["X1", "X2"], "Y")
        assert t.total == ds.total_mass
        assert t.mass.sum() == ds.mass.sum()

    def test_round_trip_dyadic_masses_bit_exact(self):
        scenarios = [
            (("a", "u"), 0.25),
            (("a", "v"), 0.5),
            (("b", "u"), 0.125),
            (("b", "v"), 2.0),
        ]
        ds = from_scenarios(scenarios, names=("X", "Y"))
        t = contingency(ds, "X", "Y")
        lookup = {
            (t.x_labels[i], t.y_labels[s]): t.mass[i, s]
            for i in range(t.x_levels)
            for s in range(t.y_levels)
        }
        for (x, y), mass in scenarios:
            assert lookup[(x, y)] == mass  # bit-exact for dyadic inputs

    def test_marginals_permutation_invariant(self):
        ds = fixture_e5_without_e4()
        perm = np.random.default_rng(0).permutation(ds.n_rows)
        shuffled = ds.take(perm)
        t1 = contingency(ds, ["X1"], "Y")
        t2 = contingency(shuffled, ["X1"], "Y")
        assert np.array_equal(t1.mass, t2.mass)
        assert np.array_equal(t1.y_marginal, t2.y_marginal)


class TestSplit:
    def test_sizes(self, tmp_path):
        path = tmp_path / "ten.csv"
        path.write_text("u\n" + "\n".join("abcdefghij") + "\n")
        ds = load_delimited(path)
        first, second = split(ds, 0.8, seed=1)
        assert (first.n_rows, second.n_rows) == (8, 2)

    def test_deterministic(self):
        ds = expand_to_unit_rows(retail_dataset())
        a1, b1 = split(ds, 0.8, seed=42)
        a2, b2 = split(ds, 0.8, seed=42)
        for x, y in ((a1, a2), (b1, b2)):
            assert all(
                np.array_equal(cx, cy) for cx, cy in zip(x.codes, y.codes)
            )

    def test_retail_split_sizes(self):
        ds = expand_to_unit_rows(retail_dataset())
        assert ds.n_rows == 24000
        first, second = split(ds, 0.8, seed=0)
        assert (first.n_rows, second.n_rows) == (19200, 4800)

    def test_weighted_dataset_rejected(self):
        ds = retail_dataset()
        with pytest.raises(DataError, match="expand_to_unit_rows"):
            split(ds, 0.8, seed=0)

    def test_expand_requires_integer_masses(self):
        ds = from_scenarios([(("a",), 1.5)])
        with pytest.raises(DataError):
            expand_to_unit_rows(ds)
