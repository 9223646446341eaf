"""Feature selection on the two-test screening scenario.

Five candidate explanatory variables describe a three-category response:
the two real tests X1 and X2, two degraded copies R3 and R4, and the
both-tests-fired indicator S5.  Only the pair (X1, X2) carries all of the
association; the selectors should find that and drop the rest.
"""

import numpy as np

import nomassoc as na

COLUMNS = {
    "X1": ("X1",), "X2": ("X2",), "R3": ("R3",), "R4": ("R4",),
    "S5": ("S5",),
    "X1+X2": ("X1", "X2"),
    "ALL": ("X1", "X2", "R3", "R4", "S5"),
}

print("exact population values (no sampling):")
population = na.flu_population_distribution()
header = f"{'':10s}" + "".join(f"{c:>10s}" for c in COLUMNS)
print(header)
for scheme in ("gk", "equal", "invprob"):
    row = [na.tau_for(population, "Y", list(cols), scheme)
           for cols in COLUMNS.values()]
    print(f"{scheme:10s}" + "".join(f"{v:10.4f}" for v in row))

print("\nsame grid from a 100,000-row seeded sample:")
sample = na.generate_flu(na.FluScenarioConfig(n=100_000, seed=8))
for scheme in ("gk", "equal", "invprob"):
    row = [na.tau_for(sample, "Y", list(cols), scheme)
           for cols in COLUMNS.values()]
    print(f"{scheme:10s}" + "".join(f"{v:10.4f}" for v in row))

print("\nsupervised selection (response Y, all five candidates):")
for scheme in ("gk", "equal", "invprob"):
    config = na.SelectionConfig(weights=scheme, epsilon=1e-3)
    result = na.select_supervised(
        sample, "Y", ["X1", "X2", "R3", "R4", "S5"], config
    )
    steps = " -> ".join(
        f"{s.chosen_name} ({s.value:.4f})" for s in result.trace
    )
    removed = (
        ", removed " + ",".join(
            sample.variables[i].name for i in result.removed
        ) if result.removed else ""
    )
    print(f"  {scheme:8s}: {steps}{removed}; basis = "
          f"{','.join(result.basis_names)}")

report = na.verify_basis(
    sample, ["X1", "X2"], response="Y",
    config=na.SelectionConfig(epsilon=1e-3),
)
print(f"\nbasis check: value {report.value:.4f} vs full set "
      f"{report.full_value:.4f}; irredundant: {report.irredundant}")

print("\nstructural selection (no response: which variables generate the rest):")
rng = np.random.default_rng(4)
a = rng.integers(0, 4, 2000)
d = rng.integers(0, 3, 2000)
relabel = np.array([2, 0, 3, 1])
ds = na.CategoricalDataset(
    [
        na.VariableMeta("A", ("0", "1", "2", "3")),
        na.VariableMeta("B", ("0", "1", "2", "3")),   # relabelling of A
        na.VariableMeta("C", ("0", "1")),             # coarsening of A
        na.VariableMeta("D", ("0", "1", "2")),        # independent
    ],
    [a, relabel[a], a // 2, d],
)
structural = na.select_structural(ds)
print(f"  candidates A, B=relabel(A), C=coarsen(A), D independent")
print(f"  basis = {','.join(structural.basis_names)}"
      f" (B and C are functions of A, so only A and D remain)")
