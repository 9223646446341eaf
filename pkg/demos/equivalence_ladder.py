"""When are two explanatory variables interchangeable?

The equivalence ladder orders five pairwise relations from strongest to
weakest: E1 (mutual determinism with perfect prediction), E2 (both predict
the response perfectly), E3 (equal association matrices), E4 (equal lift
vectors), E5 (equal weighted association).  Each built-in fixture holds at
one level while failing the next stronger one, so the chain is strict.
"""

import nomassoc as na
from nomassoc.reference import (
    fixture_e2_without_e1,
    fixture_e4_without_e3,
    fixture_e5_without_e4,
    fixture_relabeled_pair,
)

fixtures = (
    ("both variables predict Y perfectly, neither determines the other",
     fixture_e2_without_e1()),
    ("equal lift vectors, different matrices",
     fixture_e4_without_e3()),
    ("equal weighted association, swapped lift components",
     fixture_e5_without_e4()),
    ("X2 is a relabelling of X1",
     fixture_relabeled_pair()),
)

for title, ds in fixtures:
    print("=" * 72)
    print(title)
    for level, holds in na.hierarchy_scan(ds, "X1", "X2", "Y"):
        print(f"  {level:3s}: {'holds' if holds else 'fails'}")

print("=" * 72)
print("witness of the E3 failure in the second fixture:")
report = na.check(fixture_e4_without_e3(), "X1", "X2", "Y", "E3")
print(f"  {report.witness}")

print("\nmutual determinism (relabelling) is stronger than equal matrices:")
rel = fixture_relabeled_pair()
print("  E2prime:", na.check(rel, "X1", "X2", "Y", "E2prime").holds)
print("  E3     :", na.check(rel, "X1", "X2", "Y", "E3").holds)
