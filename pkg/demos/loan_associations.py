"""Walk through the built-in loan tables: who predicts what, and how well.

The loan dataset (650 records) carries five categorical variables:
On-Time (was the loan repaid on time), Age, Income, Risk and Credit.  For
each choice of response we compute the weighted association of the response
on every other variable, the per-category accuracy-lift vector, and the
expected confusion matrix of proportional prediction.
"""

import numpy as np

import nomassoc as na
from nomassoc.reference import loan_tables

np.set_printoptions(precision=4, suppress=True)

for response in ("OnTime", "Risk", "Credit"):
    tables = loan_tables(response)
    print("=" * 72)
    print(f"response: {response}")
    marginal = next(iter(tables.values())).y_probabilities()
    print(f"marginal p({response}) = {np.round(marginal, 4)}")
    ranked = sorted(
        tables.items(),
        key=lambda kv: na.goodman_kruskal_tau(kv[1]),
        reverse=True,
    )
    for name, table in ranked:
        tau = na.goodman_kruskal_tau(table)
        print(f"\n  {response} | {name}: tau = {tau:.4f}")
        vector = na.association_vector(table)
        lifts = ", ".join(
            f"{lab}={v:.4f}" for lab, v in zip(vector.y_labels, vector.components)
        )
        print(f"  accuracy lift per category: {lifts}")
        matrix = na.association_matrix(table)
        print("  expected confusion matrix (rows = truth):")
        for row_label, row in zip(matrix.y_labels, matrix.entries):
            print(f"    {row_label:>8s}  {np.round(row, 4)}")
        print(f"  expected per-class accuracy: "
              f"{np.round(matrix.accuracy_rates(), 4)}")

print("=" * 72)
print(
    "Reading: Age dominates the Risk response (tau 0.51), while Credit is\n"
    "almost uninformative about Risk (tau 0.0009) -- the credit grade and\n"
    "the risk grade are nearly independent in this portfolio."
)
