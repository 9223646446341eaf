"""The association matrix is the expected confusion matrix.

Using the built-in 24,000-record retail table we (1) compute the
association matrix of the response on the account attribute, (2) split the
expanded rows 80/20, (3) fit a proportional predictor on the training part
and score the held-out part, and (4) compare the empirical confusion rates
with the training-split matrix entry by entry.
"""

import numpy as np

import nomassoc as na
from nomassoc.reference import retail_dataset

np.set_printoptions(precision=3, suppress=True)

rows = na.expand_to_unit_rows(retail_dataset())
print(f"dataset: {rows.n_rows} rows, variables {rows.names}")

full_matrix = na.association_matrix(na.contingency(rows, "V6", "V4"))
print("\nassociation matrix from all rows (rows = true category):")
print(full_matrix.entries)

train, test = na.split(rows, 0.8, seed=22)
print(f"\nsplit: {train.n_rows} training rows, {test.n_rows} test rows")

m_train = na.association_matrix(na.contingency(train, "V6", "V4"))
predictor = na.fit(train, "V6", "V4", seed=22)
confusion = na.predict_and_score(predictor, test)

print("\nempirical confusion rates on the held-out rows:")
print(confusion.row_normalized)

gap = np.max(np.abs(confusion.row_normalized - m_train.entries))
print(f"\nlargest entry gap to the training matrix: {gap:.4f}")
print(f"held-out accuracy: {confusion.accuracy():.4f} "
      f"(expected from the matrix diagonal: "
      f"{float(m_train.y_marginal @ m_train.accuracy_rates()):.4f})")

print(
    "\nReading: sampling one prediction per row from p(response | attribute)\n"
    "reproduces the matrix -- its diagonal is the per-class accuracy and the\n"
    "off-diagonal row/column sums are the two error-rate profiles:"
)
print("per-class expected accuracy:", np.round(m_train.accuracy_rates(), 3))
print("misassignment rates by true class:",
      np.round(m_train.type_one_error_rates(), 3))
print("false-assignment rates into each class:",
      np.round(m_train.type_two_error_rates(), 3))
