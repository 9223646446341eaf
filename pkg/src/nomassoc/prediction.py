"""Proportional prediction and empirical confusion evaluation.

A proportional predictor assigns a category to the response by sampling from
the conditional distribution estimated on training data (conditional
Monte-Carlo), rather than always predicting the mode.  Its expected
confusion matrix is exactly the association matrix of the training table,
which :func:`expected_confusion` exposes directly; :func:`predict_and_score`
estimates the same matrix empirically on held-out rows.

Sampling is reproducible and order-independent: row ``r`` consumes the
``r``-th value of a single seeded uniform stream, so processing order,
chunking, and worker counts cannot change the outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .association import AssociationMatrix, association_matrix
from .dataset import CategoricalDataset, ContingencyTable, _as_composite, contingency
from .errors import DataError


@dataclass(frozen=True)
class ProportionalPredictor:
    """Per-scenario response conditionals estimated from training data.

    ``conditionals`` maps each observed explanatory label tuple to a
    probability vector over ``response_levels``; unseen tuples fall back to
    the training marginal.  Rows are matched by labels, so any dataset whose
    level labels agree with the training data can be scored.
    """

    member_names: tuple[str, ...]
    response_name: str
    response_levels: tuple[str, ...]
    conditionals: dict[tuple[str, ...], np.ndarray]
    fallback: np.ndarray
    seed: int

    @property
    def n_scenarios(self) -> int:
        return len(self.conditionals)


def fit(
    train: CategoricalDataset,
    given,
    response,
    seed: int = 0,
) -> ProportionalPredictor:
    """Estimate plug-in conditionals of ``response`` per ``given`` scenario."""
    xc = _as_composite(train, given)
    table = contingency(train, xc, response)
    marginal = table.y_probabilities()
    if np.max(marginal) >= 1.0:
        raise DataError(
            f"response {table.y_name!r} is constant in the training data"
        )
    conditionals: dict[tuple[str, ...], np.ndarray] = {}
    rows = table.mass / table.x_marginal[:, None]
    for k, labels in enumerate(xc.scenario_labels):
        vec = rows[k] / rows[k].sum()
        if abs(vec.sum() - 1.0) > 1e-12:
            raise DataError("stored conditional does not sum to 1")
        vec.flags.writeable = False
        conditionals[labels] = vec
    fallback = marginal / marginal.sum()
    fallback.flags.writeable = False
    return ProportionalPredictor(
        member_names=xc.member_names,
        response_name=table.y_name,
        response_levels=table.y_labels,
        conditionals=conditionals,
        fallback=fallback,
        seed=seed,
    )


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts of (true category, predicted category) over scored rows."""

    counts: np.ndarray
    labels: tuple[str, ...]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def row_normalized(self) -> np.ndarray:
        """Rows scaled to relative frequencies; all-zero rows stay zero."""
        sums = self.counts.sum(axis=1, keepdims=True).astype(np.float64)
        return np.divide(
            self.counts,
            np.where(sums == 0, 1.0, sums),
            dtype=np.float64,
        )

    def accuracy(self) -> float:
        return float(np.trace(self.counts)) / max(self.total, 1)


def predict_and_score(
    predictor: ProportionalPredictor,
    test: CategoricalDataset,
    given=None,
    response=None,
    seed: int | None = None,
) -> ConfusionMatrix:
    """Sample one prediction per test row and tally the confusion counts.

    ``given``/``response`` default to the predictor's own variables (matched
    by name on the test dataset).  Requires unit-mass rows; expand weighted
    tables first.  Deterministic for a fixed seed.
    """
    if not test.unit_mass:
        raise DataError(
            "scoring requires unit-mass rows; use expand_to_unit_rows() first"
        )
    member_names = (
        _as_composite(test, given).member_names
        if given is not None
        else predictor.member_names
    )
    if set(member_names) != set(predictor.member_names):
        raise DataError(
            f"test explanatory variables {member_names} do not match the "
            f"predictor's {predictor.member_names}"
        )
    response_name = (
        test.variable(response).name if response is not None
        else predictor.response_name
    )
    if response_name != predictor.response_name:
        raise DataError(
            f"test response {response_name!r} does not match the predictor's "
            f"{predictor.response_name!r}"
        )
    xc = _as_composite(test, predictor.member_names)
    y_meta = test.variable(predictor.response_name)
    level_of = {label: i for i, label in enumerate(predictor.response_levels)}
    unknown = [lv for lv in y_meta.levels if lv not in level_of]
    present = np.bincount(
        test.codes[test.index_of(predictor.response_name)],
        minlength=y_meta.cardinality,
    )
    for lv in unknown:
        if present[y_meta.levels.index(lv)]:
            raise DataError(
                f"test response level {lv!r} was never seen in training"
            )
    true_codes = np.asarray(
        [level_of.get(lv, -1) for lv in y_meta.levels], dtype=np.int64
    )[test.codes[test.index_of(predictor.response_name)]]

    n = test.n_rows
    n_levels = len(predictor.response_levels)
    rng = np.random.default_rng(predictor.seed if seed is None else seed)
    uniforms = rng.random(n)  # value r is fixed by (seed, r)

    # one conditional CDF per observed test scenario, then a vectorised
    # inverse-CDF draw per row
    cdf = np.empty((xc.observed_cardinality, n_levels))
    for k, labels in enumerate(xc.scenario_labels):
        cdf[k] = np.cumsum(
            predictor.conditionals.get(labels, predictor.fallback)
        )
    predicted = np.minimum(
        (cdf[xc.row_codes] <= uniforms[:, None]).sum(axis=1), n_levels - 1
    )
    counts = np.zeros((n_levels, n_levels), dtype=np.int64)
    np.add.at(counts, (true_codes, predicted), 1)
    counts.flags.writeable = False
    return ConfusionMatrix(counts=counts, labels=predictor.response_levels)


def expected_confusion(table: ContingencyTable) -> AssociationMatrix:
    """Expected confusion matrix of proportional prediction from a table.

    The diagonal entries are the expected per-category accuracy rates; use
    :meth:`AssociationMatrix.type_one_error_rates` and
    :meth:`AssociationMatrix.type_two_error_rates` for the off-diagonal
    row- and column-wise error totals.
    """
    return association_matrix(table)
