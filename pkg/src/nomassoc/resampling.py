"""Stratified bootstrap confidence intervals for association statistics.

Each iteration draws ``sample_size`` rows with replacement while preserving
per-stratum proportions (largest-remainder rounding of stratum sizes), then
evaluates the statistic on the resample.  Iteration seeds are spawned from
one root seed, so results are deterministic and iterations could run in any
order or concurrently without changing the summary.

A statistic is any callable mapping a dataset to a float.  The association
reduction percentage of a variable subset against a full set --
``100 * tau(subset) / tau(full)`` -- is provided both as a direct function
and as a statistic factory for bootstrapping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .association import WeightVector, tau_for
from .dataset import CategoricalDataset, VarRef
from .errors import DataError, NomassocError


@dataclass(frozen=True)
class BootstrapSummary:
    """Percentile-interval bootstrap result."""

    point_estimate: float
    mean: float
    ci_low: float
    ci_high: float
    iterations: int
    failures: int
    sample_size: int
    seed: int
    confidence: float
    stratified_by: str | None

    def __post_init__(self):
        if not self.ci_low <= self.ci_high:
            raise DataError("confidence interval bounds are out of order")


def _stratum_sizes(counts: np.ndarray, sample_size: int) -> np.ndarray:
    """Largest-remainder apportionment of ``sample_size`` over strata."""
    exact = sample_size * counts / counts.sum()
    base = np.floor(exact).astype(np.int64)
    shortfall = sample_size - int(base.sum())
    if shortfall:
        remainders = exact - base
        # ties resolved toward lower stratum index for determinism
        order = np.lexsort((np.arange(len(counts)), -remainders))
        base[order[:shortfall]] += 1
    return base


def bootstrap(
    dataset: CategoricalDataset,
    statistic: Callable[[CategoricalDataset], float],
    iterations: int,
    sample_size: int,
    seed: int,
    stratify_by: VarRef | None = None,
    confidence: float = 0.95,
) -> BootstrapSummary:
    """Stratified bootstrap of ``statistic`` with a percentile interval.

    An iteration whose statistic raises a data error (for example a response
    level vanishing from the resample) is redrawn once with a fresh derived
    seed, then counted as failed; more than 5% failures abort.
    """
    if iterations < 1:
        raise DataError("iterations must be positive")
    if sample_size < 1:
        raise DataError("sample size must be positive")
    if not 0 < confidence < 1:
        raise DataError("confidence must be in (0, 1)")
    if not dataset.unit_mass:
        raise DataError(
            "bootstrap requires unit-mass rows; use expand_to_unit_rows() first"
        )
    if stratify_by is None:
        strata_rows = [np.arange(dataset.n_rows)]
        strat_name = None
    else:
        idx = dataset.index_of(stratify_by)
        codes = dataset.codes[idx]
        strata_rows = [
            np.flatnonzero(codes == level)
            for level in range(dataset.variables[idx].cardinality)
        ]
        strata_rows = [rows for rows in strata_rows if len(rows)]
        strat_name = dataset.variables[idx].name
    counts = np.asarray([len(rows) for rows in strata_rows])
    sizes = _stratum_sizes(counts, sample_size)

    children = np.random.SeedSequence(seed).spawn(iterations)

    def draw(rng: np.random.Generator) -> CategoricalDataset:
        picks = [
            rows[rng.integers(0, len(rows), size)]
            for rows, size in zip(strata_rows, sizes)
            if size
        ]
        return dataset.take(np.concatenate(picks))

    values = []
    failures = 0
    for child in children:
        try:
            values.append(float(statistic(draw(np.random.default_rng(child)))))
            continue
        except NomassocError:
            pass
        retry = child.spawn(1)[0]
        try:
            values.append(float(statistic(draw(np.random.default_rng(retry)))))
        except NomassocError:
            failures += 1
    if failures > 0.05 * iterations:
        raise DataError(
            f"{failures}/{iterations} bootstrap iterations failed; "
            "the statistic is unstable at this sample size"
        )
    values = np.asarray(values)
    lo, hi = np.quantile(
        values, [(1 - confidence) / 2, (1 + confidence) / 2]
    )
    return BootstrapSummary(
        point_estimate=float(statistic(dataset)),
        mean=float(values.mean()),
        ci_low=float(lo),
        ci_high=float(hi),
        iterations=len(values),
        failures=failures,
        sample_size=sample_size,
        seed=seed,
        confidence=confidence,
        stratified_by=strat_name,
    )


def reduction_statistic(
    dataset: CategoricalDataset,
    response: VarRef,
    subset: Sequence[VarRef],
    full_set: Sequence[VarRef],
    weights: Union[str, WeightVector] = "gk",
) -> float:
    """Percentage of the full-set association retained by a variable subset.

    ``100 * tau(response | subset) / tau(response | full_set)``; at most 100
    (up to rounding) because the association is non-decreasing under
    variable addition.
    """
    sub = {dataset.index_of(v) for v in subset}
    full = {dataset.index_of(v) for v in full_set}
    if not sub <= full:
        raise DataError("subset must be contained in the full variable set")
    denom = tau_for(dataset, response, sorted(full), weights)
    if denom == 0:
        raise DataError(
            "association of the full set is zero; reduction undefined"
        )
    return 100.0 * tau_for(dataset, response, sorted(sub), weights) / denom


def make_reduction_statistic(
    response: VarRef,
    subset: Sequence[VarRef],
    full_set: Sequence[VarRef],
    weights: Union[str, WeightVector] = "gk",
) -> Callable[[CategoricalDataset], float]:
    """Bind :func:`reduction_statistic` arguments into a bootstrap statistic.

    Scheme weights are re-resolved on every resample's own marginal.
    """

    def statistic(dataset: CategoricalDataset) -> float:
        return reduction_statistic(dataset, response, subset, full_set, weights)

    return statistic
