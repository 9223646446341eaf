"""Greedy basis construction for categorical variables.

Two selectors are provided:

* :func:`select_supervised` builds an irredundant variable subset whose
  weighted association with a response matches that of the full candidate
  set (forward greedy on the weighted association, which is non-decreasing
  under variable addition, followed by backward redundancy removal);
* :func:`select_structural` builds an irredundant subset that determines
  every candidate variable (forward greedy minimisation of the joint
  concentration ``sum(p(cell)^2)``, which is non-increasing under variable
  addition, followed by backward removal).

Ties are broken by smallest observed composite cardinality, then smallest
variable index, so results are deterministic and independent of the number
of evaluation workers.  Candidates whose composite would exceed
``max_cells`` observed scenarios are skipped and recorded: association
estimates over very fine composites are unreliable.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .association import (
    MarginalStats,
    WeightVector,
    association_vector,
    resolve_weights,
    weighted_tau,
)
from .dataset import CategoricalDataset, ContingencyTable, VarRef, _joint_codes
from .errors import DataError

#: Environment variable bounding evaluation parallelism (default 1).
WORKERS_ENV = "NOMASSOC_THREADS"


@dataclass(frozen=True)
class SelectionConfig:
    """Knobs shared by both selectors.

    ``epsilon`` is the absolute gain tolerance: forward selection stops when
    the best objective improvement is at most ``epsilon`` and backward
    removal deletes variables whose absence changes the objective by at most
    ``epsilon``.  Exact-equality stopping is recovered on exact tables by
    the tiny default.
    """

    weights: Union[str, WeightVector] = "gk"
    epsilon: float = 1e-9
    max_vars: int | None = None
    max_cells: int | None = 10_000
    tie_break: str = "fewest-cells-then-lowest-index"

    def __post_init__(self):
        if self.epsilon < 0:
            raise DataError("epsilon must be non-negative")
        if self.max_vars is not None and self.max_vars < 1:
            raise DataError("max_vars must be positive when given")
        if self.max_cells is not None and self.max_cells < 1:
            raise DataError("max_cells must be positive when given")
        if self.tie_break != "fewest-cells-then-lowest-index":
            raise DataError(f"unknown tie-break policy {self.tie_break!r}")


@dataclass(frozen=True)
class SelectionStep:
    """One committed forward step with the scores it was chosen from."""

    chosen: int
    chosen_name: str
    value: float
    scores: tuple[tuple[int, float], ...]
    skipped: tuple[int, ...] = ()


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of a greedy selection run.

    ``trace`` values are non-decreasing for the supervised objective and
    non-increasing for the structural one; ``removed`` lists variables
    deleted as redundant during the backward phase; ``skipped`` lists
    candidates ever excluded by the ``max_cells`` guard.
    """

    basis: tuple[int, ...]
    basis_names: tuple[str, ...]
    trace: tuple[SelectionStep, ...]
    removed: tuple[int, ...]
    skipped: tuple[int, ...]
    final_value: float
    terminated_by: str  # no-gain | max_vars | max_cells | exhausted
    objective: str  # association | concentration


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(WORKERS_ENV, "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _evaluate_all(
    candidates: Sequence[int],
    evaluate: Callable[[int], tuple[int, float]],
    workers: int,
) -> list[tuple[int, int, float]]:
    """Evaluate candidates, preserving candidate order in the result."""
    if workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, candidates))
    else:
        results = [evaluate(c) for c in candidates]
    return [(c, cells, value) for c, (cells, value) in zip(candidates, results)]


def _greedy(
    dataset: CategoricalDataset,
    candidates: list[int],
    config: SelectionConfig,
    objective: str,
    measure: Callable[[tuple[int, ...]], tuple[int, float]],
    empty_value: float,
    maximise: bool,
    workers: int,
) -> SelectionResult:
    """Shared forward/backward loop; ``measure`` maps an index tuple to
    ``(observed cells, objective value)``."""
    sign = 1.0 if maximise else -1.0
    cap = config.max_cells
    chosen: list[int] = []
    current = empty_value
    trace: list[SelectionStep] = []
    skipped_ever: set[int] = set()
    terminated = None

    while True:
        if config.max_vars is not None and len(chosen) >= config.max_vars:
            terminated = "max_vars"
            break
        remaining = [c for c in candidates if c not in chosen]
        if not remaining:
            terminated = "exhausted"
            break

        def evaluate(cand: int) -> tuple[int, float]:
            return measure(tuple(chosen) + (cand,))

        evals = _evaluate_all(remaining, evaluate, workers)
        usable = [(c, cells, v) for c, cells, v in evals
                  if cap is None or cells <= cap]
        step_skipped = tuple(c for c, cells, _ in evals
                             if cap is not None and cells > cap)
        skipped_ever.update(step_skipped)
        if not usable:
            terminated = "max_cells"
            break
        best_cand, best_cells, best_value = min(
            usable, key=lambda e: (-sign * e[2], e[1], e[0])
        )
        if chosen and sign * (best_value - current) <= config.epsilon:
            terminated = "no-gain"
            break
        chosen.append(best_cand)
        current = best_value
        trace.append(
            SelectionStep(
                chosen=best_cand,
                chosen_name=dataset.variables[best_cand].name,
                value=best_value,
                scores=tuple((c, v) for c, cells, v in evals
                             if cap is None or cells <= cap),
                skipped=step_skipped,
            )
        )

    removed: list[int] = []
    while True:
        removal = None
        for v in chosen:  # selection order; restart after each removal
            rest = tuple(c for c in chosen if c != v)
            value = measure(rest)[1] if rest else empty_value
            if sign * (current - value) <= config.epsilon:
                removal = (v, value)
                break
        if removal is None:
            break
        v, value = removal
        chosen.remove(v)
        removed.append(v)
        current = value

    return SelectionResult(
        basis=tuple(chosen),
        basis_names=tuple(dataset.variables[c].name for c in chosen),
        trace=tuple(trace),
        removed=tuple(removed),
        skipped=tuple(sorted(skipped_ever)),
        final_value=current if chosen else empty_value,
        terminated_by=terminated,
        objective=objective,
    )


def _response_weights(
    dataset: CategoricalDataset, y_idx: int, spec: Union[str, WeightVector]
) -> tuple[WeightVector, np.ndarray]:
    counts = np.bincount(
        dataset.codes[y_idx],
        weights=dataset.mass,
        minlength=dataset.variables[y_idx].cardinality,
    )
    p = counts / dataset.total_mass
    positive = p > 0
    if positive.sum() < 2:
        raise DataError(
            f"response {dataset.variables[y_idx].name!r} is constant; "
            "supervised selection is undefined"
        )
    stats = MarginalStats.from_probabilities(p[positive])
    alpha = resolve_weights(spec, stats)
    if not alpha.regular:
        raise DataError("supervised selection requires a regular weight vector")
    return alpha, positive


def _tau_measure(
    dataset: CategoricalDataset, y_idx: int, alpha: WeightVector
) -> Callable[[tuple[int, ...]], tuple[int, float]]:
    y_meta = dataset.variables[y_idx]
    y_codes = dataset.codes[y_idx]
    n_y = y_meta.cardinality

    def measure(indices: tuple[int, ...]) -> tuple[int, float]:
        if y_idx in indices:
            raise DataError("response cannot be part of an explanatory set")
        row_codes, cell_mass, _ = _joint_codes(dataset, sorted(indices))
        cells = len(cell_mass)
        valid = row_codes >= 0
        mass = np.bincount(
            row_codes[valid] * n_y + y_codes[valid],
            weights=dataset.mass[valid],
            minlength=cells * n_y,
        ).reshape(cells, n_y)
        table = ContingencyTable(
            mass, y_labels=y_meta.levels, y_name=y_meta.name
        )
        vector = association_vector(table)
        return cells, weighted_tau(vector, alpha)

    return measure


def _concentration_measure(
    dataset: CategoricalDataset,
) -> Callable[[tuple[int, ...]], tuple[int, float]]:
    def measure(indices: tuple[int, ...]) -> tuple[int, float]:
        _, cell_mass, _ = _joint_codes(dataset, sorted(indices))
        p = cell_mass / dataset.total_mass
        return len(cell_mass), float(np.sum(p * p))

    return measure


def _resolve_candidates(
    dataset: CategoricalDataset,
    candidates: Sequence[VarRef] | None,
    exclude: int | None = None,
) -> list[int]:
    if candidates is None:
        resolved = [i for i in range(dataset.n_variables) if i != exclude]
    else:
        resolved = [dataset.index_of(c) for c in candidates]
        if len(set(resolved)) != len(resolved):
            raise DataError("candidate variables must be distinct")
    if not resolved:
        raise DataError("candidate set is empty")
    return resolved


def select_supervised(
    dataset: CategoricalDataset,
    response: VarRef,
    candidates: Sequence[VarRef] | None = None,
    config: SelectionConfig = SelectionConfig(),
    workers: int | None = None,
) -> SelectionResult:
    """Greedy association basis for ``response`` over the candidates.

    Forward phase: the first pick maximises the weighted association of the
    response on a single candidate; subsequent picks maximise it on the
    current set plus one candidate, stopping when the best gain is at most
    ``config.epsilon``.  Backward phase: repeatedly delete any chosen
    variable whose removal changes the value by at most ``epsilon``.
    """
    y_idx = dataset.index_of(response)
    resolved = _resolve_candidates(dataset, candidates, exclude=y_idx)
    if y_idx in resolved:
        raise DataError("response cannot be a candidate")
    alpha, _ = _response_weights(dataset, y_idx, config.weights)
    measure = _tau_measure(dataset, y_idx, alpha)
    return _greedy(
        dataset,
        resolved,
        config,
        objective="association",
        measure=measure,
        empty_value=0.0,
        maximise=True,
        workers=_worker_count(workers),
    )


def select_structural(
    dataset: CategoricalDataset,
    candidates: Sequence[VarRef] | None = None,
    config: SelectionConfig = SelectionConfig(),
    workers: int | None = None,
) -> SelectionResult:
    """Greedy structural basis: a subset that determines every candidate.

    Forward phase greedily adds the variable minimising the joint
    concentration of the chosen set; at the stopping point every remaining
    candidate leaves the concentration unchanged, which holds exactly when
    it is determined by the chosen set.  Backward phase removes variables
    whose absence leaves the concentration unchanged.  The empty composite
    is a point mass (concentration 1).
    """
    resolved = _resolve_candidates(dataset, candidates)
    measure = _concentration_measure(dataset)
    return _greedy(
        dataset,
        resolved,
        config,
        objective="concentration",
        measure=measure,
        empty_value=1.0,
        maximise=False,
        workers=_worker_count(workers),
    )


# -- verification ------------------------------------------------------------


@dataclass(frozen=True)
class BasisReport:
    """Explicit check of the two basis conditions with measured values.

    For an association basis: ``achieves_full`` states that the basis value
    matches the full candidate-set value within epsilon, ``irredundant``
    that deleting any single member drops the value below the full value by
    more than epsilon.  For a structural basis: ``achieves_full`` states
    that every candidate variable is determined by the basis and
    ``irredundant`` that no member is determined by the others.
    ``basis_cells`` is the observed cardinality of the basis composite; any
    two verified structural bases of one dataset have equal cardinality.
    """

    kind: str  # association | structural
    achieves_full: bool
    irredundant: bool
    basis: tuple[int, ...]
    value: float
    full_value: float
    leave_one_out: tuple[tuple[int, float], ...]
    determinism: tuple[tuple[int, bool], ...] | None
    basis_cells: int


def _is_determined(
    dataset: CategoricalDataset, target: int, given: Sequence[int]
) -> bool:
    """Plug-in determinism: every observed given-cell meets a single target
    level with positive mass."""
    target_codes = dataset.codes[target]
    n_t = dataset.variables[target].cardinality
    if not given:
        positive = np.bincount(
            target_codes, weights=dataset.mass, minlength=n_t
        ) > 0
        return int(positive.sum()) <= 1
    row_codes, cell_mass, _ = _joint_codes(dataset, sorted(given))
    valid = row_codes >= 0
    joint = np.bincount(
        row_codes[valid] * n_t + target_codes[valid],
        weights=dataset.mass[valid],
        minlength=len(cell_mass) * n_t,
    ).reshape(len(cell_mass), n_t)
    return bool(np.all((joint > 0).sum(axis=1) <= 1))


def verify_basis(
    dataset: CategoricalDataset,
    basis: Sequence[VarRef],
    response: VarRef | None = None,
    config: SelectionConfig = SelectionConfig(),
    candidates: Sequence[VarRef] | None = None,
) -> BasisReport:
    """Check the defining conditions of a selected basis explicitly.

    With ``response`` the basis is verified as an association basis against
    the full candidate set (default: all other variables); without it, as a
    structural basis (default candidates: all variables).
    """
    basis_idx = [dataset.index_of(b) for b in basis]
    if not basis_idx:
        raise DataError("basis must be non-empty")
    if len(set(basis_idx)) != len(basis_idx):
        raise DataError("basis variables must be distinct")
    eps = config.epsilon
    basis_cells = len(_joint_codes(dataset, sorted(basis_idx))[1])

    if response is not None:
        y_idx = dataset.index_of(response)
        if y_idx in basis_idx:
            raise DataError("response cannot be a basis member")
        cand = _resolve_candidates(dataset, candidates, exclude=y_idx)
        if y_idx in cand:
            raise DataError("response cannot be a candidate")
        alpha, _ = _response_weights(dataset, y_idx, config.weights)
        measure = _tau_measure(dataset, y_idx, alpha)
        value = measure(tuple(basis_idx))[1]
        full_value = measure(tuple(cand))[1]
        loo = []
        irredundant = True
        for v in basis_idx:
            rest = tuple(c for c in basis_idx if c != v)
            loo_value = measure(rest)[1] if rest else 0.0
            loo.append((v, loo_value))
            if full_value - loo_value <= eps:
                irredundant = False
        return BasisReport(
            kind="association",
            achieves_full=bool(full_value - value <= eps),
            irredundant=irredundant,
            basis=tuple(basis_idx),
            value=value,
            full_value=full_value,
            leave_one_out=tuple(loo),
            determinism=None,
            basis_cells=basis_cells,
        )

    cand = _resolve_candidates(dataset, candidates)
    conc = _concentration_measure(dataset)
    value = conc(tuple(basis_idx))[1]
    full_value = conc(tuple(cand))[1]
    determinism = []
    achieves = True
    for v in cand:
        determined = (
            True if v in basis_idx else _is_determined(dataset, v, basis_idx)
        )
        determinism.append((v, determined))
        achieves = achieves and determined
    loo = []
    irredundant = True
    for v in basis_idx:
        rest = tuple(c for c in basis_idx if c != v)
        loo.append((v, conc(rest)[1] if rest else 1.0))
        if _is_determined(dataset, v, rest):
            irredundant = False
    return BasisReport(
        kind="structural",
        achieves_full=achieves,
        irredundant=irredundant,
        basis=tuple(basis_idx),
        value=value,
        full_value=full_value,
        leave_one_out=tuple(loo),
        determinism=tuple(determinism),
        basis_cells=basis_cells,
    )
