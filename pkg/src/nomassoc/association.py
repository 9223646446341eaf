"""Local-to-global and weighted global association measures.

Given a joint mass table between an explanatory variable ``X`` (possibly a
composite) and a response ``Y``, this module computes

* the **association matrix**: the row-stochastic matrix whose ``(s, t)``
  entry is the probability of predicting ``Y = t`` under proportional
  (conditional Monte-Carlo) prediction when the truth is ``Y = s`` -- the
  expected confusion matrix of the proportional predictor;
* the **association vector**: the per-category accuracy-lift rates obtained
  by normalising the matrix diagonal,
  ``lift_s = (m[s, s] - p_s) / (1 - p_s)``;
* **weighted global measures**: simplex-weighted averages of the vector
  components.  With weights proportional to ``p_s * (1 - p_s)`` this is
  exactly the Goodman-Kruskal tau, which is also computed directly from its
  classical conditional-Gini form as an independent code path;
* the **expected concentration** of a joint distribution,
  ``sum(p(cell)^2)``, used by unsupervised structural selection.

All functions are pure and deterministic: sums run in ascending level-code
order via numpy pairwise reduction, so results do not depend on worker
counts.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .dataset import CategoricalDataset, ContingencyTable, VarRef, _joint_codes, contingency
from .errors import DataError, DroppedLevelsWarning

#: Allowed floating-point drift outside [0, 1] before values are clamped.
CLAMP_TOL = 1e-12
#: Required agreement of association-matrix row sums with 1.
ROW_SUM_TOL = 1e-9


def _clamp_unit(values: np.ndarray, what: str) -> np.ndarray:
    low, high = values.min(initial=0.0), values.max(initial=1.0)
    if low < -CLAMP_TOL or high > 1 + CLAMP_TOL:
        raise DataError(
            f"{what} outside [0, 1] beyond tolerance: min={low!r}, max={high!r}"
        )
    return np.clip(values, 0.0, 1.0)


@dataclass(frozen=True)
class MarginalStats:
    """Response marginal and its Gini variation ``1 - sum(p^2)``."""

    p: np.ndarray
    gini_variation: float

    @classmethod
    def from_probabilities(cls, p) -> "MarginalStats":
        p = np.asarray(p, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise DataError("marginal must be a non-empty vector")
        if p.min() < -CLAMP_TOL or abs(p.sum() - 1.0) > 1e-9:
            raise DataError("marginal must be a probability vector")
        p = np.clip(p, 0.0, 1.0)
        return cls(p=p, gini_variation=float(1.0 - np.sum(p * p)))

    @property
    def n_levels(self) -> int:
        return len(self.p)


def marginal_stats(source: Union[ContingencyTable, Sequence] ) -> MarginalStats:
    """Marginal statistics of a response, from a table or a raw vector."""
    if isinstance(source, ContingencyTable):
        return MarginalStats.from_probabilities(source.y_probabilities())
    return MarginalStats.from_probabilities(source)


class AssociationMatrix:
    """Row-stochastic matrix of proportional-prediction category outcomes.

    ``entries[s, t]`` is the probability of predicting category ``t`` when
    the truth is category ``s``.  Levels of the response with zero mass are
    dropped (and recorded in ``dropped_levels``); ``level_indices`` maps the
    retained rows back to the response's original level positions.
    """

    __slots__ = ("entries", "y_marginal", "level_indices", "dropped_levels",
                 "y_labels", "x_descriptor")

    def __init__(self, entries, y_marginal, *, level_indices=None,
                 dropped_levels=(), y_labels=None, x_descriptor="X"):
        entries = np.asarray(entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DataError("association matrix must be square")
        entries = _clamp_unit(entries, "association matrix entries")
        row_sums = entries.sum(axis=1)
        if entries.size and np.max(np.abs(row_sums - 1.0)) > ROW_SUM_TOL:
            raise DataError("association matrix rows do not sum to 1")
        self.entries = entries
        self.entries.flags.writeable = False
        self.y_marginal = np.asarray(y_marginal, dtype=np.float64)
        self.level_indices = (
            tuple(level_indices)
            if level_indices is not None
            else tuple(range(entries.shape[0]))
        )
        self.dropped_levels = tuple(dropped_levels)
        self.y_labels = (
            tuple(y_labels)
            if y_labels is not None
            else tuple(str(i) for i in self.level_indices)
        )
        self.x_descriptor = x_descriptor

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def accuracy_rates(self) -> np.ndarray:
        """Expected per-category accuracy of proportional prediction."""
        return np.diag(self.entries).copy()

    def type_one_error_rates(self) -> np.ndarray:
        """Per-category total rate of misassigning a true category elsewhere
        (off-diagonal row sums)."""
        return self.entries.sum(axis=1) - np.diag(self.entries)

    def type_two_error_rates(self) -> np.ndarray:
        """Per-category total rate of false assignments into a category
        (off-diagonal column sums)."""
        return self.entries.sum(axis=0) - np.diag(self.entries)

    def is_identity(self, tol: float = 1e-9) -> bool:
        return bool(
            np.max(np.abs(self.entries - np.eye(self.size))) <= tol
        )

    def rows_equal_marginal(self, tol: float = 1e-9) -> bool:
        return bool(
            np.max(np.abs(self.entries - self.y_marginal[None, :])) <= tol
        )

    def __repr__(self) -> str:
        return f"AssociationMatrix(size={self.size}, x={self.x_descriptor!r})"


@dataclass(frozen=True)
class AssociationVector:
    """Per-category accuracy-lift rates, each in [0, 1].

    Components cover response levels with marginal strictly inside (0, 1);
    other levels are listed in ``excluded_levels`` and require downstream
    weight renormalisation.
    """

    components: np.ndarray
    y_marginal: np.ndarray
    level_indices: tuple[int, ...]
    excluded_levels: tuple[int, ...]
    y_labels: tuple[str, ...]
    x_descriptor: str = "X"

    @property
    def size(self) -> int:
        return len(self.components)

    def stats(self) -> MarginalStats:
        """Marginal statistics over the retained levels."""
        p = np.asarray(self.y_marginal, dtype=np.float64)
        return MarginalStats(p=p, gini_variation=float(1.0 - np.sum(p * p)))


@dataclass(frozen=True)
class WeightVector:
    """Simplex weights over response categories.

    ``regular`` is true when every weight is strictly positive, the condition
    under which a weighted association of 0 characterises independence and 1
    characterises determinism.
    """

    weights: np.ndarray
    regular: bool

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise DataError("weights must form a non-empty vector")
        if w.min() < -CLAMP_TOL:
            raise DataError("weights must be non-negative")
        if abs(w.sum() - 1.0) > CLAMP_TOL:
            raise DataError("weights must sum to 1 within 1e-12")
        object.__setattr__(self, "weights", np.clip(w, 0.0, None))

    @classmethod
    def from_raw(cls, raw) -> "WeightVector":
        """Normalise arbitrary non-negative values onto the simplex."""
        raw = np.asarray(raw, dtype=np.float64)
        if raw.ndim != 1 or raw.size == 0:
            raise DataError("weights must form a non-empty vector")
        if not np.all(np.isfinite(raw)) or raw.min() < 0:
            raise DataError("raw weights must be finite and non-negative")
        total = raw.sum()
        if total <= 0:
            raise DataError("raw weights must have positive sum")
        w = raw / total
        return cls(weights=w, regular=bool(w.min() > 0))

    @property
    def size(self) -> int:
        return len(self.weights)


# -- core computations -------------------------------------------------------


def _prepared(table: ContingencyTable):
    """Mass matrix with zero-mass response levels dropped (warned, recorded)."""
    keep = table.y_marginal > 0
    dropped = tuple(int(s) for s in np.flatnonzero(~keep))
    if dropped:
        labels = [table.y_labels[s] for s in dropped]
        warnings.warn(
            f"response {table.y_name!r}: dropping zero-mass levels {labels}",
            DroppedLevelsWarning,
            stacklevel=3,
        )
    mass = table.mass[:, keep]
    x_mass = table.x_marginal
    rows = x_mass > 0
    if not rows.all():
        mass = mass[rows]
        x_mass = x_mass[rows]
    retained = tuple(int(s) for s in np.flatnonzero(keep))
    return mass, x_mass, retained, dropped


def association_matrix(table: ContingencyTable) -> AssociationMatrix:
    """Expected confusion matrix of proportional prediction from a table.

    ``entries[s, t] = sum_i p(X=i, Y=s) p(X=i, Y=t) / (p(X=i) p(Y=s))``.
    Zero-mass explanatory scenarios contribute nothing; zero-mass response
    levels are dropped with a warning.
    """
    mass, x_mass, retained, dropped = _prepared(table)
    y_mass = mass.sum(axis=0)
    cond = mass / x_mass[:, None]
    n = mass.shape[1]
    entries = np.empty((n, n), dtype=np.float64)
    for s in range(n):
        entries[s] = (mass[:, s][:, None] * cond).sum(axis=0) / y_mass[s]
    return AssociationMatrix(
        entries,
        y_mass / table.total,
        level_indices=retained,
        dropped_levels=dropped,
        y_labels=[table.y_labels[s] for s in retained],
        x_descriptor=table.x_name,
    )


def association_vector(table: ContingencyTable) -> AssociationVector:
    """Per-category accuracy-lift rates of proportional prediction.

    For each retained level ``s`` with marginal strictly inside (0, 1),
    ``lift_s = (m[s, s] - p_s) / (1 - p_s)`` where ``m`` is the association
    matrix; the equivalent second-moment form
    ``(E[p(Y=s|X)^2] - p_s^2) / (p_s (1 - p_s))`` is evaluated as well and
    both must agree to 1e-12.  Levels with marginal 0 or 1 are excluded and
    recorded; weights used downstream must be renormalised accordingly.
    """
    mass, x_mass, retained, dropped = _prepared(table)
    y_mass = mass.sum(axis=0)
    p = y_mass / table.total
    # diag_term[s] = sum_i M[i,s]^2 / (Mx[i] My[s])  (matrix diagonal)
    sq = (mass * mass) / x_mass[:, None]
    col = sq.sum(axis=0)
    definable = p < 1.0
    excluded = list(dropped) + [
        retained[s] for s in np.flatnonzero(~definable)
    ]
    keep_pos = np.flatnonzero(definable)
    p_kept = p[keep_pos]
    diag = col[keep_pos] / y_mass[keep_pos]
    lift = (diag - p_kept) / (1.0 - p_kept)
    # independent second-moment route, must agree to 1e-12
    second = col[keep_pos] / table.total
    alt = (second - p_kept * p_kept) / (p_kept * (1.0 - p_kept))
    if lift.size and np.max(np.abs(lift - alt)) > 1e-12:
        raise DataError(
            "association-vector formulas disagree beyond 1e-12; "
            "the table is numerically ill-conditioned"
        )
    lift = _clamp_unit(lift, "association vector components")
    return AssociationVector(
        components=lift,
        y_marginal=p_kept,
        level_indices=tuple(retained[s] for s in keep_pos),
        excluded_levels=tuple(sorted(excluded)),
        y_labels=tuple(table.y_labels[retained[s]] for s in keep_pos),
        x_descriptor=table.x_name,
    )


def weighted_tau(vector: AssociationVector, alpha: WeightVector) -> float:
    """Weighted global association ``sum_s alpha_s * lift_s`` in [0, 1].

    With a regular weight vector the value is 0 exactly when response and
    explanatory variable are independent and 1 exactly when the response is
    completely determined.
    """
    if alpha.size != vector.size:
        raise DataError(
            f"weight vector has {alpha.size} components, association vector "
            f"has {vector.size}"
        )
    value = float(np.dot(alpha.weights, vector.components))
    return float(_clamp_unit(np.asarray([value]), "weighted association")[0])


def goodman_kruskal_tau(table: ContingencyTable) -> float:
    """Goodman-Kruskal tau: normalised conditional Gini concentration.

    ``(sum_{i,s} p(i,s)^2 / p(i) - sum_s p_s^2) / (1 - sum_s p_s^2)``.
    Computed directly from the classical form; agrees with
    ``weighted_tau(..., goodman_kruskal_weights(...))`` to 1e-12.
    """
    mass, x_mass, retained, _ = _prepared(table)
    p = mass.sum(axis=0) / table.total
    v_g = 1.0 - float(np.sum(p * p))
    if v_g <= 0:
        raise DataError(
            "Goodman-Kruskal tau undefined: response is a point mass"
        )
    cond_conc = float(
        ((mass * mass) / x_mass[:, None]).sum(axis=0).sum()
    ) / table.total
    value = (cond_conc - float(np.sum(p * p))) / v_g
    return float(_clamp_unit(np.asarray([value]), "Goodman-Kruskal tau")[0])


# -- weight schemes -----------------------------------------------------------


def goodman_kruskal_weights(stats: MarginalStats) -> WeightVector:
    """Weights ``p_s (1 - p_s) / V_G`` reproducing the Goodman-Kruskal tau."""
    if stats.gini_variation <= 0:
        raise DataError("variation-proportional weights undefined: point mass")
    w = stats.p * (1.0 - stats.p) / stats.gini_variation
    return WeightVector(weights=w, regular=bool(w.min() > 0))


def equal_weights(n_levels: int) -> WeightVector:
    """Uniform weights ``1 / n`` over the response categories."""
    if n_levels < 1:
        raise DataError("need at least one response level")
    return WeightVector(
        weights=np.full(n_levels, 1.0 / n_levels), regular=True
    )


def inverse_probability_weights(stats: MarginalStats) -> WeightVector:
    """Weights proportional to ``1 / p_s``, emphasising rare categories."""
    if stats.p.min() <= 0:
        raise DataError(
            "inverse-probability weights undefined for zero-probability "
            "levels; re-code the response to eliminate them"
        )
    raw = 1.0 / stats.p
    w = raw / raw.sum()
    return WeightVector(weights=w, regular=True)


#: Named weight schemes accepted wherever a WeightVector is expected.
WEIGHT_SCHEMES = ("gk", "equal", "invprob")


def resolve_weights(
    spec: Union[str, WeightVector], stats: MarginalStats
) -> WeightVector:
    """Resolve a scheme name or pass through an explicit weight vector."""
    if isinstance(spec, WeightVector):
        if spec.size != stats.n_levels:
            raise DataError(
                f"weight vector has {spec.size} components, response has "
                f"{stats.n_levels} levels"
            )
        return spec
    if spec == "gk":
        return goodman_kruskal_weights(stats)
    if spec == "equal":
        return equal_weights(stats.n_levels)
    if spec == "invprob":
        return inverse_probability_weights(stats)
    raise DataError(
        f"unknown weight scheme {spec!r}; expected one of {WEIGHT_SCHEMES} "
        "or a WeightVector"
    )


# -- dataset-level helpers ----------------------------------------------------


def tau_for(
    dataset: CategoricalDataset,
    response,
    given,
    weights: Union[str, WeightVector] = "gk",
) -> float:
    """Weighted association of ``response`` on the composite ``given``."""
    table = contingency(dataset, given, response)
    vector = association_vector(table)
    alpha = resolve_weights(weights, vector.stats())
    return weighted_tau(vector, alpha)


def expected_concentration(
    dataset: CategoricalDataset, indices: Sequence[VarRef]
) -> float:
    """Concentration ``sum(p(cell)^2)`` of the joint distribution over
    ``indices``; 1 for a point mass, ``1/k`` for a uniform over k cells."""
    resolved = [dataset.index_of(i) for i in indices]
    if not resolved:
        raise DataError("expected_concentration requires at least one variable")
    if len(set(resolved)) != len(resolved):
        raise DataError("variables must be distinct")
    _, cell_mass, _ = _joint_codes(dataset, sorted(resolved))
    p = cell_mass / dataset.total_mass
    return float(np.sum(p * p))
