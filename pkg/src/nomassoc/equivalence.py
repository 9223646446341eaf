"""Pairwise equivalence relations between explanatory variables.

Two explanatory variables (or composites) can be compared with respect to a
response through a strictly weakening chain of relations:

* ``E1`` -- mutual determinism plus perfect prediction of the response:
  the association of each variable on the other and of the response on the
  first all equal 1;
* ``E2`` -- the response is perfectly predicted by both variables;
* ``E2prime`` -- mutual determinism of the two variables (implies ``E3``);
* ``E3`` -- equal association matrices;
* ``E4`` -- equal association vectors;
* ``E5`` -- equal weighted association for a given weight vector.

``E-i`` implies ``E-(i+1)``; for a binary response E3, E4 and E5 coincide.
Identical member sets are equivalent at every level by reflexivity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np

from .association import (
    WeightVector,
    association_matrix,
    association_vector,
    goodman_kruskal_tau,
    resolve_weights,
    weighted_tau,
)
from .dataset import CategoricalDataset, CompositeVariable, _as_composite, contingency
from .errors import DataError, HierarchyInconsistencyError

LEVEL_NAMES = ("E1", "E2", "E2prime", "E3", "E4", "E5")

#: Order evaluated by :func:`hierarchy_scan` (E2prime sits beside E2 and is
#: not part of the numbered chain).
HIERARCHY = ("E1", "E2", "E3", "E4", "E5")

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class EquivalenceLevel:
    """A relation identifier with its comparison tolerance.

    ``alpha`` selects the weights for E5 (and, per the generalised form of
    the perfect-prediction checks, for E1/E2/E2prime); a scheme name or an
    explicit :class:`WeightVector`.  The default is the variation-weighted
    scheme, i.e. the Goodman-Kruskal tau.
    """

    level: str
    tolerance: float = DEFAULT_TOLERANCE
    alpha: Union[str, WeightVector, None] = None

    def __post_init__(self):
        if self.level not in LEVEL_NAMES:
            raise DataError(
                f"unknown equivalence level {self.level!r}; "
                f"expected one of {LEVEL_NAMES}"
            )
        if not self.tolerance > 0:
            raise DataError("tolerance must be positive")


@dataclass(frozen=True)
class Witness:
    """First violated comparison of a failed equivalence check."""

    comparison: str
    index: tuple[int, ...] | None
    labels: tuple[str, ...] | None
    lhs: float
    rhs: float

    def __str__(self) -> str:
        where = f" at {self.labels or self.index}" if (self.labels or self.index) else ""
        return f"{self.comparison}{where}: {self.lhs:.6g} != {self.rhs:.6g}"


@dataclass(frozen=True)
class EquivalenceReport:
    level: str
    holds: bool
    witness: Witness | None

    def __post_init__(self):
        if self.holds and self.witness is not None:
            raise DataError("a holding report cannot carry a witness")
        if not self.holds and self.witness is None:
            raise DataError("a failing report must carry a witness")


def _tau_one(dataset, x, response, alpha_spec) -> float:
    """Weighted association of ``response`` on ``x`` for a perfect-prediction
    check; defaults to the Goodman-Kruskal tau."""
    table = contingency(dataset, x, response)
    if alpha_spec is None or alpha_spec == "gk":
        return goodman_kruskal_tau(table)
    vector = association_vector(table)
    alpha = resolve_weights(alpha_spec, vector.stats())
    if not alpha.regular:
        warnings.warn(
            "perfect-prediction checks with a non-regular weight vector do "
            "not characterise determinism",
            stacklevel=3,
        )
    return weighted_tau(vector, alpha)


def _same_members(a: CompositeVariable, b: CompositeVariable) -> bool:
    return a.member_indices == b.member_indices


def check(
    dataset: CategoricalDataset,
    x1,
    x2,
    y,
    level: Union[EquivalenceLevel, str],
) -> EquivalenceReport:
    """Decide one equivalence relation between ``x1`` and ``x2`` w.r.t. ``y``.

    ``x1``/``x2`` may be variable references, index sequences, or
    :class:`CompositeVariable` objects.  The report carries the first
    violated comparison when the relation fails.
    """
    if isinstance(level, str):
        level = EquivalenceLevel(level)
    tol = level.tolerance
    c1 = _as_composite(dataset, x1)
    c2 = _as_composite(dataset, x2)
    if _same_members(c1, c2):
        return EquivalenceReport(level=level.level, holds=True, witness=None)

    def unity(name: str, value: float) -> Witness | None:
        if abs(value - 1.0) <= tol:
            return None
        return Witness(comparison=name, index=None, labels=None, lhs=value, rhs=1.0)

    name1, name2 = c1.name, c2.name
    # explicit weight vectors are sized for the response; the mutual
    # determinism checks compare the two explanatory variables, whose level
    # counts differ, so only scheme names carry over (any regular scheme
    # yields the same truth value for a tau = 1 predicate)
    mutual_alpha = level.alpha if isinstance(level.alpha, str) else None
    if level.level in ("E1", "E2prime"):
        for name, a, b in ((f"tau({name1}|{name2})", c2, c1),
                           (f"tau({name2}|{name1})", c1, c2)):
            w = unity(name, _tau_one(dataset, a, b, mutual_alpha))
            if w is not None:
                return EquivalenceReport(level.level, False, w)
        if level.level == "E2prime":
            return EquivalenceReport(level.level, True, None)
        w = unity(
            f"tau(Y|{name1})", _tau_one(dataset, c1, y, level.alpha)
        )
        return EquivalenceReport(level.level, w is None, w)

    if level.level == "E2":
        for name, x in ((f"tau(Y|{name1})", c1), (f"tau(Y|{name2})", c2)):
            w = unity(name, _tau_one(dataset, x, y, level.alpha))
            if w is not None:
                return EquivalenceReport(level.level, False, w)
        return EquivalenceReport(level.level, True, None)

    if level.level == "E3":
        m1 = association_matrix(contingency(dataset, c1, y))
        m2 = association_matrix(contingency(dataset, c2, y))
        if m1.level_indices != m2.level_indices:
            raise DataError("association matrices cover different levels")
        diff = np.abs(m1.entries - m2.entries)
        if diff.size and diff.max() > tol:
            s, t = np.unravel_index(int(np.argmax(diff > tol)), diff.shape)
            w = Witness(
                comparison="association matrix entry",
                index=(int(s), int(t)),
                labels=(m1.y_labels[s], m1.y_labels[t]),
                lhs=float(m1.entries[s, t]),
                rhs=float(m2.entries[s, t]),
            )
            return EquivalenceReport(level.level, False, w)
        return EquivalenceReport(level.level, True, None)

    if level.level == "E4":
        v1 = association_vector(contingency(dataset, c1, y))
        v2 = association_vector(contingency(dataset, c2, y))
        if v1.level_indices != v2.level_indices:
            raise DataError("association vectors cover different levels")
        diff = np.abs(v1.components - v2.components)
        if diff.size and diff.max() > tol:
            s = int(np.argmax(diff > tol))
            w = Witness(
                comparison="association vector component",
                index=(s,),
                labels=(v1.y_labels[s],),
                lhs=float(v1.components[s]),
                rhs=float(v2.components[s]),
            )
            return EquivalenceReport(level.level, False, w)
        return EquivalenceReport(level.level, True, None)

    # E5
    v1 = association_vector(contingency(dataset, c1, y))
    v2 = association_vector(contingency(dataset, c2, y))
    alpha = resolve_weights(
        level.alpha if level.alpha is not None else "gk", v1.stats()
    )
    if not alpha.regular:
        warnings.warn(
            "E5 with a non-regular weight vector ignores some response "
            "categories",
            stacklevel=2,
        )
    t1 = weighted_tau(v1, alpha)
    t2 = weighted_tau(v2, alpha)
    if abs(t1 - t2) > tol:
        w = Witness(
            comparison="weighted association",
            index=None,
            labels=None,
            lhs=t1,
            rhs=t2,
        )
        return EquivalenceReport(level.level, False, w)
    return EquivalenceReport(level.level, True, None)


def hierarchy_scan(
    dataset: CategoricalDataset,
    x1,
    x2,
    y,
    alpha: Union[str, WeightVector, None] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[tuple[str, bool]]:
    """Evaluate E1 through E5 in order and assert verdict monotonicity.

    Once a level holds every later level must hold; a violation indicates
    misconfigured tolerances and raises :class:`HierarchyInconsistencyError`
    rather than passing silently.
    """
    verdicts: list[tuple[str, bool]] = []
    for name in HIERARCHY:
        report = check(
            dataset, x1, x2, y,
            EquivalenceLevel(name, tolerance=tolerance, alpha=alpha),
        )
        verdicts.append((name, report.holds))
    held = False
    for name, holds in verdicts:
        if held and not holds:
            raise HierarchyInconsistencyError(
                f"{name} fails although a stronger level holds; "
                f"verdicts={verdicts} (check tolerances)"
            )
        held = held or holds
    return verdicts
