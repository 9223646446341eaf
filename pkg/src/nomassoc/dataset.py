"""Columnar categorical datasets and joint-mass structures.

A :class:`CategoricalDataset` stores one dense integer code array per
variable plus an optional non-negative mass per row, so exact probability
tables (masses) and raw observation files (unit masses) share one
representation.  :func:`compose` turns any subset of variables into a single
composite variable over its *observed* joint levels, and :func:`contingency`
builds the joint mass table between a composite and a response.

All structures are immutable after construction; the underlying numpy
arrays are marked read-only so datasets can be shared across workers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DataError, ParseError

#: Token treated as a missing value by default in delimited files.
MISSING_TOKEN = "__NA__"

VarRef = Union[int, str]


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class VariableMeta:
    """Name and ordered category labels of one categorical variable."""

    name: str
    levels: tuple[str, ...]

    def __post_init__(self):
        if len(self.levels) < 1:
            raise DataError(f"variable {self.name!r} has no levels")
        if len(set(self.levels)) != len(self.levels):
            raise DataError(f"variable {self.name!r} has duplicate level labels")

    @property
    def cardinality(self) -> int:
        return len(self.levels)


class CategoricalDataset:
    """Immutable column-encoded categorical table with per-row masses.

    Parameters
    ----------
    variables : sequence of VariableMeta
        Ordered variable descriptions; names must be unique.
    codes : sequence of integer arrays
        One array per variable, all of equal length; every code of variable
        ``v`` must lie in ``[0, cardinality(v))``.
    mass : array, optional
        Non-negative, finite per-row mass.  Defaults to 1.0 per row.  Masses
        may be counts or probabilities; queries normalise by ``total_mass``.
    """

    __slots__ = ("variables", "codes", "mass", "total_mass")

    def __init__(
        self,
        variables: Sequence[VariableMeta],
        codes: Sequence[np.ndarray],
        mass: np.ndarray | None = None,
        *,
        validate: bool = True,
    ):
        variables = tuple(variables)
        codes = tuple(_readonly(np.asarray(c, dtype=np.int64)) for c in codes)
        n = len(codes[0]) if codes else 0
        if mass is None:
            mass = np.ones(n, dtype=np.float64)
        mass = _readonly(np.asarray(mass, dtype=np.float64))
        if validate:
            names = [v.name for v in variables]
            if len(set(names)) != len(names):
                raise DataError("duplicate variable names")
            if len(codes) != len(variables):
                raise DataError("one code array per variable is required")
            for meta, col in zip(variables, codes):
                if len(col) != n:
                    raise DataError("code arrays must have equal length")
                if n and (col.min() < 0 or col.max() >= meta.cardinality):
                    raise DataError(
                        f"codes of variable {meta.name!r} outside "
                        f"[0, {meta.cardinality})"
                    )
            if len(mass) != n:
                raise DataError("mass array length does not match rows")
            if not np.all(np.isfinite(mass)):
                raise DataError("row masses must be finite")
            if n and mass.min() < 0:
                raise DataError("row masses must be non-negative")
        total = float(mass.sum())
        if validate and total <= 0:
            raise DataError("total mass must be positive")
        self.variables = variables
        self.codes = codes
        self.mass = mass
        self.total_mass = total

    # -- basic queries ---------------------------------------------------

    @property
    def n_rows(self) -> int:
        return len(self.mass)

    @property
    def n_variables(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def unit_mass(self) -> bool:
        return bool(np.all(self.mass == 1.0))

    def index_of(self, ref: VarRef) -> int:
        """Resolve a variable name or index to a validated index."""
        if isinstance(ref, str):
            try:
                return self.names.index(ref)
            except ValueError:
                raise DataError(
                    f"unknown variable {ref!r}; available: {', '.join(self.names)}"
                ) from None
        idx = int(ref)
        if not 0 <= idx < self.n_variables:
            raise DataError(f"variable index {idx} out of range")
        return idx

    def variable(self, ref: VarRef) -> VariableMeta:
        return self.variables[self.index_of(ref)]

    def take(self, rows: np.ndarray) -> "CategoricalDataset":
        """Row subset/resample sharing variable metadata (no re-validation)."""
        return CategoricalDataset(
            self.variables,
            [c[rows] for c in self.codes],
            self.mass[rows],
            validate=False,
        )

    def row_labels(self, row: int) -> tuple[str, ...]:
        return tuple(
            v.levels[c[row]] for v, c in zip(self.variables, self.codes)
        )

    def __repr__(self) -> str:
        return (
            f"CategoricalDataset({self.n_variables} variables, "
            f"{self.n_rows} rows, total_mass={self.total_mass:g})"
        )


# -- construction ---------------------------------------------------------


def load_delimited(
    path,
    *,
    delimiter: str = ",",
    missing_token: str = MISSING_TOKEN,
    missing_policy: str = "own-category",
    mass_column: str | None = None,
) -> CategoricalDataset:
    """Read a delimited UTF-8 text file into a dataset.

    The first record must be a header of unique names.  Category levels are
    the distinct observed strings in first-appearance order.  ``missing_policy``
    is ``"own-category"`` (the missing token becomes a regular level) or
    ``"drop-row"``.  If ``mass_column`` names a column, it supplies per-row
    masses instead of 1.0 and is not encoded as a variable.
    """
    if missing_policy not in ("own-category", "drop-row"):
        raise DataError(f"unknown missing policy {missing_policy!r}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            raise ParseError("header names are not unique", line=1)
        mass_idx = None
        if mass_column is not None:
            if mass_column not in header:
                raise DataError(
                    f"mass column {mass_column!r} not in header: {header}"
                )
            mass_idx = header.index(mass_column)
        var_positions = [i for i in range(len(header)) if i != mass_idx]
        columns: list[list[str]] = [[] for _ in var_positions]
        masses: list[float] = []
        for lineno, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != len(header):
                raise ParseError(
                    f"expected {len(header)} fields, got {len(record)}",
                    line=lineno,
                )
            if missing_policy == "drop-row" and any(
                record[i] == missing_token for i in var_positions
            ):
                continue
            if mass_idx is not None:
                try:
                    m = float(record[mass_idx])
                except ValueError:
                    raise ParseError(
                        f"mass value {record[mass_idx]!r} is not a number",
                        line=lineno,
                    ) from None
                if not np.isfinite(m) or m < 0:
                    raise ParseError(f"mass value {m!r} is invalid", line=lineno)
                masses.append(m)
            for col, i in zip(columns, var_positions):
                col.append(record[i])
    if not columns or not columns[0]:
        raise ParseError("file contains a header but no data rows")

    variables = []
    codes = []
    for col, i in zip(columns, var_positions):
        level_index: dict[str, int] = {}
        arr = np.empty(len(col), dtype=np.int64)
        for r, label in enumerate(col):
            code = level_index.setdefault(label, len(level_index))
            arr[r] = code
        variables.append(VariableMeta(header[i], tuple(level_index)))
        codes.append(arr)
    mass = np.asarray(masses, dtype=np.float64) if mass_idx is not None else None
    return CategoricalDataset(variables, codes, mass)


def from_scenarios(
    scenarios: Iterable[tuple[Sequence, float]],
    names: Sequence[str] | None = None,
) -> CategoricalDataset:
    """Build a dataset from explicit ``(label tuple, mass)`` scenarios.

    The empirical distribution of the result equals the given masses exactly
    (duplicate tuples merge by summing mass).  Level order follows first
    appearance in the scenario list.
    """
    merged: dict[tuple[str, ...], float] = {}
    arity = None
    for labels, mass in scenarios:
        labels = tuple(str(x) for x in labels)
        if arity is None:
            arity = len(labels)
        elif len(labels) != arity:
            raise DataError(
                f"scenario {labels} has arity {len(labels)}, expected {arity}"
            )
        mass = float(mass)
        if not np.isfinite(mass) or mass <= 0:
            raise DataError(f"scenario mass {mass!r} must be positive")
        merged[labels] = merged.get(labels, 0.0) + mass
    if not merged:
        raise DataError("no scenarios given")
    if names is None:
        names = [f"V{i + 1}" for i in range(arity)]
    elif len(names) != arity:
        raise DataError("number of names does not match scenario arity")

    level_maps: list[dict[str, int]] = [{} for _ in range(arity)]
    rows = list(merged.items())
    codes = [np.empty(len(rows), dtype=np.int64) for _ in range(arity)]
    mass = np.empty(len(rows), dtype=np.float64)
    for r, (labels, m) in enumerate(rows):
        mass[r] = m
        for v, label in enumerate(labels):
            codes[v][r] = level_maps[v].setdefault(label, len(level_maps[v]))
    variables = [
        VariableMeta(str(name), tuple(level_map))
        for name, level_map in zip(names, level_maps)
    ]
    return CategoricalDataset(variables, codes, mass)


def expand_to_unit_rows(dataset: CategoricalDataset) -> CategoricalDataset:
    """Expand integer row masses into repeated unit-mass rows."""
    counts = np.rint(dataset.mass)
    if not np.allclose(dataset.mass, counts, rtol=0, atol=1e-9):
        raise DataError("expansion requires integer row masses")
    reps = counts.astype(np.int64)
    return CategoricalDataset(
        dataset.variables,
        [np.repeat(c, reps) for c in dataset.codes],
        validate=False,
    )


# -- composite variables ---------------------------------------------------


@dataclass(frozen=True)
class CompositeVariable:
    """A subset of variables viewed as one variable over observed tuples.

    ``scenario_codes[k]`` holds the member codes of composite level ``k``;
    levels are ordered lexicographically by member codes (members in
    ascending variable-index order).  Tuples with zero total mass are
    absent.  ``row_codes`` maps each dataset row to its composite level,
    with -1 for rows whose tuple carries zero total mass.
    """

    member_indices: tuple[int, ...]
    member_names: tuple[str, ...]
    scenario_codes: np.ndarray  # (K, m) int64
    scenario_labels: tuple[tuple[str, ...], ...]
    row_codes: np.ndarray  # (n_rows,) int64, -1 = zero-mass tuple
    cell_mass: np.ndarray  # (K,) positive

    @property
    def observed_cardinality(self) -> int:
        return len(self.cell_mass)

    @property
    def name(self) -> str:
        if len(self.member_names) == 1:
            return self.member_names[0]
        return "(" + ",".join(self.member_names) + ")"


def _joint_codes(
    dataset: CategoricalDataset, indices: Sequence[int]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense codes of the joint variable over ``indices``.

    Returns ``(row_codes, cell_mass, representative_rows)`` where codes are
    lexicographic over member codes and zero-mass cells are dropped
    (row_codes -1).  Codes are compacted after each pairing step so the key
    range never overflows.
    """
    key = dataset.codes[indices[0]].copy()
    for idx in indices[1:]:
        card = dataset.variables[idx].cardinality
        key = key * card + dataset.codes[idx]
        uniq, key = np.unique(key, return_inverse=True)
    uniq, first_rows, inverse = np.unique(
        key, return_index=True, return_inverse=True
    )
    cell_mass = np.bincount(inverse, weights=dataset.mass, minlength=len(uniq))
    keep = cell_mass > 0
    if keep.all():
        return inverse, cell_mass, first_rows
    remap = np.full(len(uniq), -1, dtype=np.int64)
    remap[keep] = np.arange(int(keep.sum()))
    return remap[inverse], cell_mass[keep], first_rows[keep]


def compose(dataset: CategoricalDataset, indices: Sequence[VarRef]) -> CompositeVariable:
    """View an ordered set of variables as one composite categorical variable.

    Member order is normalised to ascending variable index; composite level
    codes enumerate only observed (positive-mass) tuples, lexicographically.
    """
    resolved = [dataset.index_of(i) for i in indices]
    if not resolved:
        raise DataError("composite requires at least one variable")
    if len(set(resolved)) != len(resolved):
        raise DataError("composite members must be distinct")
    members = tuple(sorted(resolved))
    row_codes, cell_mass, rep_rows = _joint_codes(dataset, members)
    scenario_codes = np.stack(
        [dataset.codes[i][rep_rows] for i in members], axis=1
    )
    labels = tuple(
        tuple(
            dataset.variables[i].levels[scenario_codes[k, j]]
            for j, i in enumerate(members)
        )
        for k in range(len(cell_mass))
    )
    return CompositeVariable(
        member_indices=members,
        member_names=tuple(dataset.variables[i].name for i in members),
        scenario_codes=_readonly(scenario_codes),
        scenario_labels=labels,
        row_codes=_readonly(row_codes),
        cell_mass=_readonly(cell_mass),
    )


# -- contingency tables ----------------------------------------------------


class ContingencyTable:
    """Joint mass table between a composite explanatory variable and a response.

    ``mass[i, s]`` is the total mass of rows at composite level ``i`` and
    response level ``s``.  Marginals and the grand total are derived from the
    table; all entries must be non-negative and the total positive.
    """

    __slots__ = ("mass", "x_marginal", "y_marginal", "total",
                 "x_labels", "y_labels", "x_name", "y_name")

    def __init__(
        self,
        mass: np.ndarray,
        *,
        x_labels: Sequence | None = None,
        y_labels: Sequence | None = None,
        x_name: str = "X",
        y_name: str = "Y",
    ):
        mass = np.asarray(mass, dtype=np.float64)
        if mass.ndim != 2:
            raise DataError("contingency mass must be a 2-d array")
        if not np.all(np.isfinite(mass)):
            raise DataError("contingency mass must be finite")
        if mass.size and mass.min() < 0:
            raise DataError("contingency mass must be non-negative")
        total = float(mass.sum())
        if total <= 0:
            raise DataError("contingency table is degenerate (total mass 0)")
        self.mass = _readonly(mass)
        self.x_marginal = _readonly(mass.sum(axis=1))
        self.y_marginal = _readonly(mass.sum(axis=0))
        self.total = total
        self.x_labels = tuple(x_labels) if x_labels is not None else tuple(
            str(i) for i in range(mass.shape[0])
        )
        self.y_labels = tuple(y_labels) if y_labels is not None else tuple(
            str(s) for s in range(mass.shape[1])
        )
        self.x_name = x_name
        self.y_name = y_name

    @classmethod
    def from_counts(cls, counts, **kwargs) -> "ContingencyTable":
        return cls(np.asarray(counts, dtype=np.float64), **kwargs)

    @property
    def x_levels(self) -> int:
        return self.mass.shape[0]

    @property
    def y_levels(self) -> int:
        return self.mass.shape[1]

    def y_probabilities(self) -> np.ndarray:
        return self.y_marginal / self.total

    def transpose(self) -> "ContingencyTable":
        """Swap the explanatory and response roles."""
        return ContingencyTable(
            self.mass.T.copy(),
            x_labels=self.y_labels,
            y_labels=self.x_labels,
            x_name=self.y_name,
            y_name=self.x_name,
        )

    def __repr__(self) -> str:
        return (
            f"ContingencyTable({self.x_name}[{self.x_levels}] x "
            f"{self.y_name}[{self.y_levels}], total={self.total:g})"
        )


def _as_composite(
    dataset: CategoricalDataset, ref
) -> CompositeVariable:
    if isinstance(ref, CompositeVariable):
        return ref
    if isinstance(ref, (int, str, np.integer)):
        return compose(dataset, [ref])
    return compose(dataset, list(ref))


def contingency(
    dataset: CategoricalDataset,
    x,
    y,
) -> ContingencyTable:
    """Joint mass table of ``y`` (response) against composite ``x``.

    ``x`` may be a :class:`CompositeVariable`, a variable reference, or a
    sequence of references; ``y`` a variable reference or composite.  The
    response axis of a plain variable keeps that variable's full level set,
    so levels with zero mass appear as zero columns.
    """
    xc = _as_composite(dataset, x)
    if isinstance(y, CompositeVariable) or not isinstance(y, (int, str, np.integer)):
        yc = _as_composite(dataset, y)
        if set(xc.member_indices) & set(yc.member_indices):
            raise DataError("explanatory and response variables overlap")
        y_codes = yc.row_codes
        n_y = yc.observed_cardinality
        y_labels = tuple("/".join(t) for t in yc.scenario_labels)
        y_name = yc.name
        valid = (xc.row_codes >= 0) & (y_codes >= 0)
    else:
        y_idx = dataset.index_of(y)
        if y_idx in xc.member_indices:
            raise DataError(
                f"response {dataset.variables[y_idx].name!r} is a member of x"
            )
        y_codes = dataset.codes[y_idx]
        n_y = dataset.variables[y_idx].cardinality
        y_labels = dataset.variables[y_idx].levels
        y_name = dataset.variables[y_idx].name
        valid = xc.row_codes >= 0
    n_x = xc.observed_cardinality
    combined = xc.row_codes[valid] * n_y + y_codes[valid]
    mass = np.bincount(
        combined, weights=dataset.mass[valid], minlength=n_x * n_y
    ).reshape(n_x, n_y)
    return ContingencyTable(
        mass,
        x_labels=tuple("/".join(t) for t in xc.scenario_labels),
        y_labels=y_labels,
        x_name=xc.name,
        y_name=y_name,
    )


# -- splitting -------------------------------------------------------------


def split(
    dataset: CategoricalDataset, fraction: float, seed: int
) -> tuple[CategoricalDataset, CategoricalDataset]:
    """Disjoint random row partition with sizes ``(round(f*n), rest)``.

    Requires unit row masses; row-level resampling of weighted scenario
    tables is meaningless.  Deterministic given ``seed``.
    """
    if not 0 < fraction < 1:
        raise DataError("fraction must be in (0, 1)")
    if not dataset.unit_mass:
        raise DataError(
            "split requires unit-mass rows; use expand_to_unit_rows() first"
        )
    n = dataset.n_rows
    k = int(round(fraction * n))
    perm = np.random.default_rng(seed).permutation(n)
    first = np.sort(perm[:k])
    second = np.sort(perm[k:])
    return dataset.take(first), dataset.take(second)
