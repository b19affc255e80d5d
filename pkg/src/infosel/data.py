"""Tabular ingestion, equal-width discretization, and split generation.

Everything downstream works on integer-coded columns: each feature j takes
values in [0, arity_j) and the target takes class codes in [0, n_classes).
Discretization is fit on a chosen row subset (the training rows in the
benchmark harness) and can then be applied to any table with the same schema.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np


class DataError(ValueError):
    """Raised for malformed input tables or invalid binning requests."""


@dataclass(frozen=True)
class RawTable:
    """A loaded table: named columns, each numeric or categorical.

    ``numeric`` columns hold float arrays, ``categorical`` columns hold lists
    of string labels.  The target column is kept alongside the features and
    must be categorical or integer-valued numeric.
    """

    names: tuple[str, ...]
    kinds: tuple[str, ...]              # "numeric" | "categorical", per column
    columns: tuple[object, ...]         # np.ndarray (float) or list[str]
    target_name: str
    n_rows: int

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(n for n in self.names if n != self.target_name)

    def column(self, name: str):
        return self.columns[self.names.index(name)]

    def kind(self, name: str) -> str:
        return self.kinds[self.names.index(name)]


@dataclass(frozen=True)
class ColumnSpec:
    """Fitted per-column transform.

    Numeric columns carry equal-width cut points plus a dense re-index of the
    bins occupied on the fitting rows (arity = number of occupied bins).
    Categorical columns carry a label -> code map in first-appearance order,
    with one extra code reserved for labels unseen at fit time.
    """

    kind: str
    edges: np.ndarray | None = None               # numeric: n_bins-1 cut points
    occupied: np.ndarray | None = None            # numeric: sorted occupied raw bins
    labels: dict[str, int] | None = None          # categorical: label -> code
    arity: int = 1

    def encode(self, values) -> np.ndarray:
        if self.kind == "numeric":
            raw = raw_bins(np.asarray(values, dtype=float), self.edges)
            # values landing in a bin unoccupied at fit time snap to the
            # nearest occupied bin (ties toward the lower bin)
            pos = np.searchsorted(self.occupied, raw)
            pos = np.clip(pos, 0, len(self.occupied) - 1)
            left = np.clip(pos - 1, 0, len(self.occupied) - 1)
            take_left = np.abs(self.occupied[left] - raw) <= np.abs(self.occupied[pos] - raw)
            return np.where(take_left, left, pos).astype(np.int64)
        unknown = len(self.labels)
        return np.array([self.labels.get(v, unknown) for v in values], dtype=np.int64)


@dataclass(frozen=True)
class BinningSpec:
    """Fitted discretization for a whole table, including the target map."""

    n_bins: int
    feature_names: tuple[str, ...]
    feature_specs: tuple[ColumnSpec, ...]
    target_name: str
    target_labels: dict = field(default_factory=dict)   # class value -> code

    @property
    def n_classes(self) -> int:
        return len(self.target_labels)


@dataclass(frozen=True)
class DiscreteDataset:
    """Integer-coded table: N x D feature codes plus a class-label column."""

    codes: np.ndarray                   # (n_rows, n_features) int64
    arities: tuple[int, ...]
    target: np.ndarray                  # (n_rows,) int64
    n_classes: int
    feature_names: tuple[str, ...]

    def __post_init__(self):
        self.codes.setflags(write=False)
        self.target.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return self.codes.shape[0]

    @property
    def n_features(self) -> int:
        return self.codes.shape[1]

    def restrict(self, rows) -> "DiscreteDataset":
        rows = np.asarray(rows, dtype=np.int64)
        return DiscreteDataset(self.codes[rows].copy(), self.arities,
                               self.target[rows].copy(), self.n_classes,
                               self.feature_names)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.5
    seed: int = 0
    n_repeats: int = 30


def load_csv(path, target_name: str) -> RawTable:
    """Load a UTF-8, comma-separated file with a header row.

    Column types are inferred: numeric if every cell parses as a float,
    categorical otherwise.  Missing cells, ragged rows, and empty tables are
    hard errors.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("empty file (no header row)") from None
        rows = list(reader)
    if not rows:
        raise DataError("empty table (header only)")
    header = [h.strip() for h in header]
    if target_name not in header:
        raise DataError(f"target column {target_name!r} not in header {header}")
    width = len(header)
    cells: list[list[str]] = [[] for _ in header]
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataError(f"ragged row {i + 2}: expected {width} cells, got {len(row)}")
        for j, cell in enumerate(row):
            cell = cell.strip()
            if cell == "":
                raise DataError(f"missing value at row {i + 2}, column {header[j]!r}")
            cells[j].append(cell)

    kinds, columns = [], []
    for name, col in zip(header, cells):
        try:
            arr = np.array([float(c) for c in col], dtype=float)
            if not np.all(np.isfinite(arr)):
                raise ValueError
            kinds.append("numeric")
            columns.append(arr)
        except ValueError:
            kinds.append("categorical")
            columns.append(list(col))
    return RawTable(tuple(header), tuple(kinds), tuple(columns), target_name, len(rows))


def equal_width_edges(values: np.ndarray, n_bins: int) -> np.ndarray:
    """The n_bins-1 interior cut points over [min, max]; empty for constants."""
    lo, hi = float(values.min()), float(values.max())
    if n_bins <= 1 or lo == hi:
        return np.empty(0, dtype=float)
    return lo + (hi - lo) * np.arange(1, n_bins) / n_bins


def raw_bins(values: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Bin index per the rule edge_{i-1} <= v < edge_i, clamped at both ends."""
    if len(edges) == 0:
        return np.zeros(len(values), dtype=np.int64)
    return np.searchsorted(edges, values, side="right").astype(np.int64)


def fit_binning(table: RawTable, n_bins: int = 5, fit_rows=None) -> BinningSpec:
    """Fit per-column transforms on ``fit_rows`` (all rows when None)."""
    if n_bins < 1:
        raise DataError("n_bins must be >= 1")
    if fit_rows is None:
        fit_rows = np.arange(table.n_rows)
    fit_rows = np.asarray(fit_rows, dtype=np.int64)
    if len(fit_rows) == 0:
        raise DataError("fit_rows must be nonempty")

    specs = []
    feature_names = []
    for name, kind, col in zip(table.names, table.kinds, table.columns):
        if name == table.target_name:
            continue
        feature_names.append(name)
        if kind == "numeric":
            vals = np.asarray(col, dtype=float)[fit_rows]
            edges = equal_width_edges(vals, n_bins)
            occupied = np.unique(raw_bins(vals, edges))
            specs.append(ColumnSpec("numeric", edges=edges, occupied=occupied,
                                    arity=len(occupied)))
        else:
            labels: dict[str, int] = {}
            for i in fit_rows:
                v = col[i]
                if v not in labels:
                    labels[v] = len(labels)
            # reserve one shared code for labels unseen at fit time
            specs.append(ColumnSpec("categorical", labels=labels, arity=len(labels) + 1))

    tcol = table.column(table.target_name)
    if table.kind(table.target_name) == "numeric":
        tvals = np.asarray(tcol, dtype=float)[fit_rows]
        if not np.all(tvals == np.round(tvals)):
            raise DataError("target column must be categorical or integer-valued")
        target_labels = {v: i for i, v in enumerate(sorted(set(int(v) for v in tvals)))}
    else:
        target_labels = {}
        for i in fit_rows:
            if tcol[i] not in target_labels:
                target_labels[tcol[i]] = len(target_labels)
    return BinningSpec(n_bins, tuple(feature_names), tuple(specs),
                       table.target_name, target_labels)


def apply_binning(table: RawTable, spec: BinningSpec) -> DiscreteDataset:
    """Encode a table with a fitted spec; schema must match the fitting table."""
    if tuple(n for n in table.names if n != table.target_name) != spec.feature_names \
            or table.target_name != spec.target_name:
        raise DataError("column mismatch between table and binning spec")
    cols = []
    for name, cspec in zip(spec.feature_names, spec.feature_specs):
        if table.kind(name) != cspec.kind:
            raise DataError(f"column {name!r} changed type since fitting")
        cols.append(cspec.encode(table.column(name)))
    codes = np.column_stack(cols) if cols else np.zeros((table.n_rows, 0), np.int64)

    tcol = table.column(spec.target_name)
    if table.kind(spec.target_name) == "numeric":
        raw = [int(v) for v in np.asarray(tcol, dtype=float)]
    else:
        raw = list(tcol)
    n_fit = len(spec.target_labels)
    target = np.array([spec.target_labels.get(v, n_fit) for v in raw], dtype=np.int64)
    n_classes = n_fit + (1 if target.max(initial=-1) >= n_fit else 0)
    return DiscreteDataset(codes, tuple(s.arity for s in spec.feature_specs),
                           target, n_classes, spec.feature_names)


def discretize(table: RawTable, n_bins: int = 5, fit_rows=None) -> DiscreteDataset:
    """fit_binning + apply_binning in one step (one-shot selection runs)."""
    return apply_binning(table, fit_binning(table, n_bins, fit_rows))


def make_splits(n_rows: int, spec: SplitSpec) -> list[tuple[np.ndarray, np.ndarray]]:
    """Seeded random train/test index pairs, one per repeat."""
    if n_rows < 2:
        raise DataError("need at least 2 rows to split")
    cut = math.floor(spec.train_fraction * n_rows)
    if cut < 1 or cut >= n_rows:
        raise DataError(f"train fraction {spec.train_fraction} leaves an empty side")
    rng = np.random.default_rng(spec.seed)
    out = []
    for _ in range(spec.n_repeats):
        perm = rng.permutation(n_rows)
        out.append((np.sort(perm[:cut]), np.sort(perm[cut:])))
    return out


# 10-row binary demonstration table: the target is the parity of the first
# four features, X5 carries no information about it.
TOY_ROWS = (
    (0, 1, 0, 0, 1, 1),
    (1, 1, 1, 1, 0, 0),
    (0, 0, 0, 0, 0, 0),
    (1, 0, 0, 0, 0, 1),
    (1, 1, 1, 0, 0, 1),
    (0, 0, 0, 1, 0, 1),
    (1, 0, 1, 0, 0, 0),
    (1, 0, 1, 0, 0, 0),
    (1, 1, 0, 1, 0, 1),
    (1, 0, 0, 0, 1, 1),
)
TOY_FEATURES = ("X1", "X2", "X3", "X4", "X5")


def toy_dataset() -> DiscreteDataset:
    """The embedded demonstration table as a ready-made discrete dataset."""
    arr = np.array(TOY_ROWS, dtype=np.int64)
    return DiscreteDataset(arr[:, :5].copy(), (2,) * 5, arr[:, 5].copy(), 2, TOY_FEATURES)


def toy_table() -> RawTable:
    """The same table as a RawTable (exercises the CSV/binning path)."""
    arr = np.array(TOY_ROWS, dtype=float)
    names = TOY_FEATURES + ("Y",)
    cols = tuple(arr[:, j].copy() for j in range(6))
    return RawTable(names, ("numeric",) * 6, cols, "Y", len(TOY_ROWS))


def write_toy_csv(path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(TOY_FEATURES + ("Y",))
        for row in TOY_ROWS:
            w.writerow(row)


def make_xor_table(seed: int, n_rows: int = 512, n_noise: int = 6,
                   p_bias: float = 0.15) -> RawTable:
    """Synthetic recovery benchmark: Y = (X1 ^ X2) ^ (X3 ^ X4) plus noise.

    X1 is a fair bit while X2..X4 are biased Bernoulli(p_bias), so in the
    population only X1 has nonzero marginal relevance (a fair bit inside the
    parity masks every other feature's pairwise signal).  Ranking by relevance
    alone therefore finds X1 but nothing else, while conditional scoring can
    recover the whole interacting group.  Noise features are fair iid bits.
    """
    rng = np.random.default_rng(seed)
    x1 = rng.integers(0, 2, n_rows)
    x234 = (rng.random((n_rows, 3)) < p_bias).astype(np.int64)
    y = x1 ^ x234[:, 0] ^ x234[:, 1] ^ x234[:, 2]
    noise = rng.integers(0, 2, (n_rows, n_noise))
    mat = np.column_stack([x1, x234, noise, y]).astype(float)
    names = tuple([f"X{i + 1}" for i in range(4)]
                  + [f"N{i + 1}" for i in range(n_noise)] + ["Y"])
    cols = tuple(mat[:, j].copy() for j in range(mat.shape[1]))
    return RawTable(names, ("numeric",) * len(names), cols, "Y", n_rows)
