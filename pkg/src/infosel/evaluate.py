"""KNN evaluation of selected subsets over repeated random splits.

The protocol: per split, fit discretization on the training rows only, select
on the training half, then score every prefix of the selected order on the
test half with a K-nearest-neighbour vote over the integer codes.  Errors are
averaged over splits; criteria are compared by average rank (1 = best, ties
share the mean of their positions).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .data import RawTable, SplitSpec, apply_binning, fit_binning, make_splits
from .selection import run_sfs


def knn_classify(train_codes, train_labels, test_codes, k: int = 3,
                 feature_subset=None, n_classes: int | None = None,
                 one_hot: bool = False) -> np.ndarray:
    """Majority vote among the k nearest training rows by Euclidean distance.

    Distance ties prefer the lower training-row index; vote ties prefer the
    lowest class label.  Distances are computed on the integer codes (or on
    their one-hot expansion when ``one_hot`` is set).
    """
    train_codes = np.asarray(train_codes)
    test_codes = np.asarray(test_codes)
    train_labels = np.asarray(train_labels)
    if len(train_labels) == 0:
        raise ValueError("empty training set")
    if k < 1:
        raise ValueError("k must be >= 1")
    if feature_subset is not None:
        feature_subset = list(feature_subset)
        if not feature_subset:
            raise ValueError("feature subset is empty")
        train_codes = train_codes[:, feature_subset]
        test_codes = test_codes[:, feature_subset]
    if one_hot:
        train_codes, test_codes = _one_hot_pair(train_codes, test_codes)
    if n_classes is None:
        n_classes = int(train_labels.max()) + 1
    k = min(k, len(train_labels))

    diff = test_codes[:, None, :].astype(float) - train_codes[None, :, :].astype(float)
    dist = (diff ** 2).sum(axis=2)
    preds = np.empty(len(test_codes), dtype=np.int64)
    for i in range(len(test_codes)):
        nearest = np.argsort(dist[i], kind="stable")[:k]
        votes = np.bincount(train_labels[nearest], minlength=n_classes)
        preds[i] = int(np.argmax(votes))
    return preds


def _one_hot_pair(train_codes, test_codes):
    widths = [int(max(train_codes[:, j].max(), test_codes[:, j].max())) + 1
              for j in range(train_codes.shape[1])]

    def expand(mat):
        blocks = [np.eye(w, dtype=float)[np.clip(mat[:, j], 0, w - 1)]
                  for j, w in enumerate(widths)]
        return np.hstack(blocks)

    return expand(train_codes), expand(test_codes)


def average_ranks(errors) -> np.ndarray:
    """Average-rank the entries (1 = lowest error); ties share their mean rank."""
    errors = np.asarray(errors, dtype=float)
    if len(errors) < 2:
        raise ValueError("need at least two entries to rank")
    order = np.argsort(errors, kind="stable")
    ranks = np.empty(len(errors), dtype=float)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and errors[order[j + 1]] == errors[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def error_curve(table: RawTable, selector, splits, k_max: int, n_bins: int = 5,
                knn_k: int = 3, estimator: str = "plugin") -> np.ndarray:
    """Per-split misclassification error of every prefix size 1..k_max.

    ``selector`` is a Criterion (selection runs on the training half) or a
    callable mapping a training DiscreteDataset to a feature order.  Returns
    an (n_splits, k_max) array.
    """
    errors = np.empty((len(splits), k_max), dtype=float)
    for r, (train_rows, test_rows) in enumerate(splits):
        spec = fit_binning(table, n_bins, train_rows)
        ds = apply_binning(table, spec)
        train_ds = ds.restrict(train_rows)
        if callable(selector):
            order = list(selector(train_ds))[:k_max]
        else:
            order = run_sfs(train_ds, selector, k_max, estimator=estimator).order
        if len(order) < k_max:
            raise ValueError("selector returned fewer features than k_max")
        test_codes = ds.codes[test_rows]
        test_y = ds.target[test_rows]
        # prefixes share distance work: accumulate one feature at a time
        dist = np.zeros((len(test_rows), len(train_rows)), dtype=float)
        train_codes = train_ds.codes
        train_y = train_ds.target
        kk = min(knn_k, len(train_rows))
        for size in range(1, k_max + 1):
            j = order[size - 1]
            diff = test_codes[:, j, None].astype(float) - train_codes[None, :, j].astype(float)
            dist += diff ** 2
            wrong = 0
            for i in range(len(test_rows)):
                nearest = np.argsort(dist[i], kind="stable")[:kk]
                votes = np.bincount(train_y[nearest], minlength=ds.n_classes)
                wrong += int(np.argmax(votes)) != test_y[i]
            errors[r, size - 1] = wrong / len(test_rows)
    return errors


@dataclass
class EvalReport:
    """Error curves and cross-criterion ranks for one dataset."""

    criteria: list[str]
    errors: np.ndarray            # (n_criteria, n_splits, k_max)
    meta: dict

    @property
    def mean_errors(self) -> np.ndarray:
        return self.errors.mean(axis=1)

    @property
    def ranks_per_k(self) -> np.ndarray:
        me = self.mean_errors
        return np.column_stack([average_ranks(me[:, k]) for k in range(me.shape[1])])

    @property
    def average_rank(self) -> np.ndarray:
        return self.ranks_per_k.mean(axis=1)

    def to_dict(self) -> dict:
        return {
            "meta": self.meta,
            "criteria": list(self.criteria),
            "errors": self.errors.tolist(),
            "mean_errors": self.mean_errors.tolist(),
            "ranks_per_k": self.ranks_per_k.tolist(),
            "average_rank": self.average_rank.tolist(),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_csv(self) -> str:
        """Mean-error matrix, criteria as rows and top-K sizes as columns."""
        k_max = self.errors.shape[2]
        lines = ["criterion," + ",".join(f"k{k + 1}" for k in range(k_max)) + ",avg_rank"]
        me = self.mean_errors
        ar = self.average_rank
        for i, name in enumerate(self.criteria):
            cells = ",".join(f"{me[i, k]:.6f}" for k in range(k_max))
            lines.append(f"{name},{cells},{ar[i]:.4f}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        k_max = self.errors.shape[2]
        me = self.mean_errors
        ar = self.average_rank
        w = max(len(n) for n in self.criteria) + 2
        header = "criterion".ljust(w) + "".join(f"k={k + 1}".rjust(9) for k in range(k_max)) \
            + "avg rank".rjust(11)
        lines = [header, "-" * len(header)]
        for i, name in enumerate(self.criteria):
            row = name.ljust(w) + "".join(f"{me[i, k]:9.4f}" for k in range(k_max))
            lines.append(row + f"{ar[i]:11.2f}")
        return "\n".join(lines) + "\n"


def benchmark(table: RawTable, criteria, split_spec: SplitSpec, k_max: int,
              n_bins: int = 5, knn_k: int = 3, estimator: str = "plugin",
              dataset_label: str = "") -> EvalReport:
    """Run the repeated-holdout protocol for several criteria on one table."""
    criteria = list(criteria)
    if len(criteria) < 2:
        raise ValueError("benchmark needs at least two criteria")
    splits = make_splits(table.n_rows, split_spec)
    errs = np.stack([error_curve(table, c, splits, k_max, n_bins, knn_k, estimator)
                     for c in criteria])
    labels = [getattr(c, "label", str(c)) for c in criteria]
    meta = {"dataset": dataset_label, "n_rows": table.n_rows,
            "seed": split_spec.seed, "repeats": split_spec.n_repeats,
            "train_fraction": split_spec.train_fraction, "k_max": k_max,
            "bins": n_bins, "knn_k": knn_k, "estimator": estimator}
    return EvalReport(labels, errs, meta)
