"""Sequential forward selection driving any criterion, with instrumentation.

The first feature is always the relevance argmax (one MI term per feature);
every later step scores all remaining candidates and takes the best, breaking
ties toward the lowest feature index.  MI-term counts are read off the
estimator counter per step, and ``predicted_mi_calls`` gives the exact
closed-form count for every criterion so the instrumentation can be verified
call-for-call in fixed-order mode.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from math import comb

from .data import DiscreteDataset
from .estimators import TARGET, EstimatorContext
from .hocmim import HocmimParams, RedundancyTrace, hocmim_score


@dataclass
class SelectionResult:
    """Ordered selections with per-step scores, traces, and MI-call counts."""

    order: list[int]
    names: list[str]
    scores: list[float]
    step_mi_calls: list[int]
    total_mi_calls: int
    criterion: str
    wall_time: float
    step_traces: list[RedundancyTrace | None] = field(default_factory=list)
    all_traces: list[dict[int, RedundancyTrace]] | None = None

    def to_dict(self) -> dict:
        d = {
            "criterion": self.criterion,
            "order": list(self.order),
            "names": list(self.names),
            "scores": list(self.scores),
            "step_mi_calls": list(self.step_mi_calls),
            "total_mi_calls": self.total_mi_calls,
            "wall_time_s": self.wall_time,
        }
        if any(t is not None for t in self.step_traces):
            d["step_traces"] = [t.to_dict() if t else None for t in self.step_traces]
        return d

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_rank_csv(self) -> str:
        lines = ["rank,feature"]
        lines += [f"{i + 1},{name}" for i, name in enumerate(self.names)]
        return "\n".join(lines) + "\n"

    def traces_json(self, indent: int = 2) -> str:
        """Full per-candidate trace dump (requires run_sfs(..., collect_traces=True))."""
        if self.all_traces is None:
            raise ValueError("run selection with collect_traces=True first")
        steps = [{str(k): tr.to_dict() for k, tr in step.items()} for step in self.all_traces]
        return json.dumps({"criterion": self.criterion, "steps": steps}, indent=indent)


def run_sfs(dataset: DiscreteDataset, criterion, K: int, rows=None,
            estimator: str = "plugin", collect_traces: bool = False,
            ctx: EstimatorContext | None = None) -> SelectionResult:
    """Select K features; ``criterion`` is a Criterion or any scorer with
    ``.score(ctx, k, S)`` and a ``.label``/``.kind``.
    """
    D = dataset.n_features
    if not 1 <= K <= D:
        raise ValueError(f"K must be in [1, {D}], got {K}")
    if ctx is None:
        ctx = EstimatorContext(dataset, rows=rows, estimator=estimator)
    kind = getattr(criterion, "kind", "custom")
    label = getattr(criterion, "label", kind)
    is_hocmim = kind == "hocmim"
    params = HocmimParams.from_criterion(criterion) if is_hocmim else None

    t0 = time.perf_counter()
    ctx.reset_and_read_counter()
    order: list[int] = []
    scores: list[float] = []
    step_calls: list[int] = []
    step_traces: list[RedundancyTrace | None] = []
    all_traces: list[dict[int, RedundancyTrace]] = []

    # step 1: relevance argmax, shared by every criterion
    best_k, best_s = None, None
    for k in range(D):
        s = ctx.mutual_information([k], [TARGET])
        if best_s is None or s > best_s:
            best_k, best_s = k, s
    order.append(best_k)
    scores.append(best_s)
    step_calls.append(ctx.reset_and_read_counter())
    step_traces.append(None)
    if collect_traces:
        all_traces.append({})

    while len(order) < K:
        best_k, best_s, best_tr = None, None, None
        traces_here: dict[int, RedundancyTrace] = {}
        for k in range(D):
            if k in order:
                continue
            if is_hocmim:
                s, tr = hocmim_score(ctx, k, order, params)
                if collect_traces:
                    traces_here[k] = tr
            else:
                s, tr = criterion.score(ctx, k, order), None
            if best_s is None or s > best_s:
                best_k, best_s, best_tr = k, s, tr
        order.append(best_k)
        scores.append(best_s)
        step_calls.append(ctx.reset_and_read_counter())
        step_traces.append(best_tr)
        if collect_traces:
            all_traces.append(traces_here)

    names = [dataset.feature_names[j] for j in order]
    return SelectionResult(order, names, scores, step_calls, sum(step_calls),
                           label, time.perf_counter() - t0, step_traces,
                           all_traces if collect_traces else None)


def _per_candidate_calls(kind: str, s: int, n: int | None, n_max: int) -> int:
    """Exact MI terms one candidate costs at a step with s features selected."""
    if kind == "mim":
        return 1
    if kind in ("mifs", "mrmr"):
        return 1 + s
    if kind == "jmi":
        return 1 + 3 * s
    if kind == "disr":
        return s
    if kind == "cmim":
        return 2 * s
    if kind == "relax-mrmr":
        return 1 + 3 * s + 2 * s * (s - 1)
    if kind == "jmi3":
        return s * (s - 1) if s >= 2 else 1 + 3 * s
    if kind == "jmi4":
        if s >= 3:
            return s * (s - 1) * (s - 2)
        return s * (s - 1) if s == 2 else 1 + 3 * s
    if kind == "cmim3":
        return 2 * comb(s, 2) if s >= 2 else 2 * s
    if kind == "cmim4":
        if s >= 3:
            return 2 * comb(s, 3)
        return 2 * comb(s, 2) if s == 2 else 2 * s
    if kind == "hocmim":
        order = n if n is not None else min(n_max, s)
        return 1 + 4 * order * s
    raise ValueError(f"no call model for criterion kind {kind!r}")


def predicted_mi_calls(criterion, K: int, D: int, n: int | None = None) -> int:
    """Closed-form MI-term count for a K-step selection over D features.

    Mirrors the implementation exactly: step 1 costs D relevance terms; at the
    step with s features already selected, each of the D-s remaining
    candidates costs the per-criterion amount (for the high-order search in
    fixed-n mode: 1 relevance term plus n sweeps over all s selected features
    at two CMI evaluations, 4 MI terms, per feature).  In adaptive mode the
    search stops early, so the value returned (at n_max) is an upper bound
    rather than an exact count.
    """
    if K < 1 or D < 1 or K > D:
        raise ValueError("need 1 <= K <= D")
    kind = getattr(criterion, "kind", criterion)
    if n is None:
        n = getattr(criterion, "n", None)
    n_max = getattr(criterion, "n_max", 15)
    total = D
    for s in range(1, K):
        total += (D - s) * _per_candidate_calls(kind, s, n, n_max)
    return total


def predicted_hocmim_split(K: int, D: int, n: int) -> tuple[int, int]:
    """(relevance part, greedy-search part) of the fixed-n count."""
    relevance = D + sum(D - s for s in range(1, K))
    search = sum((D - s) * 4 * n * s for s in range(1, K))
    return relevance, search
