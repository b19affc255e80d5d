"""Greedy high-order conditional-mutual-information scoring.

The exact CMI of a candidate k against the selected set S decomposes as
I(Xk;Y|S) = I(Xk;Y) - R(Xk,S,Y), where the total redundancy
R = I(Xk;S) - I(Xk;S|Y) carries all the high-order structure.  R is
approximated on an order-n representative subset Z of S, built greedily one
element at a time by maximizing the redundancy increment

    dR_j(Z*) = I(Xk;Z*|Z_{<j}) - I(Xk;Z*|Y,Z_{<j}),

which telescopes so that the running sum equals R(Xk,Z,Y) exactly.  The order
is either fixed or chosen adaptively: the search stops once the redundancy is
within epsilon_star (relative) of its upper bound I(Xk;Y), at n_max, or when
S is exhausted.

Fixed-order mode doubles as the instrumented mode for complexity accounting:
every one of its n sweeps evaluates the increment for all of S (elements
already in Z contribute exactly zero and are excluded from the argmax), so
per candidate it costs exactly 4*n*|S| MI terms plus one relevance term and
the counter matches the closed-form prediction in selection.predicted_mi_calls.
Adaptive mode only evaluates the fresh pool and stops early, so its counts
are bounded by the fixed-mode formula at n_max.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .estimators import TARGET, EstimatorContext

#: relevance below this is treated as zero for the normalized stopping rule
ZERO_RELEVANCE = 1e-12

#: refuse exhaustive subset scans beyond this many subsets (test oracle guard)
EXHAUSTIVE_LIMIT = 200_000

STOP_THRESHOLD = "threshold"
STOP_ORDER_LIMIT = "order_limit"
STOP_EXHAUSTED = "s_exhausted"


@dataclass(frozen=True)
class HocmimParams:
    """Search knobs: fixed order ``n``, or adaptive when ``n`` is None."""

    n: int | None = None
    epsilon_star: float = 0.01
    n_max: int = 15

    def __post_init__(self):
        if not 0.0 <= self.epsilon_star <= 1.0:
            raise ValueError("epsilon_star must be in [0, 1]")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.n is not None and not 1 <= self.n <= self.n_max:
            raise ValueError("fixed order must satisfy 1 <= n <= n_max")

    @property
    def adaptive(self) -> bool:
        return self.n is None

    @classmethod
    def from_criterion(cls, criterion) -> "HocmimParams":
        return cls(n=criterion.n, epsilon_star=criterion.epsilon_star,
                   n_max=criterion.n_max)


@dataclass
class RedundancyTrace:
    """Record of one greedy search: picks, increments, running redundancy."""

    candidate: int
    z: list[int]
    increments: list[float]
    redundancy: float
    stop_reason: str

    @property
    def order(self) -> int:
        return len(self.z)

    def to_dict(self) -> dict:
        return {"candidate": self.candidate, "z": list(self.z),
                "increments": list(self.increments),
                "redundancy": self.redundancy, "stop_reason": self.stop_reason}


def total_redundancy(ctx: EstimatorContext, k: int, z_set) -> float:
    """R(Xk,Z,Y) = I(Xk;Z) - I(Xk;Z|Y) on the joint encoding of Z."""
    z_set = list(z_set)
    if k in z_set:
        raise ValueError(f"candidate {k} inside its own representative set")
    if not z_set:
        return 0.0
    return (ctx.mutual_information([k], z_set)
            - ctx.conditional_mutual_information([k], z_set, [TARGET]))


def _increment(ctx, k, j, z_prefix) -> float:
    return (ctx.conditional_mutual_information([k], [j], z_prefix)
            - ctx.conditional_mutual_information([k], [j], z_prefix + [TARGET]))


def greedy_representative_set(ctx: EstimatorContext, k: int, S, params: HocmimParams,
                              relevance: float | None = None) -> RedundancyTrace:
    """Build the representative set for candidate k by greedy increments.

    Ties in the argmax go to the lowest feature index.  Increments may be
    negative once the positive ones are exhausted; they are accepted as-is.
    """
    S = list(S)
    if k in S:
        raise ValueError(f"candidate {k} already selected")
    if not S:
        raise ValueError("selected set is empty")
    if params.adaptive and relevance is None:
        relevance = ctx.mutual_information([k], [TARGET])

    z: list[int] = []
    increments: list[float] = []
    redundancy = 0.0
    n_sweeps = params.n if not params.adaptive else min(params.n_max, len(S))
    threshold_fired = False

    for _ in range(n_sweeps):
        pool = S if not params.adaptive else [j for j in S if j not in z]
        if not pool:
            break
        best_j, best_d = None, None
        for j in sorted(pool):
            d = _increment(ctx, k, j, z)
            if j in z:
                continue                      # fixed mode: evaluated for the count only
            if best_d is None or d > best_d:
                best_j, best_d = j, d
        if best_j is None:
            continue                          # fixed n > |S|: z is full, sweeps go on
        z.append(best_j)
        increments.append(best_d)
        redundancy += best_d
        if params.adaptive and relevance > ZERO_RELEVANCE:
            if 1.0 - redundancy / relevance < params.epsilon_star:
                threshold_fired = True
                break
    if threshold_fired:
        stop = STOP_THRESHOLD
    elif len(z) == len(S):
        stop = STOP_EXHAUSTED
    else:
        stop = STOP_ORDER_LIMIT
    return RedundancyTrace(k, z, increments, redundancy, stop)


def hocmim_score(ctx: EstimatorContext, k: int, S,
                 params: HocmimParams) -> tuple[float, RedundancyTrace]:
    """Score = I(Xk;Y) - R_m from the greedy trace; plain relevance when S is empty."""
    S = list(S)
    if k in S:
        raise ValueError(f"candidate {k} already selected")
    relevance = ctx.mutual_information([k], [TARGET])
    if not S:
        return relevance, RedundancyTrace(k, [], [], 0.0, STOP_EXHAUSTED)
    trace = greedy_representative_set(ctx, k, S, params, relevance=relevance)
    return relevance - trace.redundancy, trace


def hocmim_score_exhaustive(ctx: EstimatorContext, k: int, S, n: int) -> float:
    """I(Xk;Y) minus the max of R over all size-n subsets of S (test oracle).

    Equals min over those subsets of I(Xk;Y|Z).  Guarded against combinatorial
    blowup; meant for small S.
    """
    S = list(S)
    if k in S:
        raise ValueError(f"candidate {k} already selected")
    if not 1 <= n <= len(S):
        raise ValueError("need 1 <= n <= |S|")
    if comb(len(S), n) > EXHAUSTIVE_LIMIT:
        raise ValueError(f"C({len(S)},{n}) subsets exceeds the exhaustive-search guard")
    relevance = ctx.mutual_information([k], [TARGET])
    best = max(total_redundancy(ctx, k, list(z)) for z in combinations(S, n))
    return relevance - best


def run_hocmim(dataset, K: int, params: HocmimParams | None = None,
               rows=None, estimator: str = "plugin"):
    """Select K features with the high-order criterion (see selection.run_sfs)."""
    from .criteria import Criterion
    from .selection import run_sfs
    params = params or HocmimParams()
    crit = Criterion(kind="hocmim", n=params.n, epsilon_star=params.epsilon_star,
                     n_max=params.n_max, adaptive=params.adaptive)
    return run_sfs(dataset, crit, K, rows=rows, estimator=estimator)
