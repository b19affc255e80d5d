"""Scoring functions for sequential forward selection.

Each score is a pure function of (candidate k, selected set S, target) over an
EstimatorContext.  With an empty S every criterion falls back to the plain
relevance I(Xk;Y), so all criteria agree on the first selected feature.
High-order variants fall back down the chain (e.g. JMI-4 -> JMI-3 -> JMI ->
relevance) while S is too small for their sums to be nonempty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

from .estimators import TARGET, EstimatorContext

KINDS = ("mim", "mifs", "mrmr", "jmi", "disr", "cmim", "relax-mrmr",
         "jmi3", "jmi4", "cmim3", "cmim4", "hocmim")

#: criteria that accept a beta override (MIFS weight)
_BETA_KINDS = ("mifs",)
#: criteria that accept the order/epsilon/nmax/adaptive knobs
_HOCMIM_KINDS = ("hocmim",)


class CriterionError(ValueError):
    """Unknown criterion name or parameters not valid for the kind."""


def score_generic(ctx: EstimatorContext, k: int, S, beta: float, gamma: float) -> float:
    """I(Xk;Y) - beta * sum I(Xj;Xk) + gamma * sum I(Xj;Xk|Y) over j in S."""
    if k in S:
        raise ValueError(f"candidate {k} already selected")
    score = ctx.mutual_information([k], [TARGET])
    if beta != 0.0:
        score -= beta * sum(ctx.mutual_information([j], [k]) for j in S)
    if gamma != 0.0:
        score += gamma * sum(ctx.conditional_mutual_information([j], [k], [TARGET])
                             for j in S)
    return score


def score_mim(ctx, k, S) -> float:
    if k in S:
        raise ValueError(f"candidate {k} already selected")
    return ctx.mutual_information([k], [TARGET])


def score_mifs(ctx, k, S, beta: float = 1.0) -> float:
    return score_generic(ctx, k, S, beta=beta, gamma=0.0)


def score_mrmr(ctx, k, S) -> float:
    b = 1.0 / len(S) if S else 0.0
    return score_generic(ctx, k, S, beta=b, gamma=0.0)


def score_jmi(ctx, k, S) -> float:
    w = 1.0 / len(S) if S else 0.0
    return score_generic(ctx, k, S, beta=w, gamma=w)


def score_disr(ctx, k, S) -> float:
    """Sum over S of I(Xk,Xj;Y) / H(Xk,Xj,Y); 0/0 terms contribute 0."""
    if k in S:
        raise ValueError(f"candidate {k} already selected")
    if not S:
        return ctx.mutual_information([k], [TARGET])
    total = 0.0
    for j in S:
        num = ctx.mutual_information([k, j], [TARGET])
        den = ctx.entropy([k, j, TARGET])
        if den > 0.0:
            total += num / den
    return total


def score_cmim(ctx, k, S) -> float:
    """min over j in S of I(Xk;Y|Xj)."""
    if k in S:
        raise ValueError(f"candidate {k} already selected")
    if not S:
        return ctx.mutual_information([k], [TARGET])
    return min(ctx.conditional_mutual_information([k], [TARGET], [j]) for j in S)


def score_relax_mrmr(ctx, k, S) -> float:
    """JMI-weighted generic score minus the averaged triple interaction term."""
    if k in S:
        raise ValueError(f"candidate {k} already selected")
    score = score_jmi(ctx, k, S)
    if len(S) >= 2:
        eta = 1.0 / (len(S) * (len(S) - 1))
        score -= eta * sum(ctx.conditional_mutual_information([k], [i], [j])
                           for j in S for i in S if i != j)
    return score


def score_jmi_high(ctx, k, S, order: int) -> float:
    """Unnormalized ordered-tuple sums of joint MI with the target.

    order 3 sums I(Xj,Xi,Xk;Y) over ordered distinct pairs, order 4 sums over
    ordered distinct triples.  Falls back one order down while |S| < order-1.
    """
    if order not in (3, 4):
        raise ValueError("order must be 3 or 4")
    if k in S:
        raise ValueError(f"candidate {k} already selected")
    if len(S) < order - 1:
        if order == 4:
            return score_jmi_high(ctx, k, S, 3) if len(S) >= 2 else score_jmi(ctx, k, S)
        return score_jmi(ctx, k, S)
    return sum(ctx.mutual_information(list(tup) + [k], [TARGET])
               for tup in permutations(S, order - 1))


def score_cmim_high(ctx, k, S, order: int) -> float:
    """min over (order-1)-subsets Z of S of I(Xk;Y|Z), with fallback chain."""
    if order not in (3, 4):
        raise ValueError("order must be 3 or 4")
    if k in S:
        raise ValueError(f"candidate {k} already selected")
    if len(S) < order - 1:
        if order == 4:
            return score_cmim_high(ctx, k, S, 3) if len(S) >= 2 else score_cmim(ctx, k, S)
        return score_cmim(ctx, k, S)
    return min(ctx.conditional_mutual_information([k], [TARGET], list(z))
               for z in combinations(S, order - 1))


@dataclass(frozen=True)
class Criterion:
    """A named score function plus its parameters.

    ``beta`` applies to MIFS only.  ``n`` (fixed order), ``epsilon_star``,
    ``n_max``, and ``adaptive`` apply to HOCMIM only; kinds that take no
    parameters reject overrides.
    """

    kind: str
    beta: float | None = None
    n: int | None = None
    epsilon_star: float = 0.01
    n_max: int = 15
    adaptive: bool = field(default=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CriterionError(f"unknown criterion {self.kind!r} (choose from {', '.join(KINDS)})")
        if self.beta is not None and self.kind not in _BETA_KINDS:
            raise CriterionError(f"{self.kind} does not take beta")
        if self.beta is not None and not 0.0 <= self.beta:
            raise CriterionError("beta must be >= 0")
        if self.kind not in _HOCMIM_KINDS and (self.n is not None or self.adaptive):
            raise CriterionError(f"{self.kind} does not take order parameters")
        if self.kind in _HOCMIM_KINDS:
            if not 0.0 <= self.epsilon_star <= 1.0:
                raise CriterionError("epsilon must be in [0, 1]")
            if self.n_max < 1:
                raise CriterionError("nmax must be >= 1")
            if self.n is not None and not 1 <= self.n <= self.n_max:
                raise CriterionError(f"fixed order must be in [1, {self.n_max}]")

    @property
    def label(self) -> str:
        if self.kind == "hocmim":
            return f"hocmim-n{self.n}" if self.n is not None else "hocmim"
        if self.kind == "mifs" and self.beta is not None:
            return f"mifs-b{self.beta:g}"
        return self.kind

    def score(self, ctx: EstimatorContext, k: int, S) -> float:
        kind = self.kind
        if kind == "mim":
            return score_mim(ctx, k, S)
        if kind == "mifs":
            return score_mifs(ctx, k, S, beta=1.0 if self.beta is None else self.beta)
        if kind == "mrmr":
            return score_mrmr(ctx, k, S)
        if kind == "jmi":
            return score_jmi(ctx, k, S)
        if kind == "disr":
            return score_disr(ctx, k, S)
        if kind == "cmim":
            return score_cmim(ctx, k, S)
        if kind == "relax-mrmr":
            return score_relax_mrmr(ctx, k, S)
        if kind == "jmi3":
            return score_jmi_high(ctx, k, S, 3)
        if kind == "jmi4":
            return score_jmi_high(ctx, k, S, 4)
        if kind == "cmim3":
            return score_cmim_high(ctx, k, S, 3)
        if kind == "cmim4":
            return score_cmim_high(ctx, k, S, 4)
        # hocmim dispatches through the selection engine (it needs a trace)
        from .hocmim import HocmimParams, hocmim_score
        return hocmim_score(ctx, k, S, HocmimParams.from_criterion(self))[0]


def parse_criterion(name: str, beta: float | None = None, n: int | None = None,
                    epsilon_star: float = 0.01, n_max: int = 15,
                    adaptive: bool = False) -> Criterion:
    """Build a Criterion from a CLI-style name.

    Accepts the plain kind names plus an inline fixed-order suffix for the
    high-order search, e.g. ``hocmim-n2``.  Dashless spellings of the
    high-order baselines (``cmim-3`` for ``cmim3``) are normalized.
    """
    key = name.strip().lower()
    for alias, canon in (("cmim-3", "cmim3"), ("cmim-4", "cmim4"),
                         ("jmi-3", "jmi3"), ("jmi-4", "jmi4"),
                         ("relaxmrmr", "relax-mrmr"), ("relax_mrmr", "relax-mrmr")):
        if key == alias:
            key = canon
    if key.startswith("hocmim-n"):
        try:
            n = int(key[len("hocmim-n"):])
        except ValueError:
            raise CriterionError(f"bad fixed-order suffix in {name!r}") from None
        key = "hocmim"
    if key == "hocmim" and n is None and not adaptive:
        adaptive = True          # the adaptive order search is the default
    return Criterion(kind=key, beta=beta, n=n, epsilon_star=epsilon_star,
                     n_max=n_max, adaptive=adaptive)
