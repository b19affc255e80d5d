import numpy as np
import pytest

from infosel.criteria import (Criterion, CriterionError, parse_criterion,
                              score_cmim, score_cmim_high, score_disr,
                              score_generic, score_jmi, score_jmi_high,
                              score_mrmr, score_relax_mrmr)
from infosel.data import DiscreteDataset, toy_dataset
from infosel.estimators import TARGET, EstimatorContext
from infosel.hocmim import HocmimParams, hocmim_score

from util import ref_cmi, ref_entropy, ref_mi, columns

TOL = 1e-9


@pytest.fixture
def ctx():
    return EstimatorContext(toy_dataset())


def random_ctx(rng, d=5, n=40):
    codes = rng.integers(0, 3, size=(n, d)).astype(np.int64)
    target = rng.integers(0, 2, size=n).astype(np.int64)
    target[:2] = [0, 1]
    ds = DiscreteDataset(codes, (3,) * d, target, 2, tuple(f"f{i}" for i in range(d)))
    return EstimatorContext(ds)


def columns_of(ctx, idxs):
    return [ctx._target if j == -1 else ctx._codes[:, j] for j in idxs]


class TestGeneric:
    def test_empty_s_is_relevance(self, ctx):
        for beta, gamma in ((0, 0), (1, 0), (0.5, 2)):
            assert score_generic(ctx, 2, [], beta, gamma) == pytest.approx(
                0.256426, abs=1e-5)

    def test_zero_weights_give_mim(self, ctx):
        for S in ([0], [0, 1], [0, 1, 3]):
            assert score_generic(ctx, 4, S, 0.0, 0.0) == pytest.approx(
                ctx.mutual_information([4], [TARGET]), abs=TOL)

    def test_toy_x2_given_x3_unit_weights(self, ctx):
        # equals I(X2;Y) - R1(X2,{X3},Y) since |S| = 1
        assert score_generic(ctx, 1, [2], 1.0, 1.0) == pytest.approx(0.190013, abs=1e-5)
        assert score_generic(ctx, 1, [2], 1.0, 1.0) == pytest.approx(0.19, abs=0.005)

    def test_candidate_in_s_rejected(self, ctx):
        with pytest.raises(ValueError):
            score_generic(ctx, 2, [2], 1.0, 0.0)

    def test_matches_reference_sum(self):
        rng = np.random.default_rng(0)
        c = random_ctx(rng)
        k, S, beta, gamma = 0, [1, 3], 0.7, 0.3
        want = ref_mi(columns_of(c, [k]), columns_of(c, [-1]))
        want -= beta * sum(ref_mi(columns_of(c, [j]), columns_of(c, [k])) for j in S)
        want += gamma * sum(ref_cmi(columns_of(c, [j]), columns_of(c, [k]),
                                    columns_of(c, [-1])) for j in S)
        assert score_generic(c, k, S, beta, gamma) == pytest.approx(want, abs=TOL)


class TestPresets:
    def test_mrmr_averages_redundancy(self, ctx):
        k, S = 4, [1, 2]
        want = ctx.mutual_information([k], [TARGET]) - 0.5 * (
            ctx.mutual_information([1], [k]) + ctx.mutual_information([2], [k]))
        assert score_mrmr(ctx, k, S) == pytest.approx(want, abs=TOL)

    def test_jmi_averages_both_terms(self, ctx):
        k, S = 4, [1, 2]
        assert score_jmi(ctx, k, S) == pytest.approx(
            score_generic(ctx, k, S, 0.5, 0.5), abs=TOL)


class TestDisr:
    def test_empty_s_fallback(self, ctx):
        assert score_disr(ctx, 2, []) == pytest.approx(0.256426, abs=1e-5)

    def test_toy_term_matches_reference(self, ctx):
        ds = toy_dataset()
        want = ref_mi(columns(ds, [1, 2]), columns(ds, [-1])) / \
            ref_entropy(*columns(ds, [1, 2, -1]))
        assert score_disr(ctx, 1, [2]) == pytest.approx(want, abs=TOL)

    def test_zero_entropy_term_contributes_zero(self):
        codes = np.zeros((6, 2), np.int64)
        target = np.zeros(6, np.int64)
        ds = DiscreteDataset(codes, (1, 1), target, 1, ("a", "b"))
        c = EstimatorContext(ds)
        assert score_disr(c, 0, [1]) == 0.0


class TestCmim:
    def test_toy_single_conditioner(self, ctx):
        assert score_cmim(ctx, 1, [2]) == pytest.approx(0.190013, abs=1e-5)

    def test_duplicate_in_s_zeroes_score(self):
        rng = np.random.default_rng(1)
        col = rng.integers(0, 2, 30)
        codes = np.column_stack([col, col, rng.integers(0, 2, 30)]).astype(np.int64)
        target = rng.integers(0, 2, 30).astype(np.int64)
        target[:2] = [0, 1]
        ds = DiscreteDataset(codes, (2, 2, 2), target, 2, ("a", "b", "c"))
        c = EstimatorContext(ds)
        assert score_cmim(c, 0, [1, 2]) == pytest.approx(0.0, abs=TOL)

    def test_equals_fixed_order_one_search(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            c = random_ctx(rng, d=5, n=32)
            k = int(rng.integers(0, 5))
            S = [j for j in range(5) if j != k][:int(rng.integers(1, 5))]
            got, _ = hocmim_score(c, k, S, HocmimParams(n=1))
            assert got == pytest.approx(score_cmim(c, k, S), abs=TOL)


class TestRelaxMrmr:
    def test_small_s_equals_jmi(self, ctx):
        assert score_relax_mrmr(ctx, 4, []) == pytest.approx(
            score_jmi(ctx, 4, []), abs=TOL)
        assert score_relax_mrmr(ctx, 4, [2]) == pytest.approx(
            score_jmi(ctx, 4, [2]), abs=TOL)

    def test_toy_triple_sum_oracle(self, ctx):
        ds = toy_dataset()
        k, S = 0, [1, 2]
        want = score_jmi(ctx, k, S)
        eta = 1.0 / (2 * 1)
        want -= eta * sum(ref_cmi(columns(ds, [k]), columns(ds, [i]), columns(ds, [j]))
                          for j in S for i in S if i != j)
        assert score_relax_mrmr(ctx, k, S) == pytest.approx(want, abs=TOL)


class TestJmiHigh:
    def test_fallback_chain(self, ctx):
        assert score_jmi_high(ctx, 4, [2], 3) == pytest.approx(
            score_jmi(ctx, 4, [2]), abs=TOL)
        assert score_jmi_high(ctx, 4, [1, 2], 4) == pytest.approx(
            score_jmi_high(ctx, 4, [1, 2], 3), abs=TOL)
        assert score_jmi_high(ctx, 4, [], 3) == pytest.approx(
            ctx.mutual_information([4], [TARGET]), abs=TOL)

    def test_toy_ordered_pair_sum(self, ctx):
        # two ordered pairs of {X2,X3} contribute the same joint MI
        want = 2 * ctx.mutual_information([1, 2, 4], [TARGET])
        assert score_jmi_high(ctx, 4, [1, 2], 3) == pytest.approx(want, abs=TOL)

    def test_order_three_reference(self):
        rng = np.random.default_rng(3)
        c = random_ctx(rng, d=5)
        k, S = 0, [1, 2, 4]
        want = sum(ref_mi(columns_of(c, [j, i, k]), columns_of(c, [-1]))
                   for j in S for i in S if i != j)
        assert score_jmi_high(c, k, S, 3) == pytest.approx(want, abs=TOL)


class TestCmimHigh:
    def test_fallback_chain(self, ctx):
        assert score_cmim_high(ctx, 4, [2], 3) == pytest.approx(
            score_cmim(ctx, 4, [2]), abs=TOL)
        assert score_cmim_high(ctx, 4, [1, 2], 4) == pytest.approx(
            score_cmim_high(ctx, 4, [1, 2], 3), abs=TOL)

    def test_toy_pair_conditioner(self, ctx):
        got = score_cmim_high(ctx, 3, [1, 2], 3)
        assert got == pytest.approx(0.249022, abs=1e-5)
        assert got == pytest.approx(0.25, abs=0.005)

    def test_order_chain_is_not_monotone(self, ctx):
        # conditioning on more variables can raise CMI, so the min over pair
        # conditioners may exceed the min over single conditioners; the parity
        # structure of the demonstration table exhibits exactly that
        k, S = 0, [1, 2, 3]
        c1 = score_cmim(ctx, k, S)
        c3 = score_cmim_high(ctx, k, S, 3)
        assert c1 == pytest.approx(0.049022, abs=1e-5)
        assert c3 == pytest.approx(0.085475, abs=1e-5)
        assert c3 > c1


class TestCriterionObject:
    def test_unknown_kind_rejected(self):
        with pytest.raises(CriterionError, match="unknown criterion"):
            Criterion(kind="fisher")

    def test_param_overrides_rejected_where_meaningless(self):
        with pytest.raises(CriterionError):
            Criterion(kind="cmim", beta=0.5)
        with pytest.raises(CriterionError):
            Criterion(kind="jmi", n=2)

    def test_hocmim_param_ranges(self):
        with pytest.raises(CriterionError):
            Criterion(kind="hocmim", n=20, n_max=15)
        with pytest.raises(CriterionError):
            Criterion(kind="hocmim", epsilon_star=1.5)

    def test_parse_names_and_suffix(self):
        assert parse_criterion("cmim-3").kind == "cmim3"
        assert parse_criterion("JMI").kind == "jmi"
        c = parse_criterion("hocmim-n2")
        assert c.kind == "hocmim" and c.n == 2
        assert parse_criterion("hocmim").adaptive
        with pytest.raises(CriterionError):
            parse_criterion("hocmim-nx")
        with pytest.raises(CriterionError):
            parse_criterion("gini")

    def test_labels(self):
        assert parse_criterion("hocmim-n2").label == "hocmim-n2"
        assert parse_criterion("mrmr").label == "mrmr"


def test_first_step_agreement_across_criteria():
    ds = toy_dataset()
    c = EstimatorContext(ds)
    rel = c.mutual_information([2], [TARGET])
    for name in ("mim", "mifs", "mrmr", "jmi", "disr", "cmim", "relax-mrmr",
                 "jmi3", "jmi4", "cmim3", "cmim4", "hocmim"):
        crit = parse_criterion(name)
        assert crit.score(c, 2, []) == pytest.approx(rel, abs=TOL), name
