import json
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from padic_dyson.errors import InsufficientSamples
from padic_dyson.linalg import PAdicMatrix
from padic_dyson.verify import (
    VerificationReport,
    check_lemma_one_jump,
    chi_square_gof,
    chi_square_two_sample,
    lemma_row,
    parallel_map,
    tv_distance,
    verify_generators,
    verify_lemma,
    verify_one_jump,
    verify_reflection_equivalence,
)

LAW = {"a": 0.4, "b": 0.3, "c": 0.2, "d": 0.1}


def draw_hist(rng, law, n):
    keys = list(law)
    counts = rng.multinomial(n, [law[k] for k in keys])
    return dict(zip(keys, counts.tolist()))


def test_lemma_examples():
    I = PAdicMatrix.identity(2, 3, 8)
    assert lemma_row(I, (2, 0)) == 1 and check_lemma_one_jump(I, (2, 0))
    J = PAdicMatrix.from_integers([[0, 1], [1, 0]], 3, 8)
    assert lemma_row(J, (2, 0)) == 2 and check_lemma_one_jump(J, (2, 0))


def test_lemma_tied_block():
    # units in rows 2 and 3 of column 1; the last unit row is in the block {2, 3}
    # whose bottom row 3 loses the box, keeping the result weakly decreasing
    A = PAdicMatrix.from_integers([[3, 1, 0], [1, 0, 1], [1, 1, 0]], 3, 10)
    assert lemma_row(A, (4, 1, 1)) == 3
    assert lemma_row(A, (4, 2, 1)) == 3
    B = PAdicMatrix.from_integers([[1, 1, 0], [1, 0, 1], [3, 1, 1]], 3, 10)
    assert lemma_row(B, (4, 1, 1)) == 3 and check_lemma_one_jump(B, (4, 1, 1))
    assert lemma_row(B, (4, 4, 1)) == 2 and check_lemma_one_jump(B, (4, 4, 1))
    assert check_lemma_one_jump(A, (4, 1, 1))


def test_verify_lemma_small():
    r = verify_lemma(3, 3, 300, 5)
    assert r.passed and r.stats["failures"] == 0


def test_chi_square_exact_counts():
    stat, dof, pval = chi_square_gof({k: 1000 * v for k, v in LAW.items()}, LAW)
    assert stat == pytest.approx(0.0, abs=1e-9)
    assert dof == 3
    assert pval == pytest.approx(1.0)


def test_chi_square_matches_scipy():
    obs = {"a": 390, "b": 310, "c": 205, "d": 95}
    stat, dof, pval = chi_square_gof(obs, LAW)
    ref = stats.chisquare([390, 310, 205, 95], [400, 300, 200, 100])
    assert stat == pytest.approx(ref.statistic)
    assert pval == pytest.approx(ref.pvalue)


def test_chi_square_pools_rare_cells():
    law = {"a": 0.5, "b": 0.49, "c": 0.005, "d": 0.005}
    _, dof, _ = chi_square_gof({"a": 50, "b": 49, "c": 1}, law)
    assert dof == 1


def test_chi_square_insufficient():
    with pytest.raises(InsufficientSamples):
        chi_square_gof({}, LAW)
    with pytest.raises(InsufficientSamples):
        chi_square_gof({"a": 3, "b": 2}, {"a": 0.5, "b": 0.5})


def test_chi_square_unexpected_state():
    _, _, pval = chi_square_gof({"a": 500, "b": 499, "z": 1}, {"a": 0.5, "b": 0.5})
    assert pval == 0.0
    # with unassigned mass the stray state is pooled instead
    _, dof, pval = chi_square_gof({"a": 500, "b": 499, "z": 1}, {"a": 0.495, "b": 0.495})
    assert dof == 2 and pval > 0.001


def test_chi_square_calibration():
    # under the null the rejection rate at level alpha matches alpha within binomial error
    rng = np.random.default_rng(2024)
    reps = 200
    pvals = np.array([chi_square_gof(draw_hist(rng, LAW, 2000), LAW)[2] for _ in range(reps)])
    for alpha in (0.05, 0.001):
        rejections = int(np.sum(pvals < alpha))
        assert stats.binom.sf(rejections - 1, reps, alpha) > 1e-3, (alpha, rejections)
    two = np.array([chi_square_two_sample(draw_hist(rng, LAW, 2000), draw_hist(rng, LAW, 3000))[2]
                    for _ in range(reps)])
    assert stats.binom.sf(int(np.sum(two < 0.05)) - 1, reps, 0.05) > 1e-3
    # p-values are roughly uniform
    assert stats.kstest(pvals, "uniform").pvalue > 1e-3


def test_chi_square_power():
    rng = np.random.default_rng(7)
    swapped = dict(LAW, a=LAW["b"], b=LAW["a"])
    hist = draw_hist(rng, swapped, 100_000)
    assert chi_square_gof(hist, LAW)[2] < 1e-6
    assert chi_square_two_sample(hist, draw_hist(rng, LAW, 100_000))[2] < 1e-6


def test_tv_distance():
    assert tv_distance({"a": 3, "b": 1}, {"a": 6, "b": 2}) == 0.0
    assert tv_distance({"a": 5}, {"b": 2}) == 1.0
    with pytest.raises(InsufficientSamples):
        tv_distance({}, {"a": 1})


def test_tv_resampling_calibration():
    rng = np.random.default_rng(3)
    law = {i: w for i, w in enumerate(rng.dirichlet(np.ones(20)))}
    tvs = [tv_distance(draw_hist(rng, law, 100_000), draw_hist(rng, law, 100_000)) for _ in range(20)]
    assert max(tvs) <= 0.02


def test_report_pass_is_pure():
    r = VerificationReport("x", {"a": 1}, {"s": 0.5}, {"t": 0.1}, [("s", ">", "t")], samples=3, wall_time=1.5)
    assert r.passed
    d = r.to_json()
    assert set(d) == {"name", "params", "stats", "thresholds", "samples", "pass"}
    r.stats["s"] = 0.01
    assert not r.passed
    assert "wall_time" in r.to_json(include_timing=True)


def test_generators_pass_and_fail():
    for N, p, K in [(2, 2, 6), (4, 3, 5)]:
        r = verify_generators(N, p, K)
        assert r.passed
        assert r.stats["row_sum_off_diagonal"] == "1/1"
    bad = verify_generators(2, 2, 6, literal_prefactor=True)
    assert not bad.passed
    assert bad.stats["row_sum_off_diagonal"] == "1/2"


def test_one_jump_small():
    r = verify_one_jump(2, 3, 4, 3000, 1)
    assert r.passed


def test_reflection_scalar_case():
    r = verify_reflection_equivalence(1, Fraction(1, 2), 2.0, 5000, 4)
    assert r.passed


def test_reports_reproducible():
    a = verify_reflection_equivalence(2, Fraction(1, 2), 1.0, 2000, 9)
    b = verify_reflection_equivalence(2, Fraction(1, 2), 1.0, 2000, 9)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


def _square(x):
    return x * x


def test_parallel_map_ordered():
    assert parallel_map(_square, range(20), threads=2) == [x * x for x in range(20)]
    assert parallel_map(_square, [3], threads=4) == [9]
