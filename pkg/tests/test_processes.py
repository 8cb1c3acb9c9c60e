import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from padic_dyson.errors import TruncationTooSmall
from padic_dyson.linalg import Signature
from padic_dyson.processes import (
    GeneratorMatrix,
    RateParams,
    Trajectory,
    a_row,
    b_row,
    canonical_process,
    finite_time_distribution,
    generator_A,
    generator_B,
    matrix_walk_simulate,
    multi_time_distribution,
    one_jump_mc,
    one_jump_oracle,
    reflected_step,
    reflected_walk_simulate,
    state_space,
    time_scale,
)
from padic_dyson.sampling import SignatureMeasure

S = Signature


def literal_reflect(kappa, i):
    """Smallest d >= 0 with kappa + e_{i-d} weakly decreasing."""
    for d in range(i):
        parts = list(kappa)
        parts[i - 1 - d] += 1
        if all(a >= b for a, b in zip(parts, parts[1:])):
            return S(parts)
    raise AssertionError("no valid reflection")


def test_reflected_step_examples():
    k = S((6, 3, 3, 2, 0, 0))
    assert reflected_step(k, 2) == (6, 4, 3, 2, 0, 0)
    assert reflected_step(k, 3) == (6, 4, 3, 2, 0, 0)
    assert reflected_step(S((0, 0)), 2) == (1, 0)
    with pytest.raises(ValueError):
        reflected_step(k, 7)


@given(st.lists(st.integers(-3, 5), min_size=1, max_size=6), st.data())
def test_reflected_step_matches_literal_scan(parts, data):
    kappa = S(sorted(parts, reverse=True))
    i = data.draw(st.integers(1, len(kappa)))
    assert reflected_step(kappa, i) == literal_reflect(kappa, i)


def test_time_scale():
    assert time_scale(Fraction(1, 2), 2) == Fraction(4, 3)
    assert time_scale(Fraction(1, 3), 1) == 3
    assert RateParams.for_prime(5, 3).time_scale == Fraction(125, 31)
    with pytest.raises(ValueError):
        RateParams(Fraction(1), 2)


def test_generator_B_examples():
    t = Fraction(1, 2)
    assert b_row(S((0, 0)), t) == {S((1, 0)): t + t**2}
    assert b_row(S((1, 0)), t) == {S((2, 0)): t, S((1, 1)): t**2}
    G = generator_B(2, t, 4)
    assert G.entries[(S((0, 0)), S((0, 0)))] == -(t + t**2)
    for kappa in G.states:
        if kappa.size < 4:
            assert G.row_sum(kappa) == 0


def test_generator_A_examples():
    t = Fraction(1, 2)
    for N in (1, 2, 3, 4):
        assert a_row(S.zeros(N), t) == {S((1,) + (0,) * (N - 1)): 1}
    assert a_row(S((1, 0)), t) == {S((2, 0)): Fraction(2, 3), S((1, 1)): Fraction(1, 3)}
    G = generator_A(3, 3, 5)
    for kappa in G.states:
        assert G.entries[(kappa, kappa)] == -1
        assert G.row_sum(kappa) == 0


def test_literal_prefactor_breaks_conservation():
    for N, p in [(2, 2), (3, 3)]:
        t = Fraction(1, p)
        row = a_row(S.zeros(N), t, literal_prefactor=True)
        assert sum(row.values()) == 1 - t


@pytest.mark.parametrize("N,p", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_oracle_matches_generator_A(N, p):
    t = Fraction(1, p)
    for kappa in state_space(N, 6):
        oracle = one_jump_oracle(kappa, N, p)
        assert oracle == a_row(kappa, t)
        assert sum(oracle.values()) == 1


def test_oracle_examples():
    assert one_jump_oracle(S((0, 0)), 2, 2) == {S((1, 0)): 1}
    assert one_jump_oracle(S((1, 0)), 2, 2) == {S((2, 0)): Fraction(2, 3), S((1, 1)): Fraction(1, 3)}
    assert one_jump_oracle(S((2, 1, 0)), 3, 3) == {
        S((3, 1, 0)): Fraction(9, 13), S((2, 2, 0)): Fraction(3, 13), S((2, 1, 1)): Fraction(1, 13)}


@pytest.mark.parametrize("N,K", [(2, 6), (3, 6), (5, 4)])
def test_generator_proportionality(N, K):
    for p in (2, 3, 5):
        t = Fraction(1, p)
        c = time_scale(t, N)
        A, B = generator_A(N, p, K), generator_B(N, t, K)
        assert A.entries.keys() == B.entries.keys()
        for key, val in A.entries.items():
            assert val == c * B.entries[key]


def test_embedded_chain_equality():
    t = Fraction(1, 3)
    N = 3
    total = t * (1 - t**N) / (1 - t)
    for kappa in state_space(N, 5):
        assert {k: v / total for k, v in b_row(kappa, t).items()} == a_row(kappa, t)


def test_state_space():
    states = state_space(2, 3)
    assert states == [S((0, 0)), S((1, 0)), S((2, 0)), S((1, 1)), S((3, 0)), S((2, 1))]
    assert all(s[-1] >= 0 and s.size <= 5 for s in state_space(4, 5))


def test_generator_csv_round_trip():
    G = generator_A(2, 2, 3)
    text = G.to_csv()
    assert "1,0;2,0;2/3" in text.splitlines()
    back = GeneratorMatrix.from_csv(text, 2, 3)
    assert back.entries == G.entries


def test_one_jump_mc_forced_and_support():
    counts = one_jump_mc(S((0, 0)), 2, 3, 200, 1)
    assert counts == {S((1, 0)): 200}
    counts = one_jump_mc(S((2, 1, 0)), 3, 3, 300, 2)
    assert set(counts) <= set(one_jump_oracle(S((2, 1, 0)), 3, 3))


def test_one_jump_mc_frequency():
    n = 20_000
    counts = one_jump_mc(S((1, 0)), 2, 2, n, 5)
    q = 2 / 3
    assert abs(counts[S((2, 0))] / n - q) < 3 * math.sqrt(q * (1 - q) / n)


def _check_trajectory(tr: Trajectory):
    for (t0, a), (t1, b) in zip(tr.events, tr.events[1:]):
        assert t1 > t0
        assert b.size == a.size + 1
        assert all(x >= y for x, y in zip(b, a))


def test_trajectories_monotone():
    for s in range(30):
        _check_trajectory(canonical_process(3, 2, (3.0,), 4, sample=s))
        _check_trajectory(reflected_walk_simulate(3, Fraction(1, 2), (3.0,), 4, sample=s))


def test_first_jump():
    for s in range(30):
        tr = canonical_process(3, 3, (5.0,), 2, sample=s)
        if len(tr.events) > 1:
            assert tr.events[1][1] == (1, 0, 0)
        tr = reflected_walk_simulate(2, Fraction(1, 3), (5.0,), 2, sample=s)
        if len(tr.events) > 1:
            assert tr.events[1][1] == (1, 0)


def test_trivial_measure_never_moves():
    M = SignatureMeasure.point_mass((0, 0, 0))
    for s in range(5):
        tr = matrix_walk_simulate(3, 2, M, 2, (3.0,), 1, sample=s)
        assert tr.events == [(0.0, S((0, 0, 0)))]


def test_scalar_case_is_poisson():
    runs = 4000
    tau = 1.5
    counts = [canonical_process(1, 5, (tau,), 3, sample=s).state_at(tau)[0] for s in range(runs)]
    assert abs(np.mean(counts) - tau) < 4 * math.sqrt(tau / runs)


def test_determinism_and_precision_independence():
    a = canonical_process(2, 3, (1.0, 2.0), 7, sample=4)
    b = canonical_process(2, 3, (1.0, 2.0), 7, sample=4)
    c = canonical_process(2, 3, (1.0, 2.0), 7, sample=4, precision=60)
    assert a.events == b.events == c.events


def test_trajectory_json_round_trip():
    tr = reflected_walk_simulate(3, Fraction(1, 2), (4.0,), 9)
    d = tr.to_json()
    assert set(d) == {"N", "events"}
    assert Trajectory.from_json(d).events == tr.events


def test_record_time_validation():
    with pytest.raises(ValueError):
        reflected_walk_simulate(2, Fraction(1, 2), (2.0, 1.0), 1)
    with pytest.raises(ValueError):
        reflected_walk_simulate(2, Fraction(3, 2), (1.0,), 1)


def test_uniformization_examples():
    G = generator_A(2, 2, 12)
    law0 = finite_time_distribution(G, 1, 0.0, S((0, 0)))
    assert law0 == {S((0, 0)): 1.0}
    G1 = generator_A(1, 3, 30)
    law = finite_time_distribution(G1, 1, 2.0, S((0,)))
    for (k,), q in law.items():
        assert q == pytest.approx(stats.poisson.pmf(k, 2.0), abs=1e-13)
    law = finite_time_distribution(generator_A(3, 2, 14), 1, 1.0, S.zeros(3))
    assert law.total() + law.boundary_mass == pytest.approx(1.0, abs=1e-12)


def test_truncation_too_small():
    with pytest.raises(TruncationTooSmall):
        finite_time_distribution(generator_A(2, 2, 3), 1, 2.0, S((0, 0)))


def test_multi_time_consistency():
    G = generator_A(2, 2, 16)
    single = finite_time_distribution(G, 1, 0.5, S((0, 0)))
    joint1 = multi_time_distribution(G, 1, (0.5,), S((0, 0)))
    assert {k[0]: v for k, v in joint1.items()} == pytest.approx(dict(single), abs=1e-15)
    joint = multi_time_distribution(G, 1, (0.5, 1.0), S((0, 0)))
    marg: dict = {}
    for (a, _), q in joint.items():
        marg[a] = marg.get(a, 0.0) + q
    for k, q in single.items():
        assert marg.get(k, 0.0) == pytest.approx(q, abs=1e-12)


def test_two_jump_law_matches_generator():
    # after exactly two jumps from (0,0) at p=2: (2,0) w.p. 2/3, (1,1) w.p. 1/3
    n = 6000
    hits = {S((2, 0)): 0, S((1, 1)): 0}
    total = 0
    for s in range(n):
        tr = canonical_process(2, 2, (6.0,), 11, sample=s)
        if len(tr.events) > 2:
            hits[tr.events[2][1]] += 1
            total += 1
    q = 2 / 3
    assert abs(hits[S((2, 0))] / total - q) < 4 * math.sqrt(q * (1 - q) / total)


def test_A_and_scaled_B_multi_time():
    t = Fraction(1, 2)
    A = generator_A(2, 2, 16)
    B = generator_B(2, t, 16)
    ja = multi_time_distribution(A, 1, (0.5, 1.0), S((0, 0)))
    jb = multi_time_distribution(B, time_scale(t, 2), (0.5, 1.0), S((0, 0)))
    assert ja.keys() == jb.keys()
    for k in ja:
        assert ja[k] == pytest.approx(jb[k], abs=1e-12)
