"""Exact and statistical verification suites.

Each ``verify_*`` function returns a :class:`VerificationReport` whose pass
flag is recomputed from the recorded statistics and thresholds, so a saved
report can be re-judged without rerunning anything.
"""

from __future__ import annotations

import math
import operator
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np
from scipy import stats as sps

from .errors import InsufficientSamples, PrecisionExhausted, SingularMatrix
from .linalg import (
    PAdicMatrix,
    Signature,
    left_diag_multiply,
    right_diag_multiply,
    singular_numbers,
    singular_numbers_minor_oracle,
)
from .padic import ZeroAtPrecision
from .processes import (
    MAX_PRECISION,
    RateParams,
    a_row,
    b_row,
    canonical_process,
    generator_A,
    generator_B,
    generator_walk_simulate,
    multi_time_distribution,
    one_jump_oracle,
    one_jump_sample,
    reflected_walk_simulate,
    state_space,
    truncation_level,
)
from .sampling import StreamKey, derive_seed, haar_gln_zp, haar_rejection, uniform_zp

ALPHA = 0.001
MIN_EXPECTED = 5.0
TV_BOUND = 0.02
TAIL_EPS = 1e-10

_OPS = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge, "==": operator.eq}


@dataclass
class VerificationReport:
    name: str
    params: dict
    stats: dict
    thresholds: dict
    criteria: list = field(default_factory=list)  # (stat key, op, threshold key)
    samples: int = 0
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(_OPS[op](self.stats[s], self.thresholds[t]) for s, op, t in self.criteria)

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "name": self.name,
            "params": self.params,
            "stats": self.stats,
            "thresholds": self.thresholds,
            "samples": self.samples,
            "pass": self.passed,
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        shown = ", ".join(f"{k}={_fmt(v)}" for k, v in self.stats.items())
        return f"[{flag}] {self.name} {self.params}: {shown}"


def _fmt(v):
    return f"{v:.4g}" if isinstance(v, float) else str(v)


def parallel_map(func, items, threads: int = 1) -> list:
    """Ordered map; with threads > 1 the work is spread over processes."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (8 * threads))))


# ---------------------------------------------------------------- statistics

def _counts(hist) -> dict:
    if isinstance(hist, dict):
        return {k: float(v) for k, v in hist.items()}
    out: dict = {}
    for x in hist:
        out[x] = out.get(x, 0) + 1
    return {k: float(v) for k, v in out.items()}


def histogram(values) -> dict:
    out: dict = {}
    for x in values:
        out[x] = out.get(x, 0) + 1
    return out


def chi_square_gof(empirical, exact, min_expected: float = MIN_EXPECTED):
    """Goodness of fit of observed counts to an exact law.

    Cells with expected count below ``min_expected`` are pooled into an
    "other" cell together with observations outside the law's support and
    any probability mass the law leaves unassigned.  Returns
    ``(statistic, dof, p_value)``.
    """
    obs = _counts(empirical)
    n = sum(obs.values())
    if n <= 0:
        raise InsufficientSamples("no observations")
    probs = {k: float(v) for k, v in exact.items() if float(v) > 0}
    cells = []
    other_obs = sum(c for k, c in obs.items() if k not in probs)
    missing = 1.0 - sum(probs.values())
    if other_obs > 0 and missing < 1e-12:
        # an observation the law declares impossible
        return math.inf, max(len(probs) - 1, 1), 0.0
    other_exp = max(0.0, missing) * n
    for k, q in probs.items():
        e = n * q
        if e < min_expected:
            other_obs += obs.get(k, 0.0)
            other_exp += e
        else:
            cells.append([obs.get(k, 0.0), e])
    cells.sort(key=lambda c: c[1])
    while other_exp < min_expected and cells and (other_exp > 0 or other_obs > 0):
        o, e = cells.pop(0)
        other_obs += o
        other_exp += e
    if other_exp > 0:
        cells.append([other_obs, other_exp])
    if len(cells) < 2:
        raise InsufficientSamples("fewer than two cells after pooling")
    stat = sum((o - e) ** 2 / e for o, e in cells)
    dof = len(cells) - 1
    return float(stat), dof, float(sps.chi2.sf(stat, dof))


def chi_square_two_sample(hist_a, hist_b, min_expected: float = MIN_EXPECTED):
    """Homogeneity test of two histograms (2 x k contingency table).

    Cells whose smaller expected count is below ``min_expected`` are pooled.
    """
    a, b = _counts(hist_a), _counts(hist_b)
    na, nb = sum(a.values()), sum(b.values())
    if na <= 0 or nb <= 0:
        raise InsufficientSamples("empty histogram")
    fa, fb = na / (na + nb), nb / (na + nb)
    cells = []
    pool = [0.0, 0.0]
    for k in set(a) | set(b):
        oa, ob = a.get(k, 0.0), b.get(k, 0.0)
        if (oa + ob) * min(fa, fb) < min_expected:
            pool[0] += oa
            pool[1] += ob
        else:
            cells.append((oa, ob))
    cells.sort(key=lambda c: c[0] + c[1])
    while pool[0] + pool[1] > 0 and (pool[0] + pool[1]) * min(fa, fb) < min_expected and cells:
        oa, ob = cells.pop(0)
        pool[0] += oa
        pool[1] += ob
    if pool[0] + pool[1] > 0:
        cells.append(tuple(pool))
    if len(cells) < 2:
        raise InsufficientSamples("fewer than two cells after pooling")
    stat = 0.0
    for oa, ob in cells:
        tot = oa + ob
        ea, eb = tot * fa, tot * fb
        stat += (oa - ea) ** 2 / ea + (ob - eb) ** 2 / eb
    dof = len(cells) - 1
    return float(stat), dof, float(sps.chi2.sf(stat, dof))


def tv_distance(hist_a, hist_b) -> float:
    """Half the L1 distance between the normalized histograms."""
    a, b = _counts(hist_a), _counts(hist_b)
    na, nb = sum(a.values()), sum(b.values())
    if na <= 0 or nb <= 0:
        raise InsufficientSamples("empty histogram")
    return 0.5 * sum(abs(a.get(k, 0.0) / na - b.get(k, 0.0) / nb) for k in set(a) | set(b))


# ---------------------------------------------------------------- lemma

def lemma_row(A: PAdicMatrix, kappa) -> int:
    """1-based row l losing a box: bottom of the block holding the last unit of column 1."""
    col = [A[i, 0] for i in range(A.rows)]
    units = [i for i, x in enumerate(col) if x.__class__ is not ZeroAtPrecision and x.valuation == 0]
    if not units:
        raise ValueError("first column has no unit; A is not in GL_N(Z_p)")
    lt = units[-1]
    l = max(i for i, k in enumerate(kappa) if k == kappa[lt])
    return l + 1


def check_lemma_one_jump(A: PAdicMatrix, kappa) -> bool:
    """Is SN(diag(p**kappa) A diag(p**-1, 1, ..., 1)) = kappa - e_l?"""
    kappa = Signature(kappa)
    N = len(kappa)
    l = lemma_row(A, kappa)
    expected = list(kappa)
    expected[l - 1] -= 1
    M = left_diag_multiply(kappa, right_diag_multiply(A, (-1,) + (0,) * (N - 1)))
    return singular_numbers(M) == Signature(expected)


def _random_signature(key: StreamKey, N: int, bound: int) -> Signature:
    parts = [key.child(i).residue(2 * bound + 1, 1) - bound for i in range(N)]
    return Signature(sorted(parts, reverse=True))


def _lemma_instance(args):
    seed, N, p, s, bound = args
    kappa = _random_signature(StreamKey(seed, (s, 0)), N, bound)
    n = kappa[0] - kappa[-1] + 12
    while True:
        try:
            A = haar_gln_zp(seed, (s, 1), p, N, n)
            return check_lemma_one_jump(A, kappa)
        except PrecisionExhausted:
            n *= 2
            if n > MAX_PRECISION:
                raise


def verify_lemma(N: int, p: int, instances: int, seed: int, bound: int = 5,
                 threads: int = 1) -> VerificationReport:
    start = time.perf_counter()
    results = parallel_map(_lemma_instance, [(seed, N, p, s, bound) for s in range(instances)], threads)
    failures = sum(not r for r in results)
    return VerificationReport(
        "lemma", {"N": N, "p": p, "instances": instances, "seed": seed, "kappa_bound": bound},
        {"failures": failures}, {"max_failures": 0}, [("failures", "<=", "max_failures")],
        samples=instances, wall_time=time.perf_counter() - start)


# ---------------------------------------------------------------- generators

def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def verify_generators(N: int, p: int, K: int, literal_prefactor: bool = False) -> VerificationReport:
    """Exact checks: A = c' B entrywise, A rows = enumeration oracle, rows of A sum to 1."""
    start = time.perf_counter()
    t = Fraction(1, p)
    c = RateParams(t, N).time_scale
    A = generator_A(N, p, K, literal_prefactor=literal_prefactor)
    B = generator_B(N, t, K)
    keys = set(A.entries) | set(B.entries)
    prop_mismatch = sum(A.entries.get(k, 0) != c * B.entries.get(k, 0) for k in keys)
    bkeys = set(A.boundary) | set(B.boundary)
    prop_mismatch += sum(A.boundary.get(k, 0) != c * B.boundary.get(k, 0) for k in bkeys)
    oracle_mismatch = 0
    worst = Fraction(1)
    for kappa in A.states:
        row = a_row(kappa, t, literal_prefactor)
        if row != one_jump_oracle(kappa, N, p):
            oracle_mismatch += 1
        total = sum(row.values(), Fraction(0))
        if abs(total - 1) > abs(worst - 1):
            worst = total
    row_sum_bad = sum(A.row_sum(k) != 0 for k in A.states)
    return VerificationReport(
        "generators", {"N": N, "p": p, "K": K},
        {"proportionality_mismatches": prop_mismatch, "oracle_mismatches": oracle_mismatch,
         "nonconservative_rows": row_sum_bad, "row_sum_off_diagonal": _frac(worst),
         "time_scale": _frac(c), "states": len(A.states)},
        {"zero": 0},
        [("proportionality_mismatches", "==", "zero"), ("oracle_mismatches", "==", "zero"),
         ("nonconservative_rows", "==", "zero")],
        wall_time=time.perf_counter() - start)


# ---------------------------------------------------------------- one jump

_MC_KAPPAS = {
    2: [(1, 0)],
    3: [(2, 1, 0), (1, 1, 0)],
    4: [(2, 1, 1, 0)],
}


def default_mc_kappas(N: int) -> list[Signature]:
    """Starting states for the one-jump Monte Carlo: distinct parts, and a tied block."""
    return [Signature(k) for k in _MC_KAPPAS.get(N, [tuple(range(N - 1, -1, -1))])]


def _one_jump_draw(args):
    kappa, p, seed, s = args
    return one_jump_sample(kappa, p, seed, s)


def verify_one_jump(N: int, p: int, K: int, samples: int, seed: int, mc_kappas=None,
                    sigmas: float = 3.0, threads: int = 1) -> VerificationReport:
    """Exact row equality for every |kappa| <= K plus Monte Carlo at ``mc_kappas``."""
    start = time.perf_counter()
    t = Fraction(1, p)
    oracle_mismatch = 0
    bad_sums = 0
    for kappa in state_space(N, K):
        row = a_row(kappa, t)
        if row != one_jump_oracle(kappa, N, p):
            oracle_mismatch += 1
        if sum(row.values(), Fraction(0)) != 1:
            bad_sums += 1
    mc_kappas = default_mc_kappas(N) if mc_kappas is None else [Signature(k) for k in mc_kappas]
    worst_z = 0.0
    outside = 0
    for i, kappa in enumerate(mc_kappas):
        sub = derive_seed(seed, f"one-jump/{i}")
        draws = parallel_map(_one_jump_draw, [(kappa, p, sub, s) for s in range(samples)], threads)
        counts = histogram(draws)
        exact = one_jump_oracle(kappa, N, p)
        if set(counts) - set(exact):
            outside += 1
        for nu, q in exact.items():
            q = float(q)
            freq = counts.get(nu, 0) / samples
            sd = math.sqrt(q * (1 - q) / samples)
            z = abs(freq - q) / sd if sd > 0 else (0.0 if freq == q else math.inf)
            worst_z = max(worst_z, z)
    return VerificationReport(
        "one-jump", {"N": N, "p": p, "K": K, "samples": samples, "seed": seed,
                     "mc_kappas": [list(k) for k in mc_kappas]},
        {"oracle_mismatches": oracle_mismatch, "rows_not_summing_to_one": bad_sums,
         "max_abs_z": worst_z, "targets_outside_support": outside},
        {"zero": 0, "sigmas": sigmas},
        [("oracle_mismatches", "==", "zero"), ("rows_not_summing_to_one", "==", "zero"),
         ("max_abs_z", "<=", "sigmas"), ("targets_outside_support", "==", "zero")],
        samples=samples * len(mc_kappas), wall_time=time.perf_counter() - start)


# ---------------------------------------------------------------- SNF

def random_scaled_matrix(key: StreamKey, p: int, n_rows: int, n_cols: int, n: int,
                         max_shift: int = 4) -> PAdicMatrix:
    """Entries uniform on Z_p times p**e with e uniform on 0..max_shift."""
    from .linalg import _shift

    rows = []
    for i in range(n_rows):
        row = []
        for j in range(n_cols):
            e = key.child(i, j, 1).residue(max_shift + 1, 1)
            row.append(_shift(uniform_zp(key.child(i, j, 0), p, n), e))
        rows.append(row)
    return PAdicMatrix(rows, p, n)


def _snf_instance(args):
    seed, N, p, s, n = args
    A = random_scaled_matrix(StreamKey(seed, (s,)), p, N, N, n)
    try:
        return singular_numbers(A) == singular_numbers_minor_oracle(A)
    except (PrecisionExhausted, SingularMatrix):
        return None


def verify_snf(N: int, p: int, count: int, seed: int, precision: int = 24,
               threads: int = 1) -> VerificationReport:
    start = time.perf_counter()
    results = parallel_map(_snf_instance, [(seed, N, p, s, precision) for s in range(count)], threads)
    mismatches = sum(r is False for r in results)
    skipped = sum(r is None for r in results)
    return VerificationReport(
        "snf", {"N": N, "p": p, "count": count, "seed": seed, "precision": precision},
        {"mismatches": mismatches, "skipped": skipped}, {"zero": 0},
        [("mismatches", "==", "zero")], samples=count, wall_time=time.perf_counter() - start)


# ---------------------------------------------------------------- Haar

def gl_mod_p(N: int, p: int) -> list[tuple]:
    """All elements of GL_N(F_p) as tuples of row tuples (small N, p only)."""
    from .sampling import rank_mod_p

    out = []
    for flat in product(range(p), repeat=N * N):
        rows = tuple(tuple(flat[i * N:(i + 1) * N]) for i in range(N))
        if rank_mod_p(rows, p) == N:
            out.append(rows)
    return out


def _haar_mod_p(args):
    kind, seed, p, N, s = args
    if kind == "column":
        return haar_gln_zp(seed, s, p, N, 2).mod_p()
    return haar_rejection(seed, s, p, N, 2).mod_p()


def verify_haar(N: int, p: int, samples: int, seed: int, alpha: float = ALPHA,
                min_expected: float = MIN_EXPECTED, threads: int = 1) -> VerificationReport:
    """Uniformity of the mod-p pushforward and agreement of the two samplers."""
    start = time.perf_counter()
    group = gl_mod_p(N, p)
    uniform = {g: 1 / len(group) for g in group}
    col = histogram(parallel_map(_haar_mod_p, [("column", seed, p, N, s) for s in range(samples)], threads))
    rej_seed = derive_seed(seed, "rejection")
    rej = histogram(parallel_map(_haar_mod_p, [("rejection", rej_seed, p, N, s) for s in range(samples)], threads))
    _, _, p_col = chi_square_gof(col, uniform, min_expected)
    _, _, p_rej = chi_square_gof(rej, uniform, min_expected)
    _, _, p_two = chi_square_two_sample(col, rej, min_expected)
    return VerificationReport(
        "haar", {"N": N, "p": p, "samples": samples, "seed": seed, "group_order": len(group)},
        {"p_value_column_uniform": p_col, "p_value_rejection_uniform": p_rej,
         "p_value_two_sample": p_two},
        {"alpha": alpha},
        [("p_value_column_uniform", ">", "alpha"), ("p_value_rejection_uniform", ">", "alpha"),
         ("p_value_two_sample", ">", "alpha")],
        samples=2 * samples, wall_time=time.perf_counter() - start)


# ---------------------------------------------------------------- processes

def _matrix_states(args):
    N, p, times, seed, s = args
    return canonical_process(N, p, times, seed, sample=s).states_at(times)


def _reflected_states(args):
    N, t, times, seed, s = args
    return reflected_walk_simulate(N, t, times, seed, sample=s).states_at(times)


def _generator_states(args):
    N, t, times, seed, s = args
    return generator_walk_simulate(lambda k: b_row(k, t), Signature.zeros(N), times, seed,
                                   sample=s).states_at(times)


def sample_matrix_states(N, p, times, samples, seed, threads=1) -> list:
    return parallel_map(_matrix_states, [(N, p, tuple(times), seed, s) for s in range(samples)], threads)


def sample_reflected_states(N, t, times, samples, seed, threads=1) -> list:
    return parallel_map(_reflected_states, [(N, Fraction(t), tuple(times), seed, s) for s in range(samples)],
                        threads)


def verify_theorem_multitime(N: int, p: int, times, samples: int, seed: int, alpha: float = ALPHA,
                             tv_bound: float = TV_BOUND, min_expected: float = MIN_EXPECTED,
                             threads: int = 1) -> VerificationReport:
    """Joint law of SN at ``times`` versus the reflected walk at c' * times, and both versus exact."""
    start = time.perf_counter()
    times = [float(x) for x in times]
    rp = RateParams.for_prime(p, N)
    c = rp.time_scale
    scaled = [float(c) * x for x in times]
    mat = histogram(sample_matrix_states(N, p, times, samples, derive_seed(seed, "matrix"), threads))
    ref = histogram(sample_reflected_states(N, rp.t, scaled, samples, derive_seed(seed, "reflected"), threads))
    K = truncation_level(max(times), TAIL_EPS)
    exact = multi_time_distribution(generator_A(N, p, K), 1, times, Signature.zeros(N), TAIL_EPS)
    _, _, p_two = chi_square_two_sample(mat, ref, min_expected)
    _, _, p_mat = chi_square_gof(mat, exact, min_expected)
    _, _, p_ref = chi_square_gof(ref, exact, min_expected)
    return VerificationReport(
        "theorem", {"N": N, "p": p, "times": times, "samples": samples, "seed": seed,
                    "time_scale": _frac(c), "K": K},
        {"p_value_two_sample": p_two, "p_value_matrix_vs_exact": p_mat,
         "p_value_reflected_vs_exact": p_ref, "tv_matrix_vs_exact": tv_distance(mat, exact),
         "tv_reflected_vs_exact": tv_distance(ref, exact), "tv_two_sample": tv_distance(mat, ref)},
        {"alpha": alpha, "tv_bound": tv_bound, "tv_bound_two_sample": math.sqrt(2) * tv_bound},
        [("p_value_two_sample", ">", "alpha"), ("p_value_matrix_vs_exact", ">", "alpha"),
         ("p_value_reflected_vs_exact", ">", "alpha"), ("tv_matrix_vs_exact", "<=", "tv_bound"),
         ("tv_reflected_vs_exact", "<=", "tv_bound"), ("tv_two_sample", "<=", "tv_bound_two_sample")],
        samples=2 * samples, wall_time=time.perf_counter() - start)


def verify_reflection_equivalence(N: int, t, tau: float, samples: int, seed: int, alpha: float = ALPHA,
                                  tv_bound: float = TV_BOUND, min_expected: float = MIN_EXPECTED,
                             threads: int = 1) -> VerificationReport:
    """Clock dynamics versus Gillespie on the generator, at one time."""
    start = time.perf_counter()
    t = Fraction(t)
    times = (float(tau),)
    clocks = histogram(parallel_map(
        _reflected_states, [(N, t, times, derive_seed(seed, "clocks"), s) for s in range(samples)], threads))
    gill = histogram(parallel_map(
        _generator_states, [(N, t, times, derive_seed(seed, "gillespie"), s) for s in range(samples)], threads))
    rate = float(t * (1 - t**N) / (1 - t))
    K = truncation_level(rate * float(tau), TAIL_EPS)
    exact = multi_time_distribution(generator_B(N, t, K), 1, times, Signature.zeros(N), TAIL_EPS)
    _, _, p_two = chi_square_two_sample(clocks, gill, min_expected)
    _, _, p_clk = chi_square_gof(clocks, exact, min_expected)
    _, _, p_gil = chi_square_gof(gill, exact, min_expected)
    return VerificationReport(
        "reflection", {"N": N, "t": _frac(t), "tau": float(tau), "samples": samples, "seed": seed},
        {"p_value_two_sample": p_two, "p_value_clocks_vs_exact": p_clk,
         "p_value_generator_vs_exact": p_gil, "tv_two_sample": tv_distance(clocks, gill)},
        {"alpha": alpha, "tv_bound_two_sample": math.sqrt(2) * tv_bound},
        [("p_value_two_sample", ">", "alpha"), ("p_value_clocks_vs_exact", ">", "alpha"),
         ("p_value_generator_vs_exact", ">", "alpha"), ("tv_two_sample", "<=", "tv_bound_two_sample")],
        samples=2 * samples, wall_time=time.perf_counter() - start)


def verify_mean_growth(N: int, p: int, tau: float, runs: int, seed: int, sigmas: float = 3.0,
                       threads: int = 1) -> VerificationReport:
    """E|SN(X(tau))| = tau and E|S(c' tau)| = tau; both jump counts are Poisson(tau)."""
    start = time.perf_counter()
    rp = RateParams.for_prime(p, N)
    mat = sample_matrix_states(N, p, (tau,), runs, derive_seed(seed, "matrix"), threads)
    ref = sample_reflected_states(N, rp.t, (float(rp.time_scale) * tau,), runs,
                                  derive_seed(seed, "reflected"), threads)
    sd = math.sqrt(tau / runs)
    m_mat = float(np.mean([s[0].size for s in mat]))
    m_ref = float(np.mean([s[0].size for s in ref]))
    return VerificationReport(
        "mean-growth", {"N": N, "p": p, "tau": tau, "runs": runs, "seed": seed},
        {"mean_matrix": m_mat, "mean_reflected": m_ref,
         "z_matrix": abs(m_mat - tau) / sd, "z_reflected": abs(m_ref - tau) / sd},
        {"sigmas": sigmas},
        [("z_matrix", "<=", "sigmas"), ("z_reflected", "<=", "sigmas")],
        samples=2 * runs, wall_time=time.perf_counter() - start)


# ---------------------------------------------------------------- props 2.5 / 2.6

def _haar_factor(seed, path, p, N, mu, n) -> PAdicMatrix:
    U = haar_gln_zp(seed, path + (0,), p, N, n)
    V = haar_gln_zp(seed, path + (1,), p, N, n)
    return U @ left_diag_multiply(mu, V)


def _props_instance(args):
    seed, N, p, s, n = args
    key = StreamKey(seed, (s,))
    A = random_scaled_matrix(key.child(0), p, N, N, n)
    kappa = _random_signature(key.child(1), N, 3)
    try:
        det_ok = singular_numbers(left_diag_multiply(kappa, A)).size == singular_numbers(A).size + kappa.size
        sn_a = singular_numbers(A)
        mu_pos = Signature(sorted((abs(x) for x in _random_signature(key.child(2), N, 3)), reverse=True))
        mu_neg = Signature(sorted((-x for x in mu_pos), reverse=True))
        B_pos = _haar_factor(seed, (s, 3), p, N, mu_pos, n)
        B_neg = _haar_factor(seed, (s, 4), p, N, mu_neg, n)
        mono = (all(x >= y for x, y in zip(singular_numbers(A @ B_pos), sn_a))
                and all(x <= y for x, y in zip(singular_numbers(A @ B_neg), sn_a))
                and all(x >= y for x, y in zip(singular_numbers(B_pos @ A), sn_a))
                and all(x <= y for x, y in zip(singular_numbers(B_neg @ A), sn_a)))
    except (PrecisionExhausted, SingularMatrix):
        return None
    return det_ok, mono


def verify_props(N: int, p: int, count: int, seed: int, precision: int = 32,
                 threads: int = 1) -> VerificationReport:
    """|SN(diag(p**k) A)| = |SN(A)| + |k| and monotonicity under one-signed factors."""
    start = time.perf_counter()
    results = parallel_map(_props_instance, [(seed, N, p, s, precision) for s in range(count)], threads)
    done = [r for r in results if r is not None]
    return VerificationReport(
        "props", {"N": N, "p": p, "count": count, "seed": seed},
        {"size_violations": sum(not r[0] for r in done), "monotonicity_violations": sum(not r[1] for r in done),
         "skipped": len(results) - len(done)},
        {"zero": 0},
        [("size_violations", "==", "zero"), ("monotonicity_violations", "==", "zero")],
        samples=count, wall_time=time.perf_counter() - start)
