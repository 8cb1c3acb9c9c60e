"""The matrix-product jump process, the reflected Poisson walk, and their generators.

Generator entries are exact :class:`fractions.Fraction` values.  Floating
point only enters through simulated waiting times and the Poisson weights
used by uniformization.
"""

from __future__ import annotations

import bisect
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np
from scipy import stats

from .errors import PrecisionExhausted, TruncationTooSmall
from .linalg import (
    PAdicMatrix,
    Signature,
    left_diag_multiply,
    right_diag_multiply,
    singular_numbers,
)
from .sampling import SignatureMeasure, StreamKey, haar_gln_zp, sample_signature

MAX_PRECISION = 1 << 12


# ---------------------------------------------------------------- parameters

@dataclass(frozen=True)
class RateParams:
    """Parameters linking the two processes; ``t = 1/p`` in the matrix setting."""

    t: Fraction
    N: int
    c: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        object.__setattr__(self, "c", Fraction(self.c))
        if not 0 < self.t < 1:
            raise ValueError("t must lie in (0, 1)")
        if self.N < 1:
            raise ValueError("N must be positive")
        if self.c < 0:
            raise ValueError("rate must be nonnegative")

    @classmethod
    def for_prime(cls, p: int, N: int) -> "RateParams":
        return cls(Fraction(1, p), N)

    @property
    def time_scale(self) -> Fraction:
        """c' = (1/t)(1 - t)/(1 - t**N)."""
        t = self.t
        return (1 - t) / (t * (1 - t**self.N))


def time_scale(t, N: int) -> Fraction:
    return RateParams(Fraction(t), N).time_scale


def auto_precision(max_time: float, rate: float = 1.0, jump_size: int = 1) -> int:
    """Working digits for a matrix walk: mean jump count plus six sd plus 16."""
    mean = max(rate * max_time, 0.0)
    return int(math.ceil(jump_size * (mean + 6 * math.sqrt(mean)))) + 16


# ---------------------------------------------------------------- trajectories

@dataclass
class Trajectory:
    """Piecewise-constant path; ``events[0]`` is the initial state at time 0."""

    N: int
    events: list[tuple[float, Signature]]
    horizon: float = math.inf

    def __post_init__(self):
        times = [t for t, _ in self.events]
        if not times or times[0] != 0.0:
            raise ValueError("trajectory must start at time 0")
        if any(a >= b for a, b in zip(times, times[1:])):
            raise ValueError("event times must be strictly increasing")
        for (_, a), (_, b) in zip(self.events, self.events[1:]):
            if a == b:
                raise ValueError("consecutive states must differ")
        if any(len(s) != self.N for _, s in self.events):
            raise ValueError("state length differs from N")
        self._times = times

    @property
    def jump_count(self) -> int:
        return len(self.events) - 1

    def state_at(self, time: float) -> Signature:
        if time > self.horizon:
            raise ValueError(f"time {time} beyond simulated horizon {self.horizon}")
        return self.events[bisect.bisect_right(self._times, time) - 1][1]

    def states_at(self, times) -> tuple[Signature, ...]:
        return tuple(self.state_at(t) for t in times)

    def to_json(self) -> dict:
        return {"N": self.N, "events": [{"t": t, "sig": list(s)} for t, s in self.events]}

    @classmethod
    def from_json(cls, d: dict) -> "Trajectory":
        return cls(int(d["N"]), [(float(e["t"]), Signature.from_json(e["sig"])) for e in d["events"]])


def _horizon(record_times) -> float:
    record_times = list(record_times)
    if any(a > b for a, b in zip(record_times, record_times[1:])):
        raise ValueError("record times must be sorted")
    if record_times and record_times[0] < 0:
        raise ValueError("record times must be nonnegative")
    return max(record_times, default=0.0)


# ---------------------------------------------------------------- matrix walk

def matrix_walk_simulate(N: int, p: int, M: SignatureMeasure, c, record_times, seed: int,
                         sample: int = 0, precision: int | None = None,
                         return_matrix: bool = False):
    """Simulate Y(tau) = U_k diag(p**nu_k) V_k ... U_1 diag(p**nu_1) V_1.

    Jumps arrive at rate ``c``.  The full matrix is carried along and its
    singular numbers are recorded after every jump up to the last record
    time.  On PrecisionExhausted the run is repeated at doubled precision;
    keyed streams make the rerun see the same random matrices.
    """
    if M.N != N:
        raise ValueError("measure and N disagree")
    T = _horizon(record_times)
    c = float(c)
    if precision is None:
        spread = max(max(abs(x) for x in sig) for sig, _ in M.support)
        precision = auto_precision(T, c, max(spread, 1) * N)
    while True:
        try:
            traj, X = _matrix_walk_once(N, p, M, c, T, seed, sample, precision)
            break
        except PrecisionExhausted:
            precision *= 2
            if precision > MAX_PRECISION:
                raise
    return (traj, X) if return_matrix else traj


def _matrix_walk_once(N, p, M, c, T, seed, sample, n):
    key = StreamKey(seed, (sample,))
    X = PAdicMatrix.identity(N, p, n)
    state = Signature.zeros(N)
    events = [(0.0, state)]
    time = 0.0
    k = 0
    while c > 0:
        k += 1
        time += -math.log(key.child(k, 0).uniform()) / c
        if time > T:
            break
        nu = sample_signature(M, key.child(k, 1))
        U = haar_gln_zp(seed, (sample, k, 2), p, N, n)
        V = haar_gln_zp(seed, (sample, k, 3), p, N, n)
        X = U @ left_diag_multiply(nu, V @ X)
        new = singular_numbers(X)
        if new != state:
            state = new
            events.append((time, state))
    return Trajectory(N, events, horizon=T), X


def canonical_process(N: int, p: int, record_times, seed: int, sample: int = 0,
                      precision: int | None = None) -> Trajectory:
    """Matrix walk with nu = (1, 0, ..., 0) at every jump and rate 1."""
    M = SignatureMeasure.point_mass((1,) + (0,) * (N - 1))
    return matrix_walk_simulate(N, p, M, 1, record_times, seed, sample=sample, precision=precision)


# ---------------------------------------------------------------- reflected walk

def reflected_step(kappa, i: int) -> Signature:
    """Ring clock ``i`` (1-based): add a box to the top of ``kappa_i``'s block of equal parts."""
    kappa = Signature(kappa)
    if not 1 <= i <= len(kappa):
        raise ValueError(f"clock index {i} out of range")
    j = i - 1
    v = kappa[j]
    while j > 0 and kappa[j - 1] == v:
        j -= 1
    parts = list(kappa)
    parts[j] += 1
    return Signature(parts)


def reflected_walk_simulate(N: int, t, record_times, seed: int, sample: int = 0,
                            initial=None) -> Trajectory:
    """Competing exponential clocks of rates t, t**2, ..., t**N with reflection."""
    t = Fraction(t)
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    T = _horizon(record_times)
    rates = [float(t**i) for i in range(1, N + 1)]
    total = sum(rates)
    cum = np.cumsum(rates) / total
    key = StreamKey(seed, (sample,))
    state = Signature.zeros(N) if initial is None else Signature(initial)
    events = [(0.0, state)]
    time = 0.0
    k = 0
    while True:
        k += 1
        time += -math.log(key.child(k, 0).uniform()) / total
        if time > T:
            break
        clock = min(bisect.bisect_right(cum, key.child(k, 1).uniform()), N - 1) + 1
        state = reflected_step(state, clock)
        events.append((time, state))
    return Trajectory(N, events, horizon=T)


def generator_walk_simulate(row, initial, record_times, seed: int, sample: int = 0) -> Trajectory:
    """Gillespie simulation of a CTMC given ``row(state) -> {target: rate}``."""
    T = _horizon(record_times)
    key = StreamKey(seed, (sample,))
    state = Signature(initial)
    events = [(0.0, state)]
    time = 0.0
    k = 0
    while True:
        k += 1
        targets = list(row(state).items())
        rates = [float(r) for _, r in targets]
        total = sum(rates)
        if total <= 0:
            break
        time += -math.log(key.child(k, 0).uniform()) / total
        if time > T:
            break
        u = key.child(k, 1).uniform() * total
        acc = 0.0
        for (target, _), r in zip(targets, rates):
            acc += r
            if u < acc:
                break
        state = target
        events.append((time, state))
    return Trajectory(len(state), events, horizon=T)


# ---------------------------------------------------------------- generators

def addable_rows(kappa) -> list[tuple[int, int]]:
    """(l, m) for each 0-based row l where a box can be added; m = multiplicity of kappa_l."""
    out = []
    for l, v in enumerate(kappa):
        if l == 0 or kappa[l - 1] > v:
            out.append((l, kappa.count(v)))
    return out


def _plus_box(kappa, l: int) -> Signature:
    parts = list(kappa)
    parts[l] += 1
    return Signature(parts)


def b_row(kappa, t) -> dict:
    """Off-diagonal rates of the reflected walk out of ``kappa``."""
    t = Fraction(t)
    return {_plus_box(kappa, l): t ** (l + 1) * (1 - t**m) / (1 - t) for l, m in addable_rows(kappa)}


def a_row(kappa, t, literal_prefactor: bool = False) -> dict:
    """Off-diagonal rates of SN of the canonical matrix process out of ``kappa``.

    ``literal_prefactor`` multiplies every rate by (1 - t); the resulting
    rows no longer sum to 1.  It exists only to exercise failure paths.
    """
    t = Fraction(t)
    N = len(kappa)
    extra = (1 - t) if literal_prefactor else 1
    return {_plus_box(kappa, l): extra * t**l * (1 - t**m) / (1 - t**N) for l, m in addable_rows(kappa)}


def state_space(N: int, K: int) -> list[Signature]:
    """{kappa in Sig_N : kappa_N >= 0, |kappa| <= K}, ordered by size."""
    out = []

    def parts(remaining, max_part, slots):
        if slots == 0:
            yield ()
            return
        for first in range(min(remaining, max_part), -1, -1):
            for rest in parts(remaining - first, first, slots - 1):
                yield (first,) + rest

    for size in range(K + 1):
        for sig in parts(size, size, N):
            if sum(sig) == size:
                out.append(Signature(sig))
    return out


@dataclass
class GeneratorMatrix:
    """Sparse exact generator on a size-truncated state space.

    ``entries`` holds every nonzero (kappa, nu) including the diagonal;
    ``boundary`` holds, for states with |kappa| = K, the total rate of
    jumps leaving the truncated space.
    """

    N: int
    K: int
    states: list[Signature]
    entries: dict = field(default_factory=dict)
    boundary: dict = field(default_factory=dict)

    def row(self, kappa) -> dict:
        return {nu: r for (k, nu), r in self.entries.items() if k == kappa}

    def rows(self) -> dict:
        out = {s: {} for s in self.states}
        for (k, nu), r in self.entries.items():
            out[k][nu] = r
        return out

    def row_sum(self, kappa) -> Fraction:
        """Sum of the full row including boundary outflow (0 when conservative)."""
        return sum(self.row(kappa).values(), Fraction(0)) + self.boundary.get(kappa, Fraction(0))

    def scaled(self, factor) -> "GeneratorMatrix":
        factor = Fraction(factor)
        return GeneratorMatrix(self.N, self.K, list(self.states),
                               {k: factor * v for k, v in self.entries.items()},
                               {k: factor * v for k, v in self.boundary.items()})

    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    def to_dense(self, rate_scale=1.0, with_boundary: bool = False) -> np.ndarray:
        idx = self.index()
        size = len(self.states) + (1 if with_boundary else 0)
        Q = np.zeros((size, size))
        scale = float(rate_scale)
        for (k, nu), r in self.entries.items():
            Q[idx[k], idx[nu]] = scale * float(r)
        if with_boundary:
            for k, r in self.boundary.items():
                Q[idx[k], -1] = scale * float(r)
        return Q

    def to_csv(self) -> str:
        buf = io.StringIO()
        for (k, nu), r in self.entries.items():
            buf.write(f"{','.join(map(str, k))};{','.join(map(str, nu))};{r.numerator}/{r.denominator}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, N: int, K: int) -> "GeneratorMatrix":
        entries = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            k, nu, r = line.split(";")
            entries[(Signature(map(int, k.split(","))), Signature(map(int, nu.split(","))))] = Fraction(r)
        return cls(N, K, state_space(N, K), entries)


def _build_generator(N, K, diag, row_fn) -> GeneratorMatrix:
    if K < 1:
        raise ValueError("K must be at least 1")
    states = state_space(N, K)
    entries = {}
    boundary = {}
    for kappa in states:
        entries[(kappa, kappa)] = diag
        for nu, r in row_fn(kappa).items():
            if nu.size <= K:
                entries[(kappa, nu)] = r
            else:
                boundary[kappa] = boundary.get(kappa, Fraction(0)) + r
    return GeneratorMatrix(N, K, states, entries, boundary)


def generator_B(N: int, t, K: int) -> GeneratorMatrix:
    """Generator of the reflected Poisson walk with clock rates t, ..., t**N."""
    t = Fraction(t)
    diag = -t * (1 - t**N) / (1 - t)
    return _build_generator(N, K, diag, lambda k: b_row(k, t))


def generator_A(N: int, p: int, K: int, literal_prefactor: bool = False) -> GeneratorMatrix:
    """Generator of SN of the canonical matrix process (t = 1/p)."""
    t = Fraction(1, p)
    return _build_generator(N, K, Fraction(-1), lambda k: a_row(k, t, literal_prefactor))


# ---------------------------------------------------------------- one jump

def _first_nonzero(w) -> int:
    for i, x in enumerate(w):
        if x:
            return i
    raise ValueError("zero vector")


def one_jump_oracle(kappa, N: int, p: int) -> dict:
    """Exact law of SN(diag(p,1,...,1) U diag(p**kappa)) by enumerating F_p^N minus 0.

    Only the first column of U^{-1} modulo p matters: its first nonzero
    coordinate picks a row of ``kappa`` and the box goes to the top of that
    row's block of equal parts.
    """
    kappa = Signature(kappa)
    if len(kappa) != N:
        raise ValueError("kappa must have length N")
    total = p**N - 1
    counts: dict = {}
    for w in product(range(p), repeat=N):
        if not any(w):
            continue
        j = _first_nonzero(w)
        while j > 0 and kappa[j - 1] == kappa[j]:
            j -= 1
        nu = _plus_box(kappa, j)
        counts[nu] = counts.get(nu, 0) + 1
    return {nu: Fraction(c, total) for nu, c in counts.items()}


def one_jump_sample(kappa, p: int, seed: int, sample: int, precision: int | None = None) -> Signature:
    """One draw of SN(diag(p,1,...,1) U diag(p**kappa)) with Haar U."""
    kappa = Signature(kappa)
    N = len(kappa)
    n = precision or (kappa[0] - kappa[-1] + 12)
    box = (1,) + (0,) * (N - 1)
    while True:
        try:
            U = haar_gln_zp(seed, (sample,), p, N, n)
            return singular_numbers(left_diag_multiply(box, right_diag_multiply(U, kappa)))
        except PrecisionExhausted:
            n *= 2
            if n > MAX_PRECISION:
                raise


def one_jump_mc(kappa, N: int, p: int, samples: int, seed: int) -> dict:
    """Empirical counts of the one-jump target over ``samples`` Haar draws."""
    kappa = Signature(kappa)
    if len(kappa) != N:
        raise ValueError("kappa must have length N")
    counts: dict = {}
    for s in range(samples):
        nu = one_jump_sample(kappa, p, seed, s)
        counts[nu] = counts.get(nu, 0) + 1
    return counts


# ---------------------------------------------------------------- exact laws

class Law(dict):
    """Probability map with the mass that leaked past the truncation boundary."""

    boundary_mass: float = 0.0

    def total(self) -> float:
        return sum(self.values())


def truncation_level(mean_jumps: float, tail_eps: float) -> int:
    """Smallest K with P(Poisson(mean_jumps) > K) below ``tail_eps / 10``."""
    if mean_jumps <= 0:
        return 1
    return max(1, int(stats.poisson.isf(tail_eps / 10, mean_jumps)) + 1)


def _series_weights(mu: float, tail_eps: float) -> np.ndarray:
    if mu == 0:
        return np.ones(1)
    eps = min(tail_eps, 1e-15)
    kmax = int(stats.poisson.isf(eps, mu)) + 2
    return stats.poisson.pmf(np.arange(kmax + 1), mu)


def _uniformized_kernel(G: GeneratorMatrix, rate_scale):
    Q = G.to_dense(rate_scale, with_boundary=True)
    lam = float(-np.diag(Q).min()) if Q.size else 0.0
    size = Q.shape[0]
    if lam <= 0:
        return np.eye(size), 0.0
    return np.eye(size) + Q / lam, lam


def _transition(G, rate_scale, dt, tail_eps) -> np.ndarray:
    """Rows: law at time ``dt`` from each state; last column is the boundary."""
    J, lam = _uniformized_kernel(G, rate_scale)
    weights = _series_weights(lam * dt, tail_eps)
    P = np.zeros_like(J)
    power = np.eye(J.shape[0])
    for k, w in enumerate(weights):
        if k:
            power = power @ J
        P += w * power
    return P


def finite_time_distribution(G: GeneratorMatrix, rate_scale, tau: float, init,
                             tail_eps: float = 1e-10) -> Law:
    """Law at time ``tau`` of the chain with generator rate_scale * G, by uniformization."""
    idx = G.index()
    init = Signature(init)
    if init not in idx:
        raise ValueError(f"{init} is not in the truncated state space")
    J, lam = _uniformized_kernel(G, rate_scale)
    v = np.zeros(J.shape[0])
    v[idx[init]] = 1.0
    acc = np.zeros_like(v)
    for k, w in enumerate(_series_weights(lam * float(tau), tail_eps)):
        if k:
            v = v @ J
        acc += w * v
    law = Law({s: float(acc[i]) for s, i in idx.items() if acc[i] > 0})
    law.boundary_mass = float(acc[-1])
    if law.boundary_mass > tail_eps:
        raise TruncationTooSmall(f"boundary mass {law.boundary_mass:.3g} exceeds {tail_eps:g}")
    return law


def multi_time_distribution(G: GeneratorMatrix, rate_scale, times, init,
                            tail_eps: float = 1e-10) -> Law:
    """Joint law of the states at the sorted ``times``, keyed by tuples of signatures."""
    times = [float(x) for x in times]
    if not times:
        raise ValueError("need at least one time")
    if any(a > b for a, b in zip(times, times[1:])):
        raise ValueError("times must be sorted")
    first = finite_time_distribution(G, rate_scale, times[0], init, tail_eps)
    joint = {(s,): q for s, q in first.items()}
    leaked = first.boundary_mass
    idx = G.index()
    states = G.states
    prev = times[0]
    for tm in times[1:]:
        P = _transition(G, rate_scale, tm - prev, tail_eps)
        nxt = {}
        for path, q in joint.items():
            row = P[idx[path[-1]]]
            leaked += q * row[-1]
            for j in np.nonzero(row[:-1])[0]:
                nxt[path + (states[j],)] = q * row[j]
        joint = nxt
        prev = tm
    law = Law(joint)
    law.boundary_mass = float(leaked)
    if law.boundary_mass > tail_eps:
        raise TruncationTooSmall(f"boundary mass {law.boundary_mass:.3g} exceeds {tail_eps:g}")
    return law
