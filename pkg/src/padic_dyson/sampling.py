"""Keyed random streams, Haar sampling on GL_N(Z_p) and signature measures.

Every random digit is a pure function of ``(seed, path, digit index)``.
Asking for more digits of the same stream extends it without changing
earlier ones, so a computation rerun at higher precision sees the same
random matrices (only known to more digits).
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from fractions import Fraction

from .errors import SamplerStuck
from .linalg import PAdicMatrix, Signature
from .padic import PAdicScalar, ZeroAtPrecision, int_valuation

RETRY_CAP = 10**6

_WORD_BOUND = 1 << 64
_DIGIT_CHUNKS: dict[int, tuple[int, int, int]] = {}


def _chunking(p: int) -> tuple[int, int, int]:
    """(k, p**k, acceptance limit) with p**k the largest power of p <= 2**64."""
    try:
        return _DIGIT_CHUNKS[p]
    except KeyError:
        k, q = 1, p
        while q * p <= _WORD_BOUND:
            q *= p
            k += 1
        out = (k, q, (_WORD_BOUND // q) * q)
        _DIGIT_CHUNKS[p] = out
        return out


@dataclass(frozen=True)
class StreamKey:
    """Address of one independent random stream."""

    seed: int
    path: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def child(self, *more: int) -> "StreamKey":
        return StreamKey(self.seed, self.path + tuple(more))

    def _block(self, index: int, person: bytes) -> bytes:
        h = hashlib.blake2b(
            struct.pack(f"<q{len(self.path)}qq", len(self.path), *self.path, index),
            digest_size=64,
            key=self.seed.to_bytes(8, "little"),
            person=person,
        )
        return h.digest()

    def _words(self):
        block = 0
        while True:
            yield from struct.unpack("<8Q", self._block(block, b"digits"))
            block += 1

    def residue(self, p: int, n: int) -> int:
        """Integer sum_{i<n} d_i p**i built from the first ``n`` digits of the stream."""
        if n <= 0:
            return 0
        k, q, limit = _chunking(p)
        value = 0
        scale = 1
        have = 0
        for w in self._words():
            if w >= limit:
                continue
            value += (w % q) * scale
            scale *= q
            have += k
            if have >= n:
                break
        return value % p**n

    def digits(self, p: int, n: int) -> list[int]:
        r = self.residue(p, n)
        out = []
        for _ in range(n):
            r, d = divmod(r, p)
            out.append(d)
        return out

    def digit(self, p: int, i: int) -> int:
        return self.residue(p, i + 1) // p**i

    def uniform(self) -> float:
        """A float in (0, 1) with 53 random bits."""
        (w,) = struct.unpack_from("<Q", self._block(0, b"uniform"))
        return ((w >> 11) + 0.5) / 2.0**53


def _as_path(event_index) -> tuple[int, ...]:
    if isinstance(event_index, int):
        return (event_index,)
    return tuple(event_index)


def uniform_zp(key: StreamKey, p: int, n: int):
    """Haar-random element of Z_p known modulo p**n.

    Returns ZeroAtPrecision(n) when all ``n`` digits are 0.
    """
    return _zp_from_residue(key.residue(p, n), p, n)


def _zp_from_residue(r: int, p: int, n: int):
    if r == 0:
        return ZeroAtPrecision(p, n)
    if r % p:
        return PAdicScalar._raw(p, 0, r, n)
    v = int_valuation(r, p)
    return PAdicScalar._raw(p, v, r // p**v, n - v)


class _SpanModP:
    """Incrementally maintained row-echelon basis of a subspace of F_p^N."""

    def __init__(self, p: int):
        self.p = p
        self.basis: list[tuple[int, list[int]]] = []

    def reduce(self, v) -> list[int]:
        p = self.p
        v = [x % p for x in v]
        for piv, b in self.basis:
            c = v[piv]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, b)]
        return v

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def insert(self, v) -> bool:
        """Add ``v``; False if it was already in the span."""
        v = self.reduce(v)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        scale = pow(v[piv], -1, self.p)
        self.basis.append((piv, [x * scale % self.p for x in v]))
        return True


def rank_mod_p(rows, p: int) -> int:
    span = _SpanModP(p)
    return sum(span.insert(r) for r in rows)


def haar_gln_zp(seed: int, event_index, p: int, N: int, n: int) -> PAdicMatrix:
    """Haar-distributed element of GL_N(Z_p) known modulo p**n.

    Columns are drawn right to left.  Each column's digit-0 vector is
    redrawn until it leaves the span (mod p) of the columns already chosen;
    the higher digits are unconditioned.  The stream for entry (i, j) lives
    at path ``event_index + (i, j, 0)`` (digits 1..n-1) and the successive
    digit-0 attempts at ``event_index + (i, j, 1)``.
    """
    base = StreamKey(seed, _as_path(event_index))
    span = _SpanModP(p)
    columns: list[list] = [None] * N
    for c in range(N - 1, -1, -1):
        low_keys = [base.child(i, c, 1) for i in range(N)]
        for attempt in range(RETRY_CAP):
            low = [k.digit(p, attempt) for k in low_keys]
            if span.insert(low):
                break
        else:
            raise SamplerStuck(f"column {c} not accepted after {RETRY_CAP} draws")
        col = []
        for i in range(N):
            high = base.child(i, c, 0).residue(p, n - 1)
            col.append(_zp_from_residue(low[i] + p * high, p, n))
        columns[c] = col
    return PAdicMatrix(list(zip(*columns)), p, n)


def haar_rejection(seed: int, event_index, p: int, N: int, n: int, with_attempts: bool = False):
    """Haar element of GL_N(Z_p) by whole-matrix rejection.

    All entries uniform on Z_p; reject unless invertible mod p.  Attempt
    ``a`` reads entry (i, j) from path ``event_index + (i, j, a)``.
    """
    base = StreamKey(seed, _as_path(event_index))
    for attempt in range(RETRY_CAP):
        residues = [[base.child(i, j, attempt).residue(p, n) for j in range(N)] for i in range(N)]
        if rank_mod_p([[r % p for r in row] for row in residues], p) == N:
            mat = PAdicMatrix([[_zp_from_residue(r, p, n) for r in row] for row in residues], p, n)
            return (mat, attempt + 1) if with_attempts else mat
    raise SamplerStuck(f"no invertible matrix mod {p} after {RETRY_CAP} draws")


@dataclass(frozen=True)
class SignatureMeasure:
    """Finitely supported probability measure on Sig_N with exact weights."""

    support: tuple[tuple[Signature, Fraction], ...]

    def __post_init__(self):
        if not self.support:
            raise ValueError("empty support")
        fixed = []
        lengths = set()
        for sig, w in self.support:
            sig = Signature(sig)
            w = Fraction(w)
            if w <= 0:
                raise ValueError(f"weight of {sig} must be positive")
            lengths.add(len(sig))
            fixed.append((sig, w))
        if len(lengths) != 1:
            raise ValueError("all signatures must have the same length")
        if sum(w for _, w in fixed) != 1:
            raise ValueError("weights must sum to 1")
        object.__setattr__(self, "support", tuple(fixed))

    @property
    def N(self) -> int:
        return len(self.support[0][0])

    @classmethod
    def point_mass(cls, sig) -> "SignatureMeasure":
        return cls(((Signature(sig), Fraction(1)),))

    @classmethod
    def from_json(cls, data) -> "SignatureMeasure":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple((Signature.from_json(d["sig"]), Fraction(d["w"])) for d in data))

    def to_json(self) -> list:
        return [{"sig": list(s), "w": f"{w.numerator}/{w.denominator}"} for s, w in self.support]


def sample_signature(M: SignatureMeasure, key: StreamKey) -> Signature:
    """Inverse-CDF draw from ``M`` using the key's uniform variate."""
    if len(M.support) == 1:
        return M.support[0][0]
    u = Fraction(key.uniform())
    cum = Fraction(0)
    for sig, w in M.support:
        cum += w
        if u < cum:
            return sig
    return M.support[-1][0]


def derive_seed(seed: int, tag: str) -> int:
    """Independent 64-bit seed for a named sub-experiment."""
    h = hashlib.blake2b(tag.encode(), digest_size=8, key=seed.to_bytes(8, "little"), person=b"derive")
    return int.from_bytes(h.digest(), "little")
