"""Matrices over Q_p and their singular numbers.

Singular numbers are computed by Smith normal form elimination with
certified pivots.  An independent route via valuations of minor
determinants is provided as an oracle for small matrices.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .errors import PrecisionExhausted, PrimeMismatch, SingularMatrix
from .padic import (
    INF,
    PAdicScalar,
    ZeroAtPrecision,
    add,
    from_integer,
    inv,
    mul,
    neg,
    scalar_from_json,
    scalar_to_json,
)


class Signature(tuple):
    """Weakly decreasing integer tuple (an element of Sig_N)."""

    __slots__ = ()

    def __new__(cls, parts=()):
        parts = tuple(int(x) for x in parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"signature must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def zeros(cls, n: int) -> "Signature":
        return cls((0,) * n)

    @property
    def size(self) -> int:
        """|lambda|, the sum of the parts."""
        return sum(self)

    def multiplicity(self, x: int) -> int:
        return self.count(x)

    def __repr__(self):
        return f"Signature{tuple(self)!r}"

    def to_json(self) -> list:
        return list(self)

    @classmethod
    def from_json(cls, data) -> "Signature":
        if not isinstance(data, list) or not all(isinstance(x, int) for x in data):
            raise ValueError("signature JSON must be an array of integers")
        return cls(data)


def _shift(x, k: int):
    """Multiply a scalar by p**k."""
    if k == 0:
        return x
    if x.__class__ is ZeroAtPrecision:
        return ZeroAtPrecision(x.prime, x.certified_min_valuation + k)
    if x.valuation == INF:
        return x
    return PAdicScalar._raw(x.prime, x.valuation + k, x.unit, x.precision)


class PAdicMatrix:
    """Rectangular matrix of scalars over a single prime.

    ``precision`` is the nominal precision the matrix was built with;
    individual entries may carry less after arithmetic.
    """

    __slots__ = ("entries", "prime", "precision")

    def __init__(self, entries, prime: int, precision: int):
        entries = tuple(tuple(row) for row in entries)
        if not entries or not entries[0]:
            raise ValueError("matrix dimensions must be positive")
        m = len(entries[0])
        for row in entries:
            if len(row) != m:
                raise ValueError("ragged matrix")
            for x in row:
                if x.prime != prime:
                    raise PrimeMismatch(f"entry over p={x.prime} in a p={prime} matrix")
        self.entries = entries
        self.prime = prime
        self.precision = precision

    @classmethod
    def from_integers(cls, rows, p: int, n: int) -> "PAdicMatrix":
        return cls([[from_integer(int(x), p, n) for x in row] for row in rows], p, n)

    @classmethod
    def identity(cls, size: int, p: int, n: int) -> "PAdicMatrix":
        return cls.from_integers([[int(i == j) for j in range(size)] for i in range(size)], p, n)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, PAdicMatrix):
            return NotImplemented
        return self.prime == other.prime and self.entries == other.entries

    def __hash__(self):
        return hash((self.prime, self.entries))

    def __repr__(self):
        return f"PAdicMatrix({self.rows}x{self.cols}, p={self.prime}, prec={self.precision})"

    def transpose(self) -> "PAdicMatrix":
        return PAdicMatrix(list(zip(*self.entries)), self.prime, self.precision)

    def __matmul__(self, other: "PAdicMatrix") -> "PAdicMatrix":
        if self.prime != other.prime:
            raise PrimeMismatch(f"p={self.prime} vs p={other.prime}")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.entries))
        out = []
        for row in self.entries:
            new_row = []
            for col in cols:
                acc = None
                for a, b in zip(row, col):
                    term = mul(a, b)
                    acc = term if acc is None else add(acc, term)
                new_row.append(acc)
            out.append(new_row)
        return PAdicMatrix(out, self.prime, min(self.precision, other.precision))

    def mod_p(self) -> tuple[tuple[int, ...], ...]:
        """Reduction modulo p of a matrix with entries in Z_p."""
        p = self.prime
        out = []
        for row in self.entries:
            r = []
            for x in row:
                if x.__class__ is ZeroAtPrecision:
                    if x.certified_min_valuation < 1:
                        raise PrecisionExhausted("entry not known modulo p")
                    r.append(0)
                elif x.valuation < 0:
                    raise ValueError("entry is not a p-adic integer")
                else:
                    r.append(x.unit % p if x.valuation == 0 else 0)
            out.append(tuple(r))
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "n": self.rows,
            "m": self.cols,
            "p": self.prime,
            "prec": self.precision,
            "entries": [[scalar_to_json(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, d: dict) -> "PAdicMatrix":
        entries = [[scalar_from_json(x) for x in row] for row in d["entries"]]
        mat = cls(entries, int(d["p"]), int(d["prec"]))
        if mat.shape != (int(d["n"]), int(d["m"])):
            raise ValueError("declared shape does not match entries")
        return mat


def left_diag_multiply(kappa, A: PAdicMatrix) -> PAdicMatrix:
    """diag(p**kappa) @ A.  ``kappa`` may be any integer sequence."""
    if len(kappa) != A.rows:
        raise ValueError("dimension mismatch")
    rows = [[_shift(x, k) for x in row] for k, row in zip(kappa, A.entries)]
    return PAdicMatrix(rows, A.prime, A.precision)


def right_diag_multiply(A: PAdicMatrix, kappa) -> PAdicMatrix:
    """A @ diag(p**kappa)."""
    if len(kappa) != A.cols:
        raise ValueError("dimension mismatch")
    rows = [[_shift(x, k) for x, k in zip(row, kappa)] for row in A.entries]
    return PAdicMatrix(rows, A.prime, A.precision)


def singular_numbers(A: PAdicMatrix) -> Signature:
    """SN(A) via Smith normal form.

    Each step pivots on an entry of minimal valuation (lowest (row, col) on
    ties), clears the rest of its column by row operations and drops its
    row and column.  A pivot is only accepted when no entry that vanished
    at the working precision could have a smaller valuation.

    Raises PrecisionExhausted when a pivot cannot be certified and
    SingularMatrix when the remaining block is exactly zero.
    """
    rows = [list(r) for r in A.entries]
    if A.rows > A.cols:
        rows = [list(c) for c in zip(*rows)]
    n, m = len(rows), len(rows[0])
    parts = []
    for s in range(n):
        best_v = INF
        best = None
        zap_min = INF
        for i in range(s, n):
            row = rows[i]
            for j in range(s, m):
                x = row[j]
                if x.__class__ is ZeroAtPrecision:
                    if x.certified_min_valuation < zap_min:
                        zap_min = x.certified_min_valuation
                elif x.valuation < best_v:
                    best_v = x.valuation
                    best = (i, j)
        if best is None:
            if zap_min == INF:
                raise SingularMatrix(f"rank {s} < {n}")
            raise PrecisionExhausted(f"no certified pivot at step {s}")
        if zap_min < best_v:
            raise PrecisionExhausted(
                f"pivot valuation {best_v} not certified below bound {zap_min} at step {s}")
        i0, j0 = best
        if i0 != s:
            rows[s], rows[i0] = rows[i0], rows[s]
        if j0 != s:
            for row in rows:
                row[s], row[j0] = row[j0], row[s]
        pivot_row = rows[s]
        pinv = inv(pivot_row[s])
        for i in range(s + 1, n):
            row = rows[i]
            x = row[s]
            if x.__class__ is not ZeroAtPrecision and x.valuation == INF:
                continue
            f = neg(mul(x, pinv))
            for j in range(s + 1, m):
                y = pivot_row[j]
                if y.__class__ is not ZeroAtPrecision and y.valuation == INF:
                    continue
                row[j] = add(row[j], mul(f, y))
        parts.append(best_v)
    return Signature(sorted(parts, reverse=True))


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def determinant(rows, p: int, n: int):
    """Leibniz expansion of a square block of scalars (exact, desk scale only)."""
    k = len(rows)
    acc = PAdicScalar.zero(p, n)
    minus_one = from_integer(-1, p, n)
    for perm in permutations(range(k)):
        term = None
        for i, j in enumerate(perm):
            x = rows[i][j]
            if x.__class__ is not ZeroAtPrecision and x.valuation == INF:
                term = None
                break
            term = x if term is None else mul(term, x)
        else:
            if _perm_sign(perm) < 0:
                term = mul(term, minus_one)
            acc = add(acc, term)
    return acc


def det_valuation(A: PAdicMatrix):
    """Valuation of det(A) for square A (``inf`` if the determinant is exactly 0)."""
    if A.rows != A.cols:
        raise ValueError("det_valuation needs a square matrix")
    d = determinant(A.entries, A.prime, A.precision)
    if d.__class__ is ZeroAtPrecision:
        raise PrecisionExhausted("determinant vanishes at working precision")
    return d.valuation


def singular_numbers_minor_oracle(A: PAdicMatrix) -> Signature:
    """SN(A) from minimal valuations of k x k minor determinants.

    lambda_n + ... + lambda_{n-k+1} is the least valuation over all k x k
    minors; parts are recovered by successive differences.  Cost grows
    combinatorially, so keep n <= 5.
    """
    rows = A.entries
    if A.rows > A.cols:
        rows = tuple(zip(*rows))
    n, m = len(rows), len(rows[0])
    p, prec = A.prime, A.precision
    tail_sums = []
    for k in range(1, n + 1):
        best = INF
        zap_min = INF
        for R in combinations(range(n), k):
            sub_rows = [rows[i] for i in R]
            for C in combinations(range(m), k):
                d = determinant([[r[j] for j in C] for r in sub_rows], p, prec)
                if d.__class__ is ZeroAtPrecision:
                    zap_min = min(zap_min, d.certified_min_valuation)
                elif d.valuation < best:
                    best = d.valuation
        if best == INF:
            if zap_min == INF:
                raise SingularMatrix(f"all {k}x{k} minors vanish")
            raise PrecisionExhausted(f"minimal {k}x{k} minor not certified")
        if zap_min < best:
            raise PrecisionExhausted(f"minimal {k}x{k} minor not certified")
        tail_sums.append(best)
    parts = [0] * n
    prev = 0
    for k, s in enumerate(tail_sums, start=1):
        parts[n - k] = s - prev
        prev = s
    return Signature(parts)
