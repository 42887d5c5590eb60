"""Dense GF(2) linear algebra on bit-packed vectors and matrices.

Bit j of a row is column j; packing is least-significant-bit-first, so bit j
of the Python int backing a row is ``(word >> j) & 1``.  Serialized rows are
``ceil(cols/8)`` bytes, LSB-first within each byte, lowercase hex.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InfeasibleSystemError(ValueError):
    """Raised when a constrained sampling problem has no solution."""


def _mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class BitVec:
    """Immutable bit vector of length ``n`` packed LSB-first into an int."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative length")
        if self.bits >> self.n:
            raise ValueError("set bits beyond length")

    @classmethod
    def zeros(cls, n: int) -> "BitVec":
        return cls(n, 0)

    @classmethod
    def from_bits(cls, bits) -> "BitVec":
        bits = list(bits)
        return cls(len(bits), sum((int(b) & 1) << j for j, b in enumerate(bits)))

    @classmethod
    def from_int(cls, n: int, word: int) -> "BitVec":
        return cls(n, word & _mask(n))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BitVec":
        nbytes = (n + 7) // 8
        word = int.from_bytes(rng.bytes(nbytes), "little") if nbytes else 0
        return cls(n, word & _mask(n))

    def bit(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVec(self.n, self.bits ^ other.bits)

    def dot(self, other: "BitVec") -> int:
        """Inner product over GF(2)."""
        if self.n != other.n:
            raise ValueError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def concat(self, other: "BitVec") -> "BitVec":
        return BitVec(self.n + other.n, self.bits | (other.bits << self.n))

    def slice(self, start: int, stop: int) -> "BitVec":
        if not 0 <= start <= stop <= self.n:
            raise IndexError((start, stop))
        return BitVec(stop - start, (self.bits >> start) & _mask(stop - start))

    def to_tuple(self) -> tuple:
        return tuple((self.bits >> j) & 1 for j in range(self.n))

    def to_numpy(self) -> np.ndarray:
        return np.array(self.to_tuple(), dtype=np.uint8)

    @classmethod
    def from_numpy(cls, arr) -> "BitVec":
        arr = np.asarray(arr).astype(np.uint8) & 1
        return cls(len(arr), sum(int(b) << j for j, b in enumerate(arr)))

    def to_hex(self) -> str:
        nbytes = (self.n + 7) // 8
        return self.bits.to_bytes(nbytes, "little").hex()

    @classmethod
    def from_hex(cls, n: int, s: str) -> "BitVec":
        word = int.from_bytes(bytes.fromhex(s), "little")
        if word >> n:
            raise ValueError("nonzero padding bits")
        return cls(n, word)


@dataclass(frozen=True)
class BitMat:
    """Immutable row-major bit matrix; each row packed like a BitVec."""

    rows: int
    cols: int
    row_ints: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative shape")
        if len(self.row_ints) != self.rows:
            raise ValueError("row count mismatch")
        m = _mask(self.cols)
        if any(r & ~m for r in self.row_ints):
            raise ValueError("set bits beyond column count")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMat":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMat":
        return cls(n, n, tuple(1 << j for j in range(n)))

    @classmethod
    def from_rows(cls, rows, cols: int) -> "BitMat":
        ints = tuple(r.bits if isinstance(r, BitVec) else int(r) for r in rows)
        return cls(len(ints), cols, ints)

    @classmethod
    def random(cls, rows: int, cols: int, rng: np.random.Generator) -> "BitMat":
        return cls(rows, cols, tuple(BitVec.random(cols, rng).bits for _ in range(rows)))

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, self.row_ints[i])

    def col(self, j: int) -> BitVec:
        if not 0 <= j < self.cols:
            raise IndexError(j)
        word = 0
        for i, r in enumerate(self.row_ints):
            word |= ((r >> j) & 1) << i
        return BitVec(self.rows, word)

    def bit(self, i: int, j: int) -> int:
        if not 0 <= j < self.cols:
            raise IndexError(j)
        return (self.row_ints[i] >> j) & 1

    def mul_vec(self, v: BitVec) -> BitVec:
        """Matrix-vector product A @ v over GF(2)."""
        if v.n != self.cols:
            raise ValueError("dimension mismatch")
        word = 0
        for i, r in enumerate(self.row_ints):
            word |= ((r & v.bits).bit_count() & 1) << i
        return BitVec(self.rows, word)

    def matmul(self, other: "BitMat") -> "BitMat":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.transpose()
        out = []
        for r in self.row_ints:
            word = 0
            for j, c in enumerate(ot.row_ints):
                word |= ((r & c).bit_count() & 1) << j
            out.append(word)
        return BitMat(self.rows, other.cols, tuple(out))

    def transpose(self) -> "BitMat":
        out = [0] * self.cols
        for i, r in enumerate(self.row_ints):
            while r:
                j = (r & -r).bit_length() - 1
                out[j] |= 1 << i
                r &= r - 1
        return BitMat(self.cols, self.rows, tuple(out))

    def vstack(self, other: "BitMat") -> "BitMat":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return BitMat(self.rows + other.rows, self.cols, self.row_ints + other.row_ints)

    def hstack(self, other: "BitMat") -> "BitMat":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        ints = tuple(a | (b << self.cols) for a, b in zip(self.row_ints, other.row_ints))
        return BitMat(self.rows, self.cols + other.cols, ints)

    def submatrix_rows(self, start: int, stop: int) -> "BitMat":
        return BitMat(stop - start, self.cols, self.row_ints[start:stop])

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self.row_ints):
            for j in range(self.cols):
                out[i, j] = (r >> j) & 1
        return out

    @classmethod
    def from_numpy(cls, arr) -> "BitMat":
        arr = np.asarray(arr).astype(np.uint8) & 1
        rows = [sum(int(b) << j for j, b in enumerate(row)) for row in arr]
        return cls(arr.shape[0], arr.shape[1], tuple(rows))

    def to_json(self) -> dict:
        nbytes = (self.cols + 7) // 8
        return {
            "rows": self.rows,
            "cols": self.cols,
            "data": [r.to_bytes(nbytes, "little").hex() for r in self.row_ints],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BitMat":
        cols = obj["cols"]
        ints = []
        for s in obj["data"]:
            word = int.from_bytes(bytes.fromhex(s), "little")
            if word >> cols:
                raise ValueError("nonzero padding bits")
            ints.append(word)
        if len(ints) != obj["rows"]:
            raise ValueError("row count mismatch")
        return cls(obj["rows"], cols, tuple(ints))


def _rref(row_ints, ncols):
    """Reduced row echelon form over GF(2); returns (rows, pivot columns)."""
    rows = list(row_ints)
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if (rows[i] >> c) & 1:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and (rows[i] >> c) & 1:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(a: BitMat) -> int:
    """Row rank of ``a`` over GF(2)."""
    _, pivots = _rref(a.row_ints, a.cols)
    return len(pivots)


def solve_random(a: BitMat, b: BitVec, rng: np.random.Generator):
    """Uniformly random x with A x = b, or None if the system is infeasible.

    Free variables are drawn uniformly, then pivots are back-substituted, so
    the output is exactly uniform over the full solution coset.
    """
    if b.n != a.rows:
        raise ValueError("dimension mismatch")
    aug = [r | (b.bit(i) << a.cols) for i, r in enumerate(a.row_ints)]
    rows, pivots = _rref(aug, a.cols)
    coeff_mask = _mask(a.cols)
    for r in rows[len(pivots):]:
        if r:  # zero coefficients, nonzero rhs
            return None
    free = [c for c in range(a.cols) if c not in set(pivots)]
    x = 0
    if free:
        draw = BitVec.random(len(free), rng)
        for k, c in enumerate(free):
            x |= draw.bit(k) << c
    for r, c in zip(rows, pivots):
        val = ((r >> a.cols) & 1) ^ ((r & coeff_mask & x).bit_count() & 1)
        x |= val << c
    return BitVec(a.cols, x)


def nullspace_basis(a: BitMat):
    """Basis of {x : A x = 0} as a list of BitVec; size = cols - rank."""
    rows, pivots = _rref(a.row_ints, a.cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(a.cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for r, c in zip(rows, pivots):
            if (r >> f) & 1:
                v |= 1 << c
        basis.append(BitVec(a.cols, v))
    return basis


def random_invertible(n: int, rng: np.random.Generator) -> BitMat:
    """Uniform sample from GL_n(GF(2)) by rejection from uniform matrices."""
    if n < 1:
        raise ValueError("n must be >= 1")
    while True:
        m = BitMat.random(n, n, rng)
        if rank(m) == n:
            return m


def in_span(vectors, v: BitVec) -> bool:
    """Whether v lies in the GF(2) span of ``vectors``."""
    rows = [w.bits for w in vectors]
    red, pivots = _rref(rows, v.n)
    residue = v.bits
    for r, c in zip(red, pivots):
        if (residue >> c) & 1:
            residue ^= r
    return residue == 0
