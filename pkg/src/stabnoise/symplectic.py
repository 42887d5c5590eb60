"""Symplectic structure over GF(2)^(2n).

A phase-free n-qubit Pauli is a length-2n bit vector: bits 0..n-1 hold the X
part, bits n..2n-1 the Z part, so per qubit (0,0)=I, (1,0)=X, (0,1)=Z,
(1,1)=Y.  The symplectic form Omega = [[0, I], [I, 0]] makes the inner
product v.T Omega w vanish exactly when the Paulis commute.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gf2 import BitMat, BitVec, InfeasibleSystemError, rank

_LETTERS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_PAIRS = {v: k for k, v in _LETTERS.items()}


@dataclass(frozen=True)
class PauliVec:
    """Phase-free n-qubit Pauli in symplectic representation."""

    n: int
    v: BitVec

    def __post_init__(self):
        if self.v.n != 2 * self.n:
            raise ValueError("vector length must be 2n")

    @classmethod
    def zeros(cls, n: int) -> "PauliVec":
        return cls(n, BitVec.zeros(2 * n))

    @classmethod
    def from_int(cls, n: int, word: int) -> "PauliVec":
        return cls(n, BitVec.from_int(2 * n, word))

    @property
    def x_bits(self) -> int:
        return self.v.bits & ((1 << self.n) - 1)

    @property
    def z_bits(self) -> int:
        return self.v.bits >> self.n

    def letter(self, i: int) -> str:
        return _PAIRS[((self.x_bits >> i) & 1, (self.z_bits >> i) & 1)]

    def letters(self) -> str:
        return "".join(self.letter(i) for i in range(self.n))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "x_hex": BitVec(self.n, self.x_bits).to_hex(),
            "z_hex": BitVec(self.n, self.z_bits).to_hex(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PauliVec":
        n = obj["n"]
        x = BitVec.from_hex(n, obj["x_hex"])
        z = BitVec.from_hex(n, obj["z_hex"])
        return cls(n, BitVec(2 * n, x.bits | (z.bits << n)))


def symp_of_pauli(letters: str) -> PauliVec:
    """Map a Pauli string over {I,X,Y,Z} to its symplectic vector."""
    n = len(letters)
    x = z = 0
    for i, c in enumerate(letters):
        try:
            xb, zb = _LETTERS[c]
        except KeyError:
            raise ValueError(f"invalid Pauli symbol {c!r}") from None
        x |= xb << i
        z |= zb << i
    return PauliVec(n, BitVec(2 * n, x | (z << n)))


def pauli_of_symp(p: PauliVec) -> str:
    """Inverse of symp_of_pauli."""
    return p.letters()


def symp_inner(v: PauliVec, w: PauliVec) -> int:
    """v.T Omega w over GF(2); 0 iff the Paulis commute."""
    if v.n != w.n:
        raise ValueError("qubit count mismatch")
    acc = (v.x_bits & w.z_bits).bit_count() + (v.z_bits & w.x_bits).bit_count()
    return acc & 1


def symp_inner_bits(n: int, a: int, b: int) -> int:
    """symp_inner on raw 2n-bit ints (hot path helper)."""
    mask = (1 << n) - 1
    ax, az = a & mask, a >> n
    bx, bz = b & mask, b >> n
    return ((ax & bz).bit_count() + (az & bx).bit_count()) & 1


def omega_mul(v: BitVec) -> BitVec:
    """Apply the symplectic form: swap the X and Z halves."""
    if v.n % 2:
        raise ValueError("length must be even")
    n = v.n // 2
    mask = (1 << n) - 1
    return BitVec(v.n, ((v.bits & mask) << n) | (v.bits >> n))


def pauli_weight(p: PauliVec) -> int:
    """Number of qubits on which the Pauli is not the identity."""
    return (p.x_bits | p.z_bits).bit_count()


def pauli_mul(v: PauliVec, w: PauliVec) -> PauliVec:
    """Phase-free Pauli product = bitwise sum of symplectic vectors."""
    if v.n != w.n:
        raise ValueError("qubit count mismatch")
    return PauliVec(v.n, v.v ^ w.v)


@dataclass(frozen=True)
class IsotropicSet:
    """Columns of a 2n x m bit matrix, pairwise symplectically orthogonal
    and linearly independent."""

    n: int
    columns: BitMat

    def __post_init__(self):
        if self.columns.rows != 2 * self.n:
            raise ValueError("columns must have 2n rows")

    def validate(self) -> None:
        cols = [self.columns.col(j) for j in range(self.columns.cols)]
        for i in range(len(cols)):
            for j in range(i + 1, len(cols)):
                if symp_inner_bits(self.n, cols[i].bits, cols[j].bits):
                    raise ValueError(f"columns {i},{j} are not symplectically orthogonal")
        if rank(self.columns.transpose()) != self.columns.cols:
            raise ValueError("columns are not linearly independent")

    def column_vectors(self):
        return [self.columns.col(j) for j in range(self.columns.cols)]


@dataclass(frozen=True)
class SympMat:
    """2n x 2n symplectic matrix: column j is the image of X_{j}'s symplectic
    basis vector, column n+j the image of Z_{j}'s."""

    n: int
    t: BitMat

    def __post_init__(self):
        if self.t.rows != 2 * self.n or self.t.cols != 2 * self.n:
            raise ValueError("matrix must be 2n x 2n")

    def validate(self) -> None:
        if not is_symplectic(self.t):
            raise ValueError("matrix does not preserve the symplectic form")

    def mul_vec(self, v: BitVec) -> BitVec:
        return self.t.mul_vec(v)

    def apply_pauli(self, p: PauliVec) -> PauliVec:
        return PauliVec(self.n, self.t.mul_vec(p.v))

    def column(self, j: int) -> BitVec:
        return self.t.col(j)

    def inverse(self) -> "SympMat":
        # T^-1 = Omega T.T Omega for symplectic T.
        tt = self.t.transpose()
        n = self.n
        rows = list(tt.row_ints)
        swapped = rows[n:] + rows[:n]
        mask = (1 << n) - 1
        out = [((r & mask) << n) | (r >> n) for r in swapped]
        return SympMat(n, BitMat(2 * n, 2 * n, tuple(out)))

    def to_json(self) -> dict:
        d = self.t.to_json()
        d["n"] = self.n
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "SympMat":
        return cls(obj["n"], BitMat.from_json(obj))


def is_symplectic(t: BitMat) -> bool:
    if t.rows != t.cols or t.rows % 2:
        return False
    n = t.rows // 2
    cols = [t.col(j) for j in range(2 * n)]
    for i in range(2 * n):
        for j in range(i, 2 * n):
            want = 1 if abs(i - j) == n else 0
            if symp_inner_bits(n, cols[i].bits, cols[j].bits) != want:
                return False
    return True


class _SpanFilter:
    """Membership tests against the GF(2) span of a vector set."""

    __slots__ = ("rows",)

    def __init__(self, vectors):
        self.rows = {}
        for v in vectors:
            self.add(v)

    def add(self, v: int) -> None:
        v = self._reduce(v)
        if v:
            self.rows[(v & -v).bit_length() - 1] = v

    def _reduce(self, v: int) -> int:
        while v:
            c = (v & -v).bit_length() - 1
            row = self.rows.get(c)
            if row is None:
                break
            v ^= row
        return v

    def member(self, v: int) -> bool:
        return self._reduce(v) == 0


def sample_symplectic_solution(
    n: int,
    rng: np.random.Generator,
    commute_with=(),
    anticommute_with=(),
    exclude_span=None,
):
    """Uniform vector v in GF(2)^(2n) with <u,v> = 0 for u in commute_with,
    <w,v> = 1 for w in anticommute_with, and v outside span(exclude_span).

    ``exclude_span=None`` means no exclusion; any list (even empty) excludes
    the span of the listed vectors, which always contains zero, so passing a
    list demands linear independence.  Raises InfeasibleSystemError when no
    valid vector exists.  Constraints are rows u.T Omega of a linear system;
    exclusion is by rejection after an exact feasibility check, which keeps
    the output uniform over the valid set.
    """

    def bits_of(u):
        return u.bits if isinstance(u, BitVec) else int(u)

    rref = _Rref(2 * n)
    for u in commute_with:
        rref.insert(_omega_bits(n, bits_of(u)), 0)
    for w in anticommute_with:
        if not rref.insert(_omega_bits(n, bits_of(w)), 1):
            raise InfeasibleSystemError("constraint system has no solution")
    if exclude_span is None:
        return BitVec(2 * n, rref.sample(rng))
    span = _SpanFilter(bits_of(v) for v in exclude_span)
    x0 = rref.sample(rng)
    # Null basis vector for free column f: bit f plus back-substituted pivots.
    free_cols = [f for f in range(2 * n) if not (rref.pivot_mask >> f) & 1]
    basis_in_span = all(
        span.member(
            (1 << f)
            | sum((((row >> f) & 1) << c) for c, (row, _) in rref.rows.items())
        )
        for f in free_cols
    )
    if basis_in_span and span.member(x0):
        raise InfeasibleSystemError("all solutions lie in the excluded span")
    for _ in range(10_000):
        v = rref.sample(rng)
        if not span.member(v):
            return BitVec(2 * n, v)
    raise RuntimeError("rejection sampling failed to terminate")  # pragma: no cover


def sample_isotropic_extension(
    n: int,
    existing,
    m: int,
    rng: np.random.Generator,
    commute_with=(),
    anticommute_with=(),
) -> IsotropicSet:
    """Extend an isotropic set by m uniformly random columns.

    Each new column is uniform among vectors that are linearly independent of
    everything drawn so far, symplectically orthogonal to the existing set,
    the previously drawn columns, and ``commute_with``, and anticommuting
    with every vector of ``anticommute_with``.
    """
    if existing is None:
        base = []
    elif isinstance(existing, IsotropicSet):
        base = existing.column_vectors()
    else:
        base = list(existing)
    cols = list(base)
    for _ in range(m):
        v = sample_symplectic_solution(
            n,
            rng,
            commute_with=list(cols) + list(commute_with),
            anticommute_with=anticommute_with,
            exclude_span=cols,
        )
        cols.append(v)
    mat = BitMat.from_rows([c.bits for c in cols], 2 * n).transpose()
    out = IsotropicSet(n, mat)
    out.validate()
    return out


class _Rref:
    """Incremental reduced row echelon form over GF(2) with carried rhs bits,
    on int-packed rows (hot path for constrained sampling)."""

    __slots__ = ("width", "rows", "pivot_mask")

    def __init__(self, width: int):
        self.width = width
        self.rows = {}  # pivot column -> (row, rhs); rows touch no other pivots
        self.pivot_mask = 0

    def copy(self) -> "_Rref":
        out = _Rref(self.width)
        out.rows = dict(self.rows)
        out.pivot_mask = self.pivot_mask
        return out

    def insert(self, row: int, rhs: int) -> bool:
        """Add a constraint; returns False when it is inconsistent."""
        rem = row & self.pivot_mask
        while rem:
            c = (rem & -rem).bit_length() - 1
            r2, b2 = self.rows[c]
            row ^= r2
            rhs ^= b2
            rem = row & self.pivot_mask
        if row == 0:
            return rhs == 0
        c = (row & -row).bit_length() - 1
        bit = 1 << c
        for c2, (r2, b2) in list(self.rows.items()):
            if r2 & bit:
                self.rows[c2] = (r2 ^ row, b2 ^ rhs)
        self.rows[c] = (row, rhs)
        self.pivot_mask |= bit
        return True

    def sample(self, rng: np.random.Generator) -> int:
        """Uniform solution: free bits random, pivots back-substituted."""
        nbytes = (self.width + 7) // 8
        v = int.from_bytes(rng.bytes(nbytes), "little")
        v &= ((1 << self.width) - 1) & ~self.pivot_mask
        for c, (row, rhs) in self.rows.items():
            bit = rhs ^ ((row & v).bit_count() & 1)
            v |= bit << c
        return v


def _omega_bits(n: int, v: int) -> int:
    mask = (1 << n) - 1
    return ((v & mask) << n) | (v >> n)


def random_clifford_symp(n: int, rng: np.random.Generator) -> SympMat:
    """Uniform 2n x 2n symplectic matrix over GF(2).

    Images of X_j and Z_j are drawn qubit by qubit under the pairing
    constraints; the number of valid choices at each step does not depend on
    the history, so the output is exactly uniform over Sp(2n, GF(2)).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    perp = _Rref(2 * n)  # constraints <img, v> = 0 for every drawn image
    cols = []
    for _ in range(n):
        while True:
            xv = perp.sample(rng)
            if xv:
                break
        with_pair = perp.copy()
        with_pair.insert(_omega_bits(n, xv), 1)
        zv = with_pair.sample(rng)
        cols.append((xv, zv))
        perp.insert(_omega_bits(n, xv), 0)
        perp.insert(_omega_bits(n, zv), 0)
    ints = [c[0] for c in cols] + [c[1] for c in cols]
    t = BitMat.from_rows(ints, 2 * n).transpose()
    return SympMat(n, t)


def count_tableaus(n: int, m: int) -> int:
    """Number of ordered lists of m independent, mutually commuting,
    nonzero symplectic vectors in GF(2)^(2n)."""
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    out = 1
    for i in range(1, m + 1):
        out *= (1 << (2 * n - i + 1)) - (1 << (i - 1))
    return out


def gl_order(r: int) -> int:
    """Order of GL_r(GF(2))."""
    if r < 0:
        raise ValueError("negative dimension")
    out = 1
    for i in range(r):
        out *= (1 << r) - (1 << i)
    return out


def count_codes(n: int, k: int) -> int:
    """Number of [[n, k]] stabilizer subgroups (unordered, sign-free)."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    total = count_tableaus(n, n - k)
    order = gl_order(n - k)
    if total % order:
        raise AssertionError("tableau count not divisible by basis count")
    return total // order


def _log2_big(x: int) -> float:
    if x <= 0:
        raise ValueError("log2 of non-positive value")
    exp = max(x.bit_length() - 53, 0)
    return math.log2(x >> exp) + exp


def sparse_bound(n: int, d: int, k: int = 0):
    """Counting bounds behind the sparse no-go: (log2 of the number of
    [[n, k]] codes, upper bound on log2 of the number of column-d-sparse
    2n x 2n bit matrices)."""
    if not 0 <= d <= 2 * n:
        raise ValueError("need 0 <= d <= 2n")
    codes_log2 = _log2_big(count_codes(n, k))
    col_count = sum(math.comb(2 * n, i) for i in range(d + 1))
    sparse_log2 = 2 * n * _log2_big(col_count)
    return codes_log2, sparse_log2
