"""Sign-tracking stabilizer tableau simulator.

The tableau keeps n destabilizer rows followed by n stabilizer rows, each an
(x, z) bit pair per qubit plus one sign bit; row phase arithmetic follows the
standard i-exponent bookkeeping so that measurement signs come out exact.
Global phase is never tracked.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitMat, BitVec
from .symplectic import PauliVec, SympMat, symp_inner_bits

GATE_OPS = ("H", "S", "CX")


def _g_exponents(x1, z1, x2, z2):
    """i-exponent contributed per qubit when multiplying row 1 into row 2."""
    x1 = x1.astype(np.int64)
    z1 = z1.astype(np.int64)
    x2 = x2.astype(np.int64)
    z2 = z2.astype(np.int64)
    out = np.zeros_like(x1)
    both = (x1 == 1) & (z1 == 1)
    out = np.where(both, z2 - x2, out)
    xonly = (x1 == 1) & (z1 == 0)
    out = np.where(xonly, z2 * (2 * x2 - 1), out)
    zonly = (x1 == 0) & (z1 == 1)
    out = np.where(zonly, x2 * (1 - 2 * z2), out)
    return out


class StabState:
    """Mutable stabilizer state on n qubits."""

    def __init__(self, n: int, x: np.ndarray, z: np.ndarray, r: np.ndarray):
        self.n = n
        self.x = x
        self.z = z
        self.r = r

    @classmethod
    def zero_state(cls, n: int) -> "StabState":
        x = np.zeros((2 * n, n), dtype=np.uint8)
        z = np.zeros((2 * n, n), dtype=np.uint8)
        r = np.zeros(2 * n, dtype=np.uint8)
        for i in range(n):
            x[i, i] = 1
            z[n + i, i] = 1
        return cls(n, x, z, r)

    def copy(self) -> "StabState":
        return StabState(self.n, self.x.copy(), self.z.copy(), self.r.copy())

    def stabilizer_row(self, j: int):
        """Stabilizer generator j as (PauliVec, sign bit)."""
        return self._row_pauli(self.n + j)

    def destabilizer_row(self, j: int):
        return self._row_pauli(j)

    def _row_pauli(self, i: int):
        xb = sum(int(b) << j for j, b in enumerate(self.x[i]))
        zb = sum(int(b) << j for j, b in enumerate(self.z[i]))
        return PauliVec(self.n, BitVec(2 * self.n, xb | (zb << self.n))), int(self.r[i])

    def check_invariants(self) -> None:
        """Commutation, destabilizer pairing, and joint full rank."""
        n = self.n
        rows = []
        for i in range(2 * n):
            xb = sum(int(b) << j for j, b in enumerate(self.x[i]))
            zb = sum(int(b) << j for j, b in enumerate(self.z[i]))
            rows.append(xb | (zb << n))
        for a in range(n, 2 * n):
            for b in range(n, 2 * n):
                if symp_inner_bits(n, rows[a], rows[b]):
                    raise AssertionError("stabilizers do not commute")
        for a in range(n):
            for b in range(n):
                want = 1 if a == b else 0
                if symp_inner_bits(n, rows[a], rows[n + b]) != want:
                    raise AssertionError("destabilizer pairing broken")
        from .gf2 import rank

        if rank(BitMat(2 * n, 2 * n, tuple(rows))) != 2 * n:
            raise AssertionError("tableau not full rank")

    # -- gates ---------------------------------------------------------------

    def _apply_h(self, a: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, a]
        tmp = self.x[:, a].copy()
        self.x[:, a] = self.z[:, a]
        self.z[:, a] = tmp

    def _apply_s(self, a: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, a]
        self.z[:, a] ^= self.x[:, a]

    def _apply_cx(self, c: int, t: int) -> None:
        self.r ^= self.x[:, c] & self.z[:, t] & (self.x[:, t] ^ self.z[:, c] ^ 1)
        self.x[:, t] ^= self.x[:, c]
        self.z[:, c] ^= self.z[:, t]

    def apply_gate(self, op: str, targets) -> None:
        if op == "H":
            (a,) = targets
            self._apply_h(self._check_index(a))
        elif op == "S":
            (a,) = targets
            self._apply_s(self._check_index(a))
        elif op == "CX":
            c, t = targets
            c, t = self._check_index(c), self._check_index(t)
            if c == t:
                raise ValueError("CX control equals target")
            self._apply_cx(c, t)
        else:
            raise ValueError(f"unknown gate {op!r}")

    def _check_index(self, a: int) -> int:
        if not 0 <= a < self.n:
            raise IndexError(f"qubit index {a} out of range")
        return a

    def apply_pauli(self, p: PauliVec) -> None:
        """Apply a phase-free Pauli: flips the sign of every generator that
        anticommutes with it (global phase untracked)."""
        if p.n != self.n:
            raise ValueError("qubit count mismatch")
        px = np.array([(p.x_bits >> j) & 1 for j in range(self.n)], dtype=np.uint8)
        pz = np.array([(p.z_bits >> j) & 1 for j in range(self.n)], dtype=np.uint8)
        anti = ((self.x @ pz.astype(np.int64)) + (self.z @ px.astype(np.int64))) & 1
        self.r ^= anti.astype(np.uint8)

    # -- row phase bookkeeping -------------------------------------------------

    def _rowsum(self, h: int, i: int) -> None:
        """Row h := row i * row h with exact sign tracking.

        The phase sum is even whenever the rows commute, which holds for all
        stabilizer-row updates; destabilizer sign bits are never read, so an
        odd phase there is harmless.
        """
        phase = 2 * int(self.r[h]) + 2 * int(self.r[i])
        phase += int(_g_exponents(self.x[i], self.z[i], self.x[h], self.z[h]).sum())
        phase %= 4
        if h >= self.n and phase % 2:
            raise AssertionError("odd phase in stabilizer rowsum")
        self.r[h] = (phase % 4) // 2
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    # -- measurement -----------------------------------------------------------

    def measure_pauli(self, p: PauliVec, sign: int = 0, rng=None):
        """Measure the signed Pauli (-1)^sign * P; returns the outcome bit
        (0 for +1, 1 for -1).  Random outcomes require an rng and collapse
        the state; deterministic outcomes leave it untouched."""
        if p.n != self.n:
            raise ValueError("qubit count mismatch")
        px = np.array([(p.x_bits >> j) & 1 for j in range(self.n)], dtype=np.int64)
        pz = np.array([(p.z_bits >> j) & 1 for j in range(self.n)], dtype=np.int64)
        anti = ((self.x @ pz) + (self.z @ px)) & 1
        stab_anti = np.flatnonzero(anti[self.n:])
        if stab_anti.size:
            if rng is None:
                raise ValueError("random measurement outcome requires an rng")
            pidx = self.n + int(stab_anti[0])
            for i in np.flatnonzero(anti):
                if int(i) != pidx:
                    self._rowsum(int(i), pidx)
            self.x[pidx - self.n] = self.x[pidx]
            self.z[pidx - self.n] = self.z[pidx]
            self.r[pidx - self.n] = self.r[pidx]
            outcome = int(rng.integers(0, 2))
            self.x[pidx] = px.astype(np.uint8)
            self.z[pidx] = pz.astype(np.uint8)
            self.r[pidx] = (sign ^ outcome) & 1
            return outcome
        # Deterministic: P = +/- product of stabilizers flagged by the
        # anticommuting destabilizers.
        acc_x = np.zeros(self.n, dtype=np.uint8)
        acc_z = np.zeros(self.n, dtype=np.uint8)
        phase = 0
        for j in np.flatnonzero(anti[: self.n]):
            i = self.n + int(j)
            phase += 2 * int(self.r[i])
            phase += int(_g_exponents(self.x[i], self.z[i], acc_x, acc_z).sum())
            acc_x ^= self.x[i]
            acc_z ^= self.z[i]
        phase %= 4
        if phase % 2:
            raise AssertionError("odd phase in deterministic measurement")
        if not (np.array_equal(acc_x, px.astype(np.uint8)) and np.array_equal(acc_z, pz.astype(np.uint8))):
            raise AssertionError("deterministic measurement reconstruction failed")
        return (phase // 2) ^ (sign & 1)

    def measure_z(self, a: int, rng=None) -> int:
        z_a = PauliVec(self.n, BitVec(2 * self.n, 1 << (self.n + a)))
        return self.measure_pauli(z_a, 0, rng)

    def measure_all_z(self, rng=None) -> BitVec:
        """Measure every qubit in the computational basis, in index order."""
        return BitVec.from_bits([self.measure_z(a, rng) for a in range(self.n)])

    def to_json(self) -> dict:
        xm = BitMat.from_numpy(self.x)
        zm = BitMat.from_numpy(self.z)
        rv = BitVec.from_numpy(self.r)
        return {"n": self.n, "x": xm.to_json(), "z": zm.to_json(), "r": rv.to_hex()}

    @classmethod
    def from_json(cls, obj: dict) -> "StabState":
        n = obj["n"]
        x = BitMat.from_json(obj["x"]).to_numpy()
        z = BitMat.from_json(obj["z"]).to_numpy()
        r = BitVec.from_hex(2 * n, obj["r"]).to_numpy()
        return cls(n, x, z, r)


def prepare_basis_state(n: int, bits: BitVec) -> StabState:
    """Computational basis state |bits>: stabilizers (-1)^{bits_i} Z_i."""
    if bits.n != n:
        raise ValueError("length mismatch")
    state = StabState.zero_state(n)
    for i in range(n):
        state.r[n + i] = bits.bit(i)
    return state


@dataclass(frozen=True)
class CliffordDesc:
    """Clifford operator as a gate sequence plus a terminal Pauli frame.

    gates[0] acts first; the frame (if any) acts last, so the operator is
    Frame * G_m * ... * G_1 up to global phase.
    """

    n: int
    gates: tuple
    frame: PauliVec | None = None

    def __post_init__(self):
        for op, targets in self.gates:
            if op not in GATE_OPS:
                raise ValueError(f"unknown gate {op!r}")
            for t in targets:
                if not 0 <= t < self.n:
                    raise ValueError(f"gate index {t} out of range")
        if self.frame is not None and self.frame.n != self.n:
            raise ValueError("frame qubit count mismatch")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "gates": [{"op": op, "targets": list(t)} for op, t in self.gates],
            "pauli_frame": self.frame.to_json() if self.frame else None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CliffordDesc":
        gates = tuple((g["op"], tuple(g["targets"])) for g in obj["gates"])
        frame = PauliVec.from_json(obj["pauli_frame"]) if obj.get("pauli_frame") else None
        return cls(obj["n"], gates, frame)


def apply_clifford(state: StabState, desc: CliffordDesc) -> None:
    if state.n != desc.n:
        raise ValueError("qubit count mismatch")
    for op, targets in desc.gates:
        state.apply_gate(op, targets)
    if desc.frame is not None:
        state.apply_pauli(desc.frame)


def apply_clifford_inverse(state: StabState, desc: CliffordDesc) -> None:
    """Apply the inverse operator (frame first, then inverted gates;
    S^-1 = S S S exactly, H and CX are involutions)."""
    if desc.frame is not None:
        state.apply_pauli(desc.frame)
    for op, targets in reversed(desc.gates):
        if op == "S":
            for _ in range(3):
                state.apply_gate("S", targets)
        else:
            state.apply_gate(op, targets)


def conjugate_pauli(desc: CliffordDesc, p: PauliVec, sign: int = 0):
    """(P', sign') with (-1)^{sign'} P' = C ((-1)^sign P) C^dagger."""
    n = desc.n
    x = np.array([[(p.x_bits >> j) & 1 for j in range(n)]], dtype=np.uint8)
    z = np.array([[(p.z_bits >> j) & 1 for j in range(n)]], dtype=np.uint8)
    r = np.array([sign & 1], dtype=np.uint8)
    carrier = StabState(n, x, z, r)
    for op, targets in desc.gates:
        carrier.apply_gate(op, targets)
    out_x = sum(int(b) << j for j, b in enumerate(carrier.x[0]))
    out_z = sum(int(b) << j for j, b in enumerate(carrier.z[0]))
    out = PauliVec(n, BitVec(2 * n, out_x | (out_z << n)))
    out_sign = int(carrier.r[0])
    if desc.frame is not None:
        out_sign ^= symp_inner_bits(n, desc.frame.v.bits, out.v.bits)
    return out, out_sign


def symp_of_clifford(desc: CliffordDesc) -> SympMat:
    """Symplectic representation of the Clifford (frame acts trivially)."""
    n = desc.n
    rows = [1 << j for j in range(2 * n)]
    for op, targets in desc.gates:
        _left_mul_gate(rows, n, op, targets)
    return SympMat(n, BitMat(2 * n, 2 * n, tuple(rows)))


def _left_mul_gate(rows, n, op, targets):
    if op == "H":
        (a,) = targets
        rows[a], rows[n + a] = rows[n + a], rows[a]
    elif op == "S":
        (a,) = targets
        rows[n + a] ^= rows[a]
    elif op == "CX":
        c, t = targets
        rows[t] ^= rows[c]
        rows[n + c] ^= rows[n + t]
    else:  # pragma: no cover
        raise ValueError(op)


def clifford_from_symp(t: SympMat, frame: PauliVec | None = None) -> CliffordDesc:
    """Synthesize a gate sequence realizing the symplectic matrix.

    Gaussian elimination over qubit pairs reduces T to the identity with
    left-multiplied generator symplectics (all involutions mod 2), so the
    recorded ops reversed give a circuit whose symplectic action is exactly T.
    """
    n = t.n
    m = list(t.t.row_ints)
    ops = []

    def bit(i, j):
        return (m[i] >> j) & 1

    def emit(op, targets):
        ops.append((op, targets))
        _left_mul_gate(m, n, op, targets)

    def swap(a, b):
        emit("CX", (a, b))
        emit("CX", (b, a))
        emit("CX", (a, b))

    for j in range(n):
        if not bit(j, j):
            if bit(n + j, j):
                emit("H", (j,))
            else:
                found = None
                for i in range(j + 1, n):
                    if bit(i, j) or bit(n + i, j):
                        found = i
                        break
                if found is None:
                    raise ValueError("matrix is not symplectic")
                if not bit(found, j):
                    emit("H", (found,))
                swap(j, found)
        for i in range(n):
            if i != j and bit(i, j):
                emit("CX", (j, i))
        if bit(n + j, j):
            emit("S", (j,))
        for i in range(n):
            if i != j and bit(n + i, j):
                emit("H", (i,))
                emit("CX", (j, i))
                emit("H", (i,))
        # Column n+j: z_j entry is forced to 1 by the symplectic pairing.
        if not bit(n + j, n + j):
            raise ValueError("matrix is not symplectic")
        for i in range(n):
            if i == j:
                continue
            if bit(i, n + j):
                if bit(n + i, n + j):
                    emit("S", (i,))
                emit("H", (i,))
        for i in range(n):
            if i != j and bit(n + i, n + j):
                emit("CX", (i, j))
        if bit(j, n + j):
            emit("S", (j,))
            emit("H", (j,))
            emit("S", (j,))
    ident = [1 << j for j in range(2 * n)]
    if m != ident:
        raise ValueError("matrix is not symplectic")
    return CliffordDesc(t.n, tuple(reversed(ops)), frame)


def random_clifford_desc(n: int, rng: np.random.Generator) -> CliffordDesc:
    """Uniformly random Clifford (mod phase): uniform symplectic matrix
    synthesized to gates, composed with a uniform Pauli frame."""
    from .symplectic import random_clifford_symp

    t = random_clifford_symp(n, rng)
    frame = PauliVec(n, BitVec.random(2 * n, rng))
    return clifford_from_symp(t, frame)


def measure_syndrome(state: StabState, generators, rng=None) -> BitVec:
    """Outcome bits of measuring signed commuting Paulis ``generators``
    (list of (PauliVec, sign)).

    On a Pauli-corrupted code state all outcomes are deterministic and the
    state is left untouched; indeterminate generators are genuinely measured
    (collapsing), which requires an rng.
    """
    paulis = [g[0] for g in generators]
    for i in range(len(paulis)):
        for j in range(i + 1, len(paulis)):
            if symp_inner_bits(state.n, paulis[i].v.bits, paulis[j].v.bits):
                raise ValueError(f"generators {i},{j} do not commute")
    return BitVec.from_bits(
        [state.measure_pauli(p, s, rng) for p, s in generators]
    )


def clifford_stabilizer_generators(desc: CliffordDesc, count: int):
    """Signed images C Z_j C^dagger for j < count (the code stabilizers when
    count = n - k)."""
    n = desc.n
    out = []
    for j in range(count):
        z_j = PauliVec(n, BitVec(2 * n, 1 << (n + j)))
        out.append(conjugate_pauli(desc, z_j, 0))
    return out


def clifford_logical_x_images(desc: CliffordDesc, k: int):
    """Signed images C X_j C^dagger for the last k qubits (the logical X's)."""
    n = desc.n
    out = []
    for j in range(n - k, n):
        x_j = PauliVec(n, BitVec(2 * n, 1 << j))
        out.append(conjugate_pauli(desc, x_j, 0))
    return out
