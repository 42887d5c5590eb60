"""Shared test oracles: dense statevector simulation and explicit complex
Pauli matrices, independent of the tableau code paths they check."""
import numpy as np

I2 = np.eye(2, dtype=complex)
PX = np.array([[0, 1], [1, 0]], dtype=complex)
PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
PZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_1Q = {"I": I2, "X": PX, "Y": PY, "Z": PZ}
H_MAT = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S_MAT = np.array([[1, 0], [0, 1j]], dtype=complex)


def single_qubit_op(n, mat, a):
    """Embed a 2x2 matrix on qubit a (qubit i = bit i of the basis index)."""
    out = np.array([[1]], dtype=complex)
    for i in range(n):
        out = np.kron(mat if i == a else I2, out)
    return out


def cx_matrix(n, c, t):
    m = np.zeros((2**n, 2**n), dtype=complex)
    for b in range(2**n):
        bits = [(b >> i) & 1 for i in range(n)]
        if bits[c]:
            bits[t] ^= 1
        m[sum(bit << i for i, bit in enumerate(bits)), b] = 1
    return m


def gate_matrix(n, op, targets):
    if op == "CX":
        return cx_matrix(n, *targets)
    return single_qubit_op(n, {"H": H_MAT, "S": S_MAT}[op], targets[0])


def pauli_matrix_letters(letters):
    out = np.array([[1]], dtype=complex)
    for c in letters:
        out = np.kron(PAULI_1Q[c], out)
    return out


def pauli_matrix(p):
    """Dense matrix of a PauliVec."""
    return pauli_matrix_letters(p.letters())


def clifford_matrix(desc):
    """Dense unitary of a CliffordDesc (gates then frame)."""
    n = desc.n
    u = np.eye(2**n, dtype=complex)
    for op, t in desc.gates:
        u = gate_matrix(n, op, t) @ u
    if desc.frame is not None:
        u = pauli_matrix(desc.frame) @ u
    return u


def statevector_distribution(n, gates, pauli=None, start=0):
    """Measurement distribution of Pauli * gates |start>."""
    v = np.zeros(2**n, dtype=complex)
    v[start] = 1
    for op, t in gates:
        v = gate_matrix(n, op, t) @ v
    if pauli is not None:
        v = pauli_matrix(pauli) @ v
    return np.abs(v) ** 2


def random_gate_sequence(n, length, rng):
    gates = []
    for _ in range(length):
        op = ["H", "S", "CX"][int(rng.integers(0, 3))]
        if op == "CX":
            if n < 2:
                continue
            c, t = rng.choice(n, 2, replace=False)
            gates.append(("CX", (int(c), int(t))))
        else:
            gates.append((op, (int(rng.integers(0, n)),)))
    return gates
