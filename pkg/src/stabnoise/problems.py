"""Instance types and samplers for the decoding problems.

Every sampler takes a ``structured`` flag and an explicit rng; instances
carry their generating secrets as hidden metadata so harnesses can score
distinguishers and verify reductions against ground truth.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gf2 import BitMat, BitVec, nullspace_basis, rank
from .noise import BernParam, DepolParam, sample_bernoulli, sample_depol
from .stabsim import (
    CliffordDesc,
    StabState,
    apply_clifford,
    prepare_basis_state,
    random_clifford_desc,
)
from .symplectic import (
    IsotropicSet,
    PauliVec,
    omega_mul,
    pauli_weight,
    sample_symplectic_solution,
    symp_inner_bits,
)


@dataclass
class LpnInstance:
    """Classical LPN sample: (A, y) with y = A x + e when structured."""

    k: int
    n: int
    p: BernParam
    a: BitMat
    y: BitVec
    hidden: dict | None = None


@dataclass
class SympLpnInstance:
    """(A, z) with A a full-rank 2n x n matrix whose columns are pairwise
    symplectically orthogonal; structured z = A x + e with e a depolarizing
    Pauli in symplectic form."""

    n: int
    p: DepolParam
    a: BitMat
    z: BitVec
    hidden: dict | None = None


@dataclass
class LsnClassicalSample:
    a: BitMat  # 2n x n
    b: BitMat  # 2n x k
    z: BitVec  # 2n


@dataclass
class LsnClassicalInstance:
    """Classical-representation stabilizer decoding samples
    ([A_i | B_i], z_i) sharing the secret y across samples."""

    k: int
    n: int
    p: DepolParam
    m: int
    samples: list
    hidden: dict | None = None


@dataclass
class LsnQuantumSample:
    clifford: CliffordDesc
    state: StabState


@dataclass
class LsnQuantumInstance:
    """Noisy random-code states (C_i, E_i C_i |0^{n-k}, x>) sharing x."""

    k: int
    n: int
    p: DepolParam
    m: int
    samples: list
    hidden: dict | None = None


@dataclass
class QsdpInstance:
    """Worst-case syndrome decoding: check matrix rows are the stabilizer
    generators in symplectic form; v = H Omega e with wt(e) <= w and the
    code distance promise d >= 2w + 1."""

    n: int
    k: int
    w: int
    h: BitMat  # (n-k) x 2n
    v: BitVec
    hidden: dict | None = None


def sample_lpn(k: int, n: int, p, structured: bool, rng: np.random.Generator) -> LpnInstance:
    """LPN(k, n, p) sampler; unstructured draws y uniform."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    pp = p if isinstance(p, BernParam) else BernParam(p)
    a = BitMat.random(n, k, rng)
    if structured:
        x = BitVec.random(k, rng)
        e = sample_bernoulli(n, pp.p, rng)
        y = a.mul_vec(x) ^ e
        hidden = {"structured": True, "x": x, "e": e}
    else:
        y = BitVec.random(n, rng)
        hidden = {"structured": False}
    return LpnInstance(k, n, pp, a, y, hidden)


def sample_isotropic_matrix(n: int, cols: int, rng: np.random.Generator) -> BitMat:
    """Uniform 2n x cols full-rank matrix with pairwise symplectically
    orthogonal columns (column count at each draw is history-independent,
    so the output is exactly uniform)."""
    drawn = []
    for _ in range(cols):
        v = sample_symplectic_solution(n, rng, commute_with=drawn, exclude_span=drawn)
        drawn.append(v)
    return BitMat.from_rows([v.bits for v in drawn], 2 * n).transpose()


def sample_lsn_pair(n: int, k: int, rng: np.random.Generator):
    """Uniform valid ([A | B]) pair: A isotropic full rank 2n x n, B columns
    pairwise orthogonal, jointly independent."""
    a = sample_isotropic_matrix(n, n, rng)
    a_cols = [a.col(j) for j in range(n)]
    b_cols = []
    for _ in range(k):
        v = sample_symplectic_solution(
            n, rng, commute_with=b_cols, exclude_span=a_cols + b_cols
        )
        b_cols.append(v)
    b = BitMat.from_rows([v.bits for v in b_cols], 2 * n).transpose()
    return a, b


def sample_symplpn(n: int, p, structured: bool, rng: np.random.Generator) -> SympLpnInstance:
    pp = p if isinstance(p, DepolParam) else DepolParam(p)
    a = sample_isotropic_matrix(n, n, rng)
    if structured:
        x = BitVec.random(n, rng)
        err = sample_depol(n, pp.p, rng)
        z = a.mul_vec(x) ^ err.v
        hidden = {"structured": True, "x": x, "e": err}
    else:
        z = BitVec.random(2 * n, rng)
        hidden = {"structured": False}
    return SympLpnInstance(n, pp, a, z, hidden)


def sample_lsn_classical(
    k: int, n: int, p, m: int, structured: bool, rng: np.random.Generator
) -> LsnClassicalInstance:
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n (k = 0 leaves no secret to learn)")
    pp = p if isinstance(p, DepolParam) else DepolParam(p)
    y = BitVec.random(k, rng)
    samples = []
    junk, errs = [], []
    for _ in range(m):
        a, b = sample_lsn_pair(n, k, rng)
        if structured:
            r = BitVec.random(n, rng)
            err = sample_depol(n, pp.p, rng)
            z = a.mul_vec(r) ^ b.mul_vec(y) ^ err.v
            junk.append(r)
            errs.append(err)
        else:
            z = BitVec.random(2 * n, rng)
        samples.append(LsnClassicalSample(a, b, z))
    hidden = {"structured": structured}
    if structured:
        hidden.update({"y": y, "r": junk, "e": errs})
    return LsnClassicalInstance(k, n, pp, m, samples, hidden)


def sample_lsn_quantum(
    k: int, n: int, p, m: int, structured: bool, rng: np.random.Generator
) -> LsnQuantumInstance:
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    pp = p if isinstance(p, DepolParam) else DepolParam(p)
    x = BitVec.random(k, rng)
    samples, errs = [], []
    for _ in range(m):
        desc = random_clifford_desc(n, rng)
        if structured:
            bits = BitVec.zeros(n - k).concat(x)
            state = prepare_basis_state(n, bits)
            apply_clifford(state, desc)
            err = sample_depol(n, pp.p, rng)
            state.apply_pauli(err)
            errs.append(err)
        else:
            # Uniform Pauli on C|0^n> realizes the maximally mixed state.
            state = prepare_basis_state(n, BitVec.zeros(n))
            apply_clifford(state, desc)
            scrambler = PauliVec(n, BitVec.random(2 * n, rng))
            state.apply_pauli(scrambler)
            errs.append(scrambler)
        samples.append(LsnQuantumSample(desc, state))
    hidden = {"structured": structured}
    if structured:
        hidden.update({"x": x, "e": errs})
    else:
        hidden.update({"scramblers": errs})
    return LsnQuantumInstance(k, n, pp, m, samples, hidden)


def code_distance(h: BitMat) -> int:
    """Minimum weight of a nonzero Pauli commuting with every row of the
    check matrix (exact, by kernel enumeration; desk scale only)."""
    n = h.cols // 2
    homega = BitMat.from_rows([omega_mul(h.row(i)).bits for i in range(h.rows)], 2 * n)
    basis = nullspace_basis(homega)
    if not basis:
        return 2 * n + 1
    dim = len(basis)
    if dim > 20:
        raise ValueError("kernel too large for exact distance")
    best = None
    for mask in range(1, 1 << dim):
        v = 0
        mm = mask
        while mm:
            j = (mm & -mm).bit_length() - 1
            v ^= basis[j].bits
            mm &= mm - 1
        w = pauli_weight(PauliVec(n, BitVec(2 * n, v)))
        if best is None or w < best:
            best = w
    return best


def syndrome_of(h: BitMat, e: PauliVec) -> BitVec:
    """v = H Omega Symp(e)."""
    return h.mul_vec(omega_mul(e.v))


def sample_weight_at_most(n: int, w: int, rng: np.random.Generator) -> PauliVec:
    """Uniform Pauli of weight <= w (identity included)."""
    import math

    counts = [math.comb(n, i) * 3**i for i in range(w + 1)]
    total = sum(counts)
    u = int(rng.integers(0, total))
    wt = 0
    for i, c in enumerate(counts):
        if u < c:
            wt = i
            break
        u -= c
    support = rng.choice(n, size=wt, replace=False) if wt else []
    x = z = 0
    for q in support:
        letter = int(rng.integers(1, 4))
        x |= (letter & 1) << int(q)
        z |= ((letter >> 1) & 1) << int(q)
    return PauliVec(n, BitVec(2 * n, x | (z << n)))


def sample_qsdp(
    n: int, k: int, w: int, rng: np.random.Generator, max_tries: int = 100_000
) -> QsdpInstance:
    """Random code verified to satisfy the distance promise d >= 2w + 1,
    plus a random error of weight <= w and its syndrome."""
    if n > 8:
        raise ValueError("exact distance verification limited to n <= 8")
    from .symplectic import random_clifford_symp

    for _ in range(max_tries):
        t = random_clifford_symp(n, rng)
        rows = [t.column(n + j).bits for j in range(n - k)]
        h = BitMat.from_rows(rows, 2 * n)
        if code_distance(h) >= 2 * w + 1:
            e = sample_weight_at_most(n, w, rng)
            v = syndrome_of(h, e)
            return QsdpInstance(n, k, w, h, v, {"e": e})
    raise RuntimeError(f"no code with distance >= {2 * w + 1} found "
                       f"after {max_tries} tries; (n={n}, k={k}, w={w}) looks infeasible")


# -- JSON envelopes ----------------------------------------------------------


def _p_str(p) -> str:
    """Canonical exact string for a probability (floats parse decimally)."""
    return str(p if isinstance(p, Fraction) else Fraction(str(p)))


def instance_to_json(inst, include_hidden: bool = True) -> dict:
    """Serialize any instance as {problem, params, public, hidden}."""

    def vec(v):
        return {"n": v.n, "hex": v.to_hex()}

    def hidden_json(h):
        if h is None or not include_hidden:
            return None
        out = {}
        for key, val in h.items():
            if isinstance(val, BitVec):
                out[key] = vec(val)
            elif isinstance(val, PauliVec):
                out[key] = val.to_json()
            elif isinstance(val, list):
                out[key] = [
                    x.to_json() if isinstance(x, PauliVec) else vec(x) for x in val
                ]
            else:
                out[key] = val
        return out

    if isinstance(inst, LpnInstance):
        return {
            "problem": "lpn",
            "params": {"k": inst.k, "n": inst.n, "p": _p_str(inst.p.p)},
            "public": {"a": inst.a.to_json(), "y": vec(inst.y)},
            "hidden": hidden_json(inst.hidden),
        }
    if isinstance(inst, SympLpnInstance):
        return {
            "problem": "symplpn",
            "params": {"n": inst.n, "p": _p_str(inst.p.p)},
            "public": {"a": inst.a.to_json(), "z": vec(inst.z)},
            "hidden": hidden_json(inst.hidden),
        }
    if isinstance(inst, LsnClassicalInstance):
        return {
            "problem": "lsn",
            "params": {
                "k": inst.k,
                "n": inst.n,
                "p": _p_str(inst.p.p),
                "m": inst.m,
            },
            "public": {
                "samples": [
                    {"a": s.a.to_json(), "b": s.b.to_json(), "z": vec(s.z)}
                    for s in inst.samples
                ]
            },
            "hidden": hidden_json(inst.hidden),
        }
    if isinstance(inst, LsnQuantumInstance):
        return {
            "problem": "lsn-quantum",
            "params": {
                "k": inst.k,
                "n": inst.n,
                "p": _p_str(inst.p.p),
                "m": inst.m,
            },
            "public": {
                "samples": [
                    {"clifford": s.clifford.to_json(), "state": s.state.to_json()}
                    for s in inst.samples
                ]
            },
            "hidden": hidden_json(inst.hidden),
        }
    if isinstance(inst, QsdpInstance):
        return {
            "problem": "qsdp",
            "params": {"n": inst.n, "k": inst.k, "w": inst.w},
            "public": {"h": inst.h.to_json(), "v": vec(inst.v)},
            "hidden": hidden_json(inst.hidden),
        }
    raise TypeError(f"unsupported instance type {type(inst)!r}")


def instance_from_json(obj: dict):
    """Inverse of instance_to_json (hidden metadata restored when present)."""

    def vec(d):
        return BitVec.from_hex(d["n"], d["hex"])

    def hidden_back(h):
        if h is None:
            return None
        out = {}
        for key, val in h.items():
            if isinstance(val, dict) and "x_hex" in val:
                out[key] = PauliVec.from_json(val)
            elif isinstance(val, dict) and "hex" in val:
                out[key] = vec(val)
            elif isinstance(val, list):
                out[key] = [
                    PauliVec.from_json(x) if "x_hex" in x else vec(x) for x in val
                ]
            else:
                out[key] = val
        return out

    problem = obj["problem"]
    params = obj["params"]
    pub = obj["public"]
    hidden = hidden_back(obj.get("hidden"))
    if problem == "lpn":
        return LpnInstance(
            params["k"], params["n"], BernParam(Fraction(str(params["p"]))),
            BitMat.from_json(pub["a"]), vec(pub["y"]), hidden,
        )
    if problem == "symplpn":
        return SympLpnInstance(
            params["n"], DepolParam(Fraction(str(params["p"]))),
            BitMat.from_json(pub["a"]), vec(pub["z"]), hidden,
        )
    if problem == "lsn":
        samples = [
            LsnClassicalSample(
                BitMat.from_json(s["a"]), BitMat.from_json(s["b"]), vec(s["z"])
            )
            for s in pub["samples"]
        ]
        return LsnClassicalInstance(
            params["k"], params["n"], DepolParam(Fraction(str(params["p"]))), params["m"],
            samples, hidden,
        )
    if problem == "lsn-quantum":
        samples = [
            LsnQuantumSample(
                CliffordDesc.from_json(s["clifford"]), StabState.from_json(s["state"])
            )
            for s in pub["samples"]
        ]
        return LsnQuantumInstance(
            params["k"], params["n"], DepolParam(Fraction(str(params["p"]))), params["m"],
            samples, hidden,
        )
    if problem == "qsdp":
        return QsdpInstance(
            params["n"], params["k"], params["w"],
            BitMat.from_json(pub["h"]), vec(pub["v"]), hidden,
        )
    raise ValueError(f"unknown problem {problem!r}")
