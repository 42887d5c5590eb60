"""Exact exponential-time solvers used as ground truth.

All likelihood arithmetic is done in log space; enumeration is vectorized
over candidate secrets/junk with numpy.  Oracles are deterministic given the
instance; ties break toward the smallest LSB-first packed value.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from .gf2 import BitMat, BitVec
from .problems import LpnInstance, LsnClassicalInstance, SympLpnInstance
from .symplectic import PauliVec, omega_mul, pauli_weight

LOG2 = float(np.log(2.0))


@dataclass
class OracleReport:
    answer: object
    log_likelihoods: dict
    runtime_s: float
    params: dict


@lru_cache(maxsize=32)
def _all_vectors(d: int) -> np.ndarray:
    """(2^d, d) array of all bit vectors, row index = packed value."""
    if d > 24:
        raise ValueError("enumeration dimension too large")
    idx = np.arange(1 << d, dtype=np.uint32)
    return ((idx[:, None] >> np.arange(d, dtype=np.uint32)[None, :]) & 1).astype(np.uint8)


def _image_table(mat: BitMat) -> np.ndarray:
    """(2^cols, rows) array of A v for every v, row index = packed v."""
    vs = _all_vectors(mat.cols)
    return (vs @ mat.to_numpy().T.astype(np.int64)) & 1


def _qubit_weights(e: np.ndarray, n: int) -> np.ndarray:
    """Pauli weight per row of a (..., 2n) symplectic bit array."""
    return np.count_nonzero(e[..., :n] | e[..., n:], axis=-1)


def _depol_loglik(weights: np.ndarray, n: int, p: float) -> np.ndarray:
    """log Pr[e] under Depol(p)^n given qubit weights."""
    if p == 0:
        return np.where(weights == 0, 0.0, -np.inf)
    if p == 0.75:
        return np.full(weights.shape, n * np.log(0.25))
    return weights * np.log(p / 3.0) + (n - weights) * np.log1p(-p)


def lpn_ml_search(inst: LpnInstance) -> BitVec:
    """Maximum-likelihood LPN secret (= minimum-weight residual for p < 1/2);
    ties break to the smallest packed value."""
    if inst.k > 20:
        raise ValueError("secret too long for exact enumeration")
    images = _image_table(inst.a)  # (2^k, n)
    y = inst.y.to_numpy().astype(np.int64)
    residual_weights = np.count_nonzero(images ^ y, axis=1)
    best = int(np.argmin(residual_weights))  # first minimum = smallest packed
    return BitVec.from_int(inst.k, best)


def lpn_ml_report(inst: LpnInstance) -> OracleReport:
    t0 = time.perf_counter()
    ans = lpn_ml_search(inst)
    p = inst.p.as_float()
    images = _image_table(inst.a)
    y = inst.y.to_numpy().astype(np.int64)
    w = int(np.count_nonzero(images[ans.bits] ^ y))
    if 0 < p < 1:
        ll = w * np.log(p) + (inst.n - w) * np.log1p(-p)
    else:
        ll = 0.0 if (p == 0 and w == 0) else float("-inf") if p == 0 else 0.0
    return OracleReport(
        answer=ans.to_hex(),
        log_likelihoods={"best": float(ll), "residual_weight": w},
        runtime_s=time.perf_counter() - t0,
        params={"problem": "lpn", "k": inst.k, "n": inst.n, "p": p},
    )


def _lsn_secret_logliks(inst: LsnClassicalInstance) -> np.ndarray:
    """log Pr[{z_i} | y, structured] marginalized over junk, for every y."""
    n, k, p = inst.n, inst.k, inst.p.as_float()
    total = np.zeros(1 << k)
    junk = _all_vectors(n)  # (2^n, n)
    for s in inst.samples:
        a_img = (junk @ s.a.to_numpy().T.astype(np.int64)) & 1  # (2^n, 2n)
        b_img = _image_table(s.b)  # (2^k, 2n)
        z = s.z.to_numpy().astype(np.int64)
        # e(r, y) = z ^ A r ^ B y; weights shape (2^k, 2^n)
        e = (z ^ a_img)[None, :, :] ^ b_img[:, None, :]
        w = _qubit_weights(e, n)
        ll = _depol_loglik(w, n, p)
        total += logsumexp(ll, axis=1) - n * LOG2
    return total


def lsn_ml_search(inst: LsnClassicalInstance) -> BitVec:
    """Exact maximum-a-posteriori secret with the junk register marginalized
    out sample by sample; ties break to the smallest packed value."""
    if inst.n + inst.k > 22:
        raise ValueError("instance too large for exact enumeration")
    ll = _lsn_secret_logliks(inst)
    return BitVec.from_int(inst.k, int(np.argmax(ll)))


def lsn_lr_decision(inst: LsnClassicalInstance) -> bool:
    """Exact likelihood-ratio distinguisher: True iff
    Pr[data | structured] > Pr[data | uniform] (ties say unstructured)."""
    if inst.n + inst.k > 22:
        raise ValueError("instance too large for exact enumeration")
    ll = _lsn_secret_logliks(inst)
    log_ps = logsumexp(ll) - inst.k * LOG2
    log_pu = -2.0 * inst.n * inst.m * LOG2
    return bool(log_ps > log_pu)


def symplpn_lr_decision(inst: SympLpnInstance) -> bool:
    """Exact likelihood-ratio distinguisher for SympLPN."""
    if inst.n > 20:
        raise ValueError("instance too large for exact enumeration")
    n, p = inst.n, inst.p.as_float()
    images = _image_table(inst.a)  # (2^n, 2n)
    z = inst.z.to_numpy().astype(np.int64)
    w = _qubit_weights(images ^ z, n)
    log_ps = logsumexp(_depol_loglik(w, n, p)) - n * LOG2
    log_pu = -2.0 * n * LOG2
    return bool(log_ps > log_pu)


def _syndrome_rows(h: BitMat):
    """Rows of H Omega as packed ints (so syndrome bits are AND-parities)."""
    return [omega_mul(h.row(i)).bits for i in range(h.rows)]


def _syndrome_bits(homega_rows, e_bits: int) -> int:
    word = 0
    for i, r in enumerate(homega_rows):
        word |= ((r & e_bits).bit_count() & 1) << i
    return word


def qsdp_min_weight(h: BitMat, v: BitVec, w: int):
    """Minimum-weight Pauli e with H Omega e = v and weight <= w, or None.

    Within the minimal weight class, returns the smallest packed vector.
    Exhaustive over supports and letters, so completeness is by construction.
    """
    n = h.cols // 2
    if n > 8:
        raise ValueError("exhaustive search limited to n <= 8")
    if v.n != h.rows:
        raise ValueError("syndrome length mismatch")
    from itertools import combinations, product

    rows = _syndrome_rows(h)
    target = v.bits
    for wt in range(min(w, n) + 1):
        best = None
        if wt == 0:
            if target == 0:
                return PauliVec.zeros(n)
            continue
        for support in combinations(range(n), wt):
            for letters in product((1, 2, 3), repeat=wt):
                x = z = 0
                for q, c in zip(support, letters):
                    x |= (c & 1) << q
                    z |= ((c >> 1) & 1) << q
                bits = x | (z << n)
                if _syndrome_bits(rows, bits) == target:
                    if best is None or bits < best:
                        best = bits
        if best is not None:
            return PauliVec(n, BitVec(2 * n, best))
    return None


def qsdp_exists(h: BitMat, v: BitVec, w: int) -> bool:
    """Exact decision oracle: does a weight <= w error with syndrome v exist."""
    return qsdp_min_weight(h, v, w) is not None


def solve_report(kind: str, inst) -> OracleReport:
    """Run a named oracle and wrap the result."""
    t0 = time.perf_counter()
    if kind == "lpn-ml":
        return lpn_ml_report(inst)
    if kind == "lsn-ml":
        ans = lsn_ml_search(inst)
        ll = _lsn_secret_logliks(inst)
        return OracleReport(
            answer=ans.to_hex(),
            log_likelihoods={"best": float(np.max(ll))},
            runtime_s=time.perf_counter() - t0,
            params={"problem": "lsn", "k": inst.k, "n": inst.n,
                    "p": inst.p.as_float(), "m": inst.m},
        )
    if kind == "lsn-lr":
        ans = lsn_lr_decision(inst)
        ll = _lsn_secret_logliks(inst)
        return OracleReport(
            answer="structured" if ans else "unstructured",
            log_likelihoods={
                "log_p_structured": float(logsumexp(ll) - inst.k * LOG2),
                "log_p_uniform": float(-2.0 * inst.n * inst.m * LOG2),
            },
            runtime_s=time.perf_counter() - t0,
            params={"problem": "lsn", "k": inst.k, "n": inst.n,
                    "p": inst.p.as_float(), "m": inst.m},
        )
    if kind == "symplpn-lr":
        ans = symplpn_lr_decision(inst)
        return OracleReport(
            answer="structured" if ans else "unstructured",
            log_likelihoods={},
            runtime_s=time.perf_counter() - t0,
            params={"problem": "symplpn", "n": inst.n, "p": inst.p.as_float()},
        )
    if kind == "qsdp-min-weight":
        ans = qsdp_min_weight(inst.h, inst.v, inst.w)
        return OracleReport(
            answer=None if ans is None else ans.to_json(),
            log_likelihoods={"weight": None if ans is None else pauli_weight(ans)},
            runtime_s=time.perf_counter() - t0,
            params={"problem": "qsdp", "n": inst.n, "k": inst.k, "w": inst.w},
        )
    raise ValueError(f"unknown oracle {kind!r}")
