"""Bernoulli and depolarizing error models and their conversion identities.

Single-qubit depolarizing noise with parameter p applies X, Y, Z each with
probability p/3.  Writing p = 3q(1-q), the same distribution arises from
three independent Ber(q) flips X^a Y^b Z^c, which is what lets depolarizing
errors be decomposed into Bernoulli halves in symplectic form.

Parameters may be floats or fractions.Fraction; the conversion arithmetic is
exact when inputs are exact, which the reduction traces rely on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gf2 import BitVec
from .symplectic import PauliVec


def _as_float(p) -> float:
    if isinstance(p, (DepolParam, BernParam)):
        return float(p.p)
    return float(p)


def param_value(p):
    """Unwrap DepolParam/BernParam to the raw number, pass through others."""
    if isinstance(p, (DepolParam, BernParam)):
        return p.p
    return p


@dataclass(frozen=True)
class DepolParam:
    """Depolarizing probability, p in [0, 3/4]."""

    p: object

    def __post_init__(self):
        if not 0 <= _as_float(self.p) <= 0.75:
            raise ValueError(f"depolarizing parameter {self.p} outside [0, 3/4]")

    def as_float(self) -> float:
        return _as_float(self.p)


@dataclass(frozen=True)
class BernParam:
    """Bernoulli probability, p in [0, 1/2]."""

    p: object

    def __post_init__(self):
        if not 0 <= _as_float(self.p) <= 0.5:
            raise ValueError(f"Bernoulli parameter {self.p} outside [0, 1/2]")

    def as_float(self) -> float:
        return _as_float(self.p)


def sample_bernoulli(n: int, p, rng: np.random.Generator) -> BitVec:
    """n i.i.d. Ber(p) bits."""
    p = _as_float(p)
    if not 0 <= p <= 1:
        raise ValueError("probability out of range")
    if n == 0:
        return BitVec.zeros(0)
    bits = rng.random(n) < p
    word = 0
    for j in np.flatnonzero(bits):
        word |= 1 << int(j)
    return BitVec(n, word)


def sample_depol(n: int, p, rng: np.random.Generator) -> PauliVec:
    """n-qubit depolarizing error: each qubit independently I w.p. 1-p,
    else uniform over {X, Y, Z}."""
    pf = _as_float(p)
    if not 0 <= pf <= 0.75:
        raise ValueError("p outside [0, 3/4]")
    hit = rng.random(n) < pf
    # Letters drawn for every qubit keep the rng stream length fixed.
    letters = rng.integers(1, 4, size=n)
    x = z = 0
    for i in np.flatnonzero(hit):
        c = int(letters[i])
        x |= (c & 1) << int(i)
        z |= ((c >> 1) & 1) << int(i)
    return PauliVec(n, BitVec(2 * n, x | (z << n)))


def depol_of_bern(q):
    """Depolarizing parameter realized by three independent Ber(q) flips:
    p = 3[q^2(1-q) + q(1-q)^2] = 3q(1-q).  Exact for Fraction input."""
    if not 0 <= _as_float(q) <= 0.5:
        raise ValueError("q outside [0, 1/2]")
    return 3 * q * (1 - q)


def bern_of_depol(p):
    """Unique q in [0, 1/2] with 3q(1-q) = p, via the closed form
    q = (1 - sqrt(1 - 4p/3)) / 2."""
    pf = _as_float(p)
    if not 0 <= pf <= 0.75:
        raise ValueError("p outside [0, 3/4]")
    return (1.0 - math.sqrt(max(0.0, 1.0 - 4.0 * pf / 3.0))) / 2.0


def bern_of_depol_bisect(p, tol: float = 1e-14) -> float:
    """Bisection cross-check for bern_of_depol."""
    pf = _as_float(p)
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if 3 * mid * (1 - mid) < pf:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def bern_convolve_param(p, q):
    """u with Ber(p) + Ber(u) = Ber(q): u = (q - p) / (1 - 2p).
    Requires p <= q <= 1/2 and p < 1/2.  Exact for Fraction inputs."""
    pf, qf = _as_float(p), _as_float(q)
    if not (0 <= pf <= qf <= 0.5):
        raise ValueError("need 0 <= p <= q <= 1/2")
    if pf >= 0.5:
        raise ValueError("p must be < 1/2")
    return (q - p) / (1 - 2 * p)


def depol_convolve_param(p, q):
    """u with Depol(p) * Depol(u) = Depol(q) as phase-free Pauli product:
    u = (q - p) / (1 - 4p/3).  Requires p <= q <= 3/4 and p < 3/4."""
    pf, qf = _as_float(p), _as_float(q)
    if not (0 <= pf <= qf <= 0.75):
        raise ValueError("need 0 <= p <= q <= 3/4")
    if pf >= 0.75:
        raise ValueError("p must be < 3/4")
    if isinstance(p, Fraction) or isinstance(q, Fraction):
        return (q - p) / (1 - Fraction(4, 3) * p)
    return (q - p) / (1 - 4 * p / 3)


def exact_depol_dist(n: int, p) -> np.ndarray:
    """Exact probability table of Depol(p)^(x n) over all 4^n Paulis.

    Index encodes the Pauli base-4 with qubit i at digit i and letter order
    (I, X, Z, Y) matching the symplectic bit pairs (x + 2z).
    """
    if n > 8:
        raise ValueError("table limited to n <= 8")
    pf = _as_float(p)
    if not 0 <= pf <= 0.75:
        raise ValueError("p outside [0, 3/4]")
    single = np.array([1 - pf, pf / 3, pf / 3, pf / 3])
    table = np.array([1.0])
    for _ in range(n):
        table = np.kron(single, table)
    return table


def depol_index_of_pauli(p: PauliVec) -> int:
    """Index of a Pauli in the exact_depol_dist table."""
    idx = 0
    for i in range(p.n):
        code = ((p.x_bits >> i) & 1) | (((p.z_bits >> i) & 1) << 1)
        idx += code * (4 ** i)
    return idx


def pauli_of_depol_index(n: int, idx: int) -> PauliVec:
    """Inverse of depol_index_of_pauli."""
    x = z = 0
    for i in range(n):
        code = (idx // (4 ** i)) % 4
        x |= (code & 1) << i
        z |= ((code >> 1) & 1) << i
    return PauliVec(n, BitVec(2 * n, x | (z << n)))
