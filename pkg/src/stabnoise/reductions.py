"""Executable reductions between the decoding problems.

Each transformation preserves hidden metadata so harnesses can verify output
distributions and distinguisher advantages against ground truth, and records
its internal draws plus the exact (Fraction) noise-parameter bookkeeping in a
ReductionTrace.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gf2 import BitMat, BitVec, in_span, random_invertible, solve_random
from .noise import (
    DepolParam,
    bern_convolve_param,
    depol_convolve_param,
    depol_of_bern,
    param_value,
    sample_bernoulli,
    sample_depol,
)
from .problems import (
    LpnInstance,
    LsnClassicalInstance,
    LsnClassicalSample,
    LsnQuantumInstance,
    LsnQuantumSample,
    SympLpnInstance,
    sample_lsn_pair,
    syndrome_of,
)
from .stabsim import (
    CliffordDesc,
    StabState,
    apply_clifford,
    apply_clifford_inverse,
    clifford_from_symp,
    clifford_stabilizer_generators,
    measure_syndrome,
    prepare_basis_state,
    symp_of_clifford,
)
from .symplectic import (
    PauliVec,
    SympMat,
    omega_mul,
    pauli_weight,
    sample_symplectic_solution,
)


class ParameterError(ValueError):
    """Raised when a reduction's noise/dimension bookkeeping is violated."""


class OracleInconsistencyError(RuntimeError):
    """Raised when a decision oracle returns contradictory answers."""


def majority_vote(oracle, rounds: int):
    """Amplification combinator: wrap a boolean oracle in an odd-round
    majority vote (proofs assume amplified oracles; exact oracles at desk
    scale make this optional)."""
    if rounds < 1 or rounds % 2 == 0:
        raise ValueError("rounds must be a positive odd number")

    def amplified(*args, **kwargs):
        votes = sum(bool(oracle(*args, **kwargs)) for _ in range(rounds))
        return 2 * votes > rounds

    return amplified


@dataclass
class ReductionTrace:
    """Record of every internal draw and the noise-parameter chain."""

    name: str
    params: dict = field(default_factory=dict)
    draws: dict = field(default_factory=dict)


def _exact(x):
    x = param_value(x)
    return x if isinstance(x, Fraction) else Fraction(x)


# -- noise management ---------------------------------------------------------


def increase_noise(inst, target_p, rng: np.random.Generator):
    """Raise the depolarizing parameter to target_p by convolving with an
    independent depolarizing error.  Works on SympLPN, classical-LSN, and
    quantum-LSN instances; returns (instance, trace)."""
    tp = param_value(target_p)
    p0 = param_value(inst.p.p)
    u = depol_convolve_param(p0, tp)
    trace = ReductionTrace("increase_noise", params={"p_in": p0, "p_out": tp, "u": u})
    if isinstance(inst, SympLpnInstance):
        extra = sample_depol(inst.n, u, rng)
        hidden = dict(inst.hidden) if inst.hidden else None
        if hidden and hidden.get("structured"):
            hidden["e"] = PauliVec(inst.n, hidden["e"].v ^ extra.v)
        trace.draws["extra"] = extra
        return (
            SympLpnInstance(inst.n, DepolParam(tp), inst.a, inst.z ^ extra.v, hidden),
            trace,
        )
    if isinstance(inst, LsnClassicalInstance):
        samples = []
        extras = []
        hidden = dict(inst.hidden) if inst.hidden else None
        for s in inst.samples:
            extra = sample_depol(inst.n, u, rng)
            extras.append(extra)
            samples.append(LsnClassicalSample(s.a, s.b, s.z ^ extra.v))
        if hidden and hidden.get("structured"):
            hidden["e"] = [
                PauliVec(inst.n, e.v ^ x.v) for e, x in zip(hidden["e"], extras)
            ]
        trace.draws["extra"] = extras
        return (
            LsnClassicalInstance(inst.k, inst.n, DepolParam(tp), inst.m, samples, hidden),
            trace,
        )
    if isinstance(inst, LsnQuantumInstance):
        samples = []
        extras = []
        for s in inst.samples:
            extra = sample_depol(inst.n, u, rng)
            extras.append(extra)
            state = s.state.copy()
            state.apply_pauli(extra)
            samples.append(LsnQuantumSample(s.clifford, state))
        hidden = dict(inst.hidden) if inst.hidden else None
        if hidden and hidden.get("structured"):
            hidden["e"] = [
                PauliVec(inst.n, e.v ^ x.v) for e, x in zip(hidden["e"], extras)
            ]
        trace.draws["extra"] = extras
        return (
            LsnQuantumInstance(inst.k, inst.n, DepolParam(tp), inst.m, samples, hidden),
            trace,
        )
    raise TypeError(f"unsupported instance type {type(inst)!r}")


def rerandomize_secret(inst: LsnClassicalInstance, rng: np.random.Generator):
    """Shift the secret by a uniform y': z_i += B_i y'.  Returns
    (instance, shift); unstructured instances are unchanged in distribution."""
    shift = BitVec.random(inst.k, rng)
    samples = [
        LsnClassicalSample(s.a, s.b, s.z ^ s.b.mul_vec(shift)) for s in inst.samples
    ]
    hidden = dict(inst.hidden) if inst.hidden else None
    if hidden and hidden.get("structured"):
        hidden["y"] = hidden["y"] ^ shift
    return (
        LsnClassicalInstance(inst.k, inst.n, inst.p, inst.m, samples, hidden),
        shift,
    )


# -- LPN -> SympLPN machinery --------------------------------------------------


def symplectic_extension(a: BitMat, n: int, eps, rng: np.random.Generator) -> BitMat:
    """Extend a uniform (2n - floor(l(1+eps))) x l matrix to a 2n x l matrix
    with pairwise symplectically orthogonal columns.

    Follows the symmetric-matrix construction: sample a uniform symmetric S',
    subtract N1^T N2, and draw a uniform solution A' of M^T A' = T.  On the
    (rare) infeasible branch the zero matrix is appended.
    """
    ell = a.cols
    m_pad = int(Fraction(ell) * (1 + _exact(eps)))  # floor
    if a.rows != 2 * n - m_pad:
        raise ParameterError(
            f"input must have 2n - floor(l(1+eps)) = {2 * n - m_pad} rows, got {a.rows}"
        )
    if m_pad > n:
        raise ParameterError("need l(1+eps) <= n")
    top = n - m_pad
    n1 = a.submatrix_rows(0, top)
    m_blk = a.submatrix_rows(top, top + m_pad)
    n2 = a.submatrix_rows(top + m_pad, a.rows)
    # Uniform symmetric l x l matrix.
    s_rows = [0] * ell
    for i in range(ell):
        for j in range(i, ell):
            b = int(rng.integers(0, 2))
            s_rows[i] |= b << j
            s_rows[j] |= b << i
    s_prime = BitMat(ell, ell, tuple(s_rows))
    n1t_n2 = n1.transpose().matmul(n2)
    t_mat = BitMat(
        ell, ell,
        tuple(s_prime.row_ints[i] ^ n1t_n2.row_ints[i] for i in range(ell)),
    )
    # Solve M^T A' = T column by column: (M^T) a'_col(j) = t_col(j).
    mt = m_blk.transpose()
    a_prime_cols = []
    feasible = True
    for j in range(ell):
        sol = solve_random(mt, t_mat.col(j), rng)
        if sol is None:
            feasible = False
            break
        a_prime_cols.append(sol)
    if feasible and ell:
        a_prime = BitMat.from_rows([c.bits for c in a_prime_cols], m_pad).transpose()
    else:
        a_prime = BitMat.zeros(m_pad, ell)
    return n1.vstack(m_blk).vstack(n2).vstack(a_prime)


def error_extension(n: int, m: int, delta, rng: np.random.Generator) -> BitVec:
    """Noise-injection vector: T ~ Bin(n, 2p) with p = m(1+delta)/(2n);
    zero on the first n - T coordinates, uniform on the last T."""
    if m > n:
        raise ParameterError("need m <= n")
    p = _exact(m) * (1 + _exact(delta)) / (2 * n)
    if p > Fraction(1, 2):
        raise ParameterError("extension rate exceeds 1/2")
    t = int(rng.binomial(n, float(2 * p)))
    tail = BitVec.random(t, rng)
    return BitVec(n, tail.bits << (n - t))


def error_extension_rate(n: int, m: int, delta) -> Fraction:
    """Per-coordinate Bernoulli rate contributed by error_extension."""
    return _exact(m) * (1 + _exact(delta)) / (2 * n)


def _permute_bits(v: BitVec, perm) -> BitVec:
    """new[i] = old[perm[i]]."""
    word = 0
    for i, src in enumerate(perm):
        word |= v.bit(int(src)) << i
    return BitVec(v.n, word)


def lpn_to_symplpn(
    inst: LpnInstance,
    eps,
    rng: np.random.Generator,
    target_p=None,
):
    """Full LPN -> SympLPN pipeline.

    Symplectic extension of the code; uniform padding of the data; the same
    permutation on both halves (which preserves the symplectic inner
    product); noise injection on the padded half; Bernoulli equalization of
    both halves at q; isotropic column completion with a fresh secret
    extension; a shared Bernoulli vector added to both halves, turning the
    error depolarizing; and a final exact top-up to 3q.

    The output parameter is exactly 3q with q = p + r - 2 p r and
    r = floor(l(1+eps)) (1+eps) / (2n); passing ``target_p`` tops the chain up
    to that value instead (requires q <= target_p / 3).  Structured maps to
    structured and unstructured to unstructured.
    """
    ell = inst.k
    eps = _exact(eps)
    m_pad = int(Fraction(ell) * (1 + eps))
    if (inst.n + m_pad) % 2:
        raise ParameterError("row count plus padding must be even")
    n = (inst.n + m_pad) // 2
    if m_pad > n:
        raise ParameterError("need l(1+eps) <= n")
    p_in = _exact(inst.p.p)
    r_rate = error_extension_rate(n, m_pad, eps)
    q_pipe = p_in + r_rate - 2 * p_in * r_rate
    q_t = q_pipe if target_p is None else _exact(target_p) / 3
    if q_t < q_pipe:
        raise ParameterError(f"target q {q_t} below pipeline rate {q_pipe}")
    if q_t > Fraction(1, 2):
        raise ParameterError("equalized Bernoulli rate exceeds 1/2")
    p_mid = depol_of_bern(q_t)
    p_final = 3 * q_t
    if p_final > Fraction(3, 4):
        raise ParameterError(
            f"final depolarizing parameter {p_final} exceeds 3/4; "
            "shrink l or the input rate"
        )

    trace = ReductionTrace(
        "lpn_to_symplpn",
        params={
            "ell": ell,
            "eps": eps,
            "m_pad": m_pad,
            "n": n,
            "p_in": p_in,
            "r_rate": r_rate,
            "q_pipe": q_pipe,
            "q_target": q_t,
            "p_mid": p_mid,
            "p_final": p_final,
        },
    )

    b = symplectic_extension(inst.a, n, eps, rng)
    r_pad = BitVec.random(m_pad, rng)
    y_ext = inst.y.concat(r_pad)
    y1 = y_ext.slice(0, n)
    y2 = y_ext.slice(n, 2 * n)

    e_ext = error_extension(n, m_pad, eps, rng)
    perm = rng.permutation(n)
    z1 = _permute_bits(y1, perm)
    z2 = _permute_bits(y2 ^ e_ext, perm)
    top_rows = [b.row_ints[int(src)] for src in perm]
    bot_rows = [b.row_ints[n + int(src)] for src in perm]
    k_mat = BitMat(2 * n, ell, tuple(top_rows + bot_rows))

    u1 = bern_convolve_param(p_in, q_t)
    g1 = sample_bernoulli(n, u1, rng)
    z1 = z1 ^ g1
    u2 = bern_convolve_param(q_pipe, q_t)
    g2 = sample_bernoulli(n, u2, rng)
    z2 = z2 ^ g2

    # Isotropic completion K -> [K | L] plus fresh secret extension.
    k_cols = [k_mat.col(j) for j in range(ell)]
    l_cols = []
    for _ in range(n - ell):
        v = sample_symplectic_solution(
            n, rng, commute_with=k_cols + l_cols, exclude_span=k_cols + l_cols
        )
        l_cols.append(v)
    a_out = BitMat.from_rows(
        [c.bits for c in k_cols + l_cols], 2 * n
    ).transpose()
    w_ext = BitVec.random(n - ell, rng)
    l_mat = BitMat.from_rows([c.bits for c in l_cols], 2 * n).transpose()
    lw = l_mat.mul_vec(w_ext) if n - ell else BitVec.zeros(2 * n)
    z = z1.concat(z2) ^ lw

    h = sample_bernoulli(n, q_t, rng)
    z = z ^ h.concat(h)

    u_top = depol_convolve_param(p_mid, p_final)
    e_top = sample_depol(n, u_top, rng)
    z = z ^ e_top.v

    trace.params["u1"] = u1
    trace.params["u2"] = u2
    trace.params["u_top"] = u_top
    trace.draws.update(
        {
            "r_pad": r_pad,
            "e_ext": e_ext,
            "perm": [int(i) for i in perm],
            "g1": g1,
            "g2": g2,
            "w_ext": w_ext,
            "h": h,
            "e_top": e_top,
        }
    )

    structured = bool(inst.hidden and inst.hidden.get("structured"))
    hidden = {"structured": structured}
    if structured:
        secret = inst.hidden["x"].concat(w_ext)
        hidden["x"] = secret
        hidden["e"] = PauliVec(n, z ^ a_out.mul_vec(secret))
    out = SympLpnInstance(n, DepolParam(p_final), a_out, z, hidden)
    return out, trace


def symplpn_to_lsn_multi(
    inst: SympLpnInstance, k: int, m: int, rng: np.random.Generator
):
    """Hybrid embedding of one SympLPN sample into an m-sample decision LSN
    instance: a uniform index j carries (A, B_j y + z); samples after j are
    structured with the self-chosen secret, samples before j uniform."""
    n = inst.n
    j = int(rng.integers(1, m + 1))
    y = BitVec.random(k, rng)
    samples = []
    for i in range(1, m + 1):
        if i < j:
            a, b = sample_lsn_pair(n, k, rng)
            z = BitVec.random(2 * n, rng)
        elif i == j:
            a = inst.a
            a_cols = [a.col(c) for c in range(n)]
            b_cols = []
            for _ in range(k):
                v = sample_symplectic_solution(
                    n, rng, commute_with=b_cols, exclude_span=a_cols + b_cols
                )
                b_cols.append(v)
            b = BitMat.from_rows([c.bits for c in b_cols], 2 * n).transpose()
            z = b.mul_vec(y) ^ inst.z
        else:
            a, b = sample_lsn_pair(n, k, rng)
            r = BitVec.random(n, rng)
            err = sample_depol(n, inst.p.p, rng)
            z = a.mul_vec(r) ^ b.mul_vec(y) ^ err.v
        samples.append(LsnClassicalSample(a, b, z))
    structured = bool(inst.hidden and inst.hidden.get("structured"))
    hidden = {"structured": structured, "hybrid_index": j, "embedded_secret": y}
    trace = ReductionTrace(
        "symplpn_to_lsn_multi", params={"k": k, "m": m}, draws={"j": j, "y": y}
    )
    return LsnClassicalInstance(k, n, inst.p, m, samples, hidden), trace


# -- average-case decision <-> search ------------------------------------------


def lsn_decision_to_search(
    inst: LsnClassicalInstance, search_oracle, rng: np.random.Generator
) -> bool:
    """Decide a 2m-sample instance with a search oracle: run it on the first
    half as-is and on the second half shifted by a random y; accept iff the
    answers differ by exactly y."""
    if inst.m % 2:
        raise ValueError("need an even number of samples")
    m = inst.m // 2
    first = LsnClassicalInstance(
        inst.k, inst.n, inst.p, m, inst.samples[:m], inst.hidden
    )
    second = LsnClassicalInstance(
        inst.k, inst.n, inst.p, m, inst.samples[m:], inst.hidden
    )
    shifted, y = rerandomize_secret(second, rng)
    z1 = search_oracle(first)
    z2 = search_oracle(shifted)
    return (z1 ^ z2).bits == y.bits


def _controlled_pauli_gates(n: int, control: int, p: PauliVec):
    """Gate sequence for the Pauli on p's support controlled on ``control``
    (CX / CZ = H.CX.H / CY = S.CX.Z.S, all exact including signs)."""
    gates = []
    for t in range(n):
        if t == control:
            continue
        xb = (p.x_bits >> t) & 1
        zb = (p.z_bits >> t) & 1
        if xb and not zb:
            gates.append(("CX", (control, t)))
        elif zb and not xb:
            gates.extend([("H", (t,)), ("CX", (control, t)), ("H", (t,))])
        elif xb and zb:
            # CY = S_t CX S_t^dagger with S^dagger = S Z = S S S.
            gates.extend(
                [
                    ("S", (t,)),
                    ("S", (t,)),
                    ("S", (t,)),
                    ("CX", (control, t)),
                    ("S", (t,)),
                ]
            )
    return gates


def _x_gates(n: int, bits: BitVec, offset: int):
    """X on qubit offset+i for each set bit, as H S S H (X = H Z H)."""
    gates = []
    for i in range(bits.n):
        if bits.bit(i):
            q = offset + i
            gates.extend([("H", (q,)), ("S", (q,)), ("S", (q,)), ("H", (q,))])
    return gates


def lsn_search_to_decision(
    inst: LsnQuantumInstance,
    decision_oracle,
    rng: np.random.Generator,
    rounds: int = 1,
    samples_per_query: int = 1,
) -> BitVec:
    """Per-bit secret extraction from a decision oracle.

    For each logical bit: apply a random logical X shift, conjugate a random
    Pauli on the non-control qubits through the code, and hand the oracle
    samples whose circuit includes that Pauli controlled on the bit's qubit.
    If the bit is 1 the controlled Pauli cancels and the samples are genuine
    noisy codewords; if 0 they are scrambled toward maximally mixed.  The
    oracle's verdict is the bit; rounds are combined by majority vote.

    Consumes samples_per_query fresh samples per bit per round.
    """
    n, k = inst.n, inst.k
    need = k * rounds * samples_per_query
    if need > inst.m:
        raise ValueError(f"need {need} samples, instance has {inst.m}")
    cursor = 0
    bits = []
    for bit_index in range(k):
        control = n - k + bit_index
        votes = 0
        for _ in range(rounds):
            batch = inst.samples[cursor : cursor + samples_per_query]
            cursor += samples_per_query
            y = BitVec.random(k, rng)
            transformed = []
            for s in batch:
                mask = ((1 << n) - 1) ^ (1 << control)
                full_mask = mask | (mask << n)
                p_i = PauliVec(n, BitVec(2 * n, BitVec.random(2 * n, rng).bits & full_mask))
                t_i = symp_of_clifford(s.clifford)
                p_conj = PauliVec(n, t_i.mul_vec(p_i.v))
                state = s.state.copy()
                state.apply_pauli(p_conj)
                new_gates = (
                    tuple(_x_gates(n, y, n - k))
                    + tuple(_controlled_pauli_gates(n, control, p_i))
                    + s.clifford.gates
                )
                new_desc = CliffordDesc(n, new_gates, s.clifford.frame)
                transformed.append(LsnQuantumSample(new_desc, state))
            probe = LsnQuantumInstance(
                k, n, inst.p, len(transformed), transformed, None
            )
            votes += 1 if decision_oracle(probe) else 0
        bits.append(1 if 2 * votes > rounds else 0)
    return BitVec.from_bits(bits)


# -- classical <-> quantum representation --------------------------------------


def lsn_classical_of_quantum(inst: LsnQuantumInstance, rng: np.random.Generator):
    """Convert quantum samples to the classical representation.

    Per sample: measure the syndrome, draw a uniform Pauli with that
    syndrome, align the logical-X parts across samples, multiply the
    Z-image matrix by a random invertible matrix, and emit
    ([A_i | B_i], Symp(P_i)).  The classical secret differs from the quantum
    one by the measured shift, returned for recovery.
    """
    n, k = inst.n, inst.k
    samples = []
    paulis = []
    shift_ref = None
    mats = []
    for s in inst.samples:
        t = symp_of_clifford(s.clifford)
        stab_gens = clifford_stabilizer_generators(s.clifford, n - k)
        v = measure_syndrome(s.state, stab_gens)
        # Uniform Pauli with syndrome v: rows of H Omega against unknowns.
        h_rows = [omega_mul(t.column(n + j)).bits for j in range(n - k)]
        h = BitMat(n - k, 2 * n, tuple(h_rows))
        p_vec = solve_random(h, v, rng)
        p_i = PauliVec(n, p_vec)
        # Logical value of P_i E_i on the code: apply P_i, decode, measure.
        probe = s.state.copy()
        probe.apply_pauli(p_i)
        apply_clifford_inverse(probe, s.clifford)
        decoded = probe.measure_all_z()
        if decoded.slice(0, n - k).bits:
            raise AssertionError("syndrome-matched Pauli failed to clean the state")
        logical = decoded.slice(n - k, n)
        b_cols = [t.column(n - k + j) for j in range(k)]
        b_mat = BitMat.from_rows([c.bits for c in b_cols], 2 * n).transpose()
        if shift_ref is None:
            shift_ref = logical
        else:
            delta = logical ^ shift_ref
            p_i = PauliVec(n, p_i.v ^ b_mat.mul_vec(delta))
        paulis.append(p_i)
        mats.append((t, b_mat))
    for (t, b_mat), p_i in zip(mats, paulis):
        a_prime_cols = [t.column(n + j) for j in range(n)]
        a_prime = BitMat.from_rows([c.bits for c in a_prime_cols], 2 * n).transpose()
        r_i = random_invertible(n, rng)
        a_i = a_prime.matmul(r_i)
        samples.append(LsnClassicalSample(a_i, b_mat, BitVec(2 * n, p_i.v.bits)))
    structured = bool(inst.hidden and inst.hidden.get("structured"))
    hidden = {"structured": structured, "shift": shift_ref}
    if structured:
        hidden["y"] = inst.hidden["x"] ^ shift_ref
        hidden["quantum_secret"] = inst.hidden["x"]
    out = LsnClassicalInstance(k, n, inst.p, inst.m, samples, hidden)
    return out, shift_ref


def lsn_quantum_of_classical(inst: LsnClassicalInstance, rng: np.random.Generator):
    """Rebuild quantum samples from classical-representation samples.

    Per sample a uniform Clifford consistent with (A_i, B_i) is drawn: n-k
    stabilizers from im(A_i) commuting with all B columns, k logical Z's from
    im(A_i) anticommuting with exactly one B column each, logical X's equal
    to the B columns, destabilizers completing the pairing; then
    Symp^-1(z_i) is applied to C_i|0^n>.
    """
    n, k = inst.n, inst.k
    out_samples = []
    for s in inst.samples:
        a_cols = [s.a.col(j) for j in range(n)]
        b_cols = [s.b.col(j) for j in range(k)]
        stabs = _sample_in_subspace(
            s.a, count=n - k, rng=rng, commute_with=b_cols, anticommute_plan=None
        )
        logical_z = []
        for j in range(k):
            anti = [b_cols[j]]
            comm = [b_cols[i] for i in range(k) if i != j]
            logical_z.extend(
                _sample_in_subspace(
                    s.a,
                    count=1,
                    rng=rng,
                    commute_with=comm,
                    anticommute_plan=anti,
                    already=stabs + logical_z,
                )
            )
        z_images = stabs + logical_z
        x_images = [None] * (n - k) + b_cols
        destab = []
        for j in range(n - k):
            commute = (
                [z_images[i] for i in range(n) if i != j]
                + b_cols
                + destab
            )
            v = sample_symplectic_solution(
                n, rng, commute_with=commute, anticommute_with=[z_images[j]]
            )
            destab.append(v)
        cols = destab + b_cols + z_images
        t = SympMat(n, BitMat.from_rows([c.bits for c in cols], 2 * n).transpose())
        frame = PauliVec(n, BitVec.random(2 * n, rng))
        desc = clifford_from_symp(t, frame)
        state = prepare_basis_state(n, BitVec.zeros(n))
        apply_clifford(state, desc)
        state.apply_pauli(PauliVec(n, s.z))
        out_samples.append(LsnQuantumSample(desc, state))
    structured = bool(inst.hidden and inst.hidden.get("structured"))
    hidden = {"structured": structured}
    if structured:
        hidden["x"] = inst.hidden["y"]
    return LsnQuantumInstance(k, n, inst.p, inst.m, out_samples, hidden)


def _sample_in_subspace(a: BitMat, count, rng, commute_with, anticommute_plan, already=()):
    """Uniform vectors v = A c from im(a) with symplectic constraints,
    linearly independent of ``already`` and of each other.

    Vectors inside the isotropic column space commute automatically, so only
    the external constraints appear in the linear system; independence is by
    rejection after the exact feasibility the caller guarantees.
    """
    drawn = list(already)
    out = []
    rows = [_functional_row(a, u) for u in commute_with]
    rhs = [0] * len(commute_with)
    for u in anticommute_plan or ():
        rows.append(_functional_row(a, u))
        rhs.append(1)
    sys_mat = BitMat(len(rows), a.cols, tuple(rows))
    rhs_vec = BitVec.from_bits(rhs)
    for _ in range(count):
        for _ in range(10_000):
            c = solve_random(sys_mat, rhs_vec, rng)
            if c is None:
                raise ParameterError("inconsistent subspace constraints")
            v = a.mul_vec(c)
            if not in_span(drawn, v):
                break
        else:  # pragma: no cover
            raise RuntimeError("subspace rejection sampling failed")
        drawn.append(v)
        out.append(v)
    return out


def _functional_row(a: BitMat, u: BitVec) -> int:
    """Row of the linear functional c -> <A c, u> (symplectic)."""
    w = omega_mul(u)
    word = 0
    for j in range(a.cols):
        word |= ((a.col(j).bits & w.bits).bit_count() & 1) << j
    return word


# -- worst-case search <-> decision --------------------------------------------


def wc_search_to_decision(h: BitMat, v: BitVec, w: int, decision_oracle) -> PauliVec:
    """Per-qubit error reconstruction from an exists-style decision oracle
    (callable (h, v, w') -> bool, assumed correct for every w' <= w).

    Binary-searches the true weight, then walks the qubits trying X, Z, Y
    row-additions with a decremented budget.  Raises
    OracleInconsistencyError if the answers cannot be assembled into an
    error with the promised syndrome and weight.
    """
    n = h.cols // 2
    if w == 0:
        if v.bits:
            raise OracleInconsistencyError("zero budget with nonzero syndrome")
        return PauliVec.zeros(n)
    lo, hi = 0, w
    while lo < hi:
        mid = (lo + hi) // 2
        if decision_oracle(h, v, mid):
            hi = mid
        else:
            lo = mid + 1
    w_star = lo
    ex = ez = 0
    v_hat = v
    w_hat = w_star
    for i in range(n):
        if w_hat == 0:
            break
        h_x_col = h.col(i)  # syndrome shift when a Z hits qubit i
        h_z_col = h.col(n + i)  # syndrome shift when an X hits qubit i
        if decision_oracle(h, v_hat ^ h_z_col, w_hat - 1):
            v_hat = v_hat ^ h_z_col
            w_hat -= 1
            ex |= 1 << i
            continue
        if decision_oracle(h, v_hat ^ h_x_col, w_hat - 1):
            v_hat = v_hat ^ h_x_col
            w_hat -= 1
            ez |= 1 << i
            continue
        if decision_oracle(h, v_hat ^ h_x_col ^ h_z_col, w_hat - 1):
            v_hat = v_hat ^ h_x_col ^ h_z_col
            w_hat -= 1
            ex |= 1 << i
            ez |= 1 << i
    out = PauliVec(n, BitVec(2 * n, ex | (ez << n)))
    if w_hat != 0 or syndrome_of(h, out).bits != v.bits:
        raise OracleInconsistencyError("decision answers were contradictory")
    return out


def wc_decision_to_search(h: BitMat, v: BitVec, w: int, search_oracle) -> bool:
    """YES iff the search oracle's output verifies: correct syndrome and
    weight <= w.  Sound against arbitrary (even junk) oracle output."""
    try:
        e = search_oracle(h, v, w)
    except Exception:
        return False
    if e is None:
        return False
    return pauli_weight(e) <= w and syndrome_of(h, e).bits == v.bits


# -- worst-case representation conversions --------------------------------------


def qncp_to_qsdp(desc: CliffordDesc, state: StabState, k: int):
    """Measure the code syndrome of a (possibly corrupted) code state:
    returns (H, v) with H the stabilizer check matrix of the code."""
    n = desc.n
    t = symp_of_clifford(desc)
    rows = [t.column(n + j).bits for j in range(n - k)]
    h = BitMat.from_rows(rows, 2 * n)
    gens = clifford_stabilizer_generators(desc, n - k)
    v = measure_syndrome(state, gens)
    return h, v


def qsdp_to_qncp(h: BitMat, v: BitVec, k: int, rng: np.random.Generator):
    """Build a code state with the given syndrome: complete the check matrix
    to a full tableau, synthesize the Clifford, and apply a Gaussian-
    elimination trial error with syndrome v to C|0^n>."""
    n = h.cols // 2
    stab_cols = [h.row(j) for j in range(h.rows)]
    logical_z = []
    for _ in range(k):
        vz = sample_symplectic_solution(
            n, rng, commute_with=stab_cols + logical_z,
            exclude_span=stab_cols + logical_z,
        )
        logical_z.append(vz)
    z_images = stab_cols + logical_z
    x_images = []
    for j in range(n):
        commute = [z_images[i] for i in range(n) if i != j] + x_images
        vx = sample_symplectic_solution(
            n, rng, commute_with=commute, anticommute_with=[z_images[j]]
        )
        x_images.append(vx)
    cols = x_images + z_images
    t = SympMat(n, BitMat.from_rows([c.bits for c in cols], 2 * n).transpose())
    desc = clifford_from_symp(t, PauliVec(n, BitVec.random(2 * n, rng)))
    homega = BitMat.from_rows(
        [omega_mul(h.row(i)).bits for i in range(h.rows)], 2 * n
    )
    e_trial = solve_random(homega, v, rng)
    if e_trial is None:
        raise ParameterError("syndrome is inconsistent with the check matrix")
    state = prepare_basis_state(n, BitVec.zeros(n))
    apply_clifford(state, desc)
    state.apply_pauli(PauliVec(n, e_trial))
    return desc, state
