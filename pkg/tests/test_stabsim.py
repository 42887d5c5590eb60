"""Stabilizer simulator: agreement with a dense statevector oracle,
tableau invariants, syndrome measurement, Clifford synthesis."""
import numpy as np
import pytest

from helpers import (
    clifford_matrix,
    pauli_matrix,
    random_gate_sequence,
    statevector_distribution,
)
from stabnoise.gf2 import BitVec
from stabnoise.stabsim import (
    CliffordDesc,
    StabState,
    apply_clifford,
    apply_clifford_inverse,
    clifford_from_symp,
    clifford_stabilizer_generators,
    conjugate_pauli,
    measure_syndrome,
    prepare_basis_state,
    random_clifford_desc,
    symp_of_clifford,
)
from stabnoise.symplectic import (
    PauliVec,
    random_clifford_symp,
    symp_inner,
    symp_of_pauli,
)

FIVE_QUBIT_STABILIZERS = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]


def test_prepare_basis_state_signs():
    st = prepare_basis_state(3, BitVec.from_bits([1, 0, 1]))
    assert [int(b) for b in st.r[3:]] == [1, 0, 1]
    assert st.measure_all_z().to_tuple() == (1, 0, 1)


def test_basis_round_trip(rng):
    for n in (1, 2, 4):
        for _ in range(20):
            bits = BitVec.random(n, rng)
            assert prepare_basis_state(n, bits).measure_all_z().bits == bits.bits


def test_h_gives_unbiased_bit(rng):
    ones = 0
    for _ in range(10_000):
        st = StabState.zero_state(1)
        st.apply_gate("H", (0,))
        ones += st.measure_z(0, rng)
    assert abs(ones / 10_000 - 0.5) < 0.02


def test_apply_pauli_flips():
    st = prepare_basis_state(3, BitVec.zeros(3))
    st.apply_pauli(symp_of_pauli("XII"))
    assert st.measure_all_z().to_tuple() == (1, 0, 0)


def test_cx_truth_table():
    st = prepare_basis_state(2, BitVec.from_bits([1, 0]))
    st.apply_gate("CX", (0, 1))
    assert st.measure_all_z().to_tuple() == (1, 1)


def test_plus_zero_state(rng):
    for _ in range(200):
        st = prepare_basis_state(2, BitVec.zeros(2))
        st.apply_gate("H", (0,))
        out = st.measure_all_z(rng)
        assert out.bit(1) == 0


def test_agreement_with_statevector_oracle(rng):
    for _ in range(150):
        n = int(rng.integers(1, 4))
        gates = random_gate_sequence(n, int(rng.integers(0, 12)), rng)
        pauli = PauliVec(n, BitVec.random(2 * n, rng))
        start = int(rng.integers(0, 2**n))
        exact = statevector_distribution(n, gates, pauli, start)
        shots = 2_000
        counts = np.zeros(2**n)
        for _ in range(shots):
            st = prepare_basis_state(n, BitVec.from_int(n, start))
            for op, t in gates:
                st.apply_gate(op, t)
            st.apply_pauli(pauli)
            counts[st.measure_all_z(rng).bits] += 1
        tv = 0.5 * np.abs(counts / shots - exact).sum()
        assert tv < 0.06
        st.check_invariants()


def test_measurement_distribution_uniform_over_affine_subspace(rng):
    # C|0^n> measured in the computational basis is uniform over an affine
    # subspace; compare support and uniformity against the dense oracle.
    for _ in range(30):
        n = int(rng.integers(1, 4))
        desc = random_clifford_desc(n, rng)
        u = clifford_matrix(desc)
        exact = np.abs(u[:, 0]) ** 2
        support = set(np.flatnonzero(exact > 1e-12))
        assert np.allclose(
            sorted({round(float(x), 12) for x in exact[list(support)]}),
            [1.0 / len(support)],
        )
        seen = set()
        for _ in range(300):
            st = prepare_basis_state(n, BitVec.zeros(n))
            apply_clifford(st, desc)
            seen.add(st.measure_all_z(rng).bits)
        assert seen <= support


def test_deterministic_measurement_leaves_state(rng):
    st = prepare_basis_state(2, BitVec.from_bits([1, 0]))
    before = (st.x.copy(), st.z.copy(), st.r.copy())
    assert st.measure_z(0) == 1
    assert np.array_equal(st.x, before[0])
    assert np.array_equal(st.z, before[1])
    assert np.array_equal(st.r, before[2])


def test_random_measurement_requires_rng():
    st = StabState.zero_state(1)
    st.apply_gate("H", (0,))
    with pytest.raises(ValueError):
        st.measure_z(0)


def test_clifford_synthesis_round_trip(rng):
    for n in (1, 2, 3, 4):
        for _ in range(20):
            t = random_clifford_symp(n, rng)
            desc = clifford_from_symp(t)
            assert symp_of_clifford(desc).t.row_ints == t.t.row_ints


def test_conjugate_pauli_sign_exact(rng):
    for _ in range(100):
        n = int(rng.integers(1, 4))
        desc = random_clifford_desc(n, rng)
        p = PauliVec(n, BitVec.random(2 * n, rng))
        q, sgn = conjugate_pauli(desc, p, 0)
        u = clifford_matrix(desc)
        lhs = u @ pauli_matrix(p) @ u.conj().T
        assert np.allclose(lhs, (-1) ** sgn * pauli_matrix(q))


def test_clifford_inverse_round_trip(rng):
    for _ in range(50):
        n = int(rng.integers(1, 4))
        desc = random_clifford_desc(n, rng)
        bits = BitVec.random(n, rng)
        st = prepare_basis_state(n, bits)
        apply_clifford(st, desc)
        apply_clifford_inverse(st, desc)
        assert st.measure_all_z().bits == bits.bits


def test_syndrome_of_clean_code_state(rng):
    for _ in range(30):
        n = int(rng.integers(2, 5))
        k = int(rng.integers(1, n))
        desc = random_clifford_desc(n, rng)
        st = prepare_basis_state(n, BitVec.zeros(n))
        apply_clifford(st, desc)
        gens = clifford_stabilizer_generators(desc, n - k)
        assert measure_syndrome(st, gens).bits == 0


def test_syndrome_equals_anticommutation_pattern(rng):
    for _ in range(50):
        n = int(rng.integers(2, 5))
        k = 1
        desc = random_clifford_desc(n, rng)
        st = prepare_basis_state(n, BitVec.zeros(n))
        apply_clifford(st, desc)
        err = PauliVec(n, BitVec.random(2 * n, rng))
        st.apply_pauli(err)
        gens = clifford_stabilizer_generators(desc, n - k)
        got = measure_syndrome(st, gens)
        expect = [symp_inner(g, err) for g, _ in gens]
        assert list(got.to_tuple()) == expect


def test_five_qubit_code_syndrome(rng):
    # build the [[5,1,3]] code's encoding Clifford from its check matrix
    from stabnoise.gf2 import BitMat
    from stabnoise.reductions import qsdp_to_qncp

    rows = [symp_of_pauli(s).v.bits for s in FIVE_QUBIT_STABILIZERS]
    h = BitMat.from_rows(rows, 10)
    desc, state = qsdp_to_qncp(h, BitVec.zeros(4), 1, rng)
    gens = clifford_stabilizer_generators(desc, 4)
    assert measure_syndrome(state.copy(), gens).bits == 0
    err = symp_of_pauli("XIIII")
    state.apply_pauli(err)
    got = measure_syndrome(state, gens)
    expect = [symp_inner(symp_of_pauli(s), err) for s in FIVE_QUBIT_STABILIZERS]
    assert list(got.to_tuple()) == expect


def test_measure_syndrome_rejects_noncommuting():
    st = StabState.zero_state(1)
    gens = [(symp_of_pauli("X"), 0), (symp_of_pauli("Z"), 0)]
    with pytest.raises(ValueError):
        measure_syndrome(st, gens)


def test_gate_validation():
    st = StabState.zero_state(2)
    with pytest.raises(IndexError):
        st.apply_gate("H", (2,))
    with pytest.raises(ValueError):
        st.apply_gate("CX", (0, 0))
    with pytest.raises(ValueError):
        CliffordDesc(2, (("Q", (0,)),))


def test_clifford_desc_json_round_trip(rng):
    desc = random_clifford_desc(3, rng)
    back = CliffordDesc.from_json(desc.to_json())
    assert back.gates == desc.gates
    assert back.frame.v.bits == desc.frame.v.bits


def test_stab_state_json_round_trip(rng):
    desc = random_clifford_desc(3, rng)
    st = prepare_basis_state(3, BitVec.random(3, rng))
    apply_clifford(st, desc)
    back = StabState.from_json(st.to_json())
    assert np.array_equal(back.x, st.x)
    assert np.array_equal(back.z, st.z)
    assert np.array_equal(back.r, st.r)


def test_tableau_invariants_after_random_ops(rng):
    for _ in range(20):
        n = int(rng.integers(1, 5))
        st = prepare_basis_state(n, BitVec.random(n, rng))
        for op, t in random_gate_sequence(n, 20, rng):
            st.apply_gate(op, t)
        st.measure_z(int(rng.integers(0, n)), rng)
        st.check_invariants()
