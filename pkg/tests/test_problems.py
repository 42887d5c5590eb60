"""Problem samplers: hidden data reproduces visible data, distributional
checks at enumerable sizes, JSON envelopes."""
from collections import Counter
from fractions import Fraction

import pytest

from stabnoise.gf2 import BitMat, rank
from stabnoise.problems import (
    code_distance,
    instance_from_json,
    instance_to_json,
    sample_lpn,
    sample_lsn_classical,
    sample_lsn_quantum,
    sample_qsdp,
    sample_symplpn,
    sample_weight_at_most,
    syndrome_of,
)
from stabnoise.stabsim import apply_clifford_inverse
from stabnoise.stats import chi_square_uniform
from stabnoise.symplectic import (
    IsotropicSet,
    pauli_weight,
    symp_inner,
    symp_of_pauli,
)

FIVE_QUBIT = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]


def test_lpn_noiseless_consistency(rng):
    inst = sample_lpn(3, 6, 0.0, True, rng)
    assert inst.a.mul_vec(inst.hidden["x"]).bits == inst.y.bits


def test_lpn_structured_reproduces(rng):
    for _ in range(50):
        inst = sample_lpn(2, 5, 0.25, True, rng)
        recon = inst.a.mul_vec(inst.hidden["x"]) ^ inst.hidden["e"]
        assert recon.bits == inst.y.bits


def test_lpn_unstructured_bits_unbiased(rng):
    ones = total = 0
    for _ in range(5_000)        :
        inst = sample_lpn(1, 4, 0.25, False, rng)
        ones += inst.y.weight()
        total += 4
    assert abs(ones / total - 0.5) < 0.01


def test_lpn_error_weight_binomial_mean(rng):
    total = 0
    draws = 20_000
    for _ in range(draws):
        inst = sample_lpn(1, 4, 0.25, True, rng)
        total += inst.hidden["e"].weight()
    assert total / draws == pytest.approx(1.0, abs=0.05)


def test_lpn_rejects_bad_dims(rng):
    with pytest.raises(ValueError):
        sample_lpn(0, 4, 0.1, True, rng)
    with pytest.raises(ValueError):
        sample_lpn(5, 4, 0.1, True, rng)


def test_symplpn_isotropic_and_consistent(rng):
    for _ in range(20):
        inst = sample_symplpn(3, 0.2, True, rng)
        IsotropicSet(3, inst.a).validate()
        recon = inst.a.mul_vec(inst.hidden["x"]) ^ inst.hidden["e"].v
        assert recon.bits == inst.z.bits


def test_symplpn_noiseless_in_column_space(rng):
    inst = sample_symplpn(3, 0.0, True, rng)
    stacked = inst.a.transpose().vstack(BitMat.from_rows([inst.z], 6))
    assert rank(stacked) == rank(inst.a.transpose())


def test_symplpn_matrix_uniform_n2(rng):
    counts = Counter(sample_symplpn(2, 0.1, False, rng).a.row_ints for _ in range(45_000))
    assert len(counts) == 90
    assert chi_square_uniform(list(counts.values())) > 0.001


def test_lsn_classical_invariants(rng):
    inst = sample_lsn_classical(2, 4, 0.2, 3, True, rng)
    for s, r, e in zip(inst.samples, inst.hidden["r"], inst.hidden["e"]):
        recon = s.a.mul_vec(r) ^ s.b.mul_vec(inst.hidden["y"]) ^ e.v
        assert recon.bits == s.z.bits
        joint = s.a.hstack(s.b)
        assert rank(joint.transpose()) == 6
        # A columns pairwise orthogonal, B columns pairwise orthogonal
        IsotropicSet(4, s.a).validate()
        IsotropicSet(4, s.b).validate()


def test_lsn_junk_fresh_secret_shared(rng):
    inst = sample_lsn_classical(1, 3, 0.1, 4, True, rng)
    assert len({r.bits for r in inst.hidden["r"]}) > 1  # junk differs whp
    assert len(inst.hidden["r"]) == 4


def test_lsn_rejects_k0(rng):
    with pytest.raises(ValueError):
        sample_lsn_classical(0, 4, 0.1, 1, True, rng)


def test_lsn_quantum_noiseless_decode(rng):
    inst = sample_lsn_quantum(1, 3, 0.0, 2, True, rng)
    for s in inst.samples:
        st = s.state.copy()
        apply_clifford_inverse(st, s.clifford)
        out = st.measure_all_z()
        assert out.slice(0, 2).bits == 0
        assert out.slice(2, 3).bits == inst.hidden["x"].bits


def test_lsn_quantum_unstructured_uniform_outcomes(rng):
    counts = Counter()
    for _ in range(5_000):
        inst = sample_lsn_quantum(1, 2, 0.1, 1, False, rng)
        counts[inst.samples[0].state.measure_all_z(rng).bits] += 1
    assert chi_square_uniform([counts[i] for i in range(4)]) > 0.001


def test_lsn_quantum_syndrome_matches_symplectic(rng):
    from stabnoise.reductions import qncp_to_qsdp

    inst = sample_lsn_quantum(1, 4, 0.3, 2, True, rng)
    for s, err in zip(inst.samples, inst.hidden["e"]):
        h, v = qncp_to_qsdp(s.clifford, s.state.copy(), 1)
        assert v.bits == syndrome_of(h, err).bits


def test_qsdp_sampler(rng):
    inst = sample_qsdp(5, 1, 1, rng)
    assert code_distance(inst.h) >= 3
    assert pauli_weight(inst.hidden["e"]) <= 1
    assert syndrome_of(inst.h, inst.hidden["e"]).bits == inst.v.bits


def test_qsdp_w0_zero_syndrome(rng):
    inst = sample_qsdp(3, 1, 0, rng)
    assert inst.v.bits == 0


def test_qsdp_infeasible_params(rng):
    with pytest.raises(RuntimeError):
        sample_qsdp(2, 1, 2, rng, max_tries=50)


def test_five_qubit_code_distance():
    rows = [symp_of_pauli(s).v.bits for s in FIVE_QUBIT]
    assert code_distance(BitMat.from_rows(rows, 10)) == 3


def test_sample_weight_at_most(rng):
    counts = Counter()
    for _ in range(20_000):
        p = sample_weight_at_most(2, 1, rng)
        counts[p.v.bits] += 1
        assert pauli_weight(p) <= 1
    # 1 identity + 6 weight-one Paulis, uniform
    assert len(counts) == 7
    assert chi_square_uniform(list(counts.values())) > 0.001


def test_json_round_trips(rng):
    insts = [
        sample_lpn(2, 5, 0.25, True, rng),
        sample_symplpn(3, Fraction(3, 10), True, rng),
        sample_lsn_classical(1, 3, 0.2, 2, True, rng),
        sample_lsn_quantum(1, 3, 0.2, 2, True, rng),
        sample_qsdp(5, 1, 1, rng),
        sample_lpn(2, 5, 0.25, False, rng),
    ]
    for inst in insts:
        doc = instance_to_json(inst)
        back = instance_from_json(doc)
        assert instance_to_json(back) == doc
    # hidden can be stripped
    doc = instance_to_json(insts[0], include_hidden=False)
    assert doc["hidden"] is None


def test_qsdp_check_matrix_rows_isotropic(rng):
    inst = sample_qsdp(5, 1, 1, rng)
    IsotropicSet(5, inst.h.transpose()).validate()
