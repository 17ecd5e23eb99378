import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from genoq.errors import CapExceededError, ValidationError
from genoq.qsim import (CNOT, CZ, H, SWAP, X, Gate, Statevector, apply_gate,
                        apply_multiplexed_ry, apply_qft, basis_state, bitstring,
                        check_cap, cphase, dump_counts, max_qubits, qft_matrix,
                        qubit_cap, rotation_gate, sample_counts, set_max_qubits,
                        tensor, tensor_all, with_global_phase, zero_state)

from conftest import random_state_vector

SQ2 = 1 / np.sqrt(2)


def dense_dft(n):
    # independent oracle: F[p, q] = exp(2 pi i p q / N) / sqrt(N), built by loops
    N = 2 ** n
    F = np.empty((N, N), dtype=complex)
    for p in range(N):
        for q in range(N):
            F[p, q] = np.exp(2j * np.pi * p * q / N) / np.sqrt(N)
    return F


def kron_gate(gate, target, n):
    mats = [np.eye(2)] * n
    mats[target] = gate
    out = np.array([[1.0]])
    for m in mats:
        out = np.kron(out, m)
    return out


# -- basis states ------------------------------------------------------------

def test_basis_state_examples():
    assert np.array_equal(basis_state(1, 0).amplitudes, [1, 0])
    assert np.array_equal(basis_state(2, 3).amplitudes, [0, 0, 0, 1])
    with pytest.raises(ValidationError, match="out of range"):
        basis_state(3, 8)


def test_statevector_rejects_bad_input():
    with pytest.raises(ValidationError):
        Statevector([1, 0, 0])
    with pytest.raises(ValidationError):
        Statevector([1.0, 1.0])
    with pytest.raises(ValidationError):
        Statevector([np.nan, 0])
    s = Statevector([1, 0])
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0


# -- gates -------------------------------------------------------------------

def test_rotation_examples():
    assert np.allclose(rotation_gate("Z", 0).matrix, np.eye(2), atol=1e-15)
    assert np.allclose(rotation_gate("X", np.pi).matrix, -1j * X.matrix, atol=1e-15)
    out = apply_gate(zero_state(1), rotation_gate("Y", np.pi), [0])
    assert out.allclose([0, 1], atol=1e-15)


def test_rotation_rejects_unknown_axis_and_nan():
    with pytest.raises(ValidationError):
        rotation_gate("W", 1.0)
    with pytest.raises(ValidationError):
        rotation_gate("X", float("nan"))


def test_gate_must_be_unitary():
    with pytest.raises(ValidationError):
        Gate([[1, 1], [0, 1]], "bad")


@given(st.sampled_from("XYZ"), st.floats(-20, 20))
def test_rotations_are_unitary(axis, theta):
    u = rotation_gate(axis, theta).matrix
    assert np.max(np.abs(u @ u.conj().T - np.eye(2))) < 1e-10


@given(st.floats(-20, 20))
def test_cphase_unitary(phi):
    u = cphase(phi).matrix
    assert np.max(np.abs(u @ u.conj().T - np.eye(4))) < 1e-10


def test_apply_gate_examples():
    assert apply_gate(zero_state(1), H, [0]).allclose([SQ2, SQ2])
    assert apply_gate(zero_state(2), X, [1]).allclose(basis_state(2, 1).amplitudes)
    assert apply_gate(basis_state(2, 2), CNOT, [0, 1]).allclose(basis_state(2, 3).amplitudes)


def test_two_qubit_gate_target_order():
    # CNOT with control 1 and target 0: |01> -> |11>
    assert apply_gate(basis_state(2, 1), CNOT, [1, 0]).allclose(basis_state(2, 3).amplitudes)
    assert apply_gate(basis_state(3, 0b100), SWAP, [0, 2]).allclose(basis_state(3, 0b001).amplitudes)


def test_apply_gate_bad_targets():
    with pytest.raises(ValidationError):
        apply_gate(zero_state(2), H, [2])
    with pytest.raises(ValidationError):
        apply_gate(zero_state(2), CNOT, [0, 0])
    with pytest.raises(ValidationError):
        apply_gate(zero_state(2), CNOT, [0])


def test_apply_gate_matches_kron(rng):
    n = 4
    psi = random_state_vector(rng, n)
    for target in range(n):
        u = rotation_gate("Y", 0.7).matrix
        expected = kron_gate(u, target, n) @ psi
        got = apply_gate(Statevector(psi), rotation_gate("Y", 0.7), [target])
        assert got.allclose(expected, atol=1e-12)


def test_cz_symmetric(rng):
    psi = Statevector(random_state_vector(rng, 3))
    assert apply_gate(psi, CZ, [0, 2]).allclose(apply_gate(psi, CZ, [2, 0]).amplitudes)


def test_multiplexed_ry_matches_block_diagonal(rng):
    psi = random_state_vector(rng, 3)
    angles = rng.uniform(-3, 3, size=4)
    # target qubit 2 controlled by qubits 0 and 1: block diagonal of RY blocks
    blocks = [rotation_gate("Y", a).matrix for a in angles]
    U = np.zeros((8, 8), dtype=complex)
    for k, b in enumerate(blocks):
        U[2 * k:2 * k + 2, 2 * k:2 * k + 2] = b
    got = apply_multiplexed_ry(Statevector(psi), angles, 2)
    assert got.allclose(U @ psi, atol=1e-12)


# -- tensor ------------------------------------------------------------------

def test_tensor_examples():
    zero, one = basis_state(1, 0), basis_state(1, 1)
    plus = apply_gate(zero, H, [0])
    minus = apply_gate(one, H, [0])
    assert tensor(zero, one).allclose(basis_state(2, 1).amplitudes)
    assert tensor(plus, zero).allclose([SQ2, 0, SQ2, 0])
    assert tensor(plus, minus).allclose([0.5, -0.5, 0.5, -0.5], atol=1e-15)
    assert tensor_all([zero, one, one]).allclose(basis_state(3, 3).amplitudes)


# -- QFT ---------------------------------------------------------------------

def test_qft_examples():
    for n in range(1, 5):
        out = apply_qft(zero_state(n))
        assert out.allclose(np.full(2 ** n, 2 ** (-n / 2)), atol=1e-14)
    assert np.allclose(qft_matrix(1), H.matrix, atol=1e-15)
    assert apply_qft(basis_state(3, 3)).allclose(dense_dft(3)[:, 3], atol=1e-12)


def test_qft_matrix_equals_loop_oracle():
    for n in range(1, 6):
        assert np.max(np.abs(qft_matrix(n) - dense_dft(n))) < 1e-12


def test_qft_circuit_vs_dft_random(rng):
    for n in range(1, 9):
        F = dense_dft(n) if n <= 6 else qft_matrix(n)
        for _ in range(3):
            psi = random_state_vector(rng, n)
            assert np.max(np.abs(apply_qft(Statevector(psi)).amplitudes - F @ psi)) < 1e-10


@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_qft_preserves_norm(n, seed):
    psi = random_state_vector(np.random.default_rng(seed), n)
    out = apply_qft(Statevector(psi))
    assert abs(np.vdot(out.amplitudes, out.amplitudes).real - 1) < 1e-9


# -- sampling ----------------------------------------------------------------

def test_sample_basis_state():
    assert sample_counts(basis_state(2, 3), 1024, seed=0) == {"11": 1024}


def test_sample_golden_counts():
    # recorded from PCG64 with seed 7
    plus = apply_gate(zero_state(1), H, [0])
    counts = sample_counts(plus, 1024, seed=7)
    assert counts == {"0": 512, "1": 512}
    assert all(abs(c - 512) <= 48 for c in counts.values())


def test_sample_zero_shots_rejected():
    with pytest.raises(ValidationError):
        sample_counts(zero_state(1), 0)


@given(st.integers(1, 5), st.integers(0, 1000), st.floats(-7, 7))
def test_global_phase_does_not_change_counts(n, seed, phi):
    psi = Statevector(random_state_vector(np.random.default_rng(seed), n))
    assert sample_counts(psi, 500, seed) == sample_counts(with_global_phase(psi, phi), 500, seed)


def test_sampling_deterministic(rng):
    psi = Statevector(random_state_vector(rng, 4))
    assert dump_counts(sample_counts(psi, 777, 3)) == dump_counts(sample_counts(psi, 777, 3))


def test_counts_keys_big_endian():
    assert bitstring(1, 3) == "001"
    assert sample_counts(apply_gate(zero_state(3), X, [0]), 5) == {"100": 5}


# -- serialization -----------------------------------------------------------

def test_json_round_trip(rng):
    psi = Statevector(random_state_vector(rng, 3))
    text = psi.to_json({"scheme": "test"})
    doc = json.loads(text)
    assert doc["convention"] == "big-endian" and doc["n_qubits"] == 3
    assert doc["metadata"] == {"scheme": "test"}
    back = Statevector.from_json(text)
    assert np.array_equal(back.amplitudes, psi.amplitudes)


def test_json_rejects_tampered_norm():
    doc = {"n_qubits": 1, "convention": "big-endian", "amplitudes": [[0.5, 0], [0.5, 0]]}
    with pytest.raises(ValidationError, match="not normalized"):
        Statevector.from_dict(doc)
    with pytest.raises(ValidationError):
        Statevector.from_json("not json")
    with pytest.raises(ValidationError):
        Statevector.from_dict({**doc, "convention": "little-endian"})


# -- cap ---------------------------------------------------------------------

def test_qubit_cap_default_and_override():
    assert max_qubits() == 24
    with qubit_cap(3):
        assert max_qubits() == 3
        with pytest.raises(CapExceededError):
            zero_state(4)
    assert max_qubits() == 24
    with pytest.raises(ValidationError):
        set_max_qubits(29)
    with pytest.raises(CapExceededError):
        check_cap(25)
