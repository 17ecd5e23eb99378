import numpy as np
import pytest
from hypothesis import given, strategies as st

from genoq.entropy_encoders import (METRICS, metric_diagonal, nz22, nz23,
                                    quantig, qubit_budget, segment_layout, sencode)
from genoq.errors import (DegenerateEncodingError, InfiniteDivergenceError,
                          ValidationError)
from genoq.infomath import base_distribution, bhattacharyya, kl_divergence
from genoq.qsim import H, apply_gate, basis_state, tensor, zero_state

SQ2 = 1 / np.sqrt(2)
dna = st.text(alphabet="ACGT", min_size=1, max_size=40)


def pair(min_size=1, max_size=30):
    return st.integers(min_size, max_size).flatmap(
        lambda n: st.tuples(st.text(alphabet="ACGT", min_size=n, max_size=n),
                            st.text(alphabet="ACGT", min_size=n, max_size=n)))


def hadamard_register(width, r):
    reg = basis_state(width, r)
    for q in range(width):
        reg = apply_gate(reg, H, [q])
    return reg


# -- SEncode -----------------------------------------------------------------

def test_sencode_atcg():
    report, state = sencode("ATCG")
    assert (report.K, report.M, report.register_qubits) == (2, 2, 1)
    assert [s.bases for s in report.segments] == ["AT", "CG"]
    assert hadamard_register(1, 0).allclose([SQ2, SQ2], atol=1e-12)
    assert hadamard_register(1, 1).allclose([SQ2, -SQ2], atol=1e-12)
    assert state.allclose([0.5, -0.5, 0.5, -0.5], atol=1e-12)
    assert abs(np.linalg.norm(state.amplitudes) - 1) < 1e-12


def test_sencode_degenerate():
    report, state = sencode("AAAA")
    assert all(s.normalized_entropy == 0.0 for s in report.segments)
    assert [s.rank for s in report.segments] == [0, 1]
    assert state.allclose(tensor(hadamard_register(1, 0), hadamard_register(1, 1)).amplitudes)
    report, state = sencode("A")
    assert (report.K, report.M) == (1, 1)
    assert state.allclose([SQ2, SQ2])


def test_segment_layout():
    assert segment_layout(1) == (1, 1, 1)
    assert segment_layout(10) == (4, 3, 2)


@given(dna)
def test_sencode_properties(seq):
    report, state = sencode(seq)
    assert "".join(s.bases for s in report.segments) == seq
    assert sorted(s.rank for s in report.segments) == list(range(report.M))
    ranked = report.by_rank()
    keys = [(s.normalized_entropy, report.segments.index(s)) for s in ranked]
    assert keys == sorted(keys)
    assert abs(np.linalg.norm(state.amplitudes) - 1) < 1e-9


# -- budget ------------------------------------------------------------------

def test_budget_formula():
    assert qubit_budget(0.05, 1.0).n_qubits == 1
    assert qubit_budget(0.0, 1.0).n_qubits == 1
    assert qubit_budget(3.2, 1.0).n_qubits == 4
    assert qubit_budget(3.2, 0.5).n_qubits == 2
    assert qubit_budget(5.0, 0.5).n_qubits == 3  # 2.5 rounds half up
    with pytest.raises(ValidationError):
        qubit_budget(1.0, 1.5)


@given(st.floats(0, 30), st.floats(0, 1))
def test_budget_invariant(d, alpha):
    n = qubit_budget(d, alpha).n_qubits
    assert n >= 1 and n == max(1, int(np.floor(alpha * np.ceil(d) + 0.5)))


# -- NZ22 --------------------------------------------------------------------

def test_nz22_identical():
    budget, state = nz22("ACGTTGCA", "ACGTTGCA")
    assert budget.divergence == 0.0 and budget.n_qubits == 1
    assert np.array_equal(state.amplitudes, zero_state(1).amplitudes)


def test_nz22_all_mismatch():
    seq, ref = "A" * 16, "C" * 16
    budget, state = nz22(seq, ref, alpha=0.1, smoothing=True)
    n = budget.n_qubits
    assert n == 2
    assert state.allclose(basis_state(n, 2 ** n - 1).amplitudes, atol=1e-12)


def test_nz22_more_qubits_than_bases():
    # chunk size 3 // 5 = 0: the first four chunks are empty and stay |0>,
    # the last absorbs every base
    budget, state = nz22("AAA", "CCC", alpha=0.25, smoothing=True)
    assert budget.n_qubits == 5
    assert state.allclose(basis_state(5, 0b00001).amplitudes, atol=1e-12)


def test_nz22_errors():
    with pytest.raises(ValidationError, match="length"):
        nz22("AC", "ACG")
    with pytest.raises(InfiniteDivergenceError):
        nz22("AAAA", "CCCC")


@given(pair(), st.floats(0, 1))
def test_nz22_properties(sr, alpha):
    seq, ref = sr
    budget, state = nz22(seq, ref, alpha=alpha, smoothing=True)
    n = budget.n_qubits
    assert n == max(1, int(np.floor(alpha * np.ceil(budget.divergence) + 0.5)))
    probs = state.probabilities().reshape([2] * n)
    mism = "".join("0" if a == b else "1" for a, b in zip(seq, ref))
    size = len(mism) // n
    for j in range(n):
        chunk = mism[j * size:] if j == n - 1 else mism[j * size:(j + 1) * size]
        f = chunk.count("1") / len(chunk) if chunk else 0.0
        p1 = probs.sum(axis=tuple(k for k in range(n) if k != j))[1]
        assert abs(p1 - f) < 1e-12
    assert (seq == ref) == bool(np.isclose(state.probabilities()[0], 1.0, atol=1e-15))


# -- NZ23 --------------------------------------------------------------------

def test_nz23_worked_pair():
    budget, state = nz23("TACAGTTGCA", "AGCTGACTCA", alpha=1)
    assert abs(budget.divergence - 0.0102) < 5e-4
    assert budget.n_qubits == 1
    assert state.allclose([np.sqrt(0.7), np.sqrt(0.3)], atol=1e-12)


def test_nz23_identical_uniform():
    budget, state = nz23("ATCG", "ATCG")
    assert budget.divergence == 0.0
    assert state.allclose([np.sqrt(0.75), 0.5], atol=1e-12)


def test_nz23_disjoint():
    with pytest.raises(InfiniteDivergenceError):
        nz23("AAAA", "TTTT")


def test_nz23_wide_register():
    # far-apart distributions push the budget past one qubit
    seq, ref = "A" * 60 + "C", "C" * 60 + "A"
    budget, state = nz23(seq, ref)
    assert budget.n_qubits >= 2
    expected = np.zeros(2 ** budget.n_qubits)
    expected[:4] = np.sqrt(base_distribution(seq).p)
    assert state.allclose(expected, atol=1e-12)


@given(pair())
def test_nz23_bernoulli_probabilities(sr):
    seq, ref = sr
    p, q = base_distribution(seq), base_distribution(ref)
    if not np.any(np.sqrt(p.p * q.p) > 0):
        return
    budget, state = nz23(seq, ref)
    assert budget.divergence == bhattacharyya(p, q)
    if budget.n_qubits == 1:
        pb = p[seq[0]]
        assert np.allclose(state.probabilities(), [1 - pb, pb], atol=1e-12)


# -- QuantIG -----------------------------------------------------------------

def test_quantig_worked_diagonal():
    p = [.3, .2, .1, .4]   # A, C, G, T
    q = [.4, .2, .2, .2]
    g = metric_diagonal(p, q, "fisher-rao")
    expected = [25 / 3, 25, 50, 25 / 2]
    assert np.max(np.abs(g - expected)) < 1e-12


def test_quantig_uniform_gives_uniform_state():
    state = quantig("ACGT", "TGCA")
    assert state.allclose([0.5] * 4, atol=1e-12)


def test_quantig_errors():
    with pytest.raises(DegenerateEncodingError):
        quantig("ACGT", "TGCA", metric="hellinger")
    with pytest.raises(ValidationError, match="smoothing"):
        quantig("AACG", "ACGT")
    with pytest.raises(ValidationError):
        quantig("ACGT", "ACGT", metric="euclid")


def test_quantig_smoothing_enables_zero_counts():
    state = quantig("AACG", "ACGT", smoothing=1e-3)
    assert abs(np.linalg.norm(state.amplitudes) - 1) < 1e-12


def test_quantig_amplitudes_follow_formula():
    seq, ref = "AACCCGTTTT", "ACCGGGTTTA"
    p, q = base_distribution(seq).p, base_distribution(ref).p
    for metric in METRICS:
        vec = metric_diagonal(p, q, metric) / np.sqrt(p)
        if not vec.any():
            continue
        assert quantig(seq, ref, metric).allclose(vec / np.linalg.norm(vec), atol=1e-12)


@given(pair(4, 20), st.permutations("ACGT"))
def test_quantig_relabel_equivariant(sr, perm):
    seq, ref = sr
    p, q = base_distribution(seq).p, base_distribution(ref).p
    if np.any(p == 0) or np.any(q == 0):
        return
    table = str.maketrans("ACGT", "".join(perm))
    a = quantig(seq, ref).amplitudes
    b = quantig(seq.translate(table), ref.translate(table)).amplitudes
    idx = ["ACGT".index(c) for c in perm]
    assert np.allclose(b[idx], a, atol=1e-12)
