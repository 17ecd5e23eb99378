import math
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from genoq.errors import InfiniteDivergenceError, ValidationError
from genoq.infomath import (ProbDist4, base_distribution, bhattacharyya,
                            fisher_rao_diag, hamming, hellinger, js_divergence,
                            kl_divergence, mismatch_string, shannon_entropy,
                            smooth, tv_wasserstein)

UNIFORM = [0.25] * 4
DELTA_A = [1, 0, 0, 0]
DELTA_T = [0, 0, 0, 1]


def dist(raw):
    v = np.asarray(raw, dtype=float)
    return v / v.sum()


positive_dists = st.lists(st.floats(0.01, 1), min_size=4, max_size=4).map(dist)
any_dists = st.lists(st.floats(0, 1), min_size=4, max_size=4).filter(lambda v: sum(v) > 0.01).map(dist)


def transport_lp(p, q):
    # min sum c_ij x_ij, rows sum to p, columns to q, c = 1 off the diagonal
    c = (1 - np.eye(4)).reshape(-1)
    a_eq, b_eq = [], []
    for i in range(4):
        row = np.zeros((4, 4)); row[i, :] = 1
        a_eq.append(row.reshape(-1)); b_eq.append(p[i])
        col = np.zeros((4, 4)); col[:, i] = 1
        a_eq.append(col.reshape(-1)); b_eq.append(q[i])
    res = linprog(c, A_eq=np.array(a_eq), b_eq=np.array(b_eq), bounds=(0, None), method="highs")
    return res.fun


def test_distribution_examples():
    assert base_distribution("ATCG").as_dict() == {b: 0.25 for b in "ACGT"}
    assert base_distribution("TACAGTTGCA").as_dict() == {"A": .3, "C": .2, "G": .2, "T": .3}
    assert np.array_equal(base_distribution("AAAA").p, DELTA_A)


def test_probdist_validation():
    with pytest.raises(ValidationError):
        ProbDist4([0.5, 0.5, 0.5, 0])
    with pytest.raises(ValidationError):
        ProbDist4([1.2, -0.2, 0, 0])
    with pytest.raises(ValidationError):
        ProbDist4([1, 0, 0])


def test_entropy_examples():
    assert shannon_entropy(UNIFORM) == 2.0
    assert shannon_entropy(DELTA_A) == 0.0
    assert shannon_entropy([.5, .5, 0, 0]) == 1.0


@given(positive_dists, st.integers(0, 3), st.floats(1e-4, 0.05))
def test_entropy_max_at_uniform(p, i, delta):
    q = np.array(UNIFORM)
    q[i] += delta
    q[(i + 1) % 4] -= delta
    assert shannon_entropy(q) < 2.0
    assert shannon_entropy(p) <= 2.0 + 1e-12


def test_kl_examples():
    assert kl_divergence(UNIFORM, UNIFORM) == 0.0
    with pytest.raises(InfiniteDivergenceError):
        kl_divergence(DELTA_A, [0, 1, 0, 0])
    p, q = [.3, .2, .2, .3], [.3, .3, .2, .2]
    oracle = math.fsum(a * math.log(a / b) for a, b in zip(p, q))
    assert abs(kl_divergence(p, q) - oracle) < 1e-15


def test_kl_smoothing_opt_in():
    val = kl_divergence(DELTA_A, [0, 1, 0, 0], smoothing=True)
    assert np.isfinite(val) and val > 10
    assert smooth(np.array(DELTA_A), 0.1) == pytest.approx([1.1 / 1.4, .1 / 1.4, .1 / 1.4, .1 / 1.4])


@given(positive_dists, positive_dists)
def test_kl_nonnegative(p, q):
    assert kl_divergence(p, q) >= 0.0
    assert kl_divergence(p, p) == 0.0


def test_kl_asymmetric():
    p, q = [.7, .1, .1, .1], [.25, .25, .25, .25]
    assert kl_divergence(p, q) != pytest.approx(kl_divergence(q, p), abs=1e-6)


def test_js_examples():
    assert js_divergence(UNIFORM, UNIFORM) == 0.0
    assert js_divergence(DELTA_A, DELTA_T) == 1.0


@given(any_dists, any_dists)
def test_js_against_formula(p, q):
    m = (p + q) / 2
    def kl2(a, b):
        return sum(x * math.log2(x / y) for x, y in zip(a, b) if x > 0)
    assert abs(js_divergence(p, q) - (kl2(p, m) + kl2(q, m)) / 2) < 1e-12


def test_bhattacharyya_examples():
    assert bhattacharyya(UNIFORM, UNIFORM) == 0.0
    d = bhattacharyya(base_distribution("TACAGTTGCA"), base_distribution("AGCTGACTCA"))
    assert abs(d - 0.0102) < 5e-4
    with pytest.raises(InfiniteDivergenceError):
        bhattacharyya(DELTA_A, DELTA_T)


def test_hellinger_examples():
    assert hellinger(UNIFORM, UNIFORM) == 0.0
    assert hellinger(DELTA_A, DELTA_T) == 1.0


@given(any_dists, any_dists)
def test_hellinger_against_formula(p, q):
    ref = math.sqrt(0.5 * sum((math.sqrt(a) - math.sqrt(b)) ** 2 for a, b in zip(p, q)))
    assert abs(hellinger(p, q) - ref) < 1e-12


@given(positive_dists, positive_dists)
def test_symmetric_measures(p, q):
    assert abs(bhattacharyya(p, q) - bhattacharyya(q, p)) <= 1e-15
    assert abs(hellinger(p, q) - hellinger(q, p)) <= 1e-15


@given(any_dists, any_dists)
def test_bounded_measures(p, q):
    for f in (hellinger, js_divergence, tv_wasserstein):
        assert 0.0 <= f(p, q) <= 1.0


def test_tv_examples():
    assert tv_wasserstein(UNIFORM, UNIFORM) == 0.0
    assert tv_wasserstein(DELTA_A, DELTA_T) == 1.0


def test_tv_matches_transport_lp():
    rng = np.random.default_rng(5)
    for _ in range(200):
        p, q = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        assert abs(tv_wasserstein(p, q) - transport_lp(p, q)) < 1e-9


def test_fisher_rao_examples():
    # A, C, G, T order of the worked (A .3, T .4, C .2, G .1) / (A .4, T .2, C .2, G .2) pair
    g = fisher_rao_diag([.3, .2, .1, .4], [.4, .2, .2, .2])
    expected = {"A": 25 / 3, "T": 25 / 2, "C": 25, "G": 50}
    for b, v in zip("ACGT", g):
        assert abs(v - expected[b]) < 1e-12
    assert np.allclose(fisher_rao_diag(UNIFORM, UNIFORM), 16, atol=0)
    with pytest.raises(ValidationError, match="smooth"):
        fisher_rao_diag(DELTA_A, UNIFORM)


def test_hamming_examples():
    assert hamming("AAA", "AAA") == 0
    assert hamming("AAA", "AAT") == 1
    assert hamming("ATCG", "GCTA") == 4
    assert mismatch_string("ACGT", "ACTT") == "0010"
    with pytest.raises(ValidationError):
        hamming("A", "AA")
