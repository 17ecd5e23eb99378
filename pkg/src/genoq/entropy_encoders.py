"""
Entropy- and divergence-driven encoders.

``sencode`` ranks fixed-size segments by normalized entropy and gives each a
Hadamard-dressed rank register. ``nz22`` and ``nz23`` size a register from
the KL or Bhattacharyya divergence to a reference sequence. ``quantig``
reweights the uniform superposition by a diagonal information metric.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .baseline import amplitude_encode
from .errors import DegenerateEncodingError, ValidationError
from .infomath import (DEFAULT_SMOOTHING, ProbDist4, base_distribution,
                       bhattacharyya, kl_divergence, mismatch_string,
                       shannon_entropy, smooth)
from .qsim import (H, Statevector, apply_gate, basis_state, check_cap,
                   rotation_gate, tensor_all, zero_state)
from .seqio import BASES, DnaSequence, parse_sequence

__all__ = [
    "Segment", "SegmentReport", "segment_layout", "sencode", "EncodeBudget",
    "qubit_budget", "nz22", "nz23", "METRICS", "metric_diagonal", "quantig",
]


def _ceil_log2(n: int) -> int:
    return (int(n) - 1).bit_length()


# -- SEncode -----------------------------------------------------------------

@dataclass
class Segment:
    bases: str
    distribution: ProbDist4
    entropy: float
    normalized_entropy: float = 0.0
    rank: int = 0

    def to_dict(self) -> dict:
        return {"bases": self.bases, "distribution": self.distribution.as_dict(),
                "entropy": self.entropy, "normalized_entropy": self.normalized_entropy,
                "rank": self.rank}


@dataclass
class SegmentReport:
    K: int
    M: int
    register_qubits: int
    sequence_entropy: float
    segments: list[Segment] = field(default_factory=list)

    def by_rank(self) -> list[Segment]:
        return sorted(self.segments, key=lambda s: s.rank)

    def to_dict(self) -> dict:
        return {"K": self.K, "M": self.M, "register_qubits": self.register_qubits,
                "sequence_entropy": self.sequence_entropy,
                "segments": [s.to_dict() for s in self.segments]}


def segment_layout(n: int) -> tuple[int, int, int]:
    """``(K, M, k')``: segment size ``max(1, ceil(log2 N))``, segment count
    ``ceil(N / K)`` and rank-register width ``ceil(log2 max(M, 2))``."""
    k = max(1, _ceil_log2(n))
    m = -(-n // k)
    return k, m, _ceil_log2(max(m, 2))


def sencode(seq: DnaSequence | str) -> tuple[SegmentReport, Statevector]:
    """
    Segment the sequence, rank segments by entropy normalized to the largest
    segment entropy (all zero when that maximum is zero; ties keep position
    order), and map the segment of rank ``r`` to ``H^{k'} |r>``. The encoded
    state is the product of these registers, rank 0 first.
    """
    seq = parse_sequence(seq)
    k, m, width = segment_layout(len(seq))
    check_cap(m * width)
    segments = []
    for i in range(m):
        chunk = seq.bases[i * k:(i + 1) * k]
        dist = base_distribution(chunk)
        segments.append(Segment(chunk, dist, shannon_entropy(dist)))
    h_max = max(s.entropy for s in segments)
    for s in segments:
        s.normalized_entropy = s.entropy / h_max if h_max > 0 else 0.0
    order = sorted(range(m), key=lambda i: (segments[i].normalized_entropy, i))
    for rank, i in enumerate(order):
        segments[i].rank = rank

    registers = []
    for rank in range(m):
        reg = basis_state(width, rank)
        for q in range(width):
            reg = apply_gate(reg, H, [q])
        registers.append(reg)
    report = SegmentReport(k, m, width, shannon_entropy(base_distribution(seq)), segments)
    return report, tensor_all(registers)


# -- NZ22 / NZ23 -------------------------------------------------------------

@dataclass(frozen=True)
class EncodeBudget:
    divergence: float
    alpha: float
    n_qubits: int

    def to_dict(self) -> dict:
        return {"divergence": self.divergence, "alpha": self.alpha, "n_qubits": self.n_qubits}


def qubit_budget(divergence: float, alpha: float) -> EncodeBudget:
    """``n = max(1, round(alpha * ceil(D)))`` with halves rounded up."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [0, 1], got {alpha}")
    scaled = alpha * int(np.ceil(divergence))
    return EncodeBudget(float(divergence), alpha, max(1, int(np.floor(scaled + 0.5))))


def _paired(seq, ref):
    seq, ref = parse_sequence(seq), parse_sequence(ref)
    if len(seq) != len(ref):
        raise ValidationError(
            f"sequence and reference differ in length ({len(seq)} vs {len(ref)})")
    return seq, ref


def _chunk_fractions(bits: str, n: int) -> list[float]:
    # n chunks of len // n bits, the last absorbing the remainder; an empty
    # chunk (n > len) has mismatch fraction 0
    size = len(bits) // n
    fractions = []
    for j in range(n):
        chunk = bits[j * size:] if j == n - 1 else bits[j * size:(j + 1) * size]
        fractions.append(chunk.count("1") / len(chunk) if chunk else 0.0)
    return fractions


def nz22(seq: DnaSequence | str, ref: DnaSequence | str, alpha: float = 1.0,
         smoothing: float | bool | None = None) -> tuple[EncodeBudget, Statevector]:
    """
    KL-budgeted mismatch encoding.

    Qubit ``j`` is ``RY(2 arcsin sqrt(f_j)) |0>`` where ``f_j`` is the
    mismatch fraction of the j-th chunk of the position-wise match string
    (match 0, mismatch 1).
    """
    seq, ref = _paired(seq, ref)
    d = kl_divergence(base_distribution(seq), base_distribution(ref), smoothing=smoothing)
    budget = qubit_budget(d, alpha)
    check_cap(budget.n_qubits)
    fractions = _chunk_fractions(mismatch_string(seq, ref), budget.n_qubits)
    state = zero_state(budget.n_qubits)
    for q, f in enumerate(fractions):
        if f:
            state = apply_gate(state, rotation_gate("Y", 2 * np.arcsin(np.sqrt(f))), [q])
    return budget, state


def nz23(seq: DnaSequence | str, ref: DnaSequence | str,
         alpha: float = 1.0) -> tuple[EncodeBudget, Statevector]:
    """
    Bhattacharyya-budgeted amplitude encoding.

    With one qubit: ``sqrt(1 - P(b*)) |0> + sqrt(P(b*)) |1>`` where ``b*`` is
    the first base of ``seq``. With more: ``sqrt(P)`` over |A>, |C>, |G>, |T>,
    zero-padded to ``2**n`` amplitudes.
    """
    seq, ref = _paired(seq, ref)
    p = base_distribution(seq)
    d = bhattacharyya(p, base_distribution(ref))
    budget = qubit_budget(d, alpha)
    n = budget.n_qubits
    check_cap(n)
    if n == 1:
        pb = p[seq[0]]
        vec = [np.sqrt(1 - pb), np.sqrt(pb)]
    else:
        vec = np.zeros(2 ** n)
        vec[:4] = np.sqrt(p.p)
    return budget, amplitude_encode(vec)


# -- QuantIG -----------------------------------------------------------------

METRICS = ("fisher-rao", "hellinger", "tv")


def metric_diagonal(p, q, metric: str = "fisher-rao") -> np.ndarray:
    """Diagonal ``g(x, x)`` in A, C, G, T order."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    if metric == "fisher-rao":
        return 1.0 / (p * q)
    if metric == "hellinger":
        return (np.sqrt(p) - np.sqrt(q)) ** 2
    if metric == "tv":
        return np.abs(p - q)
    raise ValidationError(f"unknown metric {metric!r}; choose from {', '.join(METRICS)}")


def quantig(seq: DnaSequence | str, ref: DnaSequence | str, metric: str = "fisher-rao",
            smoothing: float | bool | None = None) -> Statevector:
    """
    ``normalize(L^{-1/2} G L^{-1/2} H^{(x)2} |00>)`` on the basis |A>, |C>, |G>, |T>
    with ``L = diag(sqrt p)`` and ``G = diag(g)``.

    The uniform superposition is used as input because applying these
    diagonal operators to |00> alone would ignore the data.
    """
    if metric not in METRICS:
        raise ValidationError(f"unknown metric {metric!r}; choose from {', '.join(METRICS)}")
    seq, ref = _paired(seq, ref)
    p, q = base_distribution(seq).p, base_distribution(ref).p
    if smoothing not in (None, False):
        eps = DEFAULT_SMOOTHING if smoothing is True else float(smoothing)
        p, q = smooth(p, eps), smooth(q, eps)
    if np.any(p == 0) or np.any(q == 0):
        zero = [b for b, a, c in zip(BASES, p, q) if a == 0 or c == 0]
        raise ValidationError(
            f"QuantIG needs every base present in both sequences (missing: "
            f"{', '.join(zero)}); enable smoothing")
    g = metric_diagonal(p, q, metric)
    vec = g * p ** -0.25 * p ** -0.25 * 0.5
    if not np.any(vec > 0):
        raise DegenerateEncodingError(
            f"{metric} metric vanishes on every base; the encoding is the zero vector")
    return amplitude_encode(vec)
