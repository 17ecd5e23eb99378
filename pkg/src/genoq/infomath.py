"""
Entropy, divergences and distances between base distributions.

Distributions are four-vectors indexed A, C, G, T. Entropy and Jensen-Shannon
use log base 2; KL and Bhattacharyya use the natural log.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import InfiniteDivergenceError, ValidationError
from .seqio import BASES, DnaSequence, parse_sequence

__all__ = [
    "ProbDist4", "as_dist", "base_distribution", "shannon_entropy",
    "kl_divergence", "js_divergence", "bhattacharyya", "hellinger",
    "tv_wasserstein", "fisher_rao_diag", "hamming", "smooth",
    "DEFAULT_SMOOTHING",
]

SIMPLEX_ATOL = 1e-12
DEFAULT_SMOOTHING = 1e-9


class ProbDist4:
    """Probability distribution over the bases A, C, G, T (in that order)."""

    __slots__ = ("_p",)

    def __init__(self, p):
        arr = np.array(p, dtype=float).reshape(-1)
        if arr.shape != (4,):
            raise ValidationError(f"need 4 probabilities, got {arr.size}")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
            raise ValidationError(f"probabilities must lie in [0, 1]: {arr}")
        if abs(arr.sum() - 1.0) > SIMPLEX_ATOL:
            raise ValidationError(f"probabilities sum to {arr.sum()!r}, not 1")
        arr.flags.writeable = False
        self._p = arr

    @classmethod
    def from_mapping(cls, mapping) -> "ProbDist4":
        return cls([mapping.get(b, 0.0) for b in BASES])

    @property
    def p(self) -> np.ndarray:
        return self._p

    def __getitem__(self, base: str) -> float:
        return float(self._p[BASES.index(base)])

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._p, dtype=dtype)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProbDist4) and bool(np.array_equal(self._p, other._p))

    def __repr__(self) -> str:
        inner = ", ".join(f"{b}={v:.6g}" for b, v in zip(BASES, self._p))
        return f"ProbDist4({inner})"

    def as_dict(self) -> dict[str, float]:
        return {b: float(v) for b, v in zip(BASES, self._p)}


def as_dist(p) -> np.ndarray:
    if isinstance(p, ProbDist4):
        return p.p
    return ProbDist4(p).p


def base_distribution(seq: DnaSequence | str) -> ProbDist4:
    """Relative frequency of each base, ``count(b) / N``."""
    seq = parse_sequence(seq)
    n = len(seq)
    c = seq.counts()
    return ProbDist4([c[b] / n for b in BASES])


def smooth(p, eps: float = DEFAULT_SMOOTHING) -> np.ndarray:
    """Additive smoothing ``(p + eps) / (1 + 4 eps)``."""
    eps = float(eps)
    if not eps > 0:
        raise ValidationError(f"smoothing must be positive, got {eps}")
    return (as_dist(p) + eps) / (1 + 4 * eps)


def _resolve_eps(smoothing) -> float | None:
    if smoothing is None or smoothing is False:
        return None
    if smoothing is True:
        return DEFAULT_SMOOTHING
    return float(smoothing)


def _xlogy_ratio(p: np.ndarray, q: np.ndarray, log) -> float:
    # 0 * log(0 / q) := 0
    mask = p > 0
    return float(np.sum(p[mask] * log(p[mask] / q[mask])))


def shannon_entropy(p) -> float:
    """``-sum p log2 p`` in bits, with ``0 log 0 = 0``."""
    p = as_dist(p)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz))) + 0.0


def kl_divergence(p, q, smoothing: float | bool | None = None) -> float:
    """
    Kullback-Leibler divergence ``sum p ln(p / q)`` in nats.

    Parameters
    ----------
    smoothing : float, bool or None
        If given, both distributions are smoothed with this epsilon first
        (``True`` means 1e-9). Without it, ``q(b) = 0 < p(b)`` raises
        :class:`InfiniteDivergenceError`.
    """
    p, q = as_dist(p), as_dist(q)
    eps = _resolve_eps(smoothing)
    if eps is not None:
        p, q = smooth(p, eps), smooth(q, eps)
    bad = (p > 0) & (q == 0)
    if np.any(bad):
        where = ", ".join(b for b, flag in zip(BASES, bad) if flag)
        raise InfiniteDivergenceError(
            f"KL divergence is infinite: q is zero where p is not ({where}); "
            "enable smoothing")
    return max(_xlogy_ratio(p, q, np.log), 0.0)


def js_divergence(p, q) -> float:
    """Jensen-Shannon divergence in bits, so it lies in [0, 1]."""
    p, q = as_dist(p), as_dist(q)
    m = (p + q) / 2
    val = 0.5 * (_xlogy_ratio(p, m, np.log2) + _xlogy_ratio(q, m, np.log2))
    return min(max(val, 0.0), 1.0)


def bhattacharyya(p, q) -> float:
    """``-ln sum sqrt(p q)``; raises when the supports do not overlap."""
    p, q = as_dist(p), as_dist(q)
    if np.array_equal(p, q):
        return 0.0
    bc = float(np.sum(np.sqrt(p * q)))
    if bc <= 0:
        raise InfiniteDivergenceError(
            "Bhattacharyya divergence is infinite: distributions do not overlap")
    return max(-np.log(min(bc, 1.0)), 0.0)


def hellinger(p, q) -> float:
    p, q = as_dist(p), as_dist(q)
    val = np.sqrt(0.5 * np.sum((np.sqrt(p) - np.sqrt(q)) ** 2))
    return float(min(val, 1.0))


def tv_wasserstein(p, q) -> float:
    """
    Earth mover's distance under the 0/1 ground metric between bases, which
    coincides with total variation ``0.5 * sum |p - q|``.
    """
    p, q = as_dist(p), as_dist(q)
    return float(min(0.5 * np.sum(np.abs(p - q)), 1.0))


def fisher_rao_diag(p, q) -> np.ndarray:
    """Diagonal metric coefficients ``1 / (p(b) q(b))`` in A, C, G, T order."""
    p, q = as_dist(p), as_dist(q)
    if np.any(p == 0) or np.any(q == 0):
        zero = [b for b, a, c in zip(BASES, p, q) if a == 0 or c == 0]
        raise ValidationError(
            f"Fisher-Rao coefficients need strictly positive probabilities "
            f"(zero at {', '.join(zero)}); smooth the distributions first")
    return 1.0 / (p * q)


def hamming(s: DnaSequence | str, t: DnaSequence | str) -> int:
    s, t = parse_sequence(s), parse_sequence(t)
    if len(s) != len(t):
        raise ValidationError(f"length mismatch: {len(s)} vs {len(t)}")
    return sum(a != b for a, b in zip(s, t))


def mismatch_string(s: DnaSequence | str, t: DnaSequence | str) -> str:
    """Per-position ``'0'`` for a match, ``'1'`` for a mismatch."""
    s, t = parse_sequence(s), parse_sequence(t)
    if len(s) != len(t):
        raise ValidationError(f"length mismatch: {len(s)} vs {len(t)}")
    return "".join("0" if a == b else "1" for a, b in zip(s, t))
