"""
Compression-inspired encoders.

``quanthuff`` builds a Huffman-style tree by pairing rank-ordered leaves
left to right and cascading the pair sums upward; ``classic_huffman`` is the
textbook greedy merge, kept as an optimality reference. ``qbwt_encode`` runs
a Burrows-Wheeler transform and rotates one qubit per transformed base.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import count as _counter
from typing import Iterator

import numpy as np

from .errors import CapExceededError, ValidationError
from .qsim import (Statevector, apply_gate, basis_state, check_cap,
                   max_qubits, rotation_gate, sample_counts, with_global_phase,
                   zero_state)
from .seqio import BASES, DnaSequence, parse_sequence

__all__ = [
    "HuffmanNode", "HuffmanCodebook", "rank_order", "quanthuff",
    "quanthuff_codebook", "classic_huffman", "SENTINEL", "BwtResult", "bwt",
    "ibwt", "QbwtPlan", "qbwt_plan", "qbwt_encode",
]

SENTINEL = "$"


@dataclass
class HuffmanNode:
    weight: int
    base: str | None = None
    left: "HuffmanNode | None" = None
    right: "HuffmanNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.base is not None

    def leaves(self) -> Iterator["HuffmanNode"]:
        if self.is_leaf:
            yield self
            return
        for child in (self.left, self.right):
            if child is not None:
                yield from child.leaves()


@dataclass
class HuffmanCodebook:
    """Prefix-free base codes with their counts and total encoded length."""

    code: dict[str, str]
    counts: dict[str, int]
    tree: HuffmanNode
    total_bits: int = field(init=False)

    def __post_init__(self):
        self.total_bits = sum(self.counts[b] * len(self.code[b]) for b in self.code)

    def bits(self, base: str) -> int:
        return self.counts[base] * len(self.code[base])

    def encode(self, seq: DnaSequence | str) -> str:
        return "".join(self.code[b] for b in parse_sequence(seq))

    def rows(self) -> list[dict]:
        """One dict per coded base, in A, C, G, T order."""
        return [{"base": b, "count": self.counts[b], "code": self.code[b],
                 "bits": self.bits(b)} for b in BASES if b in self.code]

    def to_dict(self) -> dict:
        return {"codebook": self.rows(), "total_bits": self.total_bits}


def _assign_codes(node: HuffmanNode, prefix: str, out: dict[str, str]) -> None:
    if node.is_leaf:
        out[node.base] = prefix
        return
    # left edge 0, right edge 1
    if node.left is not None:
        _assign_codes(node.left, prefix + "0", out)
    if node.right is not None:
        _assign_codes(node.right, prefix + "1", out)


def _present_counts(seq: DnaSequence) -> dict[str, int]:
    return {b: c for b, c in seq.counts().items() if c}


def rank_order(counts: dict[str, int]) -> list[str]:
    """Bases by ascending count, ties alphabetical."""
    return sorted(counts, key=lambda b: (counts[b], b))


def _single_symbol_tree(base: str, weight: int) -> HuffmanNode:
    return HuffmanNode(weight, left=HuffmanNode(weight, base))


def quanthuff_codebook(seq: DnaSequence | str) -> HuffmanCodebook:
    """
    Cascade tree: leaves ranked low to high, adjacent pairs summed from the
    left, repeated level by level until one apex remains. An unpaired node at
    the right end of a level is carried up unchanged. A lone symbol gets
    code ``"0"``.
    """
    seq = parse_sequence(seq)
    counts = _present_counts(seq)
    ranked = rank_order(counts)
    if len(ranked) == 1:
        tree = _single_symbol_tree(ranked[0], counts[ranked[0]])
    else:
        level = [HuffmanNode(counts[b], b) for b in ranked]
        while len(level) > 1:
            nxt = [HuffmanNode(l.weight + r.weight, left=l, right=r)
                   for l, r in zip(level[0::2], level[1::2])]
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        tree = level[0]
    code: dict[str, str] = {}
    _assign_codes(tree, "", code)
    return HuffmanCodebook(code, counts, tree)


def quanthuff(seq: DnaSequence | str) -> tuple[HuffmanCodebook, Statevector | None]:
    """
    Encode a sequence with the cascade-tree code.

    The state is the product over sequence positions of the basis qubits
    spelling each base's code, i.e. the basis state whose index is the
    concatenated bit string on ``total_bits`` qubits. Above the qubit cap only
    the codebook is returned (state ``None``).
    """
    seq = parse_sequence(seq)
    book = quanthuff_codebook(seq)
    if book.total_bits > max_qubits():
        return book, None
    return book, basis_state(book.total_bits, int(book.encode(seq), 2))


def classic_huffman(seq: DnaSequence | str) -> HuffmanCodebook:
    """
    Greedy Huffman merge of the two lightest nodes. Ties go to the node whose
    alphabetically least leaf comes first; the first popped node is the left
    child.
    """
    seq = parse_sequence(seq)
    counts = _present_counts(seq)
    ranked = rank_order(counts)
    if len(ranked) == 1:
        tree = _single_symbol_tree(ranked[0], counts[ranked[0]])
    else:
        tick = _counter()
        heap = [(counts[b], b, next(tick), HuffmanNode(counts[b], b)) for b in ranked]
        heapq.heapify(heap)
        while len(heap) > 1:
            w1, k1, _, n1 = heapq.heappop(heap)
            w2, k2, _, n2 = heapq.heappop(heap)
            heapq.heappush(heap, (w1 + w2, min(k1, k2), next(tick),
                                  HuffmanNode(w1 + w2, left=n1, right=n2)))
        tree = heap[0][3]
    code: dict[str, str] = {}
    _assign_codes(tree, "", code)
    return HuffmanCodebook(code, counts, tree)


# -- Burrows-Wheeler ---------------------------------------------------------

@dataclass(frozen=True)
class BwtResult:
    """Last column of the sorted rotation matrix of ``seq + '$'`` and the row
    holding the original string."""

    transformed: str
    primary_index: int

    def to_dict(self) -> dict:
        return {"transformed": self.transformed, "primary_index": self.primary_index}


def bwt(seq: DnaSequence | str) -> BwtResult:
    """
    Burrows-Wheeler transform with a ``'$'`` sentinel that sorts before
    A < C < G < T. Rotations of ``s$`` are ordered like the suffixes of ``s$``
    because the sentinel is unique.
    """
    text = parse_sequence(seq).bases + SENTINEL
    order = sorted(range(len(text)), key=lambda i: text[i:])
    last = "".join(text[i - 1] for i in order)
    return BwtResult(last, order.index(0))


def ibwt(result: BwtResult | str) -> DnaSequence:
    """Invert :func:`bwt` by last-to-first mapping."""
    if isinstance(result, BwtResult):
        last, primary = result.transformed, result.primary_index
    else:
        last, primary = str(result), None
    if last.count(SENTINEL) != 1:
        raise ValidationError(
            f"BWT string must contain exactly one {SENTINEL!r}, found {last.count(SENTINEL)}")
    bad = set(last) - set(BASES + SENTINEL)
    if bad:
        raise ValidationError(f"invalid BWT symbol(s): {''.join(sorted(bad))}")
    if primary is not None and last[primary] != SENTINEL:
        raise ValidationError(
            f"primary index {primary} does not hold the sentinel")
    if len(last) < 2:
        raise ValidationError("BWT of an empty sequence")
    # stable sort of the last column gives the first column; lf[i] is the row
    # whose first char is last[i] (same occurrence rank)
    first_rows = sorted(range(len(last)), key=lambda i: (last[i] != SENTINEL, last[i]))
    lf = [0] * len(last)
    for row, i in enumerate(first_rows):
        lf[i] = row
    out = []
    row = 0  # row 0 starts with the sentinel, so its last char ends the text
    for _ in range(len(last) - 1):
        out.append(last[row])
        row = lf[row]
    return DnaSequence("".join(reversed(out)))


# -- QBWT --------------------------------------------------------------------

@dataclass(frozen=True)
class QbwtPlan:
    """Classical half of QBWT: the transform and per-qubit rotation angles."""

    bwt: BwtResult
    bases: str
    angles: tuple[float, ...]
    global_phase: float

    @property
    def n_qubits(self) -> int:
        return len(self.bases)

    def zero_probability(self) -> float:
        """Analytic probability of measuring all zeros, ``prod cos^2(theta/2)``."""
        return float(np.prod(np.cos(np.asarray(self.angles) / 2) ** 2))


def qbwt_plan(seq: DnaSequence | str) -> QbwtPlan:
    """
    Qubit ``i`` gets ``RY(2 pi count(b_i) / n)`` where ``b_i`` is the i-th
    transformed base (sentinel dropped) and ``n = len(seq)``. The per-base
    scalars ``exp(2 pi i count(b) / n)`` multiply to one global phase.
    """
    seq = parse_sequence(seq)
    res = bwt(seq)
    bases = res.transformed.replace(SENTINEL, "")
    n = len(bases)
    counts = {b: bases.count(b) for b in BASES}
    fractions = [counts[b] / n for b in bases]
    angles = tuple(2 * np.pi * f for f in fractions)
    phase = float(np.mod(2 * np.pi * sum(fractions), 2 * np.pi))
    return QbwtPlan(res, bases, angles, phase)


def qbwt_state(plan: QbwtPlan, include_phase: bool = True) -> Statevector:
    check_cap(plan.n_qubits)
    state = zero_state(plan.n_qubits)
    for q, theta in enumerate(plan.angles):
        state = apply_gate(state, rotation_gate("Y", theta), [q])
    if include_phase:
        state = with_global_phase(state, plan.global_phase)
    return state


def qbwt_encode(seq: DnaSequence | str, shots: int = 1024, seed: int | None = 0,
                include_phase: bool = True) -> tuple[Statevector, dict[str, int]]:
    """Prepare the QBWT state and sample ``shots`` measurements from it."""
    plan = qbwt_plan(seq)
    if plan.n_qubits > max_qubits():
        raise CapExceededError(
            f"QBWT needs {plan.n_qubits} qubits, cap is {max_qubits()}")
    state = qbwt_state(plan, include_phase=include_phase)
    return state, sample_counts(state, shots, seed)
