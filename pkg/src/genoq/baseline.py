"""
Reference encoders: amplitude encoding by a cascade of uniformly controlled
Y rotations, the second-order Pauli (ZZ) feature map, and per-base angle
embedding.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .infomath import base_distribution
from .qsim import (CNOT, H, Statevector, apply_gate, apply_multiplexed_ry,
                   check_cap, rotation_gate, zero_state)
from .seqio import DnaSequence, base_bits, parse_sequence

__all__ = [
    "pad_and_normalize", "amplitude_angles", "amplitude_encode",
    "amplitude_encode_sequence", "FeatureMapConfig", "pair_phase",
    "pauli_feature_map", "pauli_phase_diagonal", "pauli_encode_sequence",
    "sequence_feature_angles", "angle_embed",
]


def pad_and_normalize(vec) -> np.ndarray:
    """Zero-pad a real vector to the next power of two (at least 2) and scale
    it to unit Euclidean norm."""
    v = np.asarray(vec, dtype=float).reshape(-1)
    if v.size == 0:
        raise ValidationError("cannot encode an empty vector")
    if not np.all(np.isfinite(v)):
        raise ValidationError("feature vector has non-finite entries")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValidationError("cannot amplitude-encode the zero vector")
    dim = max(2, 1 << (v.size - 1).bit_length())
    out = np.zeros(dim)
    out[:v.size] = v / norm
    return out


def amplitude_angles(vec) -> list[np.ndarray]:
    """
    RY angles for each qubit of the state-preparation cascade.

    Entry ``s`` holds ``2**s`` angles for qubit ``s``, one per value of the
    preceding qubits. Upper levels split subtree norms; the last level uses
    the signed leaf pair so ``atan2`` covers negative amplitudes.
    """
    v = pad_and_normalize(vec)
    n = v.size.bit_length() - 1
    levels = []
    for s in range(n):
        blocks = v.reshape(2 ** s, 2, -1)
        if s == n - 1:
            a, b = blocks[:, 0, 0], blocks[:, 1, 0]
        else:
            a = np.linalg.norm(blocks[:, 0, :], axis=1)
            b = np.linalg.norm(blocks[:, 1, :], axis=1)
        levels.append(2 * np.arctan2(b, a))
    return levels


def amplitude_encode(vec) -> Statevector:
    """
    Load a real vector as state amplitudes.

    The vector is padded and normalized, then |0...0> is driven through one
    uniformly controlled RY per qubit.

    Examples
    --------
    >>> amplitude_encode([3, 4]).amplitudes.real.round(12)
    array([0.6, 0.8])
    """
    levels = amplitude_angles(vec)
    check_cap(len(levels))
    state = zero_state(len(levels))
    for target, angles in enumerate(levels):
        state = apply_multiplexed_ry(state, angles, target)
    return state


def amplitude_encode_sequence(seq: DnaSequence | str) -> Statevector:
    """Encode the square roots of the base frequencies on two qubits, so that
    |A>, |C>, |G>, |T> are measured with the sequence's base frequencies."""
    p = base_distribution(seq).p
    return amplitude_encode(np.sqrt(p))


@dataclass(frozen=True)
class FeatureMapConfig:
    """
    Parameters of the Pauli feature map.

    ``x`` holds one angle per qubit; ``k`` is the largest interaction order
    (1 = Z terms only, 2 = Z and ZZ terms); ``reps`` repeats the
    Hadamard + diagonal block.
    """

    x: tuple[float, ...]
    k: int = 2
    reps: int = 2

    def __post_init__(self):
        x = tuple(float(v) for v in np.asarray(self.x, dtype=float).reshape(-1))
        if not x:
            raise ValidationError("feature map needs at least one qubit")
        if not all(np.isfinite(x)):
            raise ValidationError("feature map angles must be finite")
        if self.k not in (1, 2):
            raise ValidationError(f"k must be 1 or 2, got {self.k}")
        if int(self.reps) < 1:
            raise ValidationError(f"reps must be >= 1, got {self.reps}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "reps", int(self.reps))

    @property
    def n_qubits(self) -> int:
        return len(self.x)


def pair_phase(xi: float, xj: float) -> float:
    return (np.pi - xi) * (np.pi - xj)


def pauli_phase_diagonal(config: FeatureMapConfig) -> np.ndarray:
    """Phases ``theta(z)`` with ``U_phi |z> = exp(i theta(z)) |z>``."""
    n = config.n_qubits
    idx = np.arange(2 ** n)
    # Z eigenvalue of qubit q on basis index z: +1 for bit 0, -1 for bit 1
    spins = 1 - 2 * ((idx[:, None] >> (n - 1 - np.arange(n))) & 1)
    theta = spins @ np.asarray(config.x)
    if config.k == 2:
        for i, j in combinations(range(n), 2):
            theta = theta + pair_phase(config.x[i], config.x[j]) * spins[:, i] * spins[:, j]
    return theta


def pauli_feature_map(config: FeatureMapConfig) -> Statevector:
    """
    Prepare ``(U_phi H^n)^reps |0...0>`` with
    ``U_phi = exp(i sum_S phi_S prod_{i in S} Z_i)``,
    ``phi_{i} = x_i`` and ``phi_{ij} = (pi - x_i)(pi - x_j)``.

    Built gate by gate: ``exp(i a Z) = RZ(-2a)``, and the ZZ term is an RZ
    sandwiched between two CNOTs.
    """
    n = config.n_qubits
    check_cap(n)
    state = zero_state(n)
    for _ in range(config.reps):
        for q in range(n):
            state = apply_gate(state, H, [q])
        for q in range(n):
            state = apply_gate(state, rotation_gate("Z", -2 * config.x[q]), [q])
        if config.k == 2:
            for i, j in combinations(range(n), 2):
                phi = pair_phase(config.x[i], config.x[j])
                state = apply_gate(state, CNOT, [i, j])
                state = apply_gate(state, rotation_gate("Z", -2 * phi), [j])
                state = apply_gate(state, CNOT, [i, j])
    return state


def sequence_feature_angles(seq: DnaSequence | str) -> tuple[float, ...]:
    """One angle per base: two-bit value of the base times pi/2."""
    seq = parse_sequence(seq)
    return tuple(int(base_bits(b, "two-bit"), 2) * np.pi / 2 for b in seq)


def pauli_encode_sequence(seq: DnaSequence | str, k: int = 2, reps: int = 2) -> Statevector:
    return pauli_feature_map(FeatureMapConfig(sequence_feature_angles(seq), k=k, reps=reps))


def angle_embed(seq: DnaSequence | str, entangle: bool = False) -> Statevector:
    """
    One qubit per base, rotated by ``RY(m(b) * pi)`` with the high-bit map
    (A, C -> 0; G, T -> 1). With ``entangle`` a CNOT chain ``(i, i+1)`` follows.

    >>> int(abs(angle_embed("ATG").amplitudes).argmax())
    3
    """
    seq = parse_sequence(seq)
    n = len(seq)
    check_cap(n)
    state = zero_state(n)
    for q, b in enumerate(seq):
        bit = int(base_bits(b, "high-bit"))
        if bit:
            state = apply_gate(state, rotation_gate("Y", bit * np.pi), [q])
    if entangle:
        for q in range(n - 1):
            state = apply_gate(state, CNOT, [q, q + 1])
    return state
