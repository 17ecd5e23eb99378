"""
Energy-based test harness for encoded sequences.

Sequences are two-bit encoded, cut into equal segments, and each segment's
bits are read as a spin configuration. A layered open-chain pairwise model
is fit by exact-gradient mini-batch descent on the negative log-likelihood,
with the partition function computed by full enumeration.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import GenoqError, ValidationError
from .seqio import DnaSequence, parse_sequence, sequence_bits

__all__ = [
    "MAX_SPINS", "bin_encode_seq", "segment_bits", "EnergyModel", "all_configs",
    "energy", "energies", "log_partition", "partition", "nll_cost", "gradient",
    "TrainConfig", "TrainResult", "sequences_to_samples", "train",
    "TrainingDivergedError",
]

MAX_SPINS = 20


class TrainingDivergedError(GenoqError):
    """The cost became non-finite during training."""


def bin_encode_seq(seq: DnaSequence | str) -> str:
    """Two-bit code per base: A 00, C 01, G 10, T 11."""
    return sequence_bits(parse_sequence(seq), "two-bit")


def segment_bits(bits: str, k: int) -> tuple[list[str], int]:
    """
    Cut ``bits`` into ``k`` equal segments.

    If ``k`` divides the length the segments cover it exactly. Otherwise each
    segment has ``(len - 1) // k`` bits and the trailing remainder is reported
    as not sequenced.

    Returns
    -------
    segments, leftover
    """
    k = int(k)
    if k < 1:
        raise ValidationError(f"segment count must be >= 1, got {k}")
    length = len(bits)
    size = length // k if length % k == 0 else (length - 1) // k
    if size < 1:
        raise ValidationError(f"{length} bits cannot fill {k} non-empty segments")
    return [bits[i * size:(i + 1) * size] for i in range(k)], length - k * size


@dataclass
class EnergyModel:
    """
    ``E(s) = sum_L sum_i (w0 + w1 + w2)[L, i] s_i s_{i+1} - sum_i B_i s_i``
    over an open chain of ``n`` spins in {0, 1}.

    The three coupling arrays only enter through their sum; they are kept
    separate to mirror the layered parameterization.
    """

    w0: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    biases: np.ndarray

    def __post_init__(self):
        self.biases = np.array(self.biases, dtype=float).reshape(-1)
        n = self.biases.size
        if n < 1:
            raise ValidationError("energy model needs at least one spin")
        shapes = []
        for name in ("w0", "w1", "w2"):
            w = np.array(getattr(self, name), dtype=float)
            if w.ndim == 1:
                w = w.reshape(1, -1) if w.size else np.zeros((1, 0))
            if w.ndim != 2 or w.shape[1] != n - 1:
                raise ValidationError(
                    f"{name} must have shape (layers, {n - 1}), got {w.shape}")
            setattr(self, name, w)
            shapes.append(w.shape)
        if len(set(shapes)) != 1:
            raise ValidationError(f"coupling arrays disagree in shape: {shapes}")
        for arr in (self.w0, self.w1, self.w2, self.biases):
            if not np.all(np.isfinite(arr)):
                raise ValidationError("energy model parameters must be finite")

    @classmethod
    def zeros(cls, n: int, layers: int = 1) -> "EnergyModel":
        z = np.zeros((layers, n - 1))
        return cls(z, z.copy(), z.copy(), np.zeros(n))

    @classmethod
    def random(cls, n: int, layers: int, rng: np.random.Generator,
               scale: float = 0.01) -> "EnergyModel":
        """Couplings uniform in ``(-scale, scale)``, biases zero."""
        w = [rng.uniform(-scale, scale, size=(layers, n - 1)) for _ in range(3)]
        return cls(*w, np.zeros(n))

    @property
    def n(self) -> int:
        return self.biases.size

    @property
    def layers(self) -> int:
        return self.w0.shape[0]

    def coupling(self) -> np.ndarray:
        """Effective per-layer coupling ``W[L, i] = w0 + w1 + w2``."""
        return self.w0 + self.w1 + self.w2

    def chain_coupling(self) -> np.ndarray:
        """Coupling of bond ``(i, i+1)`` summed over layers."""
        return self.coupling().sum(axis=0)

    def copy(self) -> "EnergyModel":
        return EnergyModel(self.w0.copy(), self.w1.copy(), self.w2.copy(), self.biases.copy())

    def params(self) -> list[np.ndarray]:
        return [self.w0, self.w1, self.w2, self.biases]

    def to_dict(self) -> dict:
        return {"n": self.n, "layers": self.layers,
                "w0": self.w0.tolist(), "w1": self.w1.tolist(),
                "w2": self.w2.tolist(), "B": self.biases.tolist()}

    @classmethod
    def from_dict(cls, doc: dict) -> "EnergyModel":
        return cls(doc["w0"], doc["w1"], doc["w2"], doc["B"])


def _as_spins(samples, n: int) -> np.ndarray:
    arr = np.array([[int(c) for c in s] if isinstance(s, str) else s for s in samples],
                   dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.shape[1] != n:
        raise ValidationError(f"spin samples have length {arr.shape[1]}, model has {n} spins")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValidationError("spins must be 0 or 1")
    return arr


def all_configs(n: int) -> np.ndarray:
    """Every spin configuration, row ``z`` spelling ``z`` in binary (big-endian)."""
    if n > MAX_SPINS:
        raise ValidationError(
            f"exhaustive enumeration limited to {MAX_SPINS} spins, got {n}")
    idx = np.arange(2 ** n)
    return ((idx[:, None] >> (n - 1 - np.arange(n))) & 1).astype(float)


def energies(spins: np.ndarray, model: EnergyModel) -> np.ndarray:
    spins = np.asarray(spins, dtype=float)
    pair = spins[:, :-1] * spins[:, 1:]
    return pair @ model.chain_coupling() - spins @ model.biases


def energy(sample, model: EnergyModel) -> float:
    """Energy of one spin configuration (sequence of 0/1 or a bit string)."""
    return float(energies(_as_spins([sample], model.n), model)[0])


def log_partition(model: EnergyModel) -> float:
    return float(logsumexp(-energies(all_configs(model.n), model)))


def partition(model: EnergyModel) -> float:
    """``Z = sum over all 2**n configurations of exp(-E)``."""
    return math.exp(log_partition(model))


def _data(samples, model) -> np.ndarray:
    spins = _as_spins(list(samples), model.n) if len(samples) else np.zeros((0, model.n))
    if spins.shape[0] == 0:
        raise ValidationError("cost needs at least one sample")
    return spins


def nll_cost(samples, model: EnergyModel) -> float:
    """Mean energy of the samples plus ``ln Z``."""
    spins = _data(samples, model)
    return float(np.mean(energies(spins, model)) + log_partition(model))


def gradient(samples, model: EnergyModel) -> EnergyModel:
    """
    Exact gradient of :func:`nll_cost`, returned in the model's own shape.

    ``dJ/dW[L, i] = <s_i s_{i+1}>_data - <s_i s_{i+1}>_model`` (identical for
    w0, w1, w2 and every layer) and ``dJ/dB_i = <s_i>_model - <s_i>_data``.
    """
    spins = _data(samples, model)
    configs = all_configs(model.n)
    logw = -energies(configs, model)
    prob = np.exp(logw - logsumexp(logw))
    pair_model = prob @ (configs[:, :-1] * configs[:, 1:])
    spin_model = prob @ configs
    pair_data = np.mean(spins[:, :-1] * spins[:, 1:], axis=0)
    spin_data = np.mean(spins, axis=0)
    dw = np.broadcast_to(pair_data - pair_model, model.w0.shape).copy()
    return EnergyModel(dw, dw.copy(), dw.copy(), spin_model - spin_data)


@dataclass(frozen=True)
class TrainConfig:
    steps: int = 100
    learning_rate: float = 0.01
    layers: int = 2
    segments: int = 2
    batch_size: int = 16
    split: float = 0.8
    seed: int = 0
    init_scale: float = 0.01
    early_stop_tol: float = 1e-9
    early_stop_window: int = 10

    def __post_init__(self):
        if self.steps < 1 or self.layers < 1 or self.segments < 1 or self.batch_size < 1:
            raise ValidationError("steps, layers, segments and batch size must be positive")
        if not 0 < self.learning_rate <= 1:
            raise ValidationError(f"learning rate must lie in (0, 1], got {self.learning_rate}")
        if not 0 < self.split < 1:
            raise ValidationError(f"split fraction must lie in (0, 1), got {self.split}")


@dataclass
class TrainResult:
    model: EnergyModel
    initial_cost: float
    train_trace: list[tuple[int, float]] = field(default_factory=list)
    val_trace: list[tuple[int, float]] = field(default_factory=list)
    stopped_early: bool = False

    @property
    def final_cost(self) -> float:
        return self.train_trace[-1][1] if self.train_trace else self.initial_cost

    def trace_csv(self) -> str:
        """``step,train_J,val_J`` rows; ``val_J`` is blank between epochs."""
        val = dict(self.val_trace)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "train_J", "val_J"])
        w.writerow([0, repr(self.initial_cost), repr(val[0]) if 0 in val else ""])
        for step, j in self.train_trace:
            w.writerow([step, repr(j), repr(val[step]) if step in val else ""])
        return buf.getvalue()

    def model_json(self) -> str:
        return json.dumps(self.model.to_dict(), indent=2) + "\n"


def sequences_to_samples(sequences: Sequence[DnaSequence | str], segments: int) -> np.ndarray:
    """Spin samples from every segment of every two-bit encoded sequence."""
    rows = []
    width = None
    for seq in sequences:
        segs, _ = segment_bits(bin_encode_seq(seq), segments)
        for s in segs:
            if width is None:
                width = len(s)
            elif len(s) != width:
                raise ValidationError(
                    f"segments of unequal length ({len(s)} vs {width}); "
                    "use sequences of equal length")
            rows.append([int(c) for c in s])
    if not rows:
        raise ValidationError("no sequences to train on")
    return np.array(rows, dtype=float)


def train(sequences: Sequence[DnaSequence | str], config: TrainConfig = TrainConfig()) -> TrainResult:
    """
    Fit an :class:`EnergyModel` by mini-batch gradient descent.

    Encoded samples are shuffled with ``config.seed`` and split into training
    and validation parts. Every step draws a mini-batch (without replacement)
    and applies ``theta <- theta - lr * grad``. The full-training-set cost is
    recorded after each step; the validation cost after each epoch. Training
    stops after ``config.steps`` steps or once the cost has moved by less
    than ``early_stop_tol`` for ``early_stop_window`` consecutive steps.
    """
    samples = sequences_to_samples(sequences, config.segments)
    n = samples.shape[1]
    if n > MAX_SPINS:
        raise ValidationError(f"segments of {n} bits exceed the {MAX_SPINS}-spin enumeration limit")
    if n < 2:
        raise ValidationError("segments need at least two bits for pair couplings")
    rng = np.random.default_rng(config.seed)
    order = rng.permutation(len(samples))
    if len(samples) == 1:
        # nothing to hold out; validate on the training sample itself
        train_set = val_set = samples
    else:
        n_train = min(max(int(round(config.split * len(samples))), 1), len(samples) - 1)
        train_set, val_set = samples[order[:n_train]], samples[order[n_train:]]
    model = EnergyModel.random(n, config.layers, rng, config.init_scale)

    result = TrainResult(model, nll_cost(train_set, model))
    result.val_trace.append((0, nll_cost(val_set, model)))
    batch = min(config.batch_size, len(train_set))
    per_epoch = -(-len(train_set) // batch)
    prev, quiet = result.initial_cost, 0
    for step in range(1, config.steps + 1):
        picks = rng.choice(len(train_set), size=batch, replace=False)
        grad = gradient(train_set[picks], model)
        for p, g in zip(model.params(), grad.params()):
            p -= config.learning_rate * g
        cost = nll_cost(train_set, model)
        if not np.isfinite(cost):
            raise TrainingDivergedError(
                f"training cost became {cost} at step {step}; lower the learning rate")
        result.train_trace.append((step, cost))
        if step % per_epoch == 0:
            result.val_trace.append((step, nll_cost(val_set, model)))
        quiet = quiet + 1 if abs(prev - cost) < config.early_stop_tol else 0
        prev = cost
        if quiet >= config.early_stop_window:
            result.stopped_early = True
            break
    result.model = model
    return result
