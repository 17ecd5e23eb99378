"""
Dense statevector simulation.

Basis index ``i`` of an ``n``-qubit register encodes the bit string
``b0 b1 ... b(n-1)`` with qubit 0 as the most significant bit (big-endian).
Every function here is pure: states are immutable values and each operation
returns a new :class:`Statevector`.
"""

from __future__ import annotations

import json
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import CapExceededError, ValidationError

__all__ = [
    "DEFAULT_MAX_QUBITS", "HARD_MAX_QUBITS", "max_qubits", "set_max_qubits",
    "qubit_cap", "check_cap", "Statevector", "Gate", "I", "H", "X", "Y", "Z",
    "S", "T", "CNOT", "CZ", "SWAP", "cphase", "rotation_gate", "basis_state",
    "zero_state", "apply_gate", "apply_multiplexed_ry", "tensor", "tensor_all",
    "apply_qft", "qft_matrix", "sample_counts", "with_global_phase",
    "bitstring", "dump_counts",
]

DEFAULT_MAX_QUBITS = 24
HARD_MAX_QUBITS = 28

NORM_ATOL = 1e-9
UNITARY_ATOL = 1e-10

_max_qubits: ContextVar[int] = ContextVar("max_qubits", default=DEFAULT_MAX_QUBITS)


def max_qubits() -> int:
    """Current qubit cap for this context."""
    return _max_qubits.get()


def set_max_qubits(n: int):
    """Set the qubit cap for the current context; returns a reset token."""
    n = int(n)
    if not 1 <= n <= HARD_MAX_QUBITS:
        raise ValidationError(
            f"max qubits must be between 1 and {HARD_MAX_QUBITS}, got {n}")
    return _max_qubits.set(n)


@contextmanager
def qubit_cap(n: int) -> Iterator[int]:
    """Temporarily change the qubit cap."""
    token = set_max_qubits(n)
    try:
        yield n
    finally:
        _max_qubits.reset(token)


def check_cap(n_qubits: int) -> None:
    cap = max_qubits()
    if n_qubits > cap:
        raise CapExceededError(
            f"{n_qubits} qubits requested, cap is {cap}")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


class Statevector:
    """
    Normalized complex amplitude vector over ``2**n_qubits`` basis states.

    Parameters
    ----------
    amplitudes : array_like
        Complex amplitudes in index order. Length must be a power of two
        (at least 2).
    atol : float
        Allowed deviation of the squared norm from 1.
    """

    __slots__ = ("_amps", "_n")

    def __init__(self, amplitudes, *, atol: float = NORM_ATOL):
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        size = amps.size
        if size < 2 or size & (size - 1):
            raise ValidationError(
                f"amplitude count must be a power of two >= 2, got {size}")
        n = size.bit_length() - 1
        check_cap(n)
        if not np.all(np.isfinite(amps)):
            raise ValidationError("amplitudes must be finite")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > atol:
            raise ValidationError(f"state is not normalized (norm^2 = {norm2!r})")
        amps.flags.writeable = False
        self._amps = amps
        self._n = n

    @property
    def n_qubits(self) -> int:
        return self._n

    @property
    def amplitudes(self) -> np.ndarray:
        """Read-only view of the amplitudes."""
        return self._amps

    def __len__(self) -> int:
        return self._amps.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._amps, dtype=dtype)

    def __repr__(self) -> str:
        return f"Statevector(n_qubits={self._n}, amplitudes={self._amps!r})"

    def probabilities(self) -> np.ndarray:
        return np.abs(self._amps) ** 2

    def allclose(self, other, atol: float = 1e-10) -> bool:
        """Amplitude-wise comparison, global phase included."""
        other = np.asarray(other, dtype=np.complex128).reshape(-1)
        return other.shape == self._amps.shape and bool(
            np.allclose(self._amps, other, rtol=0.0, atol=atol))

    def to_dict(self) -> dict:
        return {
            "n_qubits": self._n,
            "convention": "big-endian",
            "amplitudes": [[float(z.real), float(z.imag)] for z in self._amps],
        }

    def to_json(self, metadata: Mapping | None = None) -> str:
        """Serialize with 17-significant-digit floats."""
        amps = ", ".join(f"[{_fmt(z.real)}, {_fmt(z.imag)}]" for z in self._amps)
        text = (f'{{"n_qubits": {self._n}, "convention": "big-endian", '
                f'"amplitudes": [{amps}]')
        if metadata:
            text += f', "metadata": {json.dumps(metadata, sort_keys=True)}'
        return text + "}\n"

    @classmethod
    def from_dict(cls, doc: Mapping, *, atol: float = 1e-6) -> "Statevector":
        """
        Rebuild a state from its dump. States whose squared norm is within
        ``atol`` of 1 are renormalized; anything further off is rejected.
        """
        try:
            n = int(doc["n_qubits"])
            convention = doc.get("convention", "big-endian")
            pairs = doc["amplitudes"]
            amps = np.array([complex(float(re), float(im)) for re, im in pairs])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed state dump: {exc}") from None
        if convention != "big-endian":
            raise ValidationError(f"unsupported convention {convention!r}")
        if amps.size != 2 ** n:
            raise ValidationError(
                f"state dump declares {n} qubits but has {amps.size} amplitudes")
        norm2 = float(np.vdot(amps, amps).real)
        if not np.isfinite(norm2) or abs(norm2 - 1.0) > atol:
            raise ValidationError(f"state dump is not normalized (norm^2 = {norm2!r})")
        return cls(amps / np.sqrt(norm2))

    @classmethod
    def from_json(cls, text: str, *, atol: float = 1e-6) -> "Statevector":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"state dump is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ValidationError("state dump must be a JSON object")
        return cls.from_dict(doc, atol=atol)


@dataclass(frozen=True, eq=False)
class Gate:
    """A one- or two-qubit unitary."""

    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape not in ((2, 2), (4, 4)):
            raise ValidationError(f"gate matrix must be 2x2 or 4x4, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("gate matrix must be finite")
        err = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
        if err >= UNITARY_ATOL:
            raise ValidationError(f"gate is not unitary (max |UU^+ - I| = {err:.3g})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return 1 if self.matrix.shape[0] == 2 else 2


_SQ2 = 1 / np.sqrt(2)

I = Gate(np.eye(2), "I")
H = Gate([[_SQ2, _SQ2], [_SQ2, -_SQ2]], "H")
X = Gate([[0, 1], [1, 0]], "X")
Y = Gate([[0, -1j], [1j, 0]], "Y")
Z = Gate([[1, 0], [0, -1]], "Z")
S = Gate([[1, 0], [0, 1j]], "S")
T = Gate([[1, 0], [0, np.exp(1j * np.pi / 4)]], "T")
# two-qubit gates act on (first target, second target) = (control, target)
CNOT = Gate([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], "CNOT")
CZ = Gate(np.diag([1, 1, 1, -1]), "CZ")
SWAP = Gate([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], "SWAP")

_PAULI = {"X": X.matrix, "Y": Y.matrix, "Z": Z.matrix}


def cphase(phi: float) -> Gate:
    """Controlled phase: multiplies |11> by exp(i*phi)."""
    return Gate(np.diag([1, 1, 1, np.exp(1j * phi)]), f"CP({phi:.6g})")


def rotation_gate(axis: str, theta: float) -> Gate:
    """
    Single-qubit rotation ``exp(-i theta/2 P) = cos(theta/2) I - i sin(theta/2) P``
    about Pauli axis ``P`` in {X, Y, Z}.
    """
    key = str(axis).upper()
    if key not in _PAULI:
        raise ValidationError(f"rotation axis must be X, Y or Z, got {axis!r}")
    theta = float(theta)
    if not np.isfinite(theta):
        raise ValidationError(f"rotation angle must be finite, got {theta!r}")
    m = np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * _PAULI[key]
    return Gate(m, f"R{key}({theta:.6g})")


def basis_state(n_qubits: int, index: int) -> Statevector:
    n_qubits, index = int(n_qubits), int(index)
    if n_qubits < 1:
        raise ValidationError(f"need at least one qubit, got {n_qubits}")
    check_cap(n_qubits)
    if not 0 <= index < 2 ** n_qubits:
        raise ValidationError(
            f"basis index {index} out of range for {n_qubits} qubits")
    amps = np.zeros(2 ** n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return Statevector(amps)


def zero_state(n_qubits: int) -> Statevector:
    return basis_state(n_qubits, 0)


def _check_targets(n: int, targets: Sequence[int], arity: int) -> list[int]:
    targets = [int(t) for t in targets]
    if len(targets) != arity:
        raise ValidationError(f"gate of arity {arity} got {len(targets)} targets")
    if len(set(targets)) != len(targets):
        raise ValidationError(f"targets must be distinct, got {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise ValidationError(f"target qubit {t} out of range for {n} qubits")
    return targets


def apply_gate(state: Statevector, gate: Gate, targets: Sequence[int] | int) -> Statevector:
    """Apply ``gate`` to the listed target qubits (identity elsewhere)."""
    if isinstance(targets, (int, np.integer)):
        targets = [targets]
    n, k = state.n_qubits, gate.arity
    targets = _check_targets(n, targets, k)
    psi = state.amplitudes.reshape((2,) * n)
    u = gate.matrix.reshape((2,) * (2 * k))
    out = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), targets))
    out = np.moveaxis(out, list(range(k)), targets)
    return Statevector(out.reshape(-1))


def apply_multiplexed_ry(state: Statevector, angles, target: int) -> Statevector:
    """
    Uniformly controlled Y rotation on ``target``, controlled by every qubit
    before it. ``angles[k]`` is applied when the controls read ``k``.
    """
    n = state.n_qubits
    target = int(target)
    if not 0 <= target < n:
        raise ValidationError(f"target qubit {target} out of range for {n} qubits")
    angles = np.asarray(angles, dtype=float).reshape(-1)
    if angles.size != 2 ** target:
        raise ValidationError(
            f"need {2 ** target} angles for target {target}, got {angles.size}")
    psi = state.amplitudes.reshape(2 ** target, 2, -1)
    c = np.cos(angles / 2)[:, None]
    s = np.sin(angles / 2)[:, None]
    a0, a1 = psi[:, 0, :], psi[:, 1, :]
    out = np.stack([c * a0 - s * a1, s * a0 + c * a1], axis=1)
    return Statevector(out.reshape(-1))


def tensor(a: Statevector, b: Statevector) -> Statevector:
    """Kronecker product; qubits of ``a`` become the more significant ones."""
    check_cap(a.n_qubits + b.n_qubits)
    return Statevector(np.kron(a.amplitudes, b.amplitudes))


def tensor_all(states: Sequence[Statevector]) -> Statevector:
    states = list(states)
    if not states:
        raise ValidationError("tensor product of no states")
    check_cap(sum(s.n_qubits for s in states))
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def apply_qft(state: Statevector) -> Statevector:
    """
    Quantum Fourier transform of the whole register, built from Hadamards,
    a controlled-phase ladder and a final qubit reversal.
    """
    n = state.n_qubits
    out = state
    for j in range(n):
        out = apply_gate(out, H, [j])
        for k in range(j + 1, n):
            out = apply_gate(out, cphase(2 * np.pi / 2 ** (k - j + 1)), [k, j])
    for j in range(n // 2):
        out = apply_gate(out, SWAP, [j, n - 1 - j])
    return out


def qft_matrix(n_qubits: int) -> np.ndarray:
    """Dense DFT matrix ``F[p, q] = exp(2 pi i p q / N) / sqrt(N)``."""
    dim = 2 ** int(n_qubits)
    idx = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(idx, idx) / dim) / np.sqrt(dim)


def with_global_phase(state: Statevector, phi: float) -> Statevector:
    return Statevector(np.exp(1j * float(phi)) * state.amplitudes)


def bitstring(index: int, n_qubits: int) -> str:
    return format(int(index), f"0{int(n_qubits)}b")


def sample_counts(state: Statevector, shots: int, seed: int | None = 0) -> dict[str, int]:
    """
    Draw ``shots`` computational-basis measurements.

    Sampling is one multinomial draw from ``numpy.random.Generator(PCG64(seed))``,
    so the counts are a pure function of ``(probabilities, shots, seed)``.
    Keys are big-endian bit strings; zero counts are omitted.
    """
    shots = int(shots)
    if shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots}")
    # drop last-ulp noise so phase-equivalent states sample identically
    probs = np.round(state.probabilities(), 12)
    probs = probs / probs.sum()
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.multinomial(shots, probs)
    n = state.n_qubits
    return {bitstring(i, n): int(c) for i, c in enumerate(draws) if c}


def dump_counts(counts: Mapping[str, int]) -> str:
    return json.dumps(dict(sorted(counts.items())), indent=None) + "\n"
