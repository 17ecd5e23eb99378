"""
Cosine encoding: 2-D DCT of a grayscale image, magnitude normalization,
amplitude loading and a register-wide QFT. Also the per-base DNA quick path
and a minimal PGM reader/writer.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass

import numpy as np

from .baseline import amplitude_encode
from .errors import DegenerateEncodingError, ValidationError
from .qsim import Statevector, apply_qft, basis_state, check_cap
from .seqio import DnaSequence, parse_sequence, sequence_bits

__all__ = [
    "as_gray_image", "DctCoeffs", "dct2d", "cosine_register_size",
    "cosine_amplitudes", "cosine_encode_image", "cosine_encode_dna",
    "read_pgm", "parse_pgm", "write_pgm",
]


def as_gray_image(pixels) -> np.ndarray:
    """Validate an ``M x N`` array of intensities in [0, 255]."""
    img = np.asarray(pixels, dtype=float)
    if img.ndim != 2 or min(img.shape) < 1:
        raise ValidationError(f"image must be a non-empty 2-D array, got shape {img.shape}")
    if not np.all(np.isfinite(img)) or img.min() < 0 or img.max() > 255:
        raise ValidationError("pixel intensities must lie in [0, 255]")
    return img


@dataclass(frozen=True)
class DctCoeffs:
    values: np.ndarray

    @property
    def f_max(self) -> float:
        return float(np.max(np.abs(self.values)))

    def normalized(self) -> np.ndarray:
        fmax = self.f_max
        if fmax == 0:
            raise DegenerateEncodingError(
                "all DCT coefficients are zero; cannot normalize by F_max")
        return self.values / fmax

    def to_csv(self) -> str:
        """Rows ``alpha,beta,F,F_hat`` in row-major order."""
        fhat = self.normalized() if self.f_max > 0 else np.zeros_like(self.values)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha", "beta", "F", "F_hat"])
        for (a, b), v in np.ndenumerate(self.values):
            w.writerow([a, b, format(v, ".17g"), format(fhat[a, b], ".17g")])
        return buf.getvalue()


def _cosine_basis(size: int) -> np.ndarray:
    # row k, column x: cos(k pi (2x + 1) / (2 size))
    k = np.arange(size)[:, None]
    x = np.arange(size)[None, :]
    return np.cos(k * np.pi * (2 * x + 1) / (2 * size))


def dct2d(image) -> DctCoeffs:
    """
    ``F(a, b) = (C_a / 2)(C_b / 2) sum_x sum_y f(x, y) cos[a pi (2x+1) / 2M] cos[b pi (2y+1) / 2N]``
    with ``C_0 = 1/sqrt(2)`` and ``C_k = 1`` otherwise.

    The scale factors are used as written for every size; they agree with the
    orthonormal DCT-II only at 8 x 8.
    """
    f = as_gray_image(image)
    m, n = f.shape
    # C_a * C_b / 4, with the (0, 0) product taken as exactly 1/2 * 1/4
    zeros = (np.arange(m)[:, None] == 0).astype(int) + (np.arange(n)[None, :] == 0)
    scale = np.choose(zeros, [0.25, 0.25 / np.sqrt(2), 0.125])
    F = _cosine_basis(m) @ f @ _cosine_basis(n).T
    return DctCoeffs(F * scale)


def cosine_register_size(shape) -> int:
    """``ceil(log2(M N))`` qubits, at least one."""
    size = int(np.prod(shape))
    return max(1, (size - 1).bit_length())


def cosine_amplitudes(image) -> np.ndarray:
    """Row-major ``|F_hat|`` values zero-padded to ``2**n`` and unit-normalized."""
    coeffs = dct2d(image)
    mags = np.abs(coeffs.normalized()).reshape(-1)
    n = cosine_register_size(coeffs.values.shape)
    padded = np.zeros(2 ** n)
    padded[:mags.size] = mags
    return padded / np.linalg.norm(padded)


def cosine_encode_image(image) -> Statevector:
    """
    Encode an image: DCT, normalize by ``F_max``, load ``|F_hat|`` row-major
    into amplitudes (zero-padded), then QFT the register.

    A 1 x 1 image is promoted to one qubit, giving ``QFT|0> = H|0>``.
    """
    img = as_gray_image(image)
    check_cap(cosine_register_size(img.shape))
    state = amplitude_encode(cosine_amplitudes(img))
    return apply_qft(state)


def cosine_encode_dna(seq: DnaSequence | str) -> Statevector:
    """Basis state from the cosine base map (A, G -> 0; C, T -> 1), then QFT."""
    seq = parse_sequence(seq)
    check_cap(len(seq))
    bits = sequence_bits(seq, "cosine")
    return apply_qft(basis_state(len(bits), int(bits, 2)))


# -- PGM ---------------------------------------------------------------------

def _pgm_tokens(data: bytes, count: int, pos: int = 0):
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    tokens = []
    while len(tokens) < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ValidationError("truncated PGM header")
        tokens.append(data[start:pos])
    return tokens, pos


def parse_pgm(data: bytes) -> np.ndarray:
    """Decode an 8-bit P2 (ASCII) or P5 (binary) PGM into a ``height x width`` array."""
    (magic, w, h, maxval), pos = _pgm_tokens(data, 4)
    if magic not in (b"P2", b"P5"):
        raise ValidationError(f"not a P2/P5 PGM file (magic {magic!r})")
    try:
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError:
        raise ValidationError("PGM header fields must be integers") from None
    if width < 1 or height < 1:
        raise ValidationError("PGM dimensions must be positive")
    if not 0 < maxval <= 255:
        raise ValidationError(f"only 8-bit PGM supported (maxval {maxval})")
    if magic == b"P5":
        raw = data[pos + 1:pos + 1 + width * height]
        if len(raw) != width * height:
            raise ValidationError("truncated P5 pixel data")
        pixels = np.frombuffer(raw, dtype=np.uint8).astype(float)
    else:
        try:
            pixels = np.array([int(t) for t in data[pos:].split()], dtype=float)
        except ValueError:
            raise ValidationError("non-integer P2 pixel value") from None
        if pixels.size != width * height:
            raise ValidationError(f"expected {width * height} P2 pixels, got {pixels.size}")
    if pixels.max(initial=0) > maxval:
        raise ValidationError("pixel value exceeds maxval")
    # rescale to the 0..255 range the DCT expects
    return as_gray_image(pixels.reshape(height, width) * (255.0 / maxval))


def read_pgm(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        return parse_pgm(fh.read())


def write_pgm(path: str | os.PathLike, image, binary: bool = True) -> None:
    img = np.asarray(np.rint(as_gray_image(image)), dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        if binary:
            fh.write(f"P5\n{w} {h}\n255\n".encode())
            fh.write(img.tobytes())
        else:
            fh.write(f"P2\n{w} {h}\n255\n".encode())
            for row in img:
                fh.write((" ".join(str(int(v)) for v in row) + "\n").encode())
