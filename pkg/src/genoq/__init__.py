"""Classical-to-quantum DNA sequence encoders on a dense statevector simulator."""

from .baseline import amplitude_encode, angle_embed, pauli_feature_map, FeatureMapConfig
from .compress import bwt, classic_huffman, ibwt, qbwt_encode, quanthuff
from .entropy_encoders import nz22, nz23, quantig, sencode
from .errors import (CapExceededError, DegenerateEncodingError, GenoqError,
                     InfiniteDivergenceError, ValidationError)
from .infomath import base_distribution, shannon_entropy
from .qsim import Statevector, apply_qft, qubit_cap, sample_counts
from .seqio import DnaSequence, parse_fasta, parse_sequence
from .spectral import cosine_encode_image, dct2d

__version__ = "0.1.0"

__all__ = [
    "amplitude_encode", "angle_embed", "pauli_feature_map", "FeatureMapConfig",
    "bwt", "classic_huffman", "ibwt", "qbwt_encode", "quanthuff",
    "nz22", "nz23", "quantig", "sencode",
    "CapExceededError", "DegenerateEncodingError", "GenoqError",
    "InfiniteDivergenceError", "ValidationError",
    "base_distribution", "shannon_entropy",
    "Statevector", "apply_qft", "qubit_cap", "sample_counts",
    "DnaSequence", "parse_fasta", "parse_sequence",
    "cosine_encode_image", "dct2d",
]
