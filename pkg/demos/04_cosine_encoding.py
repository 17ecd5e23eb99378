# %% [markdown]
# # Cosine encoding of an image
#
# A small grayscale image goes through the 2-D DCT, is normalized by its
# largest coefficient, loaded row-major into amplitudes and then QFT'd.

# %%
import tempfile
from pathlib import Path

import numpy as np

from genoq.spectral import cosine_encode_dna, cosine_encode_image, dct2d, read_pgm, write_pgm

# %% A 4 x 4 diagonal gradient, round-tripped through a PGM file
image = np.add.outer(np.arange(4), np.arange(4)) * 30.0
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "gradient.pgm"
    write_pgm(path, image)
    image = read_pgm(path)

coeffs = dct2d(image)
print("F(0,0) = mean * 2 =", coeffs.values[0, 0], " F_max =", coeffs.f_max)
print(coeffs.to_csv().splitlines()[:4])

# %%
state = cosine_encode_image(image)
print(f"{state.n_qubits} qubits, norm {np.linalg.norm(state.amplitudes):.12f}")

# %% The DNA quick path: purines -> |0>, pyrimidines -> |1>, then QFT
dna = cosine_encode_dna("ATC")
print("ATC magnitudes all 8**-0.5:", np.allclose(np.abs(dna.amplitudes), 8 ** -0.5))
