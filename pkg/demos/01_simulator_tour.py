# %% [markdown]
# # The statevector simulator
#
# Every encoder in the package ends in a dense statevector. Qubit 0 is the
# most significant bit of the basis index, so |10> is index 2.

# %%
import numpy as np

from genoq.qsim import (CNOT, H, apply_gate, apply_qft, basis_state, qft_matrix,
                        sample_counts, with_global_phase, zero_state)

# %% Bell pair: H on qubit 0, then CNOT(0 -> 1)
bell = apply_gate(apply_gate(zero_state(2), H, [0]), CNOT, [0, 1])
print("Bell amplitudes:", np.round(bell.amplitudes.real, 4))
print("1000 shots:", sample_counts(bell, 1000, seed=1))

# %% The QFT circuit agrees with the dense DFT matrix
psi = basis_state(3, 0b011)
circuit = apply_qft(psi).amplitudes
dense = qft_matrix(3) @ psi.amplitudes
print("max |circuit - DFT| =", np.max(np.abs(circuit - dense)))

# %% A global phase changes amplitudes but never the sampled counts
rotated = with_global_phase(bell, 1.234)
print("same counts under a global phase:",
      sample_counts(bell, 500, seed=9) == sample_counts(rotated, 500, seed=9))

# %% States serialize to JSON with 17 significant digits
print(bell.to_json()[:90], "...")
