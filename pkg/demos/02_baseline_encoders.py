# %% [markdown]
# # Baseline encoders
#
# Three standard ways of loading a DNA sequence: amplitudes from the base
# frequencies, a second-order Pauli ZZ feature map, and one rotated qubit
# per base.

# %%
import numpy as np

from genoq.baseline import (amplitude_encode, amplitude_encode_sequence,
                            angle_embed, pauli_encode_sequence,
                            sequence_feature_angles)

# %% Amplitude encoding of an arbitrary vector (padded to 4, normalized)
state = amplitude_encode([3, 0, 4])
print("amplitudes of [3, 0, 4]:", np.round(state.amplitudes.real, 4))

# %% Base frequencies of TACAGTTGCA as measurement probabilities over |A>,|C>,|G>,|T>
probs = amplitude_encode_sequence("TACAGTTGCA").probabilities()
print("P(A, C, G, T) =", np.round(probs, 4))

# %% Pauli feature map: angles are the two-bit value of each base times pi/2
print("angles for GAT:", np.round(sequence_feature_angles("GAT"), 4))
fm = pauli_encode_sequence("GAT", k=2, reps=2)
print("most likely outcome:", format(int(np.argmax(fm.probabilities())), "03b"))

# %% Angle embedding maps A, C -> |0> and G, T -> |1>; ATG lands on |011>
atg = angle_embed("ATG")
print("ATG ->", format(int(np.argmax(np.abs(atg.amplitudes))), "03b"))
print("with a CNOT chain ->", format(int(np.argmax(np.abs(angle_embed("ATG", entangle=True).amplitudes))), "03b"))
