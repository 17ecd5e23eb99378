# %% [markdown]
# # Entropy- and divergence-driven encoders
#
# SEncode ranks segments by entropy; NZ22 and NZ23 size a register from a
# divergence to a reference; QuantIG reweights the uniform superposition by a
# diagonal information metric.

# %%
import numpy as np

from genoq.entropy_encoders import nz22, nz23, quantig, sencode
from genoq.infomath import (base_distribution, bhattacharyya, hellinger,
                            js_divergence, kl_divergence, tv_wasserstein)

SEQ, REF = "TACAGTTGCA", "AGCTGACTCA"

# %%
p, q = base_distribution(SEQ), base_distribution(REF)
print("P =", p.as_dict())
print("Q =", q.as_dict())
for name, f in (("KL", kl_divergence), ("JS", js_divergence), ("Bhattacharyya", bhattacharyya),
                ("Hellinger", hellinger), ("TV", tv_wasserstein)):
    print(f"  {name:13s} {f(p, q):.6f}")

# %% SEncode on ATCG: segments AT and CG become H|0> and H|1>
report, state = sencode("ATCG")
print([(s.bases, s.rank) for s in report.segments], np.round(state.amplitudes.real, 3))

# %% NZ23: one qubit carrying P(first base) = P(T) = 0.3
budget, state = nz23(SEQ, REF)
print(budget, "probabilities", np.round(state.probabilities(), 6))

# %% NZ22 on a mutated copy: each qubit's |1> weight is a chunk's mismatch rate
budget, state = nz22("ACGTACGTAC", "ACGAACGTTC", smoothing=True, alpha=0.2)
print(budget, "P(|1>) on qubit 0:", round(state.probabilities().reshape(2, -1)[1].sum(), 6))

# %% QuantIG with the Fisher-Rao diagonal 1 / (p q)
print("QuantIG amplitudes:", np.round(quantig(SEQ, REF).amplitudes.real, 4))
