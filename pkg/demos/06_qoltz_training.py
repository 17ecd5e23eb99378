# %% [markdown]
# # Fitting the energy model
#
# Sequences are two-bit encoded and cut into segments; each segment is a
# spin configuration. The model is fit by exact-gradient mini-batch descent
# with the partition function computed by enumeration.

# %%
import numpy as np

from genoq.qoltz import TrainConfig, bin_encode_seq, segment_bits, train

print("AAGT ->", bin_encode_seq("AAGT"), "->", segment_bits(bin_encode_seq("AAGT"), 2))

# %% A corpus with a strong preference for AAGT-like segments
rng = np.random.default_rng(0)
corpus = ["AAGT"] * 30 + ["".join(rng.choice(list("ACGT"), 4)) for _ in range(10)]
result = train(corpus, TrainConfig(steps=200, learning_rate=0.1, layers=2, segments=2, seed=0))
print(f"J: {result.initial_cost:.4f} -> {result.final_cost:.4f}")
print("validation trace:", [(s, round(j, 4)) for s, j in result.val_trace[:5]], "...")

# %% The three coupling arrays enter only through their sum
print("effective couplings per bond:", np.round(result.model.chain_coupling(), 4))
print("biases:", np.round(result.model.biases, 4))
