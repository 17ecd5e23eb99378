# %% [markdown]
# # Compression-inspired encoders
#
# The cascade-tree Huffman code pairs rank-ordered leaves left to right. On
# the M13 primer it gives every base a 2-bit code (36 bits), while the
# textbook greedy merge finds a 35-bit code.

# %%
from genoq.compress import bwt, classic_huffman, ibwt, qbwt_encode, qbwt_plan, quanthuff_codebook

M13 = "CAGGAAACAGCTATGACC"

# %%
for name, book in (("cascade", quanthuff_codebook(M13)), ("greedy", classic_huffman(M13))):
    print(f"{name:8s}", {r["base"]: r["code"] for r in book.rows()}, "total", book.total_bits)

# %% Burrows-Wheeler transform with a '$' sentinel, and its inverse
res = bwt("ACTGACGTAGC")
print("bwt:", res.transformed, "primary row", res.primary_index)
print("ibwt:", ibwt(res).bases)

# %% QBWT: one RY(2 pi count/n) per transformed base, then 1024 shots
plan = qbwt_plan("ACTGACGTAGC")
state, counts = qbwt_encode("ACTGACGTAGC", shots=1024, seed=0)
top = sorted(counts.items(), key=lambda kv: -kv[1])[:3]
print("analytic P(all zeros) =", round(plan.zero_probability(), 6))
print("three most frequent outcomes:", top)
