# %% [markdown]
# # Promoter dataset statistics
#
# The loader reads coordinate-only interval CSVs plus an id,split,class label
# file. Here a synthetic fixture with the full split sizes stands in for the
# real dataset.

# %%
import tempfile
from pathlib import Path

from genoq.seqio import dataset_stats, load_labels, load_promoter_csv, sequence_mode, write_synthetic_promoters

COUNTS = {("train", "neg"): 12355, ("train", "pos"): 14742,
          ("test", "neg"): 4119, ("test", "pos"): 4915}

with tempfile.TemporaryDirectory() as tmp:
    csv_path, labels_path = Path(tmp) / "promoters.csv", Path(tmp) / "labels.csv"
    write_synthetic_promoters(csv_path, labels_path, COUNTS, seed=0)
    records = load_promoter_csv(csv_path)
    stats = dataset_stats(records, load_labels(labels_path))

# %%
print("mode:", sequence_mode(records))
print(stats.to_csv(), end="")
print("per split:", stats.split_totals(), "total", stats.total)
print("interval lengths:", stats.length_histogram)
