"""
DNA sequence parsing, per-scheme base maps, FASTA input and the promoter
interval CSV loader with dataset statistics.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ValidationError

log = logging.getLogger(__name__)

BASES = "ACGT"

#: base -> bit string for each registered scheme
BASE_MAPS: dict[str, dict[str, str]] = {
    # fixed-width code used by the amplitude, feature-map and energy encoders
    "two-bit": {"A": "00", "C": "01", "G": "10", "T": "11"},
    # high bit of the two-bit code; the angle embedding's map (A and C collide)
    "high-bit": {"A": "0", "C": "0", "G": "1", "T": "1"},
    # cosine quick path: purines A/G start in |0>, C/T in |1>
    "cosine": {"A": "0", "C": "1", "G": "0", "T": "1"},
}

CSV_COLUMNS = ("id", "region", "start", "end", "strand")


@dataclass(frozen=True)
class DnaSequence:
    """A non-empty string over A, C, G, T."""

    bases: str

    def __post_init__(self):
        if not self.bases:
            raise ValidationError("empty DNA sequence")
        for i, b in enumerate(self.bases):
            if b not in BASES:
                raise ValidationError(f"invalid base {b!r} at position {i}")

    def __len__(self) -> int:
        return len(self.bases)

    def __iter__(self) -> Iterator[str]:
        return iter(self.bases)

    def __getitem__(self, i):
        return self.bases[i]

    def __str__(self) -> str:
        return self.bases

    def counts(self) -> dict[str, int]:
        """Occurrences of each base, all four keys present."""
        c = Counter(self.bases)
        return {b: c.get(b, 0) for b in BASES}


def parse_sequence(text: str | DnaSequence) -> DnaSequence:
    """
    Parse a DNA string. Whitespace anywhere is dropped and lowercase is folded;
    anything outside ``ACGTacgt`` is rejected with its position.
    """
    if isinstance(text, DnaSequence):
        return text
    cleaned = "".join(str(text).split())
    if not cleaned:
        raise ValidationError("empty DNA sequence")
    for i, ch in enumerate(cleaned):
        if ch.upper() not in BASES:
            raise ValidationError(f"invalid base {ch!r} at position {i}")
    return DnaSequence(cleaned.upper())


def render(seq: DnaSequence) -> str:
    return seq.bases


def base_bits(base: str, scheme: str = "two-bit") -> str:
    try:
        mapping = BASE_MAPS[scheme]
    except KeyError:
        raise ValidationError(
            f"unknown base map {scheme!r}; known: {sorted(BASE_MAPS)}") from None
    try:
        return mapping[str(base).upper()]
    except KeyError:
        raise ValidationError(f"invalid base {base!r}") from None


def sequence_bits(seq: DnaSequence, scheme: str = "two-bit") -> str:
    """Concatenate ``base_bits`` over the sequence."""
    return "".join(base_bits(b, scheme) for b in seq)


# -- FASTA -------------------------------------------------------------------

def parse_fasta(text: str) -> dict[str, DnaSequence]:
    """Parse FASTA text into an insertion-ordered ``{id: sequence}`` map."""
    records: dict[str, DnaSequence] = {}
    current: str | None = None
    chunks: list[str] = []

    def flush(lineno):
        if current is None:
            return
        try:
            records[current] = parse_sequence("".join(chunks))
        except ValidationError as exc:
            raise ValidationError(f"FASTA record {current!r} (ending line {lineno}): {exc}") from None

    lineno = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith(">"):
            flush(lineno - 1)
            header = line[1:].strip()
            if not header:
                raise ValidationError(f"line {lineno}: empty FASTA header")
            rec_id = header.split()[0]
            if rec_id in records or rec_id == current:
                raise ValidationError(f"line {lineno}: duplicate FASTA id {rec_id!r}")
            current, chunks = rec_id, []
        else:
            if current is None:
                raise ValidationError(f"line {lineno}: sequence data before first header")
            chunks.append(line)
    flush(lineno)
    return records


def read_fasta(path: str | os.PathLike) -> dict[str, DnaSequence]:
    with open(path, encoding="utf-8") as fh:
        return parse_fasta(fh.read())


def looks_like_fasta(text: str) -> bool:
    return text.lstrip().startswith(">")


# -- promoter CSV ------------------------------------------------------------

@dataclass(frozen=True)
class PromoterRecord:
    id: str
    region: str
    start: int
    end: int
    strand: str
    sequence: DnaSequence | None = None

    def __post_init__(self):
        if self.end <= self.start:
            raise ValidationError(f"end ({self.end}) must exceed start ({self.start})")
        if self.strand not in ("+", "-"):
            raise ValidationError(f"strand must be '+' or '-', got {self.strand!r}")
        if self.sequence is not None and len(self.sequence) != self.end - self.start:
            raise ValidationError(
                f"sequence length {len(self.sequence)} != end - start = {self.end - self.start}")

    @property
    def length(self) -> int:
        return self.end - self.start


def load_promoter_csv(path: str | os.PathLike) -> list[PromoterRecord]:
    """
    Load ``id,region,start,end,strand[,sequence]`` rows.

    Errors name the 1-based data row (header is row 0) and the offending
    column. Whether sequences were present is logged at INFO level; see
    :func:`sequence_mode`.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_promoter_csv(fh)


def parse_promoter_csv(stream: Iterable[str]) -> list[PromoterRecord]:
    reader = csv.reader(stream)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ValidationError("promoter CSV is empty (no header)") from None
    missing = [c for c in CSV_COLUMNS if c not in header]
    if missing:
        raise ValidationError(f"promoter CSV missing column(s): {', '.join(missing)}")
    col = {name: header.index(name) for name in header}
    has_seq = "sequence" in col

    records = []
    for row_no, row in enumerate(reader, 1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ValidationError(
                f"row {row_no}: expected {len(header)} fields, got {len(row)}")
        cells = {name: row[i].strip() for name, i in col.items()}
        values = {}
        for name in ("start", "end"):
            try:
                values[name] = int(cells[name])
            except ValueError:
                raise ValidationError(
                    f"row {row_no}, column {name!r}: not an integer: {cells[name]!r}") from None
        if cells["strand"] not in ("+", "-"):
            raise ValidationError(
                f"row {row_no}, column 'strand': expected '+' or '-', got {cells['strand']!r}")
        if values["end"] <= values["start"]:
            raise ValidationError(
                f"row {row_no}, column 'end': end ({values['end']}) <= start ({values['start']})")
        seq = None
        if has_seq and cells["sequence"]:
            try:
                seq = parse_sequence(cells["sequence"])
            except ValidationError as exc:
                raise ValidationError(f"row {row_no}, column 'sequence': {exc}") from None
        try:
            records.append(PromoterRecord(cells["id"], cells["region"],
                                          values["start"], values["end"],
                                          cells["strand"], seq))
        except ValidationError as exc:
            raise ValidationError(f"row {row_no}: {exc}") from None
    log.info("loaded %d promoter records (%s mode)", len(records), sequence_mode(records))
    return records


def sequence_mode(records: Sequence[PromoterRecord]) -> str:
    """``"sequence"`` if every record carries bases, ``"coordinates"`` if none
    do, ``"mixed"`` otherwise."""
    with_seq = sum(r.sequence is not None for r in records)
    if records and with_seq == len(records):
        return "sequence"
    return "coordinates" if with_seq == 0 else "mixed"


def attach_sequences(records: Sequence[PromoterRecord],
                     fasta: Mapping[str, DnaSequence]) -> list[PromoterRecord]:
    """Fill missing sequences from a FASTA sidecar keyed by record id."""
    out = []
    for r in records:
        if r.sequence is None:
            if r.id not in fasta:
                raise ValidationError(f"no FASTA sequence for record {r.id!r}")
            r = PromoterRecord(r.id, r.region, r.start, r.end, r.strand, fasta[r.id])
        out.append(r)
    return out


def load_labels(path: str | os.PathLike) -> dict[str, tuple[str, str]]:
    """Read an ``id,split,class`` CSV into ``{id: (split, class)}``."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        need = {"id", "split", "class"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise ValidationError(f"label CSV needs columns {sorted(need)}")
        labels = {}
        for row_no, row in enumerate(reader, 1):
            rid = row["id"].strip()
            if rid in labels:
                raise ValidationError(f"label row {row_no}: duplicate id {rid!r}")
            labels[rid] = (row["split"].strip(), row["class"].strip())
    return labels


@dataclass
class DatasetStats:
    """Per-split, per-class counts and the interval length histogram."""

    total: int = 0
    counts: dict[str, dict[str, int]] = field(default_factory=dict)
    length_histogram: dict[int, int] = field(default_factory=dict)

    def split_totals(self) -> dict[str, int]:
        return {s: sum(c.values()) for s, c in self.counts.items()}

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "splits": {s: dict(sorted(c.items())) for s, c in sorted(self.counts.items())},
            "split_totals": dict(sorted(self.split_totals().items())),
            "length_histogram": {str(k): v for k, v in sorted(self.length_histogram.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["split", "class", "count"])
        for s, c in sorted(self.counts.items()):
            for cls, n in sorted(c.items()):
                w.writerow([s, cls, n])
        return buf.getvalue()


def dataset_stats(records: Sequence[PromoterRecord],
                  labels: Sequence[tuple[str, str]] | Mapping[str, tuple[str, str]]) -> DatasetStats:
    """
    Count records by ``(split, class)`` and histogram interval lengths.

    ``labels`` is either aligned with ``records`` or keyed by record id.
    """
    if isinstance(labels, Mapping):
        try:
            labels = [labels[r.id] for r in records]
        except KeyError as exc:
            raise ValidationError(f"no label for record {exc.args[0]!r}") from None
    labels = list(labels)
    if len(labels) != len(records):
        raise ValidationError(f"{len(labels)} labels for {len(records)} records")
    stats = DatasetStats(total=len(records))
    hist = Counter()
    for rec, (split, cls) in zip(records, labels):
        stats.counts.setdefault(split, {}).setdefault(cls, 0)
        stats.counts[split][cls] += 1
        hist[rec.length] += 1
    stats.length_histogram = dict(sorted(hist.items()))
    return stats


def write_synthetic_promoters(csv_path, labels_path,
                              counts: Mapping[tuple[str, str], int],
                              length: int = 251, seed: int = 0) -> int:
    """
    Write a coordinate-only promoter CSV plus its ``id,split,class`` label file
    with the requested number of rows per ``(split, class)``. Returns the row count.
    """
    rng = random.Random(seed)
    n = 0
    with open(csv_path, "w", newline="", encoding="utf-8") as fc, \
            open(labels_path, "w", newline="", encoding="utf-8") as fl:
        wc = csv.writer(fc, lineterminator="\n")
        wl = csv.writer(fl, lineterminator="\n")
        wc.writerow(CSV_COLUMNS)
        wl.writerow(["id", "split", "class"])
        for (split, cls), k in counts.items():
            for _ in range(k):
                start = rng.randrange(1, 200_000_000)
                rid = f"seq{n:06d}"
                wc.writerow([rid, f"chr{rng.randint(1, 22)}", start, start + length,
                             rng.choice("+-")])
                wl.writerow([rid, split, cls])
                n += 1
    return n
