"""``genoq`` command-line interface."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import baseline, compress, entropy_encoders, infomath, qoltz, seqio, spectral, verify
from .errors import CapExceededError, GenoqError, ValidationError
from .qsim import HARD_MAX_QUBITS, Statevector, dump_counts, qubit_cap, sample_counts

SCHEMES = ("amplitude", "pauli", "angle", "huffman", "qbwt", "cosine",
           "sencode", "nz22", "nz23", "quantig")
NEEDS_REF = ("nz22", "nz23", "quantig")
DIVERGENCES = {
    "kl": infomath.kl_divergence,
    "js": infomath.js_divergence,
    "bhatt": infomath.bhattacharyya,
    "hellinger": infomath.hellinger,
    "tv": infomath.tv_wasserstein,
}
BENCH_SCHEMES = {
    "huffman": compress.quanthuff_codebook,
    "classic-huffman": compress.classic_huffman,
    "bwt": compress.bwt,
    "entropy": lambda s: infomath.shannon_entropy(infomath.base_distribution(s)),
}
LITERAL_LIMIT = 1 << 20


class UsageError(ValidationError):
    pass


# -- input helpers -----------------------------------------------------------

def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def resolve_text(value: str, flag: str) -> str:
    """A literal value, or the contents of ``@path``."""
    if value.startswith("@"):
        return _read_text(value[1:])
    if len(value.encode()) > LITERAL_LIMIT:
        raise UsageError(f"{flag} literal exceeds 1 MiB; pass it as @file")
    return value


def resolve_sequence(value: str, flag: str = "--input") -> seqio.DnaSequence:
    text = resolve_text(value, flag)
    try:
        if seqio.looks_like_fasta(text):
            records = seqio.parse_fasta(text)
            if not records:
                raise UsageError(f"{flag}: FASTA input has no records")
            return next(iter(records.values()))
        return seqio.parse_sequence(text)
    except UsageError:
        raise
    except ValidationError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def resolve_sequences(value: str, flag: str = "--input") -> list[seqio.DnaSequence]:
    """Every record of a FASTA file (``path`` or ``@path``), or comma-separated literals."""
    path = value[1:] if value.startswith("@") else value
    if value.startswith("@") or os.path.isfile(path):
        text = _read_text(path)
        if seqio.looks_like_fasta(text):
            try:
                return list(seqio.parse_fasta(text).values())
            except ValidationError as exc:
                raise UsageError(f"{flag}: {exc}") from None
        value = ",".join(text.split())
    try:
        return [seqio.parse_sequence(s) for s in value.split(",") if s.strip()]
    except ValidationError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


# -- output helpers ----------------------------------------------------------

def _json(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


class Output:
    """Collects the primary artifact and sidecars, then writes or prints them."""

    def __init__(self, args):
        self.out = args.out
        self.format = args.format

    def write(self, path: str, text: str) -> None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)

    def emit(self, doc: dict, csv_text: str | None = None) -> None:
        if self.format == "csv":
            if csv_text is None:
                raise UsageError("--format csv is not available for this command")
            text = csv_text
        else:
            text = _json(doc)
        if self.out:
            self.write(self.out, text)
        else:
            sys.stdout.write(text)


# -- commands ----------------------------------------------------------------

def _encode_state(args):
    """Return ``(state, report, counts, coeffs_csv)`` for the chosen scheme."""
    scheme = args.scheme
    if scheme in NEEDS_REF and args.ref is None:
        raise UsageError(f"missing --ref (required by --scheme {scheme})")
    if scheme == "cosine":
        if (args.image is None) == (args.input is None):
            raise UsageError("--scheme cosine needs exactly one of --image or --input")
    elif args.input is None:
        raise UsageError(f"missing --input (required by --scheme {scheme})")

    report, counts, coeffs = {}, None, None
    if scheme == "cosine" and args.image is not None:
        image = spectral.read_pgm(args.image)
        dct = spectral.dct2d(image)
        state = spectral.cosine_encode_image(image)
        coeffs = dct.to_csv()
        report = {"shape": list(image.shape), "f_max": dct.f_max,
                  "n_qubits": state.n_qubits}
        return state, report, counts, coeffs

    seq = resolve_sequence(args.input)
    ref = resolve_sequence(args.ref, "--ref") if args.ref is not None else None
    if scheme == "amplitude":
        state = baseline.amplitude_encode_sequence(seq)
        report = {"distribution": infomath.base_distribution(seq).as_dict()}
    elif scheme == "pauli":
        state = baseline.pauli_encode_sequence(seq, k=args.k, reps=args.reps)
        report = {"angles": list(baseline.sequence_feature_angles(seq)),
                  "k": args.k, "reps": args.reps}
    elif scheme == "angle":
        state = baseline.angle_embed(seq, entangle=args.entangle)
        report = {"entangle": args.entangle}
    elif scheme == "huffman":
        book, state = compress.quanthuff(seq)
        report = book.to_dict()
        if state is None:
            report["state_omitted"] = (f"{book.total_bits} qubits exceed the cap; "
                                       "only the codebook is reported")
    elif scheme == "qbwt":
        plan = compress.qbwt_plan(seq)
        state, counts = compress.qbwt_encode(seq, shots=args.shots, seed=args.seed,
                                             include_phase=not args.no_phase)
        report = {"bwt": plan.bwt.to_dict(), "angles": list(plan.angles),
                  "global_phase": plan.global_phase,
                  "zero_probability": plan.zero_probability(),
                  "shots": args.shots, "seed": args.seed}
    elif scheme == "cosine":
        state = spectral.cosine_encode_dna(seq)
        report = {"bits": seqio.sequence_bits(seq, "cosine")}
    elif scheme == "sencode":
        seg_report, state = entropy_encoders.sencode(seq)
        report = seg_report.to_dict()
    elif scheme == "nz22":
        budget, state = entropy_encoders.nz22(seq, ref, alpha=args.alpha, smoothing=args.smooth)
        report = budget.to_dict()
    elif scheme == "nz23":
        budget, state = entropy_encoders.nz23(seq, ref, alpha=args.alpha)
        report = budget.to_dict()
    else:
        state = entropy_encoders.quantig(seq, ref, metric=args.metric, smoothing=args.smooth)
        report = {"metric": args.metric,
                  "diagonal": entropy_encoders.metric_diagonal(
                      _smoothed(seq, args.smooth), _smoothed(ref, args.smooth),
                      args.metric).tolist()}
    return state, report, counts, coeffs


def _smoothed(seq, eps):
    p = infomath.base_distribution(seq).p
    return p if eps is None else infomath.smooth(p, eps)


def cmd_encode(args) -> int:
    state, report, counts, coeffs = _encode_state(args)
    doc = {"scheme": args.scheme,
           "state": state.to_dict() if state is not None else None,
           "report": report}
    if counts is not None:
        doc["counts"] = dict(sorted(counts.items()))
    if not args.out:
        if coeffs is not None:
            doc["coefficients_csv"] = coeffs
        sys.stdout.write(_json(doc))
        return 0
    out = Output(args)
    base = args.out[:-5] if args.out.endswith(".json") else args.out
    if state is not None:
        out.write(args.out, state.to_json({"scheme": args.scheme}))
    out.write(base + ".report.json", _json(report))
    if counts is not None:
        out.write(base + ".counts.json", dump_counts(counts))
    if coeffs is not None:
        out.write(base + ".coeffs.csv", coeffs)
    return 0


def cmd_sample(args) -> int:
    state = Statevector.from_json(resolve_text("@" + args.state.lstrip("@"), "--state"))
    counts = sample_counts(state, args.shots, args.seed)
    text = dump_counts(counts)
    if args.out:
        Output(args).write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_huffman(args) -> int:
    seq = resolve_sequence(args.input, "input")
    book = compress.classic_huffman(seq) if args.classic else compress.quanthuff_codebook(seq)
    rows = book.rows()
    csv_text = "base,count,code,bits\n" + "".join(
        f"{r['base']},{r['count']},{r['code']},{r['bits']}\n" for r in rows)
    Output(args).emit(book.to_dict(), csv_text)
    return 0


def cmd_bwt(args) -> int:
    Output(args).emit(compress.bwt(resolve_sequence(args.input, "input")).to_dict())
    return 0


def cmd_ibwt(args) -> int:
    text = resolve_text(args.input, "input").strip()
    res = compress.BwtResult(text, args.primary) if args.primary is not None else text
    Output(args).emit({"sequence": compress.ibwt(res).bases})
    return 0


def cmd_entropy(args) -> int:
    seq = resolve_sequence(args.input, "input")
    dist = infomath.base_distribution(seq)
    h = infomath.shannon_entropy(dist)
    doc = {"length": len(seq), "distribution": dist.as_dict(), "entropy_bits": h}
    Output(args).emit(doc, f"length,entropy_bits\n{len(seq)},{h!r}\n")
    return 0


def cmd_divergence(args) -> int:
    p = infomath.base_distribution(resolve_sequence(args.input, "input"))
    q = infomath.base_distribution(resolve_sequence(args.ref, "ref"))
    fn = DIVERGENCES[args.kind]
    value = fn(p, q, smoothing=args.smooth) if args.kind == "kl" else fn(p, q)
    doc = {"kind": args.kind, "value": value, "p": p.as_dict(), "q": q.as_dict()}
    Output(args).emit(doc, f"kind,value\n{args.kind},{value!r}\n")
    return 0


def cmd_stats(args) -> int:
    records = seqio.load_promoter_csv(args.input)
    labels = seqio.load_labels(args.labels)
    stats = seqio.dataset_stats(records, labels)
    doc = stats.to_dict()
    doc["mode"] = seqio.sequence_mode(records)
    Output(args).emit(doc, stats.to_csv())
    return 0


def cmd_qoltz_train(args) -> int:
    seqs = resolve_sequences(args.input)
    config = qoltz.TrainConfig(steps=args.steps, learning_rate=args.lr, layers=args.layers,
                               segments=args.segments, batch_size=args.batch_size,
                               split=args.split, seed=args.seed)
    result = qoltz.train(seqs, config)
    loss_csv = result.trace_csv()
    if args.out:
        out = Output(args)
        base = args.out[:-5] if args.out.endswith(".json") else args.out
        out.write(args.out, result.model_json())
        out.write(base + ".loss.csv", loss_csv)
        return 0
    if args.format == "csv":
        sys.stdout.write(loss_csv)
        return 0
    sys.stdout.write(_json({
        "model": result.model.to_dict(),
        "initial_J": result.initial_cost, "final_J": result.final_cost,
        "stopped_early": result.stopped_early,
        "train_trace": [[s, j] for s, j in result.train_trace],
        "val_trace": [[s, j] for s, j in result.val_trace],
    }))
    return 0


def _int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{flag} must be comma-separated integers") from None


def cmd_bench(args) -> int:
    schemes = [s for s in args.schemes.split(",") if s.strip()]
    if not schemes:
        raise UsageError("--schemes is empty")
    unknown = [s for s in schemes if s not in BENCH_SCHEMES]
    if unknown:
        raise UsageError(f"--schemes: unknown scheme(s) {', '.join(unknown)}; "
                         f"choose from {', '.join(BENCH_SCHEMES)}")
    lengths = _int_list(args.lengths, "--lengths")
    if not lengths or any(n < 1 for n in lengths) or lengths != sorted(lengths):
        raise UsageError("--lengths must be positive and ascending")
    if args.repeats < 1:
        raise UsageError("--repeats must be >= 1")
    rng = np.random.default_rng(args.seed)
    rows = []
    for n in lengths:
        seq = seqio.DnaSequence("".join(rng.choice(list(seqio.BASES), size=n)))
        for scheme in schemes:
            fn = BENCH_SCHEMES[scheme]
            samples = []
            for _ in range(args.repeats):
                t0 = time.perf_counter_ns()
                fn(seq)
                samples.append(time.perf_counter_ns() - t0)
            rows.append((scheme, n, float(np.mean(samples)), float(np.std(samples))))
    csv_text = "scheme,length,mean_ns,stddev_ns\n" + "".join(
        f"{s},{n},{m:.1f},{d:.1f}\n" for s, n, m, d in rows)
    doc = {"rows": [{"scheme": s, "length": n, "mean_ns": m, "stddev_ns": d}
                    for s, n, m, d in rows]}
    # CSV is the documented bench format; JSON only on request
    args.format = args.format or "csv"
    Output(args).emit(doc, csv_text)
    return 0


def cmd_verify(args) -> int:
    try:
        results = verify.run_checks(args.only, seed=args.seed)
    except ValueError as exc:
        raise UsageError(f"--only: {exc}") from None
    ok = all(r.passed for r in results)
    # the table is for terminals; files default to JSON
    if args.format == "json" or (args.out and args.format is None):
        text = _json({"passed": ok, "checks": [r.to_dict() for r in results]})
    else:
        text = verify.render_table(results) + "\n" + ("all checks passed\n" if ok else "FAILED\n")
    if args.out:
        Output(args).write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


# -- parser ------------------------------------------------------------------

def _global_options(suppress: bool) -> argparse.ArgumentParser:
    # attached to the root and to every subcommand; subcommand copies only
    # override when given so flags work on either side of the command name
    d = {"default": argparse.SUPPRESS} if suppress else {}
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, **(d or {"default": None}),
                   help="RNG seed (env GENQ_SEED, default 0)")
    g.add_argument("--max-qubits", type=int, **(d or {"default": None}),
                   help=f"simulator qubit cap, at most {HARD_MAX_QUBITS} (env GENQ_MAX_QUBITS)")
    g.add_argument("--out", **(d or {"default": None}), help="write output to this path")
    g.add_argument("--format", choices=("json", "csv"), **(d or {"default": None}),
                   help="machine output format")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genoq", parents=[_global_options(False)],
        description="Encode DNA sequences as quantum states on a dense statevector simulator.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = [_global_options(True)]

    p = sub.add_parser("encode", parents=common, help="encode a sequence or image as a state")
    p.add_argument("--scheme", required=True, choices=SCHEMES)
    p.add_argument("--input", help="sequence literal, FASTA text or @file")
    p.add_argument("--ref", help="reference sequence (nz22, nz23, quantig)")
    p.add_argument("--image", help="PGM image (cosine)")
    p.add_argument("--alpha", type=float, default=1.0, help="qubit budget scale in [0, 1]")
    p.add_argument("--metric", choices=entropy_encoders.METRICS, default="fisher-rao")
    p.add_argument("--smooth", type=float, default=None, help="additive smoothing epsilon")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--k", type=int, default=2, help="Pauli interaction order (1 or 2)")
    p.add_argument("--reps", type=int, default=2, help="Pauli feature-map repetitions")
    p.add_argument("--entangle", action="store_true", help="CNOT chain after angle embedding")
    p.add_argument("--no-phase", action="store_true", help="drop the QBWT global phase")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("sample", parents=common, help="sample measurement counts from a state dump")
    p.add_argument("--state", required=True, help="state JSON file")
    p.add_argument("--shots", type=int, default=1024)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("huffman", parents=common, help="cascade-tree Huffman codebook")
    p.add_argument("input")
    p.add_argument("--classic", action="store_true", help="textbook greedy Huffman instead")
    p.set_defaults(func=cmd_huffman)

    p = sub.add_parser("bwt", parents=common, help="Burrows-Wheeler transform")
    p.add_argument("input")
    p.set_defaults(func=cmd_bwt)

    p = sub.add_parser("ibwt", parents=common, help="inverse Burrows-Wheeler transform")
    p.add_argument("input")
    p.add_argument("--primary", type=int, default=None, help="row index of the original text")
    p.set_defaults(func=cmd_ibwt)

    p = sub.add_parser("entropy", parents=common, help="Shannon entropy of the base distribution")
    p.add_argument("input")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("divergence", parents=common, help="divergence between base distributions")
    p.add_argument("input")
    p.add_argument("ref")
    p.add_argument("--kind", required=True, choices=tuple(DIVERGENCES))
    p.add_argument("--smooth", type=float, default=None, help="additive smoothing for kl")
    p.set_defaults(func=cmd_divergence)

    p = sub.add_parser("stats", parents=common, help="split/class counts of a promoter dataset")
    p.add_argument("--input", required=True, help="CSV with id,region,start,end,strand[,sequence]")
    p.add_argument("--labels", required=True, help="CSV with id,split,class")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("qoltz", help="energy-based model harness")
    qsub = p.add_subparsers(dest="qoltz_command", required=True, metavar="ACTION")
    t = qsub.add_parser("train", parents=common, help="fit the model by exact-gradient descent")
    t.add_argument("--input", required=True, help="FASTA file, or comma-separated sequences")
    t.add_argument("--layers", type=int, default=2)
    t.add_argument("--steps", type=int, default=100)
    t.add_argument("--lr", type=float, default=0.01)
    t.add_argument("--segments", type=int, default=2)
    t.add_argument("--batch-size", type=int, default=16)
    t.add_argument("--split", type=float, default=0.8)
    t.set_defaults(func=cmd_qoltz_train)

    p = sub.add_parser("bench", parents=common, help="time classical coders over sequence lengths")
    p.add_argument("--schemes", default="huffman,bwt")
    p.add_argument("--lengths", default="256,1024,4096")
    p.add_argument("--repeats", type=int, default=5)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", parents=common, help="check the kernels against their oracles")
    p.add_argument("--only", nargs="+", choices=tuple(verify.CHECKS))
    p.set_defaults(func=cmd_verify)
    return parser


def _finish_globals(args) -> None:
    env_seed, env_cap = _env_int("GENQ_SEED"), _env_int("GENQ_MAX_QUBITS")
    if args.seed is None:
        args.seed = env_seed if env_seed is not None else 0
    if args.max_qubits is None:
        args.max_qubits = env_cap
    if args.max_qubits is not None and not 1 <= args.max_qubits <= HARD_MAX_QUBITS:
        raise UsageError(f"--max-qubits must lie in 1..{HARD_MAX_QUBITS}, got {args.max_qubits}")


def main(argv=None) -> int:
    """Entry point. Exit codes: 0 ok, 1 verification failure, 2 usage or
    validation error, 3 qubit cap exceeded."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _finish_globals(args)
        if args.max_qubits is not None:
            with qubit_cap(args.max_qubits):
                return args.func(args)
        return args.func(args)
    except CapExceededError as exc:
        print(f"genoq: error: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, GenoqError) as exc:
        print(f"genoq: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
