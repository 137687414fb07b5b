"""Command-line front end: build, query, verify, stats and bench.

Exit codes: 0 success, 1 internal error, 2 input error, 3 capability/mode
error, 4 verification divergence. All stdout output is deterministic for a
fixed seed; timings go to stderr.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import figures, oracle, workloads
from .alphabet import get_alphabet
from .error_tree import (DICTIONARY, TEXT, build_dictionary_index,
                         build_text_index, growth_ratio, stats)
from .errors import (CapabilityError, ErrorTreeError, InputError, ModeError,
                     ParameterError, PersistenceError)
from .persistence import load, save
from .query import (query_edit, query_hamming, query_text_edit,
                    query_text_hamming, query_text_wildcard, query_wildcard)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_CAPABILITY = 3
EXIT_DIVERGENCE = 4


def read_dictionary_file(path: Path) -> list[str]:
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    strings = [line.strip() for line in lines if line.strip()]
    if not strings:
        raise InputError(f"{path}: no strings")
    return strings


def read_text_file(path: Path) -> str:
    """Raw symbol text; FASTA headers are stripped and records concatenated."""
    try:
        raw = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    pieces = []
    for line in raw.splitlines():
        if line.startswith(">"):
            continue
        pieces.append(line.strip())
    text = "".join(pieces)
    if not text:
        raise InputError(f"{path}: empty text")
    return text


def _emit(record: dict, as_json: bool, text_form: str) -> None:
    if as_json:
        print(json.dumps(record, sort_keys=True))
    else:
        print(text_form)


def _dispatch_query(index, metric: str, pattern: str, k: int):
    if index.mode == DICTIONARY:
        table = {"hamming": query_hamming, "edit": query_edit, "wildcard": query_wildcard}
    else:
        table = {"hamming": query_text_hamming, "edit": query_text_edit,
                 "wildcard": query_text_wildcard}
    return table[metric](index, pattern, k)


def _dispatch_oracle(index, metric: str, pattern: str, k: int):
    if index.mode == DICTIONARY:
        strings = [s.data for s in index.sequences]
        if metric == "hamming":
            return oracle.scan_dict_hamming(strings, pattern, k)
        if metric == "edit":
            return oracle.scan_dict_edit(strings, pattern, k)
        return oracle.scan_wildcard_dict(strings, pattern, 0, index.alphabet.wildcard)
    text = index.text
    if metric == "hamming":
        return oracle.scan_text_hamming(text, pattern, k)
    if metric == "edit":
        return oracle.scan_text_edit(text, pattern, k)
    return oracle.scan_wildcard_text(text, pattern, 0, index.alphabet.wildcard)


def cmd_build(args) -> int:
    alphabet = get_alphabet(args.alphabet)
    path = Path(args.input)
    if not path.exists():
        raise InputError(f"input file {path} does not exist")
    t0 = time.perf_counter()
    if args.mode == DICTIONARY:
        strings = read_dictionary_file(path)
        index = build_dictionary_index(strings, args.k, alphabet, indels=not args.no_indels)
    else:
        if args.m is None:
            raise ParameterError("text mode requires --m")
        text = read_text_file(path)
        index = build_text_index(text, args.m, args.k, alphabet, indels=not args.no_indels)
    elapsed = time.perf_counter() - t0
    n_bytes = save(index, args.index)
    st = stats(index)
    _emit(
        {"command": "build", "mode": index.mode, "k": index.k, "m": index.m,
         "sequences": st.n_sequences, "kst_nodes": st.kst_nodes,
         "trie_nodes": st.trie_nodes, "table_entries": st.total_entries,
         "image_bytes": n_bytes},
        args.json,
        f"built {index.mode} index: k={index.k} sequences={st.n_sequences} "
        f"kst_nodes={st.kst_nodes} trie_nodes={st.trie_nodes} "
        f"table_entries={st.total_entries} image_bytes={n_bytes}",
    )
    print(f"build time: {elapsed:.3f}s", file=sys.stderr)
    return EXIT_OK


def _patterns_from_args(args) -> list[str]:
    if args.pattern is not None:
        return [args.pattern]
    if args.patterns_file is not None:
        path = Path(args.patterns_file)
        if not path.exists():
            raise InputError(f"patterns file {path} does not exist")
        return read_dictionary_file(path)
    raise ParameterError("query needs --pattern or --patterns-file")


def cmd_query(args) -> int:
    index = load(args.index)
    for pattern in _patterns_from_args(args):
        results = sorted(_dispatch_query(index, args.metric, pattern, args.k))
        for r in results:
            _emit({"pattern": pattern, "subject": r.subject, "distance": r.distance,
                   "kind": r.kind}, args.json, f"{r.subject}\t{r.distance}\t{r.kind}")
    return EXIT_OK


def cmd_verify(args) -> int:
    index = load(args.index)
    rng = __import__("random").Random(args.seed)
    if index.mode == DICTIONARY:
        bases = [s.data for s in index.sequences]
        length = None
    else:
        bases = [index.text]
        length = index.m
    patterns = workloads.pattern_batch(rng, bases, args.samples, args.k,
                                       args.metric, index.alphabet, length)
    for i, pattern in enumerate(patterns):
        got = {(r.subject, r.distance) for r in _dispatch_query(index, args.metric, pattern, args.k)}
        want = {(r.subject, r.distance) for r in _dispatch_oracle(index, args.metric, pattern, args.k)}
        if got != want:
            missing = sorted(want - got)
            spurious = sorted(got - want)
            _emit({"command": "verify", "status": "DIVERGENCE", "sample": i,
                   "pattern": pattern, "missing": missing, "spurious": spurious},
                  args.json,
                  f"DIVERGENCE sample={i} pattern={pattern} missing={missing} spurious={spurious}")
            return EXIT_DIVERGENCE
    _emit({"command": "verify", "status": "PASS", "samples": args.samples,
           "metric": args.metric, "k": args.k, "seed": args.seed},
          args.json,
          f"PASS samples={args.samples} metric={args.metric} k={args.k} seed={args.seed}")
    return EXIT_OK


def cmd_stats(args) -> int:
    index = load(args.index)
    st = stats(index)
    ratio = growth_ratio(st, index.alphabet.size)
    record = st.as_dict()
    record["growth_ratio"] = round(ratio, 6)
    lines = [f"{key}={value}" for key, value in sorted(record.items())]
    _emit(record, args.json, "\n".join(lines))
    if args.figures:
        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        fig = figures.save_table_profile(st, outdir / "table_profile.png")
        print(f"figure: {fig}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    index = load(args.index)
    rng = __import__("random").Random(args.seed)
    if index.mode == DICTIONARY:
        bases = [s.data for s in index.sequences]
        length = None
    else:
        bases = [index.text]
        length = index.m
    patterns = workloads.pattern_batch(rng, bases, args.samples, args.k,
                                       args.metric, index.alphabet, length)
    print("phase,metric,k,queries,median_us,p95_us,total_ms")
    if not patterns:
        return EXIT_OK
    idx_lat, ora_lat = [], []
    for pattern in patterns:
        t0 = time.perf_counter()
        _dispatch_query(index, args.metric, pattern, args.k)
        idx_lat.append((time.perf_counter() - t0) * 1e6)
    for pattern in patterns:
        t0 = time.perf_counter()
        _dispatch_oracle(index, args.metric, pattern, args.k)
        ora_lat.append((time.perf_counter() - t0) * 1e6)

    def row(phase: str, lat: list[float]) -> None:
        med = statistics.median(lat)
        p95 = sorted(lat)[max(0, int(len(lat) * 0.95) - 1)]
        print(f"{phase},{args.metric},{args.k},{len(lat)},{med:.1f},{p95:.1f},{sum(lat) / 1e3:.2f}")

    row("index", idx_lat)
    row("oracle", ora_lat)
    if args.threads > 1:
        t0 = time.perf_counter()
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            list(pool.map(lambda p: _dispatch_query(index, args.metric, p, args.k), patterns))
        wall = (time.perf_counter() - t0) * 1e3
        print(f"index-threads{args.threads},{args.metric},{args.k},{len(patterns)},,,{wall:.2f}")
    if args.figures:
        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        fig = figures.save_latency_figure(
            idx_lat, ora_lat, outdir / "bench_latency.png",
            title=f"{args.metric} k={args.k} ({index.mode})")
        print(f"figure: {fig}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="errortree",
                                     description="error-tree approximate string matching index")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_metric=True):
        p.add_argument("--index", required=True, help="index image path")
        if with_metric:
            p.add_argument("--metric", choices=["hamming", "edit", "wildcard"],
                           default="hamming")
            p.add_argument("--k", type=int, default=1)
        p.add_argument("--json", action="store_true", help="json-lines output")

    p = sub.add_parser("build", help="build an index from a dictionary or text file")
    p.add_argument("--mode", choices=[DICTIONARY, TEXT], default=DICTIONARY)
    p.add_argument("--input", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--m", type=int, default=None, help="pattern length (text mode)")
    p.add_argument("--alphabet", default="dna", help="dna or ascii")
    p.add_argument("--no-indels", action="store_true",
                   help="skip the edit-distance tables")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="run one or many patterns against an index")
    common(p)
    p.add_argument("--pattern")
    p.add_argument("--patterns-file")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", help="cross-check random patterns against the oracle")
    common(p)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="table sizes and the growth ratio")
    common(p, with_metric=False)
    p.add_argument("--figures", help="directory for rendered figures")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="latency benchmark (CSV on stdout)")
    common(p)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--figures", help="directory for rendered figures")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError,) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CapabilityError, ModeError) as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (ParameterError, PersistenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ErrorTreeError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
