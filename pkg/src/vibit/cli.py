"""Command-line interface.

Exit codes: 0 success, 1 I/O failure, 2 usage or parse error, 3 domain
violation (non-unitary input, invalid distribution, and so on).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .beamsplitter import decompose, format_netlist, network_unitary
from .constants import BUILTIN_MATRICES
from .contextuality import (
    BUILTIN_HYPERGRAPHS,
    Contradiction,
    Fixpoint,
    classify_gadget,
    enumerate_two_valued_states,
    is_unital,
    parse_hypergraph,
    propagate,
)
from .errors import (
    AlphabetError,
    DimError,
    FormatError,
    InvalidDistribution,
    InvalidQuery,
    InvalidState,
    NotAContext,
    NotAProjector,
    NotUnitary,
    NumericalError,
)
from .linalg import UnitaryMatrix
from .matio import parse_matrix
from .pipeline import (
    Distribution,
    MODE_MERGE,
    MODE_MORPHISM,
    PRESET_NAMES,
    binary_pipeline,
    read_stream,
    resolve_setup,
    sample,
    write_stream,
)
from .randstats import analyze_stream
from .reports import (
    AnalysisReport,
    enumeration_report,
    gadget_report,
    propagation_report,
    unital_report,
)
from .verify import run_verify

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

_DOMAIN_ERRORS = (
    NotUnitary,
    NotAContext,
    NotAProjector,
    InvalidState,
    InvalidDistribution,
    InvalidQuery,
    DimError,
    NumericalError,
    AlphabetError,
)


class UsageError(Exception):
    pass


def _parse_probs(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad probability list {text!r}") from exc


def _parse_seed_assignments(pairs: list[str]) -> dict[str, int]:
    out: dict[str, int] = {}
    for pair in pairs:
        label, eq, value = pair.partition("=")
        if not eq or value not in ("0", "1"):
            raise UsageError(f"--set takes label=0 or label=1, got {pair!r}")
        out[label] = int(value)
    return out


# --- generate -------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.count < 0:
        raise UsageError("--count must be nonnegative")
    if args.seed < 0:
        raise UsageError("--seed must be nonnegative")
    if args.format == "bits" and args.mode == "ternary":
        raise UsageError("--format bits requires a binary mode (morphism or merge)")
    source = args.preset if args.preset else Distribution(_parse_probs(args.dist))
    if args.mode == "ternary":
        stream = sample(resolve_setup(source), args.count, args.seed)
    else:
        stream = binary_pipeline(source, args.count, args.seed, args.mode)
    write_stream(stream, args.out, args.format)
    counts = stream.counts()
    print(f"wrote {len(stream)} {stream.alphabet} symbols to {args.out}")
    print("counts: " + " ".join(f"{k}:{v}" for k, v in sorted(counts.items())))
    if stream.meta.get("dead_port_hits"):
        print(f"dead-port hits: {stream.meta['dead_port_hits']}")
    return EXIT_OK


# --- analyze ---------------------------------------------------------------


def _load_hypergraph(args):
    if args.builtin:
        try:
            return BUILTIN_HYPERGRAPHS[args.builtin](), args.builtin
        except KeyError as exc:
            raise UsageError(
                f"unknown builtin {args.builtin!r}; have {sorted(BUILTIN_HYPERGRAPHS)}"
            ) from exc
    path = Path(args.file)
    return parse_hypergraph(path.read_text()), str(path)


def cmd_analyze(args) -> int:
    h, subject = _load_hypergraph(args)
    seeds = _parse_seed_assignments(args.set or [])
    t0 = time.perf_counter()
    if args.query == "propagate":
        try:
            outcome = propagate(h, seeds)
        except KeyError as exc:
            raise UsageError(f"unknown vertex in --set: {exc}") from exc
        report = propagation_report(subject, outcome, time.perf_counter() - t0)
        if isinstance(outcome, Fixpoint):
            defs = {k: v for k, v in sorted(outcome.assignment.items())}
            print(f"fixpoint with {len(defs)} definite values: {defs}")
        else:
            print(f"contradiction ({outcome.kind}) at context {{{', '.join(outcome.context)}}}")
            print(f"derivation trace: {len(outcome.trace)} steps")
    elif args.query == "enumerate":
        states = enumerate_two_valued_states(h)
        report = enumeration_report(subject, states, time.perf_counter() - t0)
        print(f"{len(states)} total two-valued states")
    elif args.query == "gadget":
        if not args.given or not args.target:
            raise UsageError("--query gadget requires --given and --target")
        try:
            klass = classify_gadget(h, args.given, args.target)
        except KeyError as exc:
            raise UsageError(f"unknown vertex: {exc}") from exc
        report = gadget_report(subject, args.given, args.target, klass,
                               time.perf_counter() - t0)
        print(f"gadget class for {args.target} given {args.given}=1: {klass.value}")
    elif args.query == "unital":
        flag, witness = is_unital(h)
        report = unital_report(subject, flag, witness, time.perf_counter() - t0)
        missing = sorted(k for k, v in witness.items() if v is None)
        print(f"unital: {flag}" + (f" (no 1-state for: {missing})" if missing else ""))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown query {args.query!r}")
    if args.out:
        Path(args.out).write_text(report.to_json() + "\n")
        print(f"report written to {args.out}")
    return EXIT_OK


# --- decompose --------------------------------------------------------------


def cmd_decompose(args) -> int:
    if args.builtin:
        try:
            matrix = BUILTIN_MATRICES[args.builtin]
        except KeyError as exc:
            raise UsageError(
                f"unknown builtin {args.builtin!r}; have {sorted(BUILTIN_MATRICES)}"
            ) from exc
        subject = args.builtin
    else:
        matrix = parse_matrix(Path(args.file).read_text())
        subject = args.file
    net = decompose(UnitaryMatrix(matrix))
    err = float(np.max(np.abs(network_unitary(net).entries - np.asarray(matrix))))
    Path(args.out).write_text(format_netlist(net))
    print(f"decomposed {subject}: {len(net.elements)} elements -> {args.out}")
    print(f"reconstruction error {err:.3e}")
    return EXIT_OK


# --- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    results = run_verify(perturb_ux=args.perturb_ux)
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        failed += 0 if r.passed else 1
        print(f"{mark}  {r.name:<{width}}  {r.detail}")
    print(f"{len(results) - failed}/{len(results)} identity checks passed")
    return EXIT_OK if failed == 0 else 1


# --- stats -------------------------------------------------------------------


def cmd_stats(args) -> int:
    stream = read_stream(args.stream)
    expected = _parse_probs(args.expected) if args.expected else None
    report = analyze_stream(stream, expected)
    print(f"{report.alphabet} stream, n={report.n}")
    print("counts: " + " ".join(f"{k}:{v}" for k, v in sorted(report.counts.items())))
    if report.monobit_z is not None:
        print(f"monobit z = {report.monobit_z:+.4f}")
    if report.runs_z is not None:
        print(f"runs = {report.runs}, z = {report.runs_z:+.4f}")
    if report.chi_square is not None:
        print(f"chi-square = {report.chi_square:.4f} (dof {report.chi_square_dof}, "
              f"p = {report.chi_square_p:.6f})")
    for note in report.notes:
        print(f"note: {note}")
    if args.out:
        base = str(args.out)
        Path(base + ".json").write_text(report.to_json() + "\n")
        rows = ["symbol\tcount\texpected"]
        for i, key in enumerate(sorted(report.counts)):
            exp = report.expected[i] * report.n if report.expected else ""
            rows.append(f"{key}\t{report.counts[key]}\t{exp}")
        Path(base + ".tsv").write_text("\n".join(rows) + "\n")
        wrote = [base + ".json", base + ".tsv"]
        if not args.no_plot:
            from .plotting import render_stats_figure

            render_stats_figure(stream, report, base + ".png")
            wrote.append(base + ".png")
        print("wrote " + ", ".join(wrote))
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vibit",
        description="Ternary-to-binary quantum RNG simulator with contextuality "
        "certification and beam-splitter compilation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a symbol stream to a file")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=PRESET_NAMES)
    src.add_argument("--dist", metavar="P0,P1,P2")
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--mode", choices=("ternary", MODE_MORPHISM, MODE_MERGE),
                   default="ternary")
    g.add_argument("--format", choices=("ascii", "bits"), default="ascii")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="run hypergraph admissibility queries")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=sorted(BUILTIN_HYPERGRAPHS))
    src.add_argument("--file")
    a.add_argument("--query", choices=("propagate", "enumerate", "gadget", "unital"),
                   required=True)
    a.add_argument("--set", action="append", metavar="LABEL=V")
    a.add_argument("--given", help="preselected observable for gadget queries")
    a.add_argument("--target", help="classified observable for gadget queries")
    a.add_argument("--out", help="write the JSON report here")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("decompose", help="compile a unitary into a splitter netlist")
    src = d.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=sorted(BUILTIN_MATRICES))
    src.add_argument("--file", help="matrix file, one row per line")
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="run the built-in identity suite")
    v.add_argument("--perturb-ux", type=float, default=0.0,
                   help=argparse.SUPPRESS)  # test hook
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="sanity statistics for a stream file")
    s.add_argument("stream")
    s.add_argument("--expected", metavar="P,P,...")
    s.add_argument("--out", help="basename for .json/.tsv/.png outputs")
    s.add_argument("--no-plot", action="store_true")
    s.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DOMAIN_ERRORS as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
