"""Command-line entry point.

    giant-anatomy sample  --model contiguous --n 1000 --lambda 2 --seed 7 --output g.txt
    giant-anatomy anatomy g.txt
    giant-anatomy cola    --n 10000 --lambda 2 --reps 200 --seed 1
    giant-anatomy theory  --n 100000 --lambda 2 --reps 200 --seed 1
    giant-anatomy compare --n 100000 --lambda 2 --reps 200 --seed 1

Exit status: 0 on a pass verdict, 1 on fail, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import sys
from dataclasses import asdict

from . import stats
from .direct import extract_anatomy
from .dists import RngStream
from .graph import read_edgelist, write_edgelist
from .scalar_math import ModelParams

COMMANDS = ("sample", "anatomy", "cola", "theory", "compare")
# keeps the second dataset of `compare` on streams disjoint from the first
COMPARE_SEED_OFFSET = 1_000_003


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="giant-anatomy", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, reps=True):
        p.add_argument("--n", type=int, default=100_000)
        p.add_argument("--lambda", dest="lam", type=float, default=2.0)
        p.add_argument("--seed", type=int, default=0)
        if reps:
            p.add_argument("--reps", type=int, default=200)
        p.add_argument("--output", default="-", help="output path, '-' for stdout")

    def model_flags(p, default_model="contiguous", default_simple=False):
        p.add_argument("--model", choices=stats.MODELS, default=default_model)
        p.add_argument("--simple", action=argparse.BooleanOptionalAction, default=default_simple)
        p.add_argument("--parity", choices=("reject", "selfloop"), default="reject")

    p = sub.add_parser("sample", help="emit one graph as an edge list plus an anatomy sidecar")
    common(p, reps=False)
    model_flags(p)
    p.add_argument("--format", choices=("edgelist",), default="edgelist")
    p.add_argument("--sidecar", default=None,
                   help="anatomy JSON path (default: OUTPUT.anatomy.json when OUTPUT is a file)")

    p = sub.add_parser("anatomy", help="summarize the giant of an edge-list file")
    p.add_argument("input", help="edge-list path, '-' for stdin")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default="-")

    p = sub.add_parser("cola", help="run the cut-off line algorithm, emit tau per run as CSV")
    common(p)
    p.add_argument("--format", choices=("csv",), default="csv")

    p = sub.add_parser("theory", help="Monte-Carlo means against closed-form predictions")
    common(p)
    model_flags(p)
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--dataset", default=None, help="also write the per-replicate CSV here")

    p = sub.add_parser("compare", help="two-sample comparison of two pipelines")
    common(p)
    model_flags(p, default_simple=True)
    p.add_argument("--against", choices=stats.MODELS, default="direct")
    p.add_argument("--lambda-b", dest="lam_b", type=float, default=None)
    p.add_argument("--significance", type=float, default=0.001)
    p.add_argument("--format", choices=("json",), default="json")
    return ap


@contextlib.contextmanager
def _open_out(path):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _dump_json(obj, path):
    with _open_out(path) as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def summary_json(summary) -> dict:
    return {"schema_version": stats.SCHEMA_VERSION, **asdict(summary)}


def _validate(ap, args):
    if args.command == "anatomy":
        return
    if not args.lam > 1:
        ap.error("--lambda must be > 1")
    if args.n < 10:
        ap.error("--n must be >= 10")
    if getattr(args, "reps", 1) < 1:
        ap.error("--reps must be >= 1")
    if getattr(args, "model", None) == "cloning" and args.simple:
        ap.error("--model cloning produces multigraphs; --simple is not allowed")
    if args.command == "compare":
        if args.against == "cloning" and args.simple:
            ap.error("--against cloning produces multigraphs; use --no-simple")
        if args.reps < 50:
            ap.error("compare needs --reps >= 50")
        if args.lam_b is not None and not args.lam_b > 1:
            ap.error("--lambda-b must be > 1")


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _validate(ap, args)

    if args.command == "sample":
        from .contiguous import sample_giant

        spec = stats.SamplerSpec(args.model, args.n, args.lam, args.simple, args.parity)
        stream = RngStream(args.seed, 0)
        if spec.model == "contiguous":
            graph, anatomy = sample_giant(stream, spec.params, simple=spec.simple, parity=spec.parity)
        else:
            anatomy = stats.sample_anatomy(spec, stream)
            graph = anatomy.giant
        with _open_out(args.output) as fh:
            write_edgelist(graph, fh)
        sidecar = args.sidecar
        if sidecar is None and args.output != "-":
            sidecar = args.output + ".anatomy.json"
        if sidecar:
            _dump_json(summary_json(stats.summarize(anatomy)), sidecar)
        return 0

    if args.command == "anatomy":
        if args.input == "-":
            g = read_edgelist(sys.stdin)
        else:
            with open(args.input) as fh:
                g = read_edgelist(fh)
        summary = stats.summarize(extract_anatomy(g))
        if args.format == "json":
            _dump_json(summary_json(summary), args.output)
        else:
            with _open_out(args.output) as fh:
                stats.write_csv([summary], fh)
        return 0

    if args.command == "cola":
        taus = stats.cola_taus(args.n, args.lam, args.reps, args.seed)
        with _open_out(args.output) as fh:
            fh.write("run,tau\n")
            for i, t in enumerate(taus):
                fh.write(f"{i},{float(t)!r}\n")
        return 0

    if args.command == "theory":
        spec = stats.SamplerSpec(args.model, args.n, args.lam, args.simple, args.parity)
        data = stats.monte_carlo(spec, args.reps, args.seed)
        if args.dataset:
            with open(args.dataset, "w", newline="") as fh:
                stats.write_csv(data, fh)
        report = stats.theory_check(data, spec.params)
        _dump_json(report, args.output)
        return 0 if report["verdict"] == "pass" else 1

    spec_a = stats.SamplerSpec(args.model, args.n, args.lam, args.simple, args.parity)
    lam_b = args.lam if args.lam_b is None else args.lam_b
    spec_b = stats.SamplerSpec(args.against, args.n, lam_b,
                               args.simple and args.against != "direct", args.parity)
    data_a = stats.monte_carlo(spec_a, args.reps, args.seed)
    data_b = stats.monte_carlo(spec_b, args.reps, args.seed + COMPARE_SEED_OFFSET)
    report = stats.compare(data_a, data_b, args.significance)
    report["a"] = asdict(spec_a)
    report["b"] = asdict(spec_b)
    _dump_json(report, args.output)
    return 0 if report["verdict"] == "pass" else 1


def main() -> None:
    sys.exit(run())
