"""``cfa-fuse`` command line entry point.

Exit codes: 0 success, 1 configuration/validation error, 2 IO error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import CfaError
from .fusion import parse_schemes
from .io import RunManifest, load_labels, load_score_csv, write_outputs
from .matrix import TIE_POLICIES
from .pipeline import LayerConfig, run_layer

log = logging.getLogger("cfafuse")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cfa-fuse",
        description="Fuse classifier score matrices over all model subsets and keep the best fused model.",
    )
    p.add_argument("--models", nargs="+", required=True, metavar="CSV", help="one score CSV per base model")
    p.add_argument("--labels", help="ground-truth labels, one per line (class name or 0-based index)")
    p.add_argument("--weights", default="AC,WCDS,WCP", help="comma-delimited weighting schemes (default: %(default)s)")
    p.add_argument("--batch-size", type=int, default=1024)
    p.add_argument("--ties", choices=TIE_POLICIES, default="average", help="rank tie policy")
    p.add_argument("--mode", choices=("supervised", "unsupervised"), default=None,
                   help="default: supervised if --labels is given, else unsupervised")
    p.add_argument("--k", type=int, default=None, help="top-k size (default: number of models)")
    p.add_argument("--rank-ds", choices=("rank", "score"), default="rank",
                   help="RSC curves used for WCDS weights in rank fusion")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--svg", action="store_true", help="also render SVG plots")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    mode = args.mode or ("supervised" if args.labels else "unsupervised")
    try:
        schemes = parse_schemes(args.weights)
        if mode == "supervised" and not args.labels:
            raise CfaError("--mode supervised requires --labels")
        if len(set(args.models)) != len(args.models):
            raise CfaError("the same model file was given twice")
        models = []
        for path in args.models:
            m = load_score_csv(path, models[0].class_names if models else None)
            models.append(m)
        labels = None
        if args.labels and mode == "supervised":
            labels = load_labels(args.labels, models[0].class_names, models[0].n_samples)
        config = LayerConfig(
            models=models,
            labels=labels,
            schemes=schemes,
            batch_size=args.batch_size,
            tie_policy=args.ties,
            k=args.k,
            mode=mode,
            rank_ds_source=args.rank_ds,
        )
        result = run_layer(config)
    except CfaError as exc:
        print(f"cfa-fuse: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cfa-fuse: io error: {exc}", file=sys.stderr)
        return 2

    manifest = RunManifest(
        models=list(args.models),
        labels=args.labels if mode == "supervised" else None,
        schemes=[s.value for s in schemes],
        batch_size=args.batch_size,
        tie_policy=args.ties,
        mode=mode,
        k=args.k if args.k is not None else len(models),
        output_dir=args.out,
        rank_ds_source=args.rank_ds,
    )
    try:
        write_outputs(result, args.out, manifest, svg=args.svg)
    except OSError as exc:
        print(f"cfa-fuse: io error: {exc}", file=sys.stderr)
        return 2
    best = result.best
    tag = " (pseudo-accuracy)" if result.pseudo else ""
    print(f"best: {best.id} {best.accuracy:.2f}%{tag}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
