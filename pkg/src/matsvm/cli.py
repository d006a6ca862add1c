"""Command-line entry point: ``matsvm run ...``."""

import argparse
import sys
from pathlib import Path

from .bench import ExperimentConfig, emit_report, run_experiment
from .exceptions import ConfigError, DataError, MatSVMError, NumericError

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


def build_parser():
    parser = argparse.ArgumentParser(prog="matsvm", description="Matrix-SVM experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="cross-validate a model on a dataset manifest")
    run.add_argument("--manifest", required=True, type=Path)
    run.add_argument("--model", choices=["matrix", "br", "ls"], default="matrix")
    run.add_argument("--kernel", choices=["linear", "rbf"], default="rbf")
    run.add_argument("--gamma", type=float, help="RBF width p (default 0.7 multiclass, 0.3 multilabel)")
    run.add_argument("--c", type=float, default=1.0)
    run.add_argument("--folds", type=int, default=10)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--subsample", type=int, default=4000)
    run.add_argument("--tol", type=float, default=1e-5)
    run.add_argument("--max-iter", type=int, default=1000)
    run.add_argument("--parallel-folds", action="store_true")
    run.add_argument("--normalize", choices=["global", "fold"], default="global")
    run.add_argument("--drop-degenerate", action="store_true",
                     help="predict single-class training columns as constants")
    run.add_argument("--shared-gram", action="store_true",
                     help="BR only: build the Gram matrix once for all columns")
    run.add_argument("--no-warmup", dest="warmup", action="store_false")
    run.add_argument("--out", required=True, type=Path)
    run.add_argument("--format", choices=["csv", "md"], default="csv")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    config = ExperimentConfig(
        manifest=args.manifest,
        model=args.model,
        kernel=args.kernel,
        gamma=args.gamma,
        c=args.c,
        folds=args.folds,
        seed=args.seed,
        subsample=args.subsample,
        tol=args.tol,
        max_iter=args.max_iter,
        out=args.out,
        format=args.format,
        parallel_folds=args.parallel_folds,
        normalize=args.normalize,
        drop_degenerate=args.drop_degenerate,
        shared_gram=args.shared_gram,
        warmup=args.warmup,
    )
    if args.out.is_dir() or not args.out.parent.is_dir():
        print(f"config error: cannot write report to {args.out}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run_experiment(config)
        payload = emit_report(report, config.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, MatSVMError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        args.out.write_bytes(payload)
    except OSError as exc:
        print(f"config error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    agg = report.aggregate
    summary = ", ".join(f"{k}={m:.4f}±{s:.4f}" for k, (m, s) in agg.items())
    print(f"{report.dataset['name']} {config.model}/{config.kernel}: {summary}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
