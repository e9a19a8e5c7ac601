"""Command-line front end.

Each subcommand forwards its resolved arguments to one function in
:mod:`hdcov.api` and prints the result as schema-versioned JSON.

Exit codes: 0 success, 1 change-point test rejected (cp-test only),
2 input error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import api

EXIT_OK, EXIT_REJECT, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _bandwidth(text: str):
    if text == "auto":
        return text
    try:
        m = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("bandwidth must be a nonnegative integer or 'auto'") from None
    if m < 0:
        raise argparse.ArgumentTypeError("bandwidth must be nonnegative")
    return m


def _add_kernel(p) -> None:
    p.add_argument("--kernel", choices=["bartlett", "truncated"], default="bartlett", help="lag window for the long-run variance")
    p.add_argument("--bandwidth", type=_bandwidth, default="auto", help="lag truncation m, or 'auto' for floor(n^(1/3))")


def _add_weights(p) -> None:
    p.add_argument(
        "--weights",
        help="JSON (inline or file): an array or sparse {index: value} map used for v = w, "
        'or {"v": ..., "w": ...}; default uniform 1/d',
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hdcov", description="Bilinear forms of high-dimensional covariance matrices")
    parser.add_argument("--output", "-o", help="write the JSON result here instead of stdout")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default: available parallelism)")
    parser.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="draw a panel from a linear-process coefficient model")
    p.add_argument("--model", required=True, help="coefficient model JSON (inline or file)")
    p.add_argument("--innov", help="innovation spec JSON (default Gaussian, sigma2 = 1)")
    p.add_argument("--n", type=int, required=True, help="number of observations")
    p.add_argument("--seed", type=int, required=True, help="RNG seed (required; no clock seeding)")
    p.add_argument("--replication", type=int, default=0, help="stream index within the seed")
    p.add_argument("--out", required=True, help="panel CSV to write")

    p = sub.add_parser("cov", help="sample covariance matrix, or v'Sigma_hat w with --weights")
    p.add_argument("panel", help="panel CSV, one row per time point")
    p.add_argument("--weights", nargs=2, metavar=("V", "W"), help="two weight JSON documents")
    p.add_argument("--demean", action="store_true", help="subtract column means first")

    p = sub.add_parser("lrv", help="kernel estimate of the long-run variance alpha^2(v, w)")
    p.add_argument("panel")
    _add_weights(p)
    _add_kernel(p)
    p.add_argument("--clamp", action="store_true", help="floor a negative estimate at 0 (with a warning)")
    p.add_argument("--demean", action="store_true")

    p = sub.add_parser("cp-test", help="CUSUM test for a change in v'Sigma w")
    p.add_argument("panel", help="test sample CSV")
    p.add_argument("--mode", choices=["known", "bridge"], default="bridge", help="known in-control value or bridge statistic")
    p.add_argument("--level", type=float, default=0.05, help="significance level in (0, 1)")
    _add_weights(p)
    p.add_argument("--learning", help="change-free learning sample CSV used to estimate alpha")
    p.add_argument("--alpha", type=float, help="known normalizer alpha > 0 (instead of --learning)")
    p.add_argument("--sigma0-proj", type=float, help="in-control value v'Sigma_0 w (--mode known)")
    _add_kernel(p)
    p.add_argument("--clamp", action="store_true", help="tolerate a nonpositive learning estimate")
    p.add_argument("--demean", action="store_true")

    p = sub.add_parser("mc", help="run a Monte Carlo scenario")
    p.add_argument("scenario", help="scenario JSON (inline or file)")
    p.add_argument("--dump-csv", help="write per-replication statistics to this CSV")

    p = sub.add_parser("portfolio", help="minimum-variance (or mean-variance with --mu/--mu0) weights")
    p.add_argument("--sigma", required=True, help="covariance matrix CSV")
    p.add_argument("--mu", help="mean vector JSON")
    p.add_argument("--mu0", type=float, help="target mean")

    p = sub.add_parser("project-l1", help="soft-threshold projection to the unit l2 sphere with l1 norm c")
    p.add_argument("weights", help="vector JSON (inline or file)")
    p.add_argument("--c", type=float, required=True, help="l1 budget, at least 1")

    p = sub.add_parser("shrink", help="shrink a covariance matrix toward its grand mean times I")
    p.add_argument("--sigma", help="covariance matrix CSV")
    p.add_argument("--panel", help="panel CSV; its sample covariance is shrunk")
    p.add_argument("--weight", required=True, help="shrinkage weight in [0, 1], or 'auto' (needs --panel)")
    p.add_argument("--demean", action="store_true")
    return parser


def _dispatch(args) -> dict:
    c = args.command
    if c == "simulate":
        return api.simulate(args.model, args.n, args.seed, args.out, args.innov, args.replication)
    if c == "cov":
        return api.cov(args.panel, args.weights, args.demean)
    if c == "lrv":
        return api.lrv(args.panel, args.weights, args.kernel, args.bandwidth, args.clamp, args.demean)
    if c == "cp-test":
        return api.cp_test(
            args.panel,
            args.mode,
            args.level,
            args.weights,
            args.learning,
            args.kernel,
            args.bandwidth,
            args.alpha,
            args.sigma0_proj,
            args.clamp,
            args.demean,
        )
    if c == "mc":
        return api.mc(args.scenario, args.threads, args.dump_csv)
    if c == "portfolio":
        return api.portfolio(args.sigma, args.mu, args.mu0)
    if c == "project-l1":
        return api.project_l1(args.weights, args.c)
    return api.shrink(args.weight, args.sigma, args.panel, args.demean)


def _emit(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if path:
        with open(path, "w") as fh:
            print(text, file=fh)
    else:
        print(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    config = {k: v for k, v in vars(args).items() if k not in ("output", "verbose")}
    try:
        result = _dispatch(args)
    except api.NUMERIC_ERRORS as exc:
        print(f"hdcov: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except api.INPUT_ERRORS as exc:
        print(f"hdcov: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit({"schema_version": api.SCHEMA_VERSION, "command": args.command, "config": config, "result": result}, args.output)
    if args.command == "cp-test" and result.get("reject"):
        return EXIT_REJECT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
