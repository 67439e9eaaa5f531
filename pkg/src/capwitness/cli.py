"""Command line front end.

    capwitness dephasing [--p 0.1,0.2] [--mu-grid 0:1:0.01] [--out fig1.csv]
    capwitness depolarizing ...
    capwitness damping [--eta-grid 0:1:0.01]
    capwitness custom channel.json [--mode shots --shots 100000 --seed 7]

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys


from . import __version__, sweeps
from .channels import load_kraus_file
from .errors import InvalidArgument, InvalidState, NumericalFailure

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3


def parse_grid(text: str) -> tuple:
    """``start:stop:step`` (inclusive) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        try:
            start, stop, step = (float(x) for x in text.split(":"))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}; use start:stop:step") from exc
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}")
        n = int(round((stop - start) / step))
        return tuple(round(start + k * step, 12) for k in range(n + 1))
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad value list {text!r}") from exc


def _common(p: argparse.ArgumentParser):
    p.add_argument("--mode", choices=("exact", "shots"), default="exact")
    p.add_argument("--shots", type=int, default=100_000, help="shots per setting (shots mode)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resamples", type=int, default=200, help="bootstrap resamples (shots mode)")
    p.add_argument("--full-search", action="store_true",
                   help="independent angles per pair and mixed families")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweep rows")
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capwitness", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dephasing", help="correlated dephasing sweep over mu")
    p.add_argument("--p", type=parse_grid, default=sweeps.DEPHASING_P)
    p.add_argument("--mu-grid", type=parse_grid, default=sweeps.unit_grid())
    _common(p)

    p = sub.add_parser("depolarizing", help="correlated depolarizing sweep over mu")
    p.add_argument("--p", type=parse_grid, default=sweeps.DEPOLARIZING_P)
    p.add_argument("--mu-grid", type=parse_grid, default=sweeps.unit_grid())
    _common(p)

    p = sub.add_parser("damping", help="fully correlated amplitude damping sweep over eta")
    p.add_argument("--eta-grid", type=parse_grid, default=sweeps.unit_grid())
    _common(p)

    p = sub.add_parser("custom", help="witness for a channel read from a Kraus JSON file")
    p.add_argument("kraus_file")
    _common(p)
    return parser


def _print_report(report, out):
    lines = [
        f"q_det {report['q_det']:.9g}",
        f"s_out {report['s_out']:.9g}",
        f"h_min {report['h_min']:.9g}",
        f"optimal_basis {report['optimal_basis']}",
        "prob_vector " + " ".join(f"{x:.9g}" for x in report["prob_vector"]),
    ]
    est = report.get("estimate")
    if est is not None:
        lines += [
            f"q_det_hat {est.q_det_hat:.9g}",
            f"ci95 {est.ci_low:.9g} {est.ci_high:.9g}",
            f"shots_per_setting {est.shots_per_setting}",
            f"seed {est.seed}",
        ]
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(args) -> int:
    common = dict(mode=args.mode, shots=args.shots, seed=args.seed, resamples=args.resamples,
                  full_search=args.full_search, jobs=args.jobs)
    if args.command == "custom":
        cfg = sweeps.SweepConfig("custom", grid=(), **common)
        ch = load_kraus_file(args.kraus_file)
        if ch.dim != 4:
            raise InvalidArgument(f"{args.kraus_file}: custom channels must act on two qubits (dim 4)")
        _print_report(sweeps.custom_report(ch, cfg), args.out)
        return EXIT_OK

    if args.command == "damping":
        cfg = sweeps.SweepConfig("damping", grid=args.eta_grid, **common)
        cols, rows = sweeps.run_damping_sweep(cfg)
    elif args.command == "dephasing":
        cfg = sweeps.SweepConfig("dephasing", p_values=args.p, grid=args.mu_grid, **common)
        cols, rows = sweeps.run_dephasing_sweep(cfg)
    else:
        cfg = sweeps.SweepConfig("depolarizing", p_values=args.p, grid=args.mu_grid, **common)
        cols, rows = sweeps.run_depolarizing_sweep(cfg)
    text = sweeps.write_csv(cfg, cols, rows, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (InvalidArgument, InvalidState) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalFailure as exc:
        print(f"numerical failure: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
