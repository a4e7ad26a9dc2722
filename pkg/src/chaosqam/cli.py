"""Command-line front end: ``chaosqam {ber,constellation,theory,selftest}``."""
from __future__ import annotations

import argparse
import os
import sys

from . import analysis, harness, kernels
from .chaosmap import MapParameterError, make_map
from .harness import ExperimentError


def _p_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return (v, 1.0, v)
        if len(parts) == 3:
            start, step, stop = (float(v) for v in parts)
            return (start, step, stop)
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected start:step:stop or a single value, got {text!r}")


def _count(text: str) -> int:
    try:
        value = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value != float(text):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return value


def read_config(path: str) -> list[str]:
    """Flat ``key = value`` file -> equivalent ``--key value`` tokens."""
    tokens = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-").replace("_", "-")
            if key == "config":
                raise ValueError(f"{path}:{lineno}: nested config files are not supported")
            tokens += [f"--{key}", value]
    return tokens


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaosqam",
        description="Chaos-based 64-QAM modem: BER sweeps, constellations and theory curves.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    def common(p):
        p.add_argument("--config", help="flat 'key = value' file mirroring the flags; flags win")
        p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")

    ber = sub.add_parser("ber", help="Monte Carlo BER sweep", formatter_class=fmt)
    common(ber)
    ber.add_argument("--p", type=_p_list, default=",".join(f"{p:g}" for p in harness.DEFAULT_P_VALUES),
                     help="comma-separated control parameters")
    ber.add_argument("--ebn0", type=_grid, default=":".join(f"{v:g}" for v in harness.DEFAULT_EBN0_GRID),
                     help="Eb/N0 grid in dB as start:step:stop (stop inclusive)")
    ber.add_argument("--bits", type=_count, default=harness.DEFAULT_MIN_BITS,
                     help="minimum bits simulated per point")
    ber.add_argument("--min-errors", type=_count, default=harness.DEFAULT_MIN_ERRORS,
                     help="stop a point once this many bit errors are counted")
    ber.add_argument("--max-bits", type=_count, default=harness.DEFAULT_MAX_BITS,
                     help="bit cap per point")
    ber.add_argument("--frame", type=_count, default=harness.DEFAULT_FRAME_SYMBOLS,
                     help="symbols per rail per frame")
    ber.add_argument("--seed", type=_count, default=harness.DEFAULT_SEED, help="master seed")
    ber.add_argument("--x0", type=float, default=0.0, help="initial condition shared by TX and RX")
    ber.add_argument("--plot", help="optional SVG plot path")
    ber.add_argument("--workers", type=_count, default=1, help="points simulated concurrently")
    ber.add_argument("--quiet", action="store_true", help="suppress per-point progress on stderr")

    con = sub.add_parser("constellation", help="dump modulator output samples", formatter_class=fmt)
    common(con)
    con.add_argument("--p", type=float, default=1.0, help="control parameter")
    con.add_argument("--symbols", type=_count, default=4096, help="number of I/Q samples")
    con.add_argument("--seed", type=_count, default=harness.DEFAULT_SEED, help="random seed")
    con.add_argument("--x0", type=float, default=0.0, help="initial condition")

    th = sub.add_parser("theory", help="analytic BER curves only", formatter_class=fmt)
    common(th)
    th.add_argument("--p", type=_p_list, default=",".join(f"{p:g}" for p in harness.DEFAULT_P_VALUES),
                    help="comma-separated control parameters")
    th.add_argument("--ebn0", type=_grid, default=":".join(f"{v:g}" for v in harness.DEFAULT_EBN0_GRID),
                    help="Eb/N0 grid in dB as start:step:stop (stop inclusive)")

    st = sub.add_parser("selftest", help="noiseless and decoder-vs-ML checks", formatter_class=fmt)
    st.add_argument("--config", help="flat 'key = value' file mirroring the flags; flags win")
    st.add_argument("--trials", type=_count, default=200, help="noisy trials per (p, Eb/N0) cell")
    st.add_argument("--seed", type=_count, default=2024, help="random seed")
    return parser


def _expand_config(argv: list[str]) -> list[str]:
    """Insert config-file tokens right after the subcommand so later flags override them."""
    if not argv:
        return argv
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv[1:])
    if not known.config:
        return argv
    return [argv[0], *read_config(known.config), *argv[1:]]


def _check_writable(path: str, flag: str = "out") -> None:
    if path == "-":
        return
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
        raise OSError(f"{flag}: cannot write to {path!r}")


def _emit(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        harness.write_atomic(path, text)


def _run_ber(args) -> int:
    exp = harness.Experiment(
        p_values=args.p,
        ebn0_grid_db=args.ebn0,
        min_bits=args.bits,
        min_errors=args.min_errors,
        max_bits=args.max_bits,
        frame_symbols=args.frame,
        master_seed=args.seed,
        x0=args.x0,
    )
    _check_writable(args.out)
    if args.plot:
        _check_writable(args.plot, "plot")

    def progress(r):
        if not args.quiet:
            print(f"p={r.p:g} Eb/N0={r.ebn0_db:g} dB: {r.bit_errors}/{r.bits_simulated} "
                  f"ber={r.ber_estimate:.4g} (eq13 gap {r.gap_eq13:+.3g}, "
                  f"textbook {r.theory_textbook:.4g})", file=sys.stderr)

    records = harness.run_experiment(exp, workers=args.workers, progress=progress)
    _emit(args.out, harness.records_to_csv(records))
    if args.plot:
        harness.render_ber_plot(records, args.plot)
    return 0


def _run_constellation(args) -> int:
    make_map(args.p)
    _check_writable(args.out)
    points = harness.dump_constellation(args.p, args.symbols, args.seed, args.x0)
    _emit(args.out, harness.constellation_to_csv(points))
    return 0


def _run_theory(args) -> int:
    for p in args.p:
        make_map(p)
    grid = harness.ebn0_grid(*args.ebn0)
    _check_writable(args.out)
    lines = ["p,ebn0_db,w_min,theory_eq12,theory_eq13,theory_textbook"]
    for p in args.p:
        for e in grid:
            t = analysis.theory_point(p, e)
            lines.append(",".join(repr(float(v)) for v in (
                p, e, t.w_min, analysis.clamp_probability(t.ber_qam),
                analysis.clamp_probability(t.ber_chaos), t.ber_textbook)))
    _emit(args.out, "\n".join(lines) + "\n")
    return 0


def _run_selftest(args) -> int:
    from .selftest import run_selftest

    print(f"kernel backend: {kernels.BACKEND}")
    ok = run_selftest(trials=args.trials, seed=args.seed)
    print("selftest " + ("passed" if ok else "FAILED"))
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _expand_config(argv)
    except (OSError, ValueError) as exc:
        parser.exit(2, f"chaosqam: error: config: {exc}\n")
    args = parser.parse_args(argv)
    runners = {
        "ber": _run_ber,
        "constellation": _run_constellation,
        "theory": _run_theory,
        "selftest": _run_selftest,
    }
    try:
        return runners[args.command](args)
    except (ExperimentError, MapParameterError) as exc:
        print(f"chaosqam: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"chaosqam: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
