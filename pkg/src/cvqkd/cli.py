"""Command-line front end: ``cvqkd {rate,threshold,sweep,map,figure,sample,selftest}``."""

from __future__ import annotations

import argparse
import math
import sys

from . import mc_oracle
from .analysis import AXES, SweepSpec, run_sweep, threshold_find
from .channel import ChannelParams, SourceParams
from .errors import CVQKDError, InvalidArgument
from .figures import FIGURES, build_figure
from .rates import Protocol, key_rate
from .records import RATE_COLUMNS, OutputRecord, rate_row
from .spectrum import security_map


def _number(check, what):
    def parse(text):
        try:
            x = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
        if math.isnan(x) or not check(x):
            raise argparse.ArgumentTypeError(f"{text!r} is out of range ({what})")
        return x

    return parse


unit_interval = _number(lambda x: 0.0 <= x <= 1.0, "must lie in [0, 1]")
at_least_one = _number(lambda x: math.isfinite(x) and x >= 1.0, "must be >= 1")
non_negative = _number(lambda x: math.isfinite(x) and x >= 0.0, "must be >= 0")
positive = _number(lambda x: math.isfinite(x) and x > 0.0, "must be > 0")
PROTOCOLS = [p.value for p in Protocol]


def _int_at_least(lo):
    def parse(text):
        try:
            n = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
        if n < lo:
            raise argparse.ArgumentTypeError(f"{text!r} is out of range (must be >= {lo})")
        return n

    return parse


def _add_output(p):
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help="write to this path instead of stdout")


def _add_source(p, vs_default=1e3):
    p.add_argument("--v0", type=at_least_one, default=1.0, help="shot-noise variance V0 = 1 + beta")
    p.add_argument("--vs", type=non_negative, default=vs_default, help="signal modulation variance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvqkd",
        description="Key rates and security thresholds for thermal-state CV-QKD (shot-noise units).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="key rate at one parameter point")
    p.add_argument("--protocol", choices=PROTOCOLS, required=True)
    p.add_argument("--t", type=unit_interval, required=True, help="channel transmission")
    p.add_argument("--w", type=at_least_one, default=1.0, help="EPR (channel) noise variance")
    _add_source(p)
    _add_output(p)

    p = sub.add_parser("threshold", help="transmission above which the rate is positive")
    p.add_argument("--protocol", choices=PROTOCOLS, required=True)
    p.add_argument("--w", type=at_least_one, default=1.0)
    _add_source(p)
    _add_output(p)

    p = sub.add_parser("sweep", help="rate along one parameter axis")
    p.add_argument("--protocol", choices=PROTOCOLS, required=True)
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--steps", type=_int_at_least(2), default=101)
    p.add_argument("--scale", choices=["linear", "log"], default="linear")
    p.add_argument("--t", type=unit_interval, default=0.5)
    p.add_argument("--w", type=at_least_one, default=None, help="default 1, or the thermal variance on the f axis")
    p.add_argument("--temperature", type=positive, default=300.0, help="kelvin, f axis only")
    _add_source(p)
    _add_output(p)

    p = sub.add_parser("map", help="security classification over (frequency, transmission)")
    p.add_argument("--protocol", choices=PROTOCOLS, default="dr-hom")
    p.add_argument("--temperature", type=positive, default=300.0)
    p.add_argument("--vs", type=non_negative, default=1e8)
    p.add_argument("--w", type=at_least_one, default=None, help="override; default matches the environment")
    p.add_argument("--f-lo", type=positive, default=1e9)
    p.add_argument("--f-hi", type=positive, default=430e12)
    p.add_argument("--f-steps", type=_int_at_least(1), default=20)
    p.add_argument("--t-lo", type=unit_interval, default=0.5)
    p.add_argument("--t-hi", type=unit_interval, default=0.999)
    p.add_argument("--t-steps", type=_int_at_least(1), default=50)
    _add_output(p)

    p = sub.add_parser("figure", help="dataset for a published figure")
    p.add_argument("name", help=f"one of: {', '.join(FIGURES)}")
    _add_output(p)

    p = sub.add_parser("sample", help="Monte-Carlo quadrature samples as CSV")
    p.add_argument("--t", type=unit_interval, required=True)
    p.add_argument("--w", type=at_least_one, default=1.0)
    _add_source(p)
    p.add_argument("--n", type=_int_at_least(1), default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("selftest", help="run the built-in consistency checks")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_rate(args) -> OutputRecord:
    src, ch = SourceParams(args.vs, args.v0), ChannelParams(args.t, args.w)
    res = key_rate(args.protocol, src, ch)
    params = {"protocol": args.protocol, "t": args.t, "w": args.w, "v_0": args.v0, "v_s": args.vs}
    return OutputRecord("rate", params, RATE_COLUMNS, [rate_row("t", args.t, res)])


def cmd_threshold(args) -> OutputRecord:
    t_star = threshold_find(args.protocol, SourceParams(args.vs, args.v0), args.w)
    params = {"protocol": args.protocol, "w": args.w, "v_0": args.v0, "v_s": args.vs}
    return OutputRecord("threshold", params, ("protocol", "t_star"), [{"protocol": args.protocol, "t_star": t_star}])


def cmd_sweep(args) -> OutputRecord:
    fixed = {"t": args.t, "v_0": args.v0, "v_s": args.vs}
    if args.w is not None:
        fixed["w"] = args.w
    elif args.axis != "f":
        fixed["w"] = 1.0
    if args.axis == "f":
        fixed["temperature"] = args.temperature
    fixed.pop(args.axis, None)
    spec = SweepSpec(args.protocol, args.axis, args.lo, args.hi, args.steps, fixed=fixed, scale=args.scale)
    rows = [rate_row(r.axis, r.value, r.result) for r in run_sweep(spec)]
    params = {
        "protocol": args.protocol,
        "axis": args.axis,
        "lo": args.lo,
        "hi": args.hi,
        "steps": args.steps,
        "scale": args.scale,
        **fixed,
    }
    return OutputRecord("sweep", params, RATE_COLUMNS, rows)


def cmd_map(args) -> OutputRecord:
    import numpy as np

    if args.f_lo > args.f_hi:
        raise InvalidArgument("--f-lo must not exceed --f-hi")
    if args.t_lo > args.t_hi:
        raise InvalidArgument("--t-lo must not exceed --t-hi")
    freqs = np.geomspace(args.f_lo, args.f_hi, args.f_steps)
    ts = np.linspace(args.t_lo, args.t_hi, args.t_steps)
    cells = security_map(args.protocol, args.temperature, args.vs, list(freqs), list(ts), w=args.w)
    rows = [
        {"frequency": c.frequency, "transmission": c.transmission, "rate": c.rate, "classification": c.classification.value}
        for c in cells
    ]
    params = {
        "protocol": args.protocol,
        "temperature": args.temperature,
        "v_s": args.vs,
        "w": "thermal" if args.w is None else args.w,
        "f_lo": args.f_lo,
        "f_hi": args.f_hi,
        "f_steps": args.f_steps,
        "t_lo": args.t_lo,
        "t_hi": args.t_hi,
        "t_steps": args.t_steps,
    }
    return OutputRecord("map", params, ("frequency", "transmission", "rate", "classification"), rows)


def cmd_figure(args) -> OutputRecord:
    return build_figure(args.name)


def cmd_sample(args) -> None:
    batch = mc_oracle.sample_protocol(SourceParams(args.vs, args.v0), ChannelParams(args.t, args.w), args.n, args.seed)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            batch.to_csv(fh)
    else:
        batch.to_csv(sys.stdout)


COMMANDS = {
    "rate": cmd_rate,
    "threshold": cmd_threshold,
    "sweep": cmd_sweep,
    "map": cmd_map,
    "figure": cmd_figure,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "figure" and args.name not in FIGURES:
        parser.error(f"unknown figure {args.name!r}; valid names: {', '.join(FIGURES)}")
    if args.command == "selftest":
        from .selftest import run_selftest

        return 0 if run_selftest() else 1
    try:
        if args.command == "sample":
            cmd_sample(args)
            return 0
        record = COMMANDS[args.command](args)
    except InvalidArgument as exc:
        parser.error(str(exc))
    except CVQKDError as exc:
        print(f"cvqkd: error: {exc}", file=sys.stderr)
        return 1
    _emit(record.render(args.format), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
