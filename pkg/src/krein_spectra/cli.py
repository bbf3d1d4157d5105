"""Command-line front end.

Every command writes one CSV or JSON table to stdout (or ``--output``).
Exit status is 0 on success, 1 when ``verify`` finds a failing
criterion, 2 for invalid input and 3 for numerical failures; in the last
case a JSON diagnostic record is written to stderr.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import acceptance
from . import asympt as A
from . import models as md
from . import serialize
from . import specfn as F
from . import spectrum as sp
from .config import use_threads
from .errors import KreinSpectraError, NumericalError, ParameterError

MODELS = ("oscillator", "interval", "dirac", "ab", "susy")
COMMANDS = ("spectrum", "heat", "zeta", "eta", "resolvent", "poles", "graded", "verify")


@dataclass
class RunConfig:
    """Validated settings for one command."""

    command: str
    model: str = None
    params: dict = field(default_factory=dict)
    ext: float = None
    grid: dict = field(default_factory=dict)
    fmt: str = "csv"
    output: str = None
    tol: float = 1e-10
    threads: int = None
    seed: int = 0


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _range(values, kind):
    lo, hi, count = float(values[0]), float(values[1]), int(values[2])
    if count < 1:
        raise ParameterError(f"range needs a positive count, got {count}")
    if kind == "geom":
        if not (lo > 0 and hi > 0):
            raise ParameterError("t-range endpoints must be positive")
        return list(np.geomspace(lo, hi, count))
    return list(np.linspace(lo, hi, count))


def build_parser():
    parser = argparse.ArgumentParser(prog="krein-spectra",
                                     description="Spectra and spectral functions of "
                                                 "singular self-adjoint extensions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=MODELS)
    common.add_argument("--nu", type=float)
    common.add_argument("--alpha", type=float)
    common.add_argument("--kappa", type=float)
    common.add_argument("--theta", type=float, help="extension parameter (inf allowed)")
    common.add_argument("--beta", type=float, help="extension parameter (inf allowed)")
    common.add_argument("--gamma", type=float, help="boundary angle of the supercharge")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--output", help="write here instead of stdout")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--threads", type=int)
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues with brackets")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--sign", choices=("+", "-", "both"), default="both")
    p.add_argument("--method", choices=("closed", "roots"), default="closed")
    p.add_argument("--cutoff", type=float, help="all eigenvalues up to this modulus")

    p = sub.add_parser("heat", parents=[common], help="heat trace")
    p.add_argument("--t", type=_float_list, help="comma-separated times")
    p.add_argument("--t-range", nargs=3, metavar=("LO", "HI", "COUNT"))
    p.add_argument("--minus", type=float, help="subtract the trace of this extension")

    for name, text in (("zeta", "spectral zeta function"), ("eta", "spectral asymmetry")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--s", type=_float_list, help="comma-separated arguments")
        p.add_argument("--s-range", nargs=3, metavar=("LO", "HI", "COUNT"))
        if name == "zeta":
            p.add_argument("--continued", action="store_true",
                           help="continue below the convergence abscissa")
            p.add_argument("--order", type=int, default=4)

    p = sub.add_parser("resolvent", parents=[common], help="resolvent trace")
    p.add_argument("--z", type=_float_list, help="comma-separated spectral arguments")
    p.add_argument("--imag", action="store_true", help="read --z as points on the imaginary axis")

    p = sub.add_parser("poles", parents=[common], help="pole table")
    p.add_argument("--smin", type=float, default=-3.0)
    p.add_argument("--function", choices=("zeta", "eta"), default="zeta")

    p = sub.add_parser("graded", parents=[common], help="graded partition function")
    p.add_argument("--t", type=_float_list, help="comma-separated times")
    p.add_argument("--t-range", nargs=3, metavar=("LO", "HI", "COUNT"))
    p.add_argument("--norms", choices=("closed", "quadrature"), default="closed")

    p = sub.add_parser("verify", parents=[common], help="acceptance suite")
    p.add_argument("--suite", default="all", help="'all' or comma-separated criterion numbers")
    return parser


def _model(args):
    kind = args.model
    if kind is None:
        raise ParameterError(f"{args.command}: --model is required")
    if kind in ("oscillator", "interval"):
        if args.nu is None:
            raise ParameterError(f"{kind}: --nu is required")
        return (md.OscillatorHalfLine if kind == "oscillator" else md.InverseSquareInterval)(args.nu)
    if kind == "dirac":
        if (args.nu is None) == (args.alpha is None):
            raise ParameterError("dirac: give exactly one of --nu, --alpha")
        return md.DiracInterval.from_nu(args.nu) if args.alpha is None else md.DiracInterval(args.alpha)
    if kind == "ab":
        if args.kappa is None:
            raise ParameterError("ab: --kappa is required")
        return md.AharonovBohmL0(args.kappa)
    if args.alpha is None:
        raise ParameterError("susy: --alpha is required")
    return md.SusySupercharge(args.alpha)


def _extension(args, model):
    if model.kind in ("oscillator", "interval"):
        if args.theta is None:
            raise ParameterError(f"{model.kind}: --theta is required")
        return md.check_extension(model, args.theta)
    if model.kind == "susy" and args.gamma is not None:
        if args.beta is not None:
            raise ParameterError("susy: give only one of --beta, --gamma")
        return md.susy_beta(model.alpha, args.gamma)
    if args.beta is None:
        raise ParameterError(f"{model.kind}: --beta is required")
    return md.check_extension(model, args.beta)


def _grid(args, name, kind):
    listed = getattr(args, name, None)
    spanned = getattr(args, f"{name}_range", None)
    if (listed is None) == (spanned is None):
        raise ParameterError(f"{args.command}: give exactly one of --{name}, --{name}-range")
    return listed if listed is not None else _range(spanned, kind)


def config_from_args(args):
    """Validate parsed arguments into a :class:`RunConfig`."""
    if args.tol is not None and not args.tol > 0:
        raise ParameterError(f"--tol must be positive, got {args.tol}")
    if args.threads is not None and args.threads < 1:
        raise ParameterError(f"--threads must be at least 1, got {args.threads}")
    cfg = RunConfig(args.command, fmt=args.fmt, output=args.output, tol=args.tol,
                    threads=args.threads, seed=args.seed)
    if args.command == "verify":
        suite = args.suite.strip().lower()
        try:
            numbers = sorted(acceptance.CRITERIA) if suite == "all" else \
                sorted({int(v) for v in suite.split(",")})
        except ValueError:
            numbers = [0]
        if any(n not in acceptance.CRITERIA for n in numbers):
            raise ParameterError(f"unknown criterion in --suite {args.suite!r}")
        cfg.grid = {"suite": numbers}
        return cfg
    if args.command == "graded":
        if args.alpha is None:
            raise ParameterError("graded: --alpha is required")
        model = md.SusySupercharge(args.alpha)
        cfg.model, cfg.params = "susy", {"alpha": args.alpha}
        cfg.ext = _extension(args, model)
        cfg.grid = {"t": _grid(args, "t", "geom"), "norms": args.norms}
        return cfg
    model = _model(args)
    cfg.model = model.kind
    name = {"oscillator": "nu", "interval": "nu", "ab": "kappa", "susy": "alpha",
            "dirac": "nu" if args.nu is not None else "alpha"}[model.kind]
    cfg.params = {name: getattr(args, name)}
    cfg.ext = _extension(args, model)
    if args.command == "spectrum":
        if args.cutoff is None and args.count < 0:
            raise ParameterError(f"--count must be nonnegative, got {args.count}")
        cfg.grid = {"count": args.count, "sign": args.sign, "method": args.method,
                    "cutoff": args.cutoff}
    elif args.command == "heat":
        other = None if args.minus is None else md.check_extension(model, args.minus)
        cfg.grid = {"t": _grid(args, "t", "geom"), "minus": other}
    elif args.command in ("zeta", "eta"):
        cfg.grid = {"s": _grid(args, "s", "lin")}
        if args.command == "zeta":
            cfg.grid.update(continued=args.continued, order=args.order)
    elif args.command == "resolvent":
        if args.z is None:
            raise ParameterError("resolvent: --z is required")
        cfg.grid = {"z": [1j * z if args.imag else z for z in args.z]}
    elif args.command == "poles":
        cfg.grid = {"smin": args.smin, "function": args.function}
    return cfg


def _model_of(cfg):
    if cfg.model == "dirac" and "nu" in cfg.params:
        return md.DiracInterval.from_nu(cfg.params["nu"])
    cls = {"oscillator": md.OscillatorHalfLine, "interval": md.InverseSquareInterval,
           "dirac": md.DiracInterval, "ab": md.AharonovBohmL0, "susy": md.SusySupercharge}
    (value,) = cfg.params.values()
    return cls[cfg.model](value)


def _meta(cfg):
    meta = {"command": cfg.command}
    if cfg.model:
        meta["model"] = cfg.model
        meta.update({k: serialize.number(v) for k, v in cfg.params.items()})
        meta["ext"] = serialize.number(cfg.ext)
    return meta


def _compute(cfg):
    g = cfg.grid
    if cfg.command == "graded":
        alpha = cfg.params["alpha"]
        return [F.graded_partition(alpha, cfg.ext, t, cfg.tol, norms=g["norms"]) for t in g["t"]]
    model = _model_of(cfg)
    ext = cfg.ext
    if cfg.command == "spectrum":
        if g["cutoff"] is not None:
            return sp.eigenvalues_up_to(model, ext, g["cutoff"], method=g["method"])
        sign = {"+": 1, "-": -1, "both": "both"}[g["sign"]]
        return sp.first_eigenvalues(model, ext, g["count"], sign, method=g["method"])
    if cfg.command == "heat":
        if g["minus"] is None:
            return [F.heat_trace(model, ext, t, cfg.tol) for t in g["t"]]
        return [F.heat_trace_diff(model, ext, g["minus"], t, cfg.tol) for t in g["t"]]
    if cfg.command == "zeta":
        if g["continued"]:
            return [F.zeta_continued(model, ext, s, g["order"]) for s in g["s"]]
        return [F.zeta_sum(model, ext, s, cfg.tol) for s in g["s"]]
    if cfg.command == "eta":
        return [F.eta(model, ext, s, cfg.tol) for s in g["s"]]
    if cfg.command == "resolvent":
        return [F.resolvent_trace_sum(model, ext, z, cfg.tol) for z in g["z"]]
    if g["function"] == "eta":
        return A.eta_pole_table(model, ext, g["smin"])
    return A.pole_table(model, ext, g["smin"])


def _verify(cfg):
    results = acceptance.run_suite(cfg.grid["suite"], seed=cfg.seed)
    if cfg.fmt == "json":
        rows = [{"criterion": r.number, "passed": r.passed, "title": r.title,
                 "elapsed": r.elapsed,
                 "checks": [[c.name, "pass" if c.passed else "fail", c.detail]
                            for c in r.checks]} for r in results]
        text = serialize.dumps(serialize.document("verify", rows, _meta(cfg)))
    else:
        text = "".join(acceptance.report_line(r) + "\n" for r in results)
    return (0 if all(r.passed for r in results) else 1), text


def run(cfg):
    """Execute a validated configuration; return ``(status, text)``."""
    with use_threads(cfg.threads):
        if cfg.command == "verify":
            return _verify(cfg)
        result = _compute(cfg)
    return 0, serialize.emit(result, cfg.fmt, kind=cfg.command, meta=_meta(cfg))


def _write(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        status, text = run(cfg)
    except ParameterError as exc:
        print(f"krein-spectra: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        record = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        trace = getattr(exc, "trace", None)
        if trace:
            record["trace"] = [str(x) for x in trace] if isinstance(trace, (list, tuple)) \
                else str(trace)
        print(json.dumps(record), file=sys.stderr)
        return 3
    except KreinSpectraError as exc:
        print(f"krein-spectra: error: {exc}", file=sys.stderr)
        return 2
    _write(text, args.output)
    return status


if __name__ == "__main__":
    sys.exit(main())
