"""Command-line front end.

Every command accepts long-form flags only. ``--config file.json`` supplies
defaults whose keys mirror the flag names (``"s0"``, ``"c-list"``, ...);
flags given on the command line win. ``CUBLAT_OUTPUT`` sets the default
output format.

Exit status is 0 on success, 2 for bad arguments or parameters, 1 when a
computation fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from fractions import Fraction

from . import experiments
from .analytic import analytic_price
from .cubature import cubature_single_step_price, cubature_terminal_levels
from .experiments import SweepReport, SweepRow, fmt
from .lattice import crr_price, price_tree
from .params import ExerciseStyle, MarketParams, ModelKind, OptionSpec, ParameterError

COMMANDS = ("price", "cubature", "sweep-n", "sweep-c", "martingale", "american-compare")
OUTPUTS = ("text", "csv", "json")
DEFAULT_C_GRID = "1,1.5,2,3,4,5,10,20,30"

DEFAULTS = {
    "model": "bs",
    "style": "eu",
    "type": "call",
    "n": 252,
    "c": 3.0,
    "s0": None,
    "k": None,
    "r": None,
    "sigma": None,
    "t": None,
    "n_list": None,
    "c_list": None,
    "output": None,
    "output_path": None,
}

# library field -> flag it came from
_FLAG_OF = {
    "underlying": "s0",
    "rate": "r",
    "volatility": "sigma",
    "maturity": "t",
    "strike": "k",
    "kind": "type",
}

# which market/contract flags each command needs
_NEEDS = {
    "price": ("s0", "k", "r", "sigma", "t"),
    "cubature": ("s0", "k", "r", "sigma", "t"),
    "sweep-n": ("s0", "k", "r", "sigma", "t"),
    "sweep-c": ("s0", "k", "r", "sigma", "t"),
    "martingale": ("r", "sigma", "t"),
    "american-compare": ("s0", "k", "r", "sigma", "t"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _number(text: str) -> float:
    # accepts "1.5" and "3/2"
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def parse_grid(text, cast=float) -> list:
    """Comma list with optional inclusive ranges: ``"1,2,10:20:5"``."""
    if isinstance(text, (list, tuple)):
        return [cast(_number(str(v))) for v in text]
    values = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            bits = [_number(b) for b in part.split(":")]
            if len(bits) not in (2, 3) or (len(bits) == 3 and bits[2] <= 0):
                raise argparse.ArgumentTypeError(f"bad range {part!r}")
            start, stop = bits[0], bits[1]
            step = bits[2] if len(bits) == 3 else 1.0
            count = int((stop - start) / step + 1e-9) + 1
            values.extend(cast(start + i * step) for i in range(max(count, 0)))
        else:
            values.append(cast(_number(part)))
    if not values:
        raise argparse.ArgumentTypeError("empty grid")
    return values


def _int_grid(text):
    def to_int(x):
        if float(x) != int(x):
            raise argparse.ArgumentTypeError(f"step count must be an integer, got {x}")
        return int(x)
    return parse_grid(text, to_int)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    sup = argparse.SUPPRESS
    common.add_argument("--config", default=sup, help="JSON file of flag defaults")
    common.add_argument("--model", default=sup, choices=["bs", "black", "black_scholes"])
    common.add_argument("--style", default=sup, choices=["eu", "european", "am", "american"])
    common.add_argument("--type", default=sup, choices=["call", "put"])
    common.add_argument("--s0", "--f0", dest="s0", type=_number, default=sup,
                        help="spot (Black-Scholes) or forward (Black)")
    common.add_argument("--k", type=_number, default=sup, help="strike")
    common.add_argument("--r", type=_number, default=sup, help="continuously compounded rate")
    common.add_argument("--sigma", type=_number, default=sup, help="volatility")
    common.add_argument("--t", type=_number, default=sup, help="maturity in years")
    common.add_argument("--n", type=int, default=sup, help="lattice steps (default 252)")
    common.add_argument("--c", type=_number, default=sup, help="spread parameter (default 3)")
    common.add_argument("--n-list", dest="n_list", type=_int_grid, default=sup,
                        help="step grid, e.g. 1:126 or 10,50,252")
    common.add_argument("--c-list", dest="c_list", type=parse_grid, default=sup,
                        help=f"spread grid, e.g. {DEFAULT_C_GRID}")
    common.add_argument("--output", default=sup, choices=OUTPUTS)
    common.add_argument("--output-path", dest="output_path", default=sup)

    parser = _Parser(prog="cublat", description="Cubature trinomial lattice option pricer")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    helps = {
        "price": "price one option on the lattice and in closed form",
        "cubature": "single-period three-point cubature price",
        "sweep-n": "European lattice error over step counts",
        "sweep-c": "European lattice error over spread values",
        "martingale": "one-step martingale gap over spread values",
        "american-compare": "American trinomial vs CRR over step counts",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], allow_abbrev=False)
    return parser


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise UsageError(f"--config: cannot read {path}: {err}") from None
    if not isinstance(raw, dict):
        raise UsageError("--config: top level must be an object")
    cfg = {}
    for key, value in raw.items():
        name = key.lstrip("-").replace("-", "_")
        if name == "f0":
            name = "s0"
        if name not in DEFAULTS:
            raise UsageError(f"--config: unknown key {key!r}")
        try:
            if name in ("n_list",):
                value = _int_grid(value)
            elif name == "c_list":
                value = parse_grid(value)
            elif name in ("s0", "k", "r", "sigma", "t", "c"):
                value = _number(str(value))
            elif name == "n":
                value = int(value)
        except (argparse.ArgumentTypeError, ValueError) as err:
            raise UsageError(f"--config: {key}: {err}") from None
        cfg[name] = value
    return cfg


def resolve(argv) -> dict:
    """Parse ``argv`` and merge built-in defaults, config file and flags."""
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command", None)
    if command is None:
        raise UsageError(f"missing command (one of {', '.join(COMMANDS)})")
    cfg = dict(DEFAULTS)
    cfg["output"] = os.environ.get("CUBLAT_OUTPUT") or "text"
    if "config" in ns:
        cfg.update(_load_config(ns.pop("config")))
    cfg.update(ns)
    cfg["command"] = command
    if cfg["output"] not in OUTPUTS:
        raise UsageError(f"--output: expected one of {', '.join(OUTPUTS)}, got {cfg['output']!r}")
    missing = [f"--{k}" for k in _NEEDS[command] if cfg[k] is None]
    if missing:
        raise UsageError(f"{command}: missing required flag(s) {' '.join(missing)}")
    return cfg


def _market(cfg) -> MarketParams:
    s0 = 100.0 if cfg["s0"] is None else cfg["s0"]
    return MarketParams(s0, cfg["r"], cfg["sigma"], cfg["t"])


def _option(cfg, style=None) -> OptionSpec:
    return OptionSpec(cfg["type"], style or cfg["style"], cfg["k"])


def _price(cfg):
    model = ModelKind.parse(cfg["model"])
    params, option = _market(cfg), _option(cfg)
    n, c = cfg["n"], cfg["c"]
    tree = price_tree(model, params, option, n, c)
    euro = OptionSpec(option.kind, ExerciseStyle.EUROPEAN, option.strike)
    exact = analytic_price(model, params, euro)
    extra = {}
    if option.style is ExerciseStyle.AMERICAN and model is ModelKind.BLACK_SCHOLES:
        extra["crr_price"] = crr_price(params, option, n)
    row = SweepRow(n, tree, exact, extra=extra)
    meta = {"sweep": "price", "model": model.value, "params": asdict(params),
            "option": {"kind": option.kind.value, "style": option.style.value,
                       "strike": option.strike}, "n": n, "c": c}
    report = SweepReport(meta, [row])

    label = "Black" if model is ModelKind.BLACK else "Black-Scholes"
    if option.style is ExerciseStyle.AMERICAN:
        label = f"European {label}" + (" (lower bound)" if not option.is_call else "")
    lines = [
        f"model: {model.value}  {option.style.value} {option.kind.value}  K={option.strike:g}",
        f"trinomial price (n={n}, c={c:g}): {tree:.10f}",
        f"{label} price: {exact:.10f}",
        f"abs error: {row.abs_error:.10f}",
    ]
    if "crr_price" in extra:
        lines.append(f"CRR price (n={n}): {extra['crr_price']:.10f}")
    return report, "\n".join(lines) + "\n"


def _cubature(cfg):
    model = ModelKind.parse(cfg["model"])
    params, option = _market(cfg), _option(cfg, ExerciseStyle.EUROPEAN)
    levels = cubature_terminal_levels(model, params)
    price = cubature_single_step_price(model, params, option)
    exact = analytic_price(model, params, option)
    extra = {f"level_{k}": float(v) for k, v in enumerate(levels, start=1)}
    row = SweepRow(params.maturity, price, exact, extra=extra)
    meta = {"sweep": "cubature", "model": model.value, "params": asdict(params),
            "option": {"kind": option.kind.value, "style": "european", "strike": option.strike}}
    lines = [f"terminal levels: {', '.join(fmt(v) for v in levels)}",
             f"cubature price: {price:.10f}",
             f"analytic price: {exact:.10f}",
             f"abs error: {row.abs_error:.10f}"]
    return SweepReport(meta, [row]), "\n".join(lines) + "\n"


def _dispatch(cfg):
    command = cfg["command"]
    if command == "price":
        return _price(cfg)
    if command == "cubature":
        return _cubature(cfg)
    model = ModelKind.parse(cfg["model"])
    params = _market(cfg)
    c_grid = cfg["c_list"] or parse_grid(DEFAULT_C_GRID)
    if command == "sweep-n":
        n_grid = cfg["n_list"] or list(range(1, cfg["n"] + 1))
        report = experiments.sweep_n(model, params, _option(cfg, ExerciseStyle.EUROPEAN),
                                     n_grid, cfg["c"])
    elif command == "sweep-c":
        report = experiments.sweep_c(model, params, _option(cfg, ExerciseStyle.EUROPEAN),
                                     c_grid, cfg["n"])
    elif command == "martingale":
        report = experiments.martingale_table(params, c_grid, cfg["n"], model)
    else:
        n_grid = cfg["n_list"] or list(range(1, 127))
        report = experiments.american_compare(params, _option(cfg, ExerciseStyle.AMERICAN),
                                              n_grid, cfg["c"])
    return report, report.to_text()


def _error_message(err: ParameterError) -> str:
    flag = _FLAG_OF.get(err.field, err.field)
    detail = str(err).split(": ", 1)[-1]
    return f"--{flag.replace('_', '-')} ({err.field}): {detail}" if flag != err.field \
        else f"{err.field}: {detail}"


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    err = sys.stderr
    try:
        cfg = resolve(argv)
        report, text = _dispatch(cfg)
    except UsageError as exc:
        print(f"cublat: error: {exc}", file=err)
        return 2
    except ParameterError as exc:
        print(f"cublat: error: {_error_message(exc)}", file=err)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ArithmeticError, ValueError) as exc:
        print(f"cublat: computation failed: {exc}", file=err)
        return 1

    if cfg["output"] == "csv":
        out = report.to_csv()
    elif cfg["output"] == "json":
        out = report.to_json()
    else:
        out = text
    if cfg["output_path"]:
        try:
            with open(cfg["output_path"], "w", newline="") as fh:
                fh.write(out)
        except OSError as exc:
            print(f"cublat: cannot write {cfg['output_path']}: {exc}", file=err)
            return 1
    else:
        sys.stdout.write(out)
    return 0


def main() -> None:
    sys.exit(run())
