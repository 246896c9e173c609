"""Parameter sweeps comparing lattice prices with their closed-form values."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

from .analytic import analytic_price, bs_price
from .lattice import (
    CUBATURE_SPREAD,
    american_price_tree,
    build_factors,
    crr_price,
    european_price_tree,
    martingale_gap,
)
from .params import ExerciseStyle, MarketParams, ModelKind, OptionSpec, ParameterError

BASE_COLUMNS = ("sweep_key", "tree_price", "analytic_price", "abs_error")


def fmt(x: float) -> str:
    """12 significant digits, enough to round-trip to ~5e-12 relative."""
    return format(float(x), ".12g")


@dataclass
class SweepRow:
    sweep_key: float
    tree_price: float
    analytic_price: float
    abs_error: float = field(init=False)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.abs_error = abs(self.tree_price - self.analytic_price)


@dataclass
class SweepReport:
    metadata: dict
    rows: list

    def __post_init__(self):
        keys = [row.sweep_key for row in self.rows]
        if keys != sorted(set(keys)):
            raise ValueError("rows must be strictly ascending in sweep_key")

    @property
    def extra_columns(self) -> list:
        names = []
        for row in self.rows:
            names.extend(k for k in row.extra if k not in names)
        return names

    def column(self, name: str) -> list:
        if name in BASE_COLUMNS:
            return [getattr(row, name) for row in self.rows]
        return [row.extra.get(name, math.nan) for row in self.rows]

    def to_csv(self) -> str:
        extras = self.extra_columns
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([*BASE_COLUMNS, *extras])
        for row in self.rows:
            values = [row.sweep_key, row.tree_price, row.analytic_price, row.abs_error]
            values += [row.extra.get(name, math.nan) for name in extras]
            writer.writerow([fmt(v) for v in values])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [{**{k: v for k, v in asdict(row).items() if k != "extra"}, **row.extra}
                for row in self.rows]
        return json.dumps({"metadata": self.metadata, "rows": rows}, indent=2) + "\n"

    def to_text(self) -> str:
        title = self.metadata.get("sweep", "sweep")
        lines = [f"# {title}"]
        lines += [f"# {k}: {v}" for k, v in self.metadata.items() if k != "sweep"]
        cols = [*BASE_COLUMNS, *self.extra_columns]
        lines.append("  ".join(f"{c:>16}" for c in cols))
        for i in range(len(self.rows)):
            lines.append("  ".join(f"{fmt(self.column(c)[i]):>16}" for c in cols))
        return "\n".join(lines) + "\n"


def read_csv(text: str) -> list:
    """Parse a report CSV back into dicts of floats."""
    return [{k: float(v) for k, v in rec.items()} for rec in csv.DictReader(io.StringIO(text))]


def _describe(model, params, option=None, **settings) -> dict:
    meta = {"model": ModelKind.parse(model).value, "params": asdict(params)}
    if option is not None:
        meta["option"] = {"kind": option.kind.value, "style": option.style.value,
                          "strike": option.strike}
    meta.update(settings)
    return meta


def _ascending(values: Iterable, name: str, cast) -> list:
    values = list(values)
    if not values:
        raise ParameterError(name, "sweep grid must not be empty")
    return sorted({cast(v) for v in values})


def _annotate(err: ParameterError, where: str) -> ParameterError:
    return ParameterError(err.field, f"{str(err).split(': ', 1)[-1]} (at {where})")


def _steps(n_values):
    for n in n_values:
        if isinstance(n, float) and not n.is_integer():
            raise ParameterError("n", f"step count must be an integer, got {n}")
    return _ascending(n_values, "n_values", int)


def sweep_n(model, params: MarketParams, option: OptionSpec, n_values,
            c: float = CUBATURE_SPREAD) -> SweepReport:
    """European tree price against the closed form for each step count."""
    model = ModelKind.parse(model)
    if option.style is not ExerciseStyle.EUROPEAN:
        raise ParameterError("style", "sweep_n needs a european option")
    exact = analytic_price(model, params, option)
    rows = []
    for n in _steps(n_values):
        try:
            tree = european_price_tree(model, params, option, n, c)
        except ParameterError as err:
            raise _annotate(err, f"n={n}") from err
        rows.append(SweepRow(n, tree, exact))
    return SweepReport(_describe(model, params, option, sweep="sweep-n", c=c), rows)


def sweep_c(model, params: MarketParams, option: OptionSpec, c_values,
            n: int = 252) -> SweepReport:
    """European tree price against the closed form for each spread ``c``."""
    model = ModelKind.parse(model)
    if option.style is not ExerciseStyle.EUROPEAN:
        raise ParameterError("style", "sweep_c needs a european option")
    exact = analytic_price(model, params, option)
    rows = []
    for c in _ascending(c_values, "c_values", float):
        try:
            tree = european_price_tree(model, params, option, n, c)
        except ParameterError as err:
            raise _annotate(err, f"c={c}") from err
        rows.append(SweepRow(c, tree, exact, extra={"p_u": 1.0 / (2.0 * c)}))
    return SweepReport(_describe(model, params, option, sweep="sweep-c", n=n), rows)


def martingale_table(params: MarketParams, c_values, n: int = 252,
                     model=ModelKind.BLACK_SCHOLES) -> SweepReport:
    """One-step martingale gap per spread ``c``.

    Price columns are zero; the gap lives in the ``martingale_gap`` column.
    Under Black's model the forward itself is the martingale, so the gap is
    measured against growth rate 0.
    """
    model = ModelKind.parse(model)
    rate = 0.0 if model is ModelKind.BLACK else params.rate
    rows = []
    for c in _ascending(c_values, "c_values", float):
        try:
            factors = build_factors(model, params, n, c)
        except ParameterError as err:
            raise _annotate(err, f"c={c}") from err
        rows.append(SweepRow(c, 0.0, 0.0, extra={"p_u": factors.p_u,
                                                 "martingale_gap": martingale_gap(factors, rate)}))
    return SweepReport(_describe(model, params, sweep="martingale", n=n, h=params.maturity / n),
                       rows)


def american_compare(params: MarketParams, option: OptionSpec, n_values,
                     c: float = CUBATURE_SPREAD) -> SweepReport:
    """American trinomial and CRR prices per step count, Black-Scholes underlying.

    ``analytic_price`` is the Black-Scholes price of the European contract of
    the same kind. For a call on a non-dividend stock early exercise is never
    optimal so this is the exact American value; for a put it is only a lower
    bound.
    """
    if option.style is not ExerciseStyle.AMERICAN:
        raise ParameterError("style", "american_compare needs an american option")
    model = ModelKind.BLACK_SCHOLES
    euro = OptionSpec(option.kind, ExerciseStyle.EUROPEAN, option.strike)
    exact = bs_price(params, euro)
    rows = []
    for n in _steps(n_values):
        try:
            tree = american_price_tree(model, params, option, n, c)
            crr = crr_price(params, option, n)
            euro_tree = european_price_tree(model, params, euro, n, c)
        except ParameterError as err:
            raise _annotate(err, f"n={n}") from err
        rows.append(SweepRow(n, tree, exact, extra={
            "crr_price": crr,
            "crr_abs_error": abs(crr - exact),
            "european_tree_price": euro_tree,
        }))
    meta = _describe(model, params, option, sweep="american-compare", c=c,
                     analytic="european black-scholes price of the same kind")
    return SweepReport(meta, rows)
