"""Closed-form Black-Scholes and Black-76 prices for European options."""

from __future__ import annotations

import math

from .params import ExerciseStyle, MarketParams, ModelKind, OptionSpec, ParameterError

_SQRT2 = math.sqrt(2.0)


def norm_cdf(x: float) -> float:
    """Standard normal CDF.

    Written through ``erfc`` rather than ``erf`` so the lower tail keeps full
    relative precision instead of losing it to ``1 - erf``.
    """
    return 0.5 * math.erfc(-x / _SQRT2)


def _require_european(option: OptionSpec) -> None:
    if option.style is not ExerciseStyle.EUROPEAN:
        raise ParameterError("style", "closed form exists only for european exercise")


def lognormal_price(forward: float, strike: float, total_vol: float,
                    discount: float, is_call: bool) -> float:
    """Discounted expectation of a call/put payoff on a lognormal forward.

    ``total_vol`` is sigma*sqrt(T). A zero total volatility collapses the
    distribution to a point mass at ``forward``.
    """
    if total_vol == 0.0:
        intrinsic = forward - strike if is_call else strike - forward
        return discount * max(intrinsic, 0.0)
    d1 = (math.log(forward / strike) + 0.5 * total_vol * total_vol) / total_vol
    d2 = d1 - total_vol
    if is_call:
        value = forward * norm_cdf(d1) - strike * norm_cdf(d2)
    else:
        value = strike * norm_cdf(-d2) - forward * norm_cdf(-d1)
    return discount * max(value, 0.0)


def bs_price(params: MarketParams, option: OptionSpec) -> float:
    """Black-Scholes price of a European option on a non-dividend stock.

    Examples
    --------
    >>> p = MarketParams(100.0, 0.025, 0.25, 0.5)
    >>> round(bs_price(p, OptionSpec("call", "european", 120.0)), 9)
    1.72290167
    """
    _require_european(option)
    r, T = params.rate, params.maturity
    if params.volatility == 0.0:
        # deterministic limit, written in spot terms so it is exact
        k_disc = option.strike * math.exp(-r * T)
        diff = params.underlying - k_disc if option.is_call else k_disc - params.underlying
        return max(diff, 0.0)
    forward = params.underlying * math.exp(r * T)
    return lognormal_price(forward, option.strike, params.volatility * math.sqrt(T),
                           math.exp(-r * T), option.is_call)


def black_price(params: MarketParams, option: OptionSpec) -> float:
    """Black-76 price of a European option on a forward or futures price."""
    _require_european(option)
    T = params.maturity
    return lognormal_price(params.underlying, option.strike, params.volatility * math.sqrt(T),
                           math.exp(-params.rate * T), option.is_call)


def analytic_price(model: ModelKind, params: MarketParams, option: OptionSpec) -> float:
    model = ModelKind.parse(model)
    if model is ModelKind.BLACK:
        return black_price(params, option)
    return bs_price(params, option)
