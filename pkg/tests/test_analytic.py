import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cublat import (
    MarketParams,
    OptionSpec,
    ParameterError,
    american,
    black_price,
    bs_price,
    european,
    norm_cdf,
)

from oracles import mp_black_scholes, mp_norm_cdf

BS_EXAMPLE = MarketParams(100.0, 0.025, 0.25, 0.5)


@pytest.mark.parametrize("x", [-38.0, -8.5, -3.0, -1e-3, 0.0, 0.4, 2.0, 7.5])
def test_norm_cdf_near_machine_precision(x):
    assert abs(norm_cdf(x) - mp_norm_cdf(x)) <= 1e-15 * max(1.0, mp_norm_cdf(x))
    if x < 0:
        # lower tail keeps relative accuracy
        assert norm_cdf(x) == pytest.approx(mp_norm_cdf(x), rel=1e-13)


@pytest.mark.parametrize(
    "kind, expected",
    [("call", 1.722901670), ("put", 20.23223773)],
)
def test_bs_worked_example(kind, expected):
    assert bs_price(BS_EXAMPLE, european(kind, 120.0)) == pytest.approx(expected, abs=1e-8)


def test_bs_table_atm():
    p = MarketParams(100.0, 0.035, 0.30, 1.0)
    assert round(bs_price(p, european("call", 100.0)), 3) == 13.517
    assert round(bs_price(p, european("put", 100.0)), 3) == 10.078


@pytest.mark.parametrize(
    "kind, expected",
    [("call", 1.496683230), ("put", 21.248239239)],
)
def test_black_worked_example(kind, expected):
    assert black_price(BS_EXAMPLE, european(kind, 120.0)) == pytest.approx(expected, abs=1e-8)


def test_black_small_strike_tends_to_discounted_forward():
    p = MarketParams(100.0, 0.025, 0.25, 0.5)
    price = black_price(p, european("call", 1e-9))
    assert price == pytest.approx(math.exp(-0.0125) * 100.0, rel=1e-10)


@pytest.mark.parametrize("s0, k, r, sigma, t", [
    (100, 120, 0.025, 0.25, 0.5),
    (42, 40, 0.1, 0.2, 0.5),
    (100, 80, -0.01, 0.6, 3.0),
    (1.5, 2.0, 0.0, 0.05, 0.1),
])
def test_against_high_precision_closed_form(s0, k, r, sigma, t):
    p = MarketParams(s0, r, sigma, t)
    for kind in ("call", "put"):
        assert bs_price(p, european(kind, k)) == pytest.approx(
            mp_black_scholes(s0, k, r, sigma, t, kind == "call"), rel=1e-12, abs=1e-13)
        assert black_price(p, european(kind, k)) == pytest.approx(
            mp_black_scholes(s0, k, r, sigma, t, kind == "call", forward_given=True),
            rel=1e-12, abs=1e-13)


params_st = st.builds(
    MarketParams,
    underlying=st.floats(1.0, 500.0),
    rate=st.floats(-0.05, 0.15),
    volatility=st.floats(0.01, 1.0),
    maturity=st.floats(0.01, 5.0),
)


@settings(max_examples=200, deadline=None)
@given(params_st, st.floats(1.0, 500.0))
def test_put_call_parity(p, k):
    call = bs_price(p, european("call", k))
    put = bs_price(p, european("put", k))
    forward_gap = p.underlying - k * math.exp(-p.rate * p.maturity)
    scale = max(abs(forward_gap), call, put, 1.0)
    assert call - put == pytest.approx(forward_gap, rel=0, abs=1e-12 * scale)

    bcall = black_price(p, european("call", k))
    bput = black_price(p, european("put", k))
    bgap = math.exp(-p.rate * p.maturity) * (p.underlying - k)
    assert bcall - bput == pytest.approx(bgap, rel=0, abs=1e-12 * max(abs(bgap), bcall, bput, 1.0))


@settings(max_examples=50, deadline=None)
@given(params_st)
def test_monotone_in_strike(p):
    strikes = np.linspace(0.2, 3.0, 40) * p.underlying
    calls = [bs_price(p, european("call", k)) for k in strikes]
    puts = [bs_price(p, european("put", k)) for k in strikes]
    assert all(a >= b - 1e-12 for a, b in zip(calls, calls[1:]))
    assert all(a <= b + 1e-12 for a, b in zip(puts, puts[1:]))


@pytest.mark.parametrize("k", [80.0, 100.0, 120.0])
def test_zero_volatility_is_discounted_forward_intrinsic(k):
    p = MarketParams(100.0, 0.03, 0.0, 2.0)
    disc = math.exp(-0.06)
    assert bs_price(p, european("call", k)) == max(100.0 - k * disc, 0.0)
    assert bs_price(p, european("put", k)) == max(k * disc - 100.0, 0.0)
    assert black_price(p, european("call", k)) == pytest.approx(disc * max(100.0 - k, 0.0))


def test_american_rejected():
    with pytest.raises(ParameterError) as err:
        bs_price(BS_EXAMPLE, american("put", 100.0))
    assert err.value.field == "style"
    with pytest.raises(ParameterError):
        black_price(BS_EXAMPLE, american("call", 100.0))


@pytest.mark.parametrize("field, kwargs", [
    ("underlying", dict(underlying=0.0)),
    ("underlying", dict(underlying=-5.0)),
    ("volatility", dict(volatility=-0.1)),
    ("maturity", dict(maturity=0.0)),
    ("rate", dict(rate=float("nan"))),
])
def test_market_validation_names_field(field, kwargs):
    base = dict(underlying=100.0, rate=0.02, volatility=0.2, maturity=1.0)
    base.update(kwargs)
    with pytest.raises(ParameterError) as err:
        MarketParams(**base)
    assert err.value.field == field
    assert field in str(err.value)


def test_negative_rate_accepted():
    p = MarketParams(100.0, -0.02, 0.2, 1.0)
    assert bs_price(p, european("call", 100.0)) > 0


def test_option_validation():
    with pytest.raises(ParameterError) as err:
        OptionSpec("call", "european", 0.0)
    assert err.value.field == "strike"
    with pytest.raises(ParameterError) as err:
        OptionSpec("straddle", "european", 10.0)
    assert err.value.field == "kind"
