"""Recombining trinomial lattice built from the degree-5 cubature endpoints.

Over a step of length h the log-price moves by

    u = mu*h + sigma*sqrt(c*h),  m = mu*h,  d = mu*h - sigma*sqrt(c*h)

with probabilities p_u = p_d = 1/(2c) and p_m = 1 - 1/c. The choice c = 3
reproduces the cubature weights (1/6, 2/3, 1/6) and the endpoints
(-sqrt(3), 0, sqrt(3)) scaled by sqrt(h); c = 1 kills the middle branch and
leaves a p = 1/2 binomial tree. Because m = (u + d)/2 the tree recombines and
has 2n + 1 terminal nodes.

Node ``(i, j)`` sits at step ``i`` with ``j = 0 .. 2i`` counted from the
bottom, and has children ``(i+1, j)``, ``(i+1, j+1)``, ``(i+1, j+2)``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np

from .params import ExerciseStyle, MarketParams, ModelKind, OptionSpec, ParameterError

CUBATURE_SPREAD = 3.0


def _check_steps(n) -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise ParameterError("n", f"step count must be an integer, got {n!r}")
    if n < 1:
        raise ParameterError("n", f"step count must be >= 1, got {n}")
    return int(n)


def _check_spread(c) -> float:
    try:
        c = float(c)
    except (TypeError, ValueError):
        raise ParameterError("c", f"not a number: {c!r}") from None
    if not math.isfinite(c) or c < 1.0:
        raise ParameterError("c", f"spread must be finite and >= 1 (p_m = 1 - 1/c), got {c}")
    return c


@dataclass(frozen=True)
class LatticeFactors:
    """Per-step moves and branch probabilities of the trinomial lattice.

    ``u``, ``m``, ``d`` are log-moves; ``u0``, ``m0``, ``d0`` the matching
    multiplicative factors. ``half_spread`` is sigma*sqrt(c*h), i.e. (u - d)/2,
    kept separately so the step moments can be evaluated without cancellation.
    """

    model: ModelKind
    n: int
    h: float
    c: float
    drift: float
    volatility: float
    half_spread: float
    u: float
    m: float
    d: float
    p_u: float
    p_m: float
    p_d: float

    @property
    def u0(self) -> float:
        return math.exp(self.u)

    @property
    def m0(self) -> float:
        return math.exp(self.m)

    @property
    def d0(self) -> float:
        return math.exp(self.d)

    @property
    def probabilities(self) -> np.ndarray:
        """(p_d, p_m, p_u), ordered like the children of a node."""
        return np.array([self.p_d, self.p_m, self.p_u])

    @property
    def log_moves(self) -> np.ndarray:
        return np.array([self.d, self.m, self.u])

    def step_log_moments(self) -> tuple[float, float]:
        """Mean and variance of one log-return ln(S(t_i)/S(t_{i-1})).

        Uses the decomposition ln-move = (u+d)/2 + (u-d)/2 * X with
        X in {1, 0, -1}, so that mean = (u+d)/2 + (u-d)/2 (p_u - p_d) and
        variance = [p_u + p_d - (p_u - p_d)^2] (u-d)^2 / 4.
        """
        skew = self.p_u - self.p_d
        mean = self.m + self.half_spread * skew
        var = (self.p_u + self.p_d - skew * skew) * self.half_spread * self.half_spread
        return mean, var

    def level(self, s0: float, i: int, j):
        """Underlying level at node(s) ``(i, j)``."""
        return s0 * np.exp(i * self.m + (np.asarray(j) - i) * self.half_spread)


def drift_for(model: ModelKind, params: MarketParams) -> float:
    """Stratonovich-corrected drift: r - sigma^2/2 for spot, -sigma^2/2 for forwards."""
    half_var = 0.5 * params.volatility ** 2
    if model is ModelKind.BLACK:
        return -half_var
    return params.rate - half_var


def build_factors(model: ModelKind, params: MarketParams, n: int,
                  c: float = CUBATURE_SPREAD) -> LatticeFactors:
    """Lattice step data for ``n`` steps to maturity with spread ``c``.

    Examples
    --------
    >>> f = build_factors("bs", MarketParams(100, 0.035, 0.3, 1.0), 252, 3)
    >>> round(f.p_u, 12), round(f.p_m, 12)
    (0.166666666667, 0.666666666667)
    """
    model = ModelKind.parse(model)
    n = _check_steps(n)
    c = _check_spread(c)
    h = params.maturity / n
    mu = drift_for(model, params)
    m = mu * h
    s = params.volatility * math.sqrt(c * h)
    p_side = 1.0 / (2.0 * c)
    return LatticeFactors(
        model=model, n=n, h=h, c=c, drift=mu, volatility=params.volatility,
        half_spread=s, u=m + s, m=m, d=m - s,
        p_u=p_side, p_m=1.0 - 1.0 / c, p_d=p_side,
    )


def path_count(n: int, j: int) -> int:
    """Number of length-``n`` words over {u, m, d} ending at node ``j``.

    Node ``j`` is reached exactly when n_u - n_d = j - n. The counts are the
    trinomial coefficients of (1 + x + x^2)^n and sum to 3^n.
    """
    n = _check_steps(n)
    if isinstance(j, bool) or not isinstance(j, numbers.Integral) or not 0 <= j <= 2 * n:
        raise ParameterError("j", f"node index must be in 0..{2 * n}, got {j!r}")
    shift = j - n
    total = 0
    for n_d in range(max(0, -shift), (n - shift) // 2 + 1):
        n_u = n_d + shift
        total += math.comb(n, n_u) * math.comb(n - n_u, n_d)
    return total


@dataclass(frozen=True)
class TerminalDistribution:
    node_levels: np.ndarray
    node_probs: np.ndarray

    def expectation(self, payoff) -> float:
        return float(np.dot(self.node_probs, payoff(self.node_levels)))


def node_probabilities(factors: LatticeFactors) -> np.ndarray:
    """Probability of each of the 2n+1 terminal nodes.

    Computed by convolving the one-step law n times. Factorial formulas
    overflow well before the step counts used in practice.
    """
    p_d, p_m, p_u = factors.p_d, factors.p_m, factors.p_u
    probs = np.ones(1)
    for _ in range(factors.n):
        nxt = np.zeros(probs.size + 2)
        nxt[:-2] += p_d * probs
        nxt[1:-1] += p_m * probs
        nxt[2:] += p_u * probs
        probs = nxt
    return probs


def terminal_distribution(factors: LatticeFactors, s0: float) -> TerminalDistribution:
    j = np.arange(2 * factors.n + 1)
    return TerminalDistribution(factors.level(s0, factors.n, j), node_probabilities(factors))


def _require(option: OptionSpec, style: ExerciseStyle, who: str) -> None:
    if option.style is not style:
        raise ParameterError("style", f"{who} requires {style.value} exercise, got {option.style.value}")


def _deterministic_price(model: ModelKind, params: MarketParams, option: OptionSpec) -> float:
    r, T = params.rate, params.maturity
    if model is ModelKind.BLACK:
        return math.exp(-r * T) * float(option.payoff(params.underlying))
    k_disc = option.strike * math.exp(-r * T)
    diff = params.underlying - k_disc if option.is_call else k_disc - params.underlying
    return max(diff, 0.0)


def european_price_tree(model: ModelKind, params: MarketParams, option: OptionSpec,
                        n: int, c: float = CUBATURE_SPREAD) -> float:
    """European price as the discounted mean payoff over the terminal nodes."""
    model = ModelKind.parse(model)
    _require(option, ExerciseStyle.EUROPEAN, "european_price_tree")
    factors = build_factors(model, params, n, c)
    if params.volatility == 0.0:
        return _deterministic_price(model, params, option)
    dist = terminal_distribution(factors, params.underlying)
    return math.exp(-params.rate * params.maturity) * dist.expectation(option.payoff)


def backward_induction(factors: LatticeFactors, s0: float, rate: float,
                       option: OptionSpec, early_exercise: bool) -> float:
    """Roll option values from maturity back to the root.

    With ``early_exercise`` each node takes max(intrinsic, continuation),
    including the root.
    """
    n = factors.n
    disc = math.exp(-rate * factors.h)
    w_d, w_m, w_u = disc * factors.p_d, disc * factors.p_m, disc * factors.p_u
    values = option.payoff(factors.level(s0, n, np.arange(2 * n + 1)))
    for i in range(n - 1, -1, -1):
        values = w_d * values[:-2] + w_m * values[1:-1] + w_u * values[2:]
        if early_exercise:
            intrinsic = option.payoff(factors.level(s0, i, np.arange(2 * i + 1)))
            np.maximum(values, intrinsic, out=values)
    return float(values[0])


def american_price_tree(model: ModelKind, params: MarketParams, option: OptionSpec,
                        n: int, c: float = CUBATURE_SPREAD) -> float:
    model = ModelKind.parse(model)
    _require(option, ExerciseStyle.AMERICAN, "american_price_tree")
    factors = build_factors(model, params, n, c)
    return backward_induction(factors, params.underlying, params.rate, option, early_exercise=True)


def price_tree(model: ModelKind, params: MarketParams, option: OptionSpec,
               n: int, c: float = CUBATURE_SPREAD) -> float:
    """Dispatch on exercise style."""
    if option.style is ExerciseStyle.AMERICAN:
        return american_price_tree(model, params, option, n, c)
    return european_price_tree(model, params, option, n, c)


def crr_price(params: MarketParams, option: OptionSpec, n: int) -> float:
    """Cox-Ross-Rubinstein binomial price, European or American.

    u0 = exp(sigma*sqrt(h)), d0 = 1/u0 and p = (exp(r*h) - d0) / (u0 - d0).
    """
    n = _check_steps(n)
    h = params.maturity / n
    step = params.volatility * math.sqrt(h)
    if step == 0.0:
        raise ParameterError("volatility", "CRR needs sigma > 0 (u0 = d0 otherwise)")
    u0, d0 = math.exp(step), math.exp(-step)
    growth = math.exp(params.rate * h)
    if not d0 <= growth <= u0:
        raise ParameterError(
            "rate", f"no-arbitrage bound d0 <= exp(r*h) <= u0 violated "
                    f"({d0:.6g} <= {growth:.6g} <= {u0:.6g})")
    p = (growth - d0) / (u0 - d0)
    disc = 1.0 / growth
    w_up, w_dn = disc * p, disc * (1.0 - p)
    american = option.style is ExerciseStyle.AMERICAN
    s0 = params.underlying

    values = option.payoff(s0 * np.exp((2 * np.arange(n + 1) - n) * step))
    for i in range(n - 1, -1, -1):
        values = w_dn * values[:-1] + w_up * values[1:]
        if american:
            levels = s0 * np.exp((2 * np.arange(i + 1) - i) * step)
            np.maximum(values, option.payoff(levels), out=values)
    return float(values[0])


def martingale_gap(factors: LatticeFactors, rate: float) -> float:
    """|p_u u0 + p_m m0 + p_d d0 - exp(rate*h)|.

    Evaluated as exp(rate*h) * |sum_k p_k expm1(x_k - rate*h)|, which is the
    same quantity since the probabilities sum to one, but avoids subtracting
    two numbers close to 1.
    """
    rh = rate * factors.h
    offset = factors.m - rh
    s = factors.half_spread
    total = (factors.p_u * math.expm1(offset + s)
             + factors.p_m * math.expm1(offset)
             + factors.p_d * math.expm1(offset - s))
    return math.exp(rh) * abs(total)
