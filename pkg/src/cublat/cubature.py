"""Degree-5 cubature formula on one-dimensional Wiener space.

The formula consists of three piecewise-linear trajectories on [0, 1], each
made of three equal sub-intervals with constant slopes, and three weights.
Integrating the Stratonovich form of geometric Brownian motion along each
trajectory turns the SDE into three ODEs whose solutions only depend on the
trajectory endpoints (-sqrt(3), 0, sqrt(3)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import ExerciseStyle, MarketParams, ModelKind, OptionSpec, ParameterError

_S3 = math.sqrt(3.0)
_S6 = math.sqrt(6.0)

BRANCHES = ("upper", "lower")


def _theta_table(branch: str) -> np.ndarray:
    """Slope coefficients theta[k, j] for one sign branch.

    ``upper`` takes the top sign of every +-/-+ pair, ``lower`` the bottom one.
    The first and third columns coincide.
    """
    if branch not in BRANCHES:
        raise ParameterError("sign_branch", f"expected 'upper' or 'lower', got {branch!r}")
    s = 1.0 if branch == "upper" else -1.0
    rows = [
        ((-2 * _S3 - s * _S6) / 6, (-_S3 + s * _S6) / 3),
        ((s * _S6) / 6, (-s * _S6) / 3),
        ((2 * _S3 + s * _S6) / 6, (_S3 - s * _S6) / 3),
    ]
    return np.array([[outer, mid, outer] for outer, mid in rows])


@dataclass(frozen=True)
class TrajectoryPath:
    k: int
    values: tuple  # omega_k at t0=0, t1, t2, t3=1

    @property
    def endpoint(self) -> float:
        return self.values[-1]


@dataclass(frozen=True)
class CubatureFormula5:
    """Weights, slope table and derived endpoints of the degree-5 formula."""

    branch: str = "upper"
    weights: np.ndarray = field(default_factory=lambda: np.array([1 / 6, 2 / 3, 1 / 6]))
    sub_interval: float = 1.0 / 3.0

    def __post_init__(self):
        object.__setattr__(self, "thetas", _theta_table(self.branch))
        ends = tuple(self._integrate(k)[-1] for k in range(3))
        object.__setattr__(self, "endpoints", np.array(ends))

    def _integrate(self, row: int) -> tuple:
        # omega(t_j) = 3 * theta_{k,j} * (t_j - t_{j-1}) + omega(t_{j-1})
        values = [0.0]
        for theta in self.thetas[row]:
            values.append(3.0 * theta * self.sub_interval + values[-1])
        return tuple(values)

    def path(self, k: int) -> TrajectoryPath:
        if k not in (1, 2, 3):
            raise ParameterError("k", f"trajectory index must be 1, 2 or 3, got {k!r}")
        return TrajectoryPath(k, self._integrate(k - 1))

    def moment(self, p: int) -> float:
        """sum_k lambda_k * omega_k**p; equals E[Z**p] for Z ~ N(0,1) when p <= 5."""
        return float(np.dot(self.weights, self.endpoints ** p))


DEGREE5 = CubatureFormula5("upper")


def trajectory_points(k: int, sign_branch: str = "upper") -> TrajectoryPath:
    """Cumulative trajectory values of path ``k`` at the sub-interval boundaries."""
    formula = DEGREE5 if sign_branch == "upper" else CubatureFormula5(sign_branch)
    return formula.path(k)


def _drift(model: ModelKind, params: MarketParams) -> float:
    half_var = 0.5 * params.volatility ** 2
    if ModelKind.parse(model) is ModelKind.BLACK:
        return -half_var
    return params.rate - half_var


def cubature_terminal_levels(model: ModelKind, params: MarketParams) -> np.ndarray:
    """Underlying level at maturity along each trajectory, ascending (k = 1, 2, 3)."""
    T = params.maturity
    omegas = DEGREE5.endpoints
    return params.underlying * np.exp(_drift(model, params) * T
                                      + params.volatility * math.sqrt(T) * omegas)


def cubature_single_step_price(model: ModelKind, params: MarketParams,
                               option: OptionSpec) -> float:
    """Discounted weighted payoff over the three cubature levels, no time stepping."""
    if option.style is not ExerciseStyle.EUROPEAN:
        raise ParameterError("style", "single-step cubature prices european options only")
    levels = cubature_terminal_levels(model, params)
    expected = float(np.dot(DEGREE5.weights, option.payoff(levels)))
    return math.exp(-params.rate * params.maturity) * expected
