"""Market and contract descriptions shared by every pricer."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class ParameterError(ValueError):
    """Raised when an input violates its domain; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ModelKind(str, enum.Enum):
    BLACK_SCHOLES = "black_scholes"
    BLACK = "black"

    @classmethod
    def parse(cls, value: "str | ModelKind") -> "ModelKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {
            "bs": cls.BLACK_SCHOLES,
            "black_scholes": cls.BLACK_SCHOLES,
            "blackscholes": cls.BLACK_SCHOLES,
            "black": cls.BLACK,
            "black76": cls.BLACK,
            "b76": cls.BLACK,
        }
        if key not in aliases:
            raise ParameterError("model", f"unknown model {value!r}")
        return aliases[key]


class OptionKind(str, enum.Enum):
    CALL = "call"
    PUT = "put"


class ExerciseStyle(str, enum.Enum):
    EUROPEAN = "european"
    AMERICAN = "american"


def _check_finite(field: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ParameterError(field, f"not a number: {value!r}") from None
    if not math.isfinite(value):
        raise ParameterError(field, f"must be finite, got {value}")
    return value


@dataclass(frozen=True)
class MarketParams:
    """Market state for either model.

    ``underlying`` is the spot S0 under Black-Scholes and the forward or
    futures price F0 under Black's model. ``rate`` is continuously
    compounded per year, ``volatility`` per sqrt-year, ``maturity`` in years.
    """

    underlying: float
    rate: float
    volatility: float
    maturity: float

    def __post_init__(self):
        for name in ("underlying", "rate", "volatility", "maturity"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))
        if self.underlying <= 0.0:
            raise ParameterError("underlying", f"must be > 0, got {self.underlying}")
        if self.volatility < 0.0:
            raise ParameterError("volatility", f"must be >= 0, got {self.volatility}")
        if self.maturity <= 0.0:
            raise ParameterError("maturity", f"must be > 0, got {self.maturity}")


@dataclass(frozen=True)
class OptionSpec:
    kind: OptionKind
    style: ExerciseStyle
    strike: float

    def __post_init__(self):
        object.__setattr__(self, "kind", _coerce_enum(OptionKind, "kind", self.kind))
        object.__setattr__(self, "style", _coerce_enum(ExerciseStyle, "style", self.style))
        strike = _check_finite("strike", self.strike)
        if strike <= 0.0:
            raise ParameterError("strike", f"must be > 0, got {strike}")
        object.__setattr__(self, "strike", strike)

    @property
    def is_call(self) -> bool:
        return self.kind is OptionKind.CALL

    def payoff(self, level):
        """Immediate-exercise value max(+-(level - K), 0); works on arrays."""
        if self.is_call:
            return np.maximum(level - self.strike, 0.0)
        return np.maximum(self.strike - level, 0.0)


_STYLE_ALIASES = {"eu": "european", "euro": "european", "am": "american", "amer": "american"}


def _coerce_enum(cls, field, value):
    if isinstance(value, cls):
        return value
    key = str(value).strip().lower()
    key = _STYLE_ALIASES.get(key, key)
    try:
        return cls(key)
    except ValueError:
        choices = ", ".join(m.value for m in cls)
        raise ParameterError(field, f"expected one of {choices}, got {value!r}") from None


def european(kind: str, strike: float) -> OptionSpec:
    return OptionSpec(kind, ExerciseStyle.EUROPEAN, strike)


def american(kind: str, strike: float) -> OptionSpec:
    return OptionSpec(kind, ExerciseStyle.AMERICAN, strike)
