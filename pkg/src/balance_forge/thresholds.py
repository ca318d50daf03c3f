"""Piecewise-constant threshold functions for the local rounding step."""
from __future__ import annotations

import math
from dataclasses import dataclass

EPS_MAX = math.sqrt(33) / 2 - 17 / 6
_SLACK = 1e-12


class ThresholdRangeError(ValueError):
    pass


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ThresholdRangeError(msg)


class ThresholdFunction:
    name = "threshold"

    def __call__(self, p: float) -> float:
        raise NotImplementedError

    def breakpoints(self) -> list[tuple[float, float]]:
        """(upper end of piece, value) pairs, ascending."""
        raise NotImplementedError

    @property
    def infimum(self) -> float:
        return min(val for _, val in self.breakpoints())

    def params(self) -> dict:
        return {}

    def _validate(self) -> None:
        vals = [val for _, val in self.breakpoints()]
        _check(all(0.5 - _SLACK <= val <= 1 + _SLACK for val in vals), f"{self!r} leaves [1/2, 1]")
        _check(all(a >= b - _SLACK for a, b in zip(vals, vals[1:])), f"{self!r} is not non-increasing")


@dataclass(frozen=True, repr=True)
class ConstantOne(ThresholdFunction):
    name = "constant-one"

    def __call__(self, p: float) -> float:
        return 1.0

    def breakpoints(self):
        return [(math.inf, 1.0)]


@dataclass(frozen=True)
class StepAt(ThresholdFunction):
    """1 up to weight b, then a."""

    a: float
    b: float
    name = "step-at"

    def __post_init__(self):
        _check(0.5 - _SLACK <= self.a <= 1 + _SLACK, "a must lie in [1/2, 1]")
        _check(self.b >= 0, "b must be nonnegative")
        self._validate()

    def __call__(self, p: float) -> float:
        return 1.0 if p <= self.b else self.a

    def breakpoints(self):
        return [(self.b, 1.0), (math.inf, self.a)]

    def params(self):
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class StepHalf(StepAt):
    """1 for weights up to 1/2, alpha above."""

    a: float
    b: float = 0.5
    lower: float = 2 / 3
    name = "step-half"

    def __init__(self, alpha: float, lower: float = 2 / 3):
        object.__setattr__(self, "a", float(alpha))
        object.__setattr__(self, "b", 0.5)
        object.__setattr__(self, "lower", lower)
        _check(lower - _SLACK <= alpha <= 1 + _SLACK, f"alpha must lie in [{lower:g}, 1]")
        self._validate()

    @property
    def alpha(self) -> float:
        return self.a

    def params(self):
        return {"alpha": self.a}


@dataclass(frozen=True)
class StepThird(StepAt):
    """1 for weights up to 1/3, alpha above; alpha >= max(1/3 + 2 beta/3, 2/3)."""

    a: float
    b: float = 1 / 3
    beta: float = 0.0
    name = "step-third"

    def __init__(self, alpha: float, beta: float = 0.0):
        object.__setattr__(self, "a", float(alpha))
        object.__setattr__(self, "b", 1 / 3)
        object.__setattr__(self, "beta", beta)
        low = max(1 / 3 + 2 * beta / 3, 2 / 3)
        _check(low - _SLACK <= alpha <= 1 + _SLACK, f"alpha must lie in [{low:g}, 1]")
        self._validate()

    @property
    def alpha(self) -> float:
        return self.a

    def params(self):
        return {"alpha": self.a}


@dataclass(frozen=True)
class TwoStep(ThresholdFunction):
    """2/3 - eps above 1/2, 2/3 + eps/2 on (1/3, 1/2], 1 up to 1/3."""

    eps: float
    name = "two-step"

    def __post_init__(self):
        _check(-_SLACK <= self.eps <= EPS_MAX + _SLACK, f"eps must lie in [0, {EPS_MAX:.6f}]")
        self._validate()

    def __call__(self, p: float) -> float:
        if p <= 1 / 3:
            return 1.0
        if p <= 0.5:
            return 2 / 3 + self.eps / 2
        return 2 / 3 - self.eps

    def breakpoints(self):
        return [(1 / 3, 1.0), (0.5, 2 / 3 + self.eps / 2), (math.inf, 2 / 3 - self.eps)]

    def params(self):
        return {"epsilon": self.eps}


def eval_threshold(f: ThresholdFunction, p: float) -> float:
    return f(float(p))
