"""Sampled differentiation and integration with measurable error orders."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dt import Sequence
from .errors import BadRange, DegenerateSignal, SequenceTooShort


def backward_difference_weights(n: int) -> np.ndarray:
    """Signed binomial stencil ``(-1)**m * C(n, m)`` for m = 0..n (undivided)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    return np.array([(-1) ** m * math.comb(n, m) for m in range(n + 1)], dtype=float)


def backward_difference(x: Sequence, order: int = 1, divided: bool = True) -> Sequence:
    """n-th backward difference ``Ts**-n * sum_m (-1)**m C(n,m) x[k-m]``.

    The first ``order`` samples have no complete stencil and are dropped, so
    the result starts at index ``x.n0 + order``.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if len(x) <= order:
        raise SequenceTooShort(f"need more than {order} samples, got {len(x)}")
    w = backward_difference_weights(order)
    v = x.samples
    n = len(v)
    out = np.zeros(n - order)
    for m, wm in enumerate(w):
        out += wm * v[order - m: n - m]
    if divided:
        out = out / x.ts**order
    return Sequence(out, x.fs, x.n0 + order)


def _check_range(x: Sequence, p: int, q: int) -> None:
    if not (0 <= p < q < len(x)):
        raise BadRange(f"need 0 <= p < q < {len(x)}, got p={p}, q={q}")


def rect_integrate(x: Sequence, p: int, q: int) -> float:
    """Zero-order accumulation ``sum_{k=p}^{q-1} x[k] * Ts``."""
    _check_range(x, p, q)
    return float(np.sum(x.samples[p:q]) * x.ts)


def trap_integrate(x: Sequence, p: int, q: int) -> float:
    """Linear-interpolation accumulation ``sum_{k=p+1}^{q} (x[k-1] + x[k])/2 * Ts``."""
    _check_range(x, p, q)
    v = x.samples
    return float(np.sum(0.5 * (v[p:q] + v[p + 1:q + 1])) * x.ts)


def running_rect(x: Sequence) -> np.ndarray:
    """Accumulator output ``I[q] = sum_{k<q} x[k] Ts`` for q = 0..N-1."""
    return np.concatenate(([0.0], np.cumsum(x.samples[:-1]) * x.ts))


def running_trap(x: Sequence) -> np.ndarray:
    v = x.samples
    return np.concatenate(([0.0], np.cumsum(0.5 * (v[:-1] + v[1:])) * x.ts))


# --------------------------------------------------------------------------
# Error orders
# --------------------------------------------------------------------------

class Rule(enum.Enum):
    RECT = "rect"
    TRAP = "trap"
    BDIFF = "bdiff"


THEORETICAL_ORDER = {Rule.RECT: 1, Rule.TRAP: 2, Rule.BDIFF: 1}


@dataclass(frozen=True)
class TestSignal:
    """Analytic signal with closed-form antiderivative and derivatives."""

    name: str
    f: Callable[[np.ndarray], np.ndarray]
    antiderivative: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray, int], np.ndarray]

    __test__ = False  # not a pytest class

    def integral(self, a, b):
        return self.antiderivative(b) - self.antiderivative(a)

    @classmethod
    def sin(cls) -> "TestSignal":
        return cls(
            "sin",
            np.sin,
            lambda t: -np.cos(t),
            lambda t, n: np.sin(t + n * np.pi / 2),
        )

    @classmethod
    def exp(cls, rate: float = 1.0) -> "TestSignal":
        return cls(
            f"exp({rate}t)",
            lambda t: np.exp(rate * t),
            lambda t: np.exp(rate * t) / rate,
            lambda t, n: rate**n * np.exp(rate * t),
        )

    @classmethod
    def poly(cls, coeffs) -> "TestSignal":
        P = np.polynomial.Polynomial(coeffs)
        return cls(
            f"poly{list(coeffs)}",
            P,
            P.integ(),
            lambda t, n: P.deriv(n)(t),
        )


@dataclass(frozen=True)
class ErrorOrderReport:
    step_sizes: tuple[float, ...]
    errors: tuple[float, ...]
    fitted_slope: float
    rule: Rule
    order: int = 1


def _rule_error(rule: Rule, sig: TestSignal, ts: float, a: float, b: float, order: int) -> float:
    # largest global error over the grid a, a+Ts, ..., a+q*Ts <= b
    q = int(math.floor((b - a) / ts + 1e-9))
    t = a + ts * np.arange(q + 1)
    x = Sequence(sig.f(t), 1.0 / ts)
    if rule is Rule.BDIFF:
        est = backward_difference(x, order).samples
        exact = sig.derivative(t[order:], order)
        return float(np.max(np.abs(est - exact)))
    running = running_rect(x) if rule is Rule.RECT else running_trap(x)
    exact = sig.integral(a, t)
    return float(np.max(np.abs(running - exact)))


def error_order(rule: Rule | str, signal: TestSignal, ts_list, interval=(0.0, np.pi),
                order: int = 1) -> ErrorOrderReport:
    """Fit the convergence order of a rule from its max global error.

    For rect/trap the error is the worst deviation of the running sum from
    the exact running integral over ``interval``; for backward differences it
    is the worst pointwise deviation from the exact ``order``-th derivative.
    The slope is the least-squares fit of log2(error) against log2(Ts).

    Raises
    ------
    DegenerateSignal
        When the rule is exact on ``signal`` so errors are at rounding level.
    """
    rule = Rule(rule)
    ts = [float(v) for v in ts_list]
    if len(ts) < 3:
        raise ValueError("need at least three step sizes")
    for prev, cur in zip(ts, ts[1:]):
        if not math.isclose(cur, prev / 2, rel_tol=1e-9):
            raise ValueError("each step size must halve the previous one")
    a, b = interval
    errs = [_rule_error(rule, signal, h, a, b, order) for h in ts]
    scale = max(1.0, float(np.max(np.abs(signal.f(np.linspace(a, b, 257))))))
    if min(errs) <= 1e-11 * scale:
        raise DegenerateSignal(f"{rule.value} is exact on {signal.name}")
    slope = float(np.polyfit(np.log2(ts), np.log2(errs), 1)[0])
    return ErrorOrderReport(tuple(ts), tuple(errs), slope, rule, order)
