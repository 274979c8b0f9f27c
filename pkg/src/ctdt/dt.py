"""Discrete-time LTI systems: difference equations, responses, geometric modes."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NonPositive, PoleOnCircleAtGridPoint, ZeroLeadingFeedback, DomainMismatch
from .rational import Domain, Polynomial, RationalTF
from .response import FrequencyResponse


@dataclass(frozen=True, eq=False)
class Sequence:
    """Uniformly sampled real signal; ``samples[i]`` sits at index ``n0 + i``."""

    samples: np.ndarray
    fs: float = 1.0
    n0: int = 0

    def __post_init__(self):
        x = np.array(self.samples, dtype=float).reshape(-1)
        if not np.all(np.isfinite(x)):
            raise ValueError("sequence samples must be finite")
        if not self.fs > 0:
            raise NonPositive(f"sample rate must be positive, got {self.fs}")
        x.flags.writeable = False
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "fs", float(self.fs))
        object.__setattr__(self, "n0", int(self.n0))

    @property
    def ts(self) -> float:
        return 1.0 / self.fs

    @property
    def times(self) -> np.ndarray:
        return (self.n0 + np.arange(len(self.samples))) / self.fs

    def __len__(self) -> int:
        return len(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    @classmethod
    def impulse(cls, n: int, fs: float = 1.0) -> "Sequence":
        x = np.zeros(n)
        if n:
            x[0] = 1.0
        return cls(x, fs)

    @classmethod
    def step(cls, n: int, fs: float = 1.0) -> "Sequence":
        return cls(np.ones(n), fs)

    @classmethod
    def sampled(cls, f, n: int, fs: float = 1.0, n0: int = 0) -> "Sequence":
        """Sample the callable ``f(t)`` at ``t = (n0 + k) / fs``."""
        t = (n0 + np.arange(n)) / fs
        return cls(f(t), fs, n0)


class FilterKind(enum.Enum):
    FIR = "FIR"
    IIR = "IIR"


@dataclass(frozen=True)
class DifferenceEquation:
    """``sum_k a_k y[n-k] = sum_j b_j x[n-j]``, stored with ``a_0 = 1``."""

    b: tuple[float, ...]
    a: tuple[float, ...] = (1.0,)

    def __init__(self, b, a=(1.0,)):
        b = [float(v) for v in np.atleast_1d(b)]
        a = [float(v) for v in np.atleast_1d(a)]
        if not a or a[0] == 0.0:
            raise ZeroLeadingFeedback("a[0] must be nonzero")
        a0 = a[0]
        if a0 != 1.0:
            b = [v / a0 for v in b]
            a = [v / a0 for v in a]
        object.__setattr__(self, "b", tuple(Polynomial(b).coeffs))
        object.__setattr__(self, "a", tuple(Polynomial(a).coeffs))

    def to_tf(self) -> RationalTF:
        return RationalTF(self.b, self.a, Domain.DT_ZINV)

    @classmethod
    def from_tf(cls, tf: RationalTF) -> "DifferenceEquation":
        if tf.domain is not Domain.DT_ZINV:
            raise DomainMismatch("difference equations need a DT transfer function")
        return cls(tf.num.coeffs, tf.den.coeffs)

    def __call__(self, z):
        return self.to_tf()(z)


def simulate(de: DifferenceEquation, input: Sequence, n_out: int | None = None) -> Sequence:
    """Zero-state recursion ``y[n] = sum_j b_j x[n-j] - sum_{k>=1} a_k y[n-k]``.

    Input samples beyond the end of ``input`` read as zero.
    """
    x = input.samples
    n_out = len(x) if n_out is None else int(n_out)
    if n_out < 0:
        raise ValueError("n_out must be non-negative")
    b, a = de.b, de.a
    y = [0.0] * n_out
    nx = len(x)
    for n in range(n_out):
        acc = b[0] * x[n] if n < nx else 0.0
        for j in range(1, len(b)):
            k = n - j
            if 0 <= k < nx:
                acc += b[j] * x[k]
        for k in range(1, len(a)):
            if n - k >= 0:
                acc -= a[k] * y[n - k]
        y[n] = float(acc)
    return Sequence(y, input.fs, input.n0)


def impulse_response_dt(de: DifferenceEquation, n: int, fs: float = 1.0) -> Sequence:
    if n < 1:
        raise ValueError("need at least one sample")
    return simulate(de, Sequence.impulse(n, fs), n)


def step_response_dt(de: DifferenceEquation, n: int, fs: float = 1.0) -> Sequence:
    if n < 1:
        raise ValueError("need at least one sample")
    return simulate(de, Sequence.step(n, fs), n)


def geometric_mode(c: complex, x0: complex, n: int) -> np.ndarray:
    """``x[k] = x0 * c**k`` for k = 0..n-1."""
    if n < 1:
        raise ValueError("need at least one sample")
    return x0 * np.asarray(c, dtype=complex) ** np.arange(n)


def mode_period(c: complex) -> float:
    """Samples per turn of a rotating geometric mode, ``2*pi / arg(c)``."""
    theta = abs(np.angle(c))
    return np.inf if theta == 0 else 2 * np.pi / theta


def classify(de: DifferenceEquation) -> FilterKind:
    return FilterKind.FIR if all(v == 0.0 for v in de.a[1:]) else FilterKind.IIR


SINGULAR_TOL = 1e-12


def singular_points(den: Polynomial, x) -> np.ndarray:
    """Mask of points where ``den`` vanishes relative to the size of its terms."""
    x = np.asarray(x)
    scale = np.zeros(x.shape)
    for k, c in enumerate(den.coeffs):
        scale = scale + abs(c) * np.abs(x) ** k
    return np.abs(den(x)) <= SINGULAR_TOL * scale


def unit_delay_points(f, fs: float) -> np.ndarray:
    """``z**-1 = exp(-i*2*pi*f/fs)``, exact at multiples of ``fs/2``."""
    f = np.atleast_1d(np.asarray(f, dtype=float))
    w = np.exp(-2j * np.pi * f / fs)
    half_turns = 2 * f / fs
    snap = half_turns == np.round(half_turns)
    w[snap] = np.where(np.round(half_turns[snap]) % 2 == 0, 1.0, -1.0)
    return w


def dt_freq_response(de: DifferenceEquation | RationalTF, fs: float, f_grid) -> FrequencyResponse:
    """Equivalent CT response: ``H(z)`` at ``z = exp(i*2*pi*f/fs)``.

    Raises
    ------
    PoleOnCircleAtGridPoint
        If a grid frequency lands on a unit-circle pole.
    """
    tf = de.to_tf() if isinstance(de, DifferenceEquation) else de
    if tf.domain is not Domain.DT_ZINV:
        raise DomainMismatch("dt_freq_response expects a DT system")
    if not fs > 0:
        raise NonPositive("sample rate must be positive")
    f = np.atleast_1d(np.asarray(f_grid, dtype=float))
    omega = 2 * np.pi * f
    w = unit_delay_points(f, fs)
    den = tf.den(w)
    bad = singular_points(tf.den, w)
    if np.any(bad):
        raise PoleOnCircleAtGridPoint(f"unit-circle pole at f = {f[bad][0]} Hz")
    warning = None
    if np.any(f < 0) or np.any(f > fs / 2):
        warning = "grid extends beyond [0, fs/2]; values alias"
    return FrequencyResponse(omega, tf.num(w) / den, warning)


def convolve(x: Sequence, h, n_out: int | None = None) -> Sequence:
    """Zero-state discrete convolution truncated to ``n_out`` samples."""
    h = np.asarray(getattr(h, "samples", h), dtype=float)
    n_out = len(x) if n_out is None else n_out
    full = np.convolve(x.samples, h) if len(x) and len(h) else np.zeros(0)
    out = np.zeros(n_out)
    m = min(n_out, len(full))
    out[:m] = full[:m]
    return Sequence(out, x.fs, x.n0)
