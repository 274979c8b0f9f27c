"""Continuous-time first-order systems and modal impulse responses."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence as Seq

import numpy as np

from .dt import Sequence, singular_points
from .errors import DomainMismatch, NonPositive, NonPositiveTau, NonStrictlyProper, PoleOnGrid
from .rational import (
    Domain,
    ModalTerm,
    PartialFractionExpansion,
    RationalTF,
    Stability,
    is_stable,
)
from .response import FrequencyResponse

# Rise-time rule of thumb: bandwidth (Hz) ~ 0.35 / t_10-90
RISE_TIME_FACTOR = 0.35


@dataclass(frozen=True)
class ImpulseResponseModel:
    """``h(t) = u(t) * sum_j exp(p_j t) * sum_k c_jk t**(k-1) / (k-1)!``."""

    terms: tuple[ModalTerm, ...]
    causal: bool = True

    def evaluate_complex(self, t) -> np.ndarray:
        """Raw complex modal sum (no conjugate folding); used for realness checks."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros(t.shape, dtype=complex)
        for term in self.terms:
            out += np.exp(term.pole * t) * _time_poly(term.coeffs, t)
        if self.causal:
            out[t < 0] = 0.0
        return out

    def __call__(self, t) -> np.ndarray:
        return evaluate_impulse(self, t)


def _time_poly(coeffs: Seq[complex], t: np.ndarray) -> np.ndarray:
    acc = np.zeros(t.shape, dtype=complex)
    for k, c in enumerate(coeffs):
        acc += c * t**k / math.factorial(k)
    return acc


def impulse_model(pfe: PartialFractionExpansion) -> ImpulseResponseModel:
    """Impulse response of a strictly proper system from its modal expansion.

    Raises
    ------
    NonStrictlyProper
        If the expansion has a polynomial (impulsive) direct part.
    """
    if not pfe.direct.is_zero():
        raise NonStrictlyProper("direct term would contribute impulses to h(t)")
    return ImpulseResponseModel(tuple(pfe.terms), causal=True)


def evaluate_impulse(model: ImpulseResponseModel, t_grid) -> np.ndarray:
    """Real impulse response on ``t_grid``.

    Conjugate pole pairs are folded into ``2*Re`` of one member, i.e. damped
    cosines ``2*rho*exp(sigma t)*cos(omega t + phi)``; ``u(0) = 1``.
    """
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    out = np.zeros(t.shape, dtype=float)
    for term in model.terms:
        p = term.pole
        if p.imag < 0:
            continue
        mode = np.exp(p * t) * _time_poly(term.coeffs, t)
        out += 2.0 * mode.real if p.imag > 0 else mode.real
    if model.causal:
        out[t < 0] = 0.0
    return out


def freq_response(tf: RationalTF, omega_grid) -> FrequencyResponse:
    """``H(i*omega)`` on the grid; flags (but still computes) unstable systems.

    Raises
    ------
    PoleOnGrid
        If the denominator vanishes at a grid point.
    """
    if tf.domain is not Domain.CT_S:
        raise DomainMismatch("freq_response expects a CT transfer function")
    w = np.asarray(omega_grid, dtype=float)
    s = 1j * w
    den = tf.den(s)
    if np.any(singular_points(tf.den, s)):
        bad = w[singular_points(tf.den, s)][0]
        raise PoleOnGrid(f"imaginary-axis pole at omega = {bad}")
    warning = None
    if is_stable(tf) is Stability.UNSTABLE:
        warning = "unstable system: steady-state interpretation invalid"
    return FrequencyResponse(w, tf.num(s) / den, warning)


def lpf(tau: float) -> RationalTF:
    """First-order low-pass ``1 / (1 + s*tau)``, pole at ``-1/tau``."""
    if not tau > 0:
        raise NonPositiveTau(f"tau must be positive, got {tau}")
    return RationalTF([1.0], [1.0, tau])


def hpf(tau: float) -> RationalTF:
    """First-order high-pass ``s*tau / (1 + s*tau)`` = ``1 - lpf(tau)``."""
    if not tau > 0:
        raise NonPositiveTau(f"tau must be positive, got {tau}")
    return RationalTF([0.0, tau], [1.0, tau])


def integrator() -> RationalTF:
    return RationalTF([1.0], [0.0, 1.0])


def differentiator() -> RationalTF:
    """Ideal ``H(s) = s``; improper, kept only for symbolic use."""
    return RationalTF([0.0, 1.0], [1.0])


def with_delay(fr: FrequencyResponse, tau_d: float) -> FrequencyResponse:
    """Apply a pure propagation delay ``exp(-i*omega*tau_d)``."""
    if tau_d < 0:
        raise NonPositive("delay must be non-negative")
    if tau_d == 0:
        return fr
    return FrequencyResponse(fr.omega, fr.values * np.exp(-1j * fr.omega * tau_d), fr.warning)


def transition_bandwidth(t_trans: float) -> float:
    """Dominant angular frequency of an edge with 10-90 % transition time ``t_trans``."""
    if not t_trans > 0:
        raise NonPositive(f"transition time must be positive, got {t_trans}")
    return 2 * np.pi * RISE_TIME_FACTOR / t_trans


def convolve_response(model: ImpulseResponseModel, input):
    """Causal convolution of a sampled input with ``h``, trapezoidal in time.

    ``y[n] = Ts * sum_k w_k h((n-k) Ts) x[k]`` with half weights on the two
    end samples of each integral.
    """
    if not model.causal:
        raise ValueError("convolve_response needs a causal model")
    x = np.asarray(input.samples, dtype=float)
    n = len(x)
    ts = 1.0 / input.fs
    h = evaluate_impulse(model, np.arange(n) * ts)
    full = np.convolve(h, x)[:n]
    y = full - 0.5 * h[0] * x - 0.5 * h * x[0]
    y = ts * y
    return Sequence(y, input.fs, input.n0)
