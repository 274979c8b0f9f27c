"""Mappings between the s-plane and the z-plane, and first-order DT filters."""
from __future__ import annotations

import cmath
import math

import numpy as np

from .dt import DifferenceEquation
from .errors import (
    BadPole,
    DomainMismatch,
    ImproperTF,
    NonPositive,
    NyquistViolation,
    ZeroArgument,
)
from .rational import (
    Domain,
    PoleZeroGain,
    Polynomial,
    RationalTF,
    Root,
    from_pzg,
    is_proper,
    to_pzg,
)

_DC_TINY = 1e-12


def _require_ct(tf: RationalTF) -> None:
    if tf.domain is not Domain.CT_S:
        raise DomainMismatch("expected a CT transfer function")


def _substitute(tf: RationalTF, num_sub: Polynomial, den_sub: Polynomial) -> RationalTF:
    """Replace ``s`` by ``num_sub(w)/den_sub(w)`` and clear denominators."""
    n = tf.den.degree

    def image(p: Polynomial) -> Polynomial:
        out = Polynomial((0.0,))
        for j, c in enumerate(p.coeffs):
            if c == 0.0:
                continue
            out = out + c * (num_sub**j) * (den_sub ** (n - j))
        return out

    return RationalTF(image(tf.num), image(tf.den), Domain.DT_ZINV)


def backward_euler(tf: RationalTF, ts: float) -> RationalTF:
    """Substitute ``s <- (1 - z**-1) / Ts``.

    Left-half-plane poles land strictly inside the unit circle.
    """
    _require_ct(tf)
    if not ts > 0:
        raise NonPositive(f"Ts must be positive, got {ts}")
    if not is_proper(tf):
        raise ImproperTF("backward Euler needs a proper transfer function")
    # (1 - w)**j * Ts**(n - j): the Ts factors ride on the "denominator" side
    return _substitute(tf, Polynomial((1.0, -1.0)), Polynomial((ts,)))


def tustin(tf: RationalTF, ts: float) -> RationalTF:
    """Bilinear substitution ``s <- (2/Ts) (1 - z**-1) / (1 + z**-1)``."""
    _require_ct(tf)
    if not ts > 0:
        raise NonPositive(f"Ts must be positive, got {ts}")
    if not is_proper(tf):
        raise ImproperTF("Tustin needs a proper transfer function")
    return _substitute(tf, Polynomial((2.0, -2.0)), Polynomial((ts, ts)))


def _check_nyquist(roots, ts: float) -> None:
    for r, _ in roots:
        if abs(r.imag) * ts >= math.pi:
            raise NyquistViolation(
                f"mode at {r} aliases: |Im(s)|*Ts = {abs(r.imag) * ts:.4g} >= pi")


def matched_pz(pzg: PoleZeroGain, ts: float, gain_match_omega: float | None = None) -> PoleZeroGain:
    """Map every root through ``z = exp(s*Ts)`` and fix the gain at one frequency.

    The gain is chosen so ``|H_dt(exp(i*w*Ts))| = |H_ct(i*w)|`` at
    ``w = gain_match_omega`` (sign matched at DC). By default ``w = 0`` unless
    the CT system has a DC null, in which case ``w = pi / (2*Ts)``. Root
    deficits (more poles than zeros) stay as pure delays.

    Raises
    ------
    NyquistViolation
        If a root has ``|Im(s)|*Ts >= pi`` or the match frequency is beyond
        Nyquist.
    """
    if pzg.domain is not Domain.CT_S:
        raise DomainMismatch("matched_pz maps CT roots")
    if not ts > 0:
        raise NonPositive(f"Ts must be positive, got {ts}")
    _check_nyquist(pzg.zeros, ts)
    _check_nyquist(pzg.poles, ts)

    ct = from_pzg(pzg)
    if gain_match_omega is None:
        den0 = ct.den(0.0)
        dc = ct.num(0.0) / den0 if den0 != 0 else np.inf
        usable = np.isfinite(dc) and abs(dc) > _DC_TINY
        gain_match_omega = 0.0 if usable else math.pi / (2 * ts)
    w = float(gain_match_omega)
    if not 0 <= w < math.pi / ts:
        raise NyquistViolation(f"gain match frequency {w} rad/s outside [0, pi/Ts)")

    zeros = tuple(Root(_exp_map(r, ts), m) for r, m in pzg.zeros)
    poles = tuple(Root(_exp_map(r, ts), m) for r, m in pzg.poles)
    unit = from_pzg(PoleZeroGain(zeros, poles, 1.0, Domain.DT_ZINV))
    h_ct = complex(ct(1j * w))
    h_dt = complex(unit(cmath.exp(1j * w * ts)))
    if h_dt == 0:
        raise ZeroArgument("DT prototype vanishes at the gain match frequency")
    if w == 0:
        gain = h_ct.real / h_dt.real
    else:
        gain = abs(h_ct) / abs(h_dt)
    return PoleZeroGain(zeros, poles, gain, Domain.DT_ZINV)


def _exp_map(s: complex, ts: float) -> complex:
    z = cmath.exp(s * ts)
    # keep real roots real and conjugates exactly conjugate
    return complex(z.real, 0.0) if s.imag == 0 else z


def exact_map(s: complex, ts: float) -> complex:
    """``z = exp(s*Ts)``."""
    if not ts > 0:
        raise NonPositive(f"Ts must be positive, got {ts}")
    return _exp_map(complex(s), ts)


def inv_map(z: complex, ts: float) -> complex:
    """Principal-branch ``s = log(z) / Ts`` with ``Im(s)*Ts`` in (-pi, pi]."""
    z = complex(z)
    if z == 0:
        raise ZeroArgument("log(0) is undefined")
    if not ts > 0:
        raise NonPositive(f"Ts must be positive, got {ts}")
    if z.imag == 0:
        z = complex(z.real, 0.0)  # -0.0 would select the -pi branch
    return cmath.log(z) / ts


def euler_pole(tau: float, ts: float) -> float:
    """Backward-Euler image of the pole ``-1/tau``: ``tau / (tau + Ts)``."""
    if not (tau > 0 and ts > 0):
        raise NonPositive("tau and Ts must be positive")
    return tau / (tau + ts)


def dt_lpf(tau: float, ts: float) -> DifferenceEquation:
    """``(1 - z_p) z**-1 / (1 - z_p z**-1)`` with ``z_p = tau / (tau + Ts)``; unit DC gain."""
    return dt_lpf_from_pole(euler_pole(tau, ts))


def dt_lpf_from_pole(z_p: float) -> DifferenceEquation:
    if not 0 <= z_p < 1:
        raise BadPole(f"low-pass pole must be in [0, 1), got {z_p}")
    return DifferenceEquation([0.0, 1.0 - z_p], [1.0, -z_p])


def dt_hpf(z_p: float) -> DifferenceEquation:
    """``(1 - z**-1) / (1 - z_p z**-1)``: DC zero compensated by a pole at ``z_p``."""
    if not 0 < z_p < 1:
        raise BadPole(f"high-pass pole must be in (0, 1), got {z_p}")
    return DifferenceEquation([1.0, -1.0], [1.0, -z_p])


def negative_pole_filter(z_p: float) -> DifferenceEquation:
    """``(1 + z_p) z**-1 / (1 + z_p z**-1)``: pole at ``-z_p``, boosts near Nyquist."""
    if not 0 < z_p < 1:
        raise BadPole(f"pole modulus must be in (0, 1), got {z_p}")
    return DifferenceEquation([0.0, 1.0 + z_p], [1.0, z_p])


def retune(pzg: PoleZeroGain, fs_old: float, fs_new: float) -> PoleZeroGain:
    """Re-place DT roots for a new sample rate holding their CT images fixed.

    Each root goes through ``log`` at the old period and ``exp`` at the new
    one. Roots at the origin are pure delays and stay put. The gain keeps the
    DC response when it is finite and nonzero; otherwise it is unchanged.
    """
    if pzg.domain is not Domain.DT_ZINV:
        raise DomainMismatch("retune expects a DT pole-zero-gain form")
    if not (fs_old > 0 and fs_new > 0):
        raise NonPositive("sample rates must be positive")
    ts_old, ts_new = 1.0 / fs_old, 1.0 / fs_new

    def move(roots):
        out = []
        for r, m in roots:
            if r == 0:
                out.append(Root(0j, m))
                continue
            s = inv_map(r, ts_old)
            if abs(s.imag) * ts_new >= math.pi:
                raise NyquistViolation(f"CT mode {s} exceeds the new Nyquist limit")
            out.append(Root(_exp_map(s, ts_new), m))
        return tuple(out)

    if fs_new == fs_old:
        return pzg
    zeros, poles = move(pzg.zeros), move(pzg.poles)
    old_dc = _dc(pzg)
    unit = PoleZeroGain(zeros, poles, 1.0, Domain.DT_ZINV)
    new_dc = _dc(unit)
    gain = pzg.gain
    if np.isfinite(old_dc) and abs(old_dc) > _DC_TINY and np.isfinite(new_dc) and abs(new_dc) > _DC_TINY:
        gain = old_dc / new_dc
    return PoleZeroGain(zeros, poles, gain, Domain.DT_ZINV)


def _dc(pzg: PoleZeroGain) -> float:
    tf = from_pzg(pzg)
    den = tf.den(1.0)
    return tf.num(1.0) / den if den != 0 else np.inf


def discretize(tf: RationalTF, ts: float, method: str = "euler") -> RationalTF:
    """Dispatch to ``euler``, ``tustin`` or ``matched``."""
    if method == "euler":
        return backward_euler(tf, ts)
    if method == "tustin":
        return tustin(tf, ts)
    if method == "matched":
        return from_pzg(matched_pz(to_pzg(tf), ts))
    raise ValueError(f"unknown discretization method {method!r}")
