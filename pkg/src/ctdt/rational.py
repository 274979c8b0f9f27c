"""Real polynomials, rational transfer functions and their factored forms.

Coefficients are stored in ascending powers everywhere: ``coeffs[k]``
multiplies ``x**k``. For continuous-time systems ``x`` is the Laplace
variable ``s``; for discrete-time systems ``x`` is the unit delay ``z**-1``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    DomainMismatch,
    ImproperTF,
    NonConjugateRoots,
    ZeroPolynomial,
)

ROOT_TOL = 1e-8
RECOMBINE_TOL = 1e-9
STAB_TOL = 1e-12
DK_MAX_ITER = 500

_EPS = np.finfo(float).eps


def root_tol(r: complex) -> float:
    """Absolute clustering tolerance around root ``r``."""
    return ROOT_TOL * (1.0 + abs(r))


class Domain(enum.Enum):
    CT_S = "s"
    DT_ZINV = "z^-1"


class Stability(enum.Enum):
    STABLE = "stable"
    MARGINAL = "marginal"
    UNSTABLE = "unstable"


class Root(NamedTuple):
    value: complex
    multiplicity: int


# --------------------------------------------------------------------------
# Polynomial
# --------------------------------------------------------------------------

def _trim(coeffs: Iterable[float]) -> tuple[float, ...]:
    c = [float(v) for v in coeffs]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    if not c:
        c = [0.0]
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with ascending-power coefficients.

    Trailing zeros are stripped on construction; the zero polynomial is
    ``Polynomial((0.0,))``.
    """

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Iterable[float] | float = (0.0,)):
        if np.isscalar(coeffs):
            coeffs = (coeffs,)
        c = np.asarray(list(coeffs))
        if np.iscomplexobj(c):
            if np.any(c.imag != 0):
                raise TypeError("Polynomial coefficients must be real")
            c = c.real
        if not np.all(np.isfinite(c)):
            raise ValueError("Polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", _trim(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def __call__(self, x):
        return horner(self.coeffs, x)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if np.isscalar(other):
            return Polynomial((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0.0,) * (n - len(self.coeffs))
        b = other.coeffs + (0.0,) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-x for x in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(_convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial((1.0,))
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((0.0,))
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)})"


def horner(coeffs: Sequence, x):
    """Evaluate ascending-power ``coeffs`` at ``x`` (scalar or array)."""
    acc = coeffs[-1] * np.ones_like(x) if isinstance(x, np.ndarray) else coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def _convolve(a: Sequence, b: Sequence) -> list:
    # Plain double loop keeps the summation order fixed (np.convolve may not).
    out = [0.0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def polydiv(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Quotient and remainder of ``num / den``; remainder has degree < deg(den)."""
    if den.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    r = list(num.coeffs)
    d = den.coeffs
    nd = len(d) - 1
    if len(r) - 1 < nd:
        return Polynomial((0.0,)), num
    q = [0.0] * (len(r) - nd)
    for k in range(len(r) - 1 - nd, -1, -1):
        qk = r[k + nd] / d[-1]
        q[k] = qk
        for j in range(nd + 1):
            r[k + j] -= qk * d[j]
        r[k + nd] = 0.0
    return Polynomial(q), Polynomial(r[:nd] if nd > 0 else [0.0])


# --------------------------------------------------------------------------
# Root finding
# --------------------------------------------------------------------------

def _durand_kerner(a: np.ndarray) -> np.ndarray:
    """All roots of the monic complex polynomial with ascending coeffs ``a``."""
    n = len(a) - 1
    # Fujiwara bound on root moduli
    bound = 2.0 * max(abs(a[n - k]) ** (1.0 / k) for k in range(1, n + 1))
    if bound == 0.0:
        return np.zeros(n, dtype=complex)
    z = 0.5 * bound * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    for _ in range(DK_MAX_ITER):
        biggest = 0.0
        for i in range(n):
            diff = z[i] - np.delete(z, i)
            denom = np.prod(diff)
            if denom == 0:
                z[i] += bound * 1e-10 * (1 + 1j)
                biggest = np.inf
                continue
            step = horner(a, z[i]) / denom
            z[i] -= step
            biggest = max(biggest, abs(step) / (1.0 + abs(z[i])))
        if biggest <= 4 * _EPS:
            break
    return z


def _newton_polish(c: Sequence, dc: Sequence, z: complex) -> complex:
    pz = horner(c, z)
    dpz = horner(dc, z) if dc else 0.0
    if dpz == 0 or pz == 0:
        return z
    cand = z - pz / dpz
    return cand if abs(horner(c, cand)) <= abs(pz) else z


def _derivative_coeffs(c: Sequence, order: int = 1) -> list:
    c = list(c)
    for _ in range(order):
        c = [k * v for k, v in enumerate(c)][1:]
    return c


def _multiplicity_radius(m: int, r: complex) -> float:
    # Simultaneous iteration splits an m-fold root into a ring of radius ~eps**(1/m).
    return (1.0 + abs(r)) * max(ROOT_TOL, 10.0 * _EPS ** (1.0 / m))


def _cluster(z: Sequence[complex], coeffs: Sequence) -> list[Root]:
    """Merge numerically split repeated roots into (mean, multiplicity) pairs.

    A seed root plus its ``m - 1`` nearest neighbours form a candidate
    ``m``-fold root when all of them lie within the multiplicity-dependent
    radius of their mean. Larger admissible groups are taken first.
    """
    free = [complex(v) for v in z]
    clusters = []
    while free:
        best = None
        for seed in free:
            near = sorted(free, key=lambda v: abs(v - seed))
            for m in range(len(near), 1, -1):
                members = near[:m]
                mean = sum(members) / m
                rad = max(abs(v - mean) for v in members)
                if rad <= _multiplicity_radius(m, mean):
                    if best is None or (m, -rad) > (len(best[1]), -best[0]):
                        best = (rad, members)
                    break
        if best is None:
            clusters.extend([v] for v in free)
            break
        clusters.append(best[1])
        for v in best[1]:
            free.remove(v)

    out = []
    for members in clusters:
        m = len(members)
        r = sum(members) / m
        # polish on the (m-1)-th derivative, where the root is simple
        dm = _derivative_coeffs(coeffs, m - 1)
        r = _newton_polish(dm, _derivative_coeffs(dm), complex(r))
        out.append(Root(complex(r), m))
    return out


def _symmetrize(roots: list[Root]) -> list[Root]:
    """Force exact conjugate pairing for roots of a real polynomial."""
    out: list[Root] = []
    pending = []
    for r, m in roots:
        if abs(r.imag) <= root_tol(r):
            out.append(Root(complex(r.real, 0.0), m))
        else:
            pending.append(Root(r, m))
    used = [False] * len(pending)
    for i, (r, m) in enumerate(pending):
        if used[i] or r.imag < 0:
            continue
        best, best_d = None, np.inf
        for j, (q, k) in enumerate(pending):
            if used[j] or j == i or k != m or q.imag > 0:
                continue
            d = abs(q - r.conjugate())
            if d < best_d:
                best, best_d = j, d
        used[i] = True
        if best is None:
            out.append(Root(r, m))
            continue
        used[best] = True
        avg = 0.5 * (r + pending[best].value.conjugate())
        out.append(Root(avg, m))
        out.append(Root(avg.conjugate(), m))
    for i, (r, m) in enumerate(pending):
        if not used[i]:
            out.append(Root(r, m))
    return out


def _sort_roots(roots: Iterable[Root]) -> list[Root]:
    return sorted(roots, key=lambda r: (r.value.real, abs(r.value.imag), r.value.imag))


def poly_roots(p: Polynomial | Sequence[float]) -> list[Root]:
    """Roots of a real polynomial with multiplicities.

    Durand-Kerner simultaneous iteration (at most 500 sweeps), one Newton
    polish per root, clustering of split repeated roots and exact conjugate
    pairing.

    Raises
    ------
    ZeroPolynomial
        If ``p`` is identically zero.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no finite root set")
    c = list(p.coeffs)
    roots: list[Root] = []
    k0 = 0
    while c[k0] == 0.0:
        k0 += 1
    if k0:
        roots.append(Root(0j, k0))
    c = c[k0:]
    n = len(c) - 1
    if n == 1:
        roots.append(Root(complex(-c[0] / c[1]), 1))
    elif n >= 2:
        a = np.asarray(c, dtype=complex) / c[-1]
        z = _durand_kerner(a)
        dc = _derivative_coeffs(c)
        z = [_newton_polish(c, dc, complex(zi)) for zi in z]
        roots.extend(_symmetrize(_cluster(z, c)))
    return _sort_roots(roots)


def poly_from_roots(roots: Iterable[Root], lead: float = 1.0) -> Polynomial:
    """Real polynomial ``lead * prod (x - r)**m``; roots must be conjugate-closed."""
    roots = list(roots)
    _check_conjugate(roots)
    out = Polynomial((float(lead),))
    for r, m in roots:
        if r.imag == 0:
            factor = Polynomial((-r.real, 1.0))
        elif r.imag > 0:
            factor = Polynomial((r.real * r.real + r.imag * r.imag, -2.0 * r.real, 1.0))
        else:
            continue
        for _ in range(m):
            out = out * factor
    return out


def _check_conjugate(roots: list[Root]) -> None:
    for r, m in roots:
        if r.imag == 0:
            continue
        partners = [k for q, k in roots if abs(q - r.conjugate()) <= root_tol(r)]
        if m not in partners:
            raise NonConjugateRoots(f"root {r} (multiplicity {m}) has no conjugate partner")
        if r.imag > 0 and not any(q == r.conjugate() and k == m for q, k in roots):
            raise NonConjugateRoots(f"root {r} is not exactly conjugate-paired")


# --------------------------------------------------------------------------
# Transfer functions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalTF:
    """Ratio of real polynomials tagged with its domain.

    For ``Domain.DT_ZINV`` both polynomials are in powers of the unit delay,
    so ``num = [b0, b1, ...]`` and ``den = [a0, a1, ...]`` read directly as
    difference-equation coefficients.
    """

    num: Polynomial
    den: Polynomial
    domain: Domain = Domain.CT_S

    def __init__(self, num, den, domain: Domain = Domain.CT_S):
        num = num if isinstance(num, Polynomial) else Polynomial(num)
        den = den if isinstance(den, Polynomial) else Polynomial(den)
        if den.is_zero():
            raise ZeroPolynomial("transfer-function denominator is zero")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "domain", Domain(domain))

    def __call__(self, x):
        """Value at ``s`` (CT) or at ``z`` (DT)."""
        if self.domain is Domain.DT_ZINV:
            x = 1.0 / np.asarray(x, dtype=complex) if isinstance(x, np.ndarray) else 1.0 / complex(x)
        return self.num(x) / self.den(x)

    def _same_domain(self, other: "RationalTF") -> None:
        if other.domain is not self.domain:
            raise DomainMismatch(f"{self.domain.name} vs {other.domain.name}")

    def _lift(self, other):
        if isinstance(other, RationalTF):
            self._same_domain(other)
            return other
        if np.isscalar(other):
            return RationalTF([other], [1.0], self.domain)
        return NotImplemented

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RationalTF(self.num * other.num, self.den * other.den, self.domain)

    __rmul__ = __mul__

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalTF(self.num + other.num, self.den, self.domain)
        return RationalTF(self.num * other.den + other.num * self.den,
                          self.den * other.den, self.domain)

    __radd__ = __add__

    def __neg__(self):
        return RationalTF(-self.num, self.den, self.domain)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def reduce(self) -> "RationalTF":
        """Cancel numerator/denominator roots that agree within ROOT_TOL."""
        if self.num.is_zero():
            return RationalTF([0.0], [1.0], self.domain)
        pzg = to_pzg(self)
        zeros = [list(z) for z in pzg.zeros]
        poles = [list(p) for p in pzg.poles]
        for z in zeros:
            for p in poles:
                if z[1] and p[1] and abs(z[0] - p[0]) <= root_tol(z[0]):
                    k = min(z[1], p[1])
                    z[1] -= k
                    p[1] -= k
        out = PoleZeroGain(
            tuple(Root(v, m) for v, m in zeros if m),
            tuple(Root(v, m) for v, m in poles if m),
            pzg.gain,
            self.domain,
        )
        return from_pzg(out)

    def __repr__(self) -> str:
        return f"RationalTF(num={list(self.num.coeffs)}, den={list(self.den.coeffs)}, {self.domain.name})"


@dataclass(frozen=True)
class PoleZeroGain:
    """Factored form ``K * prod(x - zero) / prod(x - pole)``.

    For DT systems roots are z-plane locations (origin included), and ``gain``
    is the ratio of the leading coefficients of the positive-power
    polynomials, which for a causal system equals ``b_d / a_0`` with ``b_d``
    the first nonzero feedforward tap.
    """

    zeros: tuple[Root, ...]
    poles: tuple[Root, ...]
    gain: float
    domain: Domain = Domain.CT_S

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(Root(complex(v), int(m)) for v, m in self.zeros))
        object.__setattr__(self, "poles", tuple(Root(complex(v), int(m)) for v, m in self.poles))
        object.__setattr__(self, "gain", float(self.gain))

    def pole_values(self) -> list[complex]:
        return [r for r, m in self.poles for _ in range(m)]

    def zero_values(self) -> list[complex]:
        return [r for r, m in self.zeros for _ in range(m)]


def _to_zpoly(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    # multiply through by z**M so both become polynomials in z
    m = max(num.degree, den.degree)
    pad = lambda p: list(p.coeffs) + [0.0] * (m + 1 - len(p.coeffs))
    return Polynomial(pad(num)[::-1]), Polynomial(pad(den)[::-1])


def _from_zpoly(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    # reversal with common padding is its own inverse
    return _to_zpoly(num, den)


def to_pzg(tf: RationalTF) -> PoleZeroGain:
    """Factor a transfer function into zeros, poles and real gain."""
    num, den = tf.num, tf.den
    if tf.domain is Domain.DT_ZINV:
        num, den = _to_zpoly(num, den)
    if num.is_zero():
        return PoleZeroGain((), tuple(poly_roots(den)), 0.0, tf.domain)
    return PoleZeroGain(
        tuple(poly_roots(num)),
        tuple(poly_roots(den)),
        num.leading / den.leading,
        tf.domain,
    )


def from_pzg(pzg: PoleZeroGain) -> RationalTF:
    """Expand a factored form back to real-coefficient polynomials.

    Raises
    ------
    NonConjugateRoots
        If a complex zero or pole lacks its conjugate.
    """
    num = poly_from_roots(pzg.zeros, pzg.gain)
    den = poly_from_roots(pzg.poles, 1.0)
    if pzg.domain is Domain.DT_ZINV:
        num, den = _from_zpoly(num, den)
    return RationalTF(num, den, pzg.domain)


def cascade(stages: Sequence[RationalTF]) -> RationalTF:
    """Series connection: the product of the stage transfer functions."""
    stages = list(stages)
    if not stages:
        raise ValueError("cascade needs at least one stage")
    out = stages[0]
    for st in stages[1:]:
        if st.domain is not out.domain:
            raise DomainMismatch(f"cannot cascade {out.domain.name} with {st.domain.name}")
        out = out * st
    return out


def is_proper(tf: RationalTF) -> bool:
    """Realizability check.

    CT: numerator degree does not exceed denominator degree. DT (polynomials
    in the unit delay): the denominator has a nonzero constant term, i.e. the
    recursion can be solved for the current output.
    """
    if tf.domain is Domain.CT_S:
        return tf.num.degree <= tf.den.degree
    return tf.den.coeffs[0] != 0.0


def is_stable(system: PoleZeroGain | RationalTF) -> Stability:
    """Three-valued stability from pole locations.

    Boundary poles within STAB_TOL are marginal when simple and unstable when
    repeated (their modes grow polynomially).
    """
    pzg = to_pzg(system) if isinstance(system, RationalTF) else system
    verdict = Stability.STABLE
    for p, m in pzg.poles:
        margin = -p.real if pzg.domain is Domain.CT_S else 1.0 - abs(p)
        if margin < -STAB_TOL:
            return Stability.UNSTABLE
        if margin <= STAB_TOL:
            if m > 1:
                return Stability.UNSTABLE
            verdict = Stability.MARGINAL
    return verdict


# --------------------------------------------------------------------------
# Partial fractions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ModalTerm:
    """``sum_k coeffs[k-1] / (s - pole)**k`` for k = 1..multiplicity."""

    pole: complex
    coeffs: tuple[complex, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class PartialFractionExpansion:
    terms: tuple[ModalTerm, ...]
    direct: Polynomial = field(default_factory=lambda: Polynomial((0.0,)))

    def __call__(self, s):
        s = np.asarray(s, dtype=complex) if isinstance(s, np.ndarray) else complex(s)
        total = self.direct(s) + 0j
        for t in self.terms:
            d = s - t.pole
            for k, c in enumerate(t.coeffs, start=1):
                total = total + c / d**k
        return total

    @property
    def order(self) -> int:
        return sum(t.multiplicity for t in self.terms)


def _taylor(coeffs: Sequence, x0: complex, n: int) -> list[complex]:
    """First ``n`` Taylor coefficients of the polynomial around ``x0``."""
    c = [complex(v) for v in coeffs]
    out = []
    for _ in range(n):
        if not c:
            out.append(0j)
            continue
        # synthetic division by (x - x0): remainder is the next coefficient
        acc = 0j
        q = [0j] * len(c)
        for k in range(len(c) - 1, -1, -1):
            acc = acc * x0 + c[k]
            q[k] = acc
        out.append(q[0])
        c = q[1:]
    return out


def _series_div(num: list[complex], den: list[complex]) -> list[complex]:
    g = []
    for k in range(len(num)):
        acc = num[k]
        for i in range(1, k + 1):
            acc -= den[i] * g[k - i]
        g.append(acc / den[0])
    return g


def partial_fractions(tf: RationalTF) -> PartialFractionExpansion:
    """Modal expansion of a proper CT transfer function.

    Each pole of multiplicity ``m`` yields coefficients ``c_1..c_m`` of
    ``c_k / (s - p)**k``; for simple poles ``c_1`` is the residue
    ``lim (s - p) H(s)``.

    Raises
    ------
    ImproperTF
        If the numerator degree exceeds the denominator degree.
    DomainMismatch
        For DT transfer functions.
    """
    if tf.domain is not Domain.CT_S:
        raise DomainMismatch("partial fractions are provided for CT systems only")
    if tf.num.degree > tf.den.degree:
        raise ImproperTF("numerator degree exceeds denominator degree")
    direct, rem = polydiv(tf.num, tf.den)
    poles = poly_roots(tf.den)
    terms = {}
    for j, (p, m) in enumerate(poles):
        others = [1.0 + 0j]
        for i, (q, k) in enumerate(poles):
            if i == j:
                continue
            for _ in range(k):
                others = [a - q * b for a, b in zip([0j] + others, others + [0j])]
        others = [tf.den.leading * v for v in others]
        g = _series_div(_taylor(rem.coeffs, p, m), _taylor(others, p, m))
        terms[j] = [g[m - k] for k in range(1, m + 1)]
    # conjugate poles get exactly conjugate coefficients
    for j, (p, m) in enumerate(poles):
        if p.imag > 0:
            for i, (q, k) in enumerate(poles):
                if q == p.conjugate() and k == m:
                    terms[i] = [c.conjugate() for c in terms[j]]
        elif p.imag == 0:
            terms[j] = [complex(c.real, 0.0) for c in terms[j]]
    return PartialFractionExpansion(
        tuple(ModalTerm(p, tuple(terms[j])) for j, (p, m) in enumerate(poles)),
        direct,
    )


__all__ = [
    "Domain", "Stability", "Root", "Polynomial", "RationalTF", "PoleZeroGain",
    "ModalTerm", "PartialFractionExpansion", "poly_roots", "poly_from_roots",
    "polydiv", "to_pzg", "from_pzg", "cascade", "is_proper", "is_stable",
    "partial_fractions", "horner", "ROOT_TOL", "RECOMBINE_TOL", "STAB_TOL",
    "root_tol",
]
