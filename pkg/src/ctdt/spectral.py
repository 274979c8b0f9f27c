"""Finite Z-transform, DTFT samples, direct DFT and leakage measurement."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dt import Sequence
from .errors import BadBin, OriginEvaluation

ZERO_MEAN_TOL = 1e-9


def z_transform_finite(x: Sequence, z: complex) -> complex:
    """``sum_k x[k] z**-k`` over the stored samples (k counted from ``x.n0``)."""
    z = complex(z)
    if z == 0:
        if len(x) > 1 or x.n0 != 0:
            raise OriginEvaluation("finite Z-transform diverges at the origin")
        return complex(x.samples[0]) if len(x) else 0j
    k = x.n0 + np.arange(len(x))
    return complex(np.sum(x.samples * z ** (-k.astype(float))))


def _dtft(v: np.ndarray, n: np.ndarray, theta: float) -> complex:
    return complex(np.sum(v * np.exp(-1j * theta * n)))


def dtft_sample(x: Sequence, theta: float) -> complex:
    """DTFT at ``theta`` rad/sample, i.e. the Z-transform on the unit circle."""
    n = (x.n0 + np.arange(len(x))).astype(float)
    return _dtft(x.samples, n, float(theta))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Unnormalized DFT bins of an N-sample block taken at rate ``fs``."""

    bins: np.ndarray
    fs: float = 1.0

    def __post_init__(self):
        b = np.array(self.bins, dtype=complex)
        b.flags.writeable = False
        object.__setattr__(self, "bins", b)

    @property
    def n(self) -> int:
        return len(self.bins)

    @property
    def bin_width(self) -> float:
        """Bin spacing in rad/s, ``2*pi*fs/N``."""
        return 2 * np.pi * self.fs / self.n

    @property
    def omega(self) -> np.ndarray:
        """Bin frequencies ``2*pi*k*fs/N`` over [0, 2*pi*fs)."""
        return self.bin_width * np.arange(self.n)

    @property
    def signed_omega(self) -> np.ndarray:
        """Bin frequencies with indices above N/2 mirrored to negative values."""
        k = np.arange(self.n)
        k = np.where(k > self.n // 2, k - self.n, k)
        return self.bin_width * k

    @property
    def nyquist_bin(self) -> int | None:
        return self.n // 2 if self.n % 2 == 0 else None

    @property
    def energy(self) -> np.ndarray:
        return np.abs(self.bins) ** 2

    def __len__(self) -> int:
        return self.n


def dft(x: Sequence) -> Spectrum:
    """Direct O(N^2) DFT; bin k is the DTFT sample at ``theta = 2*pi*k/N``."""
    n_samples = len(x)
    if n_samples < 1:
        raise ValueError("DFT of an empty sequence")
    idx = np.arange(n_samples, dtype=float)
    bins = [_dtft(x.samples, idx, 2 * np.pi * k / n_samples) for k in range(n_samples)]
    return Spectrum(np.array(bins), x.fs)


def parseval_mismatch(x: Sequence, spec: Spectrum | None = None) -> float:
    """Relative gap between time-domain energy and ``sum |X|^2 / N``."""
    spec = dft(x) if spec is None else spec
    e_t = float(np.sum(x.samples**2))
    e_f = float(np.sum(spec.energy)) / spec.n
    return abs(e_t - e_f) / max(e_t, 1e-300)


def leakage_ratio(x: Sequence, k0: int) -> float:
    """Share of spectral energy outside the tone bins ``k0`` and ``N - k0``.

    DC is excluded from the leakage count only for zero-mean input.
    """
    n = len(x)
    if n < 4:
        raise BadBin("need at least 4 samples")
    if not (0 < k0 < n / 2):
        raise BadBin(f"expected bin must satisfy 0 < k0 < N/2, got {k0}")
    energy = dft(x).energy
    total = float(np.sum(energy))
    if total == 0:
        return 0.0
    keep = np.zeros(n, dtype=bool)
    keep[[k0, n - k0]] = True
    if abs(float(np.mean(x.samples))) <= ZERO_MEAN_TOL:
        keep[0] = True
    return float(np.sum(energy[~keep]) / total)
