"""Complex frequency response sampled on a grid."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class FrequencyResponse:
    """Samples ``H(i*omega)`` (CT) or ``H(exp(i*omega*Ts))`` (DT).

    ``warning`` carries a short note when the response is outside its
    interpretive range (unstable system, grid beyond Nyquist).
    """

    omega: np.ndarray
    values: np.ndarray
    warning: str | None = None

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float)
        values = np.array(self.values, dtype=complex)
        if omega.shape != values.shape:
            raise ValueError("omega and values must have the same shape")
        omega.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "values", values)

    @property
    def freq_hz(self) -> np.ndarray:
        return self.omega / (2 * np.pi)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def magnitude_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(np.abs(self.values))

    @property
    def phase(self) -> np.ndarray:
        """Unwrapped phase in radians (jumps larger than pi corrected by 2*pi)."""
        return np.unwrap(np.angle(self.values))

    def __len__(self) -> int:
        return len(self.omega)
