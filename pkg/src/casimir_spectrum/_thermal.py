"""Planck occupation shared by the spectrum and force modules."""
import numpy as np

from .materials import HBAR, KB


def planck_weight(omega, temperature):
    """Thermal photon occupation ``1 / (exp(hbar omega / kB T) - 1)``."""
    if np.any(~(np.asarray(omega) > 0)):
        raise ValueError(f"omega must be > 0, got {omega!r}")
    if not temperature > 0:
        raise ValueError(f"temperature must be > 0, got {temperature!r}")
    x = HBAR * np.asarray(omega, dtype=float) / (KB * temperature)
    with np.errstate(over="ignore"):
        g = 1.0 / np.expm1(x)
    return float(g) if np.ndim(g) == 0 else g


def thermal_frequency(temperature: float) -> float:
    """``kB T / hbar`` in rad/s."""
    return KB * temperature / HBAR

