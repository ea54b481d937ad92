"""Material response of the plates in Gaussian-CGS units.

Frequencies are angular (rad/s), conductivities in s^-1. The reflection
factors are the amplitude ratios that enter the cavity denominator
``factor**2 * exp(-2 i omega p a / c) - 1``: for the impedance model the TE
factor is ``(1 + zeta p) / (1 - zeta p)`` and the TM factor
``(p + zeta) / (p - zeta)``. The dielectric factors are the matching
Lifshitz forms ``(s + p) / (s - p)`` and ``(eps p + s) / (eps p - s)``,
which reduce to the impedance ones when ``s ~ sqrt(eps) = 1 / zeta``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "C",
    "HBAR",
    "KB",
    "DrudeMetal",
    "GOLD",
    "BoundaryModel",
    "SingularityError",
    "drude_conductivity",
    "surface_impedance",
    "dielectric_function",
    "reflection_te",
    "reflection_tm",
    "round_trip_terms",
]


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 2.99792458e10  # cm/s
    hbar: float = 1.054571817e-27  # erg s
    kB: float = 1.380649e-16  # erg/K


CONSTANTS = PhysicalConstants()
C = CONSTANTS.c
HBAR = CONSTANTS.hbar
KB = CONSTANTS.kB

# Absolute guard on reflection-factor denominators.
SINGULAR_THRESHOLD = 1e-14


class SingularityError(ArithmeticError):
    """A denominator vanished where the contract says it cannot."""


@dataclass(frozen=True)
class DrudeMetal:
    """Drude metal: DC conductivity ``sigma0`` [s^-1], relaxation time ``tau`` [s]."""

    sigma0: float
    tau: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma0) and self.sigma0 > 0):
            raise ValueError(f"sigma0 must be finite and > 0, got {self.sigma0!r}")
        if not (math.isfinite(self.tau) and self.tau >= 0):
            raise ValueError(f"tau must be finite and >= 0, got {self.tau!r}")


GOLD = DrudeMetal(sigma0=3e17, tau=1.88e-14)


class BoundaryModel(enum.Enum):
    IMPEDANCE = "impedance"
    DIELECTRIC = "dielectric"
    PERFECT = "perfect"

    @classmethod
    def parse(cls, name: "str | BoundaryModel") -> "BoundaryModel":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown boundary model {name!r} (choose from {choices})") from None


def _check_positive(omega):
    if np.any(~(np.asarray(omega) > 0)):
        raise ValueError(f"omega must be > 0, got {omega!r}")


def drude_conductivity(omega, metal: DrudeMetal):
    """Complex conductivity ``sigma0 / (1 - i tau omega)`` [s^-1]."""
    if np.any(~(np.asarray(omega) >= 0)):
        raise ValueError(f"omega must be >= 0, got {omega!r}")
    return metal.sigma0 / (1.0 - 1j * metal.tau * omega)


def surface_impedance(omega, metal: DrudeMetal):
    """Leontovich impedance ``(1 - i) sqrt(omega / (8 pi sigma(omega)))``.

    Normal skin-effect form evaluated with the frequency-dependent Drude
    conductivity; principal branch of the square root, so ``Re zeta > 0``.
    """
    _check_positive(omega)
    sigma = drude_conductivity(omega, metal)
    return (1.0 - 1j) * np.sqrt(omega / (8.0 * math.pi * sigma))


def dielectric_function(omega, metal: DrudeMetal):
    """Drude permittivity ``1 + 4 pi i sigma(omega) / omega``."""
    _check_positive(omega)
    return 1.0 + 4j * math.pi * drude_conductivity(omega, metal) / omega


def _metal_depth(eps, p):
    # Normal wavenumber inside the metal in units of omega/c; Re s >= 0.
    s = cmath.sqrt(eps - 1.0 + p * p)
    return -s if s.real < 0 else s


def _guard(den, what, p, omega):
    if abs(den) < SINGULAR_THRESHOLD:
        raise SingularityError(f"{what} denominator vanishes at p={p!r}, omega={omega!r}")


def reflection_te(p, omega, metal: DrudeMetal, model: BoundaryModel):
    """TE amplitude factor on the contour point ``p``."""
    model = BoundaryModel.parse(model)
    if model is BoundaryModel.PERFECT:
        return 1.0 + 0j
    p = complex(p)
    if model is BoundaryModel.IMPEDANCE:
        zeta = complex(surface_impedance(omega, metal))
        den = 1.0 - zeta * p
        _guard(den, "TE impedance", p, omega)
        return (1.0 + zeta * p) / den
    s = _metal_depth(complex(dielectric_function(omega, metal)), p)
    den = s - p
    _guard(den, "TE dielectric", p, omega)
    return (s + p) / den


def reflection_tm(p, omega, metal: DrudeMetal, model: BoundaryModel):
    """TM amplitude factor on the contour point ``p``."""
    model = BoundaryModel.parse(model)
    if model is BoundaryModel.PERFECT:
        return 1.0 + 0j
    p = complex(p)
    if model is BoundaryModel.IMPEDANCE:
        zeta = complex(surface_impedance(omega, metal))
        den = p - zeta
        _guard(den, "TM impedance", p, omega)
        return (p + zeta) / den
    eps = complex(dielectric_function(omega, metal))
    s = _metal_depth(eps, p)
    den = eps * p - s
    _guard(den, "TM dielectric", p, omega)
    return (eps * p + s) / den


def round_trip_terms(te: bool, model: BoundaryModel, p, zeta, eps):
    """Return ``(r**2, r**2 - 1)`` for arrays of contour points.

    ``r**2 - 1`` is formed in closed form (``4 u / (1 - u)**2`` and its
    analogues) so that it keeps full relative accuracy when ``r`` is close
    to one, which is the normal situation for a good conductor.
    ``zeta`` and ``eps`` are scalars for the frequency at hand.
    """
    p = np.asarray(p, dtype=complex)
    if model is BoundaryModel.PERFECT:
        return np.ones_like(p), np.zeros_like(p)
    if model is BoundaryModel.IMPEDANCE:
        if te:
            num, den, cross = 1.0 + zeta * p, 1.0 - zeta * p, zeta * p
        else:
            num, den, cross = p + zeta, p - zeta, p * zeta
    else:
        s = np.sqrt(eps - 1.0 + p * p)
        s = np.where(s.real < 0, -s, s)
        if te:
            num, den, cross = s + p, s - p, s * p
        else:
            num, den, cross = eps * p + s, eps * p - s, eps * p * s
    if np.any(np.abs(den) < SINGULAR_THRESHOLD):
        raise SingularityError(f"reflection factor denominator vanishes for model {model.value}")
    # (num/den)**2 - 1 = 4 cross / den**2 for every factor above.
    excess = 4.0 * cross / den**2
    r = num / den
    return r * r, excess
