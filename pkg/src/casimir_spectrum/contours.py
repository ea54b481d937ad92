"""Integration paths in the complex ``p`` plane and the per-mode integrand.

``p`` is the normal wave-vector component in units of ``omega / c``. The
path splits into the plane-wave segment C1 (``p`` real, from 1 down to 0)
and the evanescent segment C2 (``p = i q`` with ``q`` from 0 to infinity).
On both, the quantity integrated is::

    p**2 / (r(p)**2 * exp(-2 i omega p a / c) - 1)

with ``r`` the TE or TM amplitude factor of the plates.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _backend
from ._integrands import RESONANCE_THRESHOLD, c1_values, c2_values
from .materials import (
    C,
    GOLD,
    BoundaryModel,
    DrudeMetal,
    SingularityError,
    dielectric_function,
    round_trip_terms,
    surface_impedance,
)
from .quadrature import DEFAULT_SETTINGS, QuadratureResult, QuadratureSettings, truncation_point

__all__ = [
    "Mode",
    "Contour",
    "PlateSystem",
    "FrequencyParams",
    "frequency_params",
    "integrand",
    "c1_real_form",
    "c2_real_form",
    "q_max",
    "path_integral",
]

_MODEL_CODES = {BoundaryModel.IMPEDANCE: 0, BoundaryModel.DIELECTRIC: 1, BoundaryModel.PERFECT: 2}


class Mode(enum.Enum):
    TE = "te"
    TM = "tm"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ValueError(f"unknown mode {name!r} (choose from te, tm)") from None


class Contour(enum.Enum):
    """C1: ``p(t) = 1 - t``, t in [0, 1]. C2: ``p(q) = i q``, q in (0, inf)."""

    C1 = "c1"
    C2 = "c2"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ValueError(f"unknown contour {name!r} (choose from c1, c2)") from None

    def point(self, s):
        """Contour point for parameter ``s`` (``t`` on C1, ``q`` on C2)."""
        if self is Contour.C1:
            return 1.0 - np.asarray(s, dtype=float)
        return 1j * np.asarray(s, dtype=float)

    @property
    def jacobian(self) -> complex:
        """``dp/ds`` along the oriented path."""
        return -1.0 + 0j if self is Contour.C1 else 1j


@dataclass(frozen=True)
class PlateSystem:
    """Two identical plates: gap [cm], temperature [K], metal and boundary model."""

    gap: float
    temperature: float
    metal: DrudeMetal = GOLD
    model: BoundaryModel = field(default=BoundaryModel.IMPEDANCE)

    def __post_init__(self):
        if not (math.isfinite(self.gap) and self.gap > 0):
            raise ValueError(f"gap must be finite and > 0, got {self.gap!r}")
        if not (math.isfinite(self.temperature) and self.temperature > 0):
            raise ValueError(f"temperature must be finite and > 0, got {self.temperature!r}")
        object.__setattr__(self, "model", BoundaryModel.parse(self.model))

    def with_model(self, model) -> "PlateSystem":
        return replace(self, model=BoundaryModel.parse(model))


@dataclass(frozen=True)
class FrequencyParams:
    x: float  # 2 omega a / c
    zeta: complex
    eps: complex

    @property
    def decay_length(self) -> float:
        """Decay length in ``q`` of the evanescent integrand, ``c / (2 omega a)``."""
        return 1.0 / self.x


def frequency_params(omega: float, system: PlateSystem) -> FrequencyParams:
    if not omega > 0:
        raise ValueError(f"omega must be > 0, got {omega!r}")
    return FrequencyParams(
        x=2.0 * omega * system.gap / C,
        zeta=complex(surface_impedance(omega, system.metal)),
        eps=complex(dielectric_function(omega, system.metal)),
    )


def _cexpm1(z: complex) -> complex:
    a, b = z.real, z.imag
    return complex(math.expm1(a) * math.cos(b) - 2.0 * math.sin(0.5 * b) ** 2, math.exp(a) * math.sin(b))


def integrand(mode, p, omega: float, system: PlateSystem) -> complex:
    """``p**2 / (r**2 exp(-2 i omega p a / c) - 1)`` at a single contour point."""
    mode = Mode.parse(mode)
    fp = frequency_params(omega, system)
    p = complex(p)
    if p == 0:
        return 0j  # removable: the integrand vanishes linearly in p
    r2, excess = round_trip_terms(mode is Mode.TE, system.model, p, fp.zeta, fp.eps)
    r2 = complex(r2)
    excess = complex(excess)
    r2em = r2 * _cexpm1(-1j * fp.x * p)
    D = r2em + excess
    scale = abs(r2) * min(abs(fp.x * p), 1.0) + abs(excess)
    if abs(D) < RESONANCE_THRESHOLD * scale or D == 0:
        raise SingularityError(f"cavity resonance: denominator vanishes at p={p!r}, omega={omega!r}")
    return p * p / D


def c1_real_form(mode, p, omega: float, system: PlateSystem):
    """Real integrand over ``p`` in [0, 1] whose integral is ``Re`` of the C1 path integral.

    Carries the minus sign of the 1 -> 0 orientation.
    """
    fp = frequency_params(omega, system)
    out = c1_values(Mode.parse(mode) is Mode.TE, system.model, p, fp.x, fp.zeta, fp.eps)
    return float(out) if np.ndim(out) == 0 else out


def c2_real_form(mode, q, omega: float, system: PlateSystem):
    """``Re[-i q**2 / (r(iq)**2 exp(2 omega q a / c) - 1)]`` for ``q > 0``."""
    if np.any(~(np.asarray(q) > 0)):
        raise ValueError(f"q must be > 0, got {q!r}")
    fp = frequency_params(omega, system)
    out = c2_values(Mode.parse(mode) is Mode.TE, system.model, q, fp.x, fp.zeta, fp.eps)
    return float(out) if np.ndim(out) == 0 else out


def q_max(omega: float, system: PlateSystem) -> float:
    """Truncation of C2: ``max(10, 40 c / (2 omega a))``."""
    return truncation_point(frequency_params(omega, system).decay_length)


def _c2_scale(fp: FrequencyParams, model: BoundaryModel) -> float:
    # Where the integrand changes character: the decay length, or the
    # inverse impedance where large-q reflection departs from unity.
    if model is BoundaryModel.PERFECT:
        return fp.decay_length
    return min(fp.decay_length, 1.0 / abs(fp.zeta))


def path_integral(
    mode,
    contour,
    omega: float,
    system: PlateSystem,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> QuadratureResult:
    """``Re`` of the oriented path integral of :func:`integrand` over one segment.

    C2 is truncated at :func:`q_max`; the discarded tail is bounded from the
    integrand value at the cut and included in the error estimate.
    """
    mode = Mode.parse(mode)
    contour = Contour.parse(contour)
    fp = frequency_params(omega, system)
    te = int(mode is Mode.TE)
    code = _MODEL_CODES[system.model]
    if contour is Contour.C1:
        value, err, evals, ok = _backend.c1_integral(
            te, code, fp.x, fp.zeta, fp.eps, settings.rel_tol, settings.abs_tol, settings.max_subdivisions
        )
        return QuadratureResult(float(value), float(err), evals, bool(ok))

    cut = truncation_point(fp.decay_length)
    scale = _c2_scale(fp, system.model)
    value, err, evals, ok = _backend.c2_integral(
        te, code, fp.x, fp.zeta, fp.eps, scale, math.log1p(cut / scale),
        settings.rel_tol, settings.abs_tol, settings.max_subdivisions,
    )
    tail = 1.2 * abs(float(c2_values(bool(te), system.model, cut, fp.x, fp.zeta, fp.eps))) * fp.decay_length
    err += tail
    ok = bool(ok and err <= settings.tolerance(value))
    return QuadratureResult(float(value), float(err), evals + 1, ok)
