"""Spectral densities of the thermal force and frequency sweeps.

The spectral density of one (mode, contour) sector is::

    F_omega = omega**3 * g(omega) * Re( path integral )

with ``g`` the Planck occupation. The ``hbar / (pi**2 c**3)`` prefactor of
the force is applied in :mod:`casimir_spectrum.force`.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from ._thermal import planck_weight
from .contours import Contour, Mode, PlateSystem, path_integral
from .materials import SingularityError
from .quadrature import DEFAULT_SETTINGS, ConvergenceError, QuadratureResult, QuadratureSettings

__all__ = [
    "FrequencyGrid",
    "SpectralSample",
    "spectral_density",
    "spectral_density_result",
    "sweep",
    "thread_count",
]


@dataclass(frozen=True)
class FrequencyGrid:
    """Logarithmic grid of angular frequencies [rad/s]."""

    omega_min: float = 1e10
    omega_max: float = 1e14
    points: int = 400

    def __post_init__(self):
        if not (0 < self.omega_min < self.omega_max and math.isfinite(self.omega_max)):
            raise ValueError(f"need 0 < omega_min < omega_max, got {self.omega_min!r}, {self.omega_max!r}")
        if int(self.points) < 2:
            raise ValueError(f"points must be >= 2, got {self.points!r}")

    def omegas(self) -> np.ndarray:
        return np.logspace(math.log10(self.omega_min), math.log10(self.omega_max), int(self.points))


@dataclass(frozen=True)
class SpectralSample:
    omega: float
    contributions: Mapping[tuple[Mode, Contour], float]
    failures: Mapping[tuple[Mode, Contour], str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def value(self, mode, contour) -> float:
        return self.contributions[(Mode.parse(mode), Contour.parse(contour))]


def spectral_density_result(
    mode,
    contour,
    omega: float,
    system: PlateSystem,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> QuadratureResult:
    """Spectral density with its error estimate; never raises on non-convergence."""
    inner = path_integral(mode, contour, omega, system, settings)
    weight = omega**3 * planck_weight(omega, system.temperature)
    return QuadratureResult(weight * inner.value, weight * inner.error_estimate, inner.evaluations, inner.converged)


def spectral_density(
    mode,
    contour,
    omega: float,
    system: PlateSystem,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """``omega**3 g(omega) Re int_C p**2 dp / (r**2 exp(-2 i omega p a / c) - 1)``.

    Positive values are attractive. Raises :class:`ConvergenceError` when the
    contour integral misses its tolerance.
    """
    res = spectral_density_result(mode, contour, omega, system, settings)
    if not res.converged:
        raise ConvergenceError(
            f"contour integral did not converge (mode={Mode.parse(mode).value}, "
            f"contour={Contour.parse(contour).value}, omega={omega!r})",
            res,
        )
    return float(res.value)


def thread_count(threads: int | None = None) -> int:
    """Worker count: explicit value, else ``CASIMIR_THREADS``, else the CPU count."""
    if threads is None:
        env = os.environ.get("CASIMIR_THREADS", "").strip()
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def _sample(omega, system, settings, keys) -> SpectralSample:
    values = {}
    failures = {}
    for key in keys:
        try:
            values[key] = spectral_density(key[0], key[1], omega, system, settings)
        except (ConvergenceError, SingularityError, ValueError) as exc:
            values[key] = math.nan
            failures[key] = str(exc)
    return SpectralSample(float(omega), values, failures)


def sweep(
    grid: FrequencyGrid,
    system: PlateSystem,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    modes: Iterable = (Mode.TE, Mode.TM),
    contours: Iterable = (Contour.C1, Contour.C2),
    threads: int | None = None,
) -> list[SpectralSample]:
    """Spectral densities on every grid point, in grid order.

    Failed points carry ``nan`` and an entry in ``failures``; they do not
    abort the sweep.
    """
    keys = [(Mode.parse(m), Contour.parse(c)) for m in modes for c in contours]
    omegas = grid.omegas()
    n = thread_count(threads)
    if n == 1:
        return [_sample(w, system, settings, keys) for w in omegas]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(lambda w: _sample(w, system, settings, keys), omegas))
