"""Frequency-integrated thermal force and the comparison report.

The force per unit area of one sector is::

    F = hbar / (pi**2 c**3) * int d(omega) F_omega

integrated in ``u = ln(omega)``. Positive forces are attractive.
"""
from __future__ import annotations

import hashlib
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._thermal import planck_weight, thermal_frequency
from .contours import Contour, Mode, PlateSystem, path_integral
from .materials import C, HBAR, BoundaryModel
from .quadrature import DEFAULT_SETTINGS, QuadratureResult, QuadratureSettings, integrate_finite
from .spectrum import thread_count

__all__ = [
    "PREFACTOR",
    "IntegrationBounds",
    "LowFrequencyTailWarning",
    "ForceReport",
    "planck_weight",
    "integrated_force",
    "report",
]

PREFACTOR = HBAR / (math.pi**2 * C**3)

# Upper cut in units of kB T / hbar; the Planck factor there is ~4e-18.
_PLANCK_CUT = 40.0
# Below omega_lo the sector integrands fall at least like sqrt(omega).
_TAIL_FACTOR = 2.0
_TAIL_LIMIT = 1e-6
_PILOT_POINTS = 49
# Shares of the requested tolerance.
_OUTER_SHARE = 0.5
_INNER_SHARE = 0.1


class LowFrequencyTailWarning(RuntimeWarning):
    """The neglected range below ``omega_lo`` is not negligible."""


@dataclass(frozen=True)
class IntegrationBounds:
    """Outer frequency range [rad/s].

    ``omega_hi=None`` integrates up to ``40 kB T / hbar``, where the Planck
    weight has removed everything that matters.
    """

    omega_lo: float = 1e-10
    omega_hi: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.omega_lo) and self.omega_lo > 0):
            raise ValueError(f"omega_lo must be finite and > 0, got {self.omega_lo!r}")
        if self.omega_hi is not None and not (math.isfinite(self.omega_hi) and self.omega_hi > self.omega_lo):
            raise ValueError(f"omega_hi must be finite and > omega_lo, got {self.omega_hi!r}")

    def resolve(self, temperature: float) -> tuple[float, float]:
        hi = self.omega_hi if self.omega_hi is not None else _PLANCK_CUT * thermal_frequency(temperature)
        if not hi > self.omega_lo:
            raise ValueError(f"upper bound {hi!r} does not exceed omega_lo={self.omega_lo!r}")
        return self.omega_lo, hi


def integrated_force(
    mode,
    contour,
    system: PlateSystem,
    bounds: IntegrationBounds = IntegrationBounds(),
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> QuadratureResult:
    """Force per unit area [dyn/cm^2] contributed by one (mode, contour) sector.

    The tolerance is split: half goes to the outer frequency integral, a
    tenth to the accumulated error of the contour integrals, the rest to the
    neglected range below ``omega_lo``. Contour integrals get an absolute
    tolerance sized from a coarse pilot estimate of the result, so spectra
    that cross zero still converge.
    """
    mode = Mode.parse(mode)
    contour = Contour.parse(contour)
    lo, hi = bounds.resolve(system.temperature)
    u_lo, u_hi = math.log(lo), math.log(hi)
    inner_rel = settings.tightened(0.25)

    def weight(omega):
        return PREFACTOR * omega**4 * planck_weight(omega, system.temperature)

    pilot_u = np.linspace(u_lo, u_hi, _PILOT_POINTS)
    pilot = [weight(math.exp(u)) * path_integral(mode, contour, math.exp(u), system, inner_rel).value
             for u in pilot_u]
    step = pilot_u[1] - pilot_u[0]
    estimate = step * (math.fsum(pilot) - 0.5 * (pilot[0] + pilot[-1]))
    inner_budget = max(_INNER_SHARE * settings.tolerance(estimate), 0.25 * settings.abs_tol)

    inner_ok = True
    inner_evals = 0

    def h(u):
        nonlocal inner_ok, inner_evals
        omega = math.exp(u)
        w = weight(omega)
        abs_tol = max(inner_rel.abs_tol, inner_budget / (w * (u_hi - u_lo))) if w > 0 else inner_rel.abs_tol
        res = path_integral(mode, contour, omega, system,
                            QuadratureSettings(inner_rel.rel_tol, abs_tol, settings.max_subdivisions))
        inner_ok = inner_ok and res.converged
        inner_evals += res.evaluations
        return w * res.value

    outer = integrate_finite(h, u_lo, u_hi, settings.tightened(_OUTER_SHARE))
    tail = _TAIL_FACTOR * abs(h(u_lo))
    if tail > _TAIL_LIMIT * abs(outer.value) and outer.value != 0:
        warnings.warn(
            f"{mode.value}/{contour.value}: estimated contribution below omega_lo={lo:g} is "
            f"{tail / abs(outer.value):.2e} of the total",
            LowFrequencyTailWarning,
            stacklevel=2,
        )
    err = float(outer.error_estimate + tail + inner_budget)
    converged = bool(outer.converged and inner_ok and err <= settings.tolerance(outer.value))
    return QuadratureResult(float(outer.value), err, inner_evals, converged)


Key = tuple[Mode, Contour, BoundaryModel]


def _name(key: Key) -> str:
    return f"{key[0].value}_{key[1].value}_{key[2].value}"


def _rel_diff(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return (a - b) / abs(b) if b != 0 else math.inf


@dataclass(frozen=True)
class ForceReport:
    """Integrated forces for every (mode, contour, model) cell plus derived ratios.

    ``model`` is the model the headline ratios refer to. Sector deltas are
    ``(impedance - dielectric) / |dielectric|``.
    """

    system: PlateSystem
    bounds: tuple[float, float]
    settings: QuadratureSettings
    components: dict = field(repr=False)

    @property
    def model(self) -> BoundaryModel:
        return self.system.model

    def force(self, mode, contour, model=None) -> float:
        model = self.model if model is None else BoundaryModel.parse(model)
        return float(self.components[(Mode.parse(mode), Contour.parse(contour), model)].value)

    def total(self, model=None, modes=(Mode.TE, Mode.TM)) -> float:
        return math.fsum(self.force(m, c, model) for m in modes for c in Contour)

    def perfect_conductor_total(self, modes=(Mode.TE, Mode.TM)) -> float:
        """Perfect-conductor baseline: C1 only, C2 vanishes identically."""
        return math.fsum(self.force(m, Contour.C1, BoundaryModel.PERFECT) for m in modes)

    @property
    def c2_over_c1_te(self) -> float:
        return self.force(Mode.TE, Contour.C2) / self.force(Mode.TE, Contour.C1)

    @property
    def total_over_perfect_conductor(self) -> float:
        """All sectors (TE+TM, C1+C2) over the TE+TM perfect-conductor force."""
        return self.total() / self.perfect_conductor_total()

    @property
    def te_total_over_perfect_conductor_te(self) -> float:
        """TE sectors (C1+C2) over the TE perfect-conductor force."""
        return self.total(modes=(Mode.TE,)) / self.perfect_conductor_total(modes=(Mode.TE,))

    def sector_delta(self, mode, contours=(Contour.C1, Contour.C2)) -> float:
        imp = math.fsum(self.force(mode, c, BoundaryModel.IMPEDANCE) for c in contours)
        die = math.fsum(self.force(mode, c, BoundaryModel.DIELECTRIC) for c in contours)
        return _rel_diff(imp, die)

    @property
    def sector_deltas(self) -> dict[str, float]:
        out = {}
        for mode in Mode:
            for c in Contour:
                out[f"{mode.value}_{c.value}"] = self.sector_delta(mode, (c,))
            out[mode.value] = self.sector_delta(mode)
        return out

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.components.values())

    @property
    def parameter_hash(self) -> str:
        blob = json.dumps(
            {
                "gap_cm": self.system.gap,
                "temperature_k": self.system.temperature,
                "sigma0": self.system.metal.sigma0,
                "tau": self.system.metal.tau,
                "model": self.model.value,
                "bounds": list(self.bounds),
                "rel_tol": self.settings.rel_tol,
                "abs_tol": self.settings.abs_tol,
                "max_subdivisions": self.settings.max_subdivisions,
            },
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def to_dict(self) -> dict:
        comps = {}
        for key in sorted(self.components, key=_name):
            r = self.components[key]
            comps[_name(key)] = {
                "force": float(r.value),
                "error_estimate": r.error_estimate,
                "converged": r.converged,
            }
        return {
            "model": self.model.value,
            "components": comps,
            "perfect_conductor_total": self.perfect_conductor_total(),
            "ratios": {
                "c2_over_c1_te": self.c2_over_c1_te,
                "total_over_perfect_conductor": self.total_over_perfect_conductor,
                "te_total_over_perfect_conductor_te": self.te_total_over_perfect_conductor_te,
            },
            "sector_deltas": self.sector_deltas,
            "converged": self.converged,
            "metadata": {
                "omega_lo": self.bounds[0],
                "omega_hi": self.bounds[1],
                "rel_tol": self.settings.rel_tol,
                "abs_tol": self.settings.abs_tol,
                "max_subdivisions": self.settings.max_subdivisions,
                "parameter_hash": self.parameter_hash,
            },
        }


def report(
    system: PlateSystem,
    bounds: IntegrationBounds = IntegrationBounds(),
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    threads: int | None = None,
) -> ForceReport:
    """Integrate every (mode, contour) sector under all three boundary models."""
    keys = [(m, c, b) for b in BoundaryModel for m in Mode for c in Contour]

    def cell(key):
        return integrated_force(key[0], key[1], system.with_model(key[2]), bounds, settings)

    n = thread_count(threads)
    if n == 1:
        results = [cell(k) for k in keys]
    else:
        with ThreadPoolExecutor(max_workers=min(n, len(keys))) as pool:
            results = list(pool.map(cell, keys))
    return ForceReport(system, bounds.resolve(system.temperature), settings, dict(zip(keys, results)))
