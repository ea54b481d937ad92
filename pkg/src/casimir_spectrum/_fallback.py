"""Pure-Python contour integrals, used when the compiled kernels are absent."""
from __future__ import annotations

import numpy as np

from ._integrands import c1_values, c2_values
from .materials import BoundaryModel
from .quadrature import QuadratureSettings, integrate_finite

MODELS = (BoundaryModel.IMPEDANCE, BoundaryModel.DIELECTRIC, BoundaryModel.PERFECT)


def c1_integral(te, model, x, zeta, eps, rel_tol, abs_tol, max_sub):
    m = MODELS[model]
    res = integrate_finite(
        lambda t: c1_values(bool(te), m, 1.0 - t, x, zeta, eps),
        0.0, 1.0, QuadratureSettings(rel_tol, abs_tol, max_sub), vectorized=True,
    )
    return float(res.value), res.error_estimate, res.evaluations, res.converged


def c2_integral(te, model, x, zeta, eps, scale, t_max, rel_tol, abs_tol, max_sub):
    m = MODELS[model]

    def mapped(t):
        return c2_values(bool(te), m, scale * np.expm1(t), x, zeta, eps) * (scale * np.exp(t))

    res = integrate_finite(mapped, 0.0, t_max, QuadratureSettings(rel_tol, abs_tol, max_sub), vectorized=True)
    return float(res.value), res.error_estimate, res.evaluations, res.converged
