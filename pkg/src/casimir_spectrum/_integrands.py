"""Vectorised real-valued contour integrands (pure NumPy).

Both functions take the reduced optical thickness ``x = 2 omega a / c`` and
the material scalars for one frequency. The cavity denominator
``r**2 * exp(-i x p) - 1`` is assembled as ``r**2 * expm1(-i x p) + (r**2 - 1)``
so neither term suffers cancellation when ``r`` is close to one.
"""
from __future__ import annotations

import numpy as np

from .materials import BoundaryModel, SingularityError, round_trip_terms

# A denominator smaller than this fraction of its natural size is a resonance hit.
# On C1 that size is |r^2| min(|x p|, 1) + |r^2 - 1|, which tracks |D| near p = 0
# but stays O(1) at the cavity poles x p = 2 pi n.
RESONANCE_THRESHOLD = 1e-14


def _check(D, scale, where):
    bad = np.abs(D) < RESONANCE_THRESHOLD * scale
    if np.any(bad):
        raise SingularityError(f"cavity denominator vanishes on {where} at {np.flatnonzero(bad).tolist()}")


def c1_values(te: bool, model: BoundaryModel, p, x: float, zeta: complex, eps: complex):
    """``-Re[p**2 / D(p)]`` for real ``p`` in ``[0, 1]``.

    The minus sign is the orientation of the plane-wave path (``p`` runs
    from 1 down to 0). ``p = 0`` is a removable zero and returns 0.
    """
    p = np.asarray(p, dtype=float)
    xp = x * p
    em = -2.0 * np.sin(0.5 * xp) ** 2 - 1j * np.sin(xp)
    r2, excess = round_trip_terms(te, model, p, zeta, eps)
    r2em = r2 * em
    D = r2em + excess
    origin = p == 0
    _check(np.where(origin, 1.0, D), np.abs(r2) * np.minimum(np.abs(xp), 1.0) + np.abs(excess), "C1")
    return np.where(origin, 0.0, -(p * p / np.where(origin, 1.0, D)).real)


def c2_values(te: bool, model: BoundaryModel, q, x: float, zeta: complex, eps: complex):
    """``Re[-i q**2 / D(i q)]`` for real ``q > 0`` (evanescent path, dp = i dq)."""
    q = np.asarray(q, dtype=float)
    y = x * q
    r2, excess = round_trip_terms(te, model, 1j * q, zeta, eps)
    small = y <= 1.0
    with np.errstate(over="ignore", invalid="ignore"):
        # y <= 1: direct; y > 1: numerator and denominator scaled by exp(-y).
        em = np.where(small, np.expm1(np.minimum(y, 1.0)), -np.expm1(-y))
        e = np.where(small, 1.0, np.exp(-y))
        r2em = r2 * em
        D = r2em + excess * e
    _check(D, np.abs(r2em) + np.abs(excess * e), "C2")
    # Im(e / D) written out so a real D gives an exact zero.
    return -q * q * e * D.imag / (D.real * D.real + D.imag * D.imag)
