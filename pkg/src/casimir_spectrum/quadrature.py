"""Adaptive Gauss-Kronrod quadrature with explicit error estimates.

The engine is globally adaptive: the panel with the largest error estimate
is bisected until the summed estimate meets the requested tolerance or the
panel budget runs out. Integrands may be real or complex valued.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._gk import WG, WGK, XGK

__all__ = [
    "QuadratureSettings",
    "QuadratureResult",
    "ConvergenceError",
    "DEFAULT_SETTINGS",
    "gk21",
    "integrate_finite",
    "integrate_semi_infinite",
    "truncation_point",
]

_EPS = np.finfo(float).eps

# Full 21-point node/weight arrays on [-1, 1].
_NODES = np.concatenate([-np.asarray(XGK[:-1]), np.asarray(XGK[::-1])])
_WK = np.concatenate([np.asarray(WGK[:-1]), np.asarray(WGK[::-1])])
_WG_FULL = np.zeros(21)
for _i, _w in zip((1, 3, 5, 7, 9), WG):
    _WG_FULL[_i] = _w
    _WG_FULL[20 - _i] = _w


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and panel budget for one adaptive integration."""

    rel_tol: float = 1e-7
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol!r}")
        if not self.abs_tol >= 0:
            raise ValueError(f"abs_tol must be >= 0, got {self.abs_tol!r}")
        if int(self.max_subdivisions) < 1:
            raise ValueError(f"max_subdivisions must be >= 1, got {self.max_subdivisions!r}")

    def tolerance(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def tightened(self, factor: float) -> "QuadratureSettings":
        return QuadratureSettings(self.rel_tol * factor, self.abs_tol * factor, self.max_subdivisions)


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class QuadratureResult:
    value: float | complex
    error_estimate: float
    evaluations: int
    converged: bool

    def __float__(self):
        return float(self.value)


class ConvergenceError(ArithmeticError):
    """Raised when an integration exhausts its budget; carries the best result."""

    def __init__(self, message: str, result: QuadratureResult):
        super().__init__(message)
        self.result = result


def gk21(f: Callable, a: float, b: float, vectorized: bool = False):
    """Apply the 21-point Kronrod rule and its embedded 10-point Gauss rule.

    Returns ``(kronrod, gauss, abs_sum)`` where ``abs_sum`` is the Kronrod
    rule applied to ``|f|`` (used for the round-off floor).
    """
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    x = centre + half * _NODES
    if vectorized:
        fx = np.asarray(f(x))
    else:
        fx = np.array([f(float(xi)) for xi in x])
    kronrod = half * np.dot(_WK, fx)
    gauss = half * np.dot(_WG_FULL, fx)
    abs_sum = abs(half) * np.dot(_WK, np.abs(fx))
    return kronrod, gauss, abs_sum


def _panel_error(kronrod, gauss, abs_sum) -> float:
    return max(abs(kronrod - gauss), 50.0 * _EPS * abs_sum)


def _stable_sum(values: Sequence) -> float | complex:
    if any(isinstance(v, complex) or np.iscomplexobj(v) for v in values):
        return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))
    return math.fsum(values)


def _finish(result: QuadratureResult, raise_on_failure: bool, what: str) -> QuadratureResult:
    if raise_on_failure and not result.converged:
        raise ConvergenceError(
            f"{what} did not converge: value={result.value!r}, "
            f"error_estimate={result.error_estimate:.3e}",
            result,
        )
    return result


def integrate_finite(
    f: Callable,
    lo: float,
    hi: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    *,
    points: Sequence[float] = (),
    vectorized: bool = False,
    raise_on_failure: bool = False,
) -> QuadratureResult:
    """Integrate ``f`` over ``[lo, hi]`` by globally adaptive bisection.

    Parameters
    ----------
    f : callable
        Real- or complex-valued integrand. With ``vectorized=True`` it is
        called once per panel with an array of 21 abscissae.
    lo, hi : float
        Finite limits with ``lo < hi``.
    settings : QuadratureSettings
        Tolerances and the maximum number of panels.
    points : sequence of float
        Interior break points used to seed the initial partition.
    raise_on_failure : bool
        Raise :class:`ConvergenceError` instead of returning a result with
        ``converged=False``.
    """
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ValueError(f"need finite lo < hi, got [{lo!r}, {hi!r}]")

    edges = [lo] + sorted(float(p) for p in points if lo < p < hi) + [hi]
    values: list = []
    errors: list[float] = []
    bounds: list[tuple[float, float]] = []
    heap: list[tuple[float, int]] = []
    evaluations = 0

    def add(a, b):
        nonlocal evaluations
        k, g, s = gk21(f, a, b, vectorized)
        evaluations += 21
        idx = len(values)
        values.append(k)
        errors.append(_panel_error(k, g, s))
        bounds.append((a, b))
        heapq.heappush(heap, (-errors[idx], idx))

    for a, b in zip(edges[:-1], edges[1:]):
        add(a, b)

    live = set(range(len(values)))
    limit = max(int(settings.max_subdivisions), len(values))
    run_total = sum(values)
    run_err = sum(errors)
    while True:
        if run_err <= 1.01 * settings.tolerance(run_total) or len(live) >= limit or not heap:
            # Exact re-summation before deciding; running sums only steer.
            order = sorted(live)
            total = _stable_sum([values[i] for i in order])
            err = math.fsum(errors[i] for i in order)
            run_total, run_err = total, err
            if err <= settings.tolerance(total):
                converged = True
                break
            if len(live) >= limit or not heap:
                converged = False
                break
        _, idx = heapq.heappop(heap)
        a, b = bounds[idx]
        mid = 0.5 * (a + b)
        if not (a < mid < b) or (b - a) <= 100.0 * _EPS * max(abs(a), abs(b)):
            # Panel cannot be refined further; leave it in the sum.
            continue
        live.discard(idx)
        n0 = len(values)
        add(a, mid)
        add(mid, b)
        live.update((n0, n0 + 1))
        run_total += values[n0] + values[n0 + 1] - values[idx]
        run_err += errors[n0] + errors[n0 + 1] - errors[idx]

    if isinstance(total, complex) and total.imag == 0.0 and not np.iscomplexobj(values[0]):
        total = total.real
    result = QuadratureResult(total, err, evaluations, converged)
    return _finish(result, raise_on_failure, "integrate_finite")


# Decay lengths kept before truncating; exp(-40) leaves a tail near 1e-15.
TRUNCATION_DECAY_LENGTHS = 40.0


def truncation_point(decay_length: float) -> float:
    """Upper cut for an exponentially decaying integrand: ``max(10, 40 L)``."""
    return max(10.0, TRUNCATION_DECAY_LENGTHS * decay_length)


def integrate_semi_infinite(
    f: Callable,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    *,
    decay_length: float = 1.0,
    scale: float | None = None,
    vectorized: bool = False,
    raise_on_failure: bool = False,
) -> QuadratureResult:
    """Integrate ``f`` over ``(0, inf)`` for integrands decaying like ``exp(-q/L)``.

    The range is cut at ``truncation_point(decay_length)``; the discarded
    tail is bounded by ``1.2 |f(Q)| L`` and folded into the error estimate.

    When ``scale`` is given the integral is taken in ``t`` with
    ``q = scale * expm1(t)``: linear below ``scale``, logarithmic above it.
    This resolves integrands with structure on several widely separated
    scales without a large panel budget.
    """
    if not decay_length > 0:
        raise ValueError(f"decay_length must be > 0, got {decay_length!r}")
    q_max = truncation_point(decay_length)

    if scale is None:
        inner = integrate_finite(f, 0.0, q_max, settings, vectorized=vectorized)
    else:
        if not scale > 0:
            raise ValueError(f"scale must be > 0, got {scale!r}")

        if vectorized:
            def mapped(t):
                e = np.exp(t)
                return np.asarray(f(scale * np.expm1(t))) * (scale * e)
        else:
            def mapped(t):
                return f(scale * math.expm1(t)) * (scale * math.exp(t))

        inner = integrate_finite(mapped, 0.0, math.log1p(q_max / scale), settings, vectorized=vectorized)

    f_end = f(np.array([q_max]))[0] if vectorized else f(q_max)
    tail = 1.2 * abs(f_end) * decay_length
    err = inner.error_estimate + tail
    converged = inner.converged and err <= settings.tolerance(inner.value)
    result = QuadratureResult(inner.value, err, inner.evaluations + 1, converged)
    return _finish(result, raise_on_failure, "integrate_semi_infinite")
