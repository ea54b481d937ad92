"""Compiled vs pure-Python contour kernels.

Times the per-frequency contour integrals over a log grid for each
backend, then the full force report in a subprocess per backend (the
backend is fixed at import).

    python3 benchmarks/bench_kernels.py [--points N] [--repeat R]
"""
import argparse
import math
import os
import subprocess
import sys
import time

import numpy as np

from casimir_spectrum import _fallback
from casimir_spectrum.contours import PlateSystem, _MODEL_CODES, _c2_scale, frequency_params
from casimir_spectrum.quadrature import truncation_point

try:
    from casimir_spectrum import _kernels
except ImportError:
    _kernels = None

REPORT_SNIPPET = (
    "import time; from casimir_spectrum import PlateSystem, report, BACKEND; "
    "t = time.perf_counter(); r = report(PlateSystem(1e-4, 300.0), threads=1); "
    "print(BACKEND, time.perf_counter() - t, r.c2_over_c1_te)"
)


def sweep_kernels(impl, omegas, system, rel_tol):
    code = _MODEL_CODES[system.model]
    total = 0.0
    for w in omegas:
        fp = frequency_params(w, system)
        scale = _c2_scale(fp, system.model)
        t_max = math.log1p(truncation_point(fp.decay_length) / scale)
        for te in (1, 0):
            total += impl.c1_integral(te, code, fp.x, fp.zeta, fp.eps, rel_tol, 0.0, 2000)[0]
            total += impl.c2_integral(te, code, fp.x, fp.zeta, fp.eps, scale, t_max, rel_tol, 0.0, 2000)[0]
    return total


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--rel-tol", type=float, default=1e-8)
    args = ap.parse_args()

    omegas = np.logspace(9, 15, args.points)
    backends = [("python", _fallback)] + ([("compiled", _kernels)] if _kernels else [])
    print(f"contour integrals: {args.points} frequencies x 4 (mode, contour), rel_tol={args.rel_tol:g}")
    print(f"{'model':<11}{'backend':<10}{'seconds':>10}{'speedup':>10}")
    for model in ("impedance", "dielectric"):
        system = PlateSystem(1e-4, 300.0, model=model)
        base = None
        results = {}
        for name, impl in backends:
            secs, results[name] = best_of(lambda: sweep_kernels(impl, omegas, system, args.rel_tol), args.repeat)
            base = base or secs
            print(f"{model:<11}{name:<10}{secs:>10.4f}{base / secs:>9.1f}x")
        if len(results) == 2:
            a, b = results.values()
            print(f"{'':<11}checksum agreement: {abs(a - b) / abs(b):.1e}")

    print("\nfull force report (12 cells, 1 thread):")
    for flag in ("1", "0"):
        env = {**os.environ, "CASIMIR_PURE_PYTHON": flag}
        out = subprocess.run([sys.executable, "-c", REPORT_SNIPPET], env=env, capture_output=True, text=True, check=True)
        name, secs, ratio = out.stdout.split()
        print(f"  {name:<10}{float(secs):>8.3f} s   TE C2/C1 = {float(ratio):.6f}")
        if name == "python" and _kernels is None:
            break


if __name__ == "__main__":
    main()
