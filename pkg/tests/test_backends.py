import os
import subprocess
import sys

import numpy as np
import pytest

from casimir_spectrum import _fallback
from casimir_spectrum.contours import PlateSystem, _c2_scale, _MODEL_CODES, frequency_params
from casimir_spectrum.quadrature import truncation_point

kernels = pytest.importorskip("casimir_spectrum._kernels", reason="compiled extension not built")

AU = PlateSystem(1e-4, 300.0)


def _args(w, model):
    system = AU.with_model(model)
    fp = frequency_params(w, system)
    return fp, _MODEL_CODES[system.model], _c2_scale(fp, system.model)


@pytest.mark.parametrize("model", ["impedance", "dielectric", "perfect"])
@pytest.mark.parametrize("te", [1, 0])
@pytest.mark.parametrize("w", [1e9, 3e10, 1e12, 7e13, 1e15])
def test_backends_agree(model, te, w):
    fp, code, scale = _args(w, model)
    tol = (1e-10, 1e-300, 2000)
    a = kernels.c1_integral(te, code, fp.x, fp.zeta, fp.eps, *tol)
    b = _fallback.c1_integral(te, code, fp.x, fp.zeta, fp.eps, *tol)
    assert a[0] == pytest.approx(b[0], rel=1e-12, abs=1e-300)
    assert a[3] and b[3]
    t_max = np.log1p(truncation_point(fp.decay_length) / scale)
    a = kernels.c2_integral(te, code, fp.x, fp.zeta, fp.eps, scale, t_max, *tol)
    b = _fallback.c2_integral(te, code, fp.x, fp.zeta, fp.eps, scale, t_max, *tol)
    assert a[0] == pytest.approx(b[0], rel=1e-12, abs=1e-300)
    assert a[2] == b[2]


def test_kernel_releases_gil():
    # Threads must not change results; they run the kernel without the GIL.
    from concurrent.futures import ThreadPoolExecutor

    fp, code, _ = _args(2e13, "dielectric")
    call = lambda _: kernels.c1_integral(0, code, fp.x, fp.zeta, fp.eps, 1e-12, 0.0, 2000)
    with ThreadPoolExecutor(8) as pool:
        results = list(pool.map(call, range(32)))
    assert len(set(results)) == 1


@pytest.mark.parametrize("env, expected", [("1", "python"), ("0", "compiled")])
def test_selection(env, expected):
    out = subprocess.run(
        [sys.executable, "-c", "import casimir_spectrum as c; print(c.BACKEND)"],
        env={**os.environ, "CASIMIR_PURE_PYTHON": env},
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == expected
