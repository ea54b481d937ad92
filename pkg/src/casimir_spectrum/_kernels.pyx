# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled contour integrals.

A port of :func:`casimir_spectrum.quadrature.integrate_finite` (Gauss-Kronrod
10/21 with the same panel error model) specialised to the two contour
integrands, so the whole inner integration runs without the GIL.
"""
from libc.math cimport sin, exp, expm1, fabs, fmin
from libc.stdlib cimport malloc, free

from ._gk import XGK as _XGK, WGK as _WGK, WG as _WG
from .materials import SingularityError

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex z)
    double creal(double complex z)
    double cimag(double complex z)
    double cabs(double complex z)

cdef double xgk[11]
cdef double wgk[11]
cdef double wg[5]
for _i in range(11):
    xgk[_i] = _XGK[_i]
    wgk[_i] = _WGK[_i]
for _i in range(5):
    wg[_i] = _WG[_i]

cdef double EPS = 2.220446049250313e-16
cdef double SINGULAR = 1e-14
cdef double RESONANCE = 1e-14

cdef enum:
    IMPEDANCE = 0
    DIELECTRIC = 1
    PERFECT = 2


cdef struct Params:
    int te
    int model
    int contour  # 1 or 2
    double x
    double scale
    double complex zeta
    double complex eps
    int bad


cdef inline void round_trip(Params* P, double complex p, double complex* r2,
                            double complex* excess) noexcept nogil:
    cdef double complex num, den, u, s, r
    if P.model == PERFECT:
        r2[0] = 1.0
        excess[0] = 0.0
        return
    if P.model == IMPEDANCE:
        if P.te:
            u = P.zeta * p
            num = 1.0 + u
            den = 1.0 - u
            if cabs(den) < SINGULAR:
                P.bad = 1
                return
            excess[0] = 4.0 * u / (den * den)
        else:
            num = p + P.zeta
            den = p - P.zeta
            if cabs(den) < SINGULAR:
                P.bad = 1
                return
            excess[0] = 4.0 * p * P.zeta / (den * den)
    else:
        s = csqrt(P.eps - 1.0 + p * p)
        if creal(s) < 0:
            s = -s
        if P.te:
            num = s + p
            den = s - p
            if cabs(den) < SINGULAR:
                P.bad = 1
                return
            excess[0] = 4.0 * s * p / (den * den)
        else:
            num = P.eps * p + s
            den = P.eps * p - s
            if cabs(den) < SINGULAR:
                P.bad = 1
                return
            excess[0] = 4.0 * P.eps * p * s / (den * den)
    r = num / den
    r2[0] = r * r


cdef double point(Params* P, double t) noexcept nogil:
    cdef double p, xp, sh, q, y, e, jac, dr, di
    cdef double complex r2 = 1.0, excess = 0.0, em, r2em, D, val
    if P.contour == 1:
        p = 1.0 - t
        xp = P.x * p
        sh = sin(0.5 * xp)
        em = -2.0 * sh * sh - 1j * sin(xp)
        round_trip(P, p, &r2, &excess)
        r2em = r2 * em
        D = r2em + excess
        if cabs(D) < RESONANCE * (cabs(r2) * fmin(fabs(xp), 1.0) + cabs(excess)):
            P.bad = 1
            return 0.0
        val = p * p / D
        return -creal(val)
    q = P.scale * expm1(t)
    jac = P.scale * exp(t)
    y = P.x * q
    round_trip(P, 1j * q, &r2, &excess)
    if y <= 1.0:
        e = 1.0
        em = expm1(y)
    else:
        e = exp(-y)
        em = -expm1(-y)
    r2em = r2 * em
    D = r2em + excess * e
    if cabs(D) < RESONANCE * (cabs(r2em) + cabs(excess * e)):
        P.bad = 1
        return 0.0
    dr = creal(D)
    di = cimag(D)
    return -q * q * e * di / (dr * dr + di * di) * jac


cdef void gk21(Params* P, double a, double b, double* kron, double* err) noexcept nogil:
    cdef double half = 0.5 * (b - a)
    cdef double centre = 0.5 * (a + b)
    cdef double fc = point(P, centre)
    cdef double rk = wgk[10] * fc
    cdef double rg = 0.0
    cdef double ra = wgk[10] * fabs(fc)
    cdef double f1, f2, d
    cdef int j
    for j in range(10):
        d = half * xgk[j]
        f1 = point(P, centre - d)
        f2 = point(P, centre + d)
        rk += wgk[j] * (f1 + f2)
        ra += wgk[j] * (fabs(f1) + fabs(f2))
        if j % 2 == 1:
            rg += wg[j // 2] * (f1 + f2)
    kron[0] = rk * half
    ra *= fabs(half)
    d = fabs((rk - rg) * half)
    err[0] = d if d > 50.0 * EPS * ra else 50.0 * EPS * ra


cdef int adaptive(Params* P, double lo, double hi, double rel_tol, double abs_tol,
                  int max_sub, double* value, double* error, int* evals) noexcept nogil:
    cdef double* A = <double*> malloc(max_sub * sizeof(double))
    cdef double* B = <double*> malloc(max_sub * sizeof(double))
    cdef double* R = <double*> malloc(max_sub * sizeof(double))
    cdef double* E = <double*> malloc(max_sub * sizeof(double))
    cdef char* frozen = <char*> malloc(max_sub * sizeof(char))
    cdef int n = 1, i, k, converged = 0
    cdef double total, err, c, tmp, y, mid, worst, tol
    if A == NULL or B == NULL or R == NULL or E == NULL or frozen == NULL:
        free(A); free(B); free(R); free(E); free(frozen)
        return -1
    A[0] = lo
    B[0] = hi
    frozen[0] = 0
    gk21(P, lo, hi, &R[0], &E[0])
    evals[0] = 21
    while True:
        # Compensated sums in index order keep the result reproducible.
        total = 0.0
        c = 0.0
        err = 0.0
        for i in range(n):
            y = R[i] - c
            tmp = total + y
            c = (tmp - total) - y
            total = tmp
            err += E[i]
        tol = rel_tol * fabs(total)
        if tol < abs_tol:
            tol = abs_tol
        if err <= tol:
            converged = 1
            break
        if n >= max_sub or P.bad:
            break
        k = -1
        worst = -1.0
        for i in range(n):
            if not frozen[i] and E[i] > worst:
                worst = E[i]
                k = i
        if k < 0:
            break
        mid = 0.5 * (A[k] + B[k])
        if not (A[k] < mid and mid < B[k]) or (B[k] - A[k]) <= 100.0 * EPS * (fabs(A[k]) if fabs(A[k]) > fabs(B[k]) else fabs(B[k])):
            frozen[k] = 1
            continue
        A[n] = mid
        B[n] = B[k]
        frozen[n] = 0
        B[k] = mid
        gk21(P, A[k], B[k], &R[k], &E[k])
        gk21(P, A[n], B[n], &R[n], &E[n])
        evals[0] += 42
        n += 1
    value[0] = total
    error[0] = err
    free(A); free(B); free(R); free(E); free(frozen)
    return converged


cdef tuple _run(Params* P, double lo, double hi, double rel_tol, double abs_tol, int max_sub):
    cdef double value = 0.0, error = 0.0
    cdef int evals = 0, status
    if max_sub < 1:
        raise ValueError("max_sub must be >= 1")
    with nogil:
        status = adaptive(P, lo, hi, rel_tol, abs_tol, max_sub, &value, &error, &evals)
    if status < 0:
        raise MemoryError()
    if P.bad:
        raise SingularityError(
            f"vanishing denominator on contour C{P.contour} (x={P.x!r}, model={P.model})")
    return value, error, evals, bool(status)


def c1_integral(int te, int model, double x, double complex zeta, double complex eps,
                double rel_tol, double abs_tol, int max_sub):
    """Adaptive integral of the plane-wave integrand over t in [0, 1]."""
    cdef Params P
    P.te = te
    P.model = model
    P.contour = 1
    P.x = x
    P.scale = 1.0
    P.zeta = zeta
    P.eps = eps
    P.bad = 0
    return _run(&P, 0.0, 1.0, rel_tol, abs_tol, max_sub)


def c2_integral(int te, int model, double x, double complex zeta, double complex eps,
                double scale, double t_max, double rel_tol, double abs_tol, int max_sub):
    """Adaptive integral of the evanescent integrand in t, q = scale * expm1(t)."""
    cdef Params P
    P.te = te
    P.model = model
    P.contour = 2
    P.x = x
    P.scale = scale
    P.zeta = zeta
    P.eps = eps
    P.bad = 0
    return _run(&P, 0.0, t_max, rel_tol, abs_tol, max_sub)
