# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled integrator core.

Expression-for-expression twin of fluxring._core_py: same state layout, same
RK4 stage arithmetic, same ramp formulas.  Keep the two files in sync; the
backend-parity tests compare their outputs on identical inputs.
"""

import numpy as np

from libc.math cimport cos, pow, sin

FORCE_HARMONIC = 0
FORCE_POWER = 1
RAMP_LINEAR = 0
RAMP_SMOOTHSTEP = 1
GAUGE_CYL = 0
GAUGE_LANDAU = 1


cdef struct Params:
    int force_kind
    double k
    double exponent
    double b_final
    double t_ramp
    int ramp_kind


cdef inline double _ramp_b(double t, Params* p) noexcept nogil:
    cdef double x
    if p.t_ramp <= 0.0:
        return p.b_final
    x = t / p.t_ramp
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return p.b_final
    if p.ramp_kind == 0:  # linear
        return p.b_final * x
    return p.b_final * (x * x * (3.0 - 2.0 * x))


cdef inline double _ramp_dbdt(double t, Params* p) noexcept nogil:
    cdef double x
    if p.t_ramp <= 0.0:
        return 0.0
    x = t / p.t_ramp
    if x <= 0.0 or x >= 1.0:
        return 0.0
    if p.ramp_kind == 0:  # linear
        return p.b_final / p.t_ramp
    return p.b_final * (6.0 * x * (1.0 - x)) / p.t_ramp


cdef inline double _central(double rho, Params* p) noexcept nogil:
    if p.force_kind == 0:  # harmonic
        return -p.k * rho
    return -p.k / pow(rho, p.exponent)


cdef inline void _deriv_lorentz(double t, const double* y, double* d, Params* p) noexcept nogil:
    cdef double rho = y[0]
    cdef double vr = y[2]
    cdef double vp = y[3]
    cdef double b = _ramp_b(t, p)
    cdef double bd = _ramp_dbdt(t, p)
    cdef double fc = _central(rho, p)
    d[0] = vr
    d[1] = vp / rho
    d[2] = vp * vp / rho + fc + vp * b
    d[3] = -vr * vp / rho - 0.5 * bd * rho - vr * b


cdef inline void _deriv_ham_cyl(double t, const double* y, double* d, Params* p) noexcept nogil:
    cdef double rho = y[0]
    cdef double pr = y[2]
    cdef double pp = y[3]
    cdef double b = _ramp_b(t, p)
    cdef double fc = _central(rho, p)
    cdef double vp = pp / rho - 0.5 * b * rho
    d[0] = pr
    d[1] = vp / rho
    d[2] = vp * (pp / (rho * rho) + 0.5 * b) + fc
    d[3] = 0.0


cdef inline void _deriv_ham_landau(double t, const double* y, double* d, Params* p) noexcept nogil:
    cdef double rho = y[0]
    cdef double phi = y[1]
    cdef double pr = y[2]
    cdef double pp = y[3]
    cdef double b = _ramp_b(t, p)
    cdef double bd = _ramp_dbdt(t, p)
    cdef double fc = _central(rho, p)
    cdef double s2 = sin(2.0 * phi)
    cdef double c2 = cos(2.0 * phi)
    cdef double vr = pr - 0.5 * b * rho * s2
    cdef double vp = pp / rho - 0.5 * b * rho * (1.0 + c2)
    d[0] = vr
    d[1] = vp / rho
    d[2] = (vr * (0.5 * b * s2)
            + vp * (pp / (rho * rho) + 0.5 * b * (1.0 + c2))
            + fc + 0.5 * bd * rho * s2)
    d[3] = (vr * (b * rho * c2)
            + vp * (-b * rho * s2)
            + 0.5 * bd * rho * rho * c2)


ctypedef void (*DerivFn)(double, const double*, double*, Params*) noexcept nogil


cdef long _rk4(DerivFn fn, double* y, Params* p, double dt, long n_steps,
               long record_every, double[::1] out_t, double[::1] out_0,
               double[::1] out_1, double[::1] out_2, double[::1] out_3) noexcept nogil:
    """Advance n_steps; record every record_every steps.

    Returns -1 on success, or the (1-based) step index where rho dropped to
    or below zero.
    """
    cdef double k1[4]
    cdef double k2[4]
    cdef double k3[4]
    cdef double k4[4]
    cdef double ytmp[4]
    cdef double t0
    cdef long i, r = 1
    cdef int j
    out_t[0] = 0.0
    out_0[0] = y[0]
    out_1[0] = y[1]
    out_2[0] = y[2]
    out_3[0] = y[3]
    for i in range(n_steps):
        t0 = i * dt
        fn(t0, y, k1, p)
        for j in range(4):
            ytmp[j] = y[j] + 0.5 * dt * k1[j]
        fn(t0 + 0.5 * dt, ytmp, k2, p)
        for j in range(4):
            ytmp[j] = y[j] + 0.5 * dt * k2[j]
        fn(t0 + 0.5 * dt, ytmp, k3, p)
        for j in range(4):
            ytmp[j] = y[j] + dt * k3[j]
        fn(t0 + dt, ytmp, k4, p)
        for j in range(4):
            y[j] = y[j] + dt * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]) / 6.0
        if y[0] <= 0.0:
            return i + 1
        if (i + 1) % record_every == 0:
            out_t[r] = (i + 1) * dt
            out_0[r] = y[0]
            out_1[r] = y[1]
            out_2[r] = y[2]
            out_3[r] = y[3]
            r += 1
    return -1


def _check_record(long n_steps, long record_every):
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    if n_steps % record_every != 0:
        raise ValueError("n_steps must be a multiple of record_every")


def integrate_lorentz(double rho0, double phi0, double vr0, double vp0,
                      int force_kind, double k, double exponent,
                      double b_final, double t_ramp, int ramp_kind,
                      double dt, long n_steps, long record_every):
    _check_record(n_steps, record_every)
    if rho0 <= 0.0:
        raise ValueError("rho0 must be > 0")
    cdef long n_rec = n_steps // record_every + 1
    out_t = np.empty(n_rec)
    out_rho = np.empty(n_rec)
    out_phi = np.empty(n_rec)
    out_vr = np.empty(n_rec)
    out_vp = np.empty(n_rec)
    cdef Params p
    p.force_kind = force_kind
    p.k = k
    p.exponent = exponent
    p.b_final = b_final
    p.t_ramp = t_ramp
    p.ramp_kind = ramp_kind
    cdef double y[4]
    y[0] = rho0
    y[1] = phi0
    y[2] = vr0
    y[3] = vp0
    cdef long bad = _rk4(_deriv_lorentz, y, &p, dt, n_steps, record_every,
                         out_t, out_rho, out_phi, out_vr, out_vp)
    if bad >= 0:
        raise RuntimeError(f"trajectory reached rho <= 0 at t={bad * dt}")
    return out_t, out_rho, out_phi, out_vr, out_vp


def integrate_hamilton(int gauge, double rho0, double phi0, double pr0, double pp0,
                       int force_kind, double k, double exponent,
                       double b_final, double t_ramp, int ramp_kind,
                       double dt, long n_steps, long record_every):
    _check_record(n_steps, record_every)
    if rho0 <= 0.0:
        raise ValueError("rho0 must be > 0")
    cdef long n_rec = n_steps // record_every + 1
    out_t = np.empty(n_rec)
    out_rho = np.empty(n_rec)
    out_phi = np.empty(n_rec)
    out_pr = np.empty(n_rec)
    out_pp = np.empty(n_rec)
    cdef Params p
    p.force_kind = force_kind
    p.k = k
    p.exponent = exponent
    p.b_final = b_final
    p.t_ramp = t_ramp
    p.ramp_kind = ramp_kind
    cdef double y[4]
    y[0] = rho0
    y[1] = phi0
    y[2] = pr0
    y[3] = pp0
    cdef DerivFn fn = _deriv_ham_landau if gauge == 1 else _deriv_ham_cyl
    cdef long bad = _rk4(fn, y, &p, dt, n_steps, record_every,
                         out_t, out_rho, out_phi, out_pr, out_pp)
    if bad >= 0:
        raise RuntimeError(f"trajectory reached rho <= 0 at t={bad * dt}")
    return out_t, out_rho, out_phi, out_pr, out_pp
