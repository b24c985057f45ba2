"""Pure-Python integrator core; drop-in fallback for the compiled module.

Arithmetic mirrors fluxring._core expression for expression so both
backends produce the same floating-point trajectories (the extension is
compiled without FP contraction for this reason).
"""

from __future__ import annotations

from math import cos, pow as c_pow, sin

import numpy as np

FORCE_HARMONIC = 0
FORCE_POWER = 1
RAMP_LINEAR = 0
RAMP_SMOOTHSTEP = 1
GAUGE_CYL = 0
GAUGE_LANDAU = 1


def _ramp_b(t, b_final, t_ramp, ramp_kind):
    if t_ramp <= 0.0:
        return b_final
    x = t / t_ramp
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return b_final
    if ramp_kind == RAMP_LINEAR:
        return b_final * x
    return b_final * (x * x * (3.0 - 2.0 * x))


def _ramp_dbdt(t, b_final, t_ramp, ramp_kind):
    if t_ramp <= 0.0:
        return 0.0
    x = t / t_ramp
    if x <= 0.0 or x >= 1.0:
        return 0.0
    if ramp_kind == RAMP_LINEAR:
        return b_final / t_ramp
    return b_final * (6.0 * x * (1.0 - x)) / t_ramp


def _check_record(n_steps, record_every):
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    if n_steps % record_every != 0:
        raise ValueError("n_steps must be a multiple of record_every")


def integrate_lorentz(rho0, phi0, vr0, vp0, force_kind, k, exponent,
                      b_final, t_ramp, ramp_kind, dt, n_steps, record_every):
    """RK4 integration of planar motion under central + Lorentz + induced forces.

    State is (rho, phi, v_rho, v_phi); the induced electric field is the
    physical one, E_phi = -(dB/dt) rho / 2.  Returns five arrays
    (t, rho, phi, v_rho, v_phi) sampled every ``record_every`` steps.
    """
    _check_record(n_steps, record_every)
    if rho0 <= 0.0:
        raise ValueError("rho0 must be > 0")
    n_rec = n_steps // record_every + 1
    out_t = np.empty(n_rec)
    out_rho = np.empty(n_rec)
    out_phi = np.empty(n_rec)
    out_vr = np.empty(n_rec)
    out_vp = np.empty(n_rec)

    harmonic = force_kind == FORCE_HARMONIC

    def deriv(t, rho, phi, vr, vp):
        b = _ramp_b(t, b_final, t_ramp, ramp_kind)
        bd = _ramp_dbdt(t, b_final, t_ramp, ramp_kind)
        if harmonic:
            fc = -k * rho
        else:
            fc = -k / c_pow(rho, exponent)
        d_vr = vp * vp / rho + fc + vp * b
        d_vp = -vr * vp / rho - 0.5 * bd * rho - vr * b
        return vr, vp / rho, d_vr, d_vp

    rho, phi, vr, vp = rho0, phi0, vr0, vp0
    out_t[0] = 0.0
    out_rho[0] = rho
    out_phi[0] = phi
    out_vr[0] = vr
    out_vp[0] = vp
    r = 1
    for i in range(n_steps):
        t0 = i * dt
        a1, b1, c1, d1 = deriv(t0, rho, phi, vr, vp)
        a2, b2, c2, d2 = deriv(t0 + 0.5 * dt,
                               rho + 0.5 * dt * a1, phi + 0.5 * dt * b1,
                               vr + 0.5 * dt * c1, vp + 0.5 * dt * d1)
        a3, b3, c3, d3 = deriv(t0 + 0.5 * dt,
                               rho + 0.5 * dt * a2, phi + 0.5 * dt * b2,
                               vr + 0.5 * dt * c2, vp + 0.5 * dt * d2)
        a4, b4, c4, d4 = deriv(t0 + dt,
                               rho + dt * a3, phi + dt * b3,
                               vr + dt * c3, vp + dt * d3)
        rho = rho + dt * (a1 + 2.0 * (a2 + a3) + a4) / 6.0
        phi = phi + dt * (b1 + 2.0 * (b2 + b3) + b4) / 6.0
        vr = vr + dt * (c1 + 2.0 * (c2 + c3) + c4) / 6.0
        vp = vp + dt * (d1 + 2.0 * (d2 + d3) + d4) / 6.0
        if rho <= 0.0:
            raise RuntimeError(f"trajectory reached rho <= 0 at t={(i + 1) * dt}")
        if (i + 1) % record_every == 0:
            out_t[r] = (i + 1) * dt
            out_rho[r] = rho
            out_phi[r] = phi
            out_vr[r] = vr
            out_vp[r] = vp
            r += 1
    return out_t, out_rho, out_phi, out_vr, out_vp


def integrate_hamilton(gauge, rho0, phi0, pr0, pp0, force_kind, k, exponent,
                       b_final, t_ramp, ramp_kind, dt, n_steps, record_every):
    """RK4 integration of Hamilton's equations with gauge-specific potentials.

    State is (rho, phi, p_rho, p_phi) with canonical momenta.  The
    cylindrical gauge has no scalar potential; the Landau gauge carries the
    compensating scalar potential -d(alpha)/dt.  Returns
    (t, rho, phi, p_rho, p_phi) arrays.
    """
    _check_record(n_steps, record_every)
    if rho0 <= 0.0:
        raise ValueError("rho0 must be > 0")
    n_rec = n_steps // record_every + 1
    out_t = np.empty(n_rec)
    out_rho = np.empty(n_rec)
    out_phi = np.empty(n_rec)
    out_pr = np.empty(n_rec)
    out_pp = np.empty(n_rec)

    harmonic = force_kind == FORCE_HARMONIC
    landau = gauge == GAUGE_LANDAU

    def deriv(t, rho, phi, pr, pp):
        b = _ramp_b(t, b_final, t_ramp, ramp_kind)
        if harmonic:
            fc = -k * rho
        else:
            fc = -k / c_pow(rho, exponent)
        if not landau:
            vp = pp / rho - 0.5 * b * rho
            d_pr = vp * (pp / (rho * rho) + 0.5 * b) + fc
            return pr, vp / rho, d_pr, 0.0
        bd = _ramp_dbdt(t, b_final, t_ramp, ramp_kind)
        s2 = sin(2.0 * phi)
        c2 = cos(2.0 * phi)
        vr = pr - 0.5 * b * rho * s2
        vp = pp / rho - 0.5 * b * rho * (1.0 + c2)
        d_pr = (vr * (0.5 * b * s2)
                + vp * (pp / (rho * rho) + 0.5 * b * (1.0 + c2))
                + fc + 0.5 * bd * rho * s2)
        d_pp = (vr * (b * rho * c2)
                + vp * (-b * rho * s2)
                + 0.5 * bd * rho * rho * c2)
        return vr, vp / rho, d_pr, d_pp

    rho, phi, pr, pp = rho0, phi0, pr0, pp0
    out_t[0] = 0.0
    out_rho[0] = rho
    out_phi[0] = phi
    out_pr[0] = pr
    out_pp[0] = pp
    r = 1
    for i in range(n_steps):
        t0 = i * dt
        a1, b1, c1, d1 = deriv(t0, rho, phi, pr, pp)
        a2, b2, c2, d2 = deriv(t0 + 0.5 * dt,
                               rho + 0.5 * dt * a1, phi + 0.5 * dt * b1,
                               pr + 0.5 * dt * c1, pp + 0.5 * dt * d1)
        a3, b3, c3, d3 = deriv(t0 + 0.5 * dt,
                               rho + 0.5 * dt * a2, phi + 0.5 * dt * b2,
                               pr + 0.5 * dt * c2, pp + 0.5 * dt * d2)
        a4, b4, c4, d4 = deriv(t0 + dt,
                               rho + dt * a3, phi + dt * b3,
                               pr + dt * c3, pp + dt * d3)
        rho = rho + dt * (a1 + 2.0 * (a2 + a3) + a4) / 6.0
        phi = phi + dt * (b1 + 2.0 * (b2 + b3) + b4) / 6.0
        pr = pr + dt * (c1 + 2.0 * (c2 + c3) + c4) / 6.0
        pp = pp + dt * (d1 + 2.0 * (d2 + d3) + d4) / 6.0
        if rho <= 0.0:
            raise RuntimeError(f"trajectory reached rho <= 0 at t={(i + 1) * dt}")
        if (i + 1) % record_every == 0:
            out_t[r] = (i + 1) * dt
            out_rho[r] = rho
            out_phi[r] = phi
            out_pr[r] = pr
            out_pp[r] = pp
            r += 1
    return out_t, out_rho, out_phi, out_pr, out_pp
