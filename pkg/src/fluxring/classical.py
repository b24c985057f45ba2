"""Charged particle on a circular orbit while a uniform field ramps up.

One gauge-invariant trajectory is integrated from the physical fields
(E = -(dB/dt) rho u_phi / 2 induced by the ramp, plus v x B); the
gauge-dependent canonical angular momenta are then evaluated on it per
sample, one trajectory with several ledgers.  A separate check integrates
Hamilton's equations with gauge-specific potentials and confirms the paths
coincide with the field-based one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .gauges import vector_potential
from .model import ClassicalConfig, GaugeKind, RampShape

TWO_PI = 2.0 * math.pi

# RK4 step bound: at least ~6000 steps per orbital period.
MAX_DT_FRACTION = 1e-3


@dataclass(frozen=True)
class ClassicalState:
    rho: float
    phi: float
    v_rho: float
    v_phi: float
    t: float = 0.0

    def __post_init__(self):
        values = (self.rho, self.phi, self.v_rho, self.v_phi, self.t)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("state components must be finite")
        if self.rho <= 0:
            raise ValueError("rho must be > 0")


@dataclass(frozen=True)
class CentralForce:
    """Attractive central force: harmonic F = -k rho, or power law -k / rho^n."""

    k: float
    exponent: float | None = None

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("force constant k must be > 0")

    def radial(self, rho):
        if self.exponent is None:
            return -self.k * rho
        return -self.k / rho ** self.exponent

    def potential(self, rho):
        if self.exponent is None:
            return 0.5 * self.k * rho ** 2
        n = self.exponent
        if n == 1.0:
            return self.k * np.log(rho)
        return -self.k / ((1.0 - n) * rho ** (n - 1.0))

    def kernel_args(self):
        if self.exponent is None:
            return kernels.FORCE_HARMONIC, self.k, 0.0
        return kernels.FORCE_POWER, self.k, self.exponent


@dataclass(frozen=True)
class FieldProfile:
    """Uniform axial field B(t) = b_final * s(t / ramp_time), constant after.

    ramp_time = 0 degenerates to a field that is constant from t = 0.  The
    smoothstep shape is C1, so the induced electric force has no jumps and
    the first-order orbit analysis stays clean.
    """

    b_final: float
    ramp_time: float
    shape: RampShape = RampShape.SMOOTHSTEP

    def __post_init__(self):
        if self.ramp_time < 0:
            raise ValueError("ramp_time must be >= 0")

    def _ramp_kind(self) -> int:
        return kernels.RAMP_LINEAR if self.shape == RampShape.LINEAR \
            else kernels.RAMP_SMOOTHSTEP

    def b(self, t):
        t = np.asarray(t, dtype=float)
        if self.ramp_time <= 0.0:
            return np.full_like(t, self.b_final)
        x = np.clip(t / self.ramp_time, 0.0, 1.0)
        if self.shape == RampShape.LINEAR:
            s = x
        else:
            s = x * x * (3.0 - 2.0 * x)
        return self.b_final * s

    def dbdt(self, t):
        t = np.asarray(t, dtype=float)
        if self.ramp_time <= 0.0:
            return np.zeros_like(t)
        x = t / self.ramp_time
        inside = (x > 0.0) & (x < 1.0)
        if self.shape == RampShape.LINEAR:
            ds = np.where(inside, 1.0, 0.0)
        else:
            ds = np.where(inside, 6.0 * x * (1.0 - x), 0.0)
        return self.b_final * ds / self.ramp_time


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled states plus the per-gauge momentum ledger."""

    t: np.ndarray
    rho: np.ndarray
    phi: np.ndarray
    v_rho: np.ndarray
    v_phi: np.ndarray
    lz_cyl: np.ndarray
    lz_landau: np.ndarray
    kinetic: np.ndarray
    b_field: np.ndarray

    def __post_init__(self):
        steps = np.diff(self.t)
        if len(steps) and (steps.min() <= 0 or not np.allclose(steps, steps[0], rtol=1e-9)):
            raise ValueError("trajectory samples must be uniform in t and increasing")

    @property
    def n_samples(self) -> int:
        return len(self.t)

    @property
    def sample_dt(self) -> float:
        return float(self.t[1] - self.t[0]) if len(self.t) > 1 else 0.0

    def columns(self) -> dict:
        return {
            "t": self.t, "rho": self.rho, "phi": self.phi,
            "v_rho": self.v_rho, "v_phi": self.v_phi,
            "lz_cyl": self.lz_cyl, "lz_landau": self.lz_landau,
            "B": self.b_field,
        }


class PathDeviation(NamedTuple):
    """Max deviation of a Hamilton's-equations path from the field-based one."""

    position: float
    velocity: float


def init_orbit(rho0: float, v0: float, force: CentralForce | None = None) -> tuple[ClassicalState, CentralForce]:
    """Circular initial state (rho0, 0, 0, v0) and its balancing force.

    Without an explicit force, the harmonic constant k = v0^2 / rho0^2 is
    derived from the balance k rho0 = v0^2 / rho0.  An explicit force must
    already satisfy the balance to 1e-12.
    """
    if rho0 <= 0 or v0 <= 0:
        raise ValueError("rho0 and v0 must be > 0")
    if force is None:
        force = CentralForce(k=v0 ** 2 / rho0 ** 2)
    else:
        residual = abs(-force.radial(rho0) - v0 ** 2 / rho0)
        if residual > 1e-12:
            raise ValueError(f"force does not balance the circular orbit (residual {residual:.3e})")
    return ClassicalState(rho=rho0, phi=0.0, v_rho=0.0, v_phi=v0), force


def circular_speed_in_field(rho: float, k: float, b: float) -> float:
    """Azimuthal speed of the circular orbit of radius rho at constant field b.

    Root of v^2 / rho = k rho - b v, the positive branch
    v = rho (-b + sqrt(b^2 + 4 k)) / 2; reduces to sqrt(k) rho at b = 0.
    """
    return 0.5 * rho * (-b + math.sqrt(b * b + 4.0 * k))


def canonical_lz(state: ClassicalState, kind: GaugeKind, b_now: float) -> float:
    """Canonical angular momentum rho (v_phi + A_phi) in the given gauge.

    Only the cylindrical and Landau gauges are meaningful for the planar
    orbit experiment.
    """
    if kind not in (GaugeKind.CYLINDRICAL, GaugeKind.LANDAU):
        raise ValueError("canonical_lz is defined for the cylindrical and Landau gauges")
    a = vector_potential(kind, 0.5 * b_now, state.rho, state.phi)
    return state.rho * (state.v_phi + float(a.a_phi))


def _ledger(t, rho, phi, v_rho, v_phi, field: FieldProfile):
    b_now = field.b(t)
    # vector_potential takes the flux ratio f = B / 2
    a_cyl = vector_potential(GaugeKind.CYLINDRICAL, 0.5 * b_now, rho, phi)
    a_lan = vector_potential(GaugeKind.LANDAU, 0.5 * b_now, rho, phi)
    lz_cyl = rho * (v_phi + a_cyl.a_phi)
    lz_lan = rho * v_phi + rho * a_lan.a_phi
    kinetic = 0.5 * (v_rho ** 2 + v_phi ** 2)
    return lz_cyl, lz_lan, kinetic, b_now


def _check_dt(state0: ClassicalState, dt: float) -> None:
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if state0.v_phi != 0.0:
        period = TWO_PI * state0.rho / abs(state0.v_phi)
        if dt > MAX_DT_FRACTION * period:
            raise ValueError(
                f"dt={dt} too large: must be <= {MAX_DT_FRACTION * period:.3e} "
                f"(1e-3 of the orbital period {period:.3e})")


def _step_counts(dt: float, t_end: float, record_every: int) -> tuple[int, int]:
    if t_end <= 0:
        raise ValueError("t_end must be > 0")
    n_steps = max(1, round(t_end / dt))
    remainder = n_steps % record_every
    if remainder:
        n_steps += record_every - remainder
    return n_steps, record_every


def simulate(state0: ClassicalState, force: CentralForce, field: FieldProfile,
             dt: float, t_end: float, record_every: int = 1) -> Trajectory:
    """Integrate the gauge-invariant equations of motion and fill the ledger.

    The step count is rounded up to a multiple of ``record_every`` so the
    recorded samples stay uniform; the actual end time is n_steps * dt.
    """
    _check_dt(state0, dt)
    n_steps, record_every = _step_counts(dt, t_end, record_every)
    fkind, k, exponent = force.kernel_args()
    t_rel, rho, phi, v_rho, v_phi = kernels.integrate_lorentz(
        state0.rho, state0.phi, state0.v_rho, state0.v_phi,
        fkind, k, exponent,
        field.b_final, field.ramp_time, field._ramp_kind(),
        dt, n_steps, record_every)
    lz_cyl, lz_lan, kinetic, b_now = _ledger(t_rel, rho, phi, v_rho, v_phi, field)
    return Trajectory(t_rel + state0.t, rho, phi, v_rho, v_phi,
                      lz_cyl, lz_lan, kinetic, b_now)


@dataclass(frozen=True)
class ConservationReport:
    """Audit of the canonical-momentum ledgers along a trajectory.

    * max_lz_drift: the cylindrical-gauge l_z should be constant.
    * max_landau_residual: pointwise two-path residual of
      l'_z - l_z - (Phi / 2 pi) cos(2 phi) with Phi = B pi rho^2.
    * orbit_average_gap: mean of l'_z over the final full turn minus the
      mean of l_z there; the Landau value oscillates around the cylindrical
      one.
    """

    max_lz_drift: float
    max_landau_residual: float
    orbit_average_gap: float

    def as_dict(self) -> dict:
        return {
            "max_lz_drift": self.max_lz_drift,
            "max_landau_residual": self.max_landau_residual,
            "orbit_average_gap": self.orbit_average_gap,
        }


def _final_turn_slice(phi: np.ndarray) -> slice:
    """Samples spanning the last full 2 pi of accumulated angle."""
    if len(phi) < 2:
        raise ValueError("trajectory too short for an orbit average")
    target = phi[-1] - TWO_PI
    start = int(np.searchsorted(phi, target))
    start = min(max(start, 0), len(phi) - 2)
    return slice(start, len(phi))


def conservation_audit(traj: Trajectory) -> ConservationReport:
    if traj.n_samples == 0:
        raise ValueError("empty trajectory")
    drift = float(np.abs(traj.lz_cyl - traj.lz_cyl[0]).max())
    # Independent evaluation of the oscillating term.
    osc = 0.5 * traj.b_field * traj.rho ** 2 * np.cos(2.0 * traj.phi)
    residual = float(np.abs(traj.lz_landau - traj.lz_cyl - osc).max())
    window = _final_turn_slice(traj.phi)
    gap = float(np.mean(traj.lz_landau[window]) - np.mean(traj.lz_cyl[window]))
    return ConservationReport(drift, residual, gap)


def landau_oscillation_residual(traj: Trajectory, field: FieldProfile) -> float:
    """Post-ramp residual of l'_z - l_z against (Phi_final / 2 pi) cos(2 phi).

    Once the ramp has completed, the oscillation amplitude is set by the
    final flux through the orbit, Phi_final = b_final pi rho^2.
    """
    settled = traj.t >= field.ramp_time
    if not settled.any():
        raise ValueError("trajectory does not reach the end of the ramp")
    osc = 0.5 * field.b_final * traj.rho[settled] ** 2 * np.cos(2.0 * traj.phi[settled])
    return float(np.abs(traj.lz_landau[settled] - traj.lz_cyl[settled] - osc).max())


def field_angular_momentum_closed_form(rho: float, b: float) -> float:
    """Field contribution to the canonical angular momentum, B rho^2 / 2.

    Mechanical (rho v_phi) plus field equals the cylindrical-gauge canonical
    l_z by construction.
    """
    return 0.5 * b * rho ** 2


def _positions_deviation(rho1, phi1, rho2, phi2) -> float:
    # chord = sqrt(drho^2 + 4 rho1 rho2 sin^2(dphi/2)); cancellation-free for
    # nearly coincident points, unlike the raw law of cosines
    chord = np.sqrt((rho1 - rho2) ** 2
                    + 4.0 * rho1 * rho2 * np.sin(0.5 * (phi1 - phi2)) ** 2)
    return float(chord.max())


def hamiltonian_path_check(state0: ClassicalState, force: CentralForce,
                           field: FieldProfile, kind: GaugeKind,
                           dt: float, t_end: float,
                           record_every: int = 1) -> PathDeviation:
    """Deviation of the gauge's Hamilton's-equations path from the field path.

    The canonical momenta are initialized from the gauge potentials at t = 0
    and converted back to velocities at each recorded sample; positions and
    velocities are gauge-invariant, so both deviations should sit at the
    integrator-error floor.
    """
    if kind not in (GaugeKind.CYLINDRICAL, GaugeKind.LANDAU):
        raise ValueError("Hamiltonian paths are defined for the cylindrical and Landau gauges")
    _check_dt(state0, dt)
    n_steps, record_every = _step_counts(dt, t_end, record_every)
    fkind, k, exponent = force.kernel_args()

    b0 = float(field.b(0.0))
    a0 = vector_potential(kind, 0.5 * b0, state0.rho, state0.phi)
    pr0 = state0.v_rho + float(a0.a_rho)
    pp0 = state0.rho * (state0.v_phi + float(a0.a_phi))
    gauge_flag = kernels.GAUGE_LANDAU if kind == GaugeKind.LANDAU else kernels.GAUGE_CYL

    t, rho, phi, pr, pp = kernels.integrate_hamilton(
        gauge_flag, state0.rho, state0.phi, pr0, pp0,
        fkind, k, exponent,
        field.b_final, field.ramp_time, field._ramp_kind(),
        dt, n_steps, record_every)
    b_now = field.b(t)
    a = vector_potential(kind, 0.5 * b_now, rho, phi)
    v_rho = pr - a.a_rho
    v_phi = pp / rho - a.a_phi

    oracle = simulate(state0, force, field, dt, t_end, record_every)
    pos_dev = _positions_deviation(rho, phi, oracle.rho, oracle.phi)
    vel_dev = float(np.max(np.hypot(v_rho - oracle.v_rho, v_phi - oracle.v_phi)))
    return PathDeviation(pos_dev, vel_dev)


def run_scenario(cfg: ClassicalConfig) -> Trajectory:
    """Simulate the configured scenario with derived defaults filled in."""
    exponent = cfg.force_exponent
    force = CentralForce(k=cfg.resolved_k(), exponent=exponent)
    state0, force = init_orbit(cfg.rho0, cfg.v0, force)
    field = FieldProfile(cfg.b_final, cfg.ramp_time, cfg.ramp_shape)
    return simulate(state0, force, field, cfg.dt, cfg.resolved_t_end(),
                    cfg.resolved_record_stride())
