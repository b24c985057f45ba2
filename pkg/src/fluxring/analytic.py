"""Closed-form ring eigenstates, energies, and persistent currents.

These expressions are the ground truth the matrix machinery in
:mod:`fluxring.operators` is checked against.  In reduced units the phase of
the normalized eigenfunction (2 pi)^(-1/2) exp(i theta(phi)) is

* cylindrical: theta = l phi
* Landau:      theta = l phi + (f/2) sin(2 phi)
* singular:    theta = (l - f) phi

with integer l.  Cylindrical and Landau eigenfunctions are 2 pi periodic;
singular ones are twisted, psi(phi + 2 pi) = exp(-2 pi i f) psi(phi).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import FLUX_QUANTUM, GaugeKind

NORMALIZATION = 1.0 / math.sqrt(2.0 * math.pi)

# Flux ratios of the two reference wave-function curves emitted by the CLI
# figure command (solid and dashed curve of each figure).
FIGURE_FLUXES = (-2.5, 1.0 / 3.0)
FIGURE_L = 2


@dataclass(frozen=True)
class AnalyticEigenstate:
    """Eigenstate labelled by integer l in one of the three gauges."""

    l: int
    f: float
    kind: GaugeKind

    def __post_init__(self):
        if self.l != int(self.l):
            raise ValueError("l must be an integer quantum number")


def energy(l: int, f: float) -> float:
    """Eigenenergy (l - f)^2 / 2; the same in every gauge."""
    return 0.5 * (l - f) ** 2


def current(l: int, f: float) -> float:
    """Persistent current (l - f) / (2 pi), i.e. -dE/dPhi at Phi = 2 pi f."""
    return (l - f) / (2.0 * math.pi)


def current_from_energy_slope(l: int, f: float, h: float = 1e-5) -> float:
    """Independent route to the current: central difference of -dE/dPhi."""
    phi_flux = FLUX_QUANTUM * f

    def e_of_flux(phi):
        return 0.5 * (l - phi / FLUX_QUANTUM) ** 2

    return -(e_of_flux(phi_flux + h) - e_of_flux(phi_flux - h)) / (2.0 * h)


def wavefunction_phase(state: AnalyticEigenstate, phi):
    """Phase theta(phi) of the eigenfunction; accepts scalars or arrays."""
    if state.kind == GaugeKind.CYLINDRICAL:
        return state.l * np.asarray(phi, dtype=float)
    if state.kind == GaugeKind.LANDAU:
        phi = np.asarray(phi, dtype=float)
        return state.l * phi + 0.5 * state.f * np.sin(2.0 * phi)
    if state.kind == GaugeKind.SINGULAR:
        return (state.l - state.f) * np.asarray(phi, dtype=float)
    raise ValueError(f"unknown gauge kind: {state.kind}")


def sample_wavefunction(state: AnalyticEigenstate, phi):
    """(2 pi)^(-1/2) exp(i theta(phi))."""
    theta = wavefunction_phase(state, phi)
    return NORMALIZATION * (np.cos(theta) + 1j * np.sin(theta))


def boundary_ratio(state: AnalyticEigenstate, phi: float = 0.0) -> complex:
    """psi(phi + 2 pi) / psi(phi); independent of phi and of l.

    The phase winds by 2 pi l (cylindrical, Landau) or 2 pi (l - f)
    (singular) per turn.  Whole turns of the phase are removed exactly, so
    periodic states return exactly 1+0j and singular states return
    exp(-2 pi i f), which is again exactly 1 for integer f.
    """
    if state.kind in (GaugeKind.CYLINDRICAL, GaugeKind.LANDAU):
        return complex(1.0, 0.0)
    residue = state.f - round(state.f)
    if residue == 0.0:
        return complex(1.0, 0.0)
    return cmath.exp(-2j * math.pi * residue)


def figure_curve(which: str, f: float, n: int):
    """n uniform samples on [0, 2 pi] of Re psi for the l = 2 eigenfunction.

    ``which`` selects the gauge of the emitted curve: "fig1" is the
    Landau-gauge eigenfunction, "fig3" the singular-gauge one.  Returns
    (phi, re_psi) arrays.
    """
    if n < 64:
        raise ValueError(f"n must be >= 64 (got {n})")
    kinds = {"fig1": GaugeKind.LANDAU, "fig3": GaugeKind.SINGULAR}
    if which not in kinds:
        raise ValueError("which must be 'fig1' or 'fig3'")
    phi = np.linspace(0.0, 2.0 * math.pi, n)
    state = AnalyticEigenstate(FIGURE_L, f, kinds[which])
    theta = wavefunction_phase(state, phi)
    return phi, NORMALIZATION * np.cos(theta)
