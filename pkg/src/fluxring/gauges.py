"""Vector potentials, gauge functions, and pointwise unitary phases.

Three gauge choices for the same uniform axial field B u_z are provided:

* cylindrical (symmetric):  A = (0, B rho / 2)
* Landau:                   A' = (B rho sin(2 phi) / 2, B rho (1 + cos(2 phi)) / 2)
* singular:                 A'' = (-B rho phi, 0), phi on the principal branch

All transformations are expressed relative to the cylindrical gauge,
A_to = A_from + grad(alpha).  The singular gauge function winds: it picks up
-2 pi f per turn at rho = 1, which is exactly the loop flux that its vector
potential no longer carries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .model import GaugeKind, flux_to_field

TWO_PI = 2.0 * math.pi


class VectorPotential(NamedTuple):
    a_rho: float
    a_phi: float


@dataclass(frozen=True)
class GaugeFunction:
    """A gauge function alpha(rho, phi) plus its winding behaviour.

    ``winding(rho)`` returns alpha(rho, phi + 2 pi) - alpha(rho, phi), which
    is identically zero for a regular (single-valued) gauge function.
    """

    func: Callable
    multivalued: bool
    winding: Callable
    label: str = ""

    def __call__(self, rho, phi):
        return self.func(rho, phi)


def vector_potential(kind: GaugeKind, f: float, rho, phi) -> VectorPotential:
    """Cylindrical components (A_rho, A_phi) at (rho, phi); rho must be > 0.

    Accepts scalars or numpy arrays.  The singular gauge takes phi on the
    principal branch [0, 2 pi) with the cut at phi = 0.
    """
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(rho <= 0):
        raise ValueError("rho must be > 0")
    b = flux_to_field(f)
    zeros = np.zeros(np.broadcast(rho, phi).shape)
    if kind == GaugeKind.CYLINDRICAL:
        return VectorPotential(zeros, 0.5 * b * rho + zeros)
    if kind == GaugeKind.LANDAU:
        return VectorPotential(0.5 * b * rho * np.sin(2.0 * phi),
                               0.5 * b * rho * (1.0 + np.cos(2.0 * phi)))
    if kind == GaugeKind.SINGULAR:
        return VectorPotential(-b * rho * np.mod(phi, TWO_PI), zeros)
    raise ValueError(f"unknown gauge kind: {kind}")


def gauge_function(kind_from: GaugeKind, kind_to: GaugeKind, f: float) -> GaugeFunction:
    """Gauge function alpha with A_to = A_from + grad(alpha).

    Only transformations out of the cylindrical gauge are defined.  The
    Landau target is regular, alpha = B rho^2 sin(2 phi) / 4.  The singular
    target is multivalued, alpha = -B rho^2 phi / 2, which at rho = 1 reduces
    to -f phi = -Phi phi / (2 pi).
    """
    if kind_from != GaugeKind.CYLINDRICAL:
        raise ValueError("gauge functions are defined relative to the cylindrical gauge")
    if kind_to == kind_from:
        raise ValueError("source and target gauge coincide")
    b = flux_to_field(f)
    if kind_to == GaugeKind.LANDAU:
        return GaugeFunction(
            func=lambda rho, phi: 0.25 * b * rho ** 2 * np.sin(2.0 * phi),
            multivalued=False,
            winding=lambda rho: np.zeros_like(np.asarray(rho, dtype=float)) + 0.0,
            label="cylindrical->landau",
        )
    if kind_to == GaugeKind.SINGULAR:
        return GaugeFunction(
            func=lambda rho, phi: -0.5 * b * rho ** 2 * phi,
            multivalued=True,
            winding=lambda rho: -math.pi * b * np.asarray(rho, dtype=float) ** 2,
            label="cylindrical->singular",
        )
    raise ValueError(f"unsupported gauge pair: {kind_from.value} -> {kind_to.value}")


def unitary_phase(alpha: GaugeFunction, rho, phi):
    """exp(i alpha(rho, phi)), unit modulus by construction (cos + i sin)."""
    a = alpha(rho, phi)
    return np.cos(a) + 1j * np.sin(a)


def gradient_check(alpha: GaugeFunction, kind_from: GaugeKind, kind_to: GaugeKind,
                   f: float, n_rho: int = 50, n_phi: int = 50,
                   step: float = 1e-5) -> float:
    """Max |A_to - A_from - grad(alpha)| over a sample grid.

    grad(alpha) = (d_rho alpha, rho^-1 d_phi alpha) is evaluated by central
    finite differences with the given step.  The phi range (0.1, 2 pi - 0.1)
    avoids the singular branch cut at phi = 0.
    """
    rho = np.linspace(0.5, 2.0, n_rho)[:, None]
    phi = np.linspace(0.1, TWO_PI - 0.1, n_phi)[None, :]
    grad_rho = (alpha(rho + step, phi) - alpha(rho - step, phi)) / (2.0 * step)
    grad_phi = (alpha(rho, phi + step) - alpha(rho, phi - step)) / (2.0 * step) / rho
    a_from = vector_potential(kind_from, f, rho, phi)
    a_to = vector_potential(kind_to, f, rho, phi)
    res_rho = a_to.a_rho - a_from.a_rho - grad_rho
    res_phi = a_to.a_phi - a_from.a_phi - grad_phi
    return float(max(np.abs(res_rho).max(), np.abs(res_phi).max()))


def loop_flux(kind: GaugeKind, f: float, rho: float = 1.0, n: int = 4096) -> float:
    """Circulation of A around the circle of radius rho, by uniform quadrature.

    Equals the enclosed flux 2 pi f rho^2 in the cylindrical and Landau
    gauges.  In the singular gauge A_phi vanishes and the loop integral is
    zero; the missing flux is recovered from the gauge-function winding,
    -winding(rho) = 2 pi f rho^2.
    """
    phi = np.arange(n) * (TWO_PI / n)
    a_phi = vector_potential(kind, f, rho, phi).a_phi
    return float(rho * np.sum(a_phi) * (TWO_PI / n))
