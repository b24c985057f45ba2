"""Machine-precision checks of gauge freedom on a flux-threaded ring.

The package covers the quantum ring problem in the cylindrical, Landau, and
singular gauges (spectra, wave functions, persistent currents, angular-
momentum operators, boundary twists) and the classical counterpart of a
charged orbit under a ramping uniform field with its gauge-dependent
conservation ledger.
"""

__version__ = "0.1.0"

from .model import FLUX_QUANTUM, GaugeKind, RampShape, ScenarioConfig, flux_to_field
from .analytic import AnalyticEigenstate, boundary_ratio, current, energy
from .operators import (AngularMomentumKind, Basis, RingOperator, RingState,
                        build_angular_momentum, build_hamiltonian, diagonalize)
from .kernels import BACKEND

__all__ = [
    "FLUX_QUANTUM", "GaugeKind", "RampShape", "ScenarioConfig", "flux_to_field",
    "AnalyticEigenstate", "boundary_ratio", "current", "energy",
    "AngularMomentumKind", "Basis", "RingOperator", "RingState",
    "build_angular_momentum", "build_hamiltonian", "diagonalize",
    "BACKEND", "__version__",
]
