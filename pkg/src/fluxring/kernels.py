"""Integrator backend selection: compiled core if available, else pure Python.

Set FLUXRING_BACKEND=python in the environment to force the fallback.  Both
backends implement the same arithmetic; ``BACKEND`` records which one is
active.
"""

from __future__ import annotations

import os

from . import _core_py

if os.environ.get("FLUXRING_BACKEND", "").lower() == "python":
    _backend = _core_py
    BACKEND = "python"
else:
    try:
        from . import _core as _backend  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _backend = _core_py
        BACKEND = "python"

FORCE_HARMONIC = _core_py.FORCE_HARMONIC
FORCE_POWER = _core_py.FORCE_POWER
RAMP_LINEAR = _core_py.RAMP_LINEAR
RAMP_SMOOTHSTEP = _core_py.RAMP_SMOOTHSTEP
GAUGE_CYL = _core_py.GAUGE_CYL
GAUGE_LANDAU = _core_py.GAUGE_LANDAU

integrate_lorentz = _backend.integrate_lorentz
integrate_hamilton = _backend.integrate_hamilton
