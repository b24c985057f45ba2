"""Reduced units, flux parameter, gauge identifiers, and scenario configuration.

The quantum sector works in units hbar = m = e = a = 1 (a is the ring
radius), so the flux ratio f = Phi/Phi_0 is the only physical knob: energies
are E_l = (l - f)^2 / 2, persistent currents j = (l - f) / (2 pi), and the
uniform field strength is B = 2 f.  The classical sector shares m = e = 1 but
keeps its own free orbit parameters (rho0, v0, k).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, fields

FLUX_QUANTUM = 2.0 * math.pi  # Phi_0 = 2 pi hbar / e with hbar = e = 1

CONFIG_SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Raised when a scenario configuration violates its invariants.

    ``errors`` lists every violated bound, each prefixed with the offending
    field name.
    """

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class GaugeKind(str, enum.Enum):
    CYLINDRICAL = "cylindrical"
    LANDAU = "landau"
    SINGULAR = "singular"


class RampShape(str, enum.Enum):
    LINEAR = "linear"
    SMOOTHSTEP = "smoothstep"


@dataclass(frozen=True)
class ReducedUnits:
    """Marker for the unit conventions used throughout.

    Quantum sector: hbar = mass = charge = ring_radius = 1, energies in
    hbar^2/(m a^2), flux quantum Phi_0 = 2 pi.  Classical sector: mass =
    charge = 1 with free (rho0, v0, k).
    """

    hbar: float = 1.0
    mass: float = 1.0
    charge: float = 1.0
    ring_radius: float = 1.0

    @property
    def flux_quantum(self) -> float:
        return 2.0 * math.pi * self.hbar / self.charge


def flux_to_field(f: float) -> float:
    """Uniform field strength B for flux ratio f.

    Phi = B pi a^2 and Phi_0 = 2 pi give f = B a^2 / 2, hence B = 2 f with
    a = 1.  Linear in f, and f = flux_to_field(f) * a^2 / 2 round-trips
    exactly (scaling by 2 is exact in binary floating point).
    """
    return 2.0 * f


@dataclass(frozen=True)
class ClassicalConfig:
    """Parameters of the ramped-field orbit experiment.

    ``k`` may be omitted (None): it is then derived from the circular-orbit
    balance k = v0^2 / rho0^2.  ``t_end`` defaults to the ramp time plus two
    orbital periods so the settled state is sampled at constant field.
    ``record_stride`` defaults to one recorded sample per 0.01 time units.
    """

    rho0: float = 1.0
    v0: float = 1.0
    k: float | None = None
    force_exponent: float | None = None  # None -> harmonic F = -k rho
    b_final: float = 0.01
    ramp_time: float = 200.0 * math.pi  # 100 orbital periods of the default orbit
    ramp_shape: RampShape = RampShape.SMOOTHSTEP
    dt: float = 1e-4
    t_end: float | None = None
    record_stride: int | None = None

    def orbital_period(self) -> float:
        return 2.0 * math.pi * self.rho0 / self.v0

    def resolved_k(self) -> float:
        if self.k is not None:
            return self.k
        if self.force_exponent is None:
            return self.v0 ** 2 / self.rho0 ** 2
        return self.v0 ** 2 * self.rho0 ** (self.force_exponent - 1.0)

    def resolved_t_end(self) -> float:
        if self.t_end is not None:
            return self.t_end
        return self.ramp_time + 2.0 * self.orbital_period()

    def resolved_record_stride(self) -> int:
        if self.record_stride is not None:
            return self.record_stride
        return max(1, round(0.01 / self.dt))


@dataclass(frozen=True)
class ScenarioConfig:
    """One versioned scenario document (see the JSON schema in the README)."""

    gauge: GaugeKind = GaugeKind.CYLINDRICAL
    flux: float = 1.0 / 3.0
    l_max: int = 32
    n_grid: int = 256
    classical: ClassicalConfig = field(default_factory=ClassicalConfig)
    output_format: str = "csv"


def _check_unknown(block: dict, allowed: set[str], where: str, errors: list[str]) -> None:
    for key in block:
        if key not in allowed:
            errors.append(f"{where}{key}: unknown field")


def config_from_dict(doc: dict) -> ScenarioConfig:
    """Parse a configuration document, rejecting unknown fields."""
    errors: list[str] = []
    if not isinstance(doc, dict):
        raise ConfigError(["config: expected a JSON object"])

    top_allowed = {"schema_version", "gauge", "flux", "l_max", "n_grid",
                   "classical", "output_format"}
    _check_unknown(doc, top_allowed, "", errors)

    version = doc.get("schema_version")
    if version != CONFIG_SCHEMA_VERSION:
        errors.append(f"schema_version: expected {CONFIG_SCHEMA_VERSION}, got {version!r}")

    classical_doc = doc.get("classical", {})
    cls_allowed = {f.name for f in fields(ClassicalConfig)}
    if not isinstance(classical_doc, dict):
        errors.append("classical: expected an object")
        classical_doc = {}
    _check_unknown(classical_doc, cls_allowed, "classical.", errors)
    if errors:
        raise ConfigError(errors)

    try:
        gauge = GaugeKind(doc.get("gauge", ScenarioConfig.gauge))
    except ValueError:
        raise ConfigError([f"gauge: must be one of {[g.value for g in GaugeKind]}"])
    try:
        ramp_shape = RampShape(classical_doc.get("ramp_shape", RampShape.SMOOTHSTEP))
    except ValueError:
        raise ConfigError([f"classical.ramp_shape: must be one of {[s.value for s in RampShape]}"])

    classical_kwargs = {k: v for k, v in classical_doc.items() if k != "ramp_shape"}
    cfg = ScenarioConfig(
        gauge=gauge,
        flux=float(doc.get("flux", ScenarioConfig.flux)),
        l_max=int(doc.get("l_max", ScenarioConfig.l_max)),
        n_grid=int(doc.get("n_grid", ScenarioConfig.n_grid)),
        classical=ClassicalConfig(ramp_shape=ramp_shape, **classical_kwargs),
        output_format=str(doc.get("output_format", ScenarioConfig.output_format)),
    )
    return validate_config(cfg)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    cls = cfg.classical
    return {
        "schema_version": CONFIG_SCHEMA_VERSION,
        "gauge": cfg.gauge.value,
        "flux": cfg.flux,
        "l_max": cfg.l_max,
        "n_grid": cfg.n_grid,
        "classical": {
            "rho0": cls.rho0,
            "v0": cls.v0,
            "k": cls.k,
            "force_exponent": cls.force_exponent,
            "b_final": cls.b_final,
            "ramp_time": cls.ramp_time,
            "ramp_shape": cls.ramp_shape.value,
            "dt": cls.dt,
            "t_end": cls.t_end,
            "record_stride": cls.record_stride,
        },
        "output_format": cfg.output_format,
    }


def load_config(path) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def validate_config(cfg: ScenarioConfig) -> ScenarioConfig:
    """Return ``cfg`` unchanged if every invariant holds, else raise.

    Each violated bound is reported with its field name.
    """
    errors: list[str] = []
    if not math.isfinite(cfg.flux):
        errors.append("flux: must be finite")
    if cfg.l_max < 8:
        errors.append(f"l_max: below minimum 8 (got {cfg.l_max})")
    if cfg.n_grid < 4 * cfg.l_max:
        errors.append(f"n_grid: must be >= 4*l_max = {4 * cfg.l_max} (got {cfg.n_grid})")
    if cfg.output_format not in ("csv", "json"):
        errors.append(f"output_format: must be 'csv' or 'json' (got {cfg.output_format!r})")

    cls = cfg.classical
    if cls.rho0 <= 0:
        errors.append(f"classical.rho0: must be > 0 (got {cls.rho0})")
    if cls.v0 <= 0:
        errors.append(f"classical.v0: must be > 0 (got {cls.v0})")
    if cls.k is not None:
        if cls.k <= 0:
            errors.append(f"classical.k: must be > 0 (got {cls.k})")
        elif cls.rho0 > 0 and cls.v0 > 0:
            if cls.force_exponent is None:
                central = cls.k * cls.rho0
            else:
                central = cls.k / cls.rho0 ** cls.force_exponent
            residual = abs(central - cls.v0 ** 2 / cls.rho0)
            if residual > 1e-12:
                errors.append(
                    f"classical.k: violates circular balance |F(rho0)| = v0^2/rho0 "
                    f"(residual {residual:.3e})")
    if not math.isfinite(cls.b_final):
        errors.append("classical.b_final: must be finite")
    if cls.ramp_time <= 0:
        errors.append(f"classical.ramp_time: must be > 0 (got {cls.ramp_time})")
    if cls.dt <= 0:
        errors.append(f"classical.dt: must be > 0 (got {cls.dt})")
    if cls.t_end is not None and cls.t_end <= 0:
        errors.append(f"classical.t_end: must be > 0 (got {cls.t_end})")
    if cls.record_stride is not None and cls.record_stride < 1:
        errors.append(f"classical.record_stride: must be >= 1 (got {cls.record_stride})")

    if errors:
        raise ConfigError(errors)
    return cfg
