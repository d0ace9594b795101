"""Body and chaos profiles, plus the YAML catalog they are stored in."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path

import yaml

from .constants import CGS, SECONDS_PER_DAY, SECONDS_PER_YEAR, PhysicalConstants
from .errors import CatalogParseError, DomainError, ValidationError

MACROSCOPIC_ACTION_RATIO = 1e10

# record key -> BodyProfile attribute, in serialization order
_RECORD_KEYS = {
    "name": "name",
    "mass_g": "mass",
    "volume_cm3": "volume",
    "particle_count": "particle_count",
    "temperature_K": "temperature",
    "relax_rate_per_s": "relax_rate",
    "sigma_p0_g_cm_per_s": "sigma_p0",
    "lyapunov_per_s": "lyapunov",
    "cross_section_cm2": "cross_section",
    "nonlinearity_scale_cm": "nonlinearity_scale",
}
_LYAPUNOV_KEYS = {
    "lyapunov_per_s": 1.0,
    "lyapunov_time_yr": SECONDS_PER_YEAR,
    "lyapunov_time_days": SECONDS_PER_DAY,
}
_ALLOWED_KEYS = set(_RECORD_KEYS) | set(_LYAPUNOV_KEYS) | {"orbital_speed_cm_per_s"}


def _positive(obj, name, allow_zero=False):
    value = getattr(obj, name)
    ok = value >= 0 if allow_zero else value > 0
    if not (math.isfinite(value) and ok):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValidationError(f"{name} must be finite and {bound}, got {value!r}", field=name)


@dataclass(frozen=True)
class BodyProfile:
    """A macroscopic body, all fields in CGS.

    ``particle_count`` counts nucleons. ``sigma_p0`` is the initial momentum
    dispersion, ``lyapunov`` the Lyapunov rate in 1/s, ``cross_section`` the
    surface transverse to the momentum component of interest and
    ``nonlinearity_scale`` the length over which the potential is far from
    quadratic.
    """

    name: str
    mass: float
    volume: float
    particle_count: float
    temperature: float
    relax_rate: float
    sigma_p0: float
    lyapunov: float
    cross_section: float
    nonlinearity_scale: float

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ValidationError("name must be a non-empty string", field="name")
        for f in fields(self):
            if f.name == "name":
                continue
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{f.name} must be a number, got {value!r}", field=f.name)
            object.__setattr__(self, f.name, float(value))
        for name in ("mass", "volume", "particle_count", "sigma_p0", "lyapunov",
                     "cross_section", "nonlinearity_scale"):
            _positive(self, name)
        _positive(self, "temperature", allow_zero=True)
        _positive(self, "relax_rate", allow_zero=True)

    @property
    def radius(self):
        """Radius of the sphere with the same volume."""
        return (3.0 * self.volume / (4.0 * math.pi)) ** (1.0 / 3.0)

    def action_ratio(self, constants: PhysicalConstants = CGS):
        return self.sigma_p0 * self.nonlinearity_scale / constants.hbar

    def to_record(self):
        return {key: getattr(self, attr) for key, attr in _RECORD_KEYS.items()}


@dataclass(frozen=True)
class ChaosProfile:
    """Chaos parameters of the unexplored-area law.

    ``q`` is the entropic index (1 for strong chaos), ``lambda_q`` the
    generalized Lyapunov rate, ``dims`` the number of degrees of freedom and
    ``m0`` the initial unexplored area in (erg s)^dims.
    """

    q: float
    lambda_q: float
    dims: int = 1
    m0: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.q <= 1.0):
            raise ValidationError(f"q must lie in (0, 1], got {self.q!r}", field="q")
        if not (self.lambda_q > 0 and math.isfinite(self.lambda_q)):
            raise ValidationError(f"lambda_q must be > 0, got {self.lambda_q!r}", field="lambda_q")
        if int(self.dims) != self.dims or self.dims < 1:
            raise ValidationError(f"dims must be an integer >= 1, got {self.dims!r}", field="dims")
        object.__setattr__(self, "dims", int(self.dims))
        if not (self.m0 > 0 and math.isfinite(self.m0)):
            raise ValidationError(f"m0 must be > 0, got {self.m0!r}", field="m0")

    @classmethod
    def strong_from_body(cls, body: BodyProfile):
        """One-dimensional strong chaos with M(0) = chi * sigma_p(0)."""
        return cls(q=1.0, lambda_q=body.lyapunov, dims=1,
                   m0=body.nonlinearity_scale * body.sigma_p0)


def default_sigma_p0(body: BodyProfile, orbital_speed: float) -> float:
    """Initial momentum dispersion taken as the body's mean orbital momentum."""
    if not orbital_speed > 0:
        raise DomainError(f"orbital speed must be positive, got {orbital_speed!r}")
    return body.mass * orbital_speed


def default_cross_section(volume):
    return math.pi * (3.0 * volume / (4.0 * math.pi)) ** (2.0 / 3.0)


def _number(record, key, index):
    value = record[key]
    if isinstance(value, str):
        # YAML 1.1 reads exponents without a dot ("1e-26") as strings
        try:
            return float(value)
        except ValueError:
            pass
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"record {index}: {key} must be a number, got {value!r}", field=key)
    return float(value)


def body_from_record(record, index=0, constants: PhysicalConstants = CGS) -> BodyProfile:
    if not isinstance(record, dict):
        raise CatalogParseError(f"record {index} is not a mapping", index=index)
    unknown = set(record) - _ALLOWED_KEYS
    if unknown:
        raise ValidationError(f"record {index}: unknown fields {sorted(unknown)}",
                              field=sorted(unknown)[0])
    for key in ("name", "mass_g", "volume_cm3", "temperature_K", "relax_rate_per_s",
                "nonlinearity_scale_cm"):
        if key not in record:
            raise ValidationError(f"record {index}: missing field {key}", field=key)

    mass = _number(record, "mass_g", index)
    volume = _number(record, "volume_cm3", index)

    lyap_keys = [k for k in _LYAPUNOV_KEYS if k in record]
    if len(lyap_keys) != 1:
        raise ValidationError(f"record {index}: give exactly one of {sorted(_LYAPUNOV_KEYS)}",
                              field="lyapunov_per_s")
    key = lyap_keys[0]
    raw = _number(record, key, index)
    if not raw > 0:
        raise ValidationError(f"record {index}: {key} must be > 0", field=key)
    lyapunov = raw if key == "lyapunov_per_s" else 1.0 / (raw * _LYAPUNOV_KEYS[key])

    if "sigma_p0_g_cm_per_s" in record:
        sigma_p0 = _number(record, "sigma_p0_g_cm_per_s", index)
    elif "orbital_speed_cm_per_s" in record:
        speed = _number(record, "orbital_speed_cm_per_s", index)
        if not speed > 0:
            raise ValidationError(f"record {index}: orbital_speed_cm_per_s must be > 0",
                                  field="orbital_speed_cm_per_s")
        sigma_p0 = mass * speed
    else:
        raise ValidationError(f"record {index}: missing field sigma_p0_g_cm_per_s "
                              "(or orbital_speed_cm_per_s)", field="sigma_p0_g_cm_per_s")

    if "particle_count" in record:
        particle_count = _number(record, "particle_count", index)
    else:
        particle_count = mass / constants.proton_mass
    if "cross_section_cm2" in record:
        cross_section = _number(record, "cross_section_cm2", index)
    else:
        cross_section = default_cross_section(volume) if volume > 0 else volume

    try:
        return BodyProfile(
            name=str(record["name"]),
            mass=mass,
            volume=volume,
            particle_count=particle_count,
            temperature=_number(record, "temperature_K", index),
            relax_rate=_number(record, "relax_rate_per_s", index),
            sigma_p0=sigma_p0,
            lyapunov=lyapunov,
            cross_section=cross_section,
            nonlinearity_scale=_number(record, "nonlinearity_scale_cm", index),
        )
    except ValidationError as exc:
        raise ValidationError(f"record {index}: {exc}", field=exc.field) from None


def _check_catalog_body(body, constants):
    nucleons = body.mass / constants.proton_mass
    ratio = body.particle_count / nucleons
    if not 0.5 <= ratio <= 2.0:
        warnings.warn(f"{body.name}: particle_count is {ratio:.3g} x mass/proton_mass",
                      stacklevel=3)
    if body.action_ratio(constants) <= MACROSCOPIC_ACTION_RATIO:
        raise ValidationError(
            f"{body.name}: sigma_p0 * chi / hbar = {body.action_ratio(constants):.3g} "
            f"is not macroscopic (> {MACROSCOPIC_ACTION_RATIO:g})",
            field="sigma_p0_g_cm_per_s")


def parse_catalog(text, constants: PhysicalConstants = CGS):
    """Parse a YAML catalog document into validated profiles."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark is not None else ""
        raise CatalogParseError(f"catalog is not valid YAML{where}: {exc}") from None
    if isinstance(doc, dict):
        doc = doc.get("bodies")
    if not isinstance(doc, list) or not doc:
        raise CatalogParseError("catalog must hold a non-empty 'bodies' list")
    bodies = []
    seen = set()
    for index, record in enumerate(doc):
        body = body_from_record(record, index, constants)
        if body.name in seen:
            raise ValidationError(f"record {index}: duplicate name {body.name!r}", field="name")
        seen.add(body.name)
        _check_catalog_body(body, constants)
        bodies.append(body)
    return bodies


def load_catalog(path=None, constants: PhysicalConstants = CGS):
    """Load bodies from ``path``, or the built-in catalog when ``path`` is None."""
    if path is None:
        text = resources.files("decoherence_lab.data").joinpath("bodies.yaml").read_text()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise CatalogParseError(f"cannot read catalog {path}: {exc}") from None
    return parse_catalog(text, constants)


def dump_catalog(bodies):
    """Serialize profiles so that :func:`parse_catalog` restores them exactly."""
    return yaml.safe_dump({"bodies": [b.to_record() for b in bodies]}, sort_keys=False)


def get_body(bodies, name) -> BodyProfile:
    for body in bodies:
        if body.name == name:
            return body
    known = ", ".join(b.name for b in bodies)
    raise KeyError(f"unknown body {name!r} (known: {known})")
