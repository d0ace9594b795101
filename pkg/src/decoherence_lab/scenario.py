"""Scenario files, snapshot CSVs and run manifests for engine runs.

A scenario is a YAML mapping::

    hbar: 0.01               # omit for the CGS value
    grid: {n: 256, x_extent: 2.2, p_extent: 1.1}
    potential: {kind: double_well}            # or {coefficients: [c0, .., c4]}
    evolution: {t_end: 5.0, dt: auto, diffusion: 0.0, gamma: 0.0,
                moyal: true, snapshot_stride: 50, mass: 1.0}
    initial: {kind: coherent, x0: 0.0, p0: 0.0}
    diagnostics: {coarse_box: [0.1375, 0.0688], husimi_sigma_x: 0.05}

Initial states are ``gaussian`` (explicit widths, optional correlation),
``coherent`` (minimum-uncertainty, widths follow hbar, ``aspect`` =
sigma_x / sigma_p) or ``cat``. Grids are either ``{n, x_extent, p_extent}``
or the full ``{nx, np, x_min, x_max, p_min, p_max}``.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from .constants import HBAR
from .errors import ValidationError
from .wigner.engine import EvolutionSpec, stability_check
from .wigner.grid import PhaseSpaceGrid, init_cat, init_gaussian
from .wigner.potential import PolynomialPotential

DT_SAFETY = 0.9
CSV_FORMAT = "%.17g"
REVIVAL_TOLERANCE = 1e-4

_TOP_KEYS = {"hbar", "grid", "potential", "evolution", "initial", "diagnostics", "name"}


def _mapping(obj, name):
    if not isinstance(obj, dict):
        raise ValidationError(f"'{name}' must be a mapping", field=name)
    return obj


def _float(section, key, name, default=None):
    if key not in section:
        if default is None:
            raise ValidationError(f"missing field '{name}.{key}'", field=f"{name}.{key}")
        return default
    try:
        return float(section[key])
    except (TypeError, ValueError):
        raise ValidationError(f"'{name}.{key}' must be a number, got {section[key]!r}",
                              field=f"{name}.{key}") from None


def _unknown(section, allowed, name):
    extra = sorted(set(section) - set(allowed))
    if extra:
        raise ValidationError(f"unknown field(s) in '{name}': {', '.join(map(str, extra))}",
                              field=name)


@dataclass
class Scenario:
    """A fully resolved engine run: grid, potential, evolution and initial state."""

    hbar: float
    grid: PhaseSpaceGrid
    potential: PolynomialPotential
    evolution: dict
    initial: dict
    diagnostics: dict
    name: str = "scenario"

    def spec(self, hbar=None) -> EvolutionSpec:
        """EvolutionSpec with dt resolved against the stability bound."""
        hbar = self.hbar if hbar is None else hbar
        ev = self.evolution
        spec = EvolutionSpec(self.potential, dt=1.0, t_end=ev["t_end"], gamma=ev["gamma"],
                             diffusion=ev["diffusion"], moyal_enabled=ev["moyal"],
                             snapshot_stride=ev["snapshot_stride"], mass=ev["mass"])
        if ev["dt"] == "auto":
            bound = stability_check(spec, self.grid, hbar)
            if ev["t_end"] == 0:
                dt = min(bound, 1.0)
            else:
                dt = ev["t_end"] / math.ceil(ev["t_end"] / (DT_SAFETY * bound))
        else:
            dt = ev["dt"]
        return replace(spec, dt=dt)

    def initial_state(self, hbar=None):
        hbar = self.hbar if hbar is None else hbar
        ini = self.initial
        kind = ini["kind"]
        if kind == "gaussian":
            return init_gaussian(self.grid, ini["x0"], ini["p0"], ini["sigma_x"], ini["sigma_p"],
                                 hbar, correlation=ini["correlation"])
        if kind == "coherent":
            sx = math.sqrt(0.5 * hbar * ini["aspect"])
            sp = math.sqrt(0.5 * hbar / ini["aspect"])
            return init_gaussian(self.grid, ini["x0"], ini["p0"], sx, sp, hbar)
        return init_cat(self.grid, ini["separation"], ini["sigma_x"], hbar, ini["x0"], ini["p0"])

    def coarse_box(self):
        box = self.diagnostics.get("coarse_box")
        return None if box is None else tuple(box)

    def resolved(self, hbar=None):
        """Plain-data view of the resolved configuration (hash input)."""
        hbar = self.hbar if hbar is None else hbar
        return {"name": self.name, "hbar": hbar, "grid": self.grid.to_dict(),
                "evolution": self.spec(hbar).to_dict(), "initial": dict(self.initial),
                "diagnostics": dict(self.diagnostics)}


def _parse_grid(section):
    section = _mapping(section, "grid")
    if "n" in section:
        _unknown(section, {"n", "n_p", "x_extent", "p_extent"}, "grid")
        n = int(_float(section, "n", "grid"))
        n_p = int(_float(section, "n_p", "grid", n))
        return PhaseSpaceGrid.symmetric(n, _float(section, "x_extent", "grid"),
                                        _float(section, "p_extent", "grid"), n_p=n_p)
    keys = ("nx", "np", "x_min", "x_max", "p_min", "p_max")
    _unknown(section, keys, "grid")
    values = [_float(section, k, "grid") for k in keys]
    return PhaseSpaceGrid(int(values[0]), int(values[1]), *values[2:])


def _parse_potential(section):
    section = _mapping(section, "potential")
    kind = section.get("kind", "polynomial")
    drive = {"drive_amplitude": _float(section, "drive_amplitude", "potential", 0.0),
             "drive_frequency": _float(section, "drive_frequency", "potential", 0.0)}
    if kind == "polynomial":
        _unknown(section, {"kind", "coefficients", "drive_amplitude", "drive_frequency"},
                 "potential")
        coeffs = section.get("coefficients")
        if not isinstance(coeffs, list) or not coeffs:
            raise ValidationError("'potential.coefficients' must be a non-empty list",
                                  field="potential.coefficients")
        try:
            coeffs = [float(c) for c in coeffs]
        except (TypeError, ValueError):
            raise ValidationError("potential coefficients must be numbers",
                                  field="potential.coefficients") from None
        return PolynomialPotential(tuple(coeffs), **drive)
    if kind == "harmonic":
        _unknown(section, {"kind", "mass", "omega"}, "potential")
        return PolynomialPotential.harmonic(_float(section, "mass", "potential", 1.0),
                                            _float(section, "omega", "potential", 1.0))
    if kind == "inverted":
        _unknown(section, {"kind", "mass", "rate"}, "potential")
        return PolynomialPotential.inverted(_float(section, "mass", "potential", 1.0),
                                            _float(section, "rate", "potential", 1.0))
    if kind == "double_well":
        _unknown(section, {"kind", "depth", "width", "drive_amplitude", "drive_frequency"},
                 "potential")
        return PolynomialPotential.double_well(_float(section, "depth", "potential", 0.25),
                                               _float(section, "width", "potential", 1.0),
                                               **drive)
    raise ValidationError(f"unknown potential kind {kind!r}", field="potential.kind")


def _parse_evolution(section):
    section = _mapping(section, "evolution")
    _unknown(section, {"t_end", "dt", "gamma", "diffusion", "moyal", "snapshot_stride", "mass"},
             "evolution")
    dt = section.get("dt", "auto")
    if dt != "auto":
        dt = _float(section, "dt", "evolution")
        if not dt > 0:
            raise ValidationError("evolution.dt must be > 0", field="evolution.dt")
    moyal = section.get("moyal", True)
    if not isinstance(moyal, bool):
        raise ValidationError("evolution.moyal must be true or false", field="evolution.moyal")
    stride = section.get("snapshot_stride", 1)
    if not isinstance(stride, int) or stride < 1:
        raise ValidationError("evolution.snapshot_stride must be a positive integer",
                              field="evolution.snapshot_stride")
    out = {"t_end": _float(section, "t_end", "evolution"), "dt": dt,
           "gamma": _float(section, "gamma", "evolution", 0.0),
           "diffusion": _float(section, "diffusion", "evolution", 0.0),
           "moyal": moyal, "snapshot_stride": stride,
           "mass": _float(section, "mass", "evolution", 1.0)}
    # let EvolutionSpec check signs and ranges
    EvolutionSpec(PolynomialPotential(), dt=1.0, t_end=out["t_end"], gamma=out["gamma"],
                  diffusion=out["diffusion"], mass=out["mass"])
    return out


def _parse_initial(section):
    section = _mapping(section, "initial")
    kind = section.get("kind", "gaussian")
    x0 = _float(section, "x0", "initial", 0.0)
    p0 = _float(section, "p0", "initial", 0.0)
    if kind == "gaussian":
        _unknown(section, {"kind", "x0", "p0", "sigma_x", "sigma_p", "correlation"}, "initial")
        return {"kind": kind, "x0": x0, "p0": p0,
                "sigma_x": _float(section, "sigma_x", "initial"),
                "sigma_p": _float(section, "sigma_p", "initial"),
                "correlation": _float(section, "correlation", "initial", 0.0)}
    if kind == "coherent":
        _unknown(section, {"kind", "x0", "p0", "aspect"}, "initial")
        aspect = _float(section, "aspect", "initial", 1.0)
        if not aspect > 0:
            raise ValidationError("initial.aspect must be > 0", field="initial.aspect")
        return {"kind": kind, "x0": x0, "p0": p0, "aspect": aspect}
    if kind == "cat":
        _unknown(section, {"kind", "x0", "p0", "separation", "sigma_x"}, "initial")
        return {"kind": kind, "x0": x0, "p0": p0,
                "separation": _float(section, "separation", "initial"),
                "sigma_x": _float(section, "sigma_x", "initial")}
    raise ValidationError(f"unknown initial state kind {kind!r}", field="initial.kind")


def _parse_diagnostics(section):
    if section is None:
        return {}
    section = _mapping(section, "diagnostics")
    _unknown(section, {"coarse_box", "husimi_sigma_x"}, "diagnostics")
    out = {}
    if "coarse_box" in section:
        box = section["coarse_box"]
        if not isinstance(box, list) or len(box) != 2:
            raise ValidationError("diagnostics.coarse_box must be [box_x, box_p]",
                                  field="diagnostics.coarse_box")
        out["coarse_box"] = [float(b) for b in box]
    if "husimi_sigma_x" in section:
        out["husimi_sigma_x"] = _float(section, "husimi_sigma_x", "diagnostics")
    return out


def parse_scenario(text) -> Scenario:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValidationError(f"scenario is not valid YAML: {exc}", field="scenario") from None
    if not data:
        raise ValidationError("scenario is empty", field="scenario")
    data = _mapping(data, "scenario")
    _unknown(data, _TOP_KEYS, "scenario")
    for key in ("grid", "potential", "evolution", "initial"):
        if key not in data:
            raise ValidationError(f"scenario is missing '{key}'", field=key)
    hbar = _float(data, "hbar", "scenario", HBAR)
    if not hbar > 0:
        raise ValidationError("hbar must be > 0", field="hbar")
    scenario = Scenario(hbar=hbar, grid=_parse_grid(data["grid"]),
                        potential=_parse_potential(data["potential"]),
                        evolution=_parse_evolution(data["evolution"]),
                        initial=_parse_initial(data["initial"]),
                        diagnostics=_parse_diagnostics(data.get("diagnostics")),
                        name=str(data.get("name", "scenario")))
    # fail early on support and uncertainty problems
    scenario.initial_state()
    return scenario


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read scenario {path}: {exc}", field="scenario") from None
    return parse_scenario(text)


def config_hash(config) -> str:
    """sha256 of the canonical JSON form of a resolved configuration."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), allow_nan=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def write_snapshot_csv(state, path):
    """One row per grid point, x varying slowest, header ``x,p,W``."""
    X, P = state.grid.mesh()
    table = np.column_stack([X.ravel(), P.ravel(), state.values.ravel()])
    np.savetxt(path, table, fmt=CSV_FORMAT, delimiter=",", header="x,p,W", comments="")
    return Path(path)


def read_snapshot_csv(path, grid: PhaseSpaceGrid):
    table = np.loadtxt(path, delimiter=",", skiprows=1)
    return table[:, 2].reshape(grid.shape)


def write_series_csv(path, columns: dict):
    names = list(columns)
    table = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    np.savetxt(path, table, fmt=CSV_FORMAT, delimiter=",", header=",".join(names), comments="")
    return Path(path)


def jsonable(obj):
    """Convert numpy values and non-finite floats into plain JSON data."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@dataclass
class RunManifest:
    command: str
    config_hash: str
    inputs: dict
    outputs: list
    wall_time: float
    results: dict

    def to_dict(self):
        return jsonable({"command": self.command, "config_hash": self.config_hash,
                         "inputs": self.inputs, "outputs": self.outputs,
                         "wall_time_s": self.wall_time, "results": self.results})

    def write(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
        return Path(path)


def harmonic_period(potential: PolynomialPotential, mass):
    """Oscillation period when the potential is an undriven pure quadratic well."""
    c = potential.coefficients
    if potential.driven or c[1] or c[3] or c[4] or not c[2] > 0:
        return None
    return 2.0 * math.pi / math.sqrt(2.0 * c[2] / mass)


def hilltop_rate(potential: PolynomialPotential, mass):
    """Largest local instability rate sqrt(-V''/m) over the stationary points."""
    c = potential.coefficients
    roots = np.roots([4 * c[4], 3 * c[3], 2 * c[2], c[1]]) if any(c[1:]) else []
    best = None
    for r in np.atleast_1d(roots):
        if abs(r.imag) > 1e-9:
            continue
        x = r.real
        curvature = 2 * c[2] + 6 * c[3] * x + 12 * c[4] * x * x
        if curvature < 0:
            rate = math.sqrt(-curvature / mass)
            best = rate if best is None else max(best, rate)
    if best is None and c[2] < 0 and not (c[3] or c[4]):
        best = math.sqrt(-2 * c[2] / mass)
    return best
