"""Phase-space grids, Wigner fields and initial states."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..constants import HBAR
from ..errors import ValidationError

MIN_POINTS = 32
SUPPORT_SIGMAS = 5.0
# sigma_x * sigma_p / hbar above which a packet counts as macroscopic
MACROSCOPIC_RATIO = 100.0


def _is_power_of_two(n):
    return n >= 1 and n & (n - 1) == 0


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Periodic rectangular grid; the upper bounds are excluded.

    Arrays defined on the grid have shape ``(nx, np)`` with x on axis 0.
    """

    nx: int
    np: int
    x_min: float
    x_max: float
    p_min: float
    p_max: float

    def __post_init__(self):
        for name in ("nx", "np"):
            n = getattr(self, name)
            if int(n) != n or not _is_power_of_two(int(n)) or n < MIN_POINTS:
                raise ValidationError(f"{name} must be a power of two >= {MIN_POINTS}, got {n!r}",
                                      field=name)
            object.__setattr__(self, name, int(n))
        if not self.x_max > self.x_min:
            raise ValidationError("x_max must exceed x_min", field="x_max")
        if not self.p_max > self.p_min:
            raise ValidationError("p_max must exceed p_min", field="p_max")

    @classmethod
    def symmetric(cls, n, x_extent, p_extent, n_p=None):
        """Grid on [-x_extent, x_extent) x [-p_extent, p_extent)."""
        return cls(n, n if n_p is None else n_p, -x_extent, x_extent, -p_extent, p_extent)

    @property
    def shape(self):
        return (self.nx, self.np)

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.nx

    @property
    def dp(self):
        return (self.p_max - self.p_min) / self.np

    @property
    def cell_area(self):
        return self.dx * self.dp

    @property
    def x(self):
        return self.x_min + self.dx * np.arange(self.nx)

    @property
    def p(self):
        return self.p_min + self.dp * np.arange(self.np)

    def mesh(self):
        return np.meshgrid(self.x, self.p, indexing="ij")

    def refined(self, factor=2):
        return replace(self, nx=self.nx * factor, np=self.np * factor)

    def to_dict(self):
        return {"nx": self.nx, "np": self.np, "x_min": self.x_min, "x_max": self.x_max,
                "p_min": self.p_min, "p_max": self.p_max}


@dataclass(frozen=True, eq=False)
class WignerField:
    """W(x, p) sampled on a grid, in units of 1/(erg s).

    ``hbar`` is carried with the field so that scaled-unit runs (where it
    is a dimensionless number) and CGS runs share one code path.
    """

    grid: PhaseSpaceGrid
    values: np.ndarray
    time: float = 0.0
    hbar: float = HBAR
    macroscopic: bool = field(default=False, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValidationError(f"values have shape {values.shape}, grid is {self.grid.shape}",
                                  field="values")
        object.__setattr__(self, "values", values)

    def with_values(self, values, time=None):
        return replace(self, values=values, time=self.time if time is None else time)

    def norm(self):
        return float(self.values.sum() * self.grid.cell_area)

    def purity(self):
        """Integral of W^2; at most 1 / (2 pi hbar) for a quantum state."""
        return float(np.square(self.values).sum() * self.grid.cell_area)

    def purity_bound(self):
        return 1.0 / (2.0 * math.pi * self.hbar)

    def marginal_x(self):
        return self.values.sum(axis=1) * self.grid.dp

    def marginal_p(self):
        return self.values.sum(axis=0) * self.grid.dx

    def moments(self):
        """Means, variances and x-p covariance."""
        g = self.grid
        x, p = g.x, g.p
        norm = self.norm()
        wx = self.marginal_x()
        wp = self.marginal_p()
        mean_x = float(wx @ x) * g.dx / norm
        mean_p = float(wp @ p) * g.dp / norm
        var_x = float(wx @ (x - mean_x) ** 2) * g.dx / norm
        var_p = float(wp @ (p - mean_p) ** 2) * g.dp / norm
        cov = float((x - mean_x) @ self.values @ (p - mean_p)) * g.cell_area / norm
        return {"mean_x": mean_x, "mean_p": mean_p, "var_x": var_x, "var_p": var_p,
                "cov_xp": cov}


def _check_support(grid, x0, p0, sigma_x, sigma_p):
    if x0 - SUPPORT_SIGMAS * sigma_x < grid.x_min or x0 + SUPPORT_SIGMAS * sigma_x > grid.x_max:
        raise ValidationError(f"packet does not fit in x within {SUPPORT_SIGMAS:g} sigma",
                              field="sigma_x")
    if p0 - SUPPORT_SIGMAS * sigma_p < grid.p_min or p0 + SUPPORT_SIGMAS * sigma_p > grid.p_max:
        raise ValidationError(f"packet does not fit in p within {SUPPORT_SIGMAS:g} sigma",
                              field="sigma_p")


def gaussian_values(grid, x0, p0, sigma_x, sigma_p, correlation=0.0):
    X, P = grid.mesh()
    u = (X - x0) / sigma_x
    v = (P - p0) / sigma_p
    one_minus = 1.0 - correlation**2
    exponent = -(u * u - 2.0 * correlation * u * v + v * v) / (2.0 * one_minus)
    return np.exp(exponent) / (2.0 * math.pi * sigma_x * sigma_p * math.sqrt(one_minus))


def init_gaussian(grid: PhaseSpaceGrid, x0, p0, sigma_x, sigma_p, hbar=HBAR,
                  correlation=0.0) -> WignerField:
    """Gaussian packet with marginal widths sigma_x, sigma_p.

    ``correlation`` is the x-p correlation coefficient. The packet is pure
    when sigma_x sigma_p sqrt(1 - correlation^2) = hbar / 2; anything
    narrower violates the uncertainty relation and is rejected.
    """
    if not (sigma_x > 0 and sigma_p > 0):
        raise ValidationError("widths must be positive", field="sigma_x")
    if not -1.0 < correlation < 1.0:
        raise ValidationError("correlation must lie in (-1, 1)", field="correlation")
    area = sigma_x * sigma_p * math.sqrt(1.0 - correlation**2)
    if area < 0.5 * hbar * (1.0 - 1e-12):
        raise ValidationError(
            f"phase-space area {area:.3g} violates the uncertainty bound "
            f"hbar/2 = {0.5 * hbar:.3g}", field="sigma_p")
    _check_support(grid, x0, p0, sigma_x, sigma_p)
    values = gaussian_values(grid, x0, p0, sigma_x, sigma_p, correlation)
    values /= values.sum() * grid.cell_area
    return WignerField(grid, values, 0.0, hbar, macroscopic=area >= MACROSCOPIC_RATIO * hbar)


def cat_state_values(grid, separation, sigma_x, hbar, x0=0.0, p0=0.0):
    """Analytic Wigner function of the even superposition of two packets.

    The packets are minimum-uncertainty Gaussians of position width
    ``sigma_x`` centred at x0 -/+ separation/2; the interference term
    oscillates as cos(separation * (p - p0) / hbar).
    """
    a = 0.5 * separation
    X, P = grid.mesh()
    p_part = np.exp(-2.0 * sigma_x**2 * (P - p0) ** 2 / hbar**2)
    lobes = (np.exp(-((X - x0 - a) ** 2) / (2 * sigma_x**2))
             + np.exp(-((X - x0 + a) ** 2) / (2 * sigma_x**2)))
    fringe = 2.0 * np.exp(-((X - x0) ** 2) / (2 * sigma_x**2)) * np.cos(2.0 * a * (P - p0) / hbar)
    norm = 2.0 * (1.0 + math.exp(-(a**2) / (2 * sigma_x**2)))
    return (lobes + fringe) * p_part / (math.pi * hbar * norm)


def init_cat(grid: PhaseSpaceGrid, separation, sigma_x, hbar=HBAR, x0=0.0, p0=0.0) -> WignerField:
    """Even cat state, normalized on the grid."""
    sigma_p = 0.5 * hbar / sigma_x
    _check_support(grid, x0 - 0.5 * separation, p0, sigma_x, sigma_p)
    _check_support(grid, x0 + 0.5 * separation, p0, sigma_x, sigma_p)
    values = cat_state_values(grid, separation, sigma_x, hbar, x0, p0)
    values /= values.sum() * grid.cell_area
    return WignerField(grid, values, 0.0, hbar)


def mixture_values(grid, separation, sigma_x, hbar, x0=0.0, p0=0.0):
    """Classical 50/50 mixture of the two packets of :func:`cat_state_values`."""
    sigma_p = 0.5 * hbar / sigma_x
    a = 0.5 * separation
    return 0.5 * (gaussian_values(grid, x0 - a, p0, sigma_x, sigma_p)
                  + gaussian_values(grid, x0 + a, p0, sigma_x, sigma_p))
