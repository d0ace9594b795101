"""Scalar and field diagnostics for Wigner and classical phase-space densities."""

from __future__ import annotations

import math

import numpy as np
import scipy.fft as sfft

from ..errors import DomainError, ValidationError
from .grid import WignerField

# negative values smaller than this fraction of max|W| count as round-off
NEGATIVE_TOLERANCE = 1e-6


def husimi(state: WignerField, sigma_x: float) -> WignerField:
    """Gaussian smoothing with widths (sigma_x, hbar / (2 sigma_x)).

    The kernel is the Wigner function of a minimum-uncertainty packet, so
    the result is the Husimi distribution; the convolution is done with
    FFTs on the periodic grid.
    """
    if not sigma_x > 0:
        raise ValidationError("sigma_x must be > 0", field="sigma_x")
    g = state.grid
    sigma_p = 0.5 * state.hbar / sigma_x
    kx = 2.0 * np.pi * sfft.fftfreq(g.nx, g.dx)
    kp = 2.0 * np.pi * sfft.rfftfreq(g.np, g.dp)
    kernel = np.exp(-0.5 * (kx[:, None] * sigma_x) ** 2 - 0.5 * (kp[None, :] * sigma_p) ** 2)
    smoothed = sfft.irfft2(sfft.rfft2(state.values) * kernel, s=g.shape)
    return state.with_values(smoothed)


def negativity_volume(state: WignerField) -> float:
    """Integral of |W| minus integral of W (equal to 1 less than the first
    for a normalized field); zero for nonnegative densities."""
    w = state.values
    return float((np.abs(w).sum() - w.sum()) * state.grid.cell_area)


def l1_distance(a: WignerField, b: WignerField) -> float:
    if a.grid != b.grid:
        raise ValidationError("fields live on different grids", field="grid")
    return float(np.abs(a.values - b.values).sum() * a.grid.cell_area)


def _box_cells(box, spacing, n, name):
    cells = box / spacing
    count = int(round(cells))
    if count < 1 or abs(cells - count) > 1e-6 * max(1.0, cells) or n % count:
        raise ValidationError(f"coarse box {name}={box!r} is not a whole number of cells "
                              f"dividing the grid (spacing {spacing!r}, {n} cells)", field=name)
    return count


def coarse_grain(state: WignerField, box):
    """Average the density over boxes of size ``box = (bx, bp)``.

    Returns the box-averaged array and the box area.
    """
    g = state.grid
    cx = _box_cells(box[0], g.dx, g.nx, "box_x")
    cp = _box_cells(box[1], g.dp, g.np, "box_p")
    avg = state.values.reshape(g.nx // cx, cx, g.np // cp, cp).mean(axis=(1, 3))
    return avg, cx * cp * g.cell_area


def gibbs_entropy(state: WignerField, coarse_box=None,
                  negative_tolerance=NEGATIVE_TOLERANCE) -> float:
    """-integral of rho ln rho over phase space, optionally box-averaged first.

    The density must be nonnegative: pass a classical comparator or a
    Husimi field. Values above ``-negative_tolerance * max(rho)`` are
    treated as round-off and clipped to zero. The density is used as
    given, so its units set the additive constant of the entropy.
    """
    values = state.values
    peak = float(np.max(np.abs(values)))
    if np.min(values) < -negative_tolerance * peak:
        raise DomainError("density has negative values; apply husimi() before taking "
                          "the Gibbs entropy of a Wigner function")
    if coarse_box is None:
        rho, area = values, state.grid.cell_area
    else:
        rho, area = coarse_grain(state, coarse_box)
    rho = np.clip(rho, 0.0, None)
    positive = rho > 0
    return float(-(rho[positive] * np.log(rho[positive])).sum() * area)


def squeezing_width(state: WignerField, slope: float) -> float:
    """Standard deviation of p - slope * x.

    For the inverted parabola with instability rate lambda and mass m,
    ``slope = m * lambda`` picks the contracting combination, whose width
    decays as exp(-lambda t).
    """
    m = state.moments()
    return math.sqrt(max(m["var_p"] - 2.0 * slope * m["cov_xp"] + slope**2 * m["var_x"], 0.0))


def field_diagnostics(state: WignerField, coarse_box=None, husimi_sigma_x=None) -> dict:
    """Per-snapshot diagnostics.

    ``coherence_length`` is hbar / Delta p. ``gibbs_entropy`` is NaN while
    the field has negative values; ``husimi_entropy`` is only recorded
    when ``husimi_sigma_x`` is given.
    """
    moments = state.moments()
    row = {"time": state.time, "norm": state.norm(), **moments,
           "purity": state.purity(),
           "coherence_length": state.hbar / math.sqrt(moments["var_p"]),
           "negativity": negativity_volume(state)}
    for key, box in (("gibbs_entropy", None), ("coarse_entropy", coarse_box)):
        if key == "coarse_entropy" and box is None:
            continue
        try:
            row[key] = gibbs_entropy(state, box)
        except DomainError:
            row[key] = math.nan
    if husimi_sigma_x is not None:
        row["husimi_entropy"] = gibbs_entropy(husimi(state, husimi_sigma_x))
    return row
