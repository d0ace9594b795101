"""Spectral integrator for the Wigner equation with friction and diffusion.

dW/dt = -(p/m) dW/dx + V'(x, t) dW/dp - (hbar^2/24) V'''(x) d^3W/dp^3
        + 2 gamma d(pW)/dp + D d^2W/dp^2

Derivatives are taken with real FFTs on the periodic grid and the
right-hand side is advanced with classical fourth-order Runge-Kutta. After
each step the field is multiplied by a smooth mask that vanishes on the
outer 10% of each axis, which absorbs anything that would otherwise wrap
around.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.fft as sfft

from ..errors import NumericalError, StabilityError, ValidationError
from .grid import PhaseSpaceGrid, WignerField
from .potential import PolynomialPotential

ABSORBER_FRACTION = 0.1
# RK4 stability limits on the imaginary and negative real axes
RK4_IMAG_LIMIT = 2.0 * math.sqrt(2.0)
RK4_REAL_LIMIT = 2.785293563405282
THREADS_ENV = "DECOHERENCE_LAB_THREADS"


def fft_workers():
    value = os.environ.get(THREADS_ENV)
    if not value:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        return 1


@dataclass(frozen=True)
class EvolutionSpec:
    """Parameters of one evolution run.

    ``moyal_enabled=False`` drops the quantum correction and integrates the
    classical Liouville/Fokker-Planck comparator instead.
    """

    potential: PolynomialPotential
    dt: float
    t_end: float
    gamma: float = 0.0
    diffusion: float = 0.0
    moyal_enabled: bool = True
    snapshot_stride: int = 1
    mass: float = 1.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValidationError("dt must be > 0", field="dt")
        if not self.t_end >= 0:
            raise ValidationError("t_end must be >= 0", field="t_end")
        if not (self.gamma >= 0 and self.diffusion >= 0):
            raise ValidationError("gamma and diffusion must be >= 0", field="diffusion")
        if not self.mass > 0:
            raise ValidationError("mass must be > 0", field="mass")
        if int(self.snapshot_stride) != self.snapshot_stride or self.snapshot_stride < 1:
            raise ValidationError("snapshot_stride must be a positive integer",
                                  field="snapshot_stride")

    @property
    def n_steps(self):
        return int(round(self.t_end / self.dt))

    def classical(self):
        return replace(self, moyal_enabled=False)

    def to_dict(self):
        return {"potential": self.potential.to_dict(), "dt": self.dt, "t_end": self.t_end,
                "gamma": self.gamma, "diffusion": self.diffusion,
                "moyal_enabled": self.moyal_enabled, "snapshot_stride": self.snapshot_stride,
                "mass": self.mass}


def _absorber(n, fraction=ABSORBER_FRACTION):
    width = fraction * n
    d = np.minimum(np.arange(n), n - 1 - np.arange(n)).astype(float)
    mask = np.ones(n)
    inside = d < width
    mask[inside] = np.sin(0.5 * np.pi * d[inside] / width) ** 2
    return mask


def absorber_mask(grid: PhaseSpaceGrid):
    return np.outer(_absorber(grid.nx), _absorber(grid.np))


def _wavenumbers(n, spacing, full):
    k = 2.0 * np.pi * (sfft.fftfreq(n, spacing) if full else sfft.rfftfreq(n, spacing))
    k_odd = k.copy()
    # the Nyquist mode has no odd-derivative partner on a real grid
    k_odd[n // 2] = 0.0
    return k, k_odd


def stability_check(spec: EvolutionSpec, grid: PhaseSpaceGrid, hbar: float) -> float:
    """Largest dt for which explicit RK4 stays stable.

    The oscillatory rates (advection in x and p, Moyal dispersion) are
    measured against the RK4 imaginary-axis limit and the damping rates
    (diffusion, friction) against its real-axis limit; the two fractions
    are added.
    """
    kx = math.pi / grid.dx
    kp = math.pi / grid.dp
    x = grid.x
    p_max = max(abs(grid.p_min), abs(grid.p_max))
    force = float(np.max(np.abs(spec.potential.first_derivative(x))))
    force += abs(spec.potential.drive_amplitude)
    imag = p_max / spec.mass * kx + force * kp
    if spec.moyal_enabled:
        third = float(np.max(np.abs(spec.potential.third_derivative(x))))
        imag += hbar**2 / 24.0 * third * kp**3
    imag += 2.0 * spec.gamma * p_max * kp
    real = spec.diffusion * kp**2 + 2.0 * spec.gamma
    load = imag / RK4_IMAG_LIMIT + real / RK4_REAL_LIMIT
    return math.inf if load == 0 else 1.0 / load


class Propagator:
    """Precomputed operators for one (grid, spec, hbar) combination."""

    def __init__(self, grid: PhaseSpaceGrid, spec: EvolutionSpec, hbar: float):
        self.grid = grid
        self.spec = spec
        self.hbar = hbar
        self.max_dt = stability_check(spec, grid, hbar)
        self.workers = fft_workers()
        x, p = grid.x, grid.p
        _, kx_odd = _wavenumbers(grid.nx, grid.dx, full=False)
        kp, kp_odd = _wavenumbers(grid.np, grid.dp, full=False)
        self._ikx = (1j * kx_odd)[:, None]
        self._ikp = (1j * kp_odd)[None, :]
        self._velocity = (-p / spec.mass)[None, :]
        pot = spec.potential
        static_force = pot.first_derivative(x) if not pot.driven else (
            PolynomialPotential(pot.coefficients).first_derivative(x))
        symbol = static_force[:, None] * self._ikp - spec.diffusion * (kp**2)[None, :]
        if spec.moyal_enabled:
            moyal = -(hbar**2 / 24.0) * pot.third_derivative(x)
            # d^3/dp^3 -> (ik)^3 = -i k^3
            symbol = symbol + moyal[:, None] * (-1j * kp_odd**3)[None, :]
        self._symbol = symbol
        self._p_row = p[None, :]
        self.mask = absorber_mask(grid)
        self._blowup = 1e6 / (math.pi * hbar)

    def rhs(self, W, t):
        g, w = self.grid, self.workers
        wx = sfft.rfft(W, axis=0, workers=w)
        out = self._velocity * sfft.irfft(self._ikx * wx, n=g.nx, axis=0, workers=w)
        wp = sfft.rfft(W, axis=1, workers=w)
        pot = self.spec.potential
        symbol = self._symbol
        if pot.driven:
            symbol = symbol - (pot.drive_amplitude * math.cos(pot.drive_frequency * t)) * self._ikp
        out += sfft.irfft(symbol * wp, n=g.np, axis=1, workers=w)
        if self.spec.gamma > 0:
            dwdp = sfft.irfft(self._ikp * wp, n=g.np, axis=1, workers=w)
            out += 2.0 * self.spec.gamma * (W + self._p_row * dwdp)
        return out

    def advance(self, W, t, dt):
        k1 = self.rhs(W, t)
        k2 = self.rhs(W + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = self.rhs(W + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = self.rhs(W + dt * k3, t + dt)
        new = W + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        new *= self.mask
        return new

    def step(self, state: WignerField, dt=None, check_stability=True) -> WignerField:
        dt = self.spec.dt if dt is None else dt
        if check_stability and dt > self.max_dt * (1.0 + 1e-12):
            raise StabilityError(f"dt = {dt:.4g} exceeds the stability bound {self.max_dt:.4g}")
        new = self.advance(state.values, state.time, dt)
        peak = np.max(np.abs(new))
        if not np.isfinite(peak) or peak > self._blowup:
            raise NumericalError(f"non-finite or exploding field at t = {state.time + dt:.6g}",
                                 snapshot=state)
        return state.with_values(new, state.time + dt)


def step(state: WignerField, spec: EvolutionSpec, check_stability=True) -> WignerField:
    """Advance ``state`` by ``spec.dt``."""
    return Propagator(state.grid, spec, state.hbar).step(state, check_stability=check_stability)


@dataclass
class EvolutionResult:
    snapshots: list
    diagnostics: dict = field(default_factory=dict)

    @property
    def times(self):
        return np.array([s.time for s in self.snapshots])

    @property
    def final(self):
        return self.snapshots[-1]


def evolve(state: WignerField, spec: EvolutionSpec, coarse_box=None, husimi_sigma_x=None,
           check_stability=True) -> EvolutionResult:
    """Integrate to ``spec.t_end``, keeping every ``snapshot_stride``-th step.

    The initial and final states are always kept. Diagnostics are recorded
    for every snapshot; see :func:`~decoherence_lab.wigner.diagnostics.field_diagnostics`.
    """
    from .diagnostics import field_diagnostics

    prop = Propagator(state.grid, spec, state.hbar)
    if check_stability and spec.dt > prop.max_dt * (1.0 + 1e-12):
        raise StabilityError(f"dt = {spec.dt:.4g} exceeds the stability bound {prop.max_dt:.4g}")
    snapshots = [state]
    current = state
    n = spec.n_steps
    for i in range(1, n + 1):
        current = prop.step(current, check_stability=False)
        if i % spec.snapshot_stride == 0 or i == n:
            snapshots.append(current)
    rows = [field_diagnostics(s, coarse_box=coarse_box, husimi_sigma_x=husimi_sigma_x)
            for s in snapshots]
    diagnostics = {key: np.array([r[key] for r in rows]) for key in rows[0]}
    return EvolutionResult(snapshots, diagnostics)
