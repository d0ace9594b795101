"""Engine runs shared between the oracle tests and the acceptance gate.

Each run is cached so a pytest session pays for it once.
"""

import math
from functools import lru_cache

import numpy as np

from decoherence_lab.wigner import (EvolutionSpec, PhaseSpaceGrid, PolynomialPotential,
                                    classical_quantum_distance, evolve, init_gaussian,
                                    l1_distance, squeezing_width, stability_check)


def fitted_spec(potential, grid, hbar, t_end, fraction=1.0, **kw):
    """Spec whose dt divides t_end and sits at ``fraction`` of the stability bound."""
    probe = EvolutionSpec(potential, dt=1.0, t_end=t_end, **kw)
    bound = stability_check(probe, grid, hbar)
    n = math.ceil(t_end / (fraction * bound))
    return EvolutionSpec(potential, dt=t_end / n, t_end=t_end, **kw)


HARMONIC_HBAR = 0.1


@lru_cache(maxsize=None)
def harmonic_revival(n):
    """L1 error and max norm drift after one period of a coherent packet."""
    grid = PhaseSpaceGrid.symmetric(n, 3.5, 3.5)
    pot = PolynomialPotential.harmonic(1.0, 1.0)
    sigma = math.sqrt(HARMONIC_HBAR / 2)
    w0 = init_gaussian(grid, 1.5, 0.0, sigma, sigma, HARMONIC_HBAR)
    spec = fitted_spec(pot, grid, HARMONIC_HBAR, 2 * math.pi, snapshot_stride=10**9)
    result = evolve(w0, spec)
    drift = float(np.max(np.abs(result.diagnostics["norm"] - 1.0)))
    return l1_distance(result.final, w0), drift


@lru_cache(maxsize=None)
def free_particle(D=0.01):
    """Times and Var(p) for V = 0 with momentum diffusion."""
    grid = PhaseSpaceGrid.symmetric(128, 8.0, 3.0)
    hbar = 0.05
    w0 = init_gaussian(grid, 0.0, 0.0, 0.5, 0.2, hbar)
    spec = fitted_spec(PolynomialPotential(), grid, hbar, 4.0, diffusion=D, snapshot_stride=20)
    result = evolve(w0, spec)
    return result.times, result.diagnostics["var_p"], result.diagnostics["purity"], \
        result.diagnostics["norm"]


SQUEEZE_EFOLDS = 3.0


@lru_cache(maxsize=None)
def squeezing(D=0.0):
    """Contracting-direction width on the inverted parabola m = lambda = 1.

    The packet starts stretched along the stable direction by the same
    factor it will be squeezed, so both ends of the run fit on 256 x 256.
    """
    grid = PhaseSpaceGrid.symmetric(256, 3.2, 3.2)
    hbar = 1e-3
    rho = -math.tanh(SQUEEZE_EFOLDS)
    sigma = math.sqrt((1 + math.exp(-2 * SQUEEZE_EFOLDS)) / 4)
    w0 = init_gaussian(grid, 0.0, 0.0, sigma, sigma, hbar, correlation=rho)
    spec = fitted_spec(PolynomialPotential.inverted(1.0, 1.0), grid, hbar, SQUEEZE_EFOLDS,
                       diffusion=D, snapshot_stride=30)
    result = evolve(w0, spec)
    widths = np.array([squeezing_width(s, 1.0) for s in result.snapshots])
    return result.times, widths, result.diagnostics["norm"]


DOUBLE_WELL_SIGMA = 0.15


def double_well_run(hbar, t_end, diffusion=0.0, n=128, stop_above=None):
    grid = PhaseSpaceGrid.symmetric(n, 3.2, 2.0)
    pot = PolynomialPotential.double_well()
    w0 = init_gaussian(grid, 0.0, 0.0, DOUBLE_WELL_SIGMA, DOUBLE_WELL_SIGMA, hbar)
    spec = fitted_spec(pot, grid, hbar, t_end, fraction=0.9, diffusion=diffusion,
                       snapshot_stride=10)
    return classical_quantum_distance(w0, spec, stop_above=stop_above)


@lru_cache(maxsize=None)
def breakdown_time(hbar):
    """Empirical breakdown time of the hilltop packet, D = 0."""
    return double_well_run(hbar, 6.0, stop_above=0.1).breakdown_time(0.1)


ENTROPY_BOX = (0.4, 0.25)


def _driven_run(diffusion, t_end, moyal, drive, extents=(3.2, 2.0), box=ENTROPY_BOX):
    grid = PhaseSpaceGrid.symmetric(128, *extents)
    pot = PolynomialPotential.double_well(drive_amplitude=drive, drive_frequency=1.0)
    hbar = 0.02
    w0 = init_gaussian(grid, -0.3, 0.0, 0.15, 0.1, hbar)
    spec = fitted_spec(pot, grid, hbar, t_end, fraction=0.9, diffusion=diffusion,
                       moyal_enabled=moyal, snapshot_stride=40)
    return evolve(w0, spec, coarse_box=box)


@lru_cache(maxsize=None)
def entropy_diffusive():
    """Classical density in the driven double well with D > 0."""
    return _driven_run(0.02, 4.0, False, 0.05)


@lru_cache(maxsize=None)
def entropy_liouville():
    """Classical density, undriven, D = gamma = 0, while still resolved."""
    return _driven_run(0.0, 1.2, False, 0.0, extents=(2.2, 1.1), box=None)
