"""One-dimensional Wigner-function dynamics and phase-space diagnostics."""

from .compare import (BREAKDOWN_THRESHOLD, DistanceSeries, SweepResult,
                      classical_quantum_distance, hbar_sweep, log_slope)
from .diagnostics import (coarse_grain, field_diagnostics, gibbs_entropy, husimi,
                          l1_distance, negativity_volume, squeezing_width)
from .engine import (EvolutionResult, EvolutionSpec, Propagator, absorber_mask, evolve,
                     stability_check, step)
from .grid import (PhaseSpaceGrid, WignerField, cat_state_values, gaussian_values, init_cat,
                   init_gaussian, mixture_values)
from .potential import NonlinearityScale, PolynomialPotential, nonlinearity_scale
