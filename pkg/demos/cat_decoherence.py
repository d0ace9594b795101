"""Decoherence of a two-packet superposition.

A cat state of separation d carries interference fringes of wavenumber
d / hbar in momentum. Momentum diffusion D kills them at the rate
D d^2 / hbar^2 while the two classical lumps barely change.

    python demos/cat_decoherence.py
"""

import math

import numpy as np

from decoherence_lab.wigner import (EvolutionSpec, PhaseSpaceGrid, PolynomialPotential, evolve,
                                    init_cat, stability_check)


def main():
    hbar, d, D = 0.05, 1.5, 0.01
    grid = PhaseSpaceGrid.symmetric(128, 3.0, 3.0)
    w0 = init_cat(grid, d, 0.25, hbar)
    t_dec = hbar**2 / (D * d**2)
    t_end = 5 * t_dec
    probe = EvolutionSpec(PolynomialPotential(), dt=1.0, t_end=t_end, diffusion=D)
    n = math.ceil(t_end / stability_check(probe, grid, hbar))
    spec = EvolutionSpec(PolynomialPotential(), dt=t_end / n, t_end=t_end, diffusion=D,
                         snapshot_stride=max(1, n // 10))
    result = evolve(w0, spec)
    kappa = d / hbar

    def fringe(state):
        return abs(np.sum(state.marginal_p() * np.exp(-1j * kappa * grid.p)) * grid.dp)

    print(f"decoherence time hbar^2 / (D d^2) = {t_dec:.3f}")
    print(f"{'t / t_dec':>9} {'fringe':>9} {'exp(-t/t_dec)':>13} {'negativity':>10} {'purity':>7}")
    for snap, neg in zip(result.snapshots, result.diagnostics["negativity"]):
        print(f"{snap.time / t_dec:9.2f} {fringe(snap) / fringe(w0):9.4f} "
              f"{math.exp(-snap.time / t_dec):13.4f} {neg:10.4f} {snap.purity() / snap.purity_bound():7.3f}")


if __name__ == "__main__":
    main()
