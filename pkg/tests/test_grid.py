import math

import numpy as np
import pytest
from scipy.signal import fftconvolve

from decoherence_lab.errors import DomainError, ValidationError
from decoherence_lab.wigner import (PhaseSpaceGrid, PolynomialPotential, WignerField,
                                    gibbs_entropy, husimi, init_cat, init_gaussian, l1_distance,
                                    negativity_volume, nonlinearity_scale)
from decoherence_lab.wigner.grid import mixture_values


def test_grid_validation():
    with pytest.raises(ValidationError):
        PhaseSpaceGrid(48, 64, -1, 1, -1, 1)
    with pytest.raises(ValidationError):
        PhaseSpaceGrid(16, 16, -1, 1, -1, 1)
    with pytest.raises(ValidationError):
        PhaseSpaceGrid(64, 64, 1, -1, -1, 1)
    g = PhaseSpaceGrid.symmetric(64, 2.0, 1.0)
    assert g.dx == pytest.approx(4.0 / 64)
    assert g.x[0] == -2.0 and g.x[-1] == pytest.approx(2.0 - g.dx)
    assert g.refined().dx == pytest.approx(g.dx / 2)


def test_minimum_uncertainty_purity():
    g = PhaseSpaceGrid.symmetric(128, 3.0, 3.0)
    hbar = 0.1
    s = math.sqrt(hbar / 2)
    w = init_gaussian(g, 0.0, 0.0, s, s, hbar)
    assert w.norm() == pytest.approx(1.0, abs=1e-12)
    assert w.purity() == pytest.approx(1 / (2 * math.pi * hbar), rel=1e-4)
    assert not w.macroscopic


def test_uncertainty_violation_and_support():
    g = PhaseSpaceGrid.symmetric(64, 3.0, 3.0)
    hbar = 0.1
    s = math.sqrt(hbar / 4)
    with pytest.raises(ValidationError):
        init_gaussian(g, 0.0, 0.0, s, s, hbar)
    with pytest.raises(ValidationError):
        init_gaussian(g, 2.5, 0.0, 0.3, 0.3, hbar)
    with pytest.raises(ValidationError):
        init_gaussian(g, 0.0, 0.0, 0.3, 0.3, hbar, correlation=1.0)


def test_macroscopic_flag():
    g = PhaseSpaceGrid.symmetric(64, 3.0, 3.0)
    hbar = 1e-4
    w = init_gaussian(g, 0.0, 0.0, 0.3, 1e3 * hbar / 0.3, hbar)
    assert w.macroscopic


def test_correlated_gaussian_moments():
    g = PhaseSpaceGrid.symmetric(128, 4.0, 4.0)
    w = init_gaussian(g, 0.2, -0.1, 0.5, 0.4, 1e-3, correlation=-0.6)
    m = w.moments()
    assert m["mean_x"] == pytest.approx(0.2, abs=1e-10)
    assert m["var_x"] == pytest.approx(0.25, rel=1e-8)
    assert m["var_p"] == pytest.approx(0.16, rel=1e-8)
    assert m["cov_xp"] == pytest.approx(-0.6 * 0.5 * 0.4, rel=1e-8)


def test_nonlinearity_scale():
    quartic = PolynomialPotential((0, 0, 0, 0, 0.25))
    assert nonlinearity_scale(quartic, 1.2).chi == pytest.approx(1.2 / math.sqrt(6))
    assert math.isinf(nonlinearity_scale(PolynomialPotential.harmonic(1, 1), 1.0).chi)
    dw = PolynomialPotential((0, 0, -0.5, 0, 0.25))
    assert nonlinearity_scale(dw, 2.0).chi == pytest.approx(math.sqrt(0.5))
    assert nonlinearity_scale(dw, 0.5).sign_flipped
    with pytest.raises(ValidationError):
        PolynomialPotential((0, 0, 0, 0, 0, 1.0))


CAT_HBAR = 0.05
CAT_SIGMA = 0.2


def cat_grid():
    return PhaseSpaceGrid.symmetric(128, 4.0, 2.0)


def test_gaussian_negativity_zero():
    g = cat_grid()
    w = init_gaussian(g, 0.0, 0.0, 0.3, 0.3, CAT_HBAR)
    assert negativity_volume(w) <= 1e-6


def test_cat_negativity_grows_with_separation():
    g = cat_grid()
    values = [negativity_volume(init_cat(g, d, CAT_SIGMA, CAT_HBAR)) for d in (0.4, 1.0, 2.0, 3.0)]
    assert values[0] > 0
    assert all(a < b for a, b in zip(values, values[1:]))


def test_husimi_of_gaussian_adds_variances():
    g = PhaseSpaceGrid.symmetric(128, 3.0, 3.0)
    hbar = 0.1
    s = math.sqrt(hbar / 2)
    w = init_gaussian(g, 0.0, 0.0, s, s, hbar)
    q = husimi(w, 0.3)
    m = q.moments()
    assert m["var_x"] == pytest.approx(s**2 + 0.09, rel=1e-6)
    assert m["var_p"] == pytest.approx(s**2 + (hbar / 0.6) ** 2, rel=1e-6)
    assert q.norm() == pytest.approx(1.0, abs=1e-6)


def test_husimi_matches_brute_force_convolution():
    g = cat_grid()
    w = init_cat(g, 2.0, CAT_SIGMA, CAT_HBAR)
    q = husimi(w, CAT_SIGMA)
    sp = CAT_HBAR / (2 * CAT_SIGMA)
    kx = np.arange(-40, 41) * g.dx
    kp = np.arange(-40, 41) * g.dp
    kernel = np.exp(-kx[:, None] ** 2 / (2 * CAT_SIGMA**2) - kp[None, :] ** 2 / (2 * sp**2))
    kernel /= kernel.sum()
    brute = fftconvolve(w.values, kernel, mode="same")
    assert np.max(np.abs(q.values - brute)) < 1e-6 * np.max(np.abs(w.values))
    assert w.values.min() < -0.1 * w.values.max()
    assert q.values.min() >= -1e-8
    assert q.norm() == pytest.approx(1.0, abs=1e-6)


def test_husimi_washes_out_fringes():
    g = cat_grid()
    w = init_cat(g, 2.0, CAT_SIGMA, CAT_HBAR)
    mix = WignerField(g, mixture_values(g, 2.0, CAT_SIGMA, CAT_HBAR), 0.0, CAT_HBAR)
    mix = mix.with_values(mix.values / mix.norm())
    assert l1_distance(w, mix) > 0.5
    assert l1_distance(husimi(w, CAT_SIGMA), husimi(mix, CAT_SIGMA)) < 1e-2


def test_gibbs_entropy_uniform_and_box():
    g = PhaseSpaceGrid.symmetric(64, 1.0, 1.0)
    X, P = g.mesh()
    inside = (np.abs(X + 0.1) < 0.25) & (np.abs(P) < 0.25)
    area = inside.sum() * g.cell_area
    rho = inside / area
    field = WignerField(g, rho, 0.0, 0.01)
    assert gibbs_entropy(field) == pytest.approx(math.log(area), rel=1e-12)
    smooth = init_gaussian(g, 0.0, 0.0, 0.15, 0.15, 0.01)
    assert gibbs_entropy(smooth, (g.dx, g.dp)) == pytest.approx(gibbs_entropy(smooth), rel=1e-12)
    with pytest.raises(ValidationError):
        gibbs_entropy(smooth, (1.5 * g.dx, g.dp))


def test_gibbs_entropy_rejects_negative_density():
    w = init_cat(cat_grid(), 2.0, CAT_SIGMA, CAT_HBAR)
    with pytest.raises(DomainError):
        gibbs_entropy(w)
    assert math.isfinite(gibbs_entropy(husimi(w, CAT_SIGMA)))
