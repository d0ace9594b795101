"""Acceptance gate: one PASS/FAIL line per primary criterion.

The lines are printed in the pytest terminal summary (section
"acceptance criteria") and also when this file is run as a script.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from decoherence_lab.catalog import ChaosProfile, get_body, load_catalog
from decoherence_lab.cli import main, table2_rows
from decoherence_lab.collapse import (DecoherenceKernel, FluctuationModel, Regime,
                                      diffusion_coefficient, kernel_curvature_check)
from decoherence_lab.timescales import (classicality_verdict, t_cg_closed_form, t_cg_general,
                                        t_q_general, unexplored_area)
from decoherence_lab.wigner import PhaseSpaceGrid, PolynomialPotential, init_gaussian
from decoherence_lab.wigner import classical_quantum_distance

import runs
from conftest import record

ROOT = Path(__file__).resolve().parents[1]
SWEEP_SCENARIO = ROOT / "demos" / "scenarios" / "double_well_sweep.yaml"


def test_table2_reproduction():
    start = time.perf_counter()
    jupiter = get_body(load_catalog(), "jupiter")
    rows = table2_rows(jupiter)
    elapsed = time.perf_counter() - start
    ok = all(r["status"] == "PASS" for r in rows) and elapsed < 1.0
    detail = ", ".join(f"{r['model']} {r['D_erg_g_per_s']:.2g} vs {r['target_erg_g_per_s']:.0e} "
                       f"({r['log10_ratio']:+.2f} dec, {r['status']})" for r in rows)
    record("Jupiter diffusion-coefficient table (|log10| <= 1 each, < 1 s)", ok,
           f"{detail}; {elapsed * 1e3:.1f} ms")
    assert ok


def test_solar_system_verdict(capsys):
    start = time.perf_counter()
    code = main(["timescales", "--body", "jupiter", "--model", "env", "--json"])
    env = json.loads(capsys.readouterr().out)
    jupiter = get_body(load_catalog(), "jupiter")
    verdicts = {k: classicality_verdict(jupiter, FluctuationModel(k)).verdict.value
                for k in ("env", "grw", "gpr", "ggr")}
    elapsed = time.perf_counter() - start
    ok = (code == 0 and 2.3e8 <= env["t_Q_yr"] <= 2.1e9 and 1e8 <= env["t_CG_yr"] <= 9e8
          and env["verdict"] == "ClassicalitySafe"
          and all(v == "ClassicalitySafe" for v in verdicts.values()) and elapsed < 1.0)
    record("Solar-system verdict (t_Q in [2.3e8, 2.1e9] yr, t_CG in [1e8, 9e8] yr, all safe)",
           ok, f"t_Q = {env['t_Q_yr']:.3g} yr, t_CG = {env['t_CG_yr']:.3g} yr, "
               f"verdicts {verdicts}; {elapsed * 1e3:.1f} ms")
    assert ok


def test_hyperion_calibration():
    hyperion = get_body(load_catalog(), "hyperion")
    report = classicality_verdict(hyperion, FluctuationModel("env"))
    ok = 10.0 <= report.t_q_years <= 40.0
    record("Hyperion calibration (t_Q = 20 yr within factor 2)", ok,
           f"t_Q = {report.t_q_years:.3g} yr with Lyapunov time "
           f"{1 / hyperion.lyapunov / 86400:.2f} d")
    assert ok


def test_engine_oracle_suite():
    start = time.perf_counter()
    checks = {}
    revival, drift = runs.harmonic_revival(256)
    coarse, _ = runs.harmonic_revival(128)
    checks["revival"] = (revival <= 1e-4, f"revival L1 {revival:.2e}")
    checks["refine"] = (coarse / revival >= 4, f"refinement gain {coarse / revival:.1f}x")
    times, var_p, purity, norm = runs.free_particle(0.01)
    slope = np.polyfit(times, var_p, 1)[0]
    checks["free"] = (abs(slope / 0.02 - 1) <= 0.01, f"Var(p) slope / 2D = {slope / 0.02:.4f}")
    g = PhaseSpaceGrid.symmetric(64, 3.0, 3.0)
    w0 = init_gaussian(g, 0.5, 0.2, 0.3, 0.3, 0.05)
    pot = PolynomialPotential.harmonic(1.0, 1.3)
    dist = classical_quantum_distance(w0, runs.fitted_spec(pot, g, 0.05, 2.0)).distances.max()
    checks["moyal"] = (dist <= 1e-10, f"quadratic Moyal on/off {dist:.1e}")
    t_sq, widths, norm_sq = runs.squeezing(0.0)
    rate = -np.polyfit(t_sq, np.log(widths), 1)[0]
    checks["squeeze"] = (abs(rate - 1) <= 0.02, f"squeezing rate / lambda = {rate:.5f}")
    drifts = [drift, float(np.max(np.abs(norm - 1))), float(np.max(np.abs(norm_sq - 1)))]
    checks["norm"] = (max(drifts) <= 1e-6, f"max norm drift {max(drifts):.1e}")
    checks["purity"] = (bool(np.all(np.diff(purity) <= 1e-12)), "purity non-increasing (D > 0)")
    elapsed = time.perf_counter() - start
    checks["time"] = (elapsed < 300, f"{elapsed:.0f} s")
    ok = all(c[0] for c in checks.values())
    record("Engine oracle suite", ok, "; ".join(
        f"{text}{'' if good else ' (FAIL)'}" for good, text in checks.values()))
    assert ok


def test_logarithmic_breakdown_scaling(capsys, tmp_path):
    """Breakdown time from `compare` versus ln(1/hbar); slope should be 1/lambda."""
    code = main(["compare", "--scenario", str(SWEEP_SCENARIO), "--hbar-sweep", "4",
                 "--sweep-factor", "2", "--out", str(tmp_path), "--json"])
    capsys.readouterr()
    sweep = json.loads((tmp_path / "manifest.json").read_text())["results"]["sweep"]
    hbars = sweep["hbars"]
    decades = math.log10(hbars[0] / hbars[-1])
    ratio = sweep["slope_times_rate"]
    ok = code == 0 and decades >= 3 - 1e-9 and abs(ratio - 1) <= 0.2
    times = ", ".join(f"{t:.3f}" for t in sweep["breakdown_times"])
    record("Logarithmic breakdown scaling (3-decade sweep, slope = 1/lambda within 20%)", ok,
           f"hbar {hbars[0]:g}..{hbars[-1]:g} ({decades:.1f} decades), t_emp = [{times}], "
           f"slope * lambda = {ratio:.3f}")
    assert ok


def test_limits_and_monotonicity():
    checks = {}
    rel = []
    for lam, log_ratio in ((1.0, 5.0), (0.3, 40.0), (2.0, 150.0)):
        m0 = math.exp(log_ratio)
        strong, weak = ChaosProfile(1.0, lam, 1, m0), ChaosProfile(1 - 1e-8, lam, 1, m0)
        rel.append(abs(unexplored_area(weak, 1.0) / unexplored_area(strong, 1.0) - 1))
        rel.append(abs(t_q_general(weak, 1.0) / t_q_general(strong, 1.0) - 1))
        d = 0.5 * m0 * lam * math.exp(-0.5 * log_ratio)
        rel.append(abs(t_cg_general(weak, d, d) / t_cg_general(strong, d, d) - 1))
    checks["q"] = (max(rel) <= 1e-6, f"q -> 1 max rel diff {max(rel):.1e}")
    rng = np.random.default_rng(2024)
    n = 10_000
    lam = 10 ** rng.uniform(-16, 2, n)
    sigma = 10 ** rng.uniform(-5, 37, n)
    D = sigma**2 * lam / 2 * np.exp(-2 * rng.uniform(2.0, 150.0, n))
    factor = 1 + rng.uniform(1e-3, 10.0, n)
    decreasing = all(t_cg_closed_form(l, s, d * f) < t_cg_closed_form(l, s, d)
                     for l, s, d, f in zip(lam, sigma, D, factor))
    checks["mono"] = (decreasing, f"t_CG decreasing in D on {n} draws")
    jupiter = get_body(load_catalog(), "jupiter")
    errs = {}
    for kind, regime in (("grw", Regime.EXACT), ("ggr", Regime.QUADRATIC)):
        k = DecoherenceKernel(FluctuationModel(kind), jupiter, regime)
        errs[kind] = abs(kernel_curvature_check(k) / diffusion_coefficient(k.model, jupiter) - 1)
    checks["curv"] = (max(errs.values()) <= 0.01,
                      "curvature rel err " + ", ".join(f"{k} {v:.1e}" for k, v in errs.items()))
    ok = all(c[0] for c in checks.values())
    record("Limit and monotonicity properties", ok, "; ".join(t for _, t in checks.values()))
    assert ok


def test_entropy_behavior():
    coarse = runs.entropy_diffusive().diagnostics["coarse_entropy"]
    fine = runs.entropy_liouville().diagnostics["gibbs_entropy"]
    min_step = float(np.min(np.diff(coarse)))
    fine_dev = float(np.max(np.abs(fine - fine[0])))
    ok = (np.all(np.isfinite(coarse)) and min_step >= -1e-3 and np.all(np.isfinite(fine))
          and fine_dev <= 1e-3)
    record("Entropy behavior (coarse S non-decreasing with D > 0; fine S conserved at D = 0)", ok,
           f"coarse S {coarse[0]:.3f} -> {coarse[-1]:.3f}, min step {min_step:.1e}; "
           f"fine S drift {fine_dev:.1e}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
