"""Quantum versus classical evolution of the same initial state."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..errors import StabilityError
from .diagnostics import l1_distance
from .engine import EvolutionSpec, Propagator
from .grid import WignerField

BREAKDOWN_THRESHOLD = 0.1


@dataclass
class DistanceSeries:
    times: np.ndarray
    distances: np.ndarray
    quantum: WignerField
    classical: WignerField

    def breakdown_time(self, threshold=BREAKDOWN_THRESHOLD):
        """First time the L1 distance reaches ``threshold``, linearly
        interpolated between snapshots; None if it never does."""
        d = self.distances
        above = np.nonzero(d >= threshold)[0]
        if above.size == 0:
            return None
        i = int(above[0])
        if i == 0:
            return float(self.times[0])
        t0, t1 = self.times[i - 1], self.times[i]
        d0, d1 = d[i - 1], d[i]
        return float(t0 + (threshold - d0) * (t1 - t0) / (d1 - d0))


def classical_quantum_distance(initial: WignerField, spec: EvolutionSpec, t_end=None,
                               stop_above=None, check_stability=True) -> DistanceSeries:
    """L1 distance between Moyal-on and Moyal-off evolutions of ``initial``.

    Both runs share the grid, potential, friction and diffusion. The series
    is sampled every ``spec.snapshot_stride`` steps. With ``stop_above``
    the run ends at the first sample whose distance exceeds it.
    """
    t_end = spec.t_end if t_end is None else t_end
    quantum_prop = Propagator(initial.grid, replace(spec, moyal_enabled=True), initial.hbar)
    classical_prop = Propagator(initial.grid, spec.classical(), initial.hbar)
    if check_stability and spec.dt > quantum_prop.max_dt * (1.0 + 1e-12):
        raise StabilityError(f"dt = {spec.dt:.4g} exceeds the stability bound "
                             f"{quantum_prop.max_dt:.4g}")
    n = int(round(t_end / spec.dt))
    q = c = initial
    times = [initial.time]
    distances = [0.0]
    for i in range(1, n + 1):
        q = quantum_prop.step(q, check_stability=False)
        c = classical_prop.step(c, check_stability=False)
        if i % spec.snapshot_stride == 0 or i == n:
            times.append(q.time)
            distances.append(l1_distance(q, c))
            if stop_above is not None and distances[-1] > stop_above:
                break
    return DistanceSeries(np.array(times), np.array(distances), q, c)


def log_slope(hbars, times):
    """Least-squares slope of breakdown time against ln(1 / hbar)."""
    x = np.log(1.0 / np.asarray(hbars, dtype=float))
    slope, _ = np.polyfit(x, np.asarray(times, dtype=float), 1)
    return float(slope)


@dataclass
class SweepResult:
    hbars: list
    breakdown_times: list
    slope: float

    def per_decade(self):
        return self.slope * math.log(10.0)


def hbar_sweep(make_run, hbars, threshold=BREAKDOWN_THRESHOLD):
    """Breakdown time for each hbar; ``make_run(hbar)`` returns (initial, spec)."""
    times = []
    for hbar in hbars:
        initial, spec = make_run(hbar)
        series = classical_quantum_distance(initial, spec, stop_above=threshold)
        times.append(series.breakdown_time(threshold))
    valid = [(h, t) for h, t in zip(hbars, times) if t is not None]
    slope = log_slope(*zip(*valid)) if len(valid) >= 2 else math.nan
    return SweepResult(list(hbars), times, slope)
