"""Polynomial potentials of degree at most four.

For these the Moyal series terminates after its first term, so the
quantum correction -(hbar^2 / 24) V'''(x) d^3W/dp^3 is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class PolynomialPotential:
    """V(x, t) = sum_k c_k x^k - drive_amplitude * x * cos(drive_frequency * t)."""

    coefficients: tuple = (0.0, 0.0, 0.0, 0.0, 0.0)
    drive_amplitude: float = 0.0
    drive_frequency: float = 0.0

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if len(coeffs) > 5:
            if any(c != 0.0 for c in coeffs[5:]):
                raise ValidationError("potential degree must be <= 4", field="coefficients")
            coeffs = coeffs[:5]
        coeffs = coeffs + (0.0,) * (5 - len(coeffs))
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def harmonic(cls, mass, omega):
        return cls((0.0, 0.0, 0.5 * mass * omega**2))

    @classmethod
    def inverted(cls, mass, rate):
        """Inverted parabola whose instability rate is ``rate``."""
        return cls((0.0, 0.0, -0.5 * mass * rate**2))

    @classmethod
    def double_well(cls, depth=0.25, width=1.0, drive_amplitude=0.0, drive_frequency=0.0):
        """V = depth * ((x / width)^2 - 1)^2 - depth, minima at +/- width."""
        c2 = -2.0 * depth / width**2
        c4 = depth / width**4
        return cls((0.0, 0.0, c2, 0.0, c4), drive_amplitude, drive_frequency)

    @property
    def degree(self):
        for k in range(4, -1, -1):
            if self.coefficients[k] != 0.0:
                return k
        return 0

    @property
    def driven(self):
        return self.drive_amplitude != 0.0

    def value(self, x, t=0.0):
        c = self.coefficients
        x = np.asarray(x, dtype=float)
        v = c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4])))
        if self.driven:
            v = v - self.drive_amplitude * x * math.cos(self.drive_frequency * t)
        return v

    def first_derivative(self, x, t=0.0):
        c = self.coefficients
        x = np.asarray(x, dtype=float)
        d = c[1] + x * (2 * c[2] + x * (3 * c[3] + x * 4 * c[4]))
        if self.driven:
            d = d - self.drive_amplitude * math.cos(self.drive_frequency * t)
        return d

    def third_derivative(self, x):
        c = self.coefficients
        return 6.0 * c[3] + 24.0 * c[4] * np.asarray(x, dtype=float)

    def to_dict(self):
        return {"coefficients": list(self.coefficients),
                "drive_amplitude": self.drive_amplitude,
                "drive_frequency": self.drive_frequency}


class NonlinearityScale(NamedTuple):
    chi: float
    sign_flipped: bool


def nonlinearity_scale(potential: PolynomialPotential, x: float) -> NonlinearityScale:
    """sqrt(|V'(x) / V'''(x)|) of the undriven potential.

    ``sign_flipped`` marks points where V' and V''' have opposite signs.
    Quadratic dynamics (V''' = 0) return chi = inf.
    """
    third = float(potential.third_derivative(x))
    if third == 0.0:
        return NonlinearityScale(math.inf, False)
    c = potential.coefficients
    first = c[1] + x * (2 * c[2] + x * (3 * c[3] + x * 4 * c[4]))
    ratio = first / third
    return NonlinearityScale(math.sqrt(abs(ratio)), ratio < 0)
