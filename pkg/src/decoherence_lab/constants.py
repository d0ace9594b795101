"""Physical constants in CGS units.

Every quantity in this package is expressed in centimetres, grams and
seconds; energies are in erg, actions in erg*s.
"""

from dataclasses import dataclass

SECONDS_PER_YEAR = 3.156e7
SECONDS_PER_DAY = 86400.0


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values in CGS units."""

    hbar: float = 1.054571817e-27  # erg s
    G: float = 6.6743e-8  # cm^3 g^-1 s^-2
    k_B: float = 1.380649e-16  # erg / K
    proton_mass: float = 1.67262192369e-24  # g

    def __post_init__(self):
        for name in ("hbar", "G", "k_B", "proton_mass"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"constant {name} must be positive, got {value!r}")


CGS = PhysicalConstants()
HBAR = CGS.hbar


def seconds_to_years(t):
    return t / SECONDS_PER_YEAR


def years_to_seconds(t):
    return t * SECONDS_PER_YEAR
