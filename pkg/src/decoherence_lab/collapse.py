"""Decoherence kernels and momentum-diffusion coefficients.

Each fluctuation source (thermal environment, GRW, GPR, GGR) damps the
off-diagonal elements of the centre-of-mass density matrix at a rate
Gamma(|q - q'|^2). The quadratic part of Gamma acts on the Wigner function
as momentum diffusion with coefficient hbar^2 * dGamma/d(d^2) at 0.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

from .catalog import BodyProfile
from .constants import CGS, PhysicalConstants
from .errors import DomainError, NumericalError, RegimeWarning, ValidationError

# d^2 must stay below this fraction of V^(2/3) for the quadratic GGR kernel
GGR_QUADRATIC_WINDOW = 1e-2


class ModelKind(str, enum.Enum):
    ENV = "env"
    GRW = "grw"
    GPR = "gpr"
    GGR = "ggr"


class Regime(str, enum.Enum):
    EXACT = "exact"
    QUADRATIC = "small_separation_quadratic"


@dataclass(frozen=True)
class CollapseModelParams:
    lambda_grw: float = 1e-16  # 1/s
    a: float = 1e-5  # cm
    gamma_gpr: float = 1e-30  # cm^-3 s^-1

    def __post_init__(self):
        for name in ("lambda_grw", "a", "gamma_gpr"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValidationError(f"{name} must be > 0, got {value!r}", field=name)


@dataclass(frozen=True)
class FluctuationModel:
    """One fluctuation source.

    ``temperature`` and ``env_rate`` are only read by the environmental
    model; leaving them as None takes the body's own values.
    """

    kind: ModelKind
    params: CollapseModelParams = field(default_factory=CollapseModelParams)
    temperature: float | None = None
    env_rate: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        for name in ("temperature", "env_rate"):
            value = getattr(self, name)
            if value is not None and not value >= 0:
                raise ValidationError(f"{name} must be >= 0, got {value!r}", field=name)

    def env_values(self, body: BodyProfile):
        T = body.temperature if self.temperature is None else self.temperature
        gamma = body.relax_rate if self.env_rate is None else self.env_rate
        if self.kind is ModelKind.ENV and not (T > 0 and gamma > 0):
            raise ValidationError(
                f"environmental model needs T > 0 and gamma > 0 (got T={T}, gamma={gamma})",
                field="temperature" if not T > 0 else "env_rate")
        return T, gamma


def diffusion_coefficient(model: FluctuationModel, body: BodyProfile,
                          constants: PhysicalConstants = CGS) -> float:
    """Momentum diffusion coefficient D in erg*g/s."""
    hbar = constants.hbar
    p = model.params
    if model.kind is ModelKind.ENV:
        T, gamma = model.env_values(body)
        return 2.0 * body.mass * gamma * constants.k_B * T
    if model.kind is ModelKind.GRW:
        return body.particle_count * p.lambda_grw * hbar**2 / (4.0 * p.a**2)
    if model.kind is ModelKind.GPR:
        return (p.gamma_gpr * hbar**2 * body.particle_count**2 * body.cross_section
                / (4.0 * body.volume**2 * p.a * math.sqrt(math.pi)))
    if model.kind is ModelKind.GGR:
        return constants.G * hbar * body.mass**2 / (2.0 * body.volume)
    raise AssertionError(model.kind)


@dataclass(frozen=True)
class DecoherenceKernel:
    """Gamma(d^2) for one model acting on one body.

    GRW is available in both regimes. GPR, GGR and the thermal environment
    only exist in the quadratic regime, where Gamma = (D / hbar^2) * d^2.
    """

    model: FluctuationModel
    body: BodyProfile
    regime: Regime = Regime.EXACT
    constants: PhysicalConstants = CGS

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        if self.regime is Regime.EXACT and self.model.kind in (ModelKind.GPR, ModelKind.GGR):
            raise ValidationError(
                f"{self.model.kind.value} kernel is only implemented in the quadratic regime",
                field="regime")
        self.model.env_values(self.body)

    @property
    def kind(self):
        return self.model.kind

    def quadratic_slope(self):
        """dGamma/d(d^2) at the origin, in 1/(cm^2 s)."""
        return diffusion_coefficient(self.model, self.body, self.constants) / self.constants.hbar**2

    def profile(self, d2):
        """Gamma as an analytic function of d^2, also defined for d^2 < 0."""
        if self.kind is ModelKind.GRW and self.regime is Regime.EXACT:
            a = self.model.params.a
            return -self.body.particle_count * self.model.params.lambda_grw * math.expm1(
                -d2 / (4.0 * a * a))
        return self.quadratic_slope() * d2

    def __call__(self, d2):
        if d2 < 0:
            raise DomainError(f"squared separation must be >= 0, got {d2!r}")
        if self.kind is ModelKind.GGR:
            window = GGR_QUADRATIC_WINDOW * self.body.volume ** (2.0 / 3.0)
            if d2 > window:
                warnings.warn(f"d^2 = {d2:.3g} cm^2 exceeds the quadratic GGR window "
                              f"{window:.3g} cm^2", RegimeWarning, stacklevel=2)
        return self.profile(d2)


def _require(kernel, kind):
    if kernel.kind is not kind:
        raise ValidationError(f"expected a {kind.value} kernel, got {kernel.kind.value}",
                              field="kind")


def gamma_grw(kernel: DecoherenceKernel, d2: float) -> float:
    """N * lambda_GRW * (1 - exp(-d2 / 4a^2))."""
    _require(kernel, ModelKind.GRW)
    return kernel(d2)


def gamma_ggr_quadratic(kernel: DecoherenceKernel, d2: float) -> float:
    """G M^2 d2 / (2 V hbar); emits RegimeWarning for large separations."""
    _require(kernel, ModelKind.GGR)
    return kernel(d2)


def coherence_decay_factor(kernel: DecoherenceKernel, d: float, t: float) -> float:
    """exp(-Gamma(d^2) t): decay of rho(q, q') with Hamiltonian motion frozen."""
    if d < 0 or t < 0:
        raise DomainError(f"separation and time must be >= 0, got d={d!r}, t={t!r}")
    return math.exp(-kernel(d * d) * t)


def _central_slope(f, h):
    return (f(h) - f(-h)) / (2.0 * h)


def kernel_curvature_check(kernel: DecoherenceKernel, step=None) -> float:
    """hbar^2 times the numerical slope of Gamma(d^2) at d^2 = 0.

    Central differences at steps h and h/2, combined by Richardson
    extrapolation. The default step is a^2 * 1e-4.
    """
    h = kernel.model.params.a**2 * 1e-4 if step is None else step
    coarse = _central_slope(kernel.profile, h)
    fine = _central_slope(kernel.profile, h / 2.0)
    slope = (4.0 * fine - coarse) / 3.0
    if not math.isfinite(slope):
        raise NumericalError(f"non-finite kernel slope {slope!r}")
    return kernel.constants.hbar**2 * slope
