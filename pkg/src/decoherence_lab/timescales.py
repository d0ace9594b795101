"""Correspondence-breakdown and coarse-graining timescales.

All formulas are evaluated in log space so that macroscopic action ratios
(~1e77 for Jupiter) and high phase-space dimensions stay finite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

from scipy.optimize import brentq

from .catalog import BodyProfile, ChaosProfile
from .collapse import FluctuationModel, diffusion_coefficient
from .constants import CGS, SECONDS_PER_YEAR, PhysicalConstants
from .errors import DomainError

# |1 - q| below this is treated as strong chaos
Q_ONE_TOLERANCE = 1e-12
STANDOFF_BRACKET = (1e-30, 1e20)  # s
STANDOFF_RTOL = 1e-10


class Verdict(str, enum.Enum):
    SAFE = "ClassicalitySafe"
    BREAKDOWN = "CorrespondenceBreakdown"


def _is_strong(q):
    return abs(1.0 - q) < Q_ONE_TOLERANCE


def _q_time(log_ratio, rate, q):
    """Time at which a q-exponential decay covers ``log_ratio`` e-folds.

    q = 1 gives log_ratio / rate; otherwise
    [exp((1 - q) log_ratio) - 1] / (rate (1 - q)).
    """
    if _is_strong(q):
        return log_ratio / rate
    eps = 1.0 - q
    return math.expm1(eps * log_ratio) / (rate * eps)


def unexplored_area(chaos: ChaosProfile, t: float) -> float:
    """M(t) = M(0) / [1 + lambda_q t (1 - q)]^(1 / (1 - q)); exponential at q = 1."""
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t!r}")
    if _is_strong(chaos.q):
        return chaos.m0 * math.exp(-chaos.lambda_q * t)
    eps = 1.0 - chaos.q
    return chaos.m0 * math.exp(-math.log1p(chaos.lambda_q * t * eps) / eps)


def t_q_zurek(lyapunov: float, chi: float, sigma_p0: float, hbar: float = CGS.hbar) -> float:
    """lambda^-1 ln(chi sigma_p(0) / hbar)."""
    log_arg = math.log(chi) + math.log(sigma_p0) - math.log(hbar)
    if not log_arg > 0:
        raise DomainError(f"chi * sigma_p0 / hbar = {math.exp(log_arg):.3g} <= 1: "
                          "the system is already at the quantum scale")
    return log_arg / lyapunov


def t_q_general(chaos: ChaosProfile, hbar: float = CGS.hbar) -> float:
    """Time at which the unexplored area shrinks to hbar^N."""
    log_arg = math.log(chaos.m0) - chaos.dims * math.log(hbar)
    if not log_arg > 0:
        raise DomainError(f"M(0) <= hbar^N (ln ratio {log_arg:.3g}); no classical regime")
    return _q_time(log_arg, chaos.lambda_q, chaos.q)


def _standoff_log_arg(lyapunov, sigma_p0, D):
    if not (lyapunov > 0 and sigma_p0 > 0 and D > 0):
        raise DomainError(f"need lambda, sigma_p0, D > 0 (got {lyapunov!r}, {sigma_p0!r}, {D!r})")
    return math.log(sigma_p0) + 0.5 * math.log(lyapunov) - 0.5 * math.log(2.0 * D)


def t_cg_closed_form(lyapunov: float, sigma_p0: float, D: float) -> float:
    """lambda^-1 ln(sigma_p(0) sqrt(lambda) / sqrt(2 D))."""
    log_arg = _standoff_log_arg(lyapunov, sigma_p0, D)
    if not log_arg > 0:
        raise DomainError("sigma_p0 sqrt(lambda) / sqrt(2D) <= 1: diffusion dominates at once")
    return log_arg / lyapunov


def t_cg_standoff(lyapunov: float, sigma_p0: float, D: float) -> float:
    """Root of sigma_p(0) exp(-lambda t) = sqrt(2 D t).

    The root is bracketed in log t over STANDOFF_BRACKET; the crossing is
    monotone, so it is unique whenever it exists.
    """
    _standoff_log_arg(lyapunov, sigma_p0, D)
    log_sigma = math.log(sigma_p0)
    log_2d = math.log(2.0 * D)

    def gap(log_t):
        return log_sigma - lyapunov * math.exp(log_t) - 0.5 * (log_2d + log_t)

    lo, hi = (math.log(t) for t in STANDOFF_BRACKET)
    if not gap(lo) > 0 > gap(hi):
        raise DomainError("no standoff crossing inside "
                          f"[{STANDOFF_BRACKET[0]:g}, {STANDOFF_BRACKET[1]:g}] s")
    log_root = brentq(gap, lo, hi, xtol=STANDOFF_RTOL, rtol=1e-15, maxiter=500)
    return math.exp(log_root)


def t_cg_general(chaos: ChaosProfile, d_x: float, d_p: float) -> float:
    """Time at which isotropic (D_x, D_p) diffusion halts fragmentation."""
    if not (d_x > 0 and d_p > 0):
        raise DomainError(f"diffusion coefficients must be > 0 (got D_x={d_x!r}, D_p={d_p!r})")
    n = chaos.dims
    log_arg = (math.log(chaos.m0) + n * math.log(chaos.lambda_q)
               - n * (math.log(2.0) + 0.5 * (math.log(d_x) + math.log(d_p))))
    if not log_arg > 0:
        raise DomainError(f"M(0) lambda^N / (2 sqrt(Dx Dp))^N <= 1 (ln {log_arg:.3g})")
    return _q_time(log_arg, chaos.lambda_q, chaos.q)


def matched_position_diffusion(chaos: ChaosProfile, chi: float) -> float:
    """D_x = chi^2 lambda_q / 2.

    With M(0) = chi sigma_p(0), N = 1 and q = 1 this choice makes
    :func:`t_cg_general` coincide with :func:`t_cg_closed_form`, i.e. only
    the momentum is driven by the fluctuations.
    """
    return 0.5 * chi * chi * chaos.lambda_q


@dataclass
class TimescaleReport:
    body: str
    model: str
    t_q: float
    t_cg: float
    D: float
    chaos: ChaosProfile
    verdict: Verdict
    intermediates: dict = field(default_factory=dict)

    @property
    def t_q_years(self):
        return self.t_q / SECONDS_PER_YEAR

    @property
    def t_cg_years(self):
        return self.t_cg / SECONDS_PER_YEAR

    @property
    def safe(self):
        return self.verdict is Verdict.SAFE

    def to_dict(self):
        return {
            "body": self.body,
            "model": self.model,
            "t_Q_s": self.t_q,
            "t_CG_s": self.t_cg,
            "t_Q_yr": self.t_q_years,
            "t_CG_yr": self.t_cg_years,
            "D_erg_g_per_s": self.D,
            "chaos": asdict(self.chaos),
            "verdict": self.verdict.value,
            "intermediates": dict(self.intermediates),
        }

    def to_text(self):
        lines = [
            f"body = {self.body}",
            f"model = {self.model}",
            f"D_erg_g_per_s = {self.D:.6g}",
            f"q = {self.chaos.q:.6g}",
            f"lambda_q_per_s = {self.chaos.lambda_q:.6g}",
            f"dims = {self.chaos.dims}",
            f"M0 = {self.chaos.m0:.6g}",
            f"t_Q_s = {self.t_q:.6g}",
            f"t_Q_yr = {self.t_q_years:.6g}",
            f"t_CG_s = {self.t_cg:.6g}",
            f"t_CG_yr = {self.t_cg_years:.6g}",
        ]
        lines += [f"{key} = {value:.6g}" for key, value in self.intermediates.items()]
        if self.safe:
            lines.append("verdict = CLASSICALITY SAFE (t_CG < t_Q)")
        else:
            lines.append("verdict = CORRESPONDENCE BREAKDOWN")
        return "\n".join(lines)


def _or_nan(fn, *args):
    try:
        return fn(*args)
    except DomainError:
        return math.nan


def classicality_verdict(body: BodyProfile, model: FluctuationModel,
                         chaos: ChaosProfile | None = None, *, d_x: float | None = None,
                         diffusion: float | None = None,
                         constants: PhysicalConstants = CGS) -> TimescaleReport:
    """Compare t_CG with t_Q for one body and fluctuation model.

    ``chaos`` defaults to one-dimensional strong chaos with M(0) = chi
    sigma_p(0); ``d_x`` defaults to :func:`matched_position_diffusion`;
    ``diffusion`` overrides the model's momentum diffusion coefficient.
    """
    hbar = constants.hbar
    chaos = ChaosProfile.strong_from_body(body) if chaos is None else chaos
    D = diffusion_coefficient(model, body, constants) if diffusion is None else diffusion
    d_x = matched_position_diffusion(chaos, body.nonlinearity_scale) if d_x is None else d_x
    context = f"{body.name}/{model.kind.value}"
    try:
        t_q = t_q_general(chaos, hbar)
        t_cg = t_cg_general(chaos, d_x, D)
    except DomainError as exc:
        raise DomainError(f"{context}: {exc}") from exc

    n = chaos.dims
    inter = {
        "D_x_cm2_per_s": d_x,
        "ln_tq_argument": math.log(chaos.m0) - n * math.log(hbar),
        "ln_tcg_argument": (math.log(chaos.m0) + n * math.log(chaos.lambda_q)
                            - n * (math.log(2.0) + 0.5 * math.log(d_x * D))),
        "t_Q_zurek_s": _or_nan(t_q_zurek, body.lyapunov, body.nonlinearity_scale,
                               body.sigma_p0, hbar),
        "t_CG_closed_form_s": _or_nan(t_cg_closed_form, body.lyapunov, body.sigma_p0, D),
        "t_CG_standoff_s": _or_nan(t_cg_standoff, body.lyapunov, body.sigma_p0, D),
    }
    inter["standoff_residual"] = body.lyapunov * (inter["t_CG_closed_form_s"]
                                                  - inter["t_CG_standoff_s"])
    verdict = Verdict.SAFE if t_cg < t_q else Verdict.BREAKDOWN
    return TimescaleReport(body=body.name, model=model.kind.value, t_q=t_q, t_cg=t_cg, D=D,
                           chaos=chaos, verdict=verdict, intermediates=inter)
