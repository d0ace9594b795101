"""Quantum-classical correspondence timescales and Wigner-function evolution.

Two halves share the CGS constants and error types:

* ``catalog``, ``collapse`` and ``timescales`` estimate when quantum
  corrections would become visible in the motion of macroscopic bodies and
  whether environmental or collapse-model diffusion hides them first;
* ``wigner`` integrates the one-dimensional Wigner equation with Moyal,
  friction and diffusion terms on a phase-space grid.
"""

__version__ = "0.1.0"

from .catalog import BodyProfile, ChaosProfile, get_body, load_catalog, parse_catalog
from .collapse import (CollapseModelParams, DecoherenceKernel, FluctuationModel, ModelKind,
                       Regime, diffusion_coefficient, kernel_curvature_check)
from .constants import CGS, HBAR, PhysicalConstants
from .errors import (CatalogParseError, DecoherenceLabError, DomainError, NumericalError,
                     RegimeWarning, StabilityError, ValidationError)
from .timescales import TimescaleReport, Verdict, classicality_verdict

__all__ = [
    "BodyProfile", "ChaosProfile", "get_body", "load_catalog", "parse_catalog",
    "CollapseModelParams", "DecoherenceKernel", "FluctuationModel", "ModelKind", "Regime",
    "diffusion_coefficient", "kernel_curvature_check", "CGS", "HBAR", "PhysicalConstants",
    "CatalogParseError", "DecoherenceLabError", "DomainError", "NumericalError",
    "RegimeWarning", "StabilityError", "ValidationError", "TimescaleReport", "Verdict",
    "classicality_verdict",
]
