"""Adaptive-order Radau IIA stiff ODE solver with arbitrary-precision
tableau generation and a work-precision benchmark harness."""

from .benchmark import (
    SweepSpec,
    WpRecord,
    compute_reference,
    emit_csv,
    emit_plot,
    run_sweep,
)
from .exceptions import RadauError, SolverFailure
from .problems import get_problem, problem_registry
from .solver import OdeProblem, Solution, SolverOptions, StepStats, solve
from .spectral import SpectralTransform, build_transform
from .tableau import RadauTableau, build_tableau, get_tableau, stability_function

__all__ = [
    "OdeProblem",
    "RadauError",
    "RadauTableau",
    "Solution",
    "SolverFailure",
    "SolverOptions",
    "SpectralTransform",
    "StepStats",
    "SweepSpec",
    "WpRecord",
    "build_tableau",
    "build_transform",
    "compute_reference",
    "emit_csv",
    "emit_plot",
    "get_problem",
    "get_tableau",
    "problem_registry",
    "run_sweep",
    "solve",
    "stability_function",
]

__version__ = "0.1.0"
