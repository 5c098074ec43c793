"""Switched population model of the Asian citrus psyllid under pheromone-trap control.

Submodules
----------
model        parameters, state and the switched vector field
analysis     equilibria, Jacobians, Routh-Hurwitz and next-generation matrices
thresholds   critical lure strengths for open-loop control
simulator    Dormand-Prince integration with switching and sampling events
experiments  parameter sweeps producing CSV tables
cli          ``psyllid`` command-line front end
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AssumptionWarning,
    BracketError,
    ConfigError,
    ConsistencyError,
    DegenerateParametersWarning,
    NumericalError,
    PreconditionError,
    PsyllidError,
)
from .model import TABLE1, ControlInputs, ModelParams, State, preset  # noqa: E402

__all__ = [
    "__version__",
    "ModelParams",
    "State",
    "ControlInputs",
    "TABLE1",
    "preset",
    "PsyllidError",
    "ConfigError",
    "PreconditionError",
    "NumericalError",
    "BracketError",
    "ConsistencyError",
    "AssumptionWarning",
    "DegenerateParametersWarning",
]
