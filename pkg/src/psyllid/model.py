"""Biological parameters, state space and the switched vector fields.

The adult psyllid population is split into males ``M``, females available
for mating ``A`` and fertilized females ``U``.  Pheromone traps act through
a lure strength ``a_p`` (expressed as a number of "false" females) and a
male-killing rate ``alpha``.  The field is continuous across the switching
plane ``gamma*M = A + a_p`` but its derivative jumps there.

All functions here are pure; the float-level :func:`field_values` is the
hot path used by the integrator.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import AssumptionWarning, ConfigError, DegenerateParametersWarning, NumericalError

__all__ = [
    "ModelParams",
    "State",
    "ControlInputs",
    "NO_CONTROL",
    "TABLE1",
    "LOW_FECUNDITY",
    "PRESETS",
    "preset",
    "mating_fraction",
    "field_values",
    "rhs",
    "rhs_natural",
    "rhs_abundance",
    "rhs_scarcity",
    "switching_value",
    "population_cap",
]


@dataclass(frozen=True)
class ModelParams:
    """The eight biological constants of the model.

    Attributes
    ----------
    r : float
        Primary sex ratio (fraction of emerging adults that are male).
    rho : float
        Eggs laid per fertilized female per day.
    sigma : float
        Density parameter of egg-to-adult survival, per individual.
    mu, delta : float
        Male and female mortality rates, per day.
    gamma : float
        Number of females a single male can fertilize.
    nu : float
        Transfer rate A -> U (mating), per day.
    eta : float
        Transfer rate U -> A (return to receptiveness), per day.
    """

    r: float
    rho: float
    sigma: float
    mu: float
    delta: float
    gamma: float
    nu: float
    eta: float

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(f"parameter {name!r} must be a finite number, got {value!r}")
            if value <= 0:
                raise ConfigError(f"parameter {name!r} must be strictly positive, got {value!r}")
        if not self.r < 1:
            raise ConfigError(f"sex ratio r must lie in (0, 1), got {self.r!r}")
        if self.gamma < 1:
            raise ConfigError(f"gamma must be >= 1, got {self.gamma!r}")
        if self.mu < self.delta:
            warnings.warn(
                f"male mortality mu={self.mu} is below female mortality delta={self.delta}; "
                "the model usually assumes mu >= delta",
                AssumptionWarning,
                stacklevel=3,
            )

    def replace(self, **changes) -> "ModelParams":
        values = asdict(self)
        unknown = set(changes) - set(values)
        if unknown:
            raise ConfigError(f"unknown parameter(s): {sorted(unknown)}")
        values.update(changes)
        return ModelParams(**values)

    def as_dict(self) -> dict:
        return asdict(self)


class State(NamedTuple):
    """Population triple (M, A, U)."""

    M: float
    A: float
    U: float

    @property
    def F(self) -> float:
        """Total female population A + U."""
        return self.A + self.U

    @property
    def total(self) -> float:
        return self.M + self.A + self.U

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


@dataclass(frozen=True)
class ControlInputs:
    """Trap control: lure strength ``a_p`` and male-killing rate ``alpha``."""

    a_p: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.a_p) and self.a_p >= 0):
            raise ConfigError(f"a_p must be finite and >= 0, got {self.a_p!r}")
        if not (0.0 <= self.alpha <= 1.0):
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha!r}")


NO_CONTROL = ControlInputs(0.0, 0.0)

_TABLE1_VALUES = dict(r=0.41, rho=6.352, sigma=0.001, mu=0.021, delta=0.023, gamma=1.2, nu=0.25, eta=1.0)

with warnings.catch_warnings():
    # the reference values have mu < delta; warn when users build such sets, not at import
    warnings.simplefilter("ignore", AssumptionWarning)
    TABLE1 = ModelParams(**_TABLE1_VALUES)
    # fecundity too low for either sex to replace itself (N_F, N_M < 1)
    LOW_FECUNDITY = TABLE1.replace(rho=0.05)

PRESETS = {"table1": TABLE1, "low_fecundity": LOW_FECUNDITY}


def preset(name: str) -> ModelParams:
    """Return a named built-in parameter set."""
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None


def mating_fraction(m: float, a: float, a_p: float, gamma: float) -> float:
    """Fraction ``min(gamma*m / (a_p + a), 1)`` of mate-seeking females that mate.

    Returns 1 when ``a_p + a == 0``; the fraction is always multiplied by
    ``A`` so the value there is immaterial.
    """
    seekers = a_p + a
    if seekers <= 0.0:
        return 1.0
    return min(gamma * m / seekers, 1.0)


# mode: 0 -> switched min-form, 1 -> abundance field, 2 -> scarcity field
def field_values(p: ModelParams, a_p: float, alpha: float, m: float, a: float, u: float, mode: int = 0):
    """Controlled field as a float triple; no validation."""
    births = p.rho * u * math.exp(-p.sigma * (m + a + u))
    if a_p > 0.0:
        kill = alpha * a_p / (a_p + a) * m
    else:
        kill = 0.0
    if mode == 1:
        frac = 1.0
    else:
        seekers = a_p + a
        if seekers > 0.0:
            frac = p.gamma * m / seekers
            if mode == 0 and frac > 1.0:
                frac = 1.0
        else:
            frac = 1.0
    mating = p.nu * frac * a
    dm = p.r * births - kill - p.mu * m
    da = (1.0 - p.r) * births - mating + p.eta * u - p.delta * a
    du = mating - p.eta * u - p.delta * u
    return dm, da, du


def _unpack(state: Sequence[float]):
    m, a, u = (float(x) for x in state)
    if not (math.isfinite(m) and math.isfinite(a) and math.isfinite(u)):
        raise NumericalError(f"corrupted state (non-finite component): {tuple(state)!r}")
    return m, a, u


def rhs(params: ModelParams, control: ControlInputs, state: Sequence[float]) -> np.ndarray:
    """Derivative of the controlled switched system at ``state``."""
    m, a, u = _unpack(state)
    return np.array(field_values(params, control.a_p, control.alpha, m, a, u, 0))


def rhs_natural(params: ModelParams, state: Sequence[float]) -> np.ndarray:
    """Derivative of the uncontrolled system (no traps)."""
    m, a, u = _unpack(state)
    births = params.rho * u * math.exp(-params.sigma * (m + a + u))
    mating = params.nu * mating_fraction(m, a, 0.0, params.gamma) * a
    return np.array([
        params.r * births - params.mu * m,
        (1.0 - params.r) * births - mating + params.eta * u - params.delta * a,
        mating - params.eta * u - params.delta * u,
    ])


def rhs_abundance(params: ModelParams, control: ControlInputs, state: Sequence[float]) -> np.ndarray:
    """Male-abundance field (every receptive female mates); valid for any state."""
    m, a, u = _unpack(state)
    return np.array(field_values(params, control.a_p, control.alpha, m, a, u, 1))


def rhs_scarcity(params: ModelParams, control: ControlInputs, state: Sequence[float]) -> np.ndarray:
    """Male-scarcity field (mating limited to ``gamma*M/(a_p+A)``); valid for any state."""
    m, a, u = _unpack(state)
    return np.array(field_values(params, control.a_p, control.alpha, m, a, u, 2))


def switching_value(state: Sequence[float], a_p: float, gamma: float) -> float:
    """Signed distance ``gamma*M - (A + a_p)``; > 0 means male abundance."""
    m, a, _ = state
    return gamma * m - (a + a_p)


def population_cap(params: ModelParams) -> float:
    """Carrying capacity ``ln(rho / min(mu, delta)) / sigma`` of the bounding Ricker equation.

    Returns 0 (with a :class:`DegenerateParametersWarning`) when
    ``rho <= min(mu, delta)``.
    """
    ratio = params.rho / min(params.mu, params.delta)
    if ratio <= 1.0:
        warnings.warn(
            f"rho={params.rho} does not exceed min(mu, delta); population cap is 0",
            DegenerateParametersWarning,
            stacklevel=2,
        )
        return 0.0
    return math.log(ratio) / params.sigma
