"""Closed-form equilibria, Jacobians and stability of the natural and controlled systems.

Stability is decided from eigenvalues; Routh-Hurwitz coefficients of the
characteristic polynomial are computed alongside and must agree.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import ConsistencyError, PreconditionError
from .model import NO_CONTROL, ControlInputs, ModelParams, State, field_values, population_cap

__all__ = [
    "Region",
    "Label",
    "Stability",
    "PWSClass",
    "DerivedQuantities",
    "StabilityDiagnostics",
    "EquilibriumReport",
    "NGMResult",
    "derived_quantities",
    "offspring_numbers",
    "controlled_male_offspring",
    "equilibrium_E0",
    "equilibrium_E1",
    "equilibrium_E2",
    "equilibrium_E2_alternative",
    "classify_pws",
    "jacobian",
    "closed_loop_field",
    "routh_hurwitz",
    "routh_hurwitz_E1",
    "routh_hurwitz_E2",
    "stability_verdict",
    "assess",
    "ngm_builder",
    "feedback_threshold",
    "k_star",
    "equilibrium_E1P_open",
    "equilibrium_E1P_closed",
    "equilibrium_E2P_closed",
    "all_equilibria",
]

REL_EQ_TOL = 1e-9


class Region(enum.Enum):
    ABUNDANCE = "abundance"
    SCARCITY = "scarcity"


class Label(enum.Enum):
    E0 = "E0"
    E1 = "E1"
    E2 = "E2"
    E1P_OPEN = "E1P_open"
    E1P_CLOSED = "E1P_closed"
    E2P_CLOSED = "E2P_closed"


class Stability(enum.Enum):
    LAS = "LAS"
    UNSTABLE = "Unstable-saddle"
    NOT_APPLICABLE = "NotApplicable"


class PWSClass(enum.Enum):
    REGULAR = "Regular"
    VIRTUAL = "Virtual"
    ON_PLANE = "OnSwitchingPlane"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class DerivedQuantities:
    n_m: float
    n_f: float
    theta_m: float
    vartheta: float
    p_hat: float


@dataclass(frozen=True)
class StabilityDiagnostics:
    verdict: Stability
    eigenvalues: tuple
    rh_coefficients: tuple  # (a1, a2, a3) of lambda^3 + a1 lambda^2 + a2 lambda + a3
    rh_conditions: dict
    rh_stable: bool
    eig_stable: bool


@dataclass(frozen=True)
class EquilibriumReport:
    """An equilibrium of one smooth constituent field, with context.

    ``region``, ``alpha``, ``a_p`` and ``gain`` identify the field the
    point is an equilibrium of; ``gain`` is set for the closed-loop
    systems where ``a_p = gain * A``.
    """

    label: Label
    coords: State
    exists: bool
    conditions: dict
    region: Region
    alpha: float = 0.0
    a_p: float = 0.0
    gain: Optional[float] = None
    residual: float = 0.0
    pws_class: PWSClass = PWSClass.NOT_APPLICABLE
    stability: Optional[StabilityDiagnostics] = None
    notes: tuple = field(default_factory=tuple)

    def as_dict(self) -> dict:
        out = {
            "label": self.label.value,
            "exists": self.exists,
            "M": self.coords.M,
            "A": self.coords.A,
            "U": self.coords.U,
            "conditions": dict(self.conditions),
            "region": self.region.value,
            "alpha": self.alpha,
            "a_p": self.a_p,
            "gain": self.gain,
            "residual": self.residual,
            "pws_class": self.pws_class.value,
            "notes": list(self.notes),
        }
        if self.stability is not None:
            s = self.stability
            out["stability"] = s.verdict.value
            out["eigenvalues"] = [[z.real, z.imag] for z in s.eigenvalues]
            out["rh_coefficients"] = list(s.rh_coefficients)
            out["rh_conditions"] = dict(s.rh_conditions)
        else:
            out["stability"] = Stability.NOT_APPLICABLE.value
        return out


# ---------------------------------------------------------------------------
# derived quantities


def offspring_numbers(p: ModelParams) -> tuple[float, float]:
    """Basic offspring numbers ``(N_M, N_F)`` of males and females."""
    n_m = p.gamma * p.r * p.rho * p.nu / (p.mu * (p.delta + p.eta))
    n_f = (1 - p.r) * p.rho * p.nu / (p.delta * (p.delta + p.eta + p.nu))
    return n_m, n_f


def derived_quantities(p: ModelParams) -> DerivedQuantities:
    n_m, n_f = offspring_numbers(p)
    theta = (1 - p.r) * p.mu * (p.delta + p.eta) / (p.gamma * p.r * p.delta * p.nu)
    vartheta = (1 - p.r) * p.mu + p.r * p.delta
    return DerivedQuantities(n_m, n_f, theta, vartheta, population_cap(p))


def controlled_male_offspring(p: ModelParams, k: float, alpha: float) -> float:
    """Male offspring number under feedback ``a_p = k*A`` and killing rate ``alpha``."""
    return p.r * p.rho * p.gamma * p.nu / ((p.delta + p.eta) * (k * (alpha + p.mu) + p.mu))


def _rel_close(x: float, y: float, tol: float = REL_EQ_TOL) -> bool:
    return abs(x - y) <= tol * max(abs(x), abs(y))


def _residual(p, control, coords, region, gain=None) -> float:
    if gain is None:
        mode = 1 if region is Region.ABUNDANCE else 2
        f = field_values(p, control.a_p, control.alpha, *coords, mode)
    else:
        f = closed_loop_field(p, gain, control.alpha, coords, region)
    return float(max(abs(x) for x in f))


# ---------------------------------------------------------------------------
# equilibria of the natural system


def equilibrium_E0(p: ModelParams, region: Region = Region.ABUNDANCE) -> EquilibriumReport:
    """Trivial equilibrium; always exists and lies on the switching plane."""
    return EquilibriumReport(
        label=Label.E0,
        coords=State(0.0, 0.0, 0.0),
        exists=True,
        conditions={},
        region=region,
        pws_class=PWSClass.ON_PLANE,
    )


def equilibrium_E1(p: ModelParams) -> EquilibriumReport:
    """Positive equilibrium of the male-abundance field; exists iff N_F > 1."""
    d = derived_quantities(p)
    exists = d.n_f > 1.0
    if d.n_f > 0 and d.n_f >= 1.0:
        total = math.log(d.n_f) / p.sigma
    else:
        total = 0.0
    s = p.delta + p.eta + p.nu
    coords = State(
        p.r * p.delta / d.vartheta * total,
        (1 - p.r) * p.mu / d.vartheta * (p.delta + p.eta) / s * total,
        (1 - p.r) * p.mu / d.vartheta * p.nu / s * total,
    )
    return EquilibriumReport(
        label=Label.E1,
        coords=coords,
        exists=exists,
        conditions={"N_F > 1": exists},
        region=Region.ABUNDANCE,
        residual=_residual(p, NO_CONTROL, coords, Region.ABUNDANCE),
        pws_class=classify_pws(p)["E1"],
    )


def _e2_primary(p: ModelParams, d: DerivedQuantities) -> State:
    total = math.log(d.n_m) / p.sigma
    gn = p.gamma * p.nu
    den = gn * d.theta_m + p.eta + p.delta
    return State(
        (p.delta + p.eta) / den * total,
        gn * (d.theta_m - 1) / den * total,
        gn / den * total,
    )


def equilibrium_E2_alternative(p: ModelParams) -> State:
    """E2* via the standardized-mortality form; independent of theta_M."""
    d = derived_quantities(p)
    total = math.log(d.n_m) / p.sigma
    return State(
        p.r * p.delta / d.vartheta * total,
        p.mu / d.vartheta * p.delta / p.rho * ((1 - p.r) * p.rho / p.delta - d.n_m) * total,
        p.mu / d.vartheta * p.delta / p.rho * d.n_m * total,
    )


def equilibrium_E2(p: ModelParams) -> EquilibriumReport:
    """Positive equilibrium of the male-scarcity field; exists iff N_M > 1 and theta_M > 1.

    Both closed forms are evaluated and must agree to 1e-12 relative.
    """
    d = derived_quantities(p)
    cond = {"N_M > 1": d.n_m > 1.0, "theta_M > 1 ((1-r)rho/delta > N_M)": d.theta_m > 1.0}
    exists = all(cond.values())
    if d.n_m >= 1.0:
        coords = _e2_primary(p, d)
        alt = equilibrium_E2_alternative(p)
        scale = max(max(abs(x) for x in coords), 1e-300)
        gap = max(abs(x - y) for x, y in zip(coords, alt))
        if gap > 1e-12 * scale and scale > 1e-300:
            raise ConsistencyError(f"closed forms of E2* disagree: {coords} vs {alt}")
    else:
        coords = State(0.0, 0.0, 0.0)
    return EquilibriumReport(
        label=Label.E2,
        coords=coords,
        exists=exists,
        conditions=cond,
        region=Region.SCARCITY,
        residual=_residual(p, NO_CONTROL, coords, Region.SCARCITY),
        pws_class=classify_pws(p)["E2"],
    )


def classify_pws(p: ModelParams) -> dict:
    """Regular/virtual position of E1* and E2* relative to the switching plane."""
    n_m, n_f = offspring_numbers(p)
    e1 = e2 = PWSClass.NOT_APPLICABLE
    if _rel_close(n_m, n_f) and n_f > 1.0:
        return {"E1": PWSClass.ON_PLANE, "E2": PWSClass.ON_PLANE}
    if n_f > 1.0:
        e1 = PWSClass.REGULAR if n_m > n_f else PWSClass.VIRTUAL
    if n_m > 1.0:
        e2 = PWSClass.REGULAR if n_f > n_m else PWSClass.VIRTUAL
    return {"E1": e1, "E2": e2}


# ---------------------------------------------------------------------------
# Jacobians and stability


def closed_loop_field(p: ModelParams, k: float, alpha: float, state: Sequence[float], region: Region):
    """Smooth closed-loop field with ``a_p = k*A`` substituted (valid for A > 0 and A = 0)."""
    m, a, u = state
    births = p.rho * u * math.exp(-p.sigma * (m + a + u))
    kill = alpha * k / (k + 1) * m
    if region is Region.ABUNDANCE:
        mating = p.nu * a
    else:
        mating = p.gamma * p.nu / (k + 1) * m
    return (
        p.r * births - kill - p.mu * m,
        (1 - p.r) * births - mating + p.eta * u - p.delta * a,
        mating - (p.eta + p.delta) * u,
    )


def jacobian(
    p: ModelParams,
    control: ControlInputs,
    state: Sequence[float],
    region: Region,
    gain: Optional[float] = None,
) -> np.ndarray:
    """Analytic Jacobian of the abundance or scarcity field at ``state``.

    With ``gain`` set, differentiates the closed-loop field (``a_p = gain*A``)
    and ignores ``control.a_p``.
    """
    m, a, u = (float(x) for x in state)
    e = math.exp(-p.sigma * (m + a + u))
    b = p.rho * e  # d(births)/dU without the -sigma*U part
    bs = p.rho * p.sigma * u * e  # -d(births)/dM = -d(births)/dA
    r = p.r
    alpha = control.alpha
    J = np.empty((3, 3))

    # male row
    J[0, 0] = -r * bs - p.mu
    J[0, 1] = -r * bs
    J[0, 2] = r * (b - bs)
    # female rows: births part
    J[1, 0] = -(1 - r) * bs
    J[1, 1] = -(1 - r) * bs - p.delta
    J[1, 2] = (1 - r) * (b - bs) + p.eta
    J[2, :] = 0.0
    J[2, 2] = -(p.eta + p.delta)

    if gain is not None:
        k = gain
        J[0, 0] -= alpha * k / (k + 1)
        if region is Region.ABUNDANCE:
            mat = (0.0, p.nu, 0.0)
        else:
            mat = (p.gamma * p.nu / (k + 1), 0.0, 0.0)
    else:
        ap = control.a_p
        if ap > 0.0:
            s = ap + a
            J[0, 0] -= alpha * ap / s
            J[0, 1] += alpha * ap * m / (s * s)
        if region is Region.ABUNDANCE:
            mat = (0.0, p.nu, 0.0)
        else:
            s = ap + a
            if s > 0.0:
                gn = p.gamma * p.nu
                # d/d(M, A) of gamma*nu*M*A/(ap+A)
                mat = (gn * a / s, gn * m * ap / (s * s), 0.0)
            else:
                mat = (p.gamma * p.nu, 0.0, 0.0)
    for j in range(3):
        J[1, j] -= mat[j]
        J[2, j] += mat[j]
    return J


def routh_hurwitz(J: np.ndarray) -> tuple[tuple, dict]:
    """Coefficients of ``det(lambda I - J)`` and the three Routh-Hurwitz conditions."""
    a1 = -float(np.trace(J))
    a2 = float(
        J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        + J[0, 0] * J[2, 2] - J[0, 2] * J[2, 0]
        + J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1]
    )
    a3 = -float(np.linalg.det(J))
    cond = {"a1 > 0": a1, "a3 > 0": a3, "a1*a2 - a3 > 0": a1 * a2 - a3}
    return (a1, a2, a3), cond


def routh_hurwitz_E1(p: ModelParams) -> tuple[float, float, float]:
    """Closed-form (a1, a2, a3) at E1* from the hand-derived characteristic polynomial."""
    d = derived_quantities(p)
    u1 = equilibrium_E1(p).coords.U
    q = p.rho / d.n_f * p.sigma * u1
    s = p.nu + p.eta + p.delta
    a1 = p.mu + p.nu + p.eta + 2 * p.delta + q
    a2 = p.mu * (p.nu + p.delta) + p.mu * (p.eta + p.delta) + (d.vartheta + s) * q
    a3 = d.vartheta * s * q
    return a1, a2, a3


def routh_hurwitz_E2(p: ModelParams) -> tuple[float, float, float]:
    """Closed-form (b1, b2, b3) at E2*."""
    d = derived_quantities(p)
    m2 = equilibrium_E2(p).coords.M
    q = p.mu * p.sigma * m2
    b1 = p.mu + p.eta + 2 * p.delta + q / p.r
    b2 = p.delta * (p.mu + p.eta + p.delta) + (p.eta + p.delta + d.vartheta) / p.r * q
    b3 = (p.eta + p.delta) * d.vartheta / p.r * q
    return b1, b2, b3


def _diagnose(J: np.ndarray, tol: float = 1e-9) -> StabilityDiagnostics:
    eig = np.linalg.eigvals(J)
    coeffs, cond = routh_hurwitz(J)
    max_re = float(np.max(eig.real))
    eig_stable = max_re < 0.0
    rh_stable = all(v > 0.0 for v in cond.values())
    if eig_stable != rh_stable:
        a1, a2, a3 = coeffs
        scale = max(1.0, float(np.max(np.abs(J))))
        near = (
            abs(max_re) <= tol * scale
            or abs(a3) <= tol * scale**3
            or abs(a1 * a2 - a3) <= tol * scale**3
        )
        if not near:
            raise ConsistencyError(
                f"Routh-Hurwitz ({cond}) and eigenvalue ({eig}) stability verdicts disagree"
            )
    verdict = Stability.LAS if eig_stable else Stability.UNSTABLE
    return StabilityDiagnostics(
        verdict=verdict,
        eigenvalues=tuple(complex(z) for z in eig),
        rh_coefficients=coeffs,
        rh_conditions={k: v > 0.0 for k, v in cond.items()},
        rh_stable=rh_stable,
        eig_stable=eig_stable,
    )


def stability_verdict(p: ModelParams, report: EquilibriumReport) -> StabilityDiagnostics:
    """Local stability of ``report`` within its own smooth field."""
    if not report.exists:
        raise PreconditionError(f"{report.label.value} does not exist for these parameters")
    control = ControlInputs(report.a_p, report.alpha)
    J = jacobian(p, control, report.coords, report.region, gain=report.gain)
    return _diagnose(J)


def assess(p: ModelParams, report: EquilibriumReport) -> EquilibriumReport:
    """Return ``report`` with its stability filled in (if it exists)."""
    if not report.exists:
        return report
    return replace(report, stability=stability_verdict(p, report))


# ---------------------------------------------------------------------------
# next-generation matrices and feedback threshold


@dataclass(frozen=True)
class NGMResult:
    F: np.ndarray
    V1: np.ndarray
    V2: np.ndarray
    K1: np.ndarray
    K2: np.ndarray
    rho1: float
    rho2: float


def ngm_builder(p: ModelParams, k: float, alpha: float) -> NGMResult:
    """Next-generation matrices of the closed-loop abundance/scarcity systems at E0.

    Spectral radii are computed numerically and checked against N_F and
    the controlled male offspring number.
    """
    if k < 0 or not 0 <= alpha <= 1:
        raise PreconditionError(f"need k >= 0 and alpha in [0, 1], got k={k}, alpha={alpha}")
    r, rho = p.r, p.rho
    F = np.array([[0.0, 0.0, r * rho], [0.0, 0.0, (1 - r) * rho], [0.0, 0.0, 0.0]])
    mk = alpha * k / (k + 1) + p.mu
    gk = p.gamma * p.nu / (k + 1)
    V1 = np.array([[mk, 0.0, 0.0], [0.0, p.nu + p.delta, -p.eta], [0.0, -p.nu, p.eta + p.delta]])
    V2 = np.array([[mk, 0.0, 0.0], [gk, p.delta, -p.eta], [-gk, 0.0, p.eta + p.delta]])
    try:
        K1 = F @ np.linalg.inv(V1)
        K2 = F @ np.linalg.inv(V2)
    except np.linalg.LinAlgError as exc:
        raise ConsistencyError("singular transition matrix V") from exc
    rho1 = float(np.max(np.abs(np.linalg.eigvals(K1))))
    rho2 = float(np.max(np.abs(np.linalg.eigvals(K2))))
    n_f = offspring_numbers(p)[1]
    n_m_k = controlled_male_offspring(p, k, alpha)
    if not _rel_close(rho1, n_f, 1e-12) or not _rel_close(rho2, n_m_k, 1e-12):
        raise ConsistencyError(
            f"spectral radii ({rho1}, {rho2}) differ from closed forms ({n_f}, {n_m_k})"
        )
    return NGMResult(F, V1, V2, K1, K2, rho1, rho2)


def feedback_threshold(n_m: float, mu: float, alpha: float) -> float:
    """Gain ``mu*(N_M - 1)/(alpha + mu)`` above which feedback eliminates; 0 if N_M <= 1."""
    if n_m <= 1.0:
        return 0.0
    return mu * (n_m - 1.0) / (alpha + mu)


def k_star(p: ModelParams, alpha: float) -> float:
    if not 0 <= alpha <= 1:
        raise PreconditionError(f"alpha must lie in [0, 1], got {alpha}")
    return feedback_threshold(offspring_numbers(p)[0], p.mu, alpha)


# ---------------------------------------------------------------------------
# controlled equilibria


def equilibrium_E1P_open(p: ModelParams, alpha: float, a_p: float) -> EquilibriumReport:
    """Positive equilibrium of the open-loop male-abundance system.

    ``A`` solves ``qa*A^2 + qb*A + qc = 0`` with ``qc < 0``; the unique
    positive root is taken in cancellation-free form.
    """
    control = ControlInputs(a_p, alpha)
    d = derived_quantities(p)
    exists = d.n_f > 1.0
    notes = ()
    if not exists:
        return EquilibriumReport(
            Label.E1P_OPEN, State(0.0, 0.0, 0.0), False, {"N_F > 1": False},
            Region.ABUNDANCE, alpha=alpha, a_p=a_p,
        )
    total = math.log(d.n_f) / p.sigma
    c1 = (p.delta + p.nu + p.eta) / (p.delta + p.eta)
    qa = c1 * d.vartheta / (1 - p.r)
    qb = (d.vartheta / (1 - p.r) + alpha) * c1 * a_p - p.mu * total
    qc = -(p.mu + alpha) * a_p * total
    disc = qb * qb - 4 * qa * qc
    sq = math.sqrt(disc)
    if qb <= 0:
        a = (-qb + sq) / (2 * qa)
    else:
        a = (2 * qc) / (-qb - sq)
    other = qc / (qa * a) if a > 0 else float("nan")
    u = p.nu / (p.delta + p.eta) * a
    kill = alpha * a_p / (a + a_p) if a_p > 0 else 0.0
    m = p.r * p.rho / (p.mu + kill) / d.n_f * u
    coords = State(m, a, u)
    if not _rel_close(coords.total, total, 1e-10):
        raise ConsistencyError(f"E1P_open total {coords.total} differs from ln(N_F)/sigma={total}")
    notes = (f"discriminant={disc!r}", f"other_root={other!r}")
    return EquilibriumReport(
        Label.E1P_OPEN, coords, True, {"N_F > 1": True}, Region.ABUNDANCE,
        alpha=alpha, a_p=a_p,
        residual=_residual(p, control, coords, Region.ABUNDANCE),
        pws_class=_pws_position(p.gamma * m - (a + a_p), Region.ABUNDANCE, coords),
        notes=notes,
    )


def _pws_position(s: float, region: Region, coords: State) -> PWSClass:
    scale = max(coords.total, 1e-300)
    if abs(s) <= REL_EQ_TOL * scale:
        return PWSClass.ON_PLANE
    inside = s > 0 if region is Region.ABUNDANCE else s < 0
    return PWSClass.REGULAR if inside else PWSClass.VIRTUAL


def equilibrium_E1P_closed(p: ModelParams, alpha: float, k: float) -> EquilibriumReport:
    """Positive equilibrium of the closed-loop male-abundance system (``a_p = k*A``)."""
    if k < 0:
        raise PreconditionError(f"gain must be >= 0, got {k}")
    n_f = offspring_numbers(p)[1]
    exists = n_f > 1.0
    total = math.log(n_f) / p.sigma if n_f >= 1.0 else 0.0
    male_loss = alpha * k + (k + 1) * p.mu
    den = (k + 1) * p.r * p.delta + male_loss * (1 - p.r)
    s = p.nu + p.eta + p.delta
    coords = State(
        (k + 1) * p.r * p.delta / den * total,
        (p.eta + p.delta) * (1 - p.r) / s * male_loss / den * total,
        p.nu * (1 - p.r) / s * male_loss / den * total,
    )
    control = ControlInputs(0.0, alpha)
    sv = p.gamma * coords.M - (k + 1) * coords.A
    return EquilibriumReport(
        Label.E1P_CLOSED, coords, exists, {"N_F > 1": exists}, Region.ABUNDANCE,
        alpha=alpha, gain=k,
        residual=_residual(p, control, coords, Region.ABUNDANCE, gain=k),
        pws_class=_pws_position(sv, Region.ABUNDANCE, coords) if exists else PWSClass.NOT_APPLICABLE,
    )


def equilibrium_E2P_closed(p: ModelParams, alpha: float, k: float) -> EquilibriumReport:
    """Positive equilibrium of the closed-loop male-scarcity system.

    Feedback rescales the mating rate to ``gamma*nu/(k+1)``, so the
    coordinates follow the natural E2* form with that rate, the controlled
    offspring number and the controlled theta.
    """
    if k < 0:
        raise PreconditionError(f"gain must be >= 0, got {k}")
    n_mk = controlled_male_offspring(p, k, alpha)
    theta_k = (1 - p.r) * p.rho / p.delta / n_mk
    cond = {"N_M(k, alpha) > 1 (k < k*)": n_mk > 1.0, "theta_M(k, alpha) > 1": theta_k > 1.0}
    exists = all(cond.values())
    if n_mk >= 1.0:
        total = math.log(n_mk) / p.sigma
        gn = p.gamma * p.nu / (k + 1)
        den = gn * theta_k + p.eta + p.delta
        coords = State(
            (p.delta + p.eta) / den * total,
            gn * (theta_k - 1) / den * total,
            gn / den * total,
        )
    else:
        coords = State(0.0, 0.0, 0.0)
    sv = p.gamma * coords.M - (k + 1) * coords.A
    return EquilibriumReport(
        Label.E2P_CLOSED, coords, exists, cond, Region.SCARCITY,
        alpha=alpha, gain=k,
        residual=_residual(p, ControlInputs(0.0, alpha), coords, Region.SCARCITY, gain=k),
        pws_class=_pws_position(sv, Region.SCARCITY, coords) if exists else PWSClass.NOT_APPLICABLE,
    )


def all_equilibria(p: ModelParams, alpha: float = 0.0, a_p: float = 0.0, k: float = 0.0) -> list:
    """The six equilibrium reports with stability, in a fixed order."""
    reports = [
        equilibrium_E0(p, Region.ABUNDANCE),
        equilibrium_E1(p),
        equilibrium_E2(p),
        equilibrium_E1P_open(p, alpha, a_p),
        equilibrium_E1P_closed(p, alpha, k),
        equilibrium_E2P_closed(p, alpha, k),
    ]
    return [assess(p, rep) for rep in reports]
