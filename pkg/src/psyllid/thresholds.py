"""Critical pheromone amounts for the open-loop system.

Two thresholds are computed:

* :func:`ap_crit` -- the lure strength at which the two positive
  equilibria of the open-loop male-scarcity field merge and vanish
  (a fold of the scalar fixed-point equation ``phi(A; a_p) = A``);
* :func:`ap_crit_aux` -- the lure strength above which the scalar
  equation ``g(M) = h(M)`` of the over-approximating auxiliary system has
  no positive root.

Both are located by bisection on ``a_p`` around an inner maximization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .analysis import derived_quantities
from .errors import BracketError, ConsistencyError, PreconditionError
from .model import ControlInputs, ModelParams, State, field_values

__all__ = [
    "ThresholdResult",
    "ScarcityRoots",
    "find_root_bracketed",
    "golden_section_max",
    "maximize_scalar",
    "scarcity_fixed_point_fn",
    "scarcity_fixed_point_slope",
    "scarcity_state",
    "count_equilibria_scarcity",
    "ap_crit",
    "aux_g",
    "aux_h",
    "aux_ratio",
    "aux_root_count",
    "ap_crit_aux",
]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of a threshold search.

    ``tangency_point`` is the female count ``A`` at the fold for the
    open-loop threshold and the male count ``M`` for the auxiliary one.
    ``residuals`` holds the relative outer residual (value of the inner
    maximum divided by ``a_p_crit``) and the inner stationarity residual.
    """

    a_p_crit: float
    tangency_point: float
    residuals: tuple
    iterations: int
    bracket: tuple
    alpha: float = 0.0
    method: str = ""

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "a_p_crit": self.a_p_crit,
            "tangency_point": self.tangency_point,
            "residuals": list(self.residuals),
            "iterations": self.iterations,
            "bracket": list(self.bracket),
            "method": self.method,
        }


# ---------------------------------------------------------------------------
# scalar utilities


def find_root_bracketed(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12, max_iter: int = 400
) -> float:
    """Bisection root of ``f`` on ``[lo, hi]``.

    Stops when ``hi - lo < tol * max(1, |mid|)`` or the midpoint no longer
    moves in floating point.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if not (math.isfinite(flo) and math.isfinite(fhi)) or flo * fhi > 0.0:
        raise BracketError(f"f does not change sign on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo < tol * max(1.0, abs(mid)):
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-11):
    """Golden-section search for the maximum of a unimodal ``f`` on ``[lo, hi]``.

    Returns ``(x, f(x))``.
    """
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol * max(1.0, abs(c) + abs(d)):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    return x, f(x)


def maximize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    df: Optional[Callable[[float], float]] = None,
    grid: int = 400,
    tol: float = 1e-11,
):
    """Global maximum of ``f`` on ``[lo, hi]``.

    A coarse grid isolates the best cell; golden section narrows it and,
    when the derivative ``df`` is supplied, bisection on ``df`` polishes the
    stationary point.  Returns ``(x, f(x))``.
    """
    step = (hi - lo) / grid
    xs = [lo + i * step for i in range(grid + 1)]
    vals = [f(x) for x in xs]
    i = max(range(len(vals)), key=vals.__getitem__)
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid)]
    x, fx = golden_section_max(f, a, b, tol=1e-7)
    if df is not None:
        da, db = df(a), df(b)
        if da > 0.0 > db:
            x = find_root_bracketed(df, a, b, tol=tol)
            fx = f(x)
    if vals[i] > fx:
        return xs[i], vals[i]
    return x, fx


# ---------------------------------------------------------------------------
# open-loop male-scarcity equilibria


class _ScarcityEq:
    """Scalar reduction of the open-loop male-scarcity equilibrium equations to ``A``."""

    def __init__(self, p: ModelParams, alpha: float, a_p: float):
        d = derived_quantities(p)
        if d.theta_m <= 1.0:
            raise PreconditionError(f"theta_M = {d.theta_m:.6g} must exceed 1")
        self.p, self.alpha, self.a_p = p, alpha, a_p
        self.n_m = d.n_m
        self.theta = d.theta_m
        self.c = p.gamma * p.nu / (p.eta + p.delta)
        self.dr = p.delta * p.r
        self.d0 = (1 - p.r) * (alpha + p.mu) * a_p
        self.d1 = self.dr * self.c * (self.theta - 1.0)
        self.lure = (alpha + p.mu) / p.mu * a_p
        self.sigma = p.sigma

    def _g(self, a: float):
        den = self.d0 + self.d1 * a
        num = self.dr * self.a_p + self.dr * (self.c + 1.0) * a
        return 1.0 + num / den, den, num

    def phi(self, a: float) -> float:
        g, _, _ = self._g(a)
        return self.n_m * a * math.exp(-self.sigma * g * a) - self.lure

    def residual(self, a: float) -> float:
        return self.phi(a) - a

    def slope(self, a: float) -> float:
        """d(phi)/dA."""
        g, den, num = self._g(a)
        dg = (self.dr * (self.c + 1.0) * den - num * self.d1) / (den * den)
        return self.n_m * math.exp(-self.sigma * g * a) * (1.0 - self.sigma * a * (g + a * dg))

    def state(self, a: float) -> State:
        den = self.d0 + self.d1 * a
        m = self.dr * (a + self.a_p) * a / den
        u = self.c * self.dr * a * a / den
        return State(m, a, u)


def scarcity_fixed_point_fn(a: float, params: ModelParams, alpha: float, a_p: float) -> float:
    """``phi(A; a_p) - A``; zeros are the ``A``-coordinates of open-loop scarcity equilibria.

    The exponential factor is evaluated from its full rational exponent,
    including at ``a_p = 0``.
    """
    if a <= 0 or a_p < 0:
        raise PreconditionError(f"need a > 0 and a_p >= 0, got a={a}, a_p={a_p}")
    return _ScarcityEq(params, alpha, a_p).residual(a)


def scarcity_fixed_point_slope(a: float, params: ModelParams, alpha: float, a_p: float) -> float:
    return _ScarcityEq(params, alpha, a_p).slope(a)


def scarcity_state(a: float, params: ModelParams, alpha: float, a_p: float) -> State:
    """Full equilibrium state for a root ``A`` of :func:`scarcity_fixed_point_fn`."""
    return _ScarcityEq(params, alpha, a_p).state(a)


def _search_cap(p: ModelParams, n_m: float, factor: float) -> float:
    return factor * math.log(n_m) / p.sigma


def _inner_max(eq: _ScarcityEq, a_hi: float, tol: float = 1e-11):
    lo = a_hi * 1e-9
    return maximize_scalar(eq.residual, lo, a_hi, df=lambda a: eq.slope(a) - 1.0, tol=tol)


@dataclass(frozen=True)
class ScarcityRoots:
    count: int
    roots: tuple  # States ordered by increasing A
    residuals: tuple  # sup-norm of the scarcity field at each state
    max_value: float  # max of phi - A over the search interval
    argmax: float


def count_equilibria_scarcity(
    params: ModelParams,
    alpha: float,
    a_p: float,
    grid: int = 10_000,
    cap_factor: float = 2.0,
) -> ScarcityRoots:
    """Positive equilibria of the open-loop male-scarcity field.

    Sign changes of ``phi(A) - A`` are located on a uniform grid over
    ``(0, cap_factor * ln(N_M)/sigma]`` augmented with the location of its
    maximum (so near-tangent root pairs are not missed) and refined by
    bisection.
    """
    eq = _ScarcityEq(params, alpha, a_p)
    if eq.n_m <= 1.0:
        return ScarcityRoots(0, (), (), -math.inf, math.nan)
    hi = _search_cap(params, eq.n_m, cap_factor)
    amax, vmax = _inner_max(eq, hi)
    step = hi / grid
    nodes = sorted({i * step for i in range(1, grid + 1)} | {amax})
    vals = [eq.residual(a) for a in nodes]
    roots = []
    # phi - A -> -lure < 0 as A -> 0+, so for a_p > 0 roots come in pairs
    for i in range(len(nodes) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if v0 == 0.0:
            roots.append(nodes[i])
        elif v0 * v1 < 0.0:
            roots.append(find_root_bracketed(eq.residual, nodes[i], nodes[i + 1], tol=1e-15))
    if vals[-1] == 0.0:
        roots.append(nodes[-1])
    control = ControlInputs(a_p, alpha)
    states, res = [], []
    for a in roots:
        s = eq.state(a)
        states.append(s)
        f = field_values(params, control.a_p, control.alpha, *s, 2)
        res.append(max(abs(x) for x in f))
    return ScarcityRoots(len(states), tuple(states), tuple(res), vmax, amax)


def _bracket_upward(psi, start: float, max_value: float, label: str):
    """Find ``hi >= start`` with ``psi(hi) < 0`` by doubling."""
    hi = start
    while psi(hi) >= 0.0:
        hi *= 2.0
        if hi > max_value:
            raise BracketError(f"{label}: no sign change of the inner maximum for a_p in [0, {max_value:.6g}]")
    return hi


def ap_crit(
    params: ModelParams,
    alpha: float,
    tol: float = 1e-9,
    inner_tol: float = 1e-11,
    cap_factor: float = 2.0,
    max_ap: float = 1e12,
) -> ThresholdResult:
    """Lure strength at which the open-loop scarcity equilibria merge.

    ``psi(a_p) = max_A [phi(A; a_p) - A]`` is positive below the threshold
    (two roots) and negative above it (none).  Outer bisection on ``a_p``
    runs to relative ``tol``; the inner maximum to relative ``inner_tol``.
    """
    if not 0 <= alpha <= 1:
        raise PreconditionError(f"alpha must lie in [0, 1], got {alpha}")
    d = derived_quantities(params)
    if d.theta_m <= 1.0:
        raise PreconditionError(f"theta_M = {d.theta_m:.6g} must exceed 1")
    if d.n_m <= 1.0:
        raise PreconditionError(f"N_M = {d.n_m:.6g} must exceed 1 for scarcity equilibria to exist")
    a_hi = _search_cap(params, d.n_m, cap_factor)

    def psi(a_p: float):
        eq = _ScarcityEq(params, alpha, a_p)
        return _inner_max(eq, a_hi, inner_tol)[1]

    lo = 0.0
    hi = _bracket_upward(psi, max(d.p_hat, 1.0), max_ap, "ap_crit")
    iters = 0
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if psi(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        iters += 1
    # polish: continue until the midpoint stops moving, to shrink the residual
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo < 4e-16 * hi:
            break
        if psi(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        iters += 1
    crit = 0.5 * (lo + hi)
    eq = _ScarcityEq(params, alpha, crit)
    a_star, value = _inner_max(eq, a_hi, inner_tol)
    res = (abs(value) / crit, abs(eq.slope(a_star) - 1.0))
    return ThresholdResult(crit, a_star, res, iters, (lo, hi), alpha, "fold")


# ---------------------------------------------------------------------------
# auxiliary system


def aux_g(m: float, params: ModelParams) -> float:
    """Left side ``((1-r)rho + eta) mu N_M M (N_M - e^{sigma M})``."""
    if m < 0:
        raise PreconditionError(f"m must be >= 0, got {m}")
    p = params
    n_m = derived_quantities(p).n_m
    return ((1 - p.r) * p.rho + p.eta) * p.mu * n_m * m * (n_m - math.exp(p.sigma * m))


def aux_h(m: float, params: ModelParams, alpha: float, a_p: float) -> float:
    """Right side ``r rho delta a_p (N_M + (alpha/mu) e^{sigma M})``."""
    if m < 0:
        raise PreconditionError(f"m must be >= 0, got {m}")
    p = params
    n_m = derived_quantities(p).n_m
    return p.r * p.rho * p.delta * a_p * (n_m + alpha / p.mu * math.exp(p.sigma * m))


def aux_ratio(m: float, params: ModelParams, alpha: float) -> float:
    """``g(M) / (r rho delta (N_M + (alpha/mu) e^{sigma M}))``: the ``a_p`` making ``g = h`` at ``M``."""
    return aux_g(m, params) / aux_h(m, params, alpha, 1.0)


class _Aux:
    def __init__(self, p: ModelParams, alpha: float):
        self.n_m = derived_quantities(p).n_m
        self.kg = ((1 - p.r) * p.rho + p.eta) * p.mu * self.n_m
        self.kh = p.r * p.rho * p.delta
        self.s = p.sigma
        self.q = alpha / p.mu
        self.m_hi = math.log(self.n_m) / p.sigma

    def diff(self, m: float, a_p: float) -> float:
        e = math.exp(self.s * m)
        return self.kg * m * (self.n_m - e) - self.kh * a_p * (self.n_m + self.q * e)

    def ddiff(self, m: float, a_p: float) -> float:
        e = math.exp(self.s * m)
        return self.kg * (self.n_m - e - self.s * m * e) - self.kh * a_p * self.q * self.s * e

    def ratio(self, m: float) -> float:
        e = math.exp(self.s * m)
        return self.kg * m * (self.n_m - e) / (self.kh * (self.n_m + self.q * e))

    def ratio_slope(self, m: float) -> float:
        e = math.exp(self.s * m)
        g = self.kg * m * (self.n_m - e)
        dg = self.kg * (self.n_m - e - self.s * m * e)
        h = self.kh * (self.n_m + self.q * e)
        dh = self.kh * self.q * self.s * e
        return (dg * h - g * dh) / (h * h)

    def max_diff(self, a_p: float, tol: float):
        return maximize_scalar(
            lambda m: self.diff(m, a_p), 0.0, self.m_hi, df=lambda m: self.ddiff(m, a_p), tol=tol
        )

    def max_ratio(self, tol: float):
        return maximize_scalar(self.ratio, 0.0, self.m_hi, df=self.ratio_slope, tol=tol)


def aux_root_count(params: ModelParams, alpha: float, a_p: float, grid: int = 10_000) -> int:
    """Number of sign changes of ``g - h`` on ``(0, ln(N_M)/sigma)``."""
    aux = _Aux(params, alpha)
    if aux.n_m <= 1.0:
        return 0
    m_star, _ = aux.max_diff(a_p, 1e-11)
    step = aux.m_hi / grid
    nodes = sorted({i * step for i in range(1, grid)} | {m_star})
    vals = [aux.diff(m, a_p) for m in nodes]
    count = sum(1 for v0, v1 in zip(vals, vals[1:]) if v0 * v1 < 0.0)
    return count


def ap_crit_aux(
    params: ModelParams,
    alpha: float,
    tol: float = 1e-9,
    inner_tol: float = 1e-11,
    max_ap: float = 1e12,
) -> ThresholdResult:
    """Lure strength at which ``g`` and ``h`` become tangent.

    For ``alpha = 0``, ``h`` does not depend on ``M`` and the threshold is
    the maximum of ``g / (r rho delta N_M)``.  Otherwise the outer bisection
    on ``a_p`` tracks the sign of ``max_M (g - h)``; the result is
    cross-checked against the maximum of :func:`aux_ratio`.
    """
    if not 0 <= alpha <= 1:
        raise PreconditionError(f"alpha must lie in [0, 1], got {alpha}")
    aux = _Aux(params, alpha)
    if aux.n_m <= 1.0:
        raise PreconditionError(f"N_M = {aux.n_m:.6g} must exceed 1")
    m_ratio, r_max = aux.max_ratio(inner_tol)
    if alpha == 0.0:
        crit, m_star, iters, bracket = r_max, m_ratio, 0, (r_max, r_max)
    else:
        def psi(a_p):
            return aux.max_diff(a_p, inner_tol)[1]

        lo = 0.0
        hi = _bracket_upward(psi, max(derived_quantities(params).p_hat, 1.0), max_ap, "ap_crit_aux")
        iters = 0
        while True:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi or hi - lo < 4e-16 * hi:
                break
            if psi(mid) > 0.0:
                lo = mid
            else:
                hi = mid
            iters += 1
        crit = 0.5 * (lo + hi)
        bracket = (lo, hi)
        m_star = aux.max_diff(crit, inner_tol)[0]
        if abs(crit - r_max) > max(tol, 1e-8) * crit:
            raise ConsistencyError(
                f"auxiliary threshold by bisection ({crit!r}) and by max-ratio ({r_max!r}) disagree"
            )
    value = aux.diff(m_star, crit)
    scale = aux.kh * crit * (aux.n_m + aux.q * math.exp(aux.s * m_star))
    res = (abs(value) / scale, abs(aux.ratio_slope(m_star)) * aux.m_hi / max(crit, 1e-300))
    return ThresholdResult(crit, m_star, res, iters, bracket, alpha, "auxiliary-tangency")
