"""Time integration of the controlled switched system.

The integrator is an embedded Dormand-Prince 5(4) pair with a
proportional-integral step controller and the usual quartic dense output.
It always integrates the continuous min-form field; switching-plane
crossings are still located (bisection on the dense output) and each step
is cut at the crossing so no step straddles the derivative jump.

Sampled and mixed policies stop exactly at the sampling instants, update
the lure strength from the current ``A`` and resume.  A fourth state
component accumulates ``integral of a_p dt``; it is integrated with the
rest but excluded from the error norm.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Union

import numpy as np

from ._io import csv_text, json_text
from .errors import ConfigError, NumericalError
from .model import ModelParams, State, field_values

__all__ = [
    "OpenLoop",
    "ClosedLoopContinuous",
    "ClosedLoopSampled",
    "Mixed",
    "ControlStrategy",
    "SimulationConfig",
    "DenseOutput",
    "Trajectory",
    "integrate",
    "active_ap",
    "time_to_elimination",
    "pheromone_accounting",
    "no_control",
]


# ---------------------------------------------------------------------------
# strategies


def _check_nonneg(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
        raise ConfigError(f"{name} must be a finite number >= 0, got {value!r}")


def _check_period(value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ConfigError(f"period must be > 0, got {value!r}")


@dataclass(frozen=True)
class OpenLoop:
    """Constant lure strength."""

    a_p: float

    def __post_init__(self):
        _check_nonneg("a_p", self.a_p)


@dataclass(frozen=True)
class ClosedLoopContinuous:
    """Lure strength ``k * A(t)`` tracking the current female count."""

    k: float

    def __post_init__(self):
        _check_nonneg("k", self.k)


@dataclass(frozen=True)
class ClosedLoopSampled:
    """Lure strength ``k * A(t_j)`` held over ``[t_j, t_j + period)``."""

    k: float
    period: float

    def __post_init__(self):
        _check_nonneg("k", self.k)
        _check_period(self.period)


@dataclass(frozen=True)
class Mixed:
    """Lure strength ``min(a_p_cap, (k+1) * A(t_j))`` held over each period."""

    a_p_cap: float
    k: float
    period: float

    def __post_init__(self):
        _check_nonneg("a_p_cap", self.a_p_cap)
        _check_nonneg("k", self.k)
        _check_period(self.period)


Policy = Union[OpenLoop, ClosedLoopContinuous, ClosedLoopSampled, Mixed]
_POLICY_NAMES = {
    OpenLoop: "open_loop",
    ClosedLoopContinuous: "closed_loop_continuous",
    ClosedLoopSampled: "closed_loop_sampled",
    Mixed: "mixed",
}


@dataclass(frozen=True)
class ControlStrategy:
    alpha: float
    policy: Policy

    def __post_init__(self):
        if not (isinstance(self.alpha, (int, float)) and 0.0 <= self.alpha <= 1.0):
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if type(self.policy) not in _POLICY_NAMES:
            raise ConfigError(f"unknown policy {self.policy!r}")

    @property
    def sampled(self) -> bool:
        return isinstance(self.policy, (ClosedLoopSampled, Mixed))

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "policy": _POLICY_NAMES[type(self.policy)], **asdict(self.policy)}


def no_control() -> ControlStrategy:
    return ControlStrategy(0.0, OpenLoop(0.0))


def active_ap(strategy: ControlStrategy, t: float, a_sample: float) -> float:
    """Lure strength in force at time ``t``.

    ``a_sample`` is ``A`` at the latest sampling instant for sampled
    policies and the current ``A`` for the continuous one.
    """
    pol = strategy.policy
    if isinstance(pol, OpenLoop):
        return pol.a_p
    a = max(a_sample, 0.0)
    if isinstance(pol, (ClosedLoopContinuous, ClosedLoopSampled)):
        return pol.k * a
    return min(pol.a_p_cap, (pol.k + 1.0) * a)


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class SimulationConfig:
    """Integration settings.

    ``record_dt`` sets the output cadence (``None`` records every accepted
    step).  ``fixed_step`` disables error control and takes steps of that
    size; it exists for convergence-order checks.
    """

    initial: State
    t_max: float = 5000.0
    rtol: float = 1e-8
    atol: float = 1e-10
    elimination_eps: float = 0.1
    record_dt: Optional[float] = 1.0
    switch_tol: float = 1e-9
    h0: Optional[float] = None
    fixed_step: Optional[float] = None
    max_steps: int = 10_000_000

    def __post_init__(self):
        init = tuple(self.initial)
        if len(init) != 3 or not all(isinstance(x, (int, float)) and math.isfinite(x) for x in init):
            raise ConfigError(f"initial state must be three finite numbers, got {self.initial!r}")
        if min(init) < 0:
            raise ConfigError(f"initial state must be nonnegative, got {self.initial!r}")
        object.__setattr__(self, "initial", State(*(float(x) for x in init)))
        for name in ("t_max", "rtol", "atol", "elimination_eps", "switch_tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be > 0, got {v!r}")
        for name in ("record_dt", "h0", "fixed_step"):
            v = getattr(self, name)
            if v is not None and not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be > 0 when given, got {v!r}")

    def replace(self, **changes) -> "SimulationConfig":
        values = {f: getattr(self, f) for f in self.__dataclass_fields__}
        values.update(changes)
        return SimulationConfig(**values)

    def as_dict(self) -> dict:
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d["initial"] = list(self.initial)
        return d


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) tableau

_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40

# dense output: y(t + s h) = y + h * sum_j K_j * (P_j . [s, s^2, s^3, s^4])
_P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)

_N = 4  # M, A, U, cost


def _dense_coeffs(K):
    """Per-component quartic coefficients Q[i] = (q1, q2, q3, q4)."""
    Q = []
    for i in range(_N):
        row = []
        for col in range(4):
            s = 0.0
            for j in range(7):
                pj = _P[j][col]
                if pj != 0.0:
                    s += K[j][i] * pj
            row.append(s)
        Q.append(tuple(row))
    return tuple(Q)


def _dense_eval(y0, h, Q, s):
    s2 = s * s
    return [y0[i] + h * (Q[i][0] * s + Q[i][1] * s2 + Q[i][2] * s2 * s + Q[i][3] * s2 * s2) for i in range(_N)]


class DenseOutput:
    """Piecewise-quartic continuous extension over all accepted steps."""

    def __init__(self):
        self._t0: List[float] = []
        self._h: List[float] = []
        self._y0: List[tuple] = []
        self._Q: List[tuple] = []

    def append(self, t0, h, y0, Q):
        self._t0.append(t0)
        self._h.append(h)
        self._y0.append(tuple(y0))
        self._Q.append(Q)

    @property
    def t_min(self):
        return self._t0[0] if self._t0 else 0.0

    @property
    def t_max(self):
        return self._t0[-1] + self._h[-1] if self._t0 else 0.0

    def __len__(self):
        return len(self._t0)

    def __call__(self, t: float) -> np.ndarray:
        """State ``(M, A, U, cost)`` at time ``t`` inside the integrated span."""
        if not self._t0 or t < self.t_min or t > self.t_max:
            raise ValueError(f"t={t} outside dense output span [{self.t_min}, {self.t_max}]")
        i = max(bisect.bisect_right(self._t0, t) - 1, 0)
        h = self._h[i]
        s = (t - self._t0[i]) / h
        return np.array(_dense_eval(self._y0[i], h, self._Q[i], s))

    def segments(self):
        return zip(self._t0, self._h, self._y0, self._Q)


# ---------------------------------------------------------------------------
# trajectory


@dataclass
class Trajectory:
    t: np.ndarray
    states: np.ndarray  # (n, 3): M, A, U
    a_p: np.ndarray
    region_sign: np.ndarray
    switch_events: list
    elimination_time: Optional[float]
    pheromone_cost_integral: float
    pheromone_release_total: float
    step_stats: dict
    final_time: float
    final_state: State
    strategy: ControlStrategy
    config: SimulationConfig
    dense: DenseOutput = field(repr=False, default_factory=DenseOutput)
    releases: list = field(default_factory=list)

    @property
    def samples(self):
        return [(float(t), State(*map(float, s)), float(a)) for t, s, a in zip(self.t, self.states, self.a_p)]

    @property
    def eliminated(self) -> bool:
        return self.elimination_time is not None

    def summary(self) -> dict:
        return {
            "elimination_time": self.elimination_time,
            "pheromone_cost_integral": self.pheromone_cost_integral,
            "pheromone_release_total": self.pheromone_release_total,
            "final_time": self.final_time,
            "final_state": {"M": self.final_state.M, "A": self.final_state.A, "U": self.final_state.U},
            "switch_events": [{"t": t, "direction": d} for t, d in self.switch_events],
            "step_stats": dict(self.step_stats),
            "strategy": self.strategy.as_dict(),
            "config": self.config.as_dict(),
        }

    def to_csv(self, fh=None) -> str:
        """Write ``t, M, A, U, F, a_p, region_sign`` rows (12 significant digits)."""
        rows = (
            (float(t), float(m), float(a), float(u), float(a + u), float(ap), int(sgn))
            for t, (m, a, u), ap, sgn in zip(self.t, self.states, self.a_p, self.region_sign)
        )
        text = csv_text(("t", "M", "A", "U", "F", "a_p", "region_sign"), rows)
        if fh is not None:
            fh.write(text)
        return text

    def summary_json(self) -> str:
        return json_text(self.summary())


# ---------------------------------------------------------------------------
# integration


class _Controller:
    """Lure strength in force, sampling instants and release bookkeeping."""

    def __init__(self, strategy: ControlStrategy, a0: float):
        self.strategy = strategy
        pol = strategy.policy
        self.continuous = isinstance(pol, ClosedLoopContinuous)
        self.k = getattr(pol, "k", 0.0)
        self.period = getattr(pol, "period", None)
        self.releases = []
        self.j = 0
        self.ap = 0.0
        if strategy.sampled:
            self.sample(0.0, a0)
        elif isinstance(pol, OpenLoop):
            self.ap = pol.a_p

    def next_instant(self) -> float:
        if self.period is None:
            return math.inf
        return (self.j + 1) * self.period

    def sample(self, t: float, a: float):
        self.ap = active_ap(self.strategy, t, a)
        self.releases.append((t, self.ap))

    def advance(self, a: float):
        self.j += 1
        self.sample(self.j * self.period, a)

    def ap_at(self, a: float) -> float:
        if self.continuous:
            return self.k * (a if a > 0.0 else 0.0)
        return self.ap


def _initial_step(f, y0, f0, rtol, atol, t_span):
    sc = [atol + rtol * abs(v) for v in y0[:3]]
    d0 = math.sqrt(sum((y0[i] / sc[i]) ** 2 for i in range(3)) / 3)
    d1 = math.sqrt(sum((f0[i] / sc[i]) ** 2 for i in range(3)) / 3)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, t_span)
    y1 = [y0[i] + h0 * f0[i] for i in range(_N)]
    f1 = f(y1)
    d2 = math.sqrt(sum(((f1[i] - f0[i]) / sc[i]) ** 2 for i in range(3)) / 3) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, t_span)


def integrate(params: ModelParams, strategy: ControlStrategy, config: SimulationConfig) -> Trajectory:
    """Integrate the controlled system from ``config.initial``.

    Stops at ``t_max`` or as soon as ``max(M, A, U) < elimination_eps``
    (the crossing time is refined on the dense output).  Floating-point
    overflow or division failures surface as :class:`NumericalError`.
    """
    try:
        return _integrate(params, strategy, config)
    except (OverflowError, ZeroDivisionError, FloatingPointError) as exc:
        raise NumericalError(f"arithmetic failure during integration ({exc}); config={config.as_dict()}") from exc


def _integrate(params: ModelParams, strategy: ControlStrategy, config: SimulationConfig) -> Trajectory:
    p = params
    alpha = strategy.alpha
    gamma = p.gamma
    rtol, atol, eps = config.rtol, config.atol, config.elimination_eps
    t_max = config.t_max
    fixed = config.fixed_step
    y = [config.initial.M, config.initial.A, config.initial.U, 0.0]
    ctl = _Controller(strategy, y[1])

    def f(yv):
        a = yv[1]
        ap = ctl.ap_at(a)
        dm, da, du = field_values(p, ap, alpha, yv[0], a, yv[2], 0)
        return (dm, da, du, ap)

    def sw(yv):
        return gamma * yv[0] - yv[1] - ctl.ap_at(yv[1])

    rec_t, rec_y, rec_ap = [], [], []
    events = []
    dense = DenseOutput()
    stats = {"accepted": 0, "rejected": 0, "clamped": 0, "switch_events": 0}
    rec_dt = config.record_dt
    next_rec = [0.0]

    def record(t, yv):
        if rec_t and t <= rec_t[-1]:
            return
        rec_t.append(t)
        # interpolated samples can undershoot zero by far less than atol
        rec_y.append((max(yv[0], 0.0), max(yv[1], 0.0), max(yv[2], 0.0)))
        rec_ap.append(ctl.ap_at(yv[1]))

    t = 0.0
    elim = None
    record(t, y)
    if rec_dt is not None:
        next_rec[0] = rec_dt
    if max(y[:3]) < eps:
        elim = 0.0
    f0 = f(y)
    if fixed is not None:
        h_want = fixed
    elif config.h0 is not None:
        h_want = config.h0
    else:
        h_want = _initial_step(f, y, f0, rtol, atol, t_max)
    err_old = 1e-4
    rejected_last = False
    n_steps = 0
    neg_retries = 0

    def rk_step(y, f0, h):
        k1 = f0
        y2 = [y[i] + h * _A21 * k1[i] for i in range(_N)]
        k2 = f(y2)
        y3 = [y[i] + h * (_A31 * k1[i] + _A32 * k2[i]) for i in range(_N)]
        k3 = f(y3)
        y4 = [y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i]) for i in range(_N)]
        k4 = f(y4)
        y5 = [y[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i]) for i in range(_N)]
        k5 = f(y5)
        y6 = [y[i] + h * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i] + _A65 * k5[i]) for i in range(_N)]
        k6 = f(y6)
        yn = [y[i] + h * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i] + _B5 * k5[i] + _B6 * k6[i]) for i in range(_N)]
        k7 = f(yn)
        e = [h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i]) for i in range(3)]
        acc = 0.0
        for i in range(3):
            sc = atol + rtol * max(abs(y[i]), abs(yn[i]))
            acc += (e[i] / sc) ** 2
        err = math.sqrt(acc / 3.0)
        return yn, err, (k1, k2, k3, k4, k5, k6, k7)

    while elim is None and t < t_max:
        n_steps += 1
        if n_steps > config.max_steps:
            raise NumericalError(f"step limit {config.max_steps} exceeded at t={t}, state={y[:3]}")
        t_stop = min(t_max, ctl.next_instant())
        h = min(h_want, t_stop - t)
        if t_stop - (t + h) < 1e-9 * max(1.0, t_stop):
            h = t_stop - t
        if h <= 1e-13 * max(1.0, abs(t)):
            raise NumericalError(f"step size underflow (h={h:.3g}) at t={t}, state={y[:3]}")
        y1, err, K = rk_step(y, f0, h)
        finite = all(math.isfinite(v) for v in y1) and math.isfinite(err)
        # the exact flow keeps the orthant invariant; a negative component is
        # a discretization artifact, so shorten the step (clamping tiny
        # negatives only after repeated failures)
        low = min(y1[:3]) if finite else 0.0
        neg = low < -atol or (low < 0.0 and neg_retries < 8)
        if fixed is not None:
            if not finite:
                raise NumericalError(f"non-finite state at t={t + h}, from state={y[:3]}")
            ok = True
        else:
            ok = finite and err <= 1.0 and not neg
        if not ok:
            stats["rejected"] += 1
            if not finite:
                h_want = 0.25 * h
            elif neg and err <= 1.0:
                neg_retries += 1
                h_want = 0.5 * h
            else:
                h_want = h * max(0.2, 0.9 * err ** -0.2)
            rejected_last = True
            continue
        neg_retries = 0

        # switching-plane crossing inside the step: cut the step at the crossing
        s0, s1 = sw(y), sw(y1)
        if s0 * s1 < 0.0:
            Q = _dense_coeffs(K)
            lo, hi = 0.0, 1.0
            while (hi - lo) * h > config.switch_tol:
                mid = 0.5 * (lo + hi)
                sm = sw(_dense_eval(y, h, Q, mid))
                if (sm < 0.0) == (s0 < 0.0):
                    lo = mid
                else:
                    hi = mid
                if mid == lo and mid == hi:
                    break
            t_cross = t + 0.5 * (lo + hi) * h
            events.append((t_cross, 1 if s1 > 0.0 else -1))
            stats["switch_events"] += 1
            h_c = hi * h
            if h_c < h and h_c > 10 * config.switch_tol:
                # keep the shortened step only if it lands on the far side,
                # otherwise the same crossing would be reported twice
                y_c, err_c, K_c = rk_step(y, f0, h_c)
                if all(math.isfinite(v) for v in y_c) and sw(y_c) * s0 <= 0.0 and min(y_c[:3]) >= -atol:
                    y1, K, h = y_c, K_c, h_c

        stats["accepted"] += 1
        for i in range(3):
            if y1[i] < 0.0:
                y1[i] = 0.0
                stats["clamped"] += 1
        Q = _dense_coeffs(K)
        dense.append(t, h, y, Q)
        t1 = t_stop if h == t_stop - t else t + h

        # elimination inside the step
        if max(y1[:3]) < eps:
            lo, hi = 0.0, 1.0
            while (hi - lo) * h > 1e-9:
                mid = 0.5 * (lo + hi)
                if max(_dense_eval(y, h, Q, mid)[:3]) < eps:
                    hi = mid
                else:
                    lo = mid
            elim = t + hi * h
            y_e = _dense_eval(y, h, Q, hi)
            _record_grid(record, rec_dt, next_rec, y, h, Q, t, elim)
            t, y = elim, [max(v, 0.0) for v in y_e[:3]] + [y_e[3]]
            record(t, y)
            break

        on_grid = _record_grid(record, rec_dt, next_rec, y, h, Q, t, t1)
        crossed = bool(events) and events[-1][0] > t
        t, y = t1, y1
        if t == ctl.next_instant():
            ctl.advance(y[1])
        if rec_dt is None or on_grid or crossed or t >= t_max:
            record(t, y)
        f0 = f(y)

        if fixed is not None:
            h_want = fixed
        else:
            err = max(err, 1e-10)
            fac = 0.9 * err ** -0.17 * err_old ** 0.04
            fac = min(10.0, max(0.2, fac))
            if rejected_last:
                fac = min(fac, 1.0)
            h_want = h * fac
            err_old = err
        rejected_last = False

    state = State(*y[:3])
    if not rec_t or rec_t[-1] < t:
        record(t, y)
    end = elim if elim is not None else t
    release = _release_total(ctl, strategy, dense, end)
    ta = np.array(rec_t)
    states = np.array(rec_y).reshape(-1, 3)
    aps = np.array(rec_ap)
    region = np.sign(gamma * states[:, 0] - states[:, 1] - aps).astype(int)
    return Trajectory(
        t=ta,
        states=states,
        a_p=aps,
        region_sign=region,
        switch_events=events,
        elimination_time=elim,
        pheromone_cost_integral=float(y[3]),
        pheromone_release_total=release,
        step_stats=stats,
        final_time=float(t),
        final_state=state,
        strategy=strategy,
        config=config,
        dense=dense,
        releases=[(tj, a) for tj, a in ctl.releases if tj < end],
    )


def _record_grid(record, rec_dt, next_rec, y, h, Q, t0, t1):
    """Record dense-output samples at grid times strictly inside ``(t0, t1)``.

    Returns True when ``t1`` itself is a grid time.
    """
    if rec_dt is None:
        return False
    while next_rec[0] < t1 - 1e-12 * max(1.0, t1):
        tg = next_rec[0]
        if tg > t0:
            record(tg, _dense_eval(y, h, Q, (tg - t0) / h))
        next_rec[0] += rec_dt
    if abs(next_rec[0] - t1) <= 1e-12 * max(1.0, t1):
        next_rec[0] += rec_dt
        return True
    return False


def _release_total(ctl: _Controller, strategy: ControlStrategy, dense: DenseOutput, end: float) -> float:
    """Sum of lure amounts released: per sampling instant, or once per day otherwise."""
    if end <= 0.0:
        return 0.0
    pol = strategy.policy
    if strategy.sampled:
        return float(sum(a for tj, a in ctl.releases if tj < end))
    days = math.ceil(end)
    if isinstance(pol, OpenLoop):
        return pol.a_p * days
    total = 0.0
    for d in range(days):
        a = dense(float(d))[1] if len(dense) else 0.0
        total += pol.k * max(a, 0.0)
    return total


def time_to_elimination(trajectory: Trajectory, eps: Optional[float] = None) -> Optional[float]:
    """First time ``max(M, A, U) < eps``, or ``None`` if never reached.

    Uses the integrator's own refined time when ``eps`` equals the run's
    elimination threshold; otherwise scans the dense output step by step.
    """
    cfg_eps = trajectory.config.elimination_eps
    if eps is None or eps == cfg_eps:
        return trajectory.elimination_time
    if max(trajectory.config.initial) < eps:
        return 0.0
    for t0, h, y0, Q in trajectory.dense.segments():
        y1 = _dense_eval(y0, h, Q, 1.0)
        if max(y1[:3]) < eps:
            lo, hi = 0.0, 1.0
            while (hi - lo) * h > 1e-9:
                mid = 0.5 * (lo + hi)
                if max(_dense_eval(y0, h, Q, mid)[:3]) < eps:
                    hi = mid
                else:
                    lo = mid
            return t0 + hi * h
    return None


def pheromone_accounting(trajectory: Trajectory) -> dict:
    return {
        "integral": trajectory.pheromone_cost_integral,
        "release_total": trajectory.pheromone_release_total,
    }
