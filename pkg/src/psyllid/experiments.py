"""Parameter sweeps behind the control-scenario figures.

Every sweep is described by a :class:`SweepSpec` (axes, templates and
metric names) and evaluated cell by cell through a registered evaluator.
Cells are independent; with ``jobs > 1`` they run in a process pool and
rows are assembled in grid order, so output is identical for any ``jobs``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Optional

import numpy as np

from . import __version__
from ._io import atomic_write_text, csv_text, json_text
from .analysis import (
    equilibrium_E1,
    equilibrium_E1P_closed,
    equilibrium_E2P_closed,
    feedback_threshold,
    k_star,
    offspring_numbers,
)
from .errors import ConfigError
from .model import ModelParams, State, TABLE1
from .simulator import (
    ClosedLoopContinuous,
    ClosedLoopSampled,
    ControlStrategy,
    Mixed,
    OpenLoop,
    SimulationConfig,
    integrate,
)
from .thresholds import ap_crit, ap_crit_aux

__all__ = [
    "SweepSpec",
    "SweepResult",
    "run_sweep",
    "default_grid",
    "fig5_open_ap_crit",
    "fig6_open_totals",
    "fig7_min_time_grid",
    "fig8_k_star_curve",
    "fig9_phase_portraits",
    "fig10_closed_initial_amount",
    "fig11_closed_sampled_totals",
    "fig12_mixed_totals",
    "SWEEPS",
    "PUBLISHED_N_M",
]

GRID_POINTS = 21
WEEKS2 = 14.0
# rounded male offspring number as published with the reference values; feeds a comparison column
PUBLISHED_N_M = 37.4256
# a run that ends below this fraction of its initial size counts as converging to the origin
E0_DECAY_FRACTION = 0.01

SIM_OUTPUTS = ("elimination_time", "cost_integral", "cost_release_total", "final_M", "final_A", "final_U")

_SIM_FIELDS = set(SimulationConfig.__dataclass_fields__)
_PARAM_FIELDS = set(ModelParams.__dataclass_fields__)
_STRATEGY_FIELDS = {"policy", "alpha", "a_p", "a_p_min", "k", "k_shift", "period", "n"}


def default_grid(lo: float, hi: float, n: int = GRID_POINTS) -> tuple:
    return tuple(float(x) for x in np.linspace(lo, hi, n))


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of a sweep.

    ``axes`` is a sequence of ``(path, values)`` where ``path`` is
    ``params.<name>``, ``strategy.<name>`` or ``config.<name>``; the grid is
    their Cartesian product with the first axis varying slowest.

    Strategy templates understand a few derived entries: ``a_p_min`` adds
    the auxiliary-system threshold to the lure (open loop) or forms the cap
    (mixed); ``k = "k_star"`` takes the feedback threshold at the cell's
    ``alpha`` plus ``k_shift``; ``n`` sets the sampling period to ``14 n``
    days.  ``config.initial = "E1"`` starts at the wild equilibrium.
    """

    name: str
    evaluator: str
    axes: tuple
    outputs: tuple
    strategy: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.evaluator not in _EVALUATORS:
            raise ConfigError(f"unknown evaluator {self.evaluator!r}")
        axes = []
        for path, values in self.axes:
            values = tuple(float(v) for v in values)
            if not values:
                raise ConfigError(f"axis {path!r} has an empty grid")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ConfigError(f"axis {path!r} must be strictly increasing")
            _check_path(path)
            axes.append((path, values))
        object.__setattr__(self, "axes", tuple(axes))
        for key in self.strategy:
            _check_path("strategy." + key)
        for key in self.config:
            _check_path("config." + key)

    @property
    def columns(self) -> tuple:
        return tuple(p.split(".", 1)[1] for p, _ in self.axes) + tuple(self.outputs)

    def cells(self):
        values = [v for _, v in self.axes]
        for combo in itertools.product(*values):
            yield dict(zip((p for p, _ in self.axes), combo))

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "evaluator": self.evaluator,
            "axes": [[p, list(v)] for p, v in self.axes],
            "outputs": list(self.outputs),
            "strategy": dict(self.strategy),
            "config": dict(self.config),
        }


def _check_path(path: str):
    head, _, leaf = path.partition(".")
    allowed = {"params": _PARAM_FIELDS, "strategy": _STRATEGY_FIELDS, "config": _SIM_FIELDS}.get(head)
    if allowed is None or leaf not in allowed:
        raise ConfigError(f"parameter path {path!r} does not resolve")


@dataclass
class SweepResult:
    spec: SweepSpec
    params: ModelParams
    rows: list
    preset: Optional[str] = None
    extras: dict = field(default_factory=dict)

    @property
    def columns(self) -> tuple:
        return self.spec.columns

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]

    def spec_hash(self) -> str:
        blob = json.dumps({"spec": self.spec.as_dict(), "params": self.params.as_dict()}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def meta(self) -> dict:
        return {
            "name": self.spec.name,
            "spec": self.spec.as_dict(),
            "preset": self.preset,
            "params": self.params.as_dict(),
            "spec_hash": self.spec_hash(),
            "tool": "psyllid",
            "version": __version__,
            "tolerances": _resolve_config(self.spec.config, self.params, {}).as_dict()
            if self.spec.evaluator in _SIMULATING
            else {},
            "rows": len(self.rows),
        }

    def to_csv(self) -> str:
        cols = self.columns
        return csv_text(cols, ([row.get(c) for c in cols] for row in self.rows))

    def write(self, out_dir) -> tuple:
        """Write ``<name>.csv`` and ``<name>.meta.json`` into ``out_dir``."""
        out = Path(out_dir)
        csv_path = atomic_write_text(out / f"{self.spec.name}.csv", self.to_csv())
        meta_path = atomic_write_text(out / f"{self.spec.name}.meta.json", json_text(self.meta()))
        written = [csv_path, meta_path]
        for suffix, text in self.extras.items():
            written.append(atomic_write_text(out / f"{self.spec.name}{suffix}", text))
        return tuple(written)


# ---------------------------------------------------------------------------
# evaluation


def _cell_strategy(template: dict, point: dict) -> dict:
    s = dict(template)
    for path, v in point.items():
        if path.startswith("strategy."):
            s[path.split(".", 1)[1]] = v
    return s


def _cell_params(params: ModelParams, point: dict) -> ModelParams:
    changes = {p.split(".", 1)[1]: v for p, v in point.items() if p.startswith("params.")}
    return params.replace(**changes) if changes else params


def _resolve_config(template: dict, params: ModelParams, point: dict) -> SimulationConfig:
    cfg = dict(template)
    for path, v in point.items():
        if path.startswith("config."):
            cfg[path.split(".", 1)[1]] = v
    init = cfg.pop("initial", "E1")
    if init == "E1":
        init = equilibrium_E1(params).coords
    return SimulationConfig(initial=State(*init), **cfg)


def _resolve_strategy(s: dict, params: ModelParams) -> ControlStrategy:
    alpha = float(s.get("alpha", 0.0))
    policy = s.get("policy", "open_loop")
    k = s.get("k", 0.0)
    if k == "k_star":
        k = k_star(params, alpha) + float(s.get("k_shift", 0.0))
    elif k == "N_M":
        k = offspring_numbers(params)[0]
    period = s.get("period")
    if "n" in s:
        period = WEEKS2 * float(s["n"])
    if policy == "open_loop":
        a_p = float(s.get("a_p", 0.0))
        if "a_p_min" in s:
            a_p = ap_crit_aux(params, alpha).a_p_crit + float(s["a_p_min"])
        pol = OpenLoop(a_p)
    elif policy == "closed_loop_continuous":
        pol = ClosedLoopContinuous(float(k))
    elif policy == "closed_loop_sampled":
        pol = ClosedLoopSampled(float(k), float(period))
    elif policy == "mixed":
        cap = ap_crit_aux(params, alpha).a_p_crit + float(s.get("a_p_min", 500.0))
        pol = Mixed(cap, float(k), float(period))
    else:
        raise ConfigError(f"unknown policy {policy!r}")
    return ControlStrategy(alpha, pol)


def _eval_simulate(params, spec, point):
    p = _cell_params(params, point)
    strat = _resolve_strategy(_cell_strategy(spec.strategy, point), p)
    cfg = _resolve_config(spec.config, p, point)
    traj = integrate(p, strat, cfg)
    fs = traj.final_state
    out = {
        "elimination_time": traj.elimination_time,
        "cost_integral": traj.pheromone_cost_integral,
        "cost_release_total": traj.pheromone_release_total,
        "final_M": fs.M,
        "final_A": fs.A,
        "final_U": fs.U,
    }
    pol = strat.policy
    out["a_p"] = getattr(pol, "a_p", None)
    out["a_p_cap"] = getattr(pol, "a_p_cap", None)
    out["k"] = getattr(pol, "k", None)
    out["period"] = getattr(pol, "period", None)
    return out


def _eval_thresholds(params, spec, point):
    p = _cell_params(params, point)
    alpha = float(_cell_strategy(spec.strategy, point).get("alpha", 0.0))
    aux = ap_crit_aux(p, alpha)
    fold = ap_crit(p, alpha)
    return {
        "ap_crit_aux": aux.a_p_crit,
        "m_tangency": aux.tangency_point,
        "ap_crit": fold.a_p_crit,
        "a_tangency": fold.tangency_point,
    }


def _eval_k_star(params, spec, point):
    p = _cell_params(params, point)
    alpha = float(_cell_strategy(spec.strategy, point).get("alpha", 0.0))
    return {
        "k_star": k_star(p, alpha),
        "k_star_published_N_M": feedback_threshold(PUBLISHED_N_M, p.mu, alpha),
    }


def _eval_closed_initial(params, spec, point):
    p = _cell_params(params, point)
    alpha = float(_cell_strategy(spec.strategy, point).get("alpha", 0.0))
    ks = k_star(p, alpha)
    e1 = equilibrium_E1(p).coords
    aux = ap_crit_aux(p, alpha).a_p_crit
    fold = ap_crit(p, alpha).a_p_crit
    amount = ks * e1.A
    return {
        "k_star": ks,
        "A1_star": e1.A,
        "ap_k_star": amount,
        "ap_crit_aux": aux,
        "ratio": amount / aux,
        "ap_k_star_F1": ks * e1.F,
        "ratio_F1": ks * e1.F / aux,
        "ap_crit": fold,
        "ratio_vs_ap_crit": amount / fold,
    }


def _eval_phase(params, spec, point):
    p = _cell_params(params, point)
    s = _cell_strategy(spec.strategy, point)
    alpha = float(s["alpha"])
    strat = _resolve_strategy(s, p)
    k = strat.policy.k
    cfg = _resolve_config(spec.config, p, point)
    traj = integrate(p, strat, cfg)
    e1p = equilibrium_E1P_closed(p, alpha, k)
    e2p = equilibrium_E2P_closed(p, alpha, k)
    fs = traj.final_state
    decayed = max(fs) / max(max(cfg.initial), 1e-300)
    if traj.eliminated:
        target = "E0"
        rel = 0.0
    elif decayed < E0_DECAY_FRACTION:
        # slow approach to the origin that has not crossed the elimination level by t_max
        target = "E0"
        rel = decayed
    else:
        cands = [("E1P", e1p), ("E2P", e2p)]
        best = min(
            ((name, rep) for name, rep in cands if rep.exists),
            key=lambda c: _rel_dist(fs, c[1].coords),
            default=(None, None),
        )
        target = best[0]
        rel = _rel_dist(fs, best[1].coords) if best[1] is not None else None
    out = {
        "k": k,
        "k_star": k_star(p, alpha),
        "elimination_time": traj.elimination_time,
        "final_M": fs.M,
        "final_A": fs.A,
        "final_U": fs.U,
        "E1P_M": e1p.coords.M,
        "E1P_F": e1p.coords.F,
        "E1P_class": e1p.pws_class.value,
        "nearest": target,
        "rel_error": rel,
        "_trajectory": (traj.t, traj.states),
    }
    return out


def _rel_dist(a: State, b: State) -> float:
    scale = max(abs(x) for x in b) or 1.0
    return max(abs(x - y) for x, y in zip(a, b)) / scale


_EVALUATORS: Dict[str, Callable] = {
    "simulate": _eval_simulate,
    "thresholds": _eval_thresholds,
    "k_star": _eval_k_star,
    "closed_initial": _eval_closed_initial,
    "phase": _eval_phase,
}
_SIMULATING = {"simulate", "phase"}


def _eval_cell(args):
    params, spec, point = args
    return _EVALUATORS[spec.evaluator](params, spec, point)


def _effective_jobs(jobs: int) -> int:
    if os.environ.get("PSYLLID_SEED_DETERMINISTIC") == "1":
        return 1
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")
    return jobs


def run_sweep(spec: SweepSpec, params: ModelParams = TABLE1, jobs: int = 1, preset: Optional[str] = None) -> SweepResult:
    """Evaluate every grid cell of ``spec``; rows follow grid order."""
    jobs = _effective_jobs(jobs)
    points = list(spec.cells())
    tasks = [(params, spec, pt) for pt in points]
    if jobs == 1 or len(tasks) == 1:
        results = [_eval_cell(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_eval_cell, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    rows = []
    for pt, res in zip(points, results):
        row = {p.split(".", 1)[1]: v for p, v in pt.items()}
        row.update(res)
        rows.append(row)
    return SweepResult(spec, params, rows, preset=preset)


# ---------------------------------------------------------------------------
# figure sweeps


def _alphas(alpha_grid):
    return default_grid(0.0, 1.0) if alpha_grid is None else tuple(alpha_grid)


def fig5_open_ap_crit(params: ModelParams = TABLE1, alpha_grid=None, jobs: int = 1) -> SweepResult:
    """Auxiliary-system threshold (and the open-loop fold threshold) versus ``alpha``."""
    spec = SweepSpec(
        name="fig5",
        evaluator="thresholds",
        axes=(("strategy.alpha", _alphas(alpha_grid)),),
        outputs=("ap_crit_aux", "m_tangency", "ap_crit", "a_tangency"),
    )
    return run_sweep(spec, params, jobs)


def fig6_open_totals(
    params: ModelParams = TABLE1, alpha: float = 0.5, ap_min_grid=None, config: Optional[dict] = None, jobs: int = 1
) -> SweepResult:
    """Open-loop runs with ``a_p = threshold(alpha) + a_p_min`` from the wild equilibrium."""
    grid = default_grid(100.0, 2100.0) if ap_min_grid is None else tuple(ap_min_grid)
    spec = SweepSpec(
        name="fig6",
        evaluator="simulate",
        axes=(("strategy.a_p_min", grid),),
        outputs=("a_p",) + SIM_OUTPUTS,
        strategy={"policy": "open_loop", "alpha": alpha},
        config=dict({"initial": "E1"}, **(config or {})),
    )
    return run_sweep(spec, params, jobs)


def fig7_min_time_grid(
    params: ModelParams = TABLE1, alpha_grid=None, ap_grid=None, config: Optional[dict] = None, jobs: int = 1
) -> SweepResult:
    """Elimination time over an ``(alpha, a_p)`` grid of open-loop runs."""
    if ap_grid is None:
        lo = ap_crit_aux(params, 1.0).a_p_crit
        hi = 5.0 * ap_crit_aux(params, 0.0).a_p_crit
        ap_grid = default_grid(lo, hi)
    spec = SweepSpec(
        name="fig7",
        evaluator="simulate",
        axes=(("strategy.alpha", _alphas(alpha_grid)), ("strategy.a_p", tuple(ap_grid))),
        outputs=SIM_OUTPUTS,
        strategy={"policy": "open_loop"},
        config=dict({"initial": "E1"}, **(config or {})),
    )
    return run_sweep(spec, params, jobs)


def fig8_k_star_curve(params: ModelParams = TABLE1, alpha_grid=None, jobs: int = 1) -> SweepResult:
    """Feedback-gain threshold versus ``alpha``."""
    spec = SweepSpec(
        name="fig8",
        evaluator="k_star",
        axes=(("strategy.alpha", _alphas(alpha_grid)),),
        outputs=("k_star", "k_star_published_N_M"),
    )
    return run_sweep(spec, params, jobs)


def fig9_phase_portraits(
    params: ModelParams = TABLE1,
    alpha_list=(0.0, 0.25, 0.5, 0.75, 1.0),
    k_below: float = 2.5,
    k_above: Optional[float] = None,
    period: Optional[float] = None,
    config: Optional[dict] = None,
    jobs: int = 1,
) -> SweepResult:
    """Closed-loop runs from the wild equilibrium below and above the gain threshold.

    ``k_above`` defaults to ``N_M``.  ``period=None`` uses continuous
    feedback, otherwise the lure is updated every ``period`` days.  The
    (t, M, F) paths are kept in ``extras['_traj.csv']``.
    """
    if k_above is None:
        k_above = offspring_numbers(params)[0]
    strategy = {"policy": "closed_loop_continuous" if period is None else "closed_loop_sampled"}
    if period is not None:
        strategy["period"] = float(period)
    spec = SweepSpec(
        name="fig9",
        evaluator="phase",
        axes=(("strategy.alpha", tuple(alpha_list)), ("strategy.k", tuple(sorted((k_below, k_above))))),
        outputs=(
            "k_star", "elimination_time", "final_M", "final_A", "final_U",
            "E1P_M", "E1P_F", "E1P_class", "nearest", "rel_error",
        ),
        strategy=strategy,
        config=dict({"t_max": 5000.0, "record_dt": 5.0, "initial": "E1"}, **(config or {})),
    )
    result = run_sweep(spec, params, jobs)
    lines = []
    for row in result.rows:
        t, states = row.pop("_trajectory")
        for ti, (m, a, u) in zip(t, states):
            lines.append((row["alpha"], row["k"], float(ti), float(m), float(a + u)))
    result.extras["_traj.csv"] = csv_text(("alpha", "k", "t", "M", "F"), lines)
    return result


def fig10_closed_initial_amount(params: ModelParams = TABLE1, alpha_grid=None, jobs: int = 1) -> SweepResult:
    """Initial closed-loop lure ``k*(alpha) * A1*`` and its ratio to the open-loop thresholds.

    Besides the primary ratio to the auxiliary threshold, the alternative
    reading with the total wild female count and the ratio to the fold
    threshold are reported.
    """
    spec = SweepSpec(
        name="fig10",
        evaluator="closed_initial",
        axes=(("strategy.alpha", _alphas(alpha_grid)),),
        outputs=(
            "k_star", "A1_star", "ap_k_star", "ap_crit_aux", "ratio",
            "ap_k_star_F1", "ratio_F1", "ap_crit", "ratio_vs_ap_crit",
        ),
    )
    return run_sweep(spec, params, jobs)


def fig11_closed_sampled_totals(
    params: ModelParams = TABLE1, alpha_grid=None, n_grid=(1, 2, 3, 4, 5, 6), config: Optional[dict] = None, jobs: int = 1
) -> SweepResult:
    """Sampled feedback ``(k*(alpha)+1) * A(t_j)`` with ``t_j = 14 n j`` days."""
    spec = SweepSpec(
        name="fig11",
        evaluator="simulate",
        axes=(("strategy.alpha", _alphas(alpha_grid)), ("strategy.n", tuple(float(n) for n in n_grid))),
        outputs=("k", "period") + SIM_OUTPUTS,
        strategy={"policy": "closed_loop_sampled", "k": "k_star", "k_shift": 1.0},
        config=dict({"initial": "E1"}, **(config or {})),
    )
    return run_sweep(spec, params, jobs)


def fig12_mixed_totals(
    params: ModelParams = TABLE1,
    alpha_grid=None,
    n_grid=(1, 2, 3, 4, 5, 6),
    a_p_min: float = 500.0,
    config: Optional[dict] = None,
    jobs: int = 1,
) -> SweepResult:
    """Mixed control ``min(threshold(alpha) + a_p_min, (k*(alpha)+1) A(t_j))``."""
    spec = SweepSpec(
        name="fig12",
        evaluator="simulate",
        axes=(("strategy.alpha", _alphas(alpha_grid)), ("strategy.n", tuple(float(n) for n in n_grid))),
        outputs=("a_p_cap", "k", "period") + SIM_OUTPUTS,
        strategy={"policy": "mixed", "k": "k_star", "a_p_min": a_p_min},
        config=dict({"initial": "E1"}, **(config or {})),
    )
    return run_sweep(spec, params, jobs)


SWEEPS = {
    "fig5": fig5_open_ap_crit,
    "fig6": fig6_open_totals,
    "fig7": fig7_min_time_grid,
    "fig8": fig8_k_star_curve,
    "fig9": fig9_phase_portraits,
    "fig10": fig10_closed_initial_amount,
    "fig11": fig11_closed_sampled_totals,
    "fig12": fig12_mixed_totals,
}
