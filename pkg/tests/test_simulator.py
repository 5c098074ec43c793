import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle_values as ov
from psyllid import analysis as an
from psyllid import simulator as sim
from psyllid import thresholds as th
from psyllid.errors import ConfigError
from psyllid.model import TABLE1, State

E1 = State(*ov.E1)
P_HAT = an.derived_quantities(TABLE1).p_hat
N_M = ov.N_M
FIG9_ALPHAS = (0.0, 0.25, 0.5, 0.75, 1.0)


def run(strategy, initial=E1, **cfg):
    return sim.integrate(TABLE1, strategy, sim.SimulationConfig(initial=initial, **cfg))


@pytest.fixture(scope="module")
def aux05():
    return th.ap_crit_aux(TABLE1, 0.5).a_p_crit


# ---------------------------------------------------------------------------
# policies and configuration


def test_active_ap_open_loop():
    s = sim.ControlStrategy(0.3, sim.OpenLoop(500.0))
    assert sim.active_ap(s, 0.0, 10.0) == 500.0
    assert sim.active_ap(s, 1234.5, 1e6) == 500.0


def test_active_ap_sampled_gain():
    s = sim.ControlStrategy(0.0, sim.ClosedLoopSampled(36.43, 14.0))
    assert sim.active_ap(s, 3.0, 100.0) == pytest.approx(3643.0)


def test_active_ap_mixed_cap_binds():
    s = sim.ControlStrategy(0.5, sim.Mixed(1000.0, 2.0, 14.0))
    assert sim.active_ap(s, 0.0, 1e5) == 1000.0
    assert sim.active_ap(s, 0.0, 10.0) == pytest.approx(30.0)


def test_sampled_lure_held_between_instants():
    s = sim.ControlStrategy(0.5, sim.ClosedLoopSampled(2.0, 14.0))
    tr = run(s, t_max=60.0)
    for t, ap in zip(tr.t, tr.a_p):
        j = int(t // 14.0) if t < 56 else 4
        tj, a_rel = tr.releases[min(j, len(tr.releases) - 1)]
        if abs(t - round(t / 14) * 14) > 1e-9:
            assert tj <= t < tj + 14.0
            assert ap == a_rel
    assert [tj for tj, _ in tr.releases] == [0.0, 14.0, 28.0, 42.0, 56.0]
    assert tr.releases[0][1] == pytest.approx(2.0 * E1.A)


@pytest.mark.parametrize(
    "policy",
    [
        lambda: sim.OpenLoop(-1.0),
        lambda: sim.ClosedLoopContinuous(-0.5),
        lambda: sim.ClosedLoopSampled(1.0, 0.0),
        lambda: sim.Mixed(100.0, 1.0, -14.0),
    ],
)
def test_invalid_policies(policy):
    with pytest.raises(ConfigError):
        policy()


def test_invalid_alpha():
    with pytest.raises(ConfigError):
        sim.ControlStrategy(1.5, sim.OpenLoop(1.0))


@pytest.mark.parametrize("field,value", [("t_max", 0.0), ("rtol", -1.0), ("atol", 0.0), ("elimination_eps", 0.0)])
def test_invalid_config(field, value):
    with pytest.raises(ConfigError):
        sim.SimulationConfig(initial=E1, **{field: value})


def test_negative_initial_rejected():
    with pytest.raises(ConfigError):
        sim.SimulationConfig(initial=State(-1.0, 1.0, 1.0))


# ---------------------------------------------------------------------------
# natural dynamics


def test_natural_run_stays_near_E1():
    t0 = time.perf_counter()
    tr = run(sim.no_control(), initial=State(1519.0, 1590.0, 383.0), t_max=2000.0)
    elapsed = time.perf_counter() - t0
    dev = np.max(np.abs(tr.states - np.array(ov.E1)) / np.array(ov.E1))
    assert dev < 0.05
    assert tr.elimination_time is None
    assert elapsed < 1.0


def test_no_control_from_E1_never_eliminates():
    tr = run(sim.no_control(), t_max=3000.0)
    assert sim.time_to_elimination(tr, 0.1) is None
    assert np.allclose(tr.final_state, ov.E1, rtol=1e-6)


@settings(max_examples=15)
@given(
    st.tuples(*(st.floats(0.0, 8000.0) for _ in range(3))),
    st.floats(0.0, 1.0),
    st.floats(0.0, 3000.0),
)
def test_absorbing_bound(initial, alpha, a_p):
    tr = run(sim.ControlStrategy(alpha, sim.OpenLoop(a_p)), initial=State(*initial), t_max=400.0)
    bound = max(sum(initial), P_HAT) + 10 * 1e-8 * P_HAT
    assert np.max(tr.states.sum(axis=1)) <= bound
    assert np.all(tr.states >= 0.0)


@settings(max_examples=15)
@given(
    st.tuples(*(st.floats(1.0, 5000.0) for _ in range(3))),
    st.floats(0.0, 1.0),
    st.sampled_from(["open", "cont", "sampled"]),
)
def test_samples_increasing_nonnegative_few_clamps(initial, alpha, kind):
    pol = {
        "open": sim.OpenLoop(800.0),
        "cont": sim.ClosedLoopContinuous(5.0),
        "sampled": sim.ClosedLoopSampled(5.0, 14.0),
    }[kind]
    tr = run(sim.ControlStrategy(alpha, pol), initial=State(*initial), t_max=600.0)
    assert np.all(np.diff(tr.t) > 0)
    assert np.all(tr.states >= 0.0)
    assert tr.step_stats["clamped"] < 1e-3 * tr.step_stats["accepted"] + 1e-12 or tr.step_stats["clamped"] == 0


def test_clamps_rare_on_eliminating_runs(aux05):
    for ap in (0.5 * aux05, 1.05 * aux05):
        tr = run(sim.ControlStrategy(0.5, sim.OpenLoop(ap)))
        assert tr.step_stats["clamped"] < 1e-3 * tr.step_stats["accepted"]


# ---------------------------------------------------------------------------
# switching


def test_switching_events_alternate_and_match_plane():
    tr = run(sim.no_control(), initial=State(10.0, 10.0, 10.0), t_max=500.0)
    dirs = [d for _, d in tr.switch_events]
    assert dirs == [-1, 1]
    assert all(a != b for a, b in zip(dirs, dirs[1:]))
    for t, _ in tr.switch_events:
        m, a, _u, _c = tr.dense(t)
        assert abs(TABLE1.gamma * m - a) < 1e-6 * max(a, 1.0)
    assert tr.step_stats["switch_events"] == 2
    assert set(np.unique(tr.region_sign)) <= {-1, 0, 1}


def test_scarcity_start_crosses_into_abundance():
    tr = run(sim.no_control(), initial=State(100.0, 2000.0, 100.0), t_max=500.0)
    assert tr.region_sign[0] == -1 and tr.region_sign[-1] == 1
    assert [d for _, d in tr.switch_events] == [1]


# ---------------------------------------------------------------------------
# elimination


def test_elimination_times_match_oracle(aux05):
    tr = run(sim.ControlStrategy(0.5, sim.OpenLoop(1.05 * aux05)))
    assert tr.elimination_time == pytest.approx(ov.ELIMINATION_TIMES["open_1.05_aux_alpha0.5_from_E1"], rel=1e-6)
    tr = run(sim.ControlStrategy(0.5, sim.OpenLoop(0.5 * aux05)), initial=State(1.0, 1.0, 1.0))
    assert tr.elimination_time == pytest.approx(ov.ELIMINATION_TIMES["open_0.5_aux_alpha0.5_from_ones"], rel=1e-6)
    tr = run(sim.ControlStrategy(0.5, sim.ClosedLoopContinuous(N_M)))
    assert tr.elimination_time == pytest.approx(ov.ELIMINATION_TIMES["closed_kNM_alpha0.5_from_E1"], rel=1e-6)


def test_just_above_aux_threshold_eliminates(aux05):
    tr = run(sim.ControlStrategy(0.5, sim.OpenLoop(1.01 * aux05)))
    assert tr.eliminated and math.isfinite(tr.elimination_time)
    assert max(tr.final_state) < 0.1 + 1e-9


def test_already_eliminated_at_start():
    tr = run(sim.no_control(), initial=State(0.01, 0.02, 0.0))
    assert tr.elimination_time == 0.0
    assert sim.time_to_elimination(tr, 0.1) == 0.0


def test_time_to_elimination_other_eps(aux05):
    tr = run(sim.ControlStrategy(0.5, sim.OpenLoop(1.05 * aux05)), elimination_eps=1e-3)
    t_loose = sim.time_to_elimination(tr, 0.1)
    assert t_loose == pytest.approx(ov.ELIMINATION_TIMES["open_1.05_aux_alpha0.5_from_E1"], rel=1e-6)
    assert t_loose < tr.elimination_time


def test_invading_population_controlled_by_small_lure(aux05):
    tr = run(sim.ControlStrategy(0.5, sim.OpenLoop(0.2 * aux05)), initial=State(1.0, 1.0, 1.0))
    assert tr.eliminated


def test_established_population_resists_small_lure(aux05):
    """From E1, a lure at 0.2 of the auxiliary threshold should not eliminate."""
    tr = run(sim.ControlStrategy(0.5, sim.OpenLoop(0.2 * aux05)))
    assert not tr.eliminated, f"eliminated at t={tr.elimination_time:.1f} d"


def test_closed_loop_gain_NM_reaches_origin():
    for alpha in FIG9_ALPHAS:
        tr = run(sim.ControlStrategy(alpha, sim.ClosedLoopContinuous(N_M)))
        assert tr.eliminated or max(tr.final_state) < 0.01 * max(E1)


# ---------------------------------------------------------------------------
# pheromone accounting


def test_accounting_rectangle():
    tr = run(sim.ControlStrategy(0.0, sim.OpenLoop(500.0)), t_max=600.0)
    acc = sim.pheromone_accounting(tr)
    assert acc["integral"] == pytest.approx(300000.0, rel=1e-12)
    assert acc["release_total"] == pytest.approx(300000.0, rel=1e-12)


def test_accounting_zero_duration():
    tr = run(sim.ControlStrategy(0.0, sim.OpenLoop(500.0)), initial=State(0.0, 0.0, 0.0))
    acc = sim.pheromone_accounting(tr)
    assert acc == {"integral": 0.0, "release_total": 0.0}


def test_accounting_integral_matches_quadrature():
    tr = run(sim.ControlStrategy(0.5, sim.ClosedLoopContinuous(3.0)), t_max=300.0, record_dt=0.05)
    trap = float(np.sum(0.5 * (tr.a_p[1:] + tr.a_p[:-1]) * np.diff(tr.t)))
    assert tr.pheromone_cost_integral == pytest.approx(trap, rel=1e-5)


def test_accounting_sampled_release_sum():
    tr = run(sim.ControlStrategy(0.5, sim.ClosedLoopSampled(2.0, 14.0)), t_max=100.0)
    assert tr.pheromone_release_total == pytest.approx(sum(a for _, a in tr.releases))
    assert len(tr.releases) == 8  # t = 0, 14, ..., 98
    assert tr.pheromone_cost_integral == pytest.approx(
        sum(a * (min(tj + 14.0, 100.0) - tj) for tj, a in tr.releases), rel=1e-9
    )


# ---------------------------------------------------------------------------
# numerics


def test_fifth_order_convergence_fixed_step():
    """Halving a fixed step shrinks successive differences by 2**5 on a smooth run."""
    cfg = sim.SimulationConfig(initial=E1, t_max=100.0, record_dt=None, elimination_eps=1e-300)
    strategy = sim.ControlStrategy(0.5, sim.OpenLoop(3000.0))
    ends = [np.array(sim.integrate(TABLE1, strategy, cfg.replace(fixed_step=h)).final_state) for h in (1 / 8, 1 / 16, 1 / 32)]
    ratio = np.max(np.abs(ends[0] - ends[1])) / np.max(np.abs(ends[1] - ends[2]))
    assert 16.0 <= ratio <= 64.0, ratio


def test_tolerance_tightening_reduces_error():
    ref = run(sim.ControlStrategy(0.5, sim.OpenLoop(3000.0)), t_max=100.0, rtol=1e-12, atol=1e-14).final_state
    errs = []
    for rtol in (1e-6, 1e-8):
        x = run(sim.ControlStrategy(0.5, sim.OpenLoop(3000.0)), t_max=100.0, rtol=rtol, atol=rtol * 1e-2).final_state
        errs.append(max(abs(a - b) for a, b in zip(x, ref)))
    assert errs[1] < errs[0]


def test_deterministic_runs_identical(aux05):
    s = sim.ControlStrategy(0.5, sim.Mixed(aux05 + 500.0, 5.0, 14.0))
    a, b = run(s), run(s)
    assert a.to_csv() == b.to_csv()
    assert a.summary_json() == b.summary_json()


def test_csv_columns_and_summary():
    tr = run(sim.ControlStrategy(0.5, sim.OpenLoop(200.0)), t_max=10.0)
    lines = tr.to_csv().splitlines()
    assert lines[0] == "t,M,A,U,F,a_p,region_sign"
    assert len(lines) == 1 + 11 + len(tr.switch_events)  # header, daily grid, crossings
    assert len(tr.switch_events) == 1
    s = tr.summary()
    assert set(s) >= {"elimination_time", "pheromone_cost_integral", "pheromone_release_total", "switch_events", "step_stats"}


def test_phase_ordering_after_transient():
    """Males decay faster than females beyond a 50-day transient for k above threshold."""
    worst = {}
    for alpha in FIG9_ALPHAS:
        tr = run(sim.ControlStrategy(alpha, sim.ClosedLoopContinuous(N_M)))
        s = tr.states
        f = (s[:, 1] + s[:, 2]) / (s[0, 1] + s[0, 2])
        m = s[:, 0] / s[0, 0]
        mask = tr.t >= 50.0
        worst[alpha] = float(np.max(m[mask] - f[mask]))
    assert all(v <= 0.0 for v in worst.values()), worst
