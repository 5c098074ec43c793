"""Natural dynamics and constant (open-loop) lure release.

Run: python3 demos/03_open_loop.py
"""

from psyllid import TABLE1, State
from psyllid import analysis as an
from psyllid import simulator as sim
from psyllid import thresholds as th

e1 = an.equilibrium_E1(TABLE1).coords
cfg = sim.SimulationConfig(initial=State(1519.0, 1590.0, 383.0), t_max=2000.0)
natural = sim.integrate(TABLE1, sim.no_control(), cfg)
print(f"no control, day 2000: {natural.final_state}  (E1 = {e1})")

alpha = 0.5
aux = th.ap_crit_aux(TABLE1, alpha).a_p_crit
cfg = cfg.replace(initial=e1, t_max=5000.0)
for factor, start in ((1.05, e1), (0.5, State(1.0, 1.0, 1.0))):
    tr = sim.integrate(TABLE1, sim.ControlStrategy(alpha, sim.OpenLoop(factor * aux)), cfg.replace(initial=start))
    acc = sim.pheromone_accounting(tr)
    print(
        f"a_p = {factor} x {aux:.0f} from {tuple(round(x, 1) for x in start)}: "
        f"eliminated at {tr.elimination_time:.1f} d, lure-days {acc['integral']:.3g}"
    )

# a lure well below the auxiliary threshold can still work, as long as it
# exceeds the fold threshold that removes the scarcity trap
fold = th.ap_crit(TABLE1, alpha).a_p_crit
tr = sim.integrate(TABLE1, sim.ControlStrategy(alpha, sim.OpenLoop(0.9 * fold)), cfg)
print(f"a_p = 0.9 x fold threshold from E1: eliminated = {tr.eliminated}, final {tr.final_state}")
