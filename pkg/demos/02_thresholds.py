"""How much lure is needed: fold threshold versus auxiliary-system threshold.

Below the fold threshold the scarcity region holds two positive equilibria
(one of them a trap that keeps the wild population alive); above it none.
The auxiliary threshold bounds growth from above, so exceeding it removes
every positive equilibrium for any starting point.

Run: python3 demos/02_thresholds.py
"""

from psyllid import TABLE1
from psyllid import analysis as an
from psyllid import thresholds as th

print(f"{'alpha':>5} {'fold':>10} {'auxiliary':>11} {'k*':>8}")
for alpha in (0.0, 0.1, 0.25, 0.5, 0.75, 1.0):
    fold = th.ap_crit(TABLE1, alpha)
    aux = th.ap_crit_aux(TABLE1, alpha)
    print(f"{alpha:5.2f} {fold.a_p_crit:10.2f} {aux.a_p_crit:11.2f} {an.k_star(TABLE1, alpha):8.4f}")

alpha = 0.5
crit = th.ap_crit(TABLE1, alpha).a_p_crit
print()
for factor in (0.5, 0.99, 1.01, 2.0):
    roots = th.count_equilibria_scarcity(TABLE1, alpha, factor * crit)
    print(f"a_p = {factor:4.2f} x fold threshold -> {roots.count} scarcity equilibria")
