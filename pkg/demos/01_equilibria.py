"""Equilibria of the uncontrolled model and their stability.

Run: python3 demos/01_equilibria.py
"""

from psyllid import TABLE1
from psyllid import analysis as an

d = an.derived_quantities(TABLE1)
print(f"male offspring number   N_M = {d.n_m:.4f}")
print(f"female offspring number N_F = {d.n_f:.4f}")
print(f"theta_M = {d.theta_m:.4f}  (scarcity equilibria need theta_M > 1)")
print()

# The wild population settles where males are abundant; the scarcity
# equilibrium exists mathematically but lies on the wrong side of the
# switching plane, so the flow never reaches it.
for rep in an.all_equilibria(TABLE1, alpha=0.0, a_p=0.0, k=0.0)[:3]:
    stab = rep.stability.verdict.value if rep.stability else "n/a"
    c = rep.coords
    print(f"{rep.label.value:>3}: M={c.M:9.2f} A={c.A:9.2f} U={c.U:8.2f}  {rep.pws_class.value:<16} {stab}")

print()
print("Routh-Hurwitz coefficients at E1:", tuple(round(x, 6) for x in an.routh_hurwitz_E1(TABLE1)))
