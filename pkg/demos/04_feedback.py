"""Feedback control: lure proportional to the observed female count.

Run: python3 demos/04_feedback.py
"""

from psyllid import TABLE1
from psyllid import analysis as an
from psyllid import experiments as ex

n_m = an.derived_quantities(TABLE1).n_m
print(f"k*(alpha) = mu (N_M - 1) / (alpha + mu); k*(0) = {an.k_star(TABLE1, 0.0):.4f}")

result = ex.fig9_phase_portraits(alpha_list=(0.0, 0.5, 1.0), k_below=2.5, k_above=n_m, period=14.0)
for row in result.rows:
    when = f"{row['elimination_time']:.0f} d" if row["elimination_time"] is not None else "-"
    print(
        f"alpha={row['alpha']:.2f} k={row['k']:7.3f} (k*={row['k_star']:7.3f}) -> {row['nearest']:<4}"
        f" eliminated: {when:>6}  final M={row['final_M']:.3g}"
    )

# closed-loop equilibrium with a small gain: males fall with alpha, total stays fixed
for alpha in (0.0, 0.5, 1.0):
    rep = an.equilibrium_E1P_closed(TABLE1, alpha, 2.5)
    c = rep.coords
    print(f"E1P(alpha={alpha}, k=2.5) = ({c.M:.1f}, {c.A:.1f}, {c.U:.1f})  {rep.pws_class.value}")
