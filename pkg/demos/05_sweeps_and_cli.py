"""Parameter sweeps and their on-disk outputs; the same runs via the CLI.

Run: python3 demos/05_sweeps_and_cli.py
"""

import subprocess
import sys
import tempfile
from pathlib import Path

from psyllid import experiments as ex

out = Path(tempfile.mkdtemp(prefix="psyllid-demo-"))

fig5 = ex.fig5_open_ap_crit(alpha_grid=(0.0, 0.5, 1.0))
for path in fig5.write(out):
    print("wrote", path)
print(fig5.to_csv())

mixed = ex.fig12_mixed_totals(alpha_grid=(0.5, 1.0), n_grid=(1, 3))
closed = ex.fig11_closed_sampled_totals(alpha_grid=(0.5, 1.0), n_grid=(1, 3))
for m, c in zip(mixed.rows, closed.rows):
    print(f"alpha={m['alpha']} n={m['n']:.0f}: mixed {m['cost_integral']:.4g} vs sampled {c['cost_integral']:.4g} lure-days")

cmd = [sys.executable, "-m", "psyllid", "thresholds", "--alpha-grid", "0:1:3", "--format", "csv"]
print("\n$", " ".join(cmd[2:]))
print(subprocess.run(cmd, capture_output=True, text=True, check=True).stdout)
