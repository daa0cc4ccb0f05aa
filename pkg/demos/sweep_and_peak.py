"""Run a coarse oscillator-erasure sweep and print the coefficient peak.

Same machinery as `catalytic-erasure jc-sweep`, called as a library.
"""

import numpy as np

from catalytic_erasure import run_experiment

xs = np.linspace(0.1, 0.6, 11)
records = run_experiment(-np.log(xs), dv_min=3, dv_max=10)

print(f"{'x':>6} {'dSs':>9} {'Qe':>9} {'Ise':>9} {'gamma_H':>9}"
      f" {'gamma_E':>9} {'dv':>3}")
for r in records:
    print(f"{r.x:6.3f} {r.dSs:9.5f} {r.Qe:9.5f} {r.Ise:9.5f}"
          f" {r.gamma_H:9.5f} {r.gamma_E:9.5f} {r.best_dv:3d}")

peak = max(records, key=lambda r: r.gamma_H)
print(f"\npeak gamma_H = {peak.gamma_H:.4f} at x = {peak.x:.3f}"
      f" (t = {peak.t:.3f}, d_v = {peak.best_dv})")
print(f"balance residual there = {peak.eq1_residual:.2e}")
