"""Small Monte-Carlo sweep over Bob's antenna count, printed as CSV.

The same table comes from
    python -m wiretap_jamming sweep --axis b --values 1,2,4,8 --e 4 --trials 100

Run: python demos/antenna_sweep.py
"""

import sys

from wiretap_jamming import ExperimentConfig, run_experiment

cfg = ExperimentConfig(sweep_axis="b", sweep_values=(1, 2, 4, 8), e=4, t=1,
                       p_db=20.0, trials=100, seed=1, workers=4)
rows = run_experiment(cfg, sys.stdout)
best = {}
for r in rows:
    if r.mean_rtotal > best.get(r.sweep_value, (None, -1))[1]:
        best[r.sweep_value] = (r.scheme.value, r.mean_rtotal)
print()
for b, (name, total) in best.items():
    print(f"B={b}: highest mean total rate from {name} ({total:.3f} bits)")
