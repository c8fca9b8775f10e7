"""Single-antenna users: exact optimum of each scheme on one channel.

Run: python demos/simo_walkthrough.py
"""

import numpy as np

from wiretap_jamming import (
    Dims,
    Scheme,
    breakpoint_p0_prime,
    generate_channel,
    rate_sit_cj,
    solve_gn_simo,
    solve_no_jamming_simo,
    solve_sit_cj_simo,
)
from wiretap_jamming.oracle import grid_search_simo

P = 100.0  # 20 dB per user

for trial in range(3):
    ch = generate_channel(trial, seed=7, dims=Dims(b=4, e=4, t1=1, t2=1))
    print(f"channel {trial}: |h1|^2={np.linalg.norm(ch.h1)**2:.2f} |g1|^2={np.linalg.norm(ch.g1)**2:.2f} "
          f"|h2|^2={np.linalg.norm(ch.h2)**2:.2f} |g2|^2={np.linalg.norm(ch.g2)**2:.2f}")
    sols = {
        Scheme.NO: solve_no_jamming_simo(ch, P),
        Scheme.GN: solve_gn_simo(ch, P, P),
        Scheme.SITCJ: solve_sit_cj_simo(ch, P, P),
    }
    for scheme, sol in sols.items():
        _, _, grid_best = grid_search_simo(scheme, ch, P, P)
        print(f"  {scheme.value:>5}: f1={sol.f1:8.3f} f2={sol.f2:8.3f} rs={sol.rs:.4f}  (grid {grid_best:.4f})")
    sit = sols[Scheme.SITCJ]
    rep = rate_sit_cj(ch, sit.f1, sit.f2)
    print(f"  user 2 open rate alongside SIT-CJ: {rep.ro:.3f} bits")
    p0 = breakpoint_p0_prime(ch)
    print(f"  power where the two SIT-CJ bounds cross: {p0 if p0 is None else round(p0, 3)}")
