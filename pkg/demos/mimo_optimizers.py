"""Multi-antenna users: iterative optimizers and the simultaneous
diagonalization they build on.

Run: python demos/mimo_optimizers.py
"""

import numpy as np

from wiretap_jamming import (
    Dims,
    SolverBudget,
    generate_channel,
    optimize_gn_mimo,
    optimize_no_mimo,
    optimize_sit_cj_mimo,
    rate_sit_cj,
    simultaneous_diagonalize,
)

P = 100.0
ch = generate_channel(0, seed=3, dims=Dims(b=4, e=3, t1=2, t2=2))

q1, q2 = ch.h1.conj().T @ ch.h1, ch.g1.conj().T @ ch.g1
sd = simultaneous_diagonalize(q1, q2)
print("generalized eigenvalues of (H1^H H1, G1^H G1):", np.round(sd.eta, 4))
print("W^H (Q1 + Q2) W =\n", np.round(sd.w.conj().T @ (q1 + q2) @ sd.w, 6).real)

budget = SolverBudget(l1=5, l2=50, alt_iters=5)
no = optimize_no_mimo(ch, P, budget)
gn = optimize_gn_mimo(ch, P, P, budget)
sit = optimize_sit_cj_mimo(ch, P, P, budget)
print(f"\nno jamming   rs={no.rs:.4f}")
print(f"GN jamming   rs={gn.rs:.4f}  jammer power used {np.trace(gn.f2.f).real:.1f}")
print(f"SIT-CJ       rs={sit.rs:.4f}  winning bound: {sit.candidate.value}, "
      f"upper bound {sit.upper_bound:.4f}")
rep = rate_sit_cj(ch, sit.f1.f, sit.f2.f)
print(f"SIT-CJ open rate of user 2: {rep.ro:.4f}, total {rep.total:.4f}")
