"""Command-line entry point: ``sweep``, ``single`` and ``verify``."""

import argparse
import logging
import sys

import numpy as np

from .channel import Scheme, rate_gn_jamming, rate_no_jamming, secrecy_components
from .experiment import (
    AXES,
    Dims,
    ExperimentConfig,
    db_to_linear,
    generate_channel,
    run_experiment,
    solve_scheme,
)
from .mimo import (
    SolverBudget,
    WaterfillMode,
    optimize_gn_mimo,
    optimize_sit_cj_mimo,
    waterfill_theorem5,
)
from .oracle import (
    ModeProblem,
    grid_search_simo,
    projected_ascent,
    projected_descent_modes,
    random_search_gn,
)
from .simdiag import simultaneous_diagonalize
from .simo import breakpoint_p0_prime, solve_gn_simo, solve_no_jamming_simo, solve_sit_cj_simo


def _csv_list(kind):
    def parse(text):
        try:
            return [kind(v) for v in text.split(",") if v.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def _add_dims(p):
    p.add_argument("--b", type=int, default=4, help="Bob antennas")
    p.add_argument("--e", type=int, default=4, help="Eve antennas")
    p.add_argument("--t", type=int, default=1, help="antennas per user")
    p.add_argument("--p-db", type=float, default=20.0, help="power per user in dB")
    p.add_argument("--schemes", type=_csv_list(Scheme), default=list(Scheme),
                   help="comma-separated subset of no,gn,sitcj")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--l1", type=int, default=5)
    p.add_argument("--l2", type=int, default=50)
    p.add_argument("--alt-iters", type=int, default=5)


def _budget(args):
    return SolverBudget(l1=args.l1, l2=args.l2, alt_iters=args.alt_iters)


def build_parser():
    parser = argparse.ArgumentParser(prog="wiretap-jamming",
                                     description="Secrecy rates with cooperative jamming.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="Monte-Carlo sweep written as CSV")
    sw.add_argument("--axis", choices=AXES, required=True)
    sw.add_argument("--values", type=_csv_list(float), required=True)
    _add_dims(sw)
    sw.add_argument("--trials", type=int, default=1000)
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--out", default="-", help="output path, '-' for stdout")

    si = sub.add_parser("single", help="rates of every scheme on one channel")
    _add_dims(si)
    si.add_argument("--trial", type=int, default=0)

    ve = sub.add_parser("verify", help="compare solvers with brute-force oracles")
    ve.add_argument("--suite", choices=("simo", "mimo", "sd"), required=True)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--n", type=int, default=20, help="number of random instances")
    return parser


def cmd_sweep(args, out):
    cfg = ExperimentConfig(
        sweep_axis=args.axis, sweep_values=tuple(args.values), schemes=tuple(args.schemes),
        b=args.b, e=args.e, t=args.t, p_db=args.p_db, trials=args.trials, seed=args.seed,
        budget=_budget(args), workers=args.workers,
    )
    run_experiment(cfg, out if args.out == "-" else args.out)


def cmd_single(args, out):
    dims = Dims(args.b, args.e, args.t, args.t)
    ch = generate_channel(args.trial, args.seed, dims)
    p = db_to_linear(args.p_db)
    print(f"seed={args.seed} trial={args.trial} B={dims.b} E={dims.e} T={dims.t1} "
          f"P={args.p_db:g} dB", file=out)
    for scheme in args.schemes:
        rep = solve_scheme(scheme, ch, p, _budget(args))
        print(f"{scheme.value:>6}  rs={rep.rs:.9f}  ro={rep.ro:.9f}  total={rep.total:.9f}", file=out)


def verify_simo(seed, n):
    """Closed form minus grid optimum, per scheme (min and max)."""
    p = db_to_linear(20.0)
    dev = {s: [] for s in Scheme}
    for i in range(n):
        b, e = (2, 4, 8)[i % 3], (1, 2, 4)[(i // 3) % 3]
        ch = generate_channel(i, seed, Dims(b, e, 1, 1))
        gn = solve_gn_simo(ch, p, p)
        sit = solve_sit_cj_simo(ch, p, p)
        closed = {Scheme.NO: solve_no_jamming_simo(ch, p), Scheme.GN: gn, Scheme.SITCJ: sit}
        extra1 = [breakpoint_p0_prime(ch)]
        extra2 = [gn.f2, sit.f2]
        for s, sol in closed.items():
            _, _, best = grid_search_simo(s, ch, p, p, extra_f1=extra1, extra_f2=extra2)
            dev[s].append(sol.rs - best)
    return {f"{s.value} closed-grid": (min(v), max(v)) for s, v in dev.items()}


def verify_mimo(seed, n):
    rng = np.random.default_rng(seed)
    wf = []
    for _ in range(n):
        r = int(rng.integers(1, 5))
        rho, a = rng.uniform(0, 1, r), rng.uniform(0, 2, r)
        w, p = rng.uniform(0.2, 3, r), float(10 ** rng.uniform(-1, 2))
        lam, _ = waterfill_theorem5([WaterfillMode(*m) for m in zip(rho, a, w)], r, p)
        prob = ModeProblem(rho, a, w, r, p)
        wf.append(prob.value(lam) - prob.value(projected_descent_modes(prob)))
    p = db_to_linear(20.0)
    no_gap, gn_gap, dom = [], [], []
    for i in range(n):
        ch = generate_channel(i, seed, Dims(2, 2, 2, 2))
        sol_no = solve_scheme(Scheme.NO, ch, p)
        f_or = projected_ascent("no", p, ch=ch)
        no_gap.append(sol_no.rs - rate_no_jamming(ch, f_or).rs)
        gn = optimize_gn_mimo(ch, p, p)
        gn_gap.append(gn.rs - random_search_gn(ch, p, p, samples=20000, seed=i)[0])
        dom.append(optimize_sit_cj_mimo(ch, p, p).rs - sol_no.rs)
    return {
        "waterfill minus oracle objective": (min(wf), max(wf)),
        "no-jamming minus ascent oracle": (min(no_gap), max(no_gap)),
        "gn minus random search": (min(gn_gap), max(gn_gap)),
        "sitcj minus no-jamming": (min(dom), max(dom)),
    }


def verify_sd(seed, n):
    rng = np.random.default_rng(seed)
    res, eta_lo, eta_hi = [], np.inf, -np.inf
    for _ in range(n):
        t = int(rng.integers(1, 7))
        qs = []
        for _ in range(2):
            k = int(rng.integers(1, t + 1))
            a = rng.standard_normal((t, k)) + 1j * rng.standard_normal((t, k))
            qs.append(a @ a.conj().T)
        sd = simultaneous_diagonalize(*qs)
        r = sd.rank
        d1 = np.zeros((t, t))
        d2 = np.zeros((t, t))
        d1[:r, :r] = np.diag(sd.eta)
        d2[:r, :r] = np.diag(1 - sd.eta)
        w = sd.w
        for q, dd in zip(qs, (d1, d2)):
            res.append(np.linalg.norm(w.conj().T @ q @ w - dd) / max(np.linalg.norm(dd), 1.0))
        if r:
            eta_lo, eta_hi = min(eta_lo, sd.eta.min()), max(eta_hi, sd.eta.max())
    return {"reconstruction residual": (min(res), max(res)), "eta range": (eta_lo, eta_hi)}


def cmd_verify(args, out):
    suites = {"simo": verify_simo, "mimo": verify_mimo, "sd": verify_sd}
    report = suites[args.suite](args.seed, args.n)
    for name, (lo, hi) in report.items():
        print(f"{name:<36} min={lo: .3e}  max={hi: .3e}", file=out)


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        {"sweep": cmd_sweep, "single": cmd_single, "verify": cmd_verify}[args.command](args, out)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0
