"""Low-complexity precoder design for multi-antenna users.

Every covariance update is reduced to a separable per-mode power
allocation by simultaneously diagonalising the two Gram matrices that
appear in its objective:

* :func:`sdlc1_maximize` solves ``max log|Hb F Hb^H + I| - log|Ge F Ge^H + I|``
  restricted to ``F = W diag(lam) W^H``.
* :func:`sdlc2_step` performs one convexified (DC) update of the jammer
  covariance for Gaussian-noise jamming, with the per-mode problem solved
  in closed form by :func:`waterfill_theorem5`.

The multi-antenna problems are non-convex; the solvers are heuristics with
fixed iteration counts.
"""

import enum
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .channel import (
    ChannelRealization,
    InputCovariance,
    _cov,
    rate_gn_jamming,
    rate_no_jamming,
    mutual_information,
    rate_sit_cj,
    secrecy_components,
)
from .errors import ConvergenceError
from .simdiag import inverse_sqrt_psd, simultaneous_diagonalize

# rho closer than this to 0 or 1 uses the single-log branch
_RHO_EDGE = 1e-12


@dataclass(frozen=True)
class SolverBudget:
    """Iteration counts and bisection settings.

    ``l1`` outer and ``l2`` inner iterations of the GN-jamming alternation;
    ``alt_iters`` alternation rounds for each SIT-CJ bound.
    """

    l1: int = 5
    l2: int = 50
    alt_iters: int = 5
    bisect_tol: float = 1e-9
    bisect_max: int = 200

    def __post_init__(self):
        for name in ("l1", "l2", "alt_iters", "bisect_max"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if not self.bisect_tol > 0:
            raise ValueError("bisect_tol must be positive")


class Candidate(str, enum.Enum):
    HAT = "hat"
    TILDE = "tilde"
    BAR = "bar"


@dataclass(frozen=True)
class MimoSolution:
    f1: InputCovariance
    f2: InputCovariance
    rs: float
    candidate: Optional[Candidate] = None
    # SIT-CJ only: min of the best noise-treating and joint-decoding bounds
    # over all evaluated points
    upper_bound: Optional[float] = None


@dataclass(frozen=True)
class WaterfillMode:
    """One simultaneously-diagonalised mode of the jammer problem.

    ``rho``: gain of the whitened Bob channel on this mode (``1 - rho`` is
    Eve's). ``a``: linear cost from the linearised terms. ``u_norm_sq``:
    power cost of unit mode power.
    """

    rho: float
    a: float
    u_norm_sq: float

    def __post_init__(self):
        object.__setattr__(self, "rho", float(np.clip(self.rho, 0.0, 1.0)))
        if not self.u_norm_sq > 0:
            raise ValueError("u_norm_sq must be positive")


def _mode_power(mode: WaterfillMode, beta):
    c = mode.a + beta * mode.u_norm_sq
    if c <= 0:
        return np.inf
    rho = mode.rho
    if rho < _RHO_EDGE or rho > 1.0 - _RHO_EDGE:
        return max(1.0 / c - 1.0, 0.0)
    k = rho * (1.0 - rho)
    lin = c - 2.0 * k
    sq = np.sqrt(c * c * (2.0 * rho - 1.0) ** 2 + 4.0 * k * k)
    # positive root of c k lam^2 + (c - 2k) lam + (c - 1) = 0
    lam = (sq - lin) / (2.0 * c * k) if lin < 0 else 2.0 * (1.0 - c) / (lin + sq)
    return max(lam, 0.0)


def _bisect_budget(demand, p, tol, max_iter):
    """Smallest ``beta >= 0`` with ``demand(beta) <= p`` for a nonincreasing
    ``demand``."""
    if demand(0.0) <= p:
        return 0.0
    lo, hi = 0.0, 1.0
    doublings = 0
    while demand(hi) > p:
        lo, hi = hi, 2.0 * hi
        doublings += 1
        if doublings > max_iter:
            raise ConvergenceError(f"no upper bracket for beta: demand still above {p} at beta={hi:g}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if demand(mid) > p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
        if p - demand(hi) <= tol * p:
            break
    return hi


def waterfill_theorem5(modes: Sequence[WaterfillMode], t2: int, p2: float,
                       bisect_tol=1e-9, bisect_max=200):
    """Optimal mode powers of the convexified jammer problem.

    Minimises ``sum_t [-ln(rho_t lam_t + 1) - ln((1 - rho_t) lam_t + 1) + a_t lam_t]``
    subject to ``lam >= 0`` and ``sum_t u_norm_sq_t lam_t <= p2``.

    Parameters
    ----------
    modes : sequence of WaterfillMode
        The active modes (range of the two Gram matrices).
    t2 : int
        Total number of modes; the ``t2 - len(modes)`` inactive ones get zero.
    p2 : float
        Power budget.

    Returns
    -------
    lam : ndarray, shape (t2,)
    beta : float
        Lagrange multiplier of the power constraint.
    """
    if p2 < 0:
        raise ValueError("p2 must be nonnegative")
    if len(modes) > t2:
        raise ValueError("more active modes than t2")
    lam = np.zeros(t2)
    if p2 == 0 or not modes:
        return lam, 0.0

    def powers(beta):
        return np.array([_mode_power(m, beta) for m in modes])

    u = np.array([m.u_norm_sq for m in modes])

    def demand(beta):
        return float(u @ powers(beta))

    beta = _bisect_budget(demand, p2, bisect_tol, bisect_max)
    lam[: len(modes)] = powers(beta)
    return lam, beta


def _sdlc1_mode_power(eta, w, beta):
    if eta <= 0.5:
        return 0.0
    if beta <= 0:
        return np.inf
    c = beta * w
    q = (2.0 * eta - 1.0) / c - 1.0
    if q <= 0:
        return 0.0
    k = eta * (1.0 - eta)
    # nonnegative root of k lam^2 + lam - q = 0
    return 2.0 * q / (1.0 + np.sqrt(1.0 + 4.0 * k * q))


def _finish(w, lam, p):
    f = (w * lam) @ w.conj().T
    f = 0.5 * (f + f.conj().T)
    tr = float(np.real(np.trace(f)))
    if tr > p > 0:
        f *= p / tr
    return InputCovariance(f, p)


def sdlc1_maximize(hb, ge, p, budget: Optional[SolverBudget] = None) -> InputCovariance:
    """Secrecy-type covariance update by simultaneous diagonalisation.

    Maximises ``log|hb F hb^H + I| - log|ge F ge^H + I|`` over
    ``F = W diag(lam) W^H``, ``tr F <= p``, where ``W`` jointly diagonalises
    ``hb^H hb`` and ``ge^H ge``. Modes where Bob's share ``eta`` is at most
    one half get no power; the others receive the stationary power for a
    common multiplier found by bisection.
    """
    budget = budget or SolverBudget()
    hb = np.asarray(hb, dtype=complex)
    ge = np.asarray(ge, dtype=complex)
    if hb.shape[1] != ge.shape[1]:
        raise ValueError("hb and ge must have the same number of columns")
    t = hb.shape[1]
    if p < 0:
        raise ValueError("p must be nonnegative")
    sd = simultaneous_diagonalize(hb.conj().T @ hb, ge.conj().T @ ge)
    lam = np.zeros(t)
    if p == 0 or sd.rank == 0 or not np.any(sd.eta > 0.5):
        return InputCovariance(np.zeros((t, t), dtype=complex), p)
    r = sd.rank
    wn = sd.column_norms_sq[:r]
    eta = sd.eta

    def powers(beta):
        return np.array([_sdlc1_mode_power(eta[i], wn[i], beta) for i in range(r)])

    beta = _bisect_budget(lambda b: float(wn @ powers(b)), p, budget.bisect_tol, budget.bisect_max)
    lam[:r] = powers(beta)
    return _finish(sd.w, lam, p)


def _whitener(x):
    return inverse_sqrt_psd(x)


def _gram(h, f):
    return h @ f @ h.conj().T


def _sdlc2_terms(ch, f1, f2_prev):
    """Whitened jammer channels and linearisation matrix at ``f2_prev``."""
    ib, ie = np.eye(ch.b), np.eye(ch.e)
    h2_hat = _whitener(_gram(ch.h1, f1) + ib) @ ch.h2
    g2_hat = _whitener(_gram(ch.g1, f1) + ie) @ ch.g2
    a1 = ch.h2.conj().T @ np.linalg.solve(_gram(ch.h2, f2_prev) + ib, ch.h2)
    a2 = g2_hat.conj().T @ np.linalg.solve(_gram(g2_hat, f2_prev) + ie, g2_hat)
    a = a1 + a2
    return h2_hat, 0.5 * (a + a.conj().T)


def sdlc2_surrogate(ch: ChannelRealization, f1, f2_prev, f2) -> float:
    """Convexified jammer objective (natural log, to be minimised) built at
    ``f2_prev`` and evaluated at ``f2``."""
    f1 = _cov(f1, ch.t1, "f1")
    f2_prev = _cov(f2_prev, ch.t2, "f2_prev")
    f2 = _cov(f2, ch.t2, "f2")
    h2_hat, a = _sdlc2_terms(ch, f1, f2_prev)
    ld_b = np.linalg.slogdet(_gram(h2_hat, f2) + np.eye(ch.b))[1]
    ld_e = np.linalg.slogdet(_gram(ch.g2, f2) + np.eye(ch.e))[1]
    return float(-ld_b - ld_e + np.real(np.trace(a @ f2)))


def sdlc2_step(ch: ChannelRealization, f1, f2_prev, p2: float,
               budget: Optional[SolverBudget] = None) -> InputCovariance:
    """One convexified update of the Gaussian-noise jammer covariance.

    The subtracted concave log-det terms are linearised at ``f2_prev``; the
    remaining convex problem is solved on the modes that jointly
    diagonalise the whitened Bob Gram matrix and Eve's Gram matrix.
    """
    budget = budget or SolverBudget()
    f1 = _cov(f1, ch.t1, "f1")
    f2_prev = _cov(f2_prev, ch.t2, "f2_prev")
    if p2 < 0:
        raise ValueError("p2 must be nonnegative")
    t2 = ch.t2
    if p2 == 0:
        return InputCovariance.zeros(t2, p2)
    h2_hat, a = _sdlc2_terms(ch, f1, f2_prev)
    sd = simultaneous_diagonalize(h2_hat.conj().T @ h2_hat, ch.g2.conj().T @ ch.g2)
    u = sd.w
    a_diag = np.real(np.einsum("ij,jk,ki->i", u.conj().T, a, u))
    un = sd.column_norms_sq
    modes = [WaterfillMode(sd.eta[i], a_diag[i], un[i]) for i in range(sd.rank)]
    lam, _ = waterfill_theorem5(modes, t2, p2, budget.bisect_tol, budget.bisect_max)
    # no descent guard: f2_prev need not lie in span(u), so the restricted
    # minimiser can score worse on the surrogate than f2_prev itself
    return _finish(u, lam, p2)


def optimize_no_mimo(ch: ChannelRealization, p1: float,
                     budget: Optional[SolverBudget] = None) -> MimoSolution:
    f1 = sdlc1_maximize(ch.h1, ch.g1, p1, budget)
    f2 = InputCovariance.zeros(ch.t2)
    return MimoSolution(f1, f2, rate_no_jamming(ch, f1).rs, Candidate.BAR)


def optimize_gn_mimo(ch: ChannelRealization, p1: float, p2: float,
                     budget: Optional[SolverBudget] = None) -> MimoSolution:
    """Alternate covariance updates of user 1 and the noise jammer.

    Each outer round updates ``F1`` once against the current jamming and
    then runs ``l2`` convexified jammer updates. The best iterate by the
    exact GN-jamming rate is returned.
    """
    budget = budget or SolverBudget()
    ib, ie = np.eye(ch.b), np.eye(ch.e)
    f1 = InputCovariance.uniform(ch.t1, p1).f
    f2 = InputCovariance.uniform(ch.t2, p2).f
    best = (rate_gn_jamming(ch, f1, f2).rs, f1, f2)
    for _ in range(budget.l1):
        c2 = _gram(ch.h2, f2) + ib
        d2 = _gram(ch.g2, f2) + ie
        f1 = sdlc1_maximize(_whitener(c2) @ ch.h1, _whitener(d2) @ ch.g1, p1, budget).f
        rs = rate_gn_jamming(ch, f1, f2).rs
        if rs > best[0]:
            best = (rs, f1, f2)
        for _ in range(budget.l2):
            f2 = sdlc2_step(ch, f1, f2, p2, budget).f
            rs = rate_gn_jamming(ch, f1, f2).rs
            if rs > best[0]:
                best = (rs, f1, f2)
    rs, f1, f2 = best
    return MimoSolution(InputCovariance(f1, p1), InputCovariance(f2, p2), rs)


def _alternate(ch, p1, p2, budget, update_f1, update_f2):
    f1 = InputCovariance.uniform(ch.t1, p1).f
    f2 = InputCovariance.uniform(ch.t2, p2).f
    points = []
    for _ in range(budget.alt_iters):
        f1 = update_f1(f1, f2)
        points.append((f1, f2))
        f2 = update_f2(f1, f2)
        points.append((f1, f2))
    return points


def _bound_gap(ch, f1, f2):
    """Noise-treating minus joint-decoding bound, without clamping."""
    mi = mutual_information(ch, f1, f2)
    return (mi.bob_1_given_2 - mi.eve_1) - (mi.bob_joint - mi.eve_joint)


def balance_power(ch: ChannelRealization, f1, f2, iters=60):
    """Scale ``f1`` down to where the two SIT-CJ bounds coincide.

    The gap between the noise-treating and joint-decoding bounds grows with
    the scaling of ``f1``; if it changes sign on ``(0, 1]`` the crossing is
    located by bisection and ``s * f1`` returned, otherwise None.
    """
    if _bound_gap(ch, f1, f2) <= 0 or _bound_gap(ch, 0.0 * f1, f2) >= 0:
        return None
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _bound_gap(ch, mid * f1, f2) > 0:
            hi = mid
        else:
            lo = mid
    return lo * f1


def optimize_sit_cj_mimo(ch: ChannelRealization, p1: float, p2: float,
                         budget: Optional[SolverBudget] = None) -> MimoSolution:
    """Maximise the SIT-CJ secrecy rate through three tractable bounds.

    Candidates come from (i) the no-jamming solution with a silent user 2,
    (ii) alternating maximisation of the bound where Eve treats user 2 as
    noise, and (iii) alternating maximisation of the joint-decoding bound.
    Every point visited, plus power-balanced versions of the last iterates
    and of the best point, is scored by the exact SIT-CJ rate and the best
    one is returned.
    """
    budget = budget or SolverBudget()
    ib, ie = np.eye(ch.b), np.eye(ch.e)
    h1, h2, g1, g2 = ch.h1, ch.h2, ch.g1, ch.g2

    def hat_f1(f1, f2):
        return sdlc1_maximize(h1, _whitener(_gram(g2, f2) + ie) @ g1, p1, budget).f

    def hat_f2(f1, f2):
        return sdlc1_maximize(g2, _whitener(_gram(g1, f1) + ie) @ g2, p2, budget).f

    def tilde_f1(f1, f2):
        c2 = _gram(h2, f2) + ib
        d2 = _gram(g2, f2) + ie
        return sdlc1_maximize(_whitener(c2) @ h1, _whitener(d2) @ g1, p1, budget).f

    def tilde_f2(f1, f2):
        c1 = _gram(h1, f1) + ib
        d1 = _gram(g1, f1) + ie
        return sdlc1_maximize(_whitener(c1) @ h2, _whitener(d1) @ g2, p2, budget).f

    bar_f1 = sdlc1_maximize(h1, g1, p1, budget).f
    zero2 = np.zeros((ch.t2, ch.t2), dtype=complex)
    pool: List[tuple] = [(Candidate.BAR, bar_f1, zero2)]
    for label, up1, up2 in ((Candidate.HAT, hat_f1, hat_f2), (Candidate.TILDE, tilde_f1, tilde_f2)):
        points = _alternate(ch, p1, p2, budget, up1, up2)
        for f1, f2 in points:
            pool.append((label, f1, f2))
            # a silent jammer turns both bounds into the no-jamming rate
            pool.append((label, f1, zero2))
        f1, f2 = points[-1]
        f1b = balance_power(ch, f1, f2)
        if f1b is not None:
            pool.append((label, f1b, f2))

    best_hat = best_tilde = 0.0
    best = None

    def score(label, f1, f2):
        nonlocal best_hat, best_tilde, best
        sc = secrecy_components(ch, f1, f2)
        # r_bar is the value of both bounds at (f1, 0)
        best_hat = max(best_hat, sc.r_hat, sc.r_bar)
        best_tilde = max(best_tilde, sc.r_tilde, sc.r_bar)
        rs = sc.sit_cj
        if best is None or rs > best[0]:
            best = (rs, label, f1, f2)

    for point in pool:
        score(*point)
    _, label, f1, f2 = best
    f1b = balance_power(ch, f1, f2)
    if f1b is not None:
        score(label, f1b, f2)
    rs, label, f1, f2 = best
    if p2 > 0 and not np.any(f2):
        # r_bar does not depend on F2: let user 2 fill Bob's channel with open data
        f2_open = sdlc1_maximize(_whitener(_gram(h1, f1) + ib) @ h2, np.zeros((1, ch.t2)), p2, budget).f
        sc = secrecy_components(ch, f1, f2_open)
        best_hat = max(best_hat, sc.r_hat)
        best_tilde = max(best_tilde, sc.r_tilde)
        if sc.sit_cj >= rs:
            f2 = f2_open
    f1c, f2c = InputCovariance(f1, p1), InputCovariance(f2, p2)
    return MimoSolution(f1c, f2c, rate_sit_cj(ch, f1c, f2c).rs, label, min(best_hat, best_tilde))
