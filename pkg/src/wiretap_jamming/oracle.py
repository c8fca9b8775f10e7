"""Brute-force reference solvers.

Nothing here is used by the solvers themselves; these routines exist to
check them. They favour transparency over speed: exhaustive grids for the
single-antenna problems, random search and projected gradient ascent for
the multi-antenna ones, and a cofactor-expansion determinant.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .channel import ChannelRealization, Scheme
from .errors import ConvergenceError

LN2 = np.log(2.0)


# ---------------------------------------------------------------------------
# determinants


def det_cofactor(m):
    """Determinant by Laplace expansion along the first row.

    Exponential cost; only meant for matrices up to about 6x6.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return m[0, 0]
    if n == 2:
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    total = 0j
    for j in range(n):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        total += (-1) ** j * m[0, j] * det_cofactor(minor)
    return total


# ---------------------------------------------------------------------------
# single-antenna rates in scalar form


@dataclass(frozen=True)
class _SimoGains:
    n1: float  # |h1|^2
    n2: float  # |h2|^2
    x: float  # |h1^H h2|^2
    m1: float  # |g1|^2
    m2: float  # |g2|^2
    y: float  # |g1^H g2|^2

    @classmethod
    def of(cls, ch):
        h1, h2, g1, g2 = (v[:, 0] for v in (ch.h1, ch.h2, ch.g1, ch.g2))
        return cls(
            float(np.sum(np.abs(h1) ** 2)),
            float(np.sum(np.abs(h2) ** 2)),
            float(np.abs(np.vdot(h1, h2)) ** 2),
            float(np.sum(np.abs(g1) ** 2)),
            float(np.sum(np.abs(g2) ** 2)),
            float(np.abs(np.vdot(g1, g2)) ** 2),
        )


def simo_rate_grid(scheme, ch: ChannelRealization, f1, f2):
    """Secrecy rate of ``scheme`` at broadcast arrays of powers ``f1, f2``.

    Uses closed-form 2x2 Gram determinants of the rank-two received
    covariances rather than general log-determinants.
    """
    if not ch.is_simo:
        raise ValueError("simo_rate_grid needs single-antenna users")
    s = _SimoGains.of(ch)
    f1 = np.asarray(f1, dtype=float)
    f2 = np.asarray(f2, dtype=float)
    bob1 = np.log2(1 + f1 * s.n1)
    eve1 = np.log2(1 + f1 * s.m1)
    bob2 = np.log2(1 + f2 * s.n2)
    eve2 = np.log2(1 + f2 * s.m2)
    bob12 = np.log2((1 + f1 * s.n1) * (1 + f2 * s.n2) - f1 * f2 * s.x)
    eve12 = np.log2((1 + f1 * s.m1) * (1 + f2 * s.m2) - f1 * f2 * s.y)
    scheme = Scheme(scheme)
    if scheme is Scheme.NO:
        return np.maximum(bob1 - eve1, 0.0)
    if scheme is Scheme.GN:
        return np.maximum((bob12 - bob2) - (eve12 - eve2), 0.0)
    r_hat = np.maximum(bob1 - (eve12 - eve2), 0.0)
    r_tilde = np.maximum(bob12 - eve12, 0.0)
    r_bar = np.maximum(bob1 - eve1, 0.0)
    return np.maximum(np.minimum(r_hat, r_tilde), r_bar)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid with ``steps`` nodes on every axis (endpoints included)."""

    steps: int
    axes: Sequence = field(default_factory=tuple)

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("steps must be >= 2")
        for lo, hi in self.axes:
            if lo > hi:
                raise ValueError(f"empty axis [{lo}, {hi}]")

    def nodes(self, axis, extra=()):
        lo, hi = self.axes[axis]
        pts = np.linspace(lo, hi, self.steps)
        extra = [float(v) for v in extra if v is not None and lo <= v <= hi]
        return np.unique(np.concatenate([pts, extra, [lo, hi]]))


def grid_search_simo(objective, ch: ChannelRealization, p1, p2, spec: Optional[GridSpec] = None,
                     extra_f1=(), extra_f2=()):
    """Exhaustive grid maximisation of a single-antenna secrecy rate.

    Parameters
    ----------
    objective : Scheme or str
        Rate to maximise. For ``Scheme.NO`` only the ``f1`` axis is scanned.
    spec : GridSpec, optional
        Defaults to 301 nodes on ``[0, p1] x [0, p2]``.
    extra_f1, extra_f2 : sequence of float
        Additional nodes (analytic breakpoints) added to each axis.

    Returns
    -------
    (f1, f2, value)
        Maximiser with ties broken toward the lexicographically smallest
        ``(f1, f2)``.
    """
    if not ch.is_simo:
        raise ValueError(f"grid search needs T1 = T2 = 1, got T1={ch.t1}, T2={ch.t2}")
    if spec is None:
        spec = GridSpec(301, ((0.0, p1), (0.0, p2)))
    objective = Scheme(objective)
    f1s = spec.nodes(0, extra_f1)
    if objective is Scheme.NO:
        f2s = np.array([0.0])
    else:
        f2s = spec.nodes(1, extra_f2)
    vals = simo_rate_grid(objective, ch, f1s[:, None], f2s[None, :])
    k = int(np.argmax(vals))  # first maximum in row-major order
    i, j = divmod(k, vals.shape[1])
    return float(f1s[i]), float(f2s[j]), float(vals[i, j])


# ---------------------------------------------------------------------------
# log-det objectives and projected gradient ascent


@dataclass
class LogDetObjective:
    """``sum_k sign_k * log2 |A_k F A_k^H + N_k|`` as a function of one
    covariance ``F``.

    ``terms`` is a list of ``(sign, A, N)``; ``N`` must be positive definite.
    """

    terms: list

    @property
    def dim(self) -> int:
        return self.terms[0][1].shape[1]

    def value(self, f):
        total = 0.0
        for sign, a, n in self.terms:
            total += sign * np.linalg.slogdet(a @ f @ a.conj().T + n)[1]
        return total / LN2

    def gradient(self, f):
        """Hermitian gradient ``G`` with ``d value = Re tr(G dF)``."""
        g = np.zeros((self.dim, self.dim), dtype=complex)
        for sign, a, n in self.terms:
            m = a @ f @ a.conj().T + n
            g += sign * a.conj().T @ np.linalg.solve(m, a)
        g = 0.5 * (g + g.conj().T) / LN2
        if not np.all(np.isfinite(g)):
            raise ConvergenceError("non-finite gradient")
        return g


def make_objective(objective_id, ch: ChannelRealization, f_other=None) -> LogDetObjective:
    """Build one of the standard objectives on ``ch``.

    ``"capacity"``: Bob's rate of user 1, ``log|H1 F H1^H + I|``.
    ``"no"``: no-jamming secrecy rate in ``F1``.
    ``"gn_f1"`` / ``"gn_f2"``: GN-jamming secrecy rate in ``F1`` (resp. ``F2``)
    with the other user's covariance ``f_other`` held fixed. These two
    differ from the rate by an additive constant.
    """
    ib, ie = np.eye(ch.b), np.eye(ch.e)
    h1, h2, g1, g2 = ch.h1, ch.h2, ch.g1, ch.g2
    if objective_id == "capacity":
        return LogDetObjective([(1.0, h1, ib)])
    if objective_id == "no":
        return LogDetObjective([(1.0, h1, ib), (-1.0, g1, ie)])
    if f_other is None:
        raise ValueError(f"{objective_id!r} needs the other user's covariance")
    f_other = np.asarray(f_other, dtype=complex)
    if objective_id == "gn_f1":
        c2 = h2 @ f_other @ h2.conj().T + ib
        d2 = g2 @ f_other @ g2.conj().T + ie
        return LogDetObjective([(1.0, h1, c2), (-1.0, g1, d2)])
    if objective_id == "gn_f2":
        c1 = h1 @ f_other @ h1.conj().T
        d1 = g1 @ f_other @ g1.conj().T
        return LogDetObjective([
            (1.0, h2, c1 + ib), (-1.0, h2, ib), (-1.0, g2, d1 + ie), (1.0, g2, ie),
        ])
    raise ValueError(f"unknown objective {objective_id!r}")


def project_psd_trace(f, p):
    """Euclidean projection onto ``{F >= 0, tr F <= p}``.

    Eigenvalues are clipped at zero; if their sum still exceeds ``p`` they
    are shifted down by a common level (and clipped again) so the trace is
    exactly ``p``.
    """
    f = 0.5 * (f + f.conj().T)
    vals, vecs = np.linalg.eigh(f)
    lam = project_capped_simplex(vals, np.ones_like(vals), p)
    return (vecs * lam) @ vecs.conj().T


def project_capped_simplex(x, w, p):
    """Euclidean projection of ``x`` onto ``{lam >= 0, w . lam <= p}``."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    lam = np.maximum(x, 0.0)
    if w @ lam <= p:
        return lam
    lo, hi = 0.0, max(float(np.max(x / np.where(w > 0, w, np.inf))), 0.0) + 1.0
    for _ in range(200):
        mu = 0.5 * (lo + hi)
        if w @ np.maximum(x - mu * w, 0.0) > p:
            lo = mu
        else:
            hi = mu
        if hi - lo <= 1e-16 * max(hi, 1.0):
            break
    return np.maximum(x - hi * w, 0.0)


def _ascend(value, grad, project, x, steps, step_size, tol):
    v = value(x)
    step = step_size
    for _ in range(steps):
        g = grad(x)
        while True:
            cand = project(x + step * g)
            vc = value(cand)
            if vc >= v - 1e-15 * max(abs(v), 1.0):
                break
            step *= 0.5
            if step < 1e-300:
                return x
        moved = np.linalg.norm(cand - x)
        x, v = cand, vc
        if moved <= tol * max(np.linalg.norm(x), 1.0):
            break
    return x


def projected_ascent(objective, p, steps=20000, step_size=1.0, ch=None, f0=None,
                     f_other=None, tol=1e-13):
    """Maximise a log-det objective over ``{F >= 0, tr F <= p}``.

    Parameters
    ----------
    objective : LogDetObjective or str
        Objective, or an id understood by :func:`make_objective` (then
        ``ch`` is required).
    p : float
        Trace budget, must be positive.
    steps : int
        Maximum number of gradient steps.
    step_size : float
        Initial step; halved whenever a step would lower the objective.
    f0 : ndarray, optional
        Starting point, defaults to ``(p / T) I``.

    Returns
    -------
    ndarray
        Final iterate.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    if isinstance(objective, str):
        if ch is None:
            raise ValueError("ch is required with an objective id")
        objective = make_objective(objective, ch, f_other)
    t = objective.dim
    f = np.eye(t, dtype=complex) * (p / t) if f0 is None else np.asarray(f0, dtype=complex)
    return _ascend(objective.value, objective.gradient, lambda x: project_psd_trace(x, p),
                   project_psd_trace(f, p), steps, step_size, tol)


def finite_difference_check(objective: LogDetObjective, f, direction, h=1e-6):
    """Return (analytic, central-difference) directional derivatives."""
    analytic = float(np.real(np.trace(objective.gradient(f) @ direction)))
    numeric = (objective.value(f + h * direction) - objective.value(f - h * direction)) / (2 * h)
    return analytic, float(numeric)


# ---------------------------------------------------------------------------
# per-mode convex problem solved by water-filling


@dataclass
class ModeProblem:
    """Separable problem over nonnegative mode powers ``lam``::

        minimise  sum_{t<r} [-ln(rho_t lam_t + 1) - ln((1 - rho_t) lam_t + 1)]
                  + sum_t a_t lam_t
        s.t.      sum_t w_t lam_t <= p

    ``rank`` leading modes carry the log terms; the rest are linear.
    """

    rho: np.ndarray
    a: np.ndarray
    w: np.ndarray
    rank: int
    p: float

    def value(self, lam):
        r = self.rank
        rho, lr = self.rho[:r], lam[:r]
        logs = -np.log(rho * lr + 1) - np.log((1 - rho) * lr + 1)
        return float(np.sum(logs) + self.a @ lam)

    def gradient(self, lam):
        r = self.rank
        g = np.array(self.a, dtype=float)
        rho, lr = self.rho[:r], lam[:r]
        g[:r] += -rho / (rho * lr + 1) - (1 - rho) / ((1 - rho) * lr + 1)
        return g


def projected_descent_modes(problem: ModeProblem, steps=200000, step_size=1.0, tol=1e-14):
    """Minimise a :class:`ModeProblem` by projected gradient descent."""
    t = len(problem.a)
    w = np.asarray(problem.w, dtype=float)
    x0 = np.full(t, problem.p / max(w.sum(), 1e-300))
    lam = _ascend(
        lambda x: -problem.value(x),
        lambda x: -problem.gradient(x),
        lambda x: project_capped_simplex(x, w, problem.p),
        project_capped_simplex(x0, w, problem.p),
        steps,
        step_size,
        tol,
    )
    return lam


# ---------------------------------------------------------------------------
# random search for GN jamming with several antennas


def _random_psd(rng, n, t, p):
    a = rng.standard_normal((n, t, t)) + 1j * rng.standard_normal((n, t, t))
    f = a @ np.conj(np.swapaxes(a, 1, 2))
    tr = np.real(np.trace(f, axis1=1, axis2=2))
    scale = p * rng.uniform(0.0, 1.0, n) ** 0.25 / tr
    # half of the samples at full power: budgets are usually active
    full = rng.uniform(size=n) < 0.5
    scale[full] = p / tr[full]
    return f * scale[:, None, None]


def random_search_gn(ch: ChannelRealization, p1, p2, samples=10**6, seed=0, chunk=50000):
    """Best GN-jamming secrecy rate over random feasible covariance pairs.

    Returns ``(rs, f1, f2)``.
    """
    rng = np.random.default_rng(seed)
    ib, ie = np.eye(ch.b), np.eye(ch.e)
    best, best_pair = 0.0, (np.zeros((ch.t1, ch.t1)), np.zeros((ch.t2, ch.t2)))
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        f1 = _random_psd(rng, n, ch.t1, p1)
        f2 = _random_psd(rng, n, ch.t2, p2) if p2 > 0 else np.zeros((n, ch.t2, ch.t2))
        c2 = ch.h2 @ f2 @ np.conj(ch.h2.T) + ib
        d2 = ch.g2 @ f2 @ np.conj(ch.g2.T) + ie
        bob = np.linalg.slogdet(ch.h1 @ f1 @ np.conj(ch.h1.T) + c2)[1] - np.linalg.slogdet(c2)[1]
        eve = np.linalg.slogdet(ch.g1 @ f1 @ np.conj(ch.g1.T) + d2)[1] - np.linalg.slogdet(d2)[1]
        rs = (bob - eve) / LN2
        k = int(np.argmax(rs))
        if rs[k] > best:
            best, best_pair = float(rs[k]), (f1[k], f2[k])
        done += n
    return best, best_pair[0], best_pair[1]
