"""Exact power control when both users have a single transmit antenna.

Each solver returns the optimal transmit powers ``(f1, f2)`` inside the box
``[0, p1] x [0, p2]``. The secrecy rate is a ratio of one-dimensional
quadratic forms in this case, which reduces every problem to a handful of
candidate points.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import (
    ChannelRealization,
    rate_gn_jamming,
    rate_no_jamming,
    rate_sit_cj,
    secrecy_components,
)


@dataclass(frozen=True)
class SimoSolution:
    f1: float
    f2: float
    rs: float


@dataclass(frozen=True)
class QuadraticCoefficients:
    """Coefficients of the numerator ``a f2^2 + b f2 + c`` of the GN-jamming
    rate derivative at ``f1 = p1``, and the quadratic forms they come from."""

    a: float
    b: float
    c: float
    alpha2: float  # h2^H h2
    alpha2_hat: float  # h2^H (p1 h1 h1^H + I)^-1 h2
    beta2: float  # g2^H g2
    beta2_hat: float  # g2^H (p1 g1 g1^H + I)^-1 g2
    p0: Optional[float] = None

    @property
    def discriminant(self) -> float:
        return self.b * self.b - 4.0 * self.a * self.c


def _require_simo(ch):
    if not ch.is_simo:
        raise ValueError(f"single-antenna users required, got T1={ch.t1}, T2={ch.t2}")


def _vec(m):
    return m[:, 0]


def _sq(v):
    return float(np.real(np.vdot(v, v)))


def _inv_quad(u, p, v):
    """``u^H (p v v^H + I)^{-1} u`` via Sherman-Morrison."""
    uv = np.vdot(u, v)
    return _sq(u) - p * float(np.abs(uv) ** 2) / (1.0 + p * _sq(v))


def _check_box(p, name):
    if not np.isfinite(p) or p < 0:
        raise ValueError(f"{name} must be finite and nonnegative, got {p}")


def _sitcj_min(ch, f1, f2):
    sc = secrecy_components(ch, f1, f2)
    return min(sc.r_hat, sc.r_tilde)


def solve_no_jamming_simo(ch: ChannelRealization, p1: float) -> SimoSolution:
    """Full power if Bob's channel gain beats Eve's, otherwise silence."""
    if ch.t1 != 1:
        raise ValueError(f"user 1 must have one antenna, got T1={ch.t1}")
    _check_box(p1, "p1")
    f1 = float(p1) if _sq(_vec(ch.h1)) > _sq(_vec(ch.g1)) else 0.0
    return SimoSolution(f1, 0.0, rate_no_jamming(ch, f1).rs)


def quadratic_coefficients(ch: ChannelRealization, p1: float) -> QuadraticCoefficients:
    _require_simo(ch)
    h1, h2, g1, g2 = map(_vec, (ch.h1, ch.h2, ch.g1, ch.g2))
    al, al_h = _sq(h2), _inv_quad(h2, p1, h1)
    be, be_h = _sq(g2), _inv_quad(g2, p1, g1)
    a = (al_h - al) * be * be_h - (be_h - be) * al * al_h
    b = 2.0 * (al_h * be - al * be_h)
    c = al_h - al - be_h + be
    disc = b * b - 4.0 * a * c
    p0 = None
    if disc > 0 and a != 0:
        sq = np.sqrt(disc)
        # smaller root for a > 0, larger for a < 0; two algebraically equal
        # forms, pick the one without cancellation
        p0 = (-b - sq) / (2.0 * a) if b >= 0 else 2.0 * c / (-b + sq)
    return QuadraticCoefficients(a, b, c, al, al_h, be, be_h, p0)


def solve_gn_simo(ch: ChannelRealization, p1: float, p2: float) -> SimoSolution:
    """Optimal powers for Gaussian-noise jamming.

    User 1 always transmits at full power; the jamming power is the
    stationary point selected by the sign pattern of the derivative
    numerator, or the better box corner.
    """
    _require_simo(ch)
    _check_box(p1, "p1")
    _check_box(p2, "p2")
    q = quadratic_coefficients(ch, p1)
    a, b, c, p0 = q.a, q.b, q.c, q.p0

    def rate(f2):
        return rate_gn_jamming(ch, p1, f2).rs

    if a == 0 and b < 0 and 0 < -c / b < p2:
        candidates = [-c / b]
    elif a > 0 and p0 is not None and 0 < p0 < p2:
        candidates = [p0, p2]
    elif a < 0 and p0 is not None and 0 < p0 < p2:
        candidates = [0.0, p0]
    else:
        candidates = [0.0, p2]
    best_f2, best = None, -np.inf
    for f2 in sorted(candidates):
        r = rate(f2)
        if r > best:
            best_f2, best = float(f2), r
    return SimoSolution(float(p1), best_f2, best)


def _check_interval(lb, ub):
    if not (0 <= lb < ub):
        raise ValueError(f"need 0 <= p1_lb < p1_ub, got [{lb}, {ub}]")


def solve_subproblem_hat(ch: ChannelRealization, p1_lb, p1_ub, p2):
    """Maximise the rate bound with Eve treating user 2 as noise over
    ``[p1_lb, p1_ub] x [0, p2]``. Returns ``(f1, f2)``."""
    _require_simo(ch)
    _check_interval(p1_lb, p1_ub)
    h1, g1, g2 = _vec(ch.h1), _vec(ch.g1), _vec(ch.g2)
    f1 = p1_ub if _sq(h1) > _inv_quad(g1, p2, g2) else p1_lb
    return float(f1), float(p2)


def solve_subproblem_tilde(ch: ChannelRealization, p1_lb, p1_ub, p2):
    """Maximise the joint-decoding rate bound by checking the four box
    corners. Ties go to larger ``f1`` then smaller ``f2``."""
    _require_simo(ch)
    _check_interval(p1_lb, p1_ub)
    best, best_val = None, -np.inf
    for f1 in (p1_ub, p1_lb):
        for f2 in (0.0, p2):
            v = secrecy_components(ch, f1, f2).r_tilde
            if v > best_val:
                best, best_val = (float(f1), float(f2)), v
    return best


def breakpoint_p0_prime(ch: ChannelRealization) -> Optional[float]:
    """Power ``P0'`` of user 1 at which ``h2^H (P0' h1 h1^H + I)^-1 h2``
    equals ``g2^H g2``.

    Uses the eigenbasis of ``h1 h1^H`` with the ``h1``-aligned vector last.
    Returns None when the equation has no positive solution.
    """
    _require_simo(ch)
    h1, h2, g2 = _vec(ch.h1), _vec(ch.h2), _vec(ch.g2)
    n1 = _sq(h1)
    if n1 <= 0:
        return None
    _, v = np.linalg.eigh(np.outer(h1, h1.conj()))  # ascending: h1 direction last
    h2_rot = v.conj().T @ h2
    rest = float(np.sum(np.abs(h2_rot[:-1]) ** 2))
    denom = _sq(g2) - rest
    if denom <= 0:
        return None
    p0 = float(np.abs(h2_rot[-1]) ** 2 / (n1 * denom) - 1.0 / n1)
    return p0 if p0 > 0 else None


def sitcj_case(ch: ChannelRealization, p1: float) -> int:
    """Which of the three regimes applies (1, 2 or 3).

    1: the noise-treating bound is the smaller one for every ``f1``.
    2: the joint-decoding bound is the smaller one for every ``f1``.
    3: they cross at ``P0'`` inside ``(0, p1)``.
    Boundary equalities go to the lower-numbered case.
    """
    _require_simo(ch)
    h1, h2, g2 = _vec(ch.h1), _vec(ch.h2), _vec(ch.g2)
    beta2 = _sq(g2)
    if beta2 <= _inv_quad(h2, p1, h1):
        return 1
    if beta2 >= _sq(h2):
        return 2
    return 3


def solve_sit_cj_simo(ch: ChannelRealization, p1: float, p2: float) -> SimoSolution:
    """Optimal powers for simultaneous information transmission and
    cooperative jamming."""
    _require_simo(ch)
    _check_box(p1, "p1")
    _check_box(p2, "p2")

    candidates = []
    if p1 > 0:
        case = sitcj_case(ch, p1)
        if case == 1:
            candidates.append(solve_subproblem_hat(ch, 0.0, p1, p2))
        elif case == 2:
            candidates.append(solve_subproblem_tilde(ch, 0.0, p1, p2))
        else:
            p0p = breakpoint_p0_prime(ch)
            if p0p is not None and 0 < p0p < p1:
                candidates.append(solve_subproblem_hat(ch, 0.0, p0p, p2))
                candidates.append(solve_subproblem_tilde(ch, p0p, p1, p2))
            else:
                # floating point pushed P0' outside (0, p1)
                candidates.append(solve_subproblem_hat(ch, 0.0, p1, p2))
                candidates.append(solve_subproblem_tilde(ch, 0.0, p1, p2))

    best, best_val = (0.0, 0.0), 0.0
    for f1, f2 in candidates:
        v = _sitcj_min(ch, f1, f2)
        if v > best_val:
            best, best_val = (f1, f2), v
    no = solve_no_jamming_simo(ch, p1)
    if no.rs > best_val:
        # the no-jamming bound ignores f2, so user 2 sends open data at full power
        best = (no.f1, float(p2))
    f1, f2 = best
    return SimoSolution(f1, f2, rate_sit_cj(ch, f1, f2).rs)
