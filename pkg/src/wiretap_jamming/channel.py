"""Two-user Gaussian vector wiretap channel and its achievable rates.

User 1 carries a confidential message (plus an optional open one) to Bob,
user 2 only sends open messages and can help user 1 by jamming Eve.
Noise at Bob and Eve is unit-variance white, so every channel matrix is
already normalised by the noise standard deviation.

All public rates are in bits per channel use.
"""

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

import numpy as np

from .errors import DomainError

LN2 = np.log(2.0)

# Entry tolerances for covariance validation.
HERMITIAN_RTOL = 1e-10
PSD_RTOL = 1e-10
TRACE_RTOL = 1e-9
# Slack used when testing rate tuples against region inequalities.
REGION_SLACK = 1e-9


class Scheme(str, enum.Enum):
    """Role played by user 2."""

    NO = "no"  # user 2 silent
    GN = "gn"  # user 2 sends Gaussian noise
    SITCJ = "sitcj"  # user 2 sends open codewords that also jam Eve

    def __str__(self):
        return self.value


def _as_complex_matrix(x, name):
    a = np.asarray(x, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a.reshape(-1, 1)
    elif a.ndim != 2:
        raise ValueError(f"{name} must be a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


@dataclass(frozen=True)
class ChannelRealization:
    """Channel matrices of one realisation.

    Parameters
    ----------
    h1, h2 : array_like
        Channels from user 1 (B x T1) and user 2 (B x T2) to Bob.
    g1, g2 : array_like
        Channels from user 1 (E x T1) and user 2 (E x T2) to Eve.

    1-D inputs are treated as column vectors, which is the natural way to
    pass single-antenna (SIMO) users.
    """

    h1: np.ndarray
    h2: np.ndarray
    g1: np.ndarray
    g2: np.ndarray

    def __post_init__(self):
        for name in ("h1", "h2", "g1", "g2"):
            object.__setattr__(self, name, _as_complex_matrix(getattr(self, name), name))
        if self.h1.shape[0] != self.h2.shape[0]:
            raise ValueError("h1 and h2 must have the same number of rows (Bob antennas)")
        if self.g1.shape[0] != self.g2.shape[0]:
            raise ValueError("g1 and g2 must have the same number of rows (Eve antennas)")
        if self.h1.shape[1] != self.g1.shape[1]:
            raise ValueError("h1 and g1 must have the same number of columns (user 1 antennas)")
        if self.h2.shape[1] != self.g2.shape[1]:
            raise ValueError("h2 and g2 must have the same number of columns (user 2 antennas)")

    @property
    def b(self) -> int:
        return self.h1.shape[0]

    @property
    def e(self) -> int:
        return self.g1.shape[0]

    @property
    def t1(self) -> int:
        return self.h1.shape[1]

    @property
    def t2(self) -> int:
        return self.h2.shape[1]

    @property
    def is_simo(self) -> bool:
        return self.t1 == 1 and self.t2 == 1


@dataclass(frozen=True)
class InputCovariance:
    """Transmit covariance ``f`` of one user together with its power budget ``p``.

    The matrix is symmetrised as ``(f + f^H) / 2`` on construction. Slight
    negative eigenvalues and trace overshoot left by iterative solvers are
    tolerated within fixed relative tolerances.
    """

    f: np.ndarray
    p: float = field(default=np.inf)

    def __post_init__(self):
        f = _as_complex_matrix(self.f, "f")
        if f.shape[0] != f.shape[1]:
            raise ValueError(f"covariance must be square, got shape {f.shape}")
        scale = max(np.linalg.norm(f), 1.0)
        if np.linalg.norm(f - f.conj().T) > HERMITIAN_RTOL * scale:
            raise DomainError("covariance is not Hermitian")
        f = 0.5 * (f + f.conj().T)
        tr = float(np.real(np.trace(f)))
        if f.size and np.linalg.eigvalsh(f)[0] < -PSD_RTOL * max(abs(tr), 1e-300):
            raise DomainError("covariance is not positive semidefinite")
        if self.p < 0:
            raise ValueError("power budget must be nonnegative")
        if tr > self.p * (1 + TRACE_RTOL) + 1e-300:
            raise DomainError(f"trace {tr:.6g} exceeds power budget {self.p:.6g}")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "p", float(self.p))

    @classmethod
    def zeros(cls, t, p=0.0):
        return cls(np.zeros((t, t), dtype=complex), p)

    @classmethod
    def uniform(cls, t, p):
        """Equal power ``p / t`` on every antenna."""
        return cls(np.eye(t, dtype=complex) * (p / t), p)

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.f)))


CovarianceLike = Union[InputCovariance, np.ndarray, float]


def _cov(f, t, name):
    if isinstance(f, InputCovariance):
        m = f.f
    else:
        m = _as_complex_matrix(f, name)
        m = 0.5 * (m + m.conj().T)
    if m.shape != (t, t):
        raise ValueError(f"{name} must be {t}x{t}, got {m.shape}")
    return m


def _logdet_pd(m):
    """Natural log-determinant of a Hermitian positive definite matrix."""
    try:
        c = np.linalg.cholesky(0.5 * (m + m.conj().T))
    except np.linalg.LinAlgError as exc:
        raise DomainError("matrix is not positive definite") from exc
    return 2.0 * float(np.sum(np.log(np.real(np.diag(c)))))


def _gram(h, f):
    return h @ f @ h.conj().T


def weighted_logdet_rate(h, f, n=None) -> float:
    """Return ``log2 |h f h^H n^{-1} + I|``.

    Parameters
    ----------
    h : array_like, shape (R, T)
        Channel.
    f : InputCovariance or array_like, shape (T, T)
        Transmit covariance.
    n : array_like, shape (R, R), optional
        Positive definite interference-plus-noise covariance. Identity when
        omitted.

    Notes
    -----
    Evaluated as ``log|n + h f h^H| - log|n|`` with Cholesky factors, so no
    inverse of ``n`` is ever formed.
    """
    h = _as_complex_matrix(h, "h")
    r, t = h.shape
    f = _cov(f, t, "f")
    if n is None:
        return max(_logdet_pd(np.eye(r) + _gram(h, f)), 0.0) / LN2
    n = _as_complex_matrix(n, "n")
    if n.shape != (r, r):
        raise ValueError(f"n must be {r}x{r}, got {n.shape}")
    ld_n = _logdet_pd(n)
    return max(_logdet_pd(n + _gram(h, f)) - ld_n, 0.0) / LN2


class MutualInformation(NamedTuple):
    """Mutual-information terms (bits) of both receivers for fixed inputs."""

    bob_1_given_2: float  # I(X1; Y | X2)
    bob_2_given_1: float  # I(X2; Y | X1)
    bob_joint: float  # I(X1, X2; Y)
    eve_1: float  # I(X1; Z), user 2 treated as noise
    eve_2: float  # I(X2; Z), user 1 treated as noise
    eve_joint: float  # I(X1, X2; Z)
    eve_1_given_2: float  # I(X1; Z | X2)


def mutual_information(ch: ChannelRealization, f1, f2) -> MutualInformation:
    f1 = _cov(f1, ch.t1, "f1")
    f2 = _cov(f2, ch.t2, "f2")
    ib, ie = np.eye(ch.b), np.eye(ch.e)
    c1, c2 = _gram(ch.h1, f1), _gram(ch.h2, f2)
    d1, d2 = _gram(ch.g1, f1), _gram(ch.g2, f2)
    ld_c1 = _logdet_pd(ib + c1)
    ld_c2 = _logdet_pd(ib + c2)
    ld_c12 = _logdet_pd(ib + c1 + c2)
    ld_d1 = _logdet_pd(ie + d1)
    ld_d2 = _logdet_pd(ie + d2)
    ld_d12 = _logdet_pd(ie + d1 + d2)
    return MutualInformation(
        bob_1_given_2=ld_c1 / LN2,
        bob_2_given_1=ld_c2 / LN2,
        bob_joint=ld_c12 / LN2,
        eve_1=(ld_d12 - ld_d2) / LN2,
        eve_2=(ld_d12 - ld_d1) / LN2,
        eve_joint=ld_d12 / LN2,
        eve_1_given_2=ld_d1 / LN2,
    )


def _pos(x):
    return x if x > 0.0 else 0.0


@dataclass(frozen=True)
class SecrecyComponents:
    """Three secrecy-rate bounds of user 1 (bits).

    ``r_hat``: Eve treats user 2 as noise. ``r_tilde``: Eve decodes jointly.
    ``r_bar``: Eve knows user 2's signal (equals the no-jamming rate).
    """

    r_hat: float
    r_tilde: float
    r_bar: float

    @property
    def sit_cj(self) -> float:
        return max(min(self.r_hat, self.r_tilde), self.r_bar)


def secrecy_components(ch: ChannelRealization, f1, f2) -> SecrecyComponents:
    mi = mutual_information(ch, f1, f2)
    return SecrecyComponents(
        r_hat=_pos(mi.bob_1_given_2 - mi.eve_1),
        r_tilde=_pos(mi.bob_joint - mi.eve_joint),
        r_bar=_pos(mi.bob_1_given_2 - mi.eve_1_given_2),
    )


@dataclass(frozen=True)
class RateReport:
    """Secrecy rate ``rs`` and maximum open sum rate ``ro`` of one scheme.

    ``ro`` is forced to zero whenever ``rs`` is zero.
    """

    scheme: Scheme
    rs: float
    ro: float

    @property
    def total(self) -> float:
        return self.rs + self.ro


def rate_sit_cj(ch: ChannelRealization, f1, f2) -> RateReport:
    mi = mutual_information(ch, f1, f2)
    r_hat = _pos(mi.bob_1_given_2 - mi.eve_1)
    r_tilde = _pos(mi.bob_joint - mi.eve_joint)
    r_bar = _pos(mi.bob_1_given_2 - mi.eve_1_given_2)
    rs = max(min(r_hat, r_tilde), r_bar)
    ro = _pos(mi.bob_joint - rs) if rs > 0 else 0.0
    return RateReport(Scheme.SITCJ, rs, ro)


def rate_no_jamming(ch: ChannelRealization, f1) -> RateReport:
    f1 = _cov(f1, ch.t1, "f1")
    bob = weighted_logdet_rate(ch.h1, f1)
    eve = weighted_logdet_rate(ch.g1, f1)
    rs = _pos(bob - eve)
    return RateReport(Scheme.NO, rs, eve if rs > 0 else 0.0)


def rate_gn_jamming(ch: ChannelRealization, f1, f2) -> RateReport:
    f1 = _cov(f1, ch.t1, "f1")
    f2 = _cov(f2, ch.t2, "f2")
    c2 = np.eye(ch.b) + _gram(ch.h2, f2)
    d2 = np.eye(ch.e) + _gram(ch.g2, f2)
    bob = weighted_logdet_rate(ch.h1, f1, c2)
    eve = weighted_logdet_rate(ch.g1, f1, d2)
    rs = _pos(bob - eve)
    return RateReport(Scheme.GN, rs, eve if rs > 0 else 0.0)


def scheme_rate(scheme, ch, f1, f2=None) -> RateReport:
    """Dispatch to the rate function of ``scheme``."""
    scheme = Scheme(scheme)
    if scheme is Scheme.NO:
        return rate_no_jamming(ch, f1)
    if f2 is None:
        f2 = np.zeros((ch.t2, ch.t2))
    if scheme is Scheme.GN:
        return rate_gn_jamming(ch, f1, f2)
    return rate_sit_cj(ch, f1, f2)


@dataclass(frozen=True)
class RateTriple:
    """Rate tuple (user-1 secret, user-1 open, user-2 open), in bits."""

    r1s: float
    r1o: float
    r2o: float

    def __post_init__(self):
        for name in ("r1s", "r1o", "r2o"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {v}")


class RegionMembership(NamedTuple):
    in_r1: bool
    in_r2: bool
    in_r3: bool

    @property
    def achievable(self) -> bool:
        return self.in_r1 or self.in_r2 or self.in_r3


def region_membership(ch: ChannelRealization, f1, f2, rates: RateTriple,
                      slack: float = REGION_SLACK) -> RegionMembership:
    """Test ``rates`` against the three polyhedral regions of the
    achievable rate region for fixed Gaussian inputs.

    Region 1: Eve cannot decode anything (user 2 adds randomness).
    Region 2: Eve may decode user 2, user 1 protects itself.
    Region 3: no secret message.
    """
    mi = mutual_information(ch, f1, f2)
    s, o1, o2 = rates.r1s, rates.r1o, rates.r2o

    def le(lhs, rhs):
        return lhs <= rhs + slack

    common = (
        le(s + o1, mi.bob_1_given_2)
        and le(o2, mi.bob_2_given_1)
        and le(s + o1 + o2, mi.bob_joint)
    )
    in_r1 = (
        common
        and le(s, _pos(mi.bob_1_given_2 - mi.eve_1))
        and le(s, _pos(mi.bob_joint - mi.eve_joint))
        and le(s + o1, _pos(mi.bob_joint - mi.eve_2))
        and le(s + o2, _pos(mi.bob_joint - mi.eve_1))
    )
    in_r2 = (
        common
        and le(s, _pos(mi.bob_1_given_2 - mi.eve_1_given_2))
        and le(s + o2, _pos(mi.bob_joint - mi.eve_1_given_2))
    )
    in_r3 = (
        s <= slack
        and le(o1, mi.bob_1_given_2)
        and le(o2, mi.bob_2_given_1)
        and le(o1 + o2, mi.bob_joint)
    )
    return RegionMembership(bool(in_r1), bool(in_r2), bool(in_r3))
