"""Simultaneous diagonalisation of a pair of PSD Hermitian matrices.

For PSD ``q1`` and ``q2`` an invertible ``w`` is built such that::

    w^H q1 w = diag(eta, 0)
    w^H q2 w = diag(1 - eta, 0)

with ``0 <= eta <= 1``. The construction whitens ``q1 + q2`` on its range
and then rotates with the eigenvectors of the whitened ``q1``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DEFAULT_RANK_TOL = 1e-10
_INPUT_TOL = 1e-10
# eta values closer than this are treated as one degenerate cluster
_ETA_TIE = 1e-9


@dataclass(frozen=True)
class SDFactorization:
    """Result of :func:`simultaneous_diagonalize`.

    Attributes
    ----------
    w : ndarray, shape (T, T)
        Invertible congruence. The first ``rank`` columns span the range of
        ``q1 + q2``, the remaining ones its null space.
    eta : ndarray, shape (rank,)
        Diagonal of ``w^H q1 w`` on the range, sorted descending.
    rank : int
        Numerical rank of ``q1 + q2``.
    """

    w: np.ndarray
    eta: np.ndarray
    rank: int

    @property
    def column_norms_sq(self):
        """Squared Euclidean norms of the columns of ``w``."""
        return np.sum(np.abs(self.w) ** 2, axis=0)


def _fix_phase(vecs):
    # make the largest-magnitude entry of every column real positive
    if vecs.size == 0:
        return vecs
    idx = np.argmax(np.abs(vecs), axis=0)
    pivots = vecs[idx, np.arange(vecs.shape[1])]
    phase = np.ones_like(pivots)
    nz = np.abs(pivots) > 0
    phase[nz] = np.abs(pivots[nz]) / pivots[nz]
    return vecs * phase


def _check_psd(q, name):
    q = np.asarray(q, dtype=complex)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError(f"{name} must be square, got shape {q.shape}")
    scale = max(np.linalg.norm(q), 1e-300)
    if np.linalg.norm(q - q.conj().T) > _INPUT_TOL * max(scale, 1.0):
        raise DomainError(f"{name} is not Hermitian")
    q = 0.5 * (q + q.conj().T)
    if q.size and np.linalg.eigvalsh(q)[0] < -_INPUT_TOL * max(scale, 1.0):
        raise DomainError(f"{name} is not positive semidefinite")
    return q


def _eigh_desc(m):
    vals, vecs = np.linalg.eigh(m)
    return vals[::-1], _fix_phase(vecs[:, ::-1])


def simultaneous_diagonalize(q1, q2, rank_tol=DEFAULT_RANK_TOL) -> SDFactorization:
    """Simultaneously diagonalise two PSD Hermitian matrices.

    Parameters
    ----------
    q1, q2 : array_like, shape (T, T)
        Hermitian positive semidefinite matrices.
    rank_tol : float
        Eigenvalues of ``q1 + q2`` not exceeding ``rank_tol`` times the
        largest one are treated as zero.

    Returns
    -------
    SDFactorization

    Examples
    --------
    >>> sd = simultaneous_diagonalize(np.diag([2.0, 0.0]), np.diag([0.0, 3.0]))
    >>> sd.rank, sd.eta.round(12).tolist()
    (2, [1.0, 0.0])
    """
    q1 = _check_psd(q1, "q1")
    q2 = _check_psd(q2, "q2")
    if q1.shape != q2.shape:
        raise ValueError("q1 and q2 must have the same shape")
    t = q1.shape[0]

    vals, psi1 = _eigh_desc(q1 + q2)
    top = vals[0] if t else 0.0
    rank = int(np.sum(vals > rank_tol * top)) if top > 0 else 0

    w1 = psi1.copy()
    w1[:, :rank] = psi1[:, :rank] / np.sqrt(vals[:rank])
    ws = w1[:, :rank]
    j = ws.conj().T @ q1 @ ws
    eta, psi2 = _eigh_desc(0.5 * (j + j.conj().T))
    eta = np.clip(eta, 0.0, 1.0)

    w = w1.copy()
    w[:, :rank] = _split_ties(ws @ psi2, eta)
    return SDFactorization(w=w, eta=eta, rank=rank)


def _split_ties(w, eta):
    """Resolve the rotational freedom inside clusters of equal ``eta``.

    Any unitary mix of a cluster's columns is an equally valid factor. We
    pick the one whose columns are mutually orthogonal, which makes the
    trace of ``w diag(lam) w^H`` separable across the cluster and the
    factor reproducible.
    """
    start = 0
    n = eta.size
    while start < n:
        stop = start + 1
        while stop < n and eta[start] - eta[stop] <= _ETA_TIE:
            stop += 1
        if stop - start > 1:
            block = w[:, start:stop]
            _, u = _eigh_desc(block.conj().T @ block)
            w[:, start:stop] = block @ u
        start = stop
    return w


def inverse_sqrt_psd(c, rel_tol=1e-12):
    """Hermitian inverse square root of a positive definite matrix.

    Raises
    ------
    DomainError
        If some eigenvalue is below ``rel_tol`` times the largest one.
    """
    c = _check_psd(c, "c")
    vals, vecs = np.linalg.eigh(c)
    if vals.size == 0:
        return c
    if vals[0] <= rel_tol * vals[-1] or vals[-1] <= 0:
        raise DomainError("matrix is singular or not positive definite")
    m = (vecs / np.sqrt(vals)) @ vecs.conj().T
    return 0.5 * (m + m.conj().T)
