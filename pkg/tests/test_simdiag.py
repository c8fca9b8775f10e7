import numpy as np
import pytest
from hypothesis import given, strategies as st

from wiretap_jamming import DomainError, simultaneous_diagonalize
from wiretap_jamming.simdiag import inverse_sqrt_psd

from helpers import cn


def _blocks(sd, t):
    r = sd.rank
    d1, d2, s = np.zeros((t, t)), np.zeros((t, t)), np.zeros((t, t))
    d1[:r, :r] = np.diag(sd.eta)
    d2[:r, :r] = np.diag(1 - sd.eta)
    s[:r, :r] = np.eye(r)
    return d1, d2, s


def _check_reconstruction(q1, q2, sd, tol=1e-8):
    t = q1.shape[0]
    w = sd.w
    d1, d2, s = _blocks(sd, t)
    assert np.linalg.norm(w.conj().T @ q1 @ w - d1) <= tol * (1 + np.linalg.norm(q1))
    assert np.linalg.norm(w.conj().T @ q2 @ w - d2) <= tol * (1 + np.linalg.norm(q2))
    assert np.linalg.norm(w.conj().T @ (q1 + q2) @ w - s) <= tol * (1 + np.linalg.norm(q1 + q2))
    assert np.all(sd.eta >= 0) and np.all(sd.eta <= 1 + 1e-10)
    assert abs(np.linalg.det(w)) > 0


def _psd(rng, t, k):
    a = cn(rng, t, k)
    return a @ a.conj().T


def test_already_diagonal():
    sd = simultaneous_diagonalize(np.diag([2.0, 0.0]), np.diag([0.0, 3.0]))
    assert sd.rank == 2
    np.testing.assert_allclose(sd.eta, [1.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(np.abs(sd.w), np.diag([1 / np.sqrt(2), 1 / np.sqrt(3)]), atol=1e-12)
    _check_reconstruction(np.diag([2.0, 0.0]), np.diag([0.0, 3.0]), sd)


def test_identical_identities():
    sd = simultaneous_diagonalize(np.eye(3), np.eye(3))
    assert sd.rank == 3
    np.testing.assert_allclose(sd.eta, [0.5] * 3, atol=1e-12)


def test_rank_deficient_pair(rng):
    q1, q2 = _psd(rng, 4, 4), _psd(rng, 4, 2)
    sd = simultaneous_diagonalize(q1, q2)
    assert sd.rank == 4
    _check_reconstruction(q1, q2, sd)


def test_common_null_space(rng):
    q1, q2 = _psd(rng, 5, 1), _psd(rng, 5, 2)
    sd = simultaneous_diagonalize(q1, q2)
    assert sd.rank == 3
    _check_reconstruction(q1, q2, sd)


def test_zero_pair():
    sd = simultaneous_diagonalize(np.zeros((3, 3)), np.zeros((3, 3)))
    assert sd.rank == 0 and sd.eta.size == 0


@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_reconstruction_property(seed, t):
    rng = np.random.default_rng(seed)
    k1, k2 = rng.integers(0, t + 1, 2)
    q1, q2 = _psd(rng, t, k1), _psd(rng, t, k2)
    sd = simultaneous_diagonalize(q1, q2)
    assert sd.rank == np.linalg.matrix_rank(q1 + q2, tol=1e-10 * max(np.linalg.norm(q1 + q2, 2), 1e-300))
    _check_reconstruction(q1, q2, sd)


@given(st.integers(0, 2**32 - 1))
def test_diagonal_inputs_give_diagonal_eta(seed):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 1, 4)
    sd = simultaneous_diagonalize(np.diag(x), np.diag(1 - x))
    np.testing.assert_allclose(sd.eta, np.sort(x)[::-1], atol=1e-12)


def test_deterministic(rng):
    q1, q2 = _psd(rng, 3, 3), _psd(rng, 3, 1)
    a, b = simultaneous_diagonalize(q1, q2), simultaneous_diagonalize(q1.copy(), q2.copy())
    assert np.array_equal(a.w, b.w) and np.array_equal(a.eta, b.eta)


@pytest.mark.parametrize(
    "q1, q2",
    [
        (np.array([[1, 1], [0, 1]]), np.eye(2)),
        (np.diag([1.0, -1.0]), np.eye(2)),
    ],
)
def test_invalid_inputs(q1, q2):
    with pytest.raises(DomainError):
        simultaneous_diagonalize(q1, q2)


def test_shape_mismatch():
    with pytest.raises(ValueError):
        simultaneous_diagonalize(np.eye(2), np.eye(3))


class TestInverseSqrt:
    def test_identity(self):
        np.testing.assert_allclose(inverse_sqrt_psd(np.eye(3)), np.eye(3), atol=1e-14)

    def test_diagonal(self):
        np.testing.assert_allclose(inverse_sqrt_psd(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]), atol=1e-14)

    @given(st.integers(0, 2**32 - 1))
    def test_multiply_back(self, seed):
        rng = np.random.default_rng(seed)
        c = _psd(rng, 3, 3) + 0.05 * np.eye(3)
        m = inverse_sqrt_psd(c)
        np.testing.assert_allclose(m @ c @ m, np.eye(3), atol=1e-9)
        np.testing.assert_allclose(m, m.conj().T, atol=1e-14)
        assert np.linalg.eigvalsh(m)[0] > 0

    def test_singular(self):
        with pytest.raises(DomainError):
            inverse_sqrt_psd(np.diag([1.0, 0.0]))
