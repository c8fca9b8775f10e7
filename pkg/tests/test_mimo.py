import numpy as np
import pytest
from hypothesis import given, strategies as st

from wiretap_jamming import (
    ChannelRealization,
    ConvergenceError,
    InputCovariance,
    SolverBudget,
    WaterfillMode,
    optimize_gn_mimo,
    optimize_no_mimo,
    optimize_sit_cj_mimo,
    rate_gn_jamming,
    rate_no_jamming,
    rate_sit_cj,
    sdlc1_maximize,
    sdlc2_step,
    secrecy_components,
    simultaneous_diagonalize,
    solve_no_jamming_simo,
    solve_sit_cj_simo,
    waterfill_theorem5,
)
from wiretap_jamming.mimo import sdlc2_surrogate
from wiretap_jamming.oracle import LogDetObjective, ModeProblem, projected_ascent, projected_descent_modes

from helpers import cn, random_channel

P = 100.0
seeds = st.integers(0, 2**32 - 1)


def _feasible(f, p):
    f = f.f if isinstance(f, InputCovariance) else f
    tr = np.real(np.trace(f))
    assert tr <= p * (1 + 1e-9)
    assert np.linalg.eigvalsh(f)[0] >= -1e-10 * max(tr, 1e-300)


def _random_modes(rng):
    r = int(rng.integers(1, 5))
    t2 = r + int(rng.integers(0, 2))
    rho = rng.uniform(0, 1, r)
    rho[rng.uniform(size=r) < 0.15] = rng.choice([0.0, 1.0])
    a = rng.uniform(0, 2, t2)
    w = rng.uniform(0.2, 3, t2)
    p = float(10 ** rng.uniform(-1, 2))
    return rho, a, w, r, t2, p


class TestWaterfill:
    def test_single_mode_unit_power(self):
        lam, beta = waterfill_theorem5([WaterfillMode(0.0, 0.5, 1.0)], 1, 1e6)
        assert lam[0] == pytest.approx(1.0) and beta == 0

    @pytest.mark.parametrize("rho", [0.0, 1.0])
    @pytest.mark.parametrize("a", [1.0, 3.0])
    def test_expensive_edge_mode_off(self, rho, a):
        lam, beta = waterfill_theorem5([WaterfillMode(rho, a, 1.0)], 1, 10.0)
        assert lam[0] == 0 and beta == 0

    def test_inactive_modes_zero(self):
        lam, _ = waterfill_theorem5([WaterfillMode(0.5, 0.1, 1.0)], 3, 5.0)
        assert lam.shape == (3,) and np.all(lam[1:] == 0)

    def test_negative_budget(self):
        with pytest.raises(ValueError):
            waterfill_theorem5([WaterfillMode(0.5, 0.1, 1.0)], 1, -1.0)

    def test_bracket_failure(self):
        with pytest.raises(ConvergenceError):
            waterfill_theorem5([WaterfillMode(0.5, -1e9, 1.0)], 1, 1.0, bisect_max=3)

    def test_rho_clamped(self):
        assert WaterfillMode(1.5, 0.0, 1.0).rho == 1.0
        with pytest.raises(ValueError):
            WaterfillMode(0.5, 0.0, 0.0)

    @given(seeds)
    def test_beats_random_feasible_points(self, seed):
        rng = np.random.default_rng(seed)
        rho, a, w, r, t2, p = _random_modes(rng)
        lam, _ = waterfill_theorem5([WaterfillMode(*m) for m in zip(rho, a, w)], t2, p)
        prob = ModeProblem(rho, a, w, r, p)
        samples = rng.dirichlet(np.ones(t2), 1000) * rng.uniform(0, 1, (1000, 1)) * p / w
        assert prob.value(lam) <= min(prob.value(x) for x in samples) + 1e-9

    @given(seeds)
    def test_matches_descent_oracle_and_kkt(self, seed):
        rng = np.random.default_rng(seed)
        rho, a, w, r, t2, p = _random_modes(rng)
        lam, beta = waterfill_theorem5([WaterfillMode(*m) for m in zip(rho, a, w)], t2, p)
        prob = ModeProblem(rho, a, w, r, p)
        assert prob.value(lam) <= prob.value(projected_descent_modes(prob)) + 1e-6
        assert np.all(lam >= 0)
        assert w @ lam <= p * (1 + 1e-9)
        assert abs(beta * (w @ lam - p)) <= 1e-7
        g = prob.gradient(lam) + beta * w
        active = lam[:r] > 1e-9
        assert np.all(np.abs(g[:r][active]) <= 1e-6)


class TestSdlc1:
    def test_clean_bob_uniform(self):
        f = sdlc1_maximize(np.eye(3), np.zeros((2, 3)), 6.0)
        np.testing.assert_allclose(f.f, 2 * np.eye(3), atol=1e-8)
        oracle = projected_ascent(LogDetObjective([(1, np.eye(3), np.eye(3))]), 6.0)
        np.testing.assert_allclose(oracle, 2 * np.eye(3), atol=1e-4)

    def test_dominated_bob_silent(self, rng):
        g = cn(rng, 2, 2)
        f = sdlc1_maximize(0.5 * g, g, 10.0)
        assert np.allclose(f.f, 0)

    @given(seeds)
    def test_optimal_over_sd_modes(self, seed):
        rng = np.random.default_rng(seed)
        hb, ge, p = cn(rng, 2, 2), cn(rng, 2, 2), float(10 ** rng.uniform(0, 2))
        obj = LogDetObjective([(1, hb, np.eye(2)), (-1, ge, np.eye(2))])
        f = sdlc1_maximize(hb, ge, p)
        _feasible(f, p)
        sd = simultaneous_diagonalize(hb.conj().T @ hb, ge.conj().T @ ge)
        wn = sd.column_norms_sq
        lams = rng.dirichlet(np.ones(2), 500) * rng.uniform(0, 1, (500, 1)) * p / wn
        best = max(obj.value((sd.w * lam) @ sd.w.conj().T) for lam in lams)
        assert obj.value(f.f) >= best - 1e-9

    @given(seeds)
    def test_stationary_modes(self, seed):
        rng = np.random.default_rng(seed)
        hb, ge, p = cn(rng, 3, 3), cn(rng, 2, 3), 10.0
        f = sdlc1_maximize(hb, ge, p)
        sd = simultaneous_diagonalize(hb.conj().T @ hb, ge.conj().T @ ge)
        winv = np.linalg.inv(sd.w)
        lam = np.real(np.diag(winv @ f.f @ winv.conj().T))[: sd.rank]
        wn, eta = sd.column_norms_sq[: sd.rank], sd.eta
        on = lam > 1e-8
        if not on.any():
            return
        deriv = eta / (eta * lam + 1) - (1 - eta) / ((1 - eta) * lam + 1)
        beta = np.mean(deriv[on] / wn[on])
        np.testing.assert_allclose(deriv[on] - beta * wn[on], 0, atol=1e-7)

    @given(seeds)
    def test_exact_when_grams_commute(self, seed):
        rng = np.random.default_rng(seed)
        hb = np.diag(rng.uniform(0.2, 2, 2)).astype(complex)
        ge = np.diag(rng.uniform(0.2, 2, 2)).astype(complex)
        p = float(10 ** rng.uniform(0, 2))
        obj = LogDetObjective([(1, hb, np.eye(2)), (-1, ge, np.eye(2))])
        v = obj.value(sdlc1_maximize(hb, ge, p).f)
        # diagonal covariances are optimal here, so a dense power grid is exact
        x = np.linspace(0, p, 801)
        a, b = np.meshgrid(x, x, indexing="ij")
        ok = a + b <= p
        gb, gg = np.abs(np.diag(hb)) ** 2, np.abs(np.diag(ge)) ** 2
        vals = (np.log2((1 + a * gb[0]) * (1 + b * gb[1])) - np.log2((1 + a * gg[0]) * (1 + b * gg[1])))
        assert v >= vals[ok].max() - 1e-9
        assert v <= vals[ok].max() + 1e-4 * max(v, 1e-3)

    @pytest.mark.parametrize("seed", range(20))
    def test_close_to_ascent_oracle(self, seed):
        # SD of the bare Gram pair ignores the identity in the log-dets, which
        # costs a few percent at low power
        rng = np.random.default_rng(seed)
        hb, ge, p = cn(rng, 2, 2), cn(rng, 2, 2), float(10 ** rng.uniform(0, 2))
        obj = LogDetObjective([(1, hb, np.eye(2)), (-1, ge, np.eye(2))])
        f = sdlc1_maximize(hb, ge, p).f
        v = obj.value(f)
        vo = max(obj.value(projected_ascent(obj, p, steps=20000, f0=f0)) for f0 in (None, f))
        assert v >= vo * (1 - 0.1) - 1e-9


class TestSdlc2:
    def test_silent_jammer_links(self, rng):
        ch = random_channel(rng, 2, 2, 2, 2)
        ch = ChannelRealization(ch.h1, np.zeros((2, 2)), ch.g1, np.zeros((2, 2)))
        f2 = sdlc2_step(ch, InputCovariance.uniform(2, P), InputCovariance.uniform(2, P), P)
        assert np.allclose(f2.f, 0)

    def test_zero_budget(self, rng):
        ch = random_channel(rng, 2, 2, 2, 2)
        f2 = sdlc2_step(ch, InputCovariance.uniform(2, P), InputCovariance.zeros(2), 0.0)
        assert np.allclose(f2.f, 0)

    @given(seeds)
    def test_surrogate_descent_in_fixed_basis(self, seed):
        rng = np.random.default_rng(seed)
        ch = random_channel(rng, 2, 2, 2, 2)
        f1 = InputCovariance.uniform(2, P)
        f2 = sdlc2_step(ch, f1, InputCovariance.uniform(2, P), P)
        for _ in range(5):
            nxt = sdlc2_step(ch, f1, f2, P)
            _feasible(nxt, P)
            assert sdlc2_surrogate(ch, f1, f2, nxt) <= sdlc2_surrogate(ch, f1, f2, f2) + 1e-9
            f2 = nxt


class TestNoJammingMimo:
    def test_silent_eve_is_capacity(self, rng):
        ch = random_channel(rng, 3, 2, 3, 1)
        ch = ChannelRealization(ch.h1, ch.h2, np.zeros((2, 3)), ch.g2)
        p = 5.0
        sol = optimize_no_mimo(ch, p)
        # eigenvalue water-filling on the channel gains
        g = np.linalg.eigvalsh(ch.h1.conj().T @ ch.h1)[::-1]
        lo, hi = 0.0, p + 1.0 / g.min()
        for _ in range(200):
            mu = 0.5 * (lo + hi)
            lo, hi = (mu, hi) if np.sum(np.maximum(mu - 1 / g, 0)) < p else (lo, mu)
        cap = np.sum(np.log2(1 + g * np.maximum(mu - 1 / g, 0)))
        assert sol.rs == pytest.approx(cap, abs=1e-7)

    def test_silent_bob(self, rng):
        ch = random_channel(rng, 2, 2, 2, 2)
        ch = ChannelRealization(np.zeros((2, 2)), ch.h2, ch.g1, ch.g2)
        sol = optimize_no_mimo(ch, P)
        assert sol.rs == 0 and np.allclose(sol.f1.f, 0)

    @given(seeds)
    def test_single_antenna_matches_closed_form(self, seed):
        ch = random_channel(np.random.default_rng(seed), 2, 3)
        assert optimize_no_mimo(ch, P).rs == pytest.approx(solve_no_jamming_simo(ch, P).rs, abs=1e-6)


class TestGnMimo:
    def test_no_jamming_budget(self, rng):
        for _ in range(10):
            ch = random_channel(rng, 2, 2, 2, 2)
            assert optimize_gn_mimo(ch, P, 0.0).rs == pytest.approx(optimize_no_mimo(ch, P).rs, abs=1e-9)

    def test_deterministic(self, rng):
        ch = random_channel(rng, 2, 2, 2, 2)
        a, b = optimize_gn_mimo(ch, P, P), optimize_gn_mimo(ch, P, P)
        assert a.rs == b.rs and np.array_equal(a.f1.f, b.f1.f) and np.array_equal(a.f2.f, b.f2.f)

    @pytest.mark.parametrize("seed", range(20))
    def test_improves_on_start_and_feasible(self, seed):
        ch = random_channel(np.random.default_rng(seed), 2, 2, 2, 2)
        sol = optimize_gn_mimo(ch, P, P, SolverBudget(l1=3, l2=10))
        start = rate_gn_jamming(ch, np.eye(2) * P / 2, np.eye(2) * P / 2).rs
        assert sol.rs >= start - 1e-9
        assert sol.rs == pytest.approx(rate_gn_jamming(ch, sol.f1, sol.f2).rs, abs=1e-9)
        _feasible(sol.f1, P)
        _feasible(sol.f2, P)


class TestSitCjMimo:
    def test_invisible_jammer(self, rng):
        ch = random_channel(rng, 2, 2, 2, 2)
        ch = ChannelRealization(ch.h1, np.zeros((2, 2)), ch.g1, np.zeros((2, 2)))
        assert optimize_sit_cj_mimo(ch, P, P).rs == pytest.approx(optimize_no_mimo(ch, P).rs, abs=1e-9)

    @pytest.mark.parametrize("seed", range(30))
    def test_dominance_and_sandwich(self, seed):
        rng = np.random.default_rng(seed)
        ch = random_channel(rng, *rng.integers(1, 4, 2), 2, 2)
        sol = optimize_sit_cj_mimo(ch, P, P)
        no = optimize_no_mimo(ch, P)
        assert sol.rs >= no.rs - 1e-9
        assert sol.rs <= sol.upper_bound + 1e-9
        assert sol.rs == pytest.approx(rate_sit_cj(ch, sol.f1, sol.f2).rs, abs=1e-9)
        sc = secrecy_components(ch, sol.f1, sol.f2)
        assert sol.rs >= max(min(sc.r_hat, sc.r_tilde), sc.r_bar) - 1e-9
        _feasible(sol.f1, P)
        _feasible(sol.f2, P)

    @pytest.mark.parametrize("seed", range(30))
    def test_single_antenna_close_to_closed_form(self, seed):
        rng = np.random.default_rng(seed)
        ch = random_channel(rng, int(rng.choice([2, 4])), int(rng.choice([1, 2, 4])))
        closed = solve_sit_cj_simo(ch, P, P).rs
        rs = optimize_sit_cj_mimo(ch, P, P).rs
        assert rs <= closed + 1e-9
        assert rs >= closed - 5e-3


def test_budget_validation():
    for kw in ({"l1": 0}, {"l2": 0}, {"alt_iters": 0}, {"bisect_tol": 0.0}, {"bisect_max": 0}):
        with pytest.raises(ValueError):
            SolverBudget(**kw)
