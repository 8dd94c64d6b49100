import cmath
import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from cubewalk.dynamics import (
    Regime,
    RegimeError,
    WalkParams,
    damping_constants,
    gamma,
    gamma_overdamped_terms,
    prob0,
    prob1,
    probabilities,
    spectrum,
)
from cubewalk.oracle import exponent_literal

params_st = st.builds(
    WalkParams,
    n=st.integers(1, 64),
    k=st.floats(1e-3, 10.0),
    p=st.floats(0.0, 60.0),
)
times = st.floats(0.0, 1e4)


def oracle_prob0(params, t):
    """Diagonal of expm(A t) applied to |0><0|, using scipy's expm."""
    s_t = scipy.linalg.expm(exponent_literal(params) * t)
    return (s_t @ np.array([1, 0, 0, 0], dtype=complex))[0].real


class TestWalkParams:
    @pytest.mark.parametrize(
        "kw, field",
        [
            (dict(n=0, k=1, p=0), "n"),
            (dict(n=2.5, k=1, p=0), "n"),
            (dict(n=3, k=0, p=0), "k"),
            (dict(n=3, k=1, p=-1e-9), "p"),
            (dict(n=3, k=float("nan"), p=0), "k"),
        ],
    )
    def test_rejects_invalid(self, kw, field):
        with pytest.raises(ValueError, match=field):
            WalkParams(**kw)

    def test_regime_boundaries(self):
        assert WalkParams(5, 1, 3.99).regime() is Regime.UNDERDAMPED
        assert WalkParams(5, 1, 4.0).regime() is Regime.CRITICAL
        assert WalkParams(5, 1, 4.0 * (1 + 1e-13)).regime() is Regime.CRITICAL
        assert WalkParams(5, 1, 4.0 * (1 + 1e-6)).regime() is Regime.OVERDAMPED
        assert WalkParams(5, 1, 4.0 * (1 + 1e-6)).regime(tol=1e-5) is Regime.CRITICAL


class TestDampingConstants:
    def test_no_decoherence(self):
        c = damping_constants(WalkParams(5, 1.0, 0.0))
        assert c.alpha == 4j
        assert c.beta == 4
        assert c.regime is Regime.UNDERDAMPED

    def test_critical(self):
        c = damping_constants(WalkParams(5, 1.0, 4.0))
        assert c.beta == 0
        assert c.regime is Regime.CRITICAL

    def test_overdamped(self):
        c = damping_constants(WalkParams(5, 1.0, 5.0))
        assert c.alpha == 3
        assert c.regime is Regime.OVERDAMPED

    @given(params_st)
    def test_defining_identities(self, params):
        c = damping_constants(params)
        k, p = params.k, params.p
        scale = p * p + 16 * k * k
        assert abs(c.alpha**2 + 16 * k * k - p * p) <= 1e-13 * scale
        assert abs(c.beta**2 - (16 * k * k - p * p)) <= 1e-13 * scale
        assert c.beta == -1j * c.alpha


class TestGamma:
    def test_initial_state(self):
        assert gamma(WalkParams(5, 1.0, 0.0), 0.0) == 0.5

    def test_uniform_at_quarter_period(self):
        assert abs(gamma(WalkParams(1, 1.0, 0.0), math.pi / 4)) < 1e-16

    def test_critical_limit_value(self):
        # 1/2 e^{-2kt/n} (1 + 2kt/n) at 2kt/n = 2
        assert gamma(WalkParams(5, 1.0, 4.0), 5.0) == pytest.approx(1.5 * math.exp(-2), rel=1e-14)
        assert gamma(WalkParams(5, 1.0, 4.0), 5.0) == pytest.approx(0.203003, abs=1e-6)

    @pytest.mark.parametrize("t", [0.1, 1.0, 7.0, 20.0, 50.0])
    def test_matches_scipy_expm_underdamped(self, t):
        params = WalkParams(5, 1.0, 0.5)
        assert abs(prob0(params, t) - oracle_prob0(params, t)) < 1e-10

    @pytest.mark.parametrize("t", [0.1, 1.0, 7.0, 20.0])
    def test_matches_scipy_expm_overdamped(self, t):
        params = WalkParams(5, 1.0, 9.0)
        assert abs(prob0(params, t) - oracle_prob0(params, t)) < 1e-10

    def test_vectorized_matches_scalar(self):
        params = WalkParams(5, 1.0, 0.5)
        ts = np.linspace(0, 30, 31)
        assert np.array_equal(gamma(params, ts), [gamma(params, t) for t in ts])

    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            gamma(WalkParams(5, 1.0, 0.5), -1.0)

    def test_huge_time_does_not_overflow(self):
        for p in (3.0, 4.0, 9.0, 1e6):
            g = gamma(WalkParams(3, 1.0, p), 1e12)
            assert math.isfinite(g) and abs(g) <= 0.5

    def test_continuity_across_critical(self):
        for t in (0.5, 5.0, 40.0):
            vals = [gamma(WalkParams(5, 1.0, 4.0 * f), t) for f in (1 - 1e-6, 1.0, 1 + 1e-6)]
            assert max(vals) - min(vals) < 1e-5

    def test_series_branch_matches_direct_form(self):
        # just above the series cutoff, the direct form is still accurate
        params = WalkParams(5, 1.0, 3.9)
        beta = math.sqrt(16 - 3.9**2)
        t = 2 * 5 * 2e-4 / beta
        x = beta * t / 10
        direct = 0.5 * math.exp(-3.9 * t / 10) * (math.cos(x) + 3.9 / beta * math.sin(x))
        assert gamma(params, t) == pytest.approx(direct, rel=1e-13)
        t_small = t / 4  # inside the series region
        x = beta * t_small / 10
        direct = 0.5 * math.exp(-3.9 * t_small / 10) * (math.cos(x) + 3.9 / beta * math.sin(x))
        assert gamma(params, t_small) == pytest.approx(direct, rel=1e-12)

    @given(params_st, times)
    def test_bounded(self, params, t):
        assert abs(gamma(params, t)) <= 0.5

    @given(params_st.filter(lambda q: q.p <= 4 * q.k), times)
    def test_decay_envelope(self, params, t):
        # the cos/sinc bracket is at most 1 + pt/2n in magnitude when beta is real
        a = params.p * t / (2 * params.n)
        assert abs(gamma(params, t)) <= 0.5 * math.exp(-a) * (1 + a) * (1 + 1e-12) + 1e-300

    def test_envelope_does_not_hold_when_overdamped(self):
        params = WalkParams(5, 1.0, 9.0)
        t = 30.0
        a = params.p * t / 10
        assert gamma(params, t) > 0.5 * math.exp(-a) * (1 + a)


class TestProbabilities:
    def test_no_decoherence_reduces_to_cos_squared(self, rng):
        worst = 0.0
        for _ in range(1000):
            params = WalkParams(int(rng.integers(1, 100)), rng.uniform(0.01, 10), 0.0)
            t = rng.uniform(0, 100)
            worst = max(worst, abs(prob0(params, t) - math.cos(params.k * t / params.n) ** 2))
        assert worst <= 1e-12

    def test_initial(self):
        assert probabilities(WalkParams(3, 2.0, 7.0), 0.0) == (1.0, 0.0)

    def test_overdamped_against_oracle(self):
        params = WalkParams(5, 1.0, 9.0)
        assert abs(prob1(params, 20.0) - (1 - oracle_prob0(params, 20.0))) < 1e-10

    @given(params_st, times)
    def test_sum_to_one_exactly(self, params, t):
        p0, p1 = probabilities(params, t)
        assert p0 + p1 == 1.0
        assert 0.0 <= p0 <= 1.0 and 0.0 <= p1 <= 1.0

    def test_array_input(self):
        p0, p1 = probabilities(WalkParams(5, 1.0, 0.5), np.linspace(0, 30, 101))
        assert np.all(p0 + p1 == 1.0)


class TestOverdampedTerms:
    def test_dominant_rate(self):
        params = WalkParams(5, 1.0, 5.0)
        dom, _ = gamma_overdamped_terms(params, 10.0)
        # (p - alpha) / 2n = 1/n, prefactor (1 + p/alpha)/4 = 2/3
        assert dom == pytest.approx((2 / 3) * math.exp(-10.0 / 5), rel=1e-14)

    @pytest.mark.parametrize("t", [1.0, 5.0, 20.0])
    def test_terms_sum_to_gamma(self, t):
        params = WalkParams(5, 1.0, 9.0)
        dom, sub = gamma_overdamped_terms(params, t)
        assert dom + sub == pytest.approx(gamma(params, t), rel=1e-12)

    def test_zeno_limit(self):
        params = WalkParams(5, 1.0, 1e8)
        dom, sub = gamma_overdamped_terms(params, 1.0)
        assert dom == pytest.approx(0.5, abs=1e-7)
        assert abs(sub) < 1e-12

    def test_rejects_other_regimes(self):
        with pytest.raises(RegimeError):
            gamma_overdamped_terms(WalkParams(5, 1.0, 4.0), 1.0)
        with pytest.raises(RegimeError):
            gamma_overdamped_terms(WalkParams(5, 1.0, 1.0), 1.0)


class TestSpectrum:
    def test_diagonal_rho0(self):
        s = spectrum(WalkParams(5, 1.0, 5.0))
        assert s.diagonal_rho0 == pytest.approx((0.5, 0.0, 0.25 * (-1 + 5 / 3), 0.25 * (-1 - 5 / 3)))

    def test_eigenvalues_match_generator(self):
        params = WalkParams(5, 1.0, 0.5)
        numeric = np.linalg.eigvals(exponent_literal(params))
        for lam in spectrum(params).eigenvalues:
            assert np.min(np.abs(numeric - lam)) < 1e-12

    @given(params_st.filter(lambda q: abs(q.p - 4 * q.k) > 1e-3 * q.k), st.floats(0.0, 100.0))
    def test_modes_reproduce_gamma(self, params, t):
        assert spectrum(params).gamma(t) == pytest.approx(gamma(params, t), abs=1e-12)

    def test_singular_at_critical(self):
        with pytest.raises(RegimeError):
            spectrum(WalkParams(5, 1.0, 4.0))

    def test_alpha_is_principal_root(self):
        s = spectrum(WalkParams(2, 1.0, 0.0))
        assert s.eigenvalues[2] == pytest.approx((-cmath.sqrt(-16)) / 4)
