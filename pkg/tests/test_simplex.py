import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from llent.oracle import quad_ordered_exp_integral
from llent.simplex import (
    OrderedExpIntegralKey,
    batch_integrals,
    cache_stats,
    configure_cache,
    make_key,
    ordered_exp_integral,
    ordered_exp_integrals_fast,
)

exponents = st.lists(st.floats(-50.0, 50.0, allow_nan=False), min_size=0, max_size=5)


class TestKey:
    def test_normalizes_to_floats(self):
        key = make_key([1, 2], 0, 1)
        assert key.mu == (1.0, 2.0)
        assert isinstance(key.a, float) and isinstance(key.b, float)

    def test_rejects_bad_interval(self):
        with pytest.raises(ValueError):
            make_key([1.0], 1.0, 1.0)
        with pytest.raises(ValueError):
            make_key([1.0], 2.0, 1.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            make_key([math.inf], 0.0, 1.0)


class TestClosedForms:
    def test_empty_is_one(self):
        assert ordered_exp_integral(make_key([], 0.0, 1.0)) == 1.0 + 0.0j

    def test_zero_exponents_give_simplex_volume(self):
        # volume of the ordered m-simplex over [a, b] is (b-a)^m / m!
        for m in range(1, 5):
            val = ordered_exp_integral(make_key([0.0] * m, 0.25, 0.75))
            assert val == pytest.approx(0.5 ** m / math.factorial(m), abs=1e-15)

    def test_single_exponential(self):
        mu = 7.3
        val = ordered_exp_integral(make_key([mu], 0.1, 0.9))
        exact = (np.exp(1j * mu * 0.9) - np.exp(1j * mu * 0.1)) / (1j * mu)
        assert val == pytest.approx(exact, abs=1e-15)

    def test_full_period_pair_vanishing_cross_term(self):
        # int over 0 < x1 < x2 < 1 of e^(2 pi i (x1 - x2)): both orderings
        # together tile the square, whose integral is |int e^(2pi i x)|^2 = 0,
        # and the two ordered halves are complex conjugates
        two_pi = 2.0 * math.pi
        val = ordered_exp_integral(make_key([two_pi, -two_pi], 0.0, 1.0))
        assert (val + np.conj(val)) == pytest.approx(0.0, abs=1e-14)


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(exponents)
    def test_conjugation(self, mu):
        a, b = 0.1, 0.8
        forward = ordered_exp_integral(make_key(mu, a, b))
        mirrored = ordered_exp_integral(make_key([-m for m in mu], a, b))
        assert mirrored == pytest.approx(np.conj(forward), abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(exponents, st.floats(-0.5, 0.5, allow_nan=False))
    def test_interval_shift_phase(self, mu, shift):
        # substituting x -> x + s multiplies the integral by e^(i s sum(mu))
        base = ordered_exp_integral(make_key(mu, 0.0, 0.6))
        shifted = ordered_exp_integral(make_key(mu, shift, 0.6 + shift))
        phase = np.exp(1j * shift * sum(mu))
        assert shifted == pytest.approx(base * phase, abs=1e-11)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-30.0, 30.0, allow_nan=False), min_size=1, max_size=4))
    def test_matches_quadrature(self, mu):
        key = make_key(mu, 0.0, 0.9)
        assert ordered_exp_integral(key) == pytest.approx(
            quad_ordered_exp_integral(key), abs=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-40.0, 40.0, allow_nan=False), min_size=1, max_size=5))
    def test_fast_route_agrees(self, mu):
        symbolic = ordered_exp_integral(make_key(mu, 0.2, 0.7))
        fast = ordered_exp_integrals_fast(np.array([mu]), 0.2, 0.7)[0]
        assert fast == pytest.approx(symbolic, abs=1e-11)

    def test_degenerate_suffix_sums(self):
        # exponents cancelling pairwise hit the Taylor branch
        for mu in [(4.0, -4.0), (1e-12, -1e-12), (10.0, -10.0, 10.0, -10.0)]:
            key = make_key(mu, 0.0, 1.0)
            assert ordered_exp_integral(key) == pytest.approx(
                quad_ordered_exp_integral(key), abs=1e-12)


class TestCache:
    def test_hit_accounting_and_determinism(self):
        configure_cache(1024)
        key = make_key([3.0, -1.0], 0.0, 0.5)
        first = ordered_exp_integral(key)
        before = cache_stats()
        second = ordered_exp_integral(key)
        after = cache_stats()
        assert first == second
        assert after["hits"] == before["hits"] + 1
        configure_cache(1 << 20)

    def test_eviction_bounds_size(self):
        configure_cache(8)
        for i in range(50):
            ordered_exp_integral(make_key([float(i)], 0.0, 1.0))
        assert cache_stats()["size"] <= 8
        configure_cache(1 << 20)

    def test_batch_matches_single(self):
        keys = [make_key([float(i), -2.0], 0.0, 0.5) for i in range(10)]
        assert batch_integrals(keys) == [ordered_exp_integral(k) for k in keys]


class TestFastRoute:
    def test_empty_rows(self):
        out = ordered_exp_integrals_fast(np.zeros((3, 0)), 0.0, 1.0)
        assert np.allclose(out, 1.0)

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            ordered_exp_integrals_fast(np.zeros(4), 0.0, 1.0)
        with pytest.raises(ValueError):
            ordered_exp_integrals_fast(np.zeros((2, 2)), 1.0, 0.0)

    def test_chunking_invariance(self):
        mu = np.random.default_rng(3).uniform(-20, 20, (300, 4))
        a = ordered_exp_integrals_fast(mu, 0.0, 0.5, chunk=300)
        b = ordered_exp_integrals_fast(mu, 0.0, 0.5, chunk=7)
        assert np.array_equal(a, b)
