import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from umpbounds.numerics import (
    LogValue,
    binary_entropy,
    gaussian_Q,
    gaussian_Q_inv,
    log_add,
    log_binomial,
    log_binomial_row,
)


class TestLogValue:
    def test_zero_flag(self):
        z = LogValue.zero()
        assert z.is_zero
        assert z.to_linear() == 0.0
        assert LogValue.from_linear(0.0).is_zero

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            LogValue.from_linear(-1.0)

    @given(st.floats(min_value=-690.0, max_value=690.0))
    def test_round_trip(self, lm):
        r = math.exp(lm)
        back = LogValue.from_linear(r).to_linear()
        assert abs(back - r) <= 1e-14 * r

    def test_round_trip_moderate_range(self):
        for r in (1e-50, 1e-20, 3.7, 1e20, 1e50):
            back = LogValue.from_linear(r).to_linear()
            assert abs(back - r) <= 1e-14 * r

    def test_round_trip_extremes(self):
        # at |log r| ~ 690 a float64 log magnitude quantizes the value to
        # half an ulp of the log, ~5.7e-14 relative; 1e-14 is unattainable
        for r in (1e-300, 1e-250, 1e250, 1e300):
            back = LogValue.from_linear(r).to_linear()
            assert abs(back - r) <= 6e-14 * r


class TestLogAdd:
    def test_zero_identity(self):
        assert log_add(LogValue.zero(), LogValue.zero()).is_zero
        v = LogValue.from_linear(3.5)
        assert log_add(v, LogValue.zero()) == v
        assert log_add(LogValue.zero(), v) == v

    def test_one_plus_one(self):
        s = log_add(LogValue.one(), LogValue.one())
        assert s.log_magnitude == pytest.approx(math.log(2.0), abs=1e-14)

    def test_tiny_magnitudes(self):
        # 1e-200 + 1e-200 = 2e-200, checked against an exact log identity
        a = LogValue.from_linear(1e-200)
        s = log_add(a, a)
        expected = math.log(2.0) + math.log(1e-200)
        assert s.log_magnitude == pytest.approx(expected, rel=1e-14)

    @given(
        st.floats(min_value=-460.0, max_value=460.0),
        st.floats(min_value=-460.0, max_value=460.0),
    )
    def test_commutative(self, x, y):
        a, b = LogValue(x), LogValue(y)
        assert log_add(a, b).log_magnitude == log_add(b, a).log_magnitude

    @given(
        st.floats(min_value=-460.0, max_value=460.0),
        st.floats(min_value=-460.0, max_value=460.0),
        st.floats(min_value=-460.0, max_value=460.0),
    )
    def test_associative(self, x, y, z):
        a, b, c = LogValue(x), LogValue(y), LogValue(z)
        left = log_add(log_add(a, b), c).log_magnitude
        right = log_add(a, log_add(b, c)).log_magnitude
        # a log-magnitude gap of d means a relative value error of ~d
        assert abs(left - right) <= 1e-12


class TestLogBinomial:
    def test_trivial(self):
        assert log_binomial(1, 0) == 0.0
        assert log_binomial(5, 5) == pytest.approx(0.0, abs=1e-12)

    def test_small_exact(self):
        assert log_binomial(4, 2) == pytest.approx(math.log(6.0), abs=1e-12)

    def test_against_big_integer(self):
        expected = math.log(math.comb(100, 50))
        assert log_binomial(100, 50) == pytest.approx(expected, abs=1e-10)

    def test_large_n_absolute_error(self):
        for n, t in [(10_000, 5_000), (10_000, 137), (9_999, 3_333)]:
            expected = math.log(math.comb(n, t))
            assert log_binomial(n, t) == pytest.approx(expected, abs=1e-10)

    def test_exact_switch(self):
        assert log_binomial(64, 20, exact=True) == math.log(math.comb(64, 20))

    def test_all_small_n_relative(self):
        for n in range(61):
            row = log_binomial_row(n)
            for t in range(n + 1):
                assert math.exp(row[t]) == pytest.approx(
                    math.comb(n, t), rel=1e-12
                )

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            log_binomial(3, 4)
        with pytest.raises(ValueError):
            log_binomial(-1, 0)
        with pytest.raises(ValueError):
            log_binomial(3, -1)


class TestGaussianQ:
    def test_symmetry_point(self):
        assert gaussian_Q(0.0) == 0.5

    def test_deep_tail(self):
        assert gaussian_Q(40.0) < 1e-300

    def test_known_decile(self):
        assert gaussian_Q(1.2815515655) == pytest.approx(0.1, abs=1e-10)

    @given(st.floats(min_value=-37.0, max_value=37.0))
    def test_complement(self, x):
        assert gaussian_Q(x) + gaussian_Q(-x) == pytest.approx(1.0, abs=1e-12)

    @given(
        st.floats(min_value=-37.0, max_value=36.0),
        st.floats(min_value=1e-6, max_value=1.0),
    )
    def test_monotone_decreasing(self, x, dx):
        assert gaussian_Q(x + dx) <= gaussian_Q(x)


class TestGaussianQInv:
    def test_median(self):
        assert gaussian_Q_inv(0.5) == 0.0

    def test_decile(self):
        assert gaussian_Q_inv(0.1) == pytest.approx(1.2815515655446004, abs=1e-9)

    def test_antisymmetry(self):
        assert gaussian_Q_inv(0.9) == pytest.approx(-gaussian_Q_inv(0.1), abs=1e-12)

    def test_domain(self):
        for bad in (0.0, 1.0, -0.1, 1.1):
            with pytest.raises(ValueError):
                gaussian_Q_inv(bad)

    def test_round_trip_grid(self):
        for eps in (1e-9, 1e-6, 1e-3, 0.1, 0.5, 0.9, 1 - 1e-3, 1 - 1e-9):
            assert gaussian_Q(gaussian_Q_inv(eps)) == pytest.approx(eps, rel=1e-9)

    @settings(max_examples=200)
    @given(st.floats(min_value=1e-9, max_value=1 - 1e-9))
    def test_round_trip_property(self, eps):
        assert gaussian_Q(gaussian_Q_inv(eps)) == pytest.approx(eps, rel=1e-9)

    @given(st.floats(min_value=-5.0, max_value=5.9))
    def test_inverse_of_Q(self, x):
        # below x ~ -5.2, Q(x) sits within ~1e-8 of 1.0 and a float64 cannot
        # resolve the tail any finer; the x-side round trip holds above that
        assert gaussian_Q_inv(gaussian_Q(x)) == pytest.approx(x, abs=1e-9)

    def test_inverse_of_Q_near_one_quantization(self):
        for x in (-5.9, -5.5):
            assert gaussian_Q_inv(gaussian_Q(x)) == pytest.approx(x, abs=5e-8)


class TestBinaryEntropy:
    def test_fair_coin(self):
        assert binary_entropy(0.5) == 1.0

    def test_limits(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_bsc_benchmark_value(self):
        # high-precision reference: -0.11 log2 0.11 - 0.89 log2 0.89
        assert binary_entropy(0.11) == pytest.approx(0.4999159581645280, abs=1e-12)

    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_symmetry(self, p):
        assert binary_entropy(p) == pytest.approx(binary_entropy(1.0 - p), abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            binary_entropy(1.5)
