import math

import mpmath
import numpy as np
import pytest
from scipy import special

from gbec_lab.core.bose_special import (
    bose_fn,
    bose_fn_inverse,
    coth_band_sum,
    f_half_asymptotic,
    zeta,
)
from gbec_lab.core.errors import DivergentSeries, DomainError, NoSolution

ALPHAS = [1e-6, 1e-3, 0.1, 1.0, 5.0]


def polylog(n, alpha):
    return float(mpmath.polylog(n, mpmath.exp(-alpha)))


def direct_lattice_sum(a, gamma, s_max=1_000_000):
    """sum over |s| <= s_max plus the midpoint integral of the remainder"""
    s = np.arange(1, s_max + 1, dtype=float)
    head = 1.0 / gamma + 2.0 * np.sum(1.0 / (a * s * s + gamma))
    edge = math.sqrt(a / gamma) * (s_max + 0.5)
    tail = 2.0 * (math.pi / 2.0 - math.atan(edge)) / math.sqrt(a * gamma)
    return head + tail


class TestZeta:
    def test_matches_mpmath(self):
        assert zeta(3.0) == pytest.approx(float(mpmath.zeta(3)), rel=1e-12)

    def test_matches_scipy(self):
        assert zeta(1.5) == pytest.approx(float(special.zeta(1.5)), rel=1e-12)

    def test_divergent_orders(self):
        with pytest.raises(DivergentSeries):
            zeta(1.0)


class TestBoseFn:
    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("n", [1.5, 3.0])
    def test_integer_and_half_orders_match_polylog(self, n, alpha):
        assert bose_fn(n, alpha) == pytest.approx(polylog(n, alpha), rel=1e-12)

    def test_half_order_against_direct_sum(self):
        alpha = 0.01
        l = np.arange(1, 20_001, dtype=float)
        expected = float(np.sum(np.exp(-alpha * l) / np.sqrt(l)))
        assert bose_fn(0.5, alpha) == pytest.approx(expected, rel=1e-12)

    def test_value_at_zero_is_zeta(self):
        assert bose_fn(3.0, 0.0) == pytest.approx(float(mpmath.zeta(3)), rel=1e-12)
        assert bose_fn(1.5, 0.0) == pytest.approx(float(mpmath.zeta(1.5)), rel=1e-12)

    def test_large_alpha_is_leading_exponential(self):
        assert bose_fn(3.0, 40.0) / math.exp(-40.0) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("n", [0.5, 1.5, 3.0])
    def test_strictly_decreasing(self, n):
        values = [bose_fn(n, a) for a in np.geomspace(1e-8, 20.0, 40)]
        assert np.all(np.diff(values) < 0)

    @pytest.mark.parametrize("n", [0.5, 1.0])
    def test_diverges_at_zero_for_low_orders(self, n):
        with pytest.raises(DivergentSeries):
            bose_fn(n, 0.0)

    def test_negative_alpha(self):
        with pytest.raises(DomainError):
            bose_fn(1.5, -1e-3)

    def test_tail_start_does_not_change_the_value(self):
        alpha = 1e-5
        assert bose_fn(1.5, alpha, tail_start=200) == pytest.approx(bose_fn(1.5, alpha), rel=1e-12)


class TestHalfOrderAsymptotic:
    def test_rough_at_moderate_alpha(self):
        alpha = 0.01
        gap = abs(bose_fn(0.5, alpha) - f_half_asymptotic(alpha)) / bose_fn(0.5, alpha)
        assert gap < 0.10

    def test_close_at_small_alpha(self):
        alpha = 1e-6
        gap = abs(bose_fn(0.5, alpha) - f_half_asymptotic(alpha)) / bose_fn(0.5, alpha)
        assert gap < 2e-3

    def test_needs_positive_alpha(self):
        with pytest.raises(DomainError):
            f_half_asymptotic(0.0)


class TestBoseFnInverse:
    @pytest.mark.parametrize("n, alphas", [
        (0.5, np.geomspace(1e-8, 20.0, 12)),
        (1.5, np.geomspace(1e-8, 20.0, 12)),
        # F_3 is flat near alpha = 0, so small alpha is ill-conditioned
        (3.0, np.geomspace(1e-4, 20.0, 12)),
    ])
    def test_recovers_alpha(self, n, alphas):
        for alpha in alphas:
            assert bose_fn_inverse(n, bose_fn(n, alpha)) == pytest.approx(alpha, rel=1e-9)

    def test_forward_residual(self):
        target = 0.8
        alpha = bose_fn_inverse(3.0, target)
        assert abs(bose_fn(3.0, alpha) - target) / target <= 1e-10

    def test_zeta_maps_to_zero(self):
        assert bose_fn_inverse(3.0, zeta(3.0)) == 0.0

    def test_just_below_zeta_is_tiny(self):
        alpha = bose_fn_inverse(1.5, 2.61)
        assert 0.0 < alpha < 1e-5

    def test_above_zeta(self):
        with pytest.raises(NoSolution):
            bose_fn_inverse(1.5, 2.7)

    @pytest.mark.parametrize("target", [0.0, -1.0])
    def test_nonpositive_target(self, target):
        with pytest.raises(NoSolution):
            bose_fn_inverse(3.0, target)

    def test_half_order_has_no_ceiling(self):
        alpha = bose_fn_inverse(0.5, 500.0)
        assert bose_fn(0.5, alpha) == pytest.approx(500.0, rel=1e-10)

    def test_half_order_large_target(self):
        alpha = bose_fn_inverse(0.5, 1e12)
        assert 0.0 < alpha < 1e-20
        assert bose_fn(0.5, alpha) == pytest.approx(1e12, rel=1e-9)

    def test_half_order_beyond_float_range(self):
        with pytest.raises(NoSolution):
            bose_fn_inverse(0.5, 1e200)


class TestCothBandSum:
    def test_unit_parameters(self):
        assert coth_band_sum(1.0, 1.0) == pytest.approx(math.pi / math.tanh(math.pi), rel=1e-14)

    @pytest.mark.parametrize("a", [1e-3, 1.0, 1e3])
    @pytest.mark.parametrize("gamma", [1e-4, 1.0, 10.0])
    def test_matches_direct_sum(self, a, gamma):
        assert coth_band_sum(a, gamma) == pytest.approx(direct_lattice_sum(a, gamma), rel=1e-10)

    def test_saturated_coth(self):
        assert coth_band_sum(1.0, 1e4) == pytest.approx(math.pi / 100.0, rel=1e-14)

    def test_small_gamma_is_ground_state_dominated(self):
        gamma = 1e-8
        assert coth_band_sum(1.0, gamma) * gamma == pytest.approx(1.0, rel=1e-6)

    @pytest.mark.parametrize("a, gamma", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)])
    def test_domain(self, a, gamma):
        with pytest.raises(DomainError):
            coth_band_sum(a, gamma)
