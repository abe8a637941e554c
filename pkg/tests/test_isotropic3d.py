import mpmath
import numpy as np
import pytest

from gbec_lab.core.bose_special import bose_fn, zeta
from gbec_lab.core.errors import DomainError, NoSolution
from gbec_lab.core.isotropic3d import (
    IsotropicConfig,
    alpha_above_tc_iso,
    condensate_fraction_iso,
    critical_temperature_iso,
    excited_occupation_iso,
    ground_alpha_iso,
    level_spacing_iso,
    normal_occupation_iso,
    oscillator_degeneracy,
)


class TestCriticalTemperature:
    def test_value(self):
        assert critical_temperature_iso() == pytest.approx(0.9405, abs=1e-4)

    def test_against_mpmath(self):
        expected = float(mpmath.zeta(3) ** (-mpmath.mpf(1) / 3))
        assert critical_temperature_iso() == pytest.approx(expected, rel=1e-12)

    def test_cube_inverts_zeta(self):
        assert critical_temperature_iso() ** 3 * zeta(3.0) == pytest.approx(1.0, rel=1e-14)


class TestCondensateFraction:
    @pytest.mark.parametrize("t, expected", [(0.0, 1.0), (0.5, 0.875), (1.0, 0.0), (2.0, 0.0)])
    def test_values(self, t, expected):
        assert condensate_fraction_iso(t) == pytest.approx(expected)

    def test_negative_temperature(self):
        with pytest.raises(DomainError):
            condensate_fraction_iso(-0.1)


class TestNormalPhase:
    def test_alpha_vanishes_at_tc(self):
        assert alpha_above_tc_iso(1.0) == 0.0

    def test_number_equation(self):
        t = 2.0
        alpha = alpha_above_tc_iso(t)
        assert bose_fn(3.0, alpha) == pytest.approx(zeta(3.0) / t ** 3, rel=1e-10)

    def test_alpha_grows_with_temperature(self):
        alphas = [alpha_above_tc_iso(t) for t in (1.1, 1.5, 3.0, 10.0, 50.0)]
        assert np.all(np.diff(alphas) > 0)
        assert alphas[-1] > 10.0

    def test_no_normal_alpha_below_tc(self):
        with pytest.raises(NoSolution):
            alpha_above_tc_iso(0.5)

    def test_occupation_uses_bose_factor(self):
        occ = normal_occupation_iso(1, 1e5, 1.5)
        assert 0.0 < occ < excited_occupation_iso(1, 1e5, 1.0)


class TestCondensedPhase:
    def test_ground_alpha(self):
        assert ground_alpha_iso(0.5, 1e5) == pytest.approx(1.0 / (0.875 * 1e5))

    def test_ground_alpha_needs_condensate(self):
        with pytest.raises(NoSolution):
            ground_alpha_iso(1.0, 1e5)

    @pytest.mark.parametrize("p, g", [(0, 1), (1, 3), (2, 6), (3, 10)])
    def test_degeneracy(self, p, g):
        assert oscillator_degeneracy(p) == g

    def test_excited_state_scaling(self):
        ratio = excited_occupation_iso(1, 2e6, 0.5) / excited_occupation_iso(1, 1e6, 0.5)
        assert ratio == pytest.approx(2.0 ** (-2.0 / 3.0), rel=1e-12)

    def test_excited_state_is_microscopic(self):
        assert excited_occupation_iso(1, 1e12, 0.5) < 1e-7

    def test_ground_state_is_not_an_excited_state(self):
        with pytest.raises(DomainError):
            excited_occupation_iso(0, 1e6, 0.5)

    def test_spacing_shrinks_with_n(self):
        assert level_spacing_iso(0.5, 1e6) == pytest.approx(level_spacing_iso(0.5, 1e3) / 10.0)


class TestAgainstExactSummation:
    def test_condensate_fraction(self, exact):
        sol = exact(IsotropicConfig(1e5), 0.5)
        assert abs(sol.f_g - 0.875) / 0.875 < 0.02

    def test_first_excited_level(self, exact):
        n = 1e6
        sol = exact(IsotropicConfig(n), 0.5)
        first = int(np.flatnonzero(sol.levels.labels["p"] == 1)[0])
        per_state = sol.occupations[first] / sol.levels.degeneracy[first] / n
        assert per_state == pytest.approx(excited_occupation_iso(1, n, 0.5), rel=0.05)

    def test_finite_size_gap_closes(self, exact):
        gaps = [abs(exact(IsotropicConfig(n), 0.5).f_g - 0.875) for n in (1e3, 1e4, 1e5)]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_normal_phase_has_no_condensate(self, exact):
        assert exact(IsotropicConfig(1e5), 1.5).f_g < 1e-3
