"""
Box with sides L_i = a H^{nu_i}, nu1 >= nu2 >= nu3 > 0, nu1 + nu2 + nu3 = 1

H is the thermodynamic-limit dial (V = a^3 H). The largest exponent decides
what condenses:

  * nu1 < 1/2: a single macroscopically occupied state (type I)
  * nu1 = 1/2: a band of macroscopically occupied states (type II)
  * nu1 > 1/2: a macroscopically occupied band of microscopic states (type III)

State densities are in units of 1/a^3 and gamma = alpha V / a^3; the
temperature unit is T* as for the prism, so b = pi T*/T.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import List, Sequence, Tuple, Union

import numpy as np

from .bose_special import coth_band_sum
from .errors import DomainError, InvalidExponents, NoSolution
from .prism import condensate_fraction_prism, critical_temperature_prism
from .roots import loglog_slope, solve_log_bracketed
from ..utils.logging import get_logger

logger = get_logger(__name__)

EXPONENT_TOL = 1e-12

# Classification this close to nu1 = 1/2 gets a warning
PROXIMITY_WARN = 1e-6

DEFAULT_H_LADDER = tuple(10.0 ** k for k in range(4, 11))
DEFAULT_CUTOFF_C = 1e4

SCAN_COLUMNS = ["H", "gamma", "max_state_density", "k0", "s0"]

Exponent = Union[float, Fraction]


class GbecClass(str, Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    TYPE_III = "TypeIII"


@dataclass(frozen=True)
class BoxExponents:
    """
    Scaling exponents of the box sides

    Attributes:
        nu1, nu2, nu3: Exponents, ordered and summing to 1
        h_param: Thermodynamic-limit dial H > 1
    """
    nu1: Exponent
    nu2: Exponent
    nu3: Exponent
    h_param: float = 1e6

    def __post_init__(self):
        nus = (self.nu1, self.nu2, self.nu3)
        if not self.nu1 >= self.nu2 >= self.nu3 > 0:
            raise InvalidExponents(f"Exponents must satisfy nu1 >= nu2 >= nu3 > 0, got {nus}")
        if self.is_exact:
            if sum(nus) != 1:
                raise InvalidExponents(f"Exponents must sum to 1, got {sum(nus)}")
        elif abs(sum(float(nu) for nu in nus) - 1.0) > EXPONENT_TOL:
            raise InvalidExponents(f"Exponents must sum to 1 within {EXPONENT_TOL:g}, got {sum(nus)!r}")
        if not self.h_param > 1:
            raise DomainError(f"H must be > 1, got {self.h_param}")

    @classmethod
    def parse(cls, text: str, h_param: float = 1e6) -> "BoxExponents":
        """Parse "0.6,0.2,0.2" or "1/2,1/4,1/4" (fractions stay exact)"""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise InvalidExponents(f"Expected three exponents, got {text!r}")
        try:
            nus = [Fraction(p) if "/" in p else float(p) for p in parts]
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidExponents(f"Cannot parse exponents {text!r}: {e}") from e
        return cls(*nus, h_param=h_param)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(nu, Rational) for nu in (self.nu1, self.nu2, self.nu3))

    @property
    def eta(self) -> float:
        """2 nu1 - 1, the growth exponent of gamma for type III"""
        return 2.0 * float(self.nu1) - 1.0

    def with_h(self, h_param: float) -> "BoxExponents":
        return BoxExponents(self.nu1, self.nu2, self.nu3, h_param=h_param)


def classify(nu: BoxExponents) -> GbecClass:
    """
    Condensation type from the sign of nu1 - 1/2

    Args:
        nu: Box exponents

    Returns:
        GbecClass
    """
    if nu.is_exact:
        diff = Fraction(nu.nu1) - Fraction(1, 2)
        if diff == 0:
            return GbecClass.TYPE_II
        return GbecClass.TYPE_I if diff < 0 else GbecClass.TYPE_III

    diff = float(nu.nu1) - 0.5
    if abs(diff) <= EXPONENT_TOL:
        return GbecClass.TYPE_II
    if abs(diff) < PROXIMITY_WARN:
        logger.warning(f"nu1 = {float(nu.nu1)!r} is within {PROXIMITY_WARN:g} of 1/2; "
                       f"classification is sensitive to rounding")
    return GbecClass.TYPE_I if diff < 0 else GbecClass.TYPE_III


def _b(t: float) -> float:
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0, 1), got {t}")
    return math.pi / (t * critical_temperature_prism())


def state_density(s: Tuple[int, int, int], nu: BoxExponents, t: float, gamma_big: float) -> float:
    """
    Density a^3 rho_s = 1 / [b sum_i H^{1 - 2 nu_i} s_i^2 + gamma] of state s

    Args:
        s: Quantum numbers (s1, s2, s3)
        nu: Box exponents with H
        t: Reduced temperature in (0, 1)
        gamma_big: gamma = alpha V / a^3

    Returns:
        a^3 rho_s
    """
    b = _b(t)
    h = nu.h_param
    kinetic = sum(h ** (1.0 - 2.0 * float(n)) * si * si for n, si in zip((nu.nu1, nu.nu2, nu.nu3), s))
    return 1.0 / (b * kinetic + gamma_big)


def _band_curvature(t: float, nu: BoxExponents) -> float:
    return _b(t) * nu.h_param ** (-nu.eta)


def _solve_band_gamma(t: float, nu: BoxExponents, what: str) -> float:
    if t >= 1.0:
        raise NoSolution(f"No condensed band at t={t}")
    f0 = condensate_fraction_prism(t)
    a = _band_curvature(t, nu)
    return solve_log_bracketed(lambda g: coth_band_sum(a, g) / f0 - 1.0,
                               1e-30, 1e30, what=what)


def solve_gamma_type2(t: float, nu: BoxExponents) -> float:
    """
    gamma of the type II band from sum_s 1/(b s^2 + gamma) = 1 - t^{3/2}

    The band curvature b carries no H, so gamma is O(1) in H.
    """
    if classify(nu) is not GbecClass.TYPE_II:
        raise DomainError(f"Type II solve needs nu1 = 1/2, got {nu.nu1}")
    return _solve_band_gamma(t, nu, "gamma(type II)")


def solve_gamma_type3(t: float, nu: BoxExponents) -> float:
    """
    gamma of the type III band, sum_s 1/(b H^{1-2nu1} s^2 + gamma) = 1 - t^{3/2}

    Returns:
        gamma, growing as H^{2 nu1 - 1}
    """
    if classify(nu) is not GbecClass.TYPE_III:
        raise DomainError(f"Type III solve needs nu1 > 1/2, got {nu.nu1}")
    return _solve_band_gamma(t, nu, "gamma(type III)")


def gamma_type3_closed_form(t: float, nu: BoxExponents) -> float:
    """Large-coth limit gamma = pi^2 H^{2nu1-1} / (b f0^2)"""
    f0 = condensate_fraction_prism(t)
    return math.pi ** 2 * nu.h_param ** nu.eta / (_b(t) * f0 ** 2)


def solve_gamma_type1(t: float) -> float:
    """gamma = 1/f0 from the macroscopic ground state, 1/gamma = a^3 rho_0"""
    f0 = condensate_fraction_prism(t)
    if f0 <= 0.0:
        raise NoSolution(f"No condensate at t={t}")
    return 1.0 / f0


def solve_gamma_box(t: float, nu: BoxExponents) -> float:
    """gamma for whichever type nu belongs to"""
    kind = classify(nu)
    if kind is GbecClass.TYPE_I:
        return solve_gamma_type1(t)
    if kind is GbecClass.TYPE_II:
        return solve_gamma_type2(t, nu)
    return solve_gamma_type3(t, nu)


def type1_excited_density(s: Tuple[int, int, int], nu: BoxExponents, t: float) -> float:
    """Density of an excited state of a type I box, gamma fixed by the ground state"""
    return state_density(s, nu, t, solve_gamma_type1(t))


def band_state_densities(nu: BoxExponents, t: float, gamma_big: float, s_max: int = 5) -> np.ndarray:
    """Densities of band states (s1, 0, 0) for |s1| <= s_max"""
    return np.array([state_density((s1, 0, 0), nu, t, gamma_big) for s1 in range(-s_max, s_max + 1)])


def cutoff_point(nu: BoxExponents, t: float, gamma_big: float, c: float = DEFAULT_CUTOFF_C) -> Tuple[float, float]:
    """
    Band cutoff where the kinetic term reaches C gamma

    Returns:
        (k0 a, s0) with s0 = sqrt(C gamma / (b H)) H^{nu1} and k0 = 2 pi s0 / L1
    """
    root = math.sqrt(c * gamma_big / (_b(t) * nu.h_param))
    return 2.0 * math.pi * root, root * nu.h_param ** float(nu.nu1)


def cutoff_diagnostics(
    nu: BoxExponents,
    t: float,
    h_ladder: Sequence[float] = DEFAULT_H_LADDER,
    c: float = DEFAULT_CUTOFF_C,
) -> Tuple[float, float]:
    """
    Scaling exponents of the cutoff momentum k0 and of the band width s0

    Args:
        nu: Box exponents, nu1 > 1/2
        t: Reduced temperature in (0, 1)
        h_ladder: Values of H, at least 3
        c: Occupation-drop threshold C

    Returns:
        (slope of k0 vs H, slope of s0 vs H); expected (nu1 - 1, 2 nu1 - 1)
    """
    if classify(nu) is not GbecClass.TYPE_III:
        raise DomainError(f"Cutoff diagnostics need nu1 > 1/2, got {nu.nu1}")
    points = [cutoff_point(nu.with_h(h), t, solve_gamma_type3(t, nu.with_h(h)), c) for h in h_ladder]
    k0_slope = loglog_slope(h_ladder, [p[0] for p in points])
    s0_slope = loglog_slope(h_ladder, [p[1] for p in points])
    logger.info(f"cutoff slopes for nu1={float(nu.nu1):g}: k0 {k0_slope:.4f}, s0 {s0_slope:.4f}")
    return k0_slope, s0_slope


def gamma_slope(nu: BoxExponents, t: float, h_ladder: Sequence[float] = DEFAULT_H_LADDER) -> float:
    """Fitted exponent of gamma(H) over the ladder"""
    return loglog_slope(h_ladder, [solve_gamma_box(t, nu.with_h(h)) for h in h_ladder])


def box_scan_row(h: float, nu: BoxExponents, t: float, c: float = DEFAULT_CUTOFF_C) -> List[float]:
    """gamma, max state density, k0 and s0 at one H"""
    nu_h = nu.with_h(h)
    if classify(nu_h) is GbecClass.TYPE_I:
        raise DomainError("Box scan needs nu1 >= 1/2: a type I box has no band")
    gamma = solve_gamma_box(t, nu_h)
    k0, s0 = cutoff_point(nu_h, t, gamma, c)
    return [gamma, 1.0 / gamma, k0, s0]


def box_scan_rows(
    nu: BoxExponents,
    t: float,
    h_ladder: Sequence[float] = DEFAULT_H_LADDER,
    c: float = DEFAULT_CUTOFF_C,
) -> List[List[float]]:
    """Rows of SCAN_COLUMNS over the H ladder"""
    return [[h] + box_scan_row(h, nu, t, c) for h in h_ladder]
