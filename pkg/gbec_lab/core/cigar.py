"""
Anisotropic (cigar) harmonic trap: two-step condensation

Below Tc the condensate f0 = 1 - t^3 collects in the band of p_perp = 0
states. Only below the lower transition T1 does the single ground state
take a macroscopic share f_g of it. Two thermodynamic limits are modelled:

  * standard: aspect ratio Delta fixed, K = (N/Delta)^{2/3}; T1 merges with Tc
  * exponential (BZ): Delta = exp(g L_perp^2), N = l^3 exp(gamma l^2), K = l^2;
    T1 stays at a fixed fraction of Tc

All temperatures are t = T/Tc with Tc/T0 = zeta(3)^{-1/3}.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple

from .bose_special import zeta
from .errors import DomainError, NoSolution
from .isotropic3d import condensate_fraction_iso, critical_temperature_iso
from .roots import solve_bracketed, solve_log_bracketed
from ..utils.logging import get_logger

logger = get_logger(__name__)

# T1 this close to Tc counts as merged with the upper transition
MERGE_THRESHOLD = 0.99

FIG_COLUMNS = ["t", "f0", "fg"]


class LimitMode(str, Enum):
    STANDARD = "standard"
    BZ = "bz"


class Branch(str, Enum):
    MACROSCOPIC = "macroscopic"
    MICROSCOPIC = "microscopic"


@dataclass(frozen=True)
class BandAlpha:
    """alpha of the band with its logarithm, which survives underflow"""
    alpha: float
    log_alpha: float


@dataclass(frozen=True)
class T1Estimate:
    """Lower transition temperature from t = A (1 - t^3)"""
    t1_over_tc: float
    first_iterate: float
    merged: bool


@dataclass(frozen=True)
class CigarConfig:
    """
    Cigar trap geometry

    Attributes:
        n_particles: Particle number N
        delta: Aspect ratio L_par/L_perp (standard mode)
        limit_mode: standard or bz
        bz_gamma: Reduced exponent gamma (bz mode)
        c_const: Order-one constant in ln(cN) of the T1 estimate
    """
    n_particles: float
    delta: float = 5.6e4
    limit_mode: LimitMode = LimitMode.STANDARD
    bz_gamma: float = 1.6
    c_const: float = 1.0

    def __post_init__(self):
        if not self.n_particles >= 1:
            raise DomainError(f"n_particles must be >= 1, got {self.n_particles}")
        if not self.delta > 0:
            raise DomainError(f"delta must be > 0, got {self.delta}")
        if not self.bz_gamma > 0:
            raise DomainError(f"bz_gamma must be > 0, got {self.bz_gamma}")
        if not 0.0 < self.c_const <= 1.0:
            raise DomainError(f"c_const must lie in (0, 1], got {self.c_const}")
        object.__setattr__(self, "limit_mode", LimitMode(self.limit_mode))

    @property
    def k(self) -> float:
        if self.limit_mode is LimitMode.BZ:
            return bz_geometry(self.n_particles, self.bz_gamma)[1]
        return k_parameter(self.n_particles, self.delta)

    @property
    def effective_delta(self) -> float:
        """Aspect ratio implied by N and K, N / K^{3/2}"""
        return self.n_particles / self.k ** 1.5


@dataclass
class TwoStepReport:
    """Condensate fractions of a cigar trap at one temperature"""
    t: float
    tc_over_t0: float
    t1_over_tc: float
    f0: float
    fg: float
    alpha: BandAlpha
    branch: Branch = Branch.MACROSCOPIC
    extras: dict = field(default_factory=dict)


def k_parameter(n_particles: float, delta: float) -> float:
    """K = (N/Delta)^{2/3}"""
    if not n_particles > 0 or not delta > 0:
        raise DomainError(f"K needs N > 0 and Delta > 0, got N={n_particles}, Delta={delta}")
    return (n_particles / delta) ** (2.0 / 3.0)


def _t0_over_t(t: float) -> float:
    return 1.0 / (t * critical_temperature_iso())


def _check_t(t: float) -> None:
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0, 1), got {t}")


def alpha_band(t: float, f0: float, k: float) -> BandAlpha:
    """
    alpha = exp(-f0 (T0/T) K) of the condensed band

    Args:
        t: Reduced temperature in (0, 1)
        f0: Condensate fraction in [0, 1]
        k: Anisotropy parameter K

    Returns:
        BandAlpha; alpha underflows to 0 for large K while log_alpha stays exact
    """
    _check_t(t)
    if not 0.0 <= f0 <= 1.0:
        raise DomainError(f"f0 must lie in [0, 1], got {f0}")
    if not k > 0:
        raise DomainError(f"K must be > 0, got {k}")
    log_alpha = -f0 * _t0_over_t(t) * k
    return BandAlpha(alpha=math.exp(log_alpha), log_alpha=log_alpha)


def _solve_t1(amplitude: float, what: str) -> float:
    return solve_bracketed(lambda t: amplitude * (1.0 - t ** 3) - t, 0.0, 1.0, what=what)


def t1_first_iterate(n_particles: float, k: float, c: float = 1.0) -> float:
    """T1/Tc with f0(T1) = 1, the first step of the T1 iteration"""
    if not n_particles >= 2 or not k > 0 or not 0.0 < c <= 1.0:
        raise DomainError(f"T1 needs N >= 2, K > 0, 0 < c <= 1; got N={n_particles}, K={k}, c={c}")
    if c * n_particles <= 1.0:
        raise DomainError(f"ln(cN) must be positive, got c*N={c * n_particles}")
    return k * zeta(3.0) ** (1.0 / 3.0) / math.log(c * n_particles)


def t1_standard(n_particles: float, k: float, c: float = 1.0) -> T1Estimate:
    """
    Lower transition from T1/Tc = f0(T1) K zeta(3)^{1/3} / ln(cN)

    The map t -> A (1 - t^3) is not a contraction once A is large, so the
    fixed point is bracketed on [0, 1] instead of iterated.

    Args:
        n_particles: Particle number N
        k: Anisotropy parameter K
        c: Order-one constant inside the logarithm

    Returns:
        T1Estimate with the converged value, the f0 = 1 first iterate and
        a merged flag when T1 is within 1% of Tc
    """
    first = t1_first_iterate(n_particles, k, c)
    t1 = _solve_t1(first, "T1/Tc")
    merged = t1 > MERGE_THRESHOLD
    if merged:
        logger.info(f"T1/Tc = {t1:.6f}: lower transition merges with Tc (N={n_particles:.3g}, K={k:.6g})")
    return T1Estimate(t1_over_tc=t1, first_iterate=first, merged=merged)


def _fg_solve(
    t: float,
    n_particles: float,
    k: float,
    f0: Optional[float],
    log_term: Callable[[float, float], float],
    what: str,
) -> float:
    _check_t(t)
    if not n_particles >= 2 or not k > 0:
        raise DomainError(f"fg needs N >= 2 and K > 0, got N={n_particles}, K={k}")
    f0 = condensate_fraction_iso(t) if f0 is None else f0
    if not 0.0 < f0 <= 1.0:
        raise DomainError(f"f0 must lie in (0, 1], got {f0}")

    pref = t * critical_temperature_iso() / k
    x = k * _t0_over_t(t) / n_particles

    def residual(fg: float) -> float:
        return f0 + pref * log_term(x, 1.0 / (n_particles * fg)) - fg

    if residual(f0) >= 0.0:
        return f0
    lo = min(1.0 / n_particles ** 2, 1e-3 * f0)
    if residual(lo) <= 0.0:
        return lo
    fg = solve_log_bracketed(residual, lo, f0, what=what)
    logger.debug(f"{what}: t={t:.6g} N={n_particles:.3g} K={k:.6g} -> {fg:.10g}")
    return fg


def fg_self_consistent(
    t: float,
    n_particles: float,
    k: float,
    f0: Optional[float] = None,
) -> float:
    """
    Ground-state fraction from
    f_g = f0 + (T/T0K) ln[1 - exp(-T0K/NT) / (1 + 1/(N f_g))]

    The right side decreases as f_g grows, so the fixed point is unique and
    is bracketed in log f_g between ~1/N^2 and f0. Deep below the
    macroscopic branch it lands on the microscopic value, still positive.

    Args:
        t: Reduced temperature in (0, 1)
        n_particles: Particle number N
        k: Anisotropy parameter K
        f0: Band population to use instead of 1 - t^3

    Returns:
        f_g in (0, f0]
    """
    def log_term(x: float, y: float) -> float:
        return math.log(y - math.expm1(-x)) - math.log1p(y)

    return _fg_solve(t, n_particles, k, f0, log_term, "fg")


def fg_expanded(t: float, n_particles: float, k: float, f0: Optional[float] = None) -> float:
    """f_g with the exponential expanded: f_g = f0 + (T/T0K) ln(T0K/NT + 1/(N f_g))"""
    return _fg_solve(t, n_particles, k, f0, lambda x, y: math.log(x + y), "fg(expanded)")


def fg_leading(t: float, n_particles: float, k: float) -> float:
    """Leading large-N form f0 - (T/T0K) ln N, clipped at 0"""
    _check_t(t)
    pref = t * critical_temperature_iso() / k
    return max(0.0, condensate_fraction_iso(t) - pref * math.log(n_particles))


def ground_state_branch(fg: float, n_particles: float) -> Branch:
    """Microscopic when f_g N is below sqrt(N)"""
    if fg < 1.0 / math.sqrt(n_particles):
        return Branch.MICROSCOPIC
    return Branch.MACROSCOPIC


def bz_geometry(n_particles: float, bz_gamma: float) -> Tuple[float, float]:
    """
    Solve N = l^3 exp(gamma l^2) for the transverse length l

    Args:
        n_particles: Particle number, N >= 2
        bz_gamma: Reduced exponent gamma > 0

    Returns:
        (l_perp, K = l_perp^2)
    """
    if not n_particles >= 2 or not bz_gamma > 0:
        raise NoSolution(f"BZ geometry needs N >= 2 and gamma > 0, got N={n_particles}, gamma={bz_gamma}")
    log_n = math.log(n_particles)

    # in u = l^2: gamma u + 1.5 ln u = ln N, increasing in u
    hi = max(log_n / bz_gamma, 1.0)
    u = solve_bracketed(lambda v: bz_gamma * v + 1.5 * math.log(v) - log_n,
                        1e-12, hi, xtol=1e-15, what="l_perp^2")
    return math.sqrt(u), u


def bz_parameters_from_aspect(n_particles: float, delta: float) -> Tuple[float, float]:
    """
    Read (N, Delta) as a member of the BZ family

    Args:
        n_particles: Particle number N
        delta: Aspect ratio Delta = exp(gamma l^2)

    Returns:
        (l_perp, gamma) with l_perp = (N/Delta)^{1/3}, gamma = ln(Delta)/l_perp^2
    """
    if not n_particles > 0 or not delta > 1:
        raise DomainError(f"Need N > 0 and Delta > 1, got N={n_particles}, Delta={delta}")
    ell = (n_particles / delta) ** (1.0 / 3.0)
    return ell, math.log(delta) / ell ** 2


def fg_tl_limit(t: float, bz_gamma: float) -> float:
    """BZ thermodynamic limit f_g = max(0, 1 - t^3 - t gamma / zeta(3)^{1/3})"""
    if not 0.0 <= t < 1.0:
        raise DomainError(f"t must lie in [0, 1), got {t}")
    return max(0.0, 1.0 - t ** 3 - t * bz_gamma / zeta(3.0) ** (1.0 / 3.0))


def t1_bz(bz_gamma: float) -> float:
    """T1/Tc in the BZ limit: root of t = zeta(3)^{1/3} (1 - t^3) / gamma"""
    if not bz_gamma > 0:
        raise DomainError(f"gamma must be > 0, got {bz_gamma}")
    return _solve_t1(zeta(3.0) ** (1.0 / 3.0) / bz_gamma, "T1/Tc(BZ)")


def t1_bz_finite(n_particles: float, bz_gamma: float, c: float = 1.0) -> T1Estimate:
    """T1 estimate at finite N with the exact BZ K = l_perp^2"""
    _, k = bz_geometry(n_particles, bz_gamma)
    return t1_standard(n_particles, k, c)


def band_occupation(p_z: int, t: float, n_particles: float, k: float, alpha: float) -> float:
    """Occupation fraction 1/((T0K/T)(p_z/N) + alpha)/N of band level p_z"""
    if p_z < 0:
        raise DomainError(f"p_z must be >= 0, got {p_z}")
    denominator = k * _t0_over_t(t) * p_z / n_particles + alpha
    if denominator <= 0.0:
        raise DomainError("Band occupation of the p_z = 0 level needs alpha > 0")
    return 1.0 / denominator / n_particles


def two_step_report(t: float, cfg: CigarConfig) -> TwoStepReport:
    """f0, f_g, alpha and T1 of a cigar trap at reduced temperature t"""
    k = cfg.k
    if cfg.limit_mode is LimitMode.BZ:
        t1 = t1_bz(cfg.bz_gamma)
    else:
        t1 = t1_standard(cfg.n_particles, k, cfg.c_const).t1_over_tc
    f0 = condensate_fraction_iso(t)
    fg = fg_self_consistent(t, cfg.n_particles, k)
    report = TwoStepReport(
        t=t,
        tc_over_t0=critical_temperature_iso(),
        t1_over_tc=t1,
        f0=f0,
        fg=fg,
        alpha=alpha_band(t, f0, k),
        branch=ground_state_branch(fg, cfg.n_particles),
    )
    if report.branch is Branch.MICROSCOPIC:
        logger.info(f"t={t:.4g}: ground state on the microscopic branch (fg={fg:.3e})")
    if cfg.limit_mode is LimitMode.BZ:
        report.extras["fg_tl"] = fg_tl_limit(t, cfg.bz_gamma)
    return report


def fig_row(t: float, n_particles: float, k: float) -> List[float]:
    """f0 and f_g at t; both vanish at and above Tc"""
    f0 = condensate_fraction_iso(t)
    if f0 <= 0.0:
        return [0.0, 0.0]
    return [f0, fg_self_consistent(t, n_particles, k)]
