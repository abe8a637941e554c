"""
Exact grand-canonical summation over the discrete single-particle spectrum

For a geometry at reduced temperature t the levels with beta*epsilon below a
cutoff E_c are enumerated (ground state at 0), the rest is added as the
Boltzmann tail of the Weyl count Omega(E) = W E^kappa, and alpha is solved from

    sum_i g_i / (exp(beta*epsilon_i + alpha) - 1) + tail(alpha) = N

This is the finite-N reference for every large-N formula in gbec_lab.core.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple, Union

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import gammaincc

from .channel import ChannelConfig, band_curvature, condensate_fraction_channel, solve_gamma_channel
from .cigar import CigarConfig, fg_self_consistent
from .errors import CutoffTooTight, DomainError
from .isotropic3d import (
    IsotropicConfig,
    condensate_fraction_iso,
    critical_temperature_iso,
    level_spacing_iso,
)
from .prism import (
    PrismConfig,
    band_state_fraction_prism,
    condensate_fraction_prism,
    longitudinal_coefficient,
    transverse_coefficient,
)
from .roots import solve_bracketed, solve_log_bracketed
from ..utils.logging import get_logger

logger = get_logger(__name__)

Geometry = Union[IsotropicConfig, ChannelConfig, CigarConfig, PrismConfig]
Labels = Dict[str, np.ndarray]
BandSelector = Callable[[Labels], np.ndarray]

ALPHA_BRACKET = (1e-18, 1e2)
MAX_ITERATIONS = 200
CUTOFF_STEP = 4.0
MIN_CUTOFF = 10.0
CUTOFF_XTOL = 1e-6
MAX_LEVELS = 50_000_000

COMPARE_COLUMNS = ["t", "f0_analytic", "f0_exact", "fg_analytic", "fg_exact"]


@dataclass(frozen=True)
class SpectrumSpec:
    """
    A geometry plus the policy for truncating its spectrum

    Attributes:
        geometry: IsotropicConfig, ChannelConfig, CigarConfig or PrismConfig
        eps_tail: Largest tail population allowed, as a fraction of N
        cutoff: Largest cutoff E_c on beta*epsilon used while eps_tail allows
        max_cutoff: The cutoff is raised up to this value to meet eps_tail
    """
    geometry: Geometry
    eps_tail: float = 1e-6
    cutoff: float = 46.0
    max_cutoff: float = 60.0

    def __post_init__(self):
        if not isinstance(self.geometry, (IsotropicConfig, ChannelConfig, CigarConfig, PrismConfig)):
            raise DomainError(f"No spectrum for geometry {type(self.geometry).__name__}")
        if not self.eps_tail > 0:
            raise DomainError(f"eps_tail must be > 0, got {self.eps_tail}")
        if not 0 < self.cutoff <= self.max_cutoff:
            raise DomainError(f"Need 0 < cutoff <= max_cutoff, got {self.cutoff}, {self.max_cutoff}")

    @property
    def n_particles(self) -> float:
        return self.geometry.n_particles


@dataclass
class Levels:
    """Enumerated levels sorted by energy, with the Weyl law of the remainder"""
    energies: np.ndarray
    degeneracy: np.ndarray
    labels: Labels
    weyl_coeff: float
    weyl_power: float
    cutoff: float

    def __post_init__(self):
        order = np.argsort(self.energies, kind="stable")
        self.energies = self.energies[order]
        self.degeneracy = self.degeneracy[order]
        self.labels = {k: v[order] for k, v in self.labels.items()}

    def tail(self, alpha: float) -> float:
        """Boltzmann population above the cutoff"""
        return _weyl_tail(self.weyl_coeff, self.weyl_power, self.cutoff) * math.exp(-alpha)


@dataclass
class OracleSolution:
    """Solved occupations of an enumerated spectrum"""
    alpha: float
    n_particles: float
    levels: Levels
    occupations: np.ndarray
    tail: float
    band_selector: BandSelector = field(repr=False)

    @property
    def f_g(self) -> float:
        """Fraction in the (non-degenerate) ground state"""
        return float(self.occupations[0] / self.levels.degeneracy[0]) / self.n_particles

    @property
    def f_band(self) -> float:
        return band_fraction_exact(self, self.band_selector)

    @property
    def f0(self) -> float:
        """Condensate fraction, the population of the geometry's condensing band"""
        return self.f_band

    @property
    def total(self) -> float:
        return float(self.occupations.sum()) + self.tail

    def occupation_spectrum(self, limit: int = 10) -> List[Tuple[Tuple[int, ...], float]]:
        """(quantum numbers, per-state fraction) of the lowest levels"""
        names = sorted(self.levels.labels)
        spectrum = []
        for i in range(min(limit, len(self.occupations))):
            label = tuple(int(self.levels.labels[k][i]) for k in names)
            per_state = float(self.occupations[i] / self.levels.degeneracy[i]) / self.n_particles
            spectrum.append((label, per_state))
        return spectrum


def _check_size(expected: float) -> None:
    if expected > MAX_LEVELS:
        raise DomainError(f"Spectrum would hold ~{expected:.3g} levels (limit {MAX_LEVELS:g}); "
                          f"reduce N or the aspect ratio")


def isotropic_levels(cfg: IsotropicConfig, t: float, cutoff: float) -> Levels:
    """Levels p hbar omega with degeneracy (p+1)(p+2)/2"""
    x = level_spacing_iso(t, cfg.n_particles)
    _check_size(cutoff / x)
    p = np.arange(0, int(math.floor(cutoff / x)) + 1)
    return Levels(
        energies=x * p,
        degeneracy=((p + 1) * (p + 2) // 2).astype(float),
        labels={"p": p},
        weyl_coeff=1.0 / (6.0 * x ** 3),
        weyl_power=3.0,
        cutoff=cutoff,
    )


def cigar_levels(cfg: CigarConfig, t: float, cutoff: float) -> Levels:
    """Transverse levels p_perp (degeneracy p_perp + 1) times longitudinal p_z"""
    t0_over_t = 1.0 / (t * critical_temperature_iso())
    k = cfg.k
    x_perp = t0_over_t / math.sqrt(k)
    x_par = t0_over_t * k / cfg.n_particles
    weyl = 1.0 / (6.0 * x_perp ** 2 * x_par)
    _check_size(weyl * cutoff ** 3)

    energies, degeneracy, p_perp, p_z = [], [], [], []
    for pp in range(int(math.floor(cutoff / x_perp)) + 1):
        pz = np.arange(0, int(math.floor((cutoff - x_perp * pp) / x_par)) + 1)
        energies.append(x_perp * pp + x_par * pz)
        degeneracy.append(np.full(pz.size, pp + 1.0))
        p_perp.append(np.full(pz.size, pp))
        p_z.append(pz)
    return Levels(
        energies=np.concatenate(energies),
        degeneracy=np.concatenate(degeneracy),
        labels={"p_perp": np.concatenate(p_perp), "p_z": np.concatenate(p_z)},
        weyl_coeff=weyl,
        weyl_power=3.0,
        cutoff=cutoff,
    )


def channel_levels(cfg: ChannelConfig, t: float, cutoff: float) -> Levels:
    """Levels a (s^2/N + p_z/sqrt(N)); +-s share a level"""
    n = cfg.n_particles
    a = band_curvature(t)
    x_s = a / n
    x_z = a / math.sqrt(n)
    weyl = (4.0 / 3.0) * math.sqrt(n / a) / x_z
    _check_size(weyl * cutoff ** 1.5)

    s = np.arange(0, int(math.floor(math.sqrt(cutoff / x_s))) + 1)
    pz = np.arange(0, int(math.floor(cutoff / x_z)) + 1)
    grid = x_s * s[:, None] ** 2 + x_z * pz[None, :]
    keep = grid <= cutoff
    s_grid = np.broadcast_to(s[:, None], grid.shape)[keep]
    return Levels(
        energies=grid[keep],
        degeneracy=np.where(s_grid == 0, 1.0, 2.0),
        labels={"s": s_grid, "p_z": np.broadcast_to(pz[None, :], grid.shape)[keep]},
        weyl_coeff=weyl,
        weyl_power=1.5,
        cutoff=cutoff,
    )


def prism_levels(cfg: PrismConfig, t: float, cutoff: float) -> Levels:
    """Transverse shells m = sx^2 + sy^2 times longitudinal |s_z|"""
    c_perp = transverse_coefficient(t, cfg)
    c_z = longitudinal_coefficient(t, cfg)
    weyl = (4.0 * math.pi / 3.0) / (c_perp * math.sqrt(c_z))
    _check_size(weyl * cutoff ** 1.5)

    r = int(math.floor(math.sqrt(cutoff / c_perp)))
    sx = np.arange(-r, r + 1)
    m_all = (sx[:, None] ** 2 + sx[None, :] ** 2).ravel()
    m, multiplicity = np.unique(m_all[m_all * c_perp <= cutoff], return_counts=True)
    sz = np.arange(0, int(math.floor(math.sqrt(cutoff / c_z))) + 1)

    grid = c_perp * m[:, None] + c_z * sz[None, :] ** 2
    keep = grid <= cutoff
    sz_grid = np.broadcast_to(sz[None, :], grid.shape)[keep]
    mult_grid = np.broadcast_to(multiplicity[:, None], grid.shape)[keep]
    return Levels(
        energies=grid[keep],
        degeneracy=mult_grid * np.where(sz_grid == 0, 1.0, 2.0),
        labels={"m": np.broadcast_to(m[:, None], grid.shape)[keep], "s_z": sz_grid},
        weyl_coeff=weyl,
        weyl_power=1.5,
        cutoff=cutoff,
    )


_BUILDERS = {
    IsotropicConfig: (isotropic_levels, lambda lab: lab["p"] == 0),
    CigarConfig: (cigar_levels, lambda lab: lab["p_perp"] == 0),
    ChannelConfig: (channel_levels, lambda lab: lab["p_z"] == 0),
    PrismConfig: (prism_levels, lambda lab: lab["m"] == 0),
}


def _weyl_tail(weyl_coeff: float, weyl_power: float, cutoff: float) -> float:
    return float(weyl_coeff * gamma_fn(weyl_power + 1.0) * gammaincc(weyl_power, cutoff))


def _required_cutoff(probe: Levels, budget: float, ceiling: float) -> float:
    """Smallest E_c in [MIN_CUTOFF, ceiling] whose alpha = 0 tail is below budget"""
    def excess(ec: float) -> float:
        return math.log(_weyl_tail(probe.weyl_coeff, probe.weyl_power, ec) / budget)

    if excess(MIN_CUTOFF) <= 0.0:
        return MIN_CUTOFF
    if excess(ceiling) >= 0.0:
        return ceiling
    cutoff = solve_bracketed(excess, MIN_CUTOFF, ceiling, xtol=CUTOFF_XTOL, what="spectrum cutoff")
    # brentq may stop just short of the root; the tail must end up within budget
    while excess(cutoff) > 0.0 and cutoff < ceiling:
        cutoff = min(cutoff + CUTOFF_XTOL, ceiling)
    return cutoff


def enumerate_levels(spec: SpectrumSpec, t: float) -> Levels:
    """
    Levels below the smallest cutoff whose alpha = 0 tail is under eps_tail N

    The cutoff never exceeds spec.cutoff unless the tail budget demands it;
    it is then raised in steps of CUTOFF_STEP up to spec.max_cutoff.

    Raises:
        CutoffTooTight: even max_cutoff leaves too large a tail
    """
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    builder, _ = _BUILDERS[type(spec.geometry)]
    budget = spec.eps_tail * spec.n_particles

    # the ground level alone carries the Weyl law of the geometry
    probe = builder(spec.geometry, t, 0.0)
    cutoff = _required_cutoff(probe, budget, spec.max_cutoff)
    if cutoff > spec.cutoff:
        steps = math.ceil((cutoff - spec.cutoff) / CUTOFF_STEP)
        cutoff = min(spec.cutoff + steps * CUTOFF_STEP, spec.max_cutoff)
        logger.debug(f"raising spectrum cutoff to {cutoff:g}")

    levels = builder(spec.geometry, t, cutoff)
    logger.debug(f"{type(spec.geometry).__name__}: {levels.energies.size} levels below {cutoff:g}")
    return levels


def solve_alpha_exact(spec: SpectrumSpec, t: float) -> OracleSolution:
    """
    Solve the exact number equation of an enumerated spectrum

    Args:
        spec: Geometry and truncation policy
        t: Reduced temperature T/Tc of the geometry, t > 0

    Returns:
        OracleSolution with alpha and every level's occupation

    Raises:
        CutoffTooTight: tail population above eps_tail N at the solution
    """
    levels = enumerate_levels(spec, t)
    _, selector = _BUILDERS[type(spec.geometry)]
    n = spec.n_particles

    def excess(alpha: float) -> float:
        occupied = levels.degeneracy / np.expm1(levels.energies + alpha)
        return (float(occupied.sum()) + levels.tail(alpha)) / n - 1.0

    alpha = solve_log_bracketed(excess, *ALPHA_BRACKET, maxiter=MAX_ITERATIONS, what="alpha(exact)")
    tail = levels.tail(alpha)
    if tail > spec.eps_tail * n:
        raise CutoffTooTight(f"Tail holds {tail:.3g} particles, above {spec.eps_tail:g} N "
                             f"at cutoff {levels.cutoff:g}")

    solution = OracleSolution(
        alpha=alpha,
        n_particles=n,
        levels=levels,
        occupations=levels.degeneracy / np.expm1(levels.energies + alpha),
        tail=tail,
        band_selector=selector,
    )
    logger.debug(f"exact alpha={alpha:.10g}, f_g={solution.f_g:.6g}, f_band={solution.f_band:.6g}")
    return solution


def band_fraction_exact(sol: OracleSolution, band_selector: BandSelector) -> float:
    """
    Fraction of particles in the levels picked by band_selector

    Args:
        sol: Solved spectrum
        band_selector: Maps the label arrays to a boolean mask, e.g.
            lambda lab: lab["p_perp"] == 0

    Returns:
        Selected population / N
    """
    mask = np.asarray(band_selector(sol.levels.labels), dtype=bool)
    return float(sol.occupations[mask].sum()) / sol.n_particles


def analytic_fractions(geometry: Geometry, t: float) -> Tuple[float, float]:
    """Large-N (f0, f_g) of a geometry; both 0 at and above Tc"""
    if isinstance(geometry, IsotropicConfig):
        f0 = condensate_fraction_iso(t)
        return f0, f0
    if isinstance(geometry, CigarConfig):
        f0 = condensate_fraction_iso(t)
        if f0 <= 0.0:
            return 0.0, 0.0
        return f0, fg_self_consistent(t, geometry.n_particles, geometry.k)
    if isinstance(geometry, ChannelConfig):
        f0 = condensate_fraction_channel(t)
        if f0 <= 0.0:
            return 0.0, 0.0
        return f0, 1.0 / solve_gamma_channel(t)
    f0 = condensate_fraction_prism(t)
    if f0 <= 0.0:
        return 0.0, 0.0
    return f0, band_state_fraction_prism(0, t, geometry)


def compare_row(spec: SpectrumSpec, t: float) -> List[float]:
    """f0 and f_g, analytic next to exact, at one temperature"""
    f0_analytic, fg_analytic = analytic_fractions(spec.geometry, t)
    sol = solve_alpha_exact(spec, t)
    return [f0_analytic, sol.f0, fg_analytic, sol.f_g]


def compare_rows(spec: SpectrumSpec, t_values: List[float]) -> List[List[float]]:
    """Rows of COMPARE_COLUMNS"""
    return [[t] + compare_row(spec, t) for t in t_values]
