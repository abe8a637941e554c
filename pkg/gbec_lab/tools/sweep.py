"""
Grid sweeps, transition reports and the tables they produce

A sweep evaluates one row function per grid point on a thread pool and
assembles the rows in grid order. A row whose solver raises a GbecError is
kept with nan cells and recorded as a RowFailure; the sweep carries on.
"""

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ..config.config_loader import OracleConfig, RunConfig
from ..core import bose_special, channel, cigar, general_box, isotropic3d, oracle, prism
from ..core.errors import ConfigError, GbecError
from ..utils.logging import get_logger

logger = get_logger(__name__)

SIGNIFICANT_DIGITS = 12

DEFAULT_N = {
    "isotropic": 1e5,
    "channel": 1e6,
    "cigar": 1e6,
    "oracle": 1e4,
}
DEFAULT_DELTA = {"cigar": 5.6e4, "oracle": 1e2}

FIG1_GRID = (0.005, 1.0, 200)
FIG_GRID = (0.01, 1.1, 220)
EXPERIMENT_N, EXPERIMENT_DELTA = 1e6, 5.6e4
LARGE_N = 1e8
BZ_N, BZ_GAMMA = 1e16, 1.6

RowFunction = Callable[[float], Sequence[float]]


def format_value(value: float) -> str:
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


@dataclass
class RowFailure:
    """A grid point whose solver failed"""
    index: int
    x: float
    error: str
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SweepTable:
    """Header plus rows ordered by the first column"""
    header: List[str]
    rows: List[List[float]]
    failures: List[RowFailure] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def column(self, name: str) -> List[float]:
        """All values of one column"""
        try:
            i = self.header.index(name)
        except ValueError as e:
            raise KeyError(f"No column {name!r} in {self.header}") from e
        return [row[i] for row in self.rows]

    def to_csv(self) -> str:
        """Comma-separated text with a header row and LF line endings"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([format_value(v) for v in row])
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SweepTable":
        """
        Parse the output of to_csv

        Cells of failed rows read back as nan, so compare such tables with a
        nan-aware check. The failure records themselves are not part of the CSV.
        """
        reader = csv.reader(io.StringIO(text))
        try:
            header = next(reader)
        except StopIteration as e:
            raise ValueError("Empty CSV table") from e
        return cls(header=header, rows=[[float(v) for v in row] for row in reader if row])

    def to_json(self) -> str:
        """One object with meta and a list of row objects"""
        payload = {
            "meta": self.meta,
            "rows": [dict(zip(self.header, row)) for row in self.rows],
        }
        if self.failures:
            payload["failures"] = [f.to_dict() for f in self.failures]
        return json.dumps(payload, indent=2)

    def write(self, path: str, fmt: str = "csv") -> None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        text = self.to_json() if fmt == "json" else self.to_csv()
        target.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {len(self.rows)} rows to {target}")

    def failure_summary(self) -> Dict[str, Any]:
        """Machine-readable summary of failed rows"""
        return {
            "failed_rows": len(self.failures),
            "total_rows": len(self.rows),
            "failures": [f.to_dict() for f in self.failures],
        }


@dataclass
class CondensateReport:
    """Transition temperatures and geometry parameters of one configuration"""
    geometry: str
    tc: float
    temperature_unit: str
    t1_over_tc: Optional[float] = None
    k: Optional[float] = None
    ell_perp: Optional[float] = None
    gamma: Optional[float] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = {"geometry": self.geometry, f"Tc/{self.temperature_unit}": self.tc}
        for key, value in (("T1/Tc", self.t1_over_tc), ("K", self.k),
                           ("ell_perp", self.ell_perp), ("gamma", self.gamma)):
            if value is not None:
                data[key] = value
        data.update(self.extras)
        return data


def t_grid(t_min: float, t_max: float, steps: int) -> List[float]:
    """Uniform grid including both ends"""
    if steps == 1:
        return [t_min]
    return np.linspace(t_min, t_max, steps).tolist()


def log_grid(x_min: float, x_max: float, steps: int) -> List[float]:
    """Geometric grid including both ends"""
    if steps == 1:
        return [x_min]
    return np.geomspace(x_min, x_max, steps).tolist()


def evaluate(
    row_fn: RowFunction,
    xs: Sequence[float],
    header: List[str],
    jobs: int = 1,
    meta: Optional[Dict[str, Any]] = None,
) -> SweepTable:
    """
    Evaluate row_fn on every grid point

    Args:
        row_fn: Returns the values of header[1:] at one grid point
        xs: Grid values, written as the first column
        header: Column names
        jobs: Worker threads
        meta: Configuration echo stored with the table

    Returns:
        SweepTable in grid order
    """
    width = len(header) - 1

    def guarded(item):
        index, x = item
        try:
            values = [float(v) for v in row_fn(x)]
            return [x] + values, None
        except GbecError as e:
            logger.error(f"Row {index} ({header[0]}={x:.6g}) failed: {type(e).__name__}: {e}")
            return [x] + [math.nan] * width, RowFailure(index, x, type(e).__name__, str(e))

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(guarded, enumerate(xs)))

    return SweepTable(
        header=list(header),
        rows=[row for row, _ in results],
        failures=[failure for _, failure in results if failure is not None],
        meta=dict(meta or {}),
    )


def _oracle_spec(geometry: Any, oracle_cfg: Optional[OracleConfig]) -> oracle.SpectrumSpec:
    oracle_cfg = oracle_cfg or OracleConfig(eps_tail=1e-6, cutoff=46.0, max_cutoff=60.0)
    return oracle.SpectrumSpec(geometry, eps_tail=oracle_cfg.eps_tail,
                               cutoff=oracle_cfg.cutoff, max_cutoff=oracle_cfg.max_cutoff)


def _n(cfg: RunConfig, key: str) -> float:
    return cfg.n_particles if cfg.n_particles is not None else DEFAULT_N[key]


def _delta(cfg: RunConfig, key: str) -> float:
    return cfg.delta if cfg.delta is not None else DEFAULT_DELTA[key]


def cigar_config(cfg: RunConfig, key: str = "cigar") -> cigar.CigarConfig:
    """CigarConfig of a run"""
    return cigar.CigarConfig(
        n_particles=_n(cfg, key),
        delta=_delta(cfg, key),
        limit_mode=cigar.LimitMode.BZ if cfg.bz else cigar.LimitMode.STANDARD,
        bz_gamma=cfg.bz_gamma,
        c_const=cfg.c_const,
    )


def oracle_geometry(cfg: RunConfig) -> oracle.Geometry:
    """Geometry config for the oracle subcommand"""
    n = _n(cfg, "oracle")
    if cfg.oracle_geometry == "isotropic":
        return isotropic3d.IsotropicConfig(n)
    if cfg.oracle_geometry == "channel":
        return channel.ChannelConfig(n)
    if cfg.oracle_geometry == "prism":
        return prism.PrismConfig.from_n_and_aspect(n, _delta(cfg, "oracle"))
    return cigar_config(cfg, "oracle")


def _with_oracle(row_fn: RowFunction, spec: oracle.SpectrumSpec) -> RowFunction:
    def row(t: float) -> List[float]:
        sol = oracle.solve_alpha_exact(spec, t)
        return list(row_fn(t)) + [sol.f0, sol.f_g]
    return row


def _isotropic_row(n: float) -> RowFunction:
    def row(t: float) -> List[float]:
        if t < 1.0:
            return [isotropic3d.condensate_fraction_iso(t),
                    isotropic3d.ground_alpha_iso(t, n),
                    isotropic3d.excited_occupation_iso(1, n, t)]
        return [0.0, isotropic3d.alpha_above_tc_iso(t), isotropic3d.normal_occupation_iso(1, n, t)]
    return row


def _cigar_row(n: float, k: float, bz_gamma: Optional[float] = None) -> RowFunction:
    def row(t: float) -> List[float]:
        values = cigar.fig_row(t, n, k)
        if bz_gamma is not None:
            values.append(cigar.fg_tl_limit(t, bz_gamma) if t < 1.0 else 0.0)
        return values
    return row


def _bose_row(alpha: float) -> List[float]:
    return [bose_special.bose_fn(n, alpha) for n in bose_special.SUPPORTED_ORDERS] + \
        [bose_special.f_half_asymptotic(alpha)]


def run_sweep(cfg: RunConfig, oracle_cfg: Optional[OracleConfig] = None) -> SweepTable:
    """
    Evaluate the configured geometry over its grid

    Args:
        cfg: Validated run configuration
        oracle_cfg: Truncation policy for oracle columns

    Returns:
        SweepTable; failed rows are flagged, never raised
    """
    meta = asdict(cfg)
    geometry = cfg.geometry

    if geometry == "bose-fn":
        header = ["alpha", "F_half", "F_3half", "F_3", "F_half_asymptotic"]
        return evaluate(_bose_row, log_grid(*cfg.grid), header, cfg.jobs, meta)

    if geometry == "prism":
        t = cfg.t_min
        return evaluate(lambda l: prism.prism_scaling_row(l, t, cfg.d_over_a),
                        cfg.l_ladder, prism.SCALING_COLUMNS, cfg.jobs, meta)

    if geometry == "box":
        nu = general_box.BoxExponents.parse(cfg.nu)
        t = cfg.t_min
        return evaluate(lambda h: general_box.box_scan_row(h, nu, t, cfg.cutoff_c),
                        cfg.h_ladder, general_box.SCAN_COLUMNS, cfg.jobs, meta)

    if geometry == "oracle":
        spec = _oracle_spec(oracle_geometry(cfg), oracle_cfg)
        return evaluate(lambda t: oracle.compare_row(spec, t), t_grid(*cfg.grid),
                        oracle.COMPARE_COLUMNS, cfg.jobs, meta)

    if geometry == "isotropic":
        n = _n(cfg, geometry)
        header = ["t", "f0", "alpha", "f_p1"]
        row_fn = _isotropic_row(n)
        oracle_geom = isotropic3d.IsotropicConfig(n)
    elif geometry == "channel":
        header = list(channel.FIG1_COLUMNS)
        row_fn = channel.fig1_row
        oracle_geom = channel.ChannelConfig(_n(cfg, geometry))
    elif geometry == "cigar":
        cigar_cfg = cigar_config(cfg)
        header = list(cigar.FIG_COLUMNS) + (["fg_tl"] if cfg.bz else [])
        row_fn = _cigar_row(cigar_cfg.n_particles, cigar_cfg.k, cfg.bz_gamma if cfg.bz else None)
        oracle_geom = cigar_cfg
    else:
        raise ConfigError(f"Unknown geometry {geometry!r}")

    if cfg.oracle:
        header += ["f0_exact", "fg_exact"]
        row_fn = _with_oracle(row_fn, _oracle_spec(oracle_geom, oracle_cfg))
    return evaluate(row_fn, t_grid(*cfg.grid), header, cfg.jobs, meta)


def report_transitions(cfg: RunConfig) -> CondensateReport:
    """
    Transition temperatures and parameters of the configured geometry

    Args:
        cfg: Validated run configuration

    Returns:
        CondensateReport
    """
    geometry = cfg.geometry
    if geometry == "bose-fn":
        return CondensateReport(
            geometry=geometry, tc=float("nan"), temperature_unit="-",
            extras={f"zeta({n:g})": bose_special.zeta(n) for n in (1.5, 3.0)},
        )
    if geometry == "isotropic":
        return CondensateReport(geometry, isotropic3d.critical_temperature_iso(), "T0")
    if geometry == "channel":
        return CondensateReport(geometry, channel.critical_temperature_channel(), "T0")
    if geometry == "prism":
        cfg_prism = prism.PrismConfig(d_over_a=cfg.d_over_a, l_over_a=cfg.l_ladder[0])
        return CondensateReport(
            geometry, prism.critical_temperature_prism(), "T*",
            extras={"N": cfg_prism.n_particles, "T_onset/Tc": prism.ground_state_onset_prism(cfg_prism)},
        )
    if geometry == "box":
        nu = general_box.BoxExponents.parse(cfg.nu)
        return CondensateReport(
            geometry, prism.critical_temperature_prism(), "T*",
            extras={"class": general_box.classify(nu).value, "eta": nu.eta},
        )
    if geometry == "cigar":
        cigar_cfg = cigar_config(cfg)
        tc = isotropic3d.critical_temperature_iso()
        if cfg.bz:
            ell, k = cigar.bz_geometry(cigar_cfg.n_particles, cfg.bz_gamma)
            finite = cigar.t1_bz_finite(cigar_cfg.n_particles, cfg.bz_gamma, cfg.c_const)
            return CondensateReport(
                geometry, tc, "T0", t1_over_tc=cigar.t1_bz(cfg.bz_gamma), k=k,
                ell_perp=ell, gamma=cfg.bz_gamma,
                extras={"N": cigar_cfg.n_particles, "T1/Tc (finite N)": finite.t1_over_tc},
            )
        k = cigar_cfg.k
        estimate = cigar.t1_standard(cigar_cfg.n_particles, k, cfg.c_const)
        extras = {"N": cigar_cfg.n_particles, "Delta": cigar_cfg.delta,
                  "T1/Tc (first iterate)": estimate.first_iterate, "merged": estimate.merged}
        ell = gamma = None
        if cigar_cfg.delta > 1:
            ell, gamma = cigar.bz_parameters_from_aspect(cigar_cfg.n_particles, cigar_cfg.delta)
        return CondensateReport(geometry, tc, "T0", t1_over_tc=estimate.t1_over_tc, k=k,
                                ell_perp=ell, gamma=gamma, extras=extras)
    raise ConfigError(f"No transition report for {geometry!r}")


def figure_tables(jobs: int = 4) -> Dict[str, SweepTable]:
    """The five figure datasets, keyed fig1 ... fig5"""
    _, k_small = cigar.bz_geometry(EXPERIMENT_N, BZ_GAMMA)
    _, k_bz = cigar.bz_geometry(BZ_N, BZ_GAMMA)
    k_fig2 = cigar.k_parameter(EXPERIMENT_N, EXPERIMENT_DELTA)
    k_fig3 = cigar.k_parameter(LARGE_N, EXPERIMENT_DELTA)
    grid = t_grid(*FIG_GRID)

    def fig4_row(t: float) -> List[float]:
        return cigar.fig_row(t, BZ_N, k_bz) + [cigar.fig_row(t, EXPERIMENT_N, k_small)[1]]

    tables = {
        "fig1": evaluate(channel.fig1_row, t_grid(*FIG1_GRID), channel.FIG1_COLUMNS, jobs,
                         {"geometry": "channel"}),
        "fig2": evaluate(_cigar_row(EXPERIMENT_N, k_fig2), grid, cigar.FIG_COLUMNS, jobs,
                         {"geometry": "cigar", "n_particles": EXPERIMENT_N, "delta": EXPERIMENT_DELTA}),
        "fig3": evaluate(_cigar_row(LARGE_N, k_fig3), grid, cigar.FIG_COLUMNS, jobs,
                         {"geometry": "cigar", "n_particles": LARGE_N, "delta": EXPERIMENT_DELTA}),
        "fig4": evaluate(fig4_row, grid, cigar.FIG_COLUMNS + ["fg_n1e6"], jobs,
                         {"geometry": "cigar", "bz_gamma": BZ_GAMMA, "n_particles": BZ_N,
                          "small_n_particles": EXPERIMENT_N}),
        "fig5": evaluate(_cigar_row(BZ_N, k_bz, BZ_GAMMA), grid, cigar.FIG_COLUMNS + ["fg_tl"], jobs,
                         {"geometry": "cigar", "bz_gamma": BZ_GAMMA, "n_particles": BZ_N}),
    }
    return tables
