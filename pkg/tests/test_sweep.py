import json
import math

import numpy as np
import pytest

from gbec_lab.config.config_loader import OracleConfig, RunConfig
from gbec_lab.core.errors import ConfigError, NoSolution
from gbec_lab.tools.sweep import (
    SweepTable,
    evaluate,
    figure_tables,
    log_grid,
    report_transitions,
    run_sweep,
    t_grid,
)


def failing_above_half(x):
    if x > 0.5:
        raise NoSolution(f"nothing at {x}")
    return [2.0 * x, x * x]


class TestSweepTable:
    def test_csv_round_trip(self):
        table = SweepTable(["t", "a", "b"], [[0.1, 1e-5, 123.456], [0.2, 0.875, 2.5e10]])
        parsed = SweepTable.from_csv(table.to_csv())
        assert parsed.header == table.header
        assert parsed.rows == table.rows

    def test_csv_round_trip_keeps_failed_rows(self):
        table = evaluate(failing_above_half, [0.25, 0.75], ["x", "a", "b"], jobs=1)
        parsed = SweepTable.from_csv(table.to_csv())
        assert parsed.header == table.header
        assert math.isnan(parsed.rows[1][1])
        np.testing.assert_array_equal(np.array(parsed.rows), np.array(table.rows))
        assert parsed.failures == []

    def test_csv_layout(self):
        text = SweepTable(["t", "f0"], [[0.5, 0.875]]).to_csv()
        assert text == "t,f0\n0.5,0.875\n"

    def test_json(self):
        table = SweepTable(["t", "f0"], [[0.5, 0.875]], meta={"geometry": "isotropic"})
        payload = json.loads(table.to_json())
        assert payload["meta"] == {"geometry": "isotropic"}
        assert payload["rows"] == [{"t": 0.5, "f0": 0.875}]
        assert "failures" not in payload

    def test_column(self):
        table = SweepTable(["t", "f0"], [[0.1, 0.9], [0.2, 0.8]])
        assert table.column("f0") == [0.9, 0.8]
        with pytest.raises(KeyError):
            table.column("fg")

    def test_write(self, tmp_path):
        target = tmp_path / "out" / "table.json"
        SweepTable(["t"], [[0.5]]).write(str(target), "json")
        assert json.loads(target.read_text())["rows"] == [{"t": 0.5}]

    def test_empty_csv(self):
        with pytest.raises(ValueError):
            SweepTable.from_csv("")


class TestEvaluate:
    def test_order_preserved_with_threads(self):
        xs = t_grid(0.0, 1.0, 50)
        table = evaluate(lambda x: [x * x], xs, ["x", "x2"], jobs=8)
        assert table.column("x") == xs
        assert table.ok

    def test_failed_rows_are_kept(self):
        table = evaluate(failing_above_half, [0.25, 0.5, 0.75, 1.0], ["x", "a", "b"], jobs=2)
        assert len(table.rows) == 4
        assert table.rows[0] == [0.25, 0.5, 0.0625]
        assert all(math.isnan(v) for v in table.rows[2][1:])
        assert [f.index for f in table.failures] == [2, 3]
        assert table.failures[0].error == "NoSolution"
        summary = table.failure_summary()
        assert summary["failed_rows"] == 2
        assert summary["total_rows"] == 4

    def test_grids(self):
        assert t_grid(0.5, 0.5, 1) == [0.5]
        assert log_grid(1e-6, 10.0, 8)[0] == pytest.approx(1e-6)
        assert log_grid(1e-6, 10.0, 8)[-1] == pytest.approx(10.0)


class TestRunSweep:
    def test_isotropic_crosses_tc(self):
        table = run_sweep(RunConfig("isotropic", t_min=0.5, t_max=1.5, steps=5).validate())
        assert table.ok
        assert table.header == ["t", "f0", "alpha", "f_p1"]
        f0 = table.column("f0")
        assert f0[0] == pytest.approx(0.875)
        assert f0[-1] == 0.0

    def test_channel(self):
        table = run_sweep(RunConfig("channel", t_min=0.1, t_max=0.9, steps=5).validate())
        assert table.ok
        assert len(table.rows) == 5
        assert table.header[0] == "t"

    def test_cigar_bz_column(self):
        cfg = RunConfig("cigar", n_particles=1e16, bz=True, t_min=0.1, t_max=1.05, steps=8).validate()
        table = run_sweep(cfg)
        assert table.ok
        assert table.header == ["t", "f0", "fg", "fg_tl"]
        assert table.column("fg_tl")[-1] == 0.0

    def test_cigar_with_oracle(self):
        cfg = RunConfig("cigar", n_particles=1e3, delta=30.0, t_min=0.3, t_max=0.6, steps=2,
                        oracle=True).validate()
        table = run_sweep(cfg, OracleConfig(eps_tail=1e-6, cutoff=46.0, max_cutoff=60.0))
        assert table.header[-2:] == ["f0_exact", "fg_exact"]
        assert table.ok

    def test_bose_functions(self):
        table = run_sweep(RunConfig("bose-fn", t_min=1e-4, t_max=1.0, steps=4).validate())
        assert table.ok
        assert table.header == ["alpha", "F_half", "F_3half", "F_3", "F_half_asymptotic"]

    def test_prism_failure_is_flagged(self):
        cfg = RunConfig("prism", l_ladder=[50.0, 1e3], d_over_a=10.0, t_min=0.5, t_max=0.5, steps=1)
        table = run_sweep(cfg.validate())
        assert not table.ok
        assert table.failures[0].error == "DomainError"
        assert not math.isnan(table.rows[1][1])

    def test_box_scan(self):
        cfg = RunConfig("box", nu="0.6,0.2,0.2", t_min=0.5, t_max=0.5, steps=1).validate()
        table = run_sweep(cfg)
        assert table.ok
        assert len(table.rows) == 7

    def test_oracle_compare(self):
        cfg = RunConfig("oracle", oracle_geometry="isotropic", n_particles=1e3,
                        t_min=0.5, t_max=0.5, steps=1).validate()
        table = run_sweep(cfg)
        assert table.ok
        assert len(table.rows) == 1


class TestReport:
    def test_isotropic(self):
        report = report_transitions(RunConfig("isotropic").validate())
        assert report.tc == pytest.approx(0.9405, abs=1e-4)
        assert report.to_dict()["Tc/T0"] == report.tc

    def test_cigar_standard(self):
        report = report_transitions(RunConfig("cigar", n_particles=1e6, delta=5.6e4).validate())
        assert report.k == pytest.approx(6.8, abs=0.05)
        assert report.t1_over_tc == pytest.approx(0.47, abs=0.01)
        assert report.ell_perp == pytest.approx(2.61, abs=0.01)
        assert report.gamma == pytest.approx(1.60, abs=0.01)

    def test_cigar_bz(self):
        report = report_transitions(RunConfig("cigar", n_particles=1e6, bz=True, bz_gamma=1.6).validate())
        assert report.t1_over_tc == pytest.approx(0.552, abs=0.005)
        assert "T1/Tc (finite N)" in report.to_dict()

    def test_box(self):
        report = report_transitions(RunConfig("box", nu="1/2,1/4,1/4", t_min=0.5, t_max=0.5, steps=1))
        assert report.extras["class"] == "TypeII"

    def test_oracle_has_no_report(self):
        with pytest.raises(ConfigError):
            report_transitions(RunConfig("oracle", t_min=0.5, t_max=0.5, steps=1))


@pytest.fixture(scope="module")
def tables():
    return figure_tables(jobs=4)


class TestFigures:
    def test_all_figures_succeed(self, tables):
        assert sorted(tables) == ["fig1", "fig2", "fig3", "fig4", "fig5"]
        assert all(table.ok for table in tables.values())

    def test_fig1_ground_state_below_band(self, tables):
        fig1 = tables["fig1"]
        assert np.all(np.array(fig1.column("f_s0")) <= np.array(fig1.column("f0")))

    def test_fig2_ground_state_depleted_near_t1(self, tables):
        fig2 = tables["fig2"]
        _, f0, fg = min(fig2.rows, key=lambda row: abs(row[0] - 0.47))
        assert fg < f0 / 3.0

    def test_fig5_tracks_limit(self, tables):
        fig5 = tables["fig5"]
        gaps = [abs(fg - tl) for t, _, fg, tl in fig5.rows if 0.1 <= t <= 0.5]
        assert max(gaps) < 0.02

    def test_vanish_above_tc(self, tables):
        for name in ("fig2", "fig3", "fig4", "fig5"):
            last = tables[name].rows[-1]
            assert last[0] > 1.0
            assert all(v == 0.0 for v in last[1:])
