import json

import pytest

from main import EXIT_CONFIG, EXIT_OK, EXIT_ROW_FAILURES, build_parser, main


def read_csv_lines(path):
    return path.read_text(encoding="utf-8").splitlines()


class TestParser:
    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_help_lists_columns(self):
        assert "f0_exact" in build_parser().epilog


class TestSweeps:
    def test_bose_fn_to_stdout(self, capsys):
        assert main(["bose-fn", "--alpha", "1e-3:1:3"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "alpha,F_half,F_3half,F_3,F_half_asymptotic"
        assert len(lines) == 4

    def test_channel_to_file(self, tmp_path):
        out = tmp_path / "channel.csv"
        assert main(["channel", "--t", "0.1:0.9:5", "--out", str(out)]) == EXIT_OK
        lines = read_csv_lines(out)
        assert lines[0] == "t,f0,f_s0,f_s1,f_s2"
        assert len(lines) == 6

    def test_json_format(self, capsys):
        assert main(["isotropic", "--n", "1e4", "--t", "0.2:0.8:3", "--format", "json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["rows"]) == 3
        assert payload["meta"]["n_particles"] == 1e4

    def test_cigar_report(self, capsys):
        assert main(["cigar", "--n", "1e6", "--delta", "5.6e4", "--report"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "T1/Tc" in out
        assert "0.47" in out

    def test_cigar_bz_sweep(self, tmp_path):
        out = tmp_path / "bz.csv"
        assert main(["cigar", "--bz", "--n", "1e16", "--t", "0.1:0.5:5", "--out", str(out)]) == EXIT_OK
        assert read_csv_lines(out)[0] == "t,f0,fg,fg_tl"

    def test_failed_rows_exit_code(self, tmp_path, capsys):
        out = tmp_path / "prism.csv"
        code = main(["prism", "--d", "10", "--l", "50,1e3", "--out", str(out)])
        assert code == EXIT_ROW_FAILURES
        assert '"failed_rows": 1' in capsys.readouterr().err
        assert len(read_csv_lines(out)) == 3

    def test_bad_grid(self):
        assert main(["isotropic", "--t", "0.9:0.1:5"]) == EXIT_CONFIG

    def test_missing_config_file(self, tmp_path):
        assert main(["--config", str(tmp_path / "none.yaml"), "channel"]) == EXIT_CONFIG

    def test_config_run_section(self, tmp_path):
        config = tmp_path / "config.yaml"
        config.write_text('run:\n  t: "0.1:0.5:4"\n', encoding="utf-8")
        out = tmp_path / "channel.csv"
        assert main(["--config", str(config), "channel", "--out", str(out)]) == EXIT_OK
        assert len(read_csv_lines(out)) == 5


class TestBox:
    def test_classify(self, capsys):
        assert main(["box", "classify", "--nu", "0.6,0.2,0.2"]) == EXIT_OK
        assert "TypeIII" in capsys.readouterr().out

    def test_classify_fractions(self, capsys):
        assert main(["box", "classify", "--nu", "1/2,1/4,1/4"]) == EXIT_OK
        assert "TypeII" in capsys.readouterr().out

    def test_invalid_exponents(self):
        assert main(["box", "classify", "--nu", "0.2,0.4,0.4"]) == EXIT_CONFIG

    def test_scan(self, tmp_path):
        out = tmp_path / "box.csv"
        assert main(["box", "classify", "--nu", "0.6,0.2,0.2", "--scan", "--out", str(out)]) == EXIT_OK
        lines = read_csv_lines(out)
        assert lines[0] == "H,gamma,max_state_density,k0,s0"
        assert len(lines) == 8


class TestOracle:
    def test_compare(self, tmp_path, capsys):
        out = tmp_path / "compare.csv"
        code = main(["oracle", "compare", "--geometry", "isotropic", "--n", "1e3", "--t", "0.5",
                     "--csv", str(out)])
        assert code == EXIT_OK
        lines = read_csv_lines(out)
        assert lines[0] == "t,f0_analytic,f0_exact,fg_analytic,fg_exact"
        assert len(lines) == 2


class TestFigures:
    def test_writes_all_figures(self, tmp_path):
        assert main(["figures", "--outdir", str(tmp_path)]) == EXIT_OK
        for name in ("fig1", "fig2", "fig3", "fig4", "fig5"):
            assert (tmp_path / f"{name}.csv").exists()
        assert read_csv_lines(tmp_path / "fig4.csv")[0] == "t,f0,fg,fg_n1e6"
