"""Command-line front end: exit codes, formats, determinism and config replay."""

import csv
import io
import json
import subprocess
import sys

import pytest

from meanscope.cli import RunConfig, main
from meanscope.classify import GridSpec, ToleranceConfig


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestClassify:

    def test_uab_holds(self, capsys):
        code, out, _ = run(["classify", "--family", "uab", "--a", "1", "--b", "0.5",
                            "--props", "gcv,pmi"], capsys)
        assert code == 0
        rep = json.loads(out)
        assert rep["all_hold"] and [r["verdict"] for r in rep["reports"]] == ["holds_on_grid"] * 2

    def test_slow_pmi_example_violated(self, capsys):
        code, out, _ = run(["classify", "--family", "section5", "--props", "pmi_r", "--r", "2"],
                           capsys)
        assert code == 1
        w = json.loads(out)["reports"][0]["witness"]
        assert w["t"] < 1e-2 and w["r"] == 2.0

    def test_power_all(self, capsys):
        code, _, _ = run(["classify", "--family", "power", "--alpha", "0.5",
                          "--props", "gcv,gcc,pmi,pmd"], capsys)
        assert code == 0

    def test_adjoint_flag(self, capsys):
        code, _, _ = run(["classify", "--family", "stolarsky", "--alpha", "-1.5",
                          "--props", "gcv", "--adjoint"], capsys)
        assert code == 0

    def test_csv_and_table(self, capsys):
        code, out, _ = run(["classify", "--family", "binomial", "--bp", "-0.5",
                            "--props", "gcv,gcc", "--format", "csv"], capsys)
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 1 and rows[0][0] == "property" and rows[1][1] == "violated"
        code, out, _ = run(["classify", "--family", "binomial", "--bp", "0.5",
                            "--props", "gcv", "--format", "table"], capsys)
        assert code == 0 and "holds_on_grid" in out

    @pytest.mark.parametrize("argv", [
        ["classify", "--family", "nope"],
        ["classify", "--family", "uab", "--a", "0.5", "--b", "1"],
        ["classify", "--family", "power"],
        ["classify", "--family", "power", "--alpha", "0.5", "--props", "gcv,xyz"],
        ["classify", "--family", "power", "--alpha", "0.5", "--t-min", "2"],
        ["classify", "--family", "geodesic", "--atoms", "0.5:0.2"],
    ])
    def test_usage_errors(self, argv, capsys):
        code, _, err = run(argv, capsys)
        assert code == 2 and "error" in err

    def test_parser_error_exit_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2


class TestReproduce:

    def test_theorem(self, capsys):
        code, out, _ = run(["reproduce", "theorem_gcv_pmi"], capsys)
        rep = json.loads(out)
        assert code == 0 and rep["status"] == "PASS"
        assert rep["result"]["gcv_criterion_at_1e-3"] < 0

    def test_region_uab(self, capsys):
        code, out, _ = run(["reproduce", "region_uab"], capsys)
        rep = json.loads(out)["result"]
        assert code == 0
        assert rep["gcv"]["interior_mismatches"] == 0 and rep["gcc"]["interior_mismatches"] == 0

    def test_region_stolarsky(self, capsys):
        code, _, _ = run(["reproduce", "region_stolarsky", "--format", "table"], capsys)
        assert code == 0

    def test_section5_reports_numbers(self, capsys):
        code, out, _ = run(["reproduce", "section5_separation"], capsys)
        rep = json.loads(out)["result"]
        assert rep["checks"]["pmi_inf_holds"] and rep["checks"]["pmi_r2_violated"]
        assert rep["checks"]["derivative_is_one_third"]
        assert set(rep["ratios_at_t_1e-10"]) == {"2.0", "3.0"}
        # exit status tracks the combined verdict
        assert code == (0 if rep["pass"] else 1)

    def test_unknown(self, capsys):
        code, _, _ = run(["reproduce", "nothing"], capsys)
        assert code == 2


class TestHansen:

    def test_eval(self, tmp_path, capsys):
        path = tmp_path / "h.json"
        path.write_text(json.dumps([{"from": "-inf", "to": -2, "value": 1}]))
        code, out, _ = run(["hansen", "--density", str(path), "--t", "4"], capsys)
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0
        assert rows[0] == ["t", "r", "value", "method"]
        assert float(rows[1][2]) == pytest.approx(2.0)

    def test_gcv_theorem(self, capsys):
        code, out, _ = run(["hansen", "--density", "theorem", "--criterion", "gcv",
                            "--t", "0.001", "--format", "json"], capsys)
        assert code == 0
        assert json.loads(out)["rows"][0]["value"] < 0

    def test_pmi_r_one(self, capsys):
        code, out, _ = run(["hansen", "--density", "theorem", "--criterion", "pmi",
                            "--r", "1", "--n-points", "21"], capsys)
        rows = list(csv.reader(io.StringIO(out)))[1:]
        assert code == 0 and len(rows) == 21
        assert all(abs(float(r[2])) < 1e-14 for r in rows)

    def test_quadrature_method(self, capsys):
        code, out, _ = run(["hansen", "--density", "theorem", "--t", "3",
                            "--method", "quadrature"], capsys)
        assert code == 0 and out.strip().endswith("quadrature")

    @pytest.mark.parametrize("content", ['[{"from": "x"}]', "garbage",
                                         '[{"from": -1, "to": 1, "value": 0.5}]'])
    def test_malformed(self, content, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(content)
        code, _, _ = run(["hansen", "--density", str(path)], capsys)
        assert code == 2

    def test_missing_file(self, capsys):
        code, _, _ = run(["hansen", "--density", "/nonexistent/h.json"], capsys)
        assert code == 2


class TestFuzz:

    def test_geometric_no_witness(self, capsys):
        code, out, _ = run(["fuzz", "--family", "power", "--alpha", "0.5", "--p", "2",
                            "--trials", "300", "--seed", "7"], capsys)
        assert code == 0 and json.loads(out)["witness"] is None

    def test_slow_pmi_example_witness(self, capsys):
        code, out, _ = run(["fuzz", "--family", "section5", "--p", "2", "--seed", "7"], capsys)
        w = json.loads(out)["witness"]
        assert code == 1 and w["phase"] == "scalar_probe" and w["seed"] == 7

    def test_uab_outside_pmi_region(self, capsys):
        code, out, _ = run(["fuzz", "--family", "uab", "--a", "0.5", "--b", "-1", "--p", "3",
                            "--seed", "7"], capsys)
        assert code == 1 and json.loads(out)["witness"] is not None

    def test_bad_p(self, capsys):
        code, _, _ = run(["fuzz", "--family", "power", "--alpha", "0.5", "--p", "1"], capsys)
        assert code == 2

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("MEANSCOPE_SEED", "42")
        _, out, _ = run(["fuzz", "--family", "power", "--alpha", "0.5", "--trials", "5"],
                        capsys)
        assert json.loads(out)["config"]["seed"] == 42
        _, out, _ = run(["fuzz", "--family", "power", "--alpha", "0.5", "--trials", "5",
                         "--seed", "3"], capsys)
        assert json.loads(out)["config"]["seed"] == 3
        monkeypatch.setenv("MEANSCOPE_SEED", "x")
        code, _, _ = run(["fuzz", "--family", "power", "--alpha", "0.5", "--trials", "5"],
                         capsys)
        assert code == 2


class TestScan:

    def test_csv(self, capsys):
        code, out, _ = run(["scan", "--family", "stolarsky", "--property", "gcc",
                            "--step", "0.5"], capsys)
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[0] == ["alpha", "predicted", "observed"]
        assert len(rows) == 10

    def test_bad_step(self, capsys):
        code, _, _ = run(["scan", "--family", "binomial", "--step", "0"], capsys)
        assert code == 2


class TestConfig:

    def test_round_trip(self):
        cfg = RunConfig("classify", {"family": "power", "alpha": 0.5},
                        GridSpec(1e-3, 1e3, 51, r_values=(2.0,)), ToleranceConfig(fd_step=1e-3),
                        seed=9, format="table", output="x.txt")
        again = RunConfig.from_json(cfg.to_json())
        assert again == cfg

    def test_replay_from_report(self, tmp_path, capsys):
        argv = ["classify", "--family", "binomial", "--bp", "0.25", "--props", "gcv,pmi_inf",
                "--n-points", "61", "--slack", "1e-9", "--seed", "5"]
        _, first, _ = run(argv, capsys)
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(json.loads(first)["config"]))
        _, second, _ = run(["classify", "--config", str(cfg_path)], capsys)
        assert first == second

    def test_flags_override_config(self, tmp_path, capsys):
        cfg = RunConfig("classify", {"family": "power", "alpha": 0.5, "props": "gcv"})
        path = tmp_path / "cfg.json"
        path.write_text(cfg.to_json())
        _, out, _ = run(["classify", "--config", str(path), "--n-points", "11"], capsys)
        assert json.loads(out)["config"]["grid"]["n_points"] == 11

    def test_bad_config(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text("{")
        code, _, _ = run(["classify", "--config", str(path)], capsys)
        assert code == 2

    def test_output_file(self, tmp_path, capsys):
        out_path = tmp_path / "rep.json"
        code, out, _ = run(["classify", "--family", "power", "--alpha", "0.5",
                            "--out", str(out_path)], capsys)
        assert code == 0 and out == ""
        assert json.loads(out_path.read_text())["all_hold"]


def test_byte_identical_reports(capsys):
    argv = ["fuzz", "--family", "binomial", "--bp", "0.5", "--trials", "50", "--seed", "11"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "meanscope", "classify", "--family", "power",
                           "--alpha", "0.3", "--props", "gcv", "--format", "table"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "GCV" in proc.stdout
