import csv
import io
import json

import pytest

from clfgame import cli
from clfgame.config import (
    ConfigError,
    SpecValidationError,
    bundled_config_path,
    load_spec,
    spec_from_dict,
)

from conftest import make_spec


GOOD_CONFIG = {
    "models": [
        {"name": "standard", "acc": 0.952},
        {"name": "adv_trained", "acc": 0.873},
    ],
    "attacks": [{"name": "pgd"}],
    "robustness": [[0.035], [0.458]],
    "economics": {
        "R_plus_def": 1.0,
        "R_minus_def": 0.0,
        "R_plus_adv": 1.0,
        "R_minus_adv": 0.0,
        "I_def": 0.0,
        "I_adv": 0.0,
        "n": 1000,
        "r_max": 1.0,
    },
}


def write_config(tmp_path, payload, name="game.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestConfigLoading:
    def test_spec_from_dict_round_trip(self):
        spec = spec_from_dict(GOOD_CONFIG)
        assert spec.n_models == 2
        assert spec.n_attacks == 2  # no-attack appended last
        assert spec.attacks[-1].no_attack
        assert spec.models[0].acc == 0.952
        assert spec.economics.n == 1000

    def test_bundled_configs_load(self):
        madry = load_spec(bundled_config_path("madry_wide"))
        assert madry.model_names() == ("standard", "adv_trained")
        assert float(madry.robustness[1, 0]) == 0.458
        zoo = load_spec(bundled_config_path("shafahi_free"))
        assert zoo.n_models == 5
        assert zoo.attacks[0].ongoing_cost == 0.6

    def test_schema_rejects_missing_field(self):
        bad = {k: v for k, v in GOOD_CONFIG.items() if k != "economics"}
        with pytest.raises(ConfigError, match="economics"):
            spec_from_dict(bad)

    def test_schema_rejects_unknown_field(self):
        bad = dict(GOOD_CONFIG, extra_knob=1)
        with pytest.raises(ConfigError):
            spec_from_dict(bad)

    def test_schema_points_at_bad_field(self):
        bad = json.loads(json.dumps(GOOD_CONFIG))
        bad["models"][0]["acc"] = "high"
        with pytest.raises(ConfigError, match="models"):
            spec_from_dict(bad)

    def test_robustness_shape_mismatch(self):
        bad = json.loads(json.dumps(GOOD_CONFIG))
        bad["robustness"] = [[0.1, 0.2], [0.3, 0.4]]
        with pytest.raises(ConfigError, match="robustness"):
            spec_from_dict(bad)

    def test_semantic_violations_are_collected(self, tmp_path):
        bad = json.loads(json.dumps(GOOD_CONFIG))
        bad["robustness"] = [[-0.1], [0.458]]
        bad["economics"]["r_max"] = 1.0
        path = write_config(tmp_path, bad)
        with pytest.raises(SpecValidationError) as err:
            load_spec(path)
        assert "robustness out of [0,1]" in str(err.value)
        assert not err.value.report.ok

    def test_broken_json_has_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"models": [,]}')
        with pytest.raises(ConfigError, match=r"broken\.json:1:"):
            load_spec(str(path))

    def test_missing_file_is_oserror(self):
        with pytest.raises(OSError):
            load_spec("/definitely/not/here.json")


class TestCliExitCodes:
    def test_validate_ok(self, tmp_path, capsys):
        path = write_config(tmp_path, GOOD_CONFIG)
        code, out, _ = run_cli(capsys, "validate", "--spec", path)
        assert code == 0
        report = json.loads(out)
        assert report["ok"] is True
        assert report["violations"] == []

    def test_validate_flags_bad_spec(self, tmp_path, capsys):
        bad = json.loads(json.dumps(GOOD_CONFIG))
        bad["models"][0]["acc"] = 1.7
        path = write_config(tmp_path, bad)
        code, out, _ = run_cli(capsys, "validate", "--spec", path)
        assert code == 1
        report = json.loads(out)
        assert report["ok"] is False
        assert any("acc out of [0,1]" in v for v in report["violations"])

    def test_missing_file_exits_3(self, capsys):
        code, _, err = run_cli(capsys, "validate", "--spec", "/no/such/file.json")
        assert code == 3
        assert "error:" in err

    def test_guard_exits_2(self, tmp_path, capsys):
        big = {
            "models": [{"name": f"m{i}", "acc": 0.9} for i in range(13)],
            "attacks": [{"name": "pgd"}],
            "robustness": [[0.1]] * 13,
            "economics": GOOD_CONFIG["economics"],
        }
        path = write_config(tmp_path, big)
        code, _, err = run_cli(capsys, "solve", "--spec", path)
        assert code == 2
        assert "error:" in err

    def test_usage_error_exits_1(self, capsys):
        code, _, err = run_cli(capsys, "region-map", "--spec", "x.json")
        assert code == 1  # --map is required
        assert "error:" in err

    def test_csv_unavailable_for_solve(self, tmp_path, capsys):
        path = write_config(tmp_path, GOOD_CONFIG)
        code, _, err = run_cli(capsys, "solve", "--spec", path, "--format", "csv")
        assert code == 1
        assert "csv output" in err

    def test_non_2x2_cases_exit_1(self, capsys):
        code, _, err = run_cli(
            capsys, "cases", "--spec", str(bundled_config_path("shafahi_free"))
        )
        assert code == 1


class TestSolveCommand:
    def test_closed_form_route(self, tmp_path, capsys):
        path = write_config(tmp_path, GOOD_CONFIG)
        code, out, _ = run_cli(capsys, "solve", "--spec", path)
        assert code == 0
        report = json.loads(out)
        assert report["route"] == "closed_form"
        assert report["ordering_2x2"] is True
        assert report["thresholds"]["defend_threshold"] == pytest.approx(
            0.15737051792828677, abs=1e-12
        )
        assert report["cases"]["adversary_satisfiable"] == ["always_attack"]
        assert report["pure_equilibria"] == [
            {
                "model": 1,
                "attack": 0,
                "model_name": "adv_trained",
                "attack_name": "pgd",
            }
        ]
        assert report["mixed_equilibrium"] is None

    def test_mixed_equilibrium_reported(self, tmp_path, capsys):
        payload = json.loads(json.dumps(GOOD_CONFIG))
        payload["models"] = [
            {"name": "a", "acc": 0.95},
            {"name": "b", "acc": 0.85},
        ]
        payload["robustness"] = [[0.3], [0.7]]
        payload["economics"].update({"R_minus_adv": 1.0, "n": 1, "r_max": 0.45})
        path = write_config(tmp_path, payload)
        code, out, _ = run_cli(capsys, "solve", "--spec", path)
        assert code == 0
        report = json.loads(out)
        eq = report["mixed_equilibrium"]
        assert eq["s"] == pytest.approx([0.5, 0.5], abs=1e-12)
        assert eq["r"] == pytest.approx([4 / 9, 5 / 9], abs=1e-12)
        assert report["pure_equilibria"] == []

    def test_support_enumeration_route(self, capsys):
        code, out, _ = run_cli(
            capsys, "solve", "--spec", str(bundled_config_path("shafahi_free"))
        )
        assert code == 0
        report = json.loads(out)
        assert report["route"] == "support_enumeration"
        assert report["notice"]
        assert report["equilibria"]
        cli.validate_report("solve", report)


class TestTableCommands:
    def test_ccr_curve_csv_equals_json(self, tmp_path, capsys):
        path = write_config(tmp_path, GOOD_CONFIG)
        code, out_json, _ = run_cli(
            capsys, "ccr-curve", "--spec", path, "--grid", "11"
        )
        assert code == 0
        report = json.loads(out_json)
        code, out_csv, _ = run_cli(
            capsys, "ccr-curve", "--spec", path, "--grid", "11", "--format", "csv"
        )
        assert code == 0
        rows = list(csv.reader(io.StringIO(out_csv)))
        assert rows[0] == ["rho", "standard", "adv_trained"]
        assert len(rows) == 12
        for k, row in enumerate(rows[1:]):
            assert float(row[0]) == report["rho"][k]
            assert float(row[1]) == report["ccr"]["standard"][k]
            assert float(row[2]) == report["ccr"]["adv_trained"][k]
        assert report["ccr"]["standard"][0] == 0.952
        assert report["ccr"]["standard"][-1] == 0.035
        assert report["intersections"][0]["rho"] == pytest.approx(
            0.15737051792828677, abs=1e-12
        )

    def test_region_map_csv_equals_json(self, tmp_path, capsys):
        path = write_config(tmp_path, GOOD_CONFIG)
        args = [
            "region-map",
            "--spec",
            path,
            "--map",
            "def",
            "--grid",
            "21",
            "--delta-mu-def",
            "0",
            "--r-max",
            "0.45",
        ]
        code, out_json, _ = run_cli(capsys, *args)
        assert code == 0
        report = json.loads(out_json)
        code, out_csv, _ = run_cli(capsys, *args, "--format", "csv")
        rows = list(csv.reader(io.StringIO(out_csv)))
        assert rows[0] == ["x", "y", "case_label"]
        assert len(rows) == 1 + len(report["cells"])
        for row, cell in zip(rows[1:], report["cells"]):
            assert float(row[0]) == cell["x"]
            assert float(row[1]) == cell["y"]
            assert row[2] == cell["case_label"]

    def test_region_map_point_labels(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "region-map",
            "--spec",
            str(bundled_config_path("madry_wide")),
            "--map",
            "adv",
            "--mu-adv",
            "0.2",
        )
        assert code == 0
        report = json.loads(out)
        assert report["params"]["mu_adv"] == 0.2
        (point,) = report["points"]
        assert point["name"] == "standard_vs_adv_trained"
        assert point["x"] == 0.458 and point["y"] == 0.035
        assert point["case_label"] == "Case 2"

    def test_region_map_labels_cover_plane(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "region-map",
            "--spec",
            str(bundled_config_path("madry_wide")),
            "--map",
            "def",
            "--grid",
            "13",
            "--delta-mu-def",
            "0.02",
            "--r-max",
            "0.5",
        )
        report = json.loads(out)
        labels = {cell["case_label"] for cell in report["cells"]}
        assert "invalid" in labels
        assert "Case C (and A&B) possible" in labels


class TestEnvelopeCommand:
    def test_model_zoo_breakpoints(self, capsys):
        code, out, _ = run_cli(
            capsys, "envelope", "--spec", str(bundled_config_path("shafahi_free"))
        )
        assert code == 0
        report = json.loads(out)
        assert [seg["model_name"] for seg in report["segments"]] == [
            "standard",
            "free_m2",
            "free_m8",
        ]
        assert report["breakpoints"][0]["rho"] == pytest.approx(0.09498, abs=5e-6)
        assert report["breakpoints"][1]["rho"] == pytest.approx(0.29853, abs=5e-6)


class TestDominanceCommand:
    def test_model_zoo_report(self, capsys):
        code, out, _ = run_cli(
            capsys, "dominance", "--spec", str(bundled_config_path("shafahi_free"))
        )
        assert code == 0
        report = json.loads(out)
        by_name = {row["name"]: row for row in report["defender"]}
        assert by_name["free_m10"]["status"] == "pure_dominated"
        assert by_name["free_m10"]["dominated_by_name"] == "free_m8"
        assert by_name["free_m4"]["status"] == "mixed_dominated"
        assert by_name["standard"]["status"] == "undominated"
        assert all(row["status"] == "undominated" for row in report["adversary"])


class TestCasesCommand:
    def test_profiles_are_classified(self, tmp_path, capsys):
        path = write_config(tmp_path, GOOD_CONFIG)
        code, out, _ = run_cli(
            capsys,
            "cases",
            "--spec",
            path,
            "--s-probs",
            "0.5,0.5",
            "--r-probs",
            "1,0",
        )
        assert code == 0
        report = json.loads(out)
        assert report["adversary"]["case_at_s"] == "always_attack"
        assert report["adversary"]["best_response_at_s"] == {"kind": "pure", "index": 0}
        assert report["defender"]["case_at_r"] == "always_defend"
        assert report["defender"]["best_response_at_r"] == {"kind": "pure", "index": 1}

    def test_bad_probs_exit_1(self, tmp_path, capsys):
        path = write_config(tmp_path, GOOD_CONFIG)
        code, _, err = run_cli(
            capsys, "cases", "--spec", path, "--s-probs", "0.5,abc"
        )
        assert code == 1
        assert "error:" in err


class TestSimulateCommand:
    def test_deterministic_output_files(self, tmp_path, capsys):
        path = write_config(tmp_path, GOOD_CONFIG)
        out_a = tmp_path / "a.json"
        out_b = tmp_path / "b.json"
        for out_path in (out_a, out_b):
            code, _, _ = run_cli(
                capsys,
                "simulate",
                "--spec",
                path,
                "--s-probs",
                "0.5,0.5",
                "--r-probs",
                "0.5,0.5",
                "--trials",
                "20",
                "--n",
                "500",
                "--seed",
                "11",
                "--out",
                str(out_path),
            )
            assert code == 0
        assert out_a.read_bytes() == out_b.read_bytes()
        report = json.loads(out_a.read_text())
        assert report["n"] == 500
        assert report["trials"] == 20
        assert len(report["per_trial"]["utility_def"]) == 20
        cli.validate_report("simulate", report)

    def test_convergence_field(self, tmp_path, capsys):
        path = write_config(tmp_path, GOOD_CONFIG)
        code, out, _ = run_cli(
            capsys,
            "simulate",
            "--spec",
            path,
            "--s-probs",
            "0,1",
            "--r-probs",
            "1,0",
            "--trials",
            "60",
            "--n",
            "10000",
            "--seed",
            "3",
        )
        assert code == 0
        report = json.loads(out)
        assert report["analytic_utility_def"] == pytest.approx(4580.0, abs=1e-9)
        assert report["convergence_passed"] is True


class TestReportSchemas:
    def test_every_json_report_revalidates(self, tmp_path, capsys):
        path = write_config(tmp_path, GOOD_CONFIG)
        invocations = {
            "validate": ["validate", "--spec", path],
            "solve": ["solve", "--spec", path],
            "cases": ["cases", "--spec", path, "--s-probs", "0.5,0.5"],
            "ccr_curve": ["ccr-curve", "--spec", path, "--grid", "5"],
            "region_map": ["region-map", "--spec", path, "--map", "adv", "--grid", "5"],
            "dominance": ["dominance", "--spec", path],
            "envelope": ["envelope", "--spec", path],
            "simulate": [
                "simulate",
                "--spec",
                path,
                "--s-probs",
                "1,0",
                "--r-probs",
                "0,1",
                "--trials",
                "3",
                "--n",
                "50",
            ],
        }
        for command, argv in invocations.items():
            code, out, err = run_cli(capsys, *argv)
            assert code == 0, (command, err)
            report = json.loads(out)
            assert report["command"] == command
            cli.validate_report(command, report)


def test_console_script_is_installed(tmp_path):
    import subprocess

    path = write_config(tmp_path, GOOD_CONFIG)
    proc = subprocess.run(
        ["clfgame", "validate", "--spec", path],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["ok"] is True


def test_make_spec_matches_bundled_madry():
    from conftest import madry_spec

    bundled = load_spec(bundled_config_path("madry_wide"))
    local = madry_spec(n=10000)
    assert [m.acc for m in bundled.models] == [m.acc for m in local.models]
    assert (bundled.robustness == local.robustness).all()
    assert bundled.economics.r_max == local.economics.r_max
