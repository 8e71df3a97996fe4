"""End-to-end command line behavior: artifacts, determinism, exit codes."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from orric import (
    ProfileSet,
    Trace,
    make_model,
    save_model,
    save_profiles,
    write_trace_csv,
)
from orric.cli import main


@pytest.fixture(scope="module")
def worked_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("worked")
    profiles = ProfileSet(retrain=[(0.0, 0.0), (1.0, 10.0)], infer=[(0.6, 2.0), (1.0, 5.0)])
    model = make_model("linear", {"intercept": 0.5, "slope": 0.3}, 1.0)
    trace = Trace(d=(1.0, 1.0), c=(12.0, 5.0), d_min=1.0, d_max=1.0)
    save_profiles(root / "profiles.json", profiles)
    save_model(root / "model.json", model)
    write_trace_csv(root / "trace.csv", trace)
    return root


def read_tree(out_dir: Path) -> dict[str, bytes]:
    return {
        str(p.relative_to(out_dir)): p.read_bytes()
        for p in sorted(out_dir.rglob("*"))
        if p.is_file()
    }


class TestGenTrace:
    def test_constant_law(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        rc = main(["gen-trace", "--T", "3", "--law", "constant", "--d", "2", "--c", "8",
                   "--out", str(out)])
        assert rc == 0
        assert out.read_text() == "t,d,c\n1,2,8\n2,2,8\n3,2,8\n"
        assert "3 slots" in capsys.readouterr().out

    def test_menu_law_requires_profiles(self, tmp_path, capsys):
        rc = main(["gen-trace", "--T", "3", "--law", "scarce", "--out", str(tmp_path / "t.csv")])
        assert rc == 1
        assert "profiles" in capsys.readouterr().err

    def test_menu_law_with_profiles(self, tmp_path, worked_files):
        out = tmp_path / "trace.csv"
        rc = main(["gen-trace", "--T", "2", "--law", "scarce", "--d", "1",
                   "--profiles", str(worked_files / "profiles.json"), "--out", str(out)])
        assert rc == 0
        assert out.read_text() == "t,d,c\n1,1,2\n2,1,2\n"

    def test_deterministic_rerun(self, tmp_path):
        out = tmp_path / "trace.csv"
        argv = ["gen-trace", "--T", "20", "--d-law", "uniform", "--d", "1", "--d-hi", "2",
                "--law", "uniform", "--c", "5", "--c-hi", "9", "--seed", "11", "--out", str(out)]
        assert main(argv) == 0
        first = out.read_bytes()
        assert main(argv) == 0
        assert out.read_bytes() == first


class TestPrune:
    def test_removes_dominated(self, tmp_path, capsys):
        raw = tmp_path / "raw.json"
        raw.write_text(json.dumps({
            "retrain": [{"gain": 0.5, "cost": 3.0}],
            "infer": [
                {"profit": 42.97, "cost": 6.35},
                {"profit": 55.71, "cost": 6.71},
                {"profit": 64.53, "cost": 7.45},
                {"profit": 56.28, "cost": 7.94},
            ],
        }))
        out = tmp_path / "pruned.json"
        rc = main(["prune", "--profiles", str(raw), "--out", str(out)])
        assert rc == 0
        assert "1 dominated entries removed" in capsys.readouterr().out
        data = json.loads(out.read_text())
        assert [e["cost"] for e in data["infer"]] == [6.35, 6.71, 7.45]
        assert data["retrain"][0] == {"gain": 0.0, "cost": 0.0}

    def test_no_auto_zero(self, tmp_path, capsys):
        raw = tmp_path / "raw.json"
        raw.write_text(json.dumps({
            "retrain": [{"gain": 0.5, "cost": 3.0}],
            "infer": [{"profit": 1.0, "cost": 1.0}],
        }))
        rc = main(["prune", "--profiles", str(raw), "--no-auto-zero",
                   "--out", str(tmp_path / "o.json")])
        assert rc == 1


class TestRun:
    def test_worked_instance_artifacts(self, tmp_path, worked_files, capsys):
        out = tmp_path / "run"
        rc = main(["run",
                   "--profiles", str(worked_files / "profiles.json"),
                   "--model", str(worked_files / "model.json"),
                   "--trace", str(worked_files / "trace.csv"),
                   "--out", str(out)])
        assert rc == 0
        for name in ("orric", "inference-only", "inference-greedy",
                     "knowledge-distillation", "focus-shift", "oracle"):
            assert (out / f"{name}.csv").exists()
        assert (out / "schedule.csv").exists()

        summary = json.loads((out / "summary.json").read_text())
        assert summary["policies"]["orric"]["total"] == pytest.approx(1.0, abs=1e-12)
        assert summary["policies"]["knowledge-distillation"]["total"] == pytest.approx(1.1, abs=1e-12)
        assert summary["policies"]["knowledge-distillation"]["degraded_slot_count"] == 2
        assert summary["oracle"]["total"] == pytest.approx(1.1, abs=1e-12)
        assert summary["oracle"]["enumerated_sequences"] == 4
        assert summary["bounds"]["alpha"] == pytest.approx(0.225, abs=1e-12)

        stdout = capsys.readouterr().out
        assert "orric: 1" in stdout
        assert "oracle: 1.1" in stdout

    def test_ratio_consistency(self, tmp_path, worked_files):
        out = tmp_path / "run"
        main(["run",
              "--profiles", str(worked_files / "profiles.json"),
              "--model", str(worked_files / "model.json"),
              "--trace", str(worked_files / "trace.csv"),
              "--out", str(out)])
        summary = json.loads((out / "summary.json").read_text())
        for name, ratio in summary["ratios_vs_oracle"].items():
            expected = summary["policies"][name]["total"] / summary["oracle"]["total"]
            assert ratio == pytest.approx(expected, abs=1e-12)

    def test_byte_identical_rerun(self, tmp_path, worked_files):
        out = tmp_path / "run"
        argv = ["run",
                "--profiles", str(worked_files / "profiles.json"),
                "--model", str(worked_files / "model.json"),
                "--trace", str(worked_files / "trace.csv"),
                "--out", str(out)]
        assert main(argv) == 0
        first = read_tree(out)
        assert main(argv) == 0
        assert read_tree(out) == first

    def test_generated_trace_written(self, tmp_path, worked_files):
        out = tmp_path / "run"
        rc = main(["run",
                   "--profiles", str(worked_files / "profiles.json"),
                   "--model", str(worked_files / "model.json"),
                   "--T", "3", "--law", "sufficient", "--d", "1",
                   "--out", str(out)])
        assert rc == 0
        assert (out / "trace.csv").read_text() == "t,d,c\n1,1,15\n2,1,15\n3,1,15\n"
        summary = json.loads((out / "summary.json").read_text())
        assert summary["inputs"]["trace_spec"]["c_law"] == "sufficient"

    def test_schedule_csv(self, tmp_path, worked_files):
        out = tmp_path / "run"
        main(["run",
              "--profiles", str(worked_files / "profiles.json"),
              "--model", str(worked_files / "model.json"),
              "--trace", str(worked_files / "trace.csv"),
              "--out", str(out)])
        lines = (out / "schedule.csv").read_text().splitlines()
        assert lines[0] == "t,v,w,lambda"
        # v_1 = 0.3 * 0.6 * 1, w_1 = g = 0.5; v_2 = 0, w_2 = f(1) = 0.8
        assert lines[1] == "1,0.18,0.5,0.18"
        assert lines[2] == "2,0,0.8,0.09"

    def test_policy_subset(self, tmp_path, worked_files):
        out = tmp_path / "run"
        rc = main(["run",
                   "--profiles", str(worked_files / "profiles.json"),
                   "--model", str(worked_files / "model.json"),
                   "--trace", str(worked_files / "trace.csv"),
                   "--policies", "orric,inference-only",
                   "--out", str(out)])
        assert rc == 0
        summary = json.loads((out / "summary.json").read_text())
        assert set(summary["policies"]) == {"orric", "inference-only"}
        assert not (out / "focus-shift.csv").exists()

    def test_oracle_cap_skips(self, tmp_path, worked_files, capsys):
        out = tmp_path / "run"
        rc = main(["run",
                   "--profiles", str(worked_files / "profiles.json"),
                   "--model", str(worked_files / "model.json"),
                   "--trace", str(worked_files / "trace.csv"),
                   "--oracle-cap", "3",
                   "--out", str(out)])
        assert rc == 0
        summary = json.loads((out / "summary.json").read_text())
        assert "skipped" in summary["oracle"]
        assert not (out / "oracle.csv").exists()
        assert "oracle skipped" in capsys.readouterr().out

    def test_oracle_disabled(self, tmp_path, worked_files):
        out = tmp_path / "run"
        main(["run",
              "--profiles", str(worked_files / "profiles.json"),
              "--model", str(worked_files / "model.json"),
              "--trace", str(worked_files / "trace.csv"),
              "--oracle-cap", "0",
              "--out", str(out)])
        summary = json.loads((out / "summary.json").read_text())
        assert summary["oracle"] == {"skipped": "oracle disabled (cap 0)"}

    def test_replay_shortcut(self, tmp_path):
        out = tmp_path / "run"
        rc = main(["run", "--replay", "fog", "--T", "4", "--out", str(out)])
        assert rc == 0
        for name in ("profiles.json", "model.json", "trace.csv", "summary.json"):
            assert (out / name).exists()
        summary = json.loads((out / "summary.json").read_text())
        assert summary["inputs"]["replay"]["corruption"] == "fog"
        assert summary["oracle"]["enumerated_sequences"] == 6**4

    def test_unknown_policy(self, tmp_path, worked_files, capsys):
        rc = main(["run",
                   "--profiles", str(worked_files / "profiles.json"),
                   "--model", str(worked_files / "model.json"),
                   "--trace", str(worked_files / "trace.csv"),
                   "--policies", "greedy",
                   "--out", str(tmp_path / "run")])
        assert rc == 1
        assert "unknown policy" in capsys.readouterr().err

    def test_missing_inputs(self, tmp_path, capsys):
        rc = main(["run", "--out", str(tmp_path / "run")])
        assert rc == 1


class TestOracle:
    def test_prints_total(self, tmp_path, worked_files, capsys):
        out = tmp_path / "oracle.csv"
        rc = main(["oracle",
                   "--profiles", str(worked_files / "profiles.json"),
                   "--model", str(worked_files / "model.json"),
                   "--trace", str(worked_files / "trace.csv"),
                   "--out", str(out)])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "oracle: 1.1"
        assert out.read_text().splitlines()[1].startswith("1,2,1,")

    def test_cap_exceeded(self, tmp_path, worked_files, capsys):
        rc = main(["oracle",
                   "--profiles", str(worked_files / "profiles.json"),
                   "--model", str(worked_files / "model.json"),
                   "--trace", str(worked_files / "trace.csv"),
                   "--cap", "3"])
        assert rc == 1
        assert "exceed" in capsys.readouterr().err


class TestBounds:
    def test_report(self, tmp_path, worked_files, capsys):
        priced = tmp_path / "priced.json"
        save_model(priced, make_model("linear", {"intercept": 0.5, "slope": 0.3}, 1.0,
                                      L_override=0.01))
        rc = main(["bounds",
                   "--profiles", str(worked_files / "profiles.json"),
                   "--model", str(priced),
                   "--d-min", "1000", "--d-max", "1000", "--T", "2"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["alpha"] == 0.0075
        assert report["crossover_horizon"] == pytest.approx(80.0, abs=1e-9)
        assert report["cr_orric"] == pytest.approx(0.6296875, abs=1e-12)

    def test_undefined_crossover(self, tmp_path, capsys):
        profiles = tmp_path / "profiles.json"
        save_profiles(profiles, ProfileSet(retrain=[(0.0, 0.0)], infer=[(1.0, 5.0)]))
        flat = tmp_path / "flat.json"
        with pytest.warns(UserWarning):
            save_model(flat, make_model("constant", {"value": 0.7}, 0.0))
        with pytest.warns(UserWarning):
            rc = main(["bounds", "--profiles", str(profiles), "--model", str(flat),
                       "--d-min", "1", "--d-max", "1", "--T", "5"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["crossover_horizon"] == "undefined"
        assert report["alpha"] == 0.0


class TestReplayCommand:
    def test_artifacts_and_summary(self, tmp_path, capsys):
        out = tmp_path / "replay"
        rc = main(["replay", "gaussian noise", "--T", "5", "--out", str(out)])
        assert rc == 0
        profiles = json.loads((out / "profiles.json").read_text())
        assert len(profiles["infer"]) == 3
        model = json.loads((out / "model.json").read_text())
        assert model["family"] == "linear"
        assert model["params"]["slope"] == 0.01
        summary = json.loads((out / "summary.json").read_text())
        assert summary["inputs"]["replay"]["corruption"] == "gaussian noise"
        assert "oracle" in summary

    def test_byte_identical_rerun(self, tmp_path):
        out = tmp_path / "replay"
        argv = ["replay", "fog", "--T", "6", "--seed", "3", "--out", str(out)]
        assert main(argv) == 0
        first = read_tree(out)
        assert main(argv) == 0
        assert read_tree(out) == first

    def test_spec_file(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"corruption": "fog", "horizon": 3, "seed": 9}))
        out = tmp_path / "replay"
        rc = main(["replay", "--spec", str(spec), "--out", str(out)])
        assert rc == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["inputs"]["replay"]["horizon"] == 3

    def test_needs_label_or_spec(self, tmp_path, capsys):
        rc = main(["replay", "--out", str(tmp_path / "r")])
        assert rc == 1

    def test_unknown_label(self, tmp_path, capsys):
        rc = main(["replay", "rain", "--out", str(tmp_path / "r")])
        assert rc == 1
        assert "unknown corruption" in capsys.readouterr().err


class TestWitness:
    def test_both_signs(self, tmp_path, capsys):
        model = tmp_path / "model.json"
        save_model(model, make_model(
            "exponential-saturation", {"limit": 0.8, "scale": 0.3, "rate": 2.0}, 1.0))
        out = tmp_path / "witness.json"
        rc = main(["witness", "--model", str(model), "--y-lo", "0.5", "--y-hi", "1",
                   "--out", str(out)])
        assert rc == 0
        report = json.loads(out.read_text())
        assert report["positive"]["gap"] > 0.0
        assert report["negative"]["gap"] < 0.0

    def test_flat_curve_reports_nulls(self, tmp_path, capsys):
        model = tmp_path / "flat.json"
        with pytest.warns(UserWarning):
            save_model(model, make_model("constant", {"value": 0.7}, 1.0))
        with pytest.warns(UserWarning):
            rc = main(["witness", "--model", str(model), "--y-lo", "0.5", "--y-hi", "1"])
        assert rc == 0
        captured = capsys.readouterr()
        report = json.loads(captured.out)
        assert report == {"positive": None, "negative": None}
        assert "no witness" in captured.err


class TestExitCodes:
    def test_missing_file(self, tmp_path, capsys):
        rc = main(["oracle", "--profiles", str(tmp_path / "nope.json"),
                   "--model", str(tmp_path / "nope.json"),
                   "--trace", str(tmp_path / "nope.csv")])
        assert rc == 1

    def test_infeasible_is_two(self, tmp_path, worked_files, capsys):
        trace = tmp_path / "starved.csv"
        trace.write_text("t,d,c\n1,1,12\n2,1,1\n")
        rc = main(["run",
                   "--profiles", str(worked_files / "profiles.json"),
                   "--model", str(worked_files / "model.json"),
                   "--trace", str(trace),
                   "--out", str(tmp_path / "run")])
        assert rc == 2
        assert "infeasible" in capsys.readouterr().err

    def test_usage_error(self, capsys):
        assert main(["run"]) == 1
        assert main(["frobnicate"]) == 1
        assert main([]) == 1

    def test_bad_flag_value(self, tmp_path, capsys):
        assert main(["gen-trace", "--T", "three", "--out", str(tmp_path / "t.csv")]) == 1
