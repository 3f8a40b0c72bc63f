"""Tests for the command-line front end."""

import json

import pytest

from edcal.dataio import load_annotations, load_dataset
from edcal.main import EXIT_INPUT, EXIT_OK, build_parser, main


@pytest.fixture
def config_file(tmp_path, short_scenario):
    path = tmp_path / "short.json"
    path.write_text(short_scenario.model_dump_json(indent=2))
    return path


@pytest.fixture
def synthetic(tmp_path, config_file):
    """Dataset and annotations generated from the reference parameters with seed 13."""
    dataset = tmp_path / "synthetic.csv"
    annotations = tmp_path / "requests.csv"
    code = main(
        [
            "gen-synthetic",
            "--config", str(config_file),
            "--seed", "13",
            "--out", str(dataset),
            "--annotations", str(annotations),
        ],
    )
    assert code == EXIT_OK
    return dataset, annotations


class TestParser:
    """Test suite for argument parsing."""

    def test_defaults(self):
        args = build_parser({"log_level": "WARNING", "seed": 12345, "jobs": 1}).parse_args(["simulate"])
        assert args.reps == 30
        assert args.seed == 12345
        assert args.config is None
        assert not args.trace

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            main([])

    def test_dataset_required_for_calibrate(self):
        with pytest.raises(SystemExit):
            main(["calibrate"])

    def test_bad_environment(self, monkeypatch):
        monkeypatch.setenv("EDCAL_SEED", "not-a-number")
        assert main(["validate"]) == EXIT_INPUT


class TestSimulate:
    """Test suite for the simulate command."""

    def test_writes_outputs(self, tmp_path, config_file):
        out = tmp_path / "sim"
        code = main(["simulate", "--config", str(config_file), "--reps", "2", "--seed", "5", "--out", str(out)])
        assert code == EXIT_OK
        assert (out / "records_rep01.csv").exists()
        assert json.loads((out / "run.json").read_text())["n_reps"] == 2

    def test_same_seed_same_files(self, tmp_path, config_file):
        for name in ("a", "b"):
            args = ["simulate", "--config", str(config_file), "--reps", "1", "--seed", "5"]
            assert main([*args, "--out", str(tmp_path / name)]) == EXIT_OK
        for name in ("records_rep00.csv", "kpis_rep00.csv", "census_rep00.csv"):
            assert (tmp_path / "a" / name).read_text() == (tmp_path / "b" / name).read_text()

    def test_missing_config(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "absent.json"), "--out", str(tmp_path)]) == EXIT_INPUT

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["simulate", "--config", str(path), "--out", str(tmp_path / "sim")]) == EXIT_INPUT


class TestGenSynthetic:
    """Test suite for the gen-synthetic command."""

    def test_dataset_and_annotations(self, synthetic, short_scenario):
        dataset_path, annotations_path = synthetic
        dataset = load_dataset(dataset_path)
        assert dataset.period_days == short_scenario.window_days
        assert all(rec.t5 is None for rec in dataset.records)
        annotations = load_annotations(annotations_path, dataset)
        assert len(annotations) > 0


class TestValidate:
    """Test suite for the validate command."""

    def test_bundled_files(self):
        assert main(["validate"]) == EXIT_OK

    def test_synthetic_dataset(self, synthetic):
        dataset, annotations = synthetic
        assert main(["validate", "--dataset", str(dataset), "--annotations", str(annotations)]) == EXIT_OK

    def test_bad_dataset(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("id,tag,unit,t0,t2,t5,t6,outcome\n1,W,MU,1.0,,,,lwbs\n")
        assert main(["validate", "--dataset", str(path)]) == EXIT_INPUT

    def test_bad_params(self, tmp_path):
        path = tmp_path / "params.json"
        path.write_text(json.dumps({"visit": {}}))
        assert main(["validate", "--params", str(path)]) == EXIT_INPUT


class TestReport:
    """Test suite for the report command."""

    def test_report_tables(self, tmp_path, config_file, synthetic):
        dataset, _ = synthetic
        sim = tmp_path / "sim"
        assert main(["simulate", "--config", str(config_file), "--reps", "2", "--out", str(sim)]) == EXIT_OK
        out = tmp_path / "report"
        assert main(["report", "--sim-dir", str(sim), "--dataset", str(dataset), "--out", str(out)]) == EXIT_OK
        assert (out / "kpi_means.csv").exists()
        assert (out / "patient_counts.csv").exists()

    def test_missing_sim_dir(self, tmp_path, synthetic):
        dataset, _ = synthetic
        code = main(["report", "--sim-dir", str(tmp_path / "nope"), "--dataset", str(dataset)])
        assert code == EXIT_INPUT


class TestCalibrate:
    """Test suite for the calibrate command."""

    def test_missing_dataset(self, tmp_path):
        assert main(["calibrate", "--dataset", str(tmp_path / "absent.csv"), "--out", str(tmp_path)]) == EXIT_INPUT

    def test_self_calibration(self, tmp_path, config_file):
        """Two replications generated and evaluated with one seed reproduce the data exactly."""
        dataset = tmp_path / "two_windows.csv"
        generate = ["gen-synthetic", "--config", str(config_file), "--seed", "13", "--reps", "2", "--out", str(dataset)]
        assert main(generate) == EXIT_OK
        out = tmp_path / "cal"
        code = main(
            [
                "calibrate",
                "--config", str(config_file),
                "--dataset", str(dataset),
                "--seed", "13",
                "--reps", "2",
                "--budget", "3",
                "--out", str(out),
            ],
        )
        assert code == EXIT_OK
        summary = json.loads((out / "solve_summary.json").read_text())
        assert summary["status"] == "target-reached"
        assert summary["best_f"] == 0.0
        assert (out / "best_params.json").exists()

    def test_invalid_settings(self, tmp_path, synthetic):
        dataset, _ = synthetic
        settings = tmp_path / "settings.json"
        settings.write_text(json.dumps({"n_reps": 0}))
        code = main(["calibrate", "--dataset", str(dataset), "--settings", str(settings), "--out", str(tmp_path)])
        assert code == EXIT_INPUT
