"""End-to-end tests: synthetic data, starting points and calibration runs."""

import math

import numpy as np
import pytest

from edcal.dataio import gen_synthetic, gen_synthetic_annotated, load_dataset, load_settings, write_dataset
from edcal.models.params import ParamVector
from edcal.models.scenario import CalibrationSettings, ScenarioConfig
from edcal.services import CalibrationService


@pytest.fixture(scope="module")
def synthetic(tmp_path_factory, short_scenario, reference_params):
    """Synthetic dataset written to disk and read back, with its annotations."""
    dataset, annotations = gen_synthetic_annotated(reference_params, short_scenario, seed=13)
    path = write_dataset(dataset, tmp_path_factory.mktemp("data") / "synthetic.csv")
    return load_dataset(path), annotations


class TestStartingPoints:
    """Starting points built from a synthetic dataset."""

    def test_fitted_start_is_on_the_problem(self, synthetic, short_scenario):
        dataset, annotations = synthetic
        service = CalibrationService(short_scenario, dataset, load_settings(n_reps=1), seed=13)
        start = service.starting_point(annotations=annotations)
        assert start.keys() == service.keys
        assert service.bounds.contains(start)

    def test_fitted_start_can_be_evaluated(self, synthetic, short_scenario):
        dataset, annotations = synthetic
        service = CalibrationService(short_scenario, dataset, load_settings(n_reps=1, budget=2), seed=13)
        run = service.calibrate(service.starting_point(annotations=annotations))
        assert run.report.evaluations_used == 2
        assert math.isfinite(run.report.best_f)
        assert len(run.evaluations) == 2


class TestRecovery:
    """Calibration from a perturbed start against data from known parameters."""

    def test_budget_of_one_returns_start(self, synthetic, short_scenario, reference_params):
        dataset, _ = synthetic
        service = CalibrationService(
            short_scenario, dataset, CalibrationSettings(n_reps=1, budget=1, f_target=None), seed=13,
        )
        run = service.calibrate(service.starting_point(reference_params))
        assert run.report.status == "budget-exhausted"
        assert run.report.best_point.values == service.starting_point(reference_params).values

    @pytest.mark.slow
    def test_recovers_from_perturbed_start(self, scenario, reference_params):
        """Every parameter moved 30% up or down; most seeds get back to a feasible, much better fit."""
        data = scenario.model_dump(mode="json")
        data.update(horizon=float((7 + 14) * 24), warmup=float(7 * 24))
        cfg = ScenarioConfig.model_validate(data)
        settings = CalibrationSettings(n_reps=10, budget=1500)

        successes = 0
        for seed in range(1, 6):
            dataset = gen_synthetic(reference_params, cfg, seed=100 + seed, n_reps=10)
            signs = np.random.default_rng(seed).choice([-1.0, 1.0], size=len(reference_params))
            perturbed = ParamVector(
                {
                    key: reference_params[key] * (1.0 + 0.3 * sign)
                    for key, sign in zip(reference_params.keys(), signs, strict=True)
                },
            )
            service = CalibrationService(cfg, dataset, settings, seed=seed)
            run = service.calibrate(service.starting_point(perturbed))
            start_f = run.report.history[0].f
            if run.feasible and run.report.best_f <= 0.25 * start_f:
                successes += 1
        assert successes >= 4


def test_public_api():
    import edcal

    assert edcal.__version__ == "0.1.0"
    assert all(hasattr(edcal, name) for name in edcal.__all__)
