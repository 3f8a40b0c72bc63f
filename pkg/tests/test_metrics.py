"""Tests for ECDFs, the objective, constraints and point evaluation."""

import math

import numpy as np
import pytest

from edcal.dataio import gen_synthetic, load_dataset, write_dataset
from edcal.errors import DegenerateReferenceError, EmptySampleError
from edcal.metrics import (
    CalibrationObjective,
    Tolerances,
    check_reference,
    constraint_g,
    constraint_h,
    ecdf,
    ecdf_sq_integral,
    evaluate_point,
    evaluation_index,
    mean_ecdf,
    objective,
    score_outputs,
    t_interval,
)
from edcal.models.kpis import KpiSampleSet
from edcal.models.results import ReplicationOutput
from edcal.simcore.replication import run_replications
from edcal.tags import TriageTag, UnitId


def riemann(F1, F2, upper: float, n: int = 1_000_000) -> float:
    """Midpoint-rule oracle for the squared-difference integral on [0, upper]."""
    width = upper / n
    t = (np.arange(n) + 0.5) * width
    d = F1(t) - F2(t)
    return float(np.sum(d * d) * width)


def kpis_from(values: dict) -> KpiSampleSet:
    kpis = KpiSampleSet()
    for (tag, unit, kind), samples in values.items():
        for v in samples:
            kpis.add(tag, unit, kind, v)
    return kpis


def full_reference(scale: float = 1.0) -> KpiSampleSet:
    """Every compared cell with samples 1, 2, 3 (times ``scale``)."""
    return kpis_from({idx: [scale, 2 * scale, 3 * scale] for idx in evaluation_index()})


class TestEcdf:
    """Test suite for empirical CDFs."""

    def test_values(self):
        F = ecdf([1, 2, 3])
        assert F(0.5) == 0.0
        assert F(2.0) == pytest.approx(2 / 3)
        assert F(3.0) == 1.0
        assert F.is_cdf()

    def test_ties(self):
        F = ecdf([5, 5, 5])
        assert F.breakpoints.tolist() == [5.0]
        assert F.values.tolist() == [1.0]

    def test_order_invariance(self):
        assert ecdf([2, 1]) == ecdf([1, 2])

    def test_empty(self):
        with pytest.raises(EmptySampleError):
            ecdf([])

    def test_right_continuous(self):
        F = ecdf([1.0, 2.0])
        assert F(np.nextafter(1.0, 0.0)) == 0.0
        assert F(1.0) == 0.5


class TestMeanEcdf:
    """Test suite for replication averages."""

    def test_single(self):
        assert mean_ecdf([ecdf([1])]) == ecdf([1])

    def test_two(self):
        F = mean_ecdf([ecdf([1]), ecdf([3])])
        assert F(1.0) == 0.5
        assert F(2.9) == 0.5
        assert F(3.0) == 1.0
        assert F.is_cdf()

    def test_idempotent(self):
        F = ecdf([0.3, 1.7, 2.2])
        assert mean_ecdf([F, F, F]) == F

    def test_relabeling(self):
        a, b, c = ecdf([1, 4]), ecdf([2]), ecdf([0.5, 3, 3])
        first, second = mean_ecdf([a, b, c]), mean_ecdf([c, a, b])
        np.testing.assert_array_equal(first.breakpoints, second.breakpoints)
        np.testing.assert_allclose(first.values, second.values)

    def test_empty_list(self):
        with pytest.raises(ValueError):
            mean_ecdf([])


class TestSquaredIntegral:
    """Test suite for the exact integral of squared differences."""

    def test_identical(self):
        F = ecdf([1, 2, 2, 7])
        assert ecdf_sq_integral(F, F) == 0.0

    def test_single_shift(self):
        assert ecdf_sq_integral(ecdf([1]), ecdf([2])) == pytest.approx(1.0)

    def test_interleaved(self):
        """Difference 0.5 on [0, 1) and [2, 3), zero elsewhere."""
        F1, F2 = ecdf([0, 2]), ecdf([1, 3])
        assert ecdf_sq_integral(F1, F2) == pytest.approx(0.5)
        assert riemann(F1, F2, 4.0) == pytest.approx(0.5, abs=1e-4)

    def test_against_riemann_oracle(self):
        rng = np.random.default_rng(2024)
        for _ in range(10):
            a = rng.uniform(0, 5, size=rng.integers(1, 100))
            b = rng.uniform(0, 5, size=rng.integers(1, 100))
            F1, F2 = ecdf(a), ecdf(b)
            exact = ecdf_sq_integral(F1, F2)
            assert exact == pytest.approx(riemann(F1, F2, 5.0), abs=1e-4)
            assert exact == pytest.approx(ecdf_sq_integral(F2, F1))
            assert exact >= 0

    def test_averaged_functions(self):
        sim = mean_ecdf([ecdf([1, 2]), ecdf([1.5, 4])])
        real = ecdf([0.5, 2.5, 3])
        assert ecdf_sq_integral(sim, real) == pytest.approx(riemann(sim, real, 5.0), abs=1e-4)


class TestObjective:
    """Test suite for the summed objective."""

    def test_equal_maps(self):
        fs = {"a": ecdf([1, 2]), "b": ecdf([3])}
        assert objective(fs, dict(fs)) == 0.0

    def test_single_index(self):
        assert objective({"a": ecdf([1])}, {"a": ecdf([2])}) == pytest.approx(1.0)

    def test_additive(self):
        sim = {"a": ecdf([1]), "b": ecdf([0, 2])}
        real = {"a": ecdf([2]), "b": ecdf([1, 3])}
        parts = sum(ecdf_sq_integral(sim[k], real[k]) for k in sim)
        assert objective(sim, real) == pytest.approx(parts)

    def test_shift_does_not_improve(self):
        samples = np.array([0.2, 0.9, 1.4, 3.0])
        real = {"a": ecdf(samples)}
        close = objective({"a": ecdf(samples + 0.5)}, real)
        far = objective({"a": ecdf(samples + 1.5)}, real)
        assert far >= close

    def test_index_mismatch(self):
        with pytest.raises(ValueError):
            objective({"a": ecdf([1])}, {"b": ecdf([1])})


class TestConstraints:
    """Test suite for relative-error constraints."""

    def test_feasible(self):
        assert constraint_g(1.2, 1.0, 0.35) == pytest.approx(-0.15)

    def test_boundary(self):
        assert constraint_h(1.2, 1.0, 0.2) == pytest.approx(0.0)

    def test_infeasible(self):
        assert constraint_g(0.5, 1.0, 0.2) == pytest.approx(0.3)

    def test_zero_reference(self):
        with pytest.raises(DegenerateReferenceError):
            constraint_h(1.0, 0.0, 0.2)

    def test_default_tolerances(self):
        tol = Tolerances.default()
        assert len(tol.tol_mu) == 16
        assert tol.tol_mu[(TriageTag.YELLOW, UnitId.MU, "DOT")] == 0.35
        assert tol.tol_sigma[(TriageTag.GREEN, UnitId.SU, "DIT")] == 0.35
        assert tol.tol_mu[(TriageTag.GREEN, UnitId.MIU, "DOT")] == 0.2
        assert tol.tol_mu[(TriageTag.RED, UnitId.MU, "DIT")] == 0.2

    def test_evaluation_index(self):
        index = evaluation_index()
        assert len(index) == 16
        assert all(unit != UnitId.RA for _, unit, _ in index)


class TestIntervals:
    """Test suite for t intervals."""

    def test_symmetric_interval(self):
        mean, lo, hi = t_interval([1.0, 2.0, 3.0])
        assert mean == 2.0
        assert hi - mean == pytest.approx(mean - lo)
        assert hi - mean == pytest.approx(4.302653 * 1.0 / math.sqrt(3), rel=1e-5)

    def test_single_value(self):
        assert t_interval([4.0]) == (4.0, None, None)


class TestScoring:
    """Test suite for scoring replication outputs."""

    def test_self_comparison(self):
        real = full_reference()
        result = score_outputs([ReplicationOutput(0, kpis=full_reference())], real)
        assert result.f == 0.0
        assert result.g.shape == (16,)
        assert result.h.shape == (16,)
        assert result.max_violation == 0.0
        assert not result.failed

    def test_scaled_replication_is_infeasible(self):
        result = score_outputs([ReplicationOutput(0, kpis=full_reference(2.0))], full_reference())
        assert result.f > 0
        assert result.max_g == pytest.approx(1.0 - 0.2)

    def test_red_ra_folded_into_red_mu(self):
        values = {idx: [1.0, 2.0, 3.0] for idx in evaluation_index() if idx[:2] != (TriageTag.RED, UnitId.MU)}
        values[(TriageTag.RED, UnitId.RA, "DOT")] = [1.0, 2.0, 3.0]
        values[(TriageTag.RED, UnitId.RA, "DIT")] = [1.0, 2.0, 3.0]
        result = score_outputs([ReplicationOutput(0, kpis=kpis_from(values))], full_reference())
        assert result.f == 0.0

    def test_cell_empty_in_every_replication(self):
        values = {idx: [1.0, 2.0] for idx in evaluation_index() if idx[0] != TriageTag.WHITE}
        outputs = [ReplicationOutput(r, kpis=kpis_from(values)) for r in range(2)]
        result = score_outputs(outputs, full_reference())
        assert result.failed
        assert math.isinf(result.f)
        assert result.failed_cells == ["W/MIU/DOT", "W/MIU/DIT"]
        assert math.isinf(result.max_violation)

    def test_empty_replication_is_skipped(self):
        outputs = [ReplicationOutput(0, kpis=full_reference()), ReplicationOutput(1)]
        assert score_outputs(outputs, full_reference()).f == 0.0

    def test_degenerate_reference_is_dropped(self, caplog):
        real = full_reference()
        real.samples[(TriageTag.RED, UnitId.SU, "DIT")] = [2.0]
        result = score_outputs([ReplicationOutput(0, kpis=full_reference())], real)
        dropped = [d for d in result.diagnostics if d.dropped]
        assert len(dropped) == 1
        assert dropped[0].h == -0.2
        assert "dropping std constraint" in caplog.text

    def test_segmented_reference_matches_replications(self):
        """Real segments are averaged like replications, not pooled."""
        short = full_reference()
        long = kpis_from({idx: [float(v) for v in range(1, 9)] for idx in evaluation_index()})
        outputs = [ReplicationOutput(0, kpis=short), ReplicationOutput(1, kpis=long)]
        pooled = kpis_from({idx: [1.0, 2.0, 3.0, *range(1, 9)] for idx in evaluation_index()})

        assert score_outputs(outputs, pooled).f > 0
        pooled.segments = [short, long]
        result = score_outputs(outputs, pooled)
        assert result.f == 0.0
        assert result.max_violation == 0.0

    def test_missing_reference(self):
        real = full_reference()
        del real.samples[(TriageTag.GREEN, UnitId.MIU, "DOT")]
        with pytest.raises(EmptySampleError, match="G/MIU/DOT"):
            check_reference(real)


class TestEvaluatePoint:
    """Test suite for sample-average evaluation by simulation."""

    def test_self_evaluation(self, short_scenario, reference_params):
        real = run_replications(short_scenario, reference_params, 1, 31)[0].kpis
        result = evaluate_point(reference_params, short_scenario, real, 1, 31)
        assert result.f == 0.0
        assert result.g.size == result.h.size == 16
        assert result.max_violation == 0.0
        assert result.wall_time > 0

    def test_deterministic(self, short_scenario, reference_params, uniform_params):
        real = run_replications(short_scenario, reference_params, 1, 31)[0].kpis
        a = evaluate_point(uniform_params, short_scenario, real, 2, 7)
        b = evaluate_point(uniform_params, short_scenario, real, 2, 7)
        assert a.f == b.f
        np.testing.assert_array_equal(a.g, b.g)
        np.testing.assert_array_equal(a.h, b.h)

    def test_objective_records_rows(self, short_scenario, reference_params):
        real = run_replications(short_scenario, reference_params, 1, 31)[0].kpis
        with CalibrationObjective(short_scenario, real, n_reps=1, base_seed=31) as evaluator:
            evaluator(reference_params)
            evaluator(reference_params)
        assert [row["eval_index"] for row in evaluator.rows] == [0, 1]
        assert evaluator.rows[0]["f"] == 0.0

    def test_objective_rejects_empty_reference(self, short_scenario):
        with pytest.raises(EmptySampleError):
            CalibrationObjective(short_scenario, KpiSampleSet(), n_reps=1, base_seed=0)

    @pytest.mark.parametrize("n_reps", [1, 3])
    def test_self_comparison_through_dataset_file(self, tmp_path, short_scenario, reference_params, n_reps):
        dataset = gen_synthetic(reference_params, short_scenario, seed=13, n_reps=n_reps)
        loaded = load_dataset(write_dataset(dataset, tmp_path / "self.csv"))
        real = loaded.kpis(short_scenario.window_days)
        assert len(real.parts()) == n_reps

        result = evaluate_point(reference_params, short_scenario, real, n_reps, 13)
        tolerances = Tolerances.default()
        tol_mu = np.array([tolerances.tol_mu[idx] for idx in evaluation_index()])
        tol_sigma = np.array([tolerances.tol_sigma[idx] for idx in evaluation_index()])
        assert result.f == 0.0
        assert np.all(result.g <= -tol_mu + 1e-12)
        assert np.all(result.h <= -tol_sigma + 1e-12)
