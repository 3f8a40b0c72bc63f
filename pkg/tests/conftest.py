"""Pytest configuration and fixtures."""

import pytest

from edcal.dataio import load_params, load_scenario
from edcal.dataio.dataset import Dataset
from edcal.models.params import ParamVector, decision_keys
from edcal.models.patient import Outcome, PatientRecord
from edcal.models.scenario import ScenarioConfig
from edcal.tags import TriageTag, UnitId

WEEK_HOURS = 168.0


@pytest.fixture(scope="session")
def scenario() -> ScenarioConfig:
    """The bundled case-study scenario."""
    return load_scenario()


@pytest.fixture(scope="session")
def short_scenario(scenario) -> ScenarioConfig:
    """Case-study scenario cut down to one day of warm-up plus one week of statistics."""
    data = scenario.model_dump(mode="json")
    data.update(horizon=24.0 + WEEK_HOURS, warmup=24.0)
    return ScenarioConfig.model_validate(data)


@pytest.fixture(scope="session")
def reference_params() -> ParamVector:
    """Bundled reference parameters."""
    return load_params()


@pytest.fixture()
def uniform_params() -> ParamVector:
    """Every decision variable set to Weib(1, 0.1)."""
    return ParamVector({key: 1.0 if key.role.name == "SHAPE" else 0.1 for key in decision_keys()})


@pytest.fixture()
def small_dataset() -> Dataset:
    """A handful of hand-written records over two days."""
    records = [
        PatientRecord(1, TriageTag.GREEN, UnitId.MU, t0=1.0, t2=1.5, t6=4.0, outcome=Outcome.DISCHARGED),
        PatientRecord(2, TriageTag.YELLOW, UnitId.SU, t0=2.0, t2=2.25, t5=3.0, t6=5.0, outcome=Outcome.DISCHARGED),
        PatientRecord(3, TriageTag.RED, UnitId.RA, t0=3.0, t2=3.1, t6=9.0, outcome=Outcome.DISCHARGED),
        PatientRecord(4, TriageTag.WHITE, UnitId.MIU, t0=10.0, outcome=Outcome.LWBS),
        PatientRecord(5, TriageTag.GREEN, UnitId.MIU, t0=30.0, t2=31.0, outcome=Outcome.IN_SYSTEM),
    ]
    return Dataset(records, start_day=2, period_days=2)
