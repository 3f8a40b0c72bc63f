"""Loaders for scenario, parameter and settings files, plus environment defaults."""

import json
import logging
import os
from importlib import resources
from pathlib import Path
from typing import Any

from dotenv import load_dotenv
from pydantic import ValidationError

from ..errors import ConfigurationError
from ..metrics.constraints import Tolerances
from ..models.params import Bounds, Granularity, ParamKey, ParamVector, decision_keys, default_bounds
from ..models.scenario import CalibrationSettings, ScenarioConfig

logger = logging.getLogger(__name__)

DEFAULT_SCENARIO = "default_scenario.json"
REFERENCE_PARAMS = "reference_params.json"


def _read_json(path: str | Path | None, bundled: str) -> tuple[Any, str]:
    if path is None:
        text = resources.files("edcal").joinpath("data").joinpath(bundled).read_text()
        return json.loads(text), f"<bundled {bundled}>"
    path = Path(path)
    try:
        return json.loads(path.read_text()), str(path)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path} is not valid JSON: {e}") from e


def load_scenario(path: str | Path | None = None) -> ScenarioConfig:
    """Load and validate a scenario; the bundled case-study scenario when ``path`` is None."""
    data, source = _read_json(path, DEFAULT_SCENARIO)
    try:
        cfg = ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid scenario {source}:\n{e}") from e
    logger.debug("loaded scenario from %s", source)
    return cfg


def load_params(path: str | Path | None = None) -> ParamVector:
    """Load a parameter vector; the bundled reference parameters when ``path`` is None."""
    data, source = _read_json(path, REFERENCE_PARAMS)
    if not isinstance(data, dict):
        raise ConfigurationError(f"{source} must hold a JSON object")
    params = ParamVector.from_dict(data)
    params.require(decision_keys())
    return params


def write_params(params: ParamVector, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(params.to_dict(), indent=2) + "\n")
    return path


def load_settings(path: str | Path | None = None, **overrides: Any) -> CalibrationSettings:
    """Calibration settings from an optional JSON file, with keyword overrides applied last."""
    data: dict[str, Any] = {}
    if path is not None:
        loaded, _ = _read_json(path, "")
        data.update(loaded)
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return CalibrationSettings.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid calibration settings:\n{e}") from e


def env_defaults() -> dict[str, Any]:
    """Defaults taken from the environment (and a .env file when present)."""
    load_dotenv()
    try:
        seed = int(os.getenv("EDCAL_SEED", "12345"))
        jobs = int(os.getenv("EDCAL_JOBS", "1"))
    except ValueError as e:
        raise ConfigurationError(f"EDCAL_SEED and EDCAL_JOBS must be integers: {e}") from e
    return {
        "seed": seed,
        "jobs": jobs,
        "log_level": os.getenv("EDCAL_LOG_LEVEL", "WARNING").upper(),
    }


def default_tolerances(settings: CalibrationSettings) -> Tolerances:
    return Tolerances.default(shared=settings.tol_shared, other=settings.tol_other)


def problem_from_settings(settings: CalibrationSettings) -> tuple[list[ParamKey], Bounds, Granularity]:
    """Decision keys, box bounds and lattice spacing of the calibration problem."""
    keys = decision_keys()
    bounds = default_bounds(
        keys,
        lower=settings.lower_bound,
        shape_upper=settings.shape_upper,
        scale_upper=settings.scale_upper,
    )
    return keys, bounds, Granularity(settings.delta_shape, settings.delta_scale)
