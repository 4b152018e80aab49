"""Scheduling environment: scenario configuration plus the step dynamics."""
from .config import (
    AffineScaler,
    CubeSatConfig,
    GsSite,
    ScenarioConfig,
    UavTrackConfig,
    load_scenario,
    observation_scaler,
    scenario_from_dict,
    state_scaler,
)
from .sagin import (
    CUBESAT,
    STEP_METRIC_COLUMNS,
    UAV,
    DeviceSnapshot,
    GsObservation,
    LinkReport,
    RewardBreakdown,
    SaginEnv,
    SaginState,
    ScheduleAction,
    base_step_energy,
    capacity_limit,
    coverage,
    data_rate,
    device_step_energy,
    elevation_angle,
    link_step_energy,
    project_feasible,
    quality,
    reward,
    snr,
    solar_charge,
    state_feature_vector,
    step_metric_rows,
)

__all__ = [
    "AffineScaler", "CubeSatConfig", "GsSite", "ScenarioConfig", "UavTrackConfig",
    "load_scenario", "observation_scaler", "scenario_from_dict", "state_scaler",
    "CUBESAT", "STEP_METRIC_COLUMNS", "UAV", "DeviceSnapshot", "GsObservation",
    "LinkReport", "RewardBreakdown", "SaginEnv", "SaginState", "ScheduleAction",
    "base_step_energy", "capacity_limit", "coverage", "data_rate",
    "device_step_energy", "elevation_angle", "link_step_energy", "project_feasible",
    "quality", "reward", "snr", "solar_charge", "state_feature_vector",
    "step_metric_rows",
]
