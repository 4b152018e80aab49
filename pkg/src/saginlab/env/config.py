"""Scenario configuration: device fleets, link model, demand curves, and scaling.

Scenarios load from a YAML file (key/value with nested sections). CubeSats
are described either by verbatim TLE text or by explicit orbital elements;
both are reduced to :class:`~saginlab.orbital.OrbitalElements` here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import yaml

from ..aero import UavSpec
from ..orbital import (
    EarthConstants,
    GeodeticPosition,
    OrbitalElements,
    TleRecord,
    elements_from_tle,
    parse_tle,
)


@dataclass(frozen=True)
class GsSite:
    """One ground station: fixed position, own load, and demand curve.

    The station's admissible total capacity follows the logistic curve
    varrho / (1 + exp(-zeta * (t - tau))) in step units, so stations at
    different sites carry differentiated demand profiles.
    """
    position: GeodeticPosition
    own_capacity: float            # xi^GS, the station's own standing load
    capacity_max: float            # varrho
    capacity_steepness: float      # zeta (>= 0 keeps the curve non-decreasing)
    capacity_midpoint: float       # tau, in steps
    max_devices: int               # most devices the station may serve at once


@dataclass(frozen=True)
class CubeSatConfig:
    elements: OrbitalElements
    capacity: float                # xi^S, link capacity when scheduled
    energy_cap_j: float
    initial_energy_j: float
    tle: TleRecord | None = None


@dataclass(frozen=True)
class UavTrackConfig:
    spec: UavSpec
    capacity: float                # xi^A
    energy_cap_j: float
    initial_energy_j: float
    speed_ms: float
    altitude_m: float
    waypoints: tuple[tuple[float, float], ...]  # (lat, lon) radians, >= 2 points
    gust_sigma: float = 0.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Full environment description; see the bundled scenario files for the format."""
    name: str
    ground_stations: tuple[GsSite, ...]
    cubesats: tuple[CubeSatConfig, ...]
    uavs: tuple[UavTrackConfig, ...]
    time_step_s: float = 1.0
    episode_steps: int = 64
    bandwidth_hz: float = 512.0
    snr_gamma0: float = 15.0
    snr_reference_distance_m: float = 6.0e5
    snr_path_exponent: float = 2.0
    quality_xi1: float = 0.01
    quality_xi2: float = 1024.0
    coverage_mask_rad: float = math.radians(10.0)
    charging_rate_w: float = 40.0
    sun_direction: tuple[float, float, float] = (1.0, 0.0, 0.0)
    cubesat_idle_drain_w: float = 0.0
    link_energy_w_ref: float = 50.0
    include_uav_propulsion: bool = True
    constants: EarthConstants = field(default_factory=EarthConstants)

    def __post_init__(self):
        if len(self.ground_stations) < 1:
            raise ValueError("at least one ground station is required")
        if len(self.cubesats) + len(self.uavs) < 1:
            raise ValueError("at least one schedulable device is required")
        if self.time_step_s <= 0:
            raise ValueError("time step must be positive")
        if self.episode_steps < 1:
            raise ValueError("episode length must be at least one step")
        if self.quality_xi1 <= 0:
            raise ValueError("quality steepness xi1 must be positive")
        norm = math.sqrt(sum(c * c for c in self.sun_direction))
        if norm == 0:
            raise ValueError("sun direction must be a nonzero vector")
        object.__setattr__(self, "sun_direction",
                           tuple(c / norm for c in self.sun_direction))
        for gs in self.ground_stations:
            if gs.capacity_steepness < 0:
                raise ValueError("capacity curve steepness must be non-negative")
            if gs.max_devices < 0:
                raise ValueError("max devices must be non-negative")
            floor = gs.capacity_max / (1.0 + math.exp(gs.capacity_steepness
                                                      * gs.capacity_midpoint))
            if gs.own_capacity > floor + 1e-9:
                raise ValueError(
                    "station's own load exceeds its admissible capacity at t=0; "
                    "the schedule constraint would be unsatisfiable")
        for dev in (*self.cubesats, *self.uavs):
            if dev.energy_cap_j <= 0:
                raise ValueError("energy caps must be positive")
            if not 0 <= dev.initial_energy_j <= dev.energy_cap_j:
                raise ValueError("initial energy must lie in [0, cap]")
            if dev.capacity < 0:
                raise ValueError("device capacity must be non-negative")
        for uav in self.uavs:
            if uav.speed_ms <= 0:
                raise ValueError("UAV speed must be positive")
            if len(uav.waypoints) < 2:
                raise ValueError("UAV tracks need at least two waypoints")

    @property
    def n_gs(self) -> int:
        return len(self.ground_stations)

    @property
    def n_cubesat(self) -> int:
        return len(self.cubesats)

    @property
    def n_uav(self) -> int:
        return len(self.uavs)

    @property
    def n_devices(self) -> int:
        return self.n_cubesat + self.n_uav

    @property
    def reward_scale(self) -> float:
        """Upper bound on one step's team utility: every device served at quality 1 everywhere."""
        per_gs = sum(c.capacity for c in self.cubesats) + sum(u.capacity for u in self.uavs)
        return per_gs * self.n_gs

    def truncated_to(self, n_devices: int) -> "ScenarioConfig":
        """Keep the first ceil(n/2) CubeSats and remaining UAVs (action-dimension presets)."""
        if not 1 <= n_devices <= self.n_devices:
            raise ValueError(
                f"cannot truncate scenario with {self.n_devices} devices to {n_devices}")
        m = min(self.n_cubesat, math.ceil(n_devices / 2))
        l = n_devices - m
        if l > self.n_uav:
            l = self.n_uav
            m = n_devices - l
        return replace(self, cubesats=self.cubesats[:m], uavs=self.uavs[:l])


# --- YAML loading ------------------------------------------------------------

def _position_from(entry: dict) -> GeodeticPosition:
    return GeodeticPosition(
        latitude=math.radians(entry["latitude_deg"]),
        longitude=math.radians(entry["longitude_deg"]),
        altitude=float(entry.get("altitude_m", 0.0)),
    )


def _elements_from(entry: dict, constants: EarthConstants) -> OrbitalElements:
    e = float(entry.get("eccentricity", 0.0))
    if "altitude_km" in entry:
        a = constants.R_e + entry["altitude_km"] * 1000.0
    else:
        a = entry["semi_major_axis_m"]
    n = math.sqrt(constants.mu / a ** 3)
    return OrbitalElements(
        e=e,
        i=math.radians(entry.get("inclination_deg", 0.0)),
        raan=math.radians(entry.get("raan_deg", 0.0)),
        arg_perigee=math.radians(entry.get("arg_perigee_deg", 0.0)),
        mean_anomaly_at_epoch=math.radians(entry.get("mean_anomaly_deg", 0.0)),
        semi_major_axis=a,
        angular_momentum=math.sqrt(constants.mu * a * (1.0 - e ** 2)),
        mean_motion=n,
    )


def scenario_from_dict(data: dict) -> ScenarioConfig:
    constants = EarthConstants()
    snr = data.get("snr", {})
    quality = data.get("quality", {})

    stations = []
    for entry in data["ground_stations"]:
        stations.append(GsSite(
            position=_position_from(entry),
            own_capacity=float(entry.get("own_capacity", 0.0)),
            capacity_max=float(entry["capacity_max"]),
            capacity_steepness=float(entry.get("capacity_steepness", 0.0)),
            capacity_midpoint=float(entry.get("capacity_midpoint", 0.0)),
            max_devices=int(entry["max_devices"]),
        ))

    cubesats = []
    for entry in data.get("cubesats", []):
        tle = None
        if "tle" in entry:
            tle = parse_tle(entry["tle"])
            elements = elements_from_tle(tle, constants)
        else:
            elements = _elements_from(entry["elements"], constants)
        cubesats.append(CubeSatConfig(
            elements=elements,
            capacity=float(entry["capacity"]),
            energy_cap_j=float(entry["energy_cap_j"]),
            initial_energy_j=float(entry["initial_energy_j"]),
            tle=tle,
        ))

    uavs = []
    for entry in data.get("uavs", []):
        spec_overrides = entry.get("spec", {})
        uavs.append(UavTrackConfig(
            spec=UavSpec(**spec_overrides),
            capacity=float(entry["capacity"]),
            energy_cap_j=float(entry["energy_cap_j"]),
            initial_energy_j=float(entry["initial_energy_j"]),
            speed_ms=float(entry["speed_ms"]),
            altitude_m=float(entry["altitude_m"]),
            waypoints=tuple((math.radians(lat), math.radians(lon))
                            for lat, lon in entry["waypoints"]),
            gust_sigma=float(entry.get("gust_sigma", 0.0)),
        ))

    kwargs = {}
    for key in ("time_step_s", "episode_steps", "bandwidth_hz", "charging_rate_w",
                "cubesat_idle_drain_w", "link_energy_w_ref", "include_uav_propulsion"):
        if key in data:
            kwargs[key] = data[key]
    if "coverage_mask_deg" in data:
        kwargs["coverage_mask_rad"] = math.radians(data["coverage_mask_deg"])
    if "sun_direction" in data:
        kwargs["sun_direction"] = tuple(data["sun_direction"])
    if "gamma0" in snr:
        kwargs["snr_gamma0"] = snr["gamma0"]
    if "reference_distance_m" in snr:
        kwargs["snr_reference_distance_m"] = snr["reference_distance_m"]
    if "path_exponent" in snr:
        kwargs["snr_path_exponent"] = snr["path_exponent"]
    if "xi1" in quality:
        kwargs["quality_xi1"] = quality["xi1"]
    if "xi2" in quality:
        kwargs["quality_xi2"] = quality["xi2"]

    return ScenarioConfig(
        name=str(data.get("name", "scenario")),
        ground_stations=tuple(stations),
        cubesats=tuple(cubesats),
        uavs=tuple(uavs),
        **kwargs,
    )


def load_scenario(path) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return scenario_from_dict(yaml.safe_load(fh))


# --- feature scaling ----------------------------------------------------------

class AffineScaler:
    """Maps per-feature [lo, hi] ranges onto [-pi, pi]; masked slots become 0."""

    def __init__(self, lo: np.ndarray, hi: np.ndarray):
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        span = self.hi - self.lo
        span[span == 0] = 1.0
        self._scale = 2.0 * math.pi / span

    def __len__(self) -> int:
        return len(self.lo)

    def scale(self, raw: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
        angles = (np.asarray(raw, dtype=float) - self.lo) * self._scale - math.pi
        angles = np.clip(angles, -math.pi, math.pi)
        if mask is not None:
            angles = angles * mask
        return angles


def _device_feature_bounds(cfg: ScenarioConfig) -> tuple[list, list]:
    alt_hi = 0.0
    speed_hi = 1.0
    for sat in cfg.cubesats:
        apogee = sat.elements.semi_major_axis * (1 + sat.elements.e) - cfg.constants.R_e
        alt_hi = max(alt_hi, apogee)
        # vis-viva at perigee bounds the orbital speed
        a, e = sat.elements.semi_major_axis, sat.elements.e
        speed_hi = max(speed_hi, math.sqrt(cfg.constants.mu * (2 / (a * (1 - e)) - 1 / a)))
    for uav in cfg.uavs:
        alt_hi = max(alt_hi, uav.altitude_m)
        speed_hi = max(speed_hi, uav.speed_ms)
    cap_hi = max([1e-9] + [d.capacity for d in (*cfg.cubesats, *cfg.uavs)])
    lo = [-math.pi / 2, -math.pi, 0.0, 0.0, 0.0, 0.0]
    hi = [math.pi / 2, math.pi, alt_hi, speed_hi, 1.0, cap_hi]
    return lo, hi


def observation_scaler(cfg: ScenarioConfig) -> AffineScaler:
    """Scaler for the per-station observation vector (see GsObservation layout)."""
    dev_lo, dev_hi = _device_feature_bounds(cfg)
    gs_cap_hi = max(max(gs.capacity_max for gs in cfg.ground_stations), 1e-9)
    lo = [-math.pi / 2, -math.pi, 0.0, 0.0]
    hi = [math.pi / 2, math.pi,
          max([1.0] + [gs.position.altitude for gs in cfg.ground_stations]), gs_cap_hi]
    for _ in range(cfg.n_devices):
        lo.extend(dev_lo)
        hi.extend(dev_hi)
    return AffineScaler(np.array(lo), np.array(hi))


def state_scaler(cfg: ScenarioConfig) -> AffineScaler:
    """Scaler for the critic's ground-truth state vector (see state_feature_vector)."""
    dev_lo, dev_hi = _device_feature_bounds(cfg)
    gs_cap_hi = max(max(gs.capacity_max for gs in cfg.ground_stations), 1e-9)
    lo: list[float] = [0.0]
    hi: list[float] = [1.0]
    for _ in range(cfg.n_gs):
        lo.extend([-math.pi / 2, -math.pi, 0.0, 0.0])
        hi.extend([math.pi / 2, math.pi, gs_cap_hi, gs_cap_hi])
    for _ in range(cfg.n_devices):
        lo.extend(dev_lo)
        hi.extend(dev_hi)
    return AffineScaler(np.array(lo), np.array(hi))
