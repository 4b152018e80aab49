"""Graded experiment presets, from a two-device smoke setup to the full fleet.

The full-fleet preset uses the published hyperparameters verbatim. The desk
presets shorten training and raise the learning rates so the same machinery
converges within CI-scale budgets (a few hundred optimizer steps instead of
ten thousand); everything else about the model is unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..agents.core import TrainingConfig
from ..env.config import CubeSatConfig, GsSite, ScenarioConfig, UavTrackConfig
from ..aero import UavSpec
from ..orbital import EarthConstants, GeodeticPosition, OrbitalElements

_CONST = EarthConstants()


def _circular(altitude_m: float, incl: float = 0.0, raan: float = 0.0,
              argp: float = 0.0, m0: float = 0.0) -> OrbitalElements:
    a = _CONST.R_e + altitude_m
    return OrbitalElements(e=0.0, i=incl, raan=raan, arg_perigee=argp,
                           mean_anomaly_at_epoch=m0, semi_major_axis=a,
                           angular_momentum=math.sqrt(_CONST.mu * a),
                           mean_motion=math.sqrt(_CONST.mu / a ** 3))


def _station(lat: float, lon: float, varrho: float, zeta: float, tau: float,
             own: float, max_devices: int) -> GsSite:
    return GsSite(position=GeodeticPosition(lat, lon, 0.0), own_capacity=own,
                  capacity_max=varrho, capacity_steepness=zeta,
                  capacity_midpoint=tau, max_devices=max_devices)


def _cubesat(m0: float, capacity: float = 1.0) -> CubeSatConfig:
    return CubeSatConfig(elements=_circular(5.5e5, m0=m0), capacity=capacity,
                         energy_cap_j=1.0e5, initial_energy_j=8.0e4)


def _uav(lat: float, lon: float, capacity: float = 1.0, speed: float = 200.0,
         initial_fraction: float = 0.8, gust_sigma: float = 0.05) -> UavTrackConfig:
    cap = 5.0e7
    return UavTrackConfig(spec=UavSpec(), capacity=capacity, energy_cap_j=cap,
                          initial_energy_j=initial_fraction * cap, speed_ms=speed,
                          altitude_m=1.8e4, gust_sigma=gust_sigma,
                          waypoints=((lat - 0.004, lon), (lat + 0.004, lon)))


def _scenario(name: str, stations, cubesats, uavs,
              episode_steps: int = 64) -> ScenarioConfig:
    return ScenarioConfig(
        name=name, ground_stations=tuple(stations), cubesats=tuple(cubesats),
        uavs=tuple(uavs), time_step_s=1.0, episode_steps=episode_steps,
        bandwidth_hz=512.0, snr_gamma0=15.0, snr_reference_distance_m=5.5e5,
        snr_path_exponent=2.0, coverage_mask_rad=math.radians(10.0),
        charging_rate_w=40.0, sun_direction=(1.0, 0.0, 0.0),
        cubesat_idle_drain_w=0.0, link_energy_w_ref=50.0)


@dataclass(frozen=True)
class Preset:
    name: str
    scenario: ScenarioConfig
    training: TrainingConfig
    description: str


def _tiny() -> Preset:
    scenario = _scenario(
        "tiny",
        stations=[_station(0.0, 0.0, varrho=8.0, zeta=0.0, tau=0.0, own=0.2,
                           max_devices=2)],
        cubesats=[_cubesat(m0=0.0)],
        uavs=[_uav(0.0, 0.01, gust_sigma=0.02)],
    )
    training = TrainingConfig(epochs=200, actor_lr=0.05, critic_lr=0.02,
                              actor_layers=2, critic_layers=2)
    return Preset("tiny", scenario, training,
                  "1 station, 1 CubeSat + 1 UAV (4 joint actions); smoke-test scale")


def _small() -> Preset:
    scenario = _scenario(
        "small",
        stations=[
            _station(0.0, 0.0, varrho=6.0, zeta=0.1, tau=16.0, own=0.2, max_devices=3),
            _station(0.0, 0.04, varrho=6.0, zeta=0.0, tau=0.0, own=0.2, max_devices=3),
        ],
        cubesats=[_cubesat(m0=0.0), _cubesat(m0=0.03)],
        uavs=[_uav(0.0, 0.0), _uav(0.0, 0.04, initial_fraction=0.6)],
    )
    # classical critic isolates the quantum-actor effect for the dimension trend
    training = TrainingConfig(epochs=2000, actor_lr=0.02, critic_lr=0.01,
                              actor_layers=2, critic_kind="classical")
    return Preset("small", scenario, training,
                  "2 stations, 2 + 2 devices (16 joint actions)")


def _extended() -> Preset:
    scenario = _scenario(
        "extended",
        stations=[
            _station(0.0, 0.0, varrho=8.0, zeta=0.1, tau=16.0, own=0.2, max_devices=5),
            _station(0.0, 0.05, varrho=8.0, zeta=0.0, tau=0.0, own=0.2, max_devices=5),
        ],
        cubesats=[_cubesat(m0=0.0), _cubesat(m0=0.02), _cubesat(m0=0.6),
                  _cubesat(m0=math.pi)],
        uavs=[_uav(0.0, 0.0), _uav(0.0, 0.05, initial_fraction=0.6),
              _uav(0.002, 0.0, initial_fraction=0.7), _uav(0.002, 0.05)],
        episode_steps=32,  # shorter episodes keep the 256-action runs CI-sized
    )
    training = TrainingConfig(epochs=2000, actor_lr=0.02, critic_lr=0.01,
                              actor_layers=1, critic_kind="classical")
    return Preset("extended", scenario, training,
                  "2 stations, 4 + 4 devices (256 joint actions)")


def _paper() -> Preset:
    stations = [
        _station(math.radians(37.5), math.radians(127.0), varrho=10.0, zeta=0.15,
                 tau=24.0, own=0.3, max_devices=8),
        _station(math.radians(29.7), math.radians(-95.4), varrho=8.0, zeta=0.05,
                 tau=16.0, own=0.2, max_devices=8),
        _station(math.radians(78.2), math.radians(15.6), varrho=6.0, zeta=0.0,
                 tau=0.0, own=0.1, max_devices=8),
        _station(math.radians(-33.9), math.radians(151.2), varrho=9.0, zeta=0.1,
                 tau=32.0, own=0.2, max_devices=8),
    ]
    cubesats = [CubeSatConfig(elements=_circular(5.5e5, incl=math.radians(53.0),
                                                 raan=j * math.pi / 4,
                                                 m0=j * math.pi / 3),
                              capacity=1.0, energy_cap_j=1.0e5,
                              initial_energy_j=8.0e4)
                for j in range(8)]
    uavs = []
    for l, gs in enumerate(stations + stations):
        lat = gs.position.latitude + (0.002 if l >= 4 else -0.002)
        uavs.append(_uav(lat, gs.position.longitude,
                         initial_fraction=0.6 + 0.05 * (l % 4)))
    scenario = _scenario("paper", stations, cubesats, uavs[:8])
    training = TrainingConfig()  # published configuration verbatim
    return Preset("paper", scenario, training,
                  "4 stations, 8 + 8 devices (65,536 joint actions); full scale")


def get_preset(name: str) -> Preset:
    try:
        return {"tiny": _tiny, "small": _small, "extended": _extended,
                "paper": _paper}[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from "
                         "tiny, small, extended, paper") from None


PRESET_NAMES = ("tiny", "small", "extended", "paper")
