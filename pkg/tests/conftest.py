"""Shared scenario builders for the test suite."""
import math

from saginlab.env.config import (
    CubeSatConfig,
    GsSite,
    ScenarioConfig,
    UavTrackConfig,
)
from saginlab.aero import UavSpec
from saginlab.orbital import EarthConstants, GeodeticPosition, OrbitalElements

CONST = EarthConstants()


def circular_orbit(altitude_m, inclination=0.0, raan=0.0, argp=0.0, m0=0.0):
    a = CONST.R_e + altitude_m
    return OrbitalElements(e=0.0, i=inclination, raan=raan, arg_perigee=argp,
                           mean_anomaly_at_epoch=m0, semi_major_axis=a,
                           angular_momentum=math.sqrt(CONST.mu * a),
                           mean_motion=math.sqrt(CONST.mu / a ** 3))


def gs_site(lat=0.0, lon=0.0, own_capacity=0.2, capacity_max=8.0,
            steepness=0.0, midpoint=0.0, max_devices=8):
    return GsSite(position=GeodeticPosition(lat, lon, 0.0),
                  own_capacity=own_capacity, capacity_max=capacity_max,
                  capacity_steepness=steepness, capacity_midpoint=midpoint,
                  max_devices=max_devices)


def overhead_cubesat(lon=0.0, altitude_m=5.5e5, capacity=1.0,
                     energy_cap=1.0e5, initial=8.0e4):
    # equatorial orbit whose sub-point starts at (0, lon)
    return CubeSatConfig(elements=circular_orbit(altitude_m, m0=lon),
                         capacity=capacity, energy_cap_j=energy_cap,
                         initial_energy_j=initial)


def loiter_uav(lat=0.0, lon=0.0, capacity=1.0, energy_cap=2.0e9, initial=1.6e9,
               speed=180.0, altitude=1.8e4, gust_sigma=0.0):
    return UavTrackConfig(spec=UavSpec(), capacity=capacity,
                          energy_cap_j=energy_cap, initial_energy_j=initial,
                          speed_ms=speed, altitude_m=altitude,
                          waypoints=((lat - 0.004, lon), (lat + 0.004, lon)),
                          gust_sigma=gust_sigma)


def simple_scenario(n_gs=1, n_cubesat=1, n_uav=1, **overrides) -> ScenarioConfig:
    """Stations on the equator with devices parked overhead at t = 0."""
    stations = tuple(gs_site(lon=0.02 * i) for i in range(n_gs))
    cubesats = tuple(overhead_cubesat(lon=0.02 * j) for j in range(n_cubesat))
    uavs = tuple(loiter_uav(lon=0.02 * l) for l in range(n_uav))
    defaults = dict(name="test", ground_stations=stations, cubesats=cubesats,
                    uavs=uavs, time_step_s=1.0, episode_steps=16,
                    snr_reference_distance_m=5.5e5, snr_gamma0=15.0,
                    charging_rate_w=40.0, link_energy_w_ref=50.0)
    defaults.update(overrides)
    return ScenarioConfig(**defaults)
