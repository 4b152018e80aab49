"""SAGIN scheduling environment: kinematics, energy bookkeeping, rewards.

Each step the stations pick a bit per device slot (CubeSats first, then
UAVs). Selections are forced feasible by a greedy projection, rewarded as
quality-weighted delivered capacity minus a cooperation cost (per-device
energy spending weighted by the spread of residual levels), then the world
advances: energies are deducted, sun-side CubeSats recharge, CubeSats move
along their orbits and UAVs along their waypoint loops under gust noise.

Known verbatim-model quirk: the cooperation cost multiplies energy use by the
standard deviation of residual levels, so when all residuals are equal the
cost term vanishes no matter how much energy is being spent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..aero import Attitude, GroundVelocity, airspeed, ground_to_body, gust_perturb, required_power
from ..orbital import GeodeticPosition, great_circle_distance, slant_distance, subpoint
from .config import ScenarioConfig

CUBESAT = "cubesat"
UAV = "uav"


# --- actions ------------------------------------------------------------------

@dataclass(frozen=True)
class ScheduleAction:
    """One station's selection bits, one per device slot (CubeSats then UAVs)."""
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.int64)
        if bits.ndim != 1 or not np.isin(bits, (0, 1)).all():
            raise ValueError("action bits must be a flat 0/1 vector")
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_index(cls, index: int, n_slots: int) -> "ScheduleAction":
        """Decode an action index: bit b of the index drives device slot b."""
        if not 0 <= index < 2 ** n_slots:
            raise ValueError(f"action index {index} out of range for {n_slots} slots")
        return cls(np.array([(index >> b) & 1 for b in range(n_slots)]))

    def to_index(self) -> int:
        return int(sum(int(b) << i for i, b in enumerate(self.bits)))


# --- state and observations -----------------------------------------------------

@dataclass(frozen=True)
class SaginState:
    """Ground-truth environment state at one step (arrays are read-only)."""
    t: int
    cubesat_pos: tuple[GeodeticPosition, ...]
    cubesat_speed: np.ndarray
    cubesat_energy: np.ndarray
    cubesat_sunlit: np.ndarray
    uav_pos: tuple[GeodeticPosition, ...]
    uav_speed: np.ndarray
    uav_heading: np.ndarray
    uav_waypoint: np.ndarray
    uav_energy: np.ndarray
    gs_capacity_limit: np.ndarray

    def __post_init__(self):
        for name in ("cubesat_speed", "cubesat_energy", "cubesat_sunlit", "uav_speed",
                     "uav_heading", "uav_waypoint", "uav_energy", "gs_capacity_limit"):
            arr = np.asarray(getattr(self, name))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def device_position(self, kind: str, index: int) -> GeodeticPosition:
        return self.cubesat_pos[index] if kind == CUBESAT else self.uav_pos[index]

    def device_energy(self, kind: str, index: int) -> float:
        return float(self.cubesat_energy[index] if kind == CUBESAT
                     else self.uav_energy[index])


@dataclass(frozen=True)
class DeviceSnapshot:
    index: int
    position: GeodeticPosition
    speed: float
    energy_j: float
    capacity: float


@dataclass(frozen=True)
class GsObservation:
    """One station's partial view: itself plus every in-coverage device."""
    gs_index: int
    position: GeodeticPosition
    capacity: float
    cubesats: tuple[DeviceSnapshot, ...]
    uavs: tuple[DeviceSnapshot, ...]
    n_cubesat_slots: int
    n_uav_slots: int

    DEVICE_FEATURES = 6  # lat, lon, alt, speed, residual fraction, capacity

    def feature_vector(self, cfg: ScenarioConfig) -> np.ndarray:
        """Fixed-width raw features; absent device slots stay zero."""
        n_slots = self.n_cubesat_slots + self.n_uav_slots
        vec = np.zeros(4 + self.DEVICE_FEATURES * n_slots)
        vec[0:4] = (self.position.latitude, self.position.longitude,
                    self.position.altitude, self.capacity)
        for snap, slot in self._slotted(cfg):
            base = 4 + self.DEVICE_FEATURES * slot
            cap_j = (cfg.cubesats[snap.index].energy_cap_j if slot < self.n_cubesat_slots
                     else cfg.uavs[snap.index].energy_cap_j)
            vec[base:base + self.DEVICE_FEATURES] = (
                snap.position.latitude, snap.position.longitude, snap.position.altitude,
                snap.speed, snap.energy_j / cap_j, snap.capacity)
        return vec

    def presence_mask(self) -> np.ndarray:
        """1.0 where the feature slot is populated, 0.0 where zero-masked."""
        n_slots = self.n_cubesat_slots + self.n_uav_slots
        mask = np.zeros(4 + self.DEVICE_FEATURES * n_slots)
        mask[0:4] = 1.0
        for snap in self.cubesats:
            base = 4 + self.DEVICE_FEATURES * snap.index
            mask[base:base + self.DEVICE_FEATURES] = 1.0
        for snap in self.uavs:
            base = 4 + self.DEVICE_FEATURES * (self.n_cubesat_slots + snap.index)
            mask[base:base + self.DEVICE_FEATURES] = 1.0
        return mask

    def _slotted(self, cfg: ScenarioConfig):
        for snap in self.cubesats:
            yield snap, snap.index
        for snap in self.uavs:
            yield snap, self.n_cubesat_slots + snap.index


# --- link model ------------------------------------------------------------------

def snr(d: float, cfg: ScenarioConfig) -> float:
    """Inverse-power-law signal-to-noise ratio, gamma0 at the reference distance."""
    if d <= 0:
        raise ValueError(f"distance must be positive, got {d}")
    return cfg.snr_gamma0 * (cfg.snr_reference_distance_m / d) ** cfg.snr_path_exponent


def data_rate(d: float, cfg: ScenarioConfig) -> float:
    """Achievable rate W * log2(1 + SNR)."""
    return cfg.bandwidth_hz * math.log2(1.0 + snr(d, cfg))


def _sigmoid(x: float) -> float:
    if x >= 0:
        value = 1.0 / (1.0 + math.exp(-x))
    else:
        z = math.exp(x)
        value = z / (1.0 + z)
    return min(max(value, 5e-324), float(np.nextafter(1.0, 0.0)))


def quality(d: float, cfg: ScenarioConfig) -> float:
    """Sigmoid link quality of the achieved rate, in (0, 1)."""
    return _sigmoid(cfg.quality_xi1 * (data_rate(d, cfg) - cfg.quality_xi2))


def capacity_limit(gs_index: int, t: float, cfg: ScenarioConfig) -> float:
    """Admissible station capacity at step t (logistic demand curve)."""
    gs = cfg.ground_stations[gs_index]
    return gs.capacity_max * _sigmoid(gs.capacity_steepness * (t - gs.capacity_midpoint))


# --- coverage ---------------------------------------------------------------------

def elevation_angle(gs: GeodeticPosition, device: GeodeticPosition, cfg: ScenarioConfig) -> float:
    """Elevation of the device above the station's local horizon (spherical Earth)."""
    arc = great_circle_distance(gs, device, cfg.constants)
    psi = arc / cfg.constants.R_e
    r_gs = cfg.constants.R_e + gs.altitude
    r_dev = cfg.constants.R_e + device.altitude
    return math.atan2(r_dev * math.cos(psi) - r_gs, r_dev * math.sin(psi))


def coverage(state: SaginState, gs_index: int, cfg: ScenarioConfig) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Indices of CubeSats and UAVs whose elevation exceeds the station's mask."""
    gs = cfg.ground_stations[gs_index].position
    sats = tuple(j for j, pos in enumerate(state.cubesat_pos)
                 if elevation_angle(gs, pos, cfg) > cfg.coverage_mask_rad)
    uavs = tuple(l for l, pos in enumerate(state.uav_pos)
                 if elevation_angle(gs, pos, cfg) > cfg.coverage_mask_rad)
    return sats, uavs


# --- energy bookkeeping --------------------------------------------------------------

def link_step_energy(d: float, cfg: ScenarioConfig) -> float:
    """Transmit energy for one active step, scaled from the reference distance."""
    return cfg.link_energy_w_ref * (d / cfg.snr_reference_distance_m) ** cfg.snr_path_exponent \
        * cfg.time_step_s


def base_step_energy(state: SaginState, cfg: ScenarioConfig, kind: str, index: int) -> float:
    """Per-step energy a device spends regardless of scheduling."""
    if kind == CUBESAT:
        return cfg.cubesat_idle_drain_w * cfg.time_step_s
    if not cfg.include_uav_propulsion:
        return 0.0
    uav = cfg.uavs[index]
    # route the commanded ground velocity through the (gust-perturbed) body
    # frame; the transform is norm-preserving so airspeed equals ground speed
    heading = float(state.uav_heading[index])
    vel = GroundVelocity(uav.speed_ms * math.cos(heading),
                         uav.speed_ms * math.sin(heading), 0.0)
    speed = airspeed(ground_to_body(vel, Attitude(yaw=heading)))
    return required_power(uav.spec, speed).total * cfg.time_step_s


def device_step_energy(state: SaginState, cfg: ScenarioConfig, kind: str, index: int,
                       selected: bool, gs_index: int | None = None) -> float:
    """One device's step energy in the context of one station's selection."""
    energy = base_step_energy(state, cfg, kind, index)
    if selected:
        if gs_index is None:
            raise ValueError("selected devices need the selecting station's index")
        d = slant_distance(cfg.ground_stations[gs_index].position,
                           state.device_position(kind, index), cfg.constants)
        energy += link_step_energy(d, cfg)
    return energy


def solar_charge(state: SaginState, cfg: ScenarioConfig) -> np.ndarray:
    """CubeSat energies after one step of sun-side charging (clamped to caps)."""
    caps = np.array([c.energy_cap_j for c in cfg.cubesats])
    gain = state.cubesat_sunlit * cfg.charging_rate_w * cfg.time_step_s
    return np.minimum(state.cubesat_energy + gain, caps)


def _sunlit_flags(positions, cfg: ScenarioConfig) -> np.ndarray:
    sun = np.asarray(cfg.sun_direction)
    flags = np.zeros(len(positions), dtype=bool)
    for j, pos in enumerate(positions):
        radial = np.array([math.cos(pos.latitude) * math.cos(pos.longitude),
                           math.cos(pos.latitude) * math.sin(pos.longitude),
                           math.sin(pos.latitude)])
        flags[j] = float(radial @ sun) > 0.0
    return flags


# --- feasibility projection --------------------------------------------------------

def _slot_kind(slot: int, cfg: ScenarioConfig) -> tuple[str, int]:
    if slot < cfg.n_cubesat:
        return CUBESAT, slot
    return UAV, slot - cfg.n_cubesat


def project_feasible(action: ScheduleAction, state: SaginState, gs_index: int,
                     cfg: ScenarioConfig) -> ScheduleAction:
    """Clamp a raw selection onto the feasible set.

    Out-of-coverage bits are cleared outright (no link exists to serve).
    While the device-count cap, the station capacity curve, or any selected
    device's energy budget is violated, the set bit with the lowest
    quality*capacity product is cleared; ties break toward the lowest slot.
    """
    bits = np.array(action.bits)
    if len(bits) != cfg.n_devices:
        raise ValueError(f"expected {cfg.n_devices} bits, got {len(bits)}")
    gs = cfg.ground_stations[gs_index]
    cov_sats, cov_uavs = coverage(state, gs_index, cfg)
    in_cov = np.zeros(cfg.n_devices, dtype=bool)
    in_cov[list(cov_sats)] = True
    in_cov[[cfg.n_cubesat + l for l in cov_uavs]] = True
    bits[~in_cov] = 0

    score = np.zeros(cfg.n_devices)
    xi = np.zeros(cfg.n_devices)
    step_energy = np.zeros(cfg.n_devices)
    residual = np.zeros(cfg.n_devices)
    for slot in np.nonzero(bits)[0]:
        kind, index = _slot_kind(int(slot), cfg)
        d = slant_distance(gs.position, state.device_position(kind, index), cfg.constants)
        xi[slot] = (cfg.cubesats[index].capacity if kind == CUBESAT
                    else cfg.uavs[index].capacity)
        score[slot] = quality(d, cfg) * xi[slot]
        step_energy[slot] = device_step_energy(state, cfg, kind, index, True, gs_index)
        residual[slot] = state.device_energy(kind, index)

    limit = float(state.gs_capacity_limit[gs_index])
    while bits.any():
        over_count = bits.sum() > gs.max_devices
        over_capacity = gs.own_capacity + float(xi @ bits) > limit
        over_energy = bool(((step_energy > residual) & (bits == 1)).any())
        if not (over_count or over_capacity or over_energy):
            break
        candidates = np.nonzero(bits)[0]
        bits[candidates[np.argmin(score[candidates])]] = 0
    return ScheduleAction(bits)


# --- reward -------------------------------------------------------------------------

@dataclass(frozen=True)
class LinkReport:
    kind: str
    index: int
    distance_m: float
    snr: float
    rate: float
    quality: float
    capacity: float


@dataclass(frozen=True)
class RewardBreakdown:
    utility: float
    cost: float
    reward: float
    sigma_cubesat: float
    sigma_uav: float
    links: tuple[LinkReport, ...]


def _population_std(values: list[float]) -> float:
    if not values:
        return 0.0
    arr = np.asarray(values)
    return float(np.sqrt(np.mean((arr - arr.mean()) ** 2)))


def reward(state: SaginState, actions: list[ScheduleAction],
           cfg: ScenarioConfig) -> list[RewardBreakdown]:
    """Per-station reward breakdowns for feasibility-projected joint actions.

    Utility adds quality*capacity over the station's active links. Cost adds
    each in-coverage device's normalized step energy, weighted by the spread
    (population standard deviation) of residual-energy fractions in the same
    device class; an empty class contributes zero.
    """
    out = []
    for i, action in enumerate(actions):
        gs = cfg.ground_stations[i]
        cov_sats, cov_uavs = coverage(state, i, cfg)
        links = []
        utility = 0.0
        norm_energy = {CUBESAT: [], UAV: []}
        residual_frac = {CUBESAT: [], UAV: []}
        for kind, indices, dev_cfgs, offset in (
                (CUBESAT, cov_sats, cfg.cubesats, 0),
                (UAV, cov_uavs, cfg.uavs, cfg.n_cubesat)):
            for index in indices:
                selected = bool(action.bits[offset + index])
                dev = dev_cfgs[index]
                spent = device_step_energy(state, cfg, kind, index, selected, i)
                norm_energy[kind].append(spent / dev.energy_cap_j)
                residual_frac[kind].append(state.device_energy(kind, index)
                                           / dev.energy_cap_j)
                if selected:
                    d = slant_distance(gs.position, state.device_position(kind, index),
                                       cfg.constants)
                    g = snr(d, cfg)
                    rate = data_rate(d, cfg)
                    q = quality(d, cfg)
                    utility += q * dev.capacity
                    links.append(LinkReport(kind, index, d, g, rate, q, dev.capacity))
        sigma_s = _population_std(residual_frac[CUBESAT])
        sigma_a = _population_std(residual_frac[UAV])
        cost = sigma_s * sum(norm_energy[CUBESAT]) + sigma_a * sum(norm_energy[UAV])
        out.append(RewardBreakdown(utility=utility, cost=cost, reward=utility - cost,
                                   sigma_cubesat=sigma_s, sigma_uav=sigma_a,
                                   links=tuple(links)))
    return out


# --- the environment -----------------------------------------------------------------

def state_feature_vector(state: SaginState, cfg: ScenarioConfig) -> np.ndarray:
    """Flat ground-truth features for the centralized critic."""
    parts = [state.t / cfg.episode_steps]
    for i, gs in enumerate(cfg.ground_stations):
        parts.extend((gs.position.latitude, gs.position.longitude,
                      gs.own_capacity, float(state.gs_capacity_limit[i])))
    for j, sat in enumerate(cfg.cubesats):
        pos = state.cubesat_pos[j]
        parts.extend((pos.latitude, pos.longitude, pos.altitude,
                      float(state.cubesat_speed[j]),
                      float(state.cubesat_energy[j]) / sat.energy_cap_j, sat.capacity))
    for l, uav in enumerate(cfg.uavs):
        pos = state.uav_pos[l]
        parts.extend((pos.latitude, pos.longitude, pos.altitude,
                      float(state.uav_speed[l]),
                      float(state.uav_energy[l]) / uav.energy_cap_j, uav.capacity))
    return np.array(parts)


def _bearing(p: GeodeticPosition, q: GeodeticPosition) -> float:
    dlon = q.longitude - p.longitude
    x = math.sin(dlon) * math.cos(q.latitude)
    y = math.cos(p.latitude) * math.sin(q.latitude) \
        - math.sin(p.latitude) * math.cos(q.latitude) * math.cos(dlon)
    return math.atan2(x, y)


def _destination(p: GeodeticPosition, bearing: float, angular: float,
                 altitude: float) -> GeodeticPosition:
    lat = math.asin(math.sin(p.latitude) * math.cos(angular)
                    + math.cos(p.latitude) * math.sin(angular) * math.cos(bearing))
    lon = p.longitude + math.atan2(
        math.sin(bearing) * math.sin(angular) * math.cos(p.latitude),
        math.cos(angular) - math.sin(p.latitude) * math.sin(lat))
    return GeodeticPosition(latitude=lat, longitude=lon, altitude=altitude)


class SaginEnv:
    """One scheduling episode; step-by-step with explicit reset seeding."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self._rng: np.random.Generator | None = None
        self.state: SaginState | None = None

    # -- lifecycle --

    def reset(self, seed: int | None = None) -> tuple[SaginState, list[GsObservation]]:
        self._rng = np.random.default_rng(seed)
        cfg = self.cfg
        cubesat_pos, cubesat_speed = self._cubesat_kinematics(0)
        uav_pos = tuple(GeodeticPosition(u.waypoints[0][0], u.waypoints[0][1],
                                         u.altitude_m) for u in cfg.uavs)
        uav_waypoint = np.array([1 % len(u.waypoints) for u in cfg.uavs])
        uav_heading = np.array([
            _bearing(pos, GeodeticPosition(u.waypoints[wp][0], u.waypoints[wp][1],
                                           u.altitude_m))
            for pos, u, wp in zip(uav_pos, cfg.uavs, uav_waypoint)])
        self.state = SaginState(
            t=0,
            cubesat_pos=cubesat_pos,
            cubesat_speed=cubesat_speed,
            cubesat_energy=np.array([c.initial_energy_j for c in cfg.cubesats]),
            cubesat_sunlit=_sunlit_flags(cubesat_pos, cfg),
            uav_pos=uav_pos,
            uav_speed=np.array([u.speed_ms for u in cfg.uavs]),
            uav_heading=uav_heading,
            uav_waypoint=uav_waypoint,
            uav_energy=np.array([u.initial_energy_j for u in cfg.uavs]),
            gs_capacity_limit=np.array([capacity_limit(i, 0.0, cfg)
                                        for i in range(cfg.n_gs)]),
        )
        return self.state, self.observations()

    def step(self, actions: list[ScheduleAction]) -> tuple[
            SaginState, list[GsObservation], list[RewardBreakdown], bool]:
        """Project, reward, spend, charge, move, advance the clock."""
        cfg = self.cfg
        state = self.state
        if state is None:
            raise RuntimeError("reset() must be called before step()")
        if state.t >= cfg.episode_steps:
            raise RuntimeError("episode is done; reset() to start another")
        if len(actions) != cfg.n_gs:
            raise ValueError(f"expected {cfg.n_gs} actions, got {len(actions)}")

        projected = [project_feasible(a, state, i, cfg) for i, a in enumerate(actions)]
        breakdowns = reward(state, projected, cfg)

        cubesat_energy = np.array(state.cubesat_energy)
        uav_energy = np.array(state.uav_energy)
        for j in range(cfg.n_cubesat):
            spent = base_step_energy(state, cfg, CUBESAT, j)
            for i, act in enumerate(projected):
                if act.bits[j]:
                    d = slant_distance(cfg.ground_stations[i].position,
                                       state.cubesat_pos[j], cfg.constants)
                    spent += link_step_energy(d, cfg)
            cubesat_energy[j] = max(cubesat_energy[j] - spent, 0.0)
        for l in range(cfg.n_uav):
            spent = base_step_energy(state, cfg, UAV, l)
            for i, act in enumerate(projected):
                if act.bits[cfg.n_cubesat + l]:
                    d = slant_distance(cfg.ground_stations[i].position,
                                       state.uav_pos[l], cfg.constants)
                    spent += link_step_energy(d, cfg)
            uav_energy[l] = max(uav_energy[l] - spent, 0.0)

        interim = SaginState(
            t=state.t, cubesat_pos=state.cubesat_pos, cubesat_speed=state.cubesat_speed,
            cubesat_energy=cubesat_energy, cubesat_sunlit=state.cubesat_sunlit,
            uav_pos=state.uav_pos, uav_speed=state.uav_speed,
            uav_heading=state.uav_heading, uav_waypoint=state.uav_waypoint,
            uav_energy=uav_energy, gs_capacity_limit=state.gs_capacity_limit)
        cubesat_energy = solar_charge(interim, cfg)

        t_next = state.t + 1
        cubesat_pos, cubesat_speed = self._cubesat_kinematics(t_next)
        uav_pos, uav_heading, uav_waypoint = self._advance_uavs(state)

        self.state = SaginState(
            t=t_next,
            cubesat_pos=cubesat_pos,
            cubesat_speed=cubesat_speed,
            cubesat_energy=cubesat_energy,
            cubesat_sunlit=_sunlit_flags(cubesat_pos, cfg),
            uav_pos=uav_pos,
            uav_speed=np.array(state.uav_speed),
            uav_heading=uav_heading,
            uav_waypoint=uav_waypoint,
            uav_energy=uav_energy,
            gs_capacity_limit=np.array([capacity_limit(i, float(t_next), cfg)
                                        for i in range(cfg.n_gs)]),
        )
        done = t_next >= cfg.episode_steps
        return self.state, self.observations(), breakdowns, done

    # -- helpers --

    def observations(self) -> list[GsObservation]:
        cfg, state = self.cfg, self.state
        obs = []
        for i, gs in enumerate(cfg.ground_stations):
            cov_sats, cov_uavs = coverage(state, i, cfg)
            sats = tuple(DeviceSnapshot(j, state.cubesat_pos[j],
                                        float(state.cubesat_speed[j]),
                                        float(state.cubesat_energy[j]),
                                        cfg.cubesats[j].capacity)
                         for j in cov_sats)
            uavs = tuple(DeviceSnapshot(l, state.uav_pos[l],
                                        float(state.uav_speed[l]),
                                        float(state.uav_energy[l]),
                                        cfg.uavs[l].capacity)
                         for l in cov_uavs)
            obs.append(GsObservation(gs_index=i, position=gs.position,
                                     capacity=gs.own_capacity, cubesats=sats,
                                     uavs=uavs, n_cubesat_slots=cfg.n_cubesat,
                                     n_uav_slots=cfg.n_uav))
        return obs

    def _cubesat_kinematics(self, t_step: int):
        cfg = self.cfg
        positions = []
        speeds = np.zeros(cfg.n_cubesat)
        for j, sat in enumerate(cfg.cubesats):
            el = sat.elements
            positions.append(subpoint(el, t_step * cfg.time_step_s, cfg.constants))
            r = cfg.constants.R_e + positions[-1].altitude
            # vis-viva speed at the current radius
            speeds[j] = math.sqrt(cfg.constants.mu * (2.0 / r - 1.0 / el.semi_major_axis))
        return tuple(positions), speeds

    def _advance_uavs(self, state: SaginState):
        cfg = self.cfg
        positions = []
        headings = np.zeros(cfg.n_uav)
        waypoints = np.array(state.uav_waypoint)
        for l, uav in enumerate(cfg.uavs):
            pos = state.uav_pos[l]
            wp = int(waypoints[l])
            target = GeodeticPosition(uav.waypoints[wp][0], uav.waypoints[wp][1],
                                      uav.altitude_m)
            move = uav.speed_ms * cfg.time_step_s
            arc = great_circle_distance(pos, target, cfg.constants)
            if arc <= move:
                new_pos = target
                waypoints[l] = (wp + 1) % len(uav.waypoints)
                next_target = GeodeticPosition(uav.waypoints[int(waypoints[l])][0],
                                               uav.waypoints[int(waypoints[l])][1],
                                               uav.altitude_m)
                heading = _bearing(new_pos, next_target)
            else:
                heading = _bearing(pos, target)
                new_pos = _destination(pos, heading, move / cfg.constants.R_e,
                                       uav.altitude_m)
            att = gust_perturb(Attitude(yaw=heading), uav.gust_sigma, self._rng)
            headings[l] = att.yaw
            positions.append(new_pos)
        return tuple(positions), headings, waypoints


# --- per-step metrics (CSV rows for the harness) ---------------------------------------

STEP_METRIC_COLUMNS = ("episode", "step", "gs", "reward", "utility", "cost", "qos",
                       "capacity", "mean_residual_cubesat", "mean_residual_uav")


def step_metric_rows(episode: int, state: SaginState, breakdowns: list[RewardBreakdown],
                     cfg: ScenarioConfig) -> list[dict]:
    """One row per station for the acted-upon state (pre-advance)."""
    mean_res_c = (float(np.mean(state.cubesat_energy
                                / np.array([c.energy_cap_j for c in cfg.cubesats])))
                  if cfg.n_cubesat else 0.0)
    mean_res_u = (float(np.mean(state.uav_energy
                                / np.array([u.energy_cap_j for u in cfg.uavs])))
                  if cfg.n_uav else 0.0)
    rows = []
    for i, brk in enumerate(breakdowns):
        delivered = sum(link.capacity for link in brk.links)
        limit = float(state.gs_capacity_limit[i])
        rows.append({
            "episode": episode,
            "step": state.t,
            "gs": i,
            "reward": brk.reward,
            "utility": brk.utility,
            "cost": brk.cost,
            "qos": (float(np.mean([link.quality for link in brk.links]))
                    if brk.links else 0.0),
            "capacity": delivered / limit if limit > 0 else 0.0,
            "mean_residual_cubesat": mean_res_c,
            "mean_residual_uav": mean_res_u,
        })
    return rows
