"""Fixed-wing high-altitude UAV power model and ground/body axis transforms.

The propulsion power splits into a parasite term growing with the cube of
airspeed and an induced term inversely proportional to airspeed. Ground
velocities convert to the body frame through yaw, pitch, and roll rotations
applied in that order; gusts are modeled as Gaussian attitude noise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class UavSpec:
    """Airframe constants. Defaults describe the reference HALE airframe.

    The printed weight (17,799 N) is kept verbatim even though mass*gravity
    is 17,805.15 N; mass and gravity ride along as metadata.
    """
    mass: float = 1815.0           # kg
    gravity: float = 9.81          # m/s^2
    weight: float = 17799.0        # N
    wing_area: float = 6.61        # m^2
    air_density: float = 0.089     # kg/m^3 (high-altitude)
    cd0: float = 0.045             # parasite drag coefficient at zero lift
    k_induced: float = 0.052       # induced drag coefficient

    def __post_init__(self):
        for name in ("mass", "gravity", "weight", "wing_area", "air_density",
                     "cd0", "k_induced"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


def wrap_angle(x: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.fmod(x + math.pi, TWO_PI)
    if w <= 0.0:
        w += TWO_PI
    return w - math.pi


@dataclass(frozen=True)
class Attitude:
    """Yaw/pitch/roll in radians, each wrapped to (-pi, pi]."""
    yaw: float = 0.0
    pitch: float = 0.0
    roll: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "yaw", wrap_angle(self.yaw))
        object.__setattr__(self, "pitch", wrap_angle(self.pitch))
        object.__setattr__(self, "roll", wrap_angle(self.roll))


class GroundVelocity(NamedTuple):
    u: float
    v: float
    w: float


class BodyVelocity(NamedTuple):
    u: float
    v: float
    w: float


def _yaw_matrix(psi: float) -> np.ndarray:
    c, s = math.cos(psi), math.sin(psi)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def _pitch_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def _roll_matrix(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]])


def ground_to_body(vel: GroundVelocity, att: Attitude) -> BodyVelocity:
    """Rotate a ground-frame velocity into the body frame (yaw, pitch, roll order)."""
    v = np.array(vel, dtype=float)
    body = _roll_matrix(att.roll) @ (_pitch_matrix(att.pitch) @ (_yaw_matrix(att.yaw) @ v))
    return BodyVelocity(float(body[0]), float(body[1]), float(body[2]))


def airspeed(vel: BodyVelocity) -> float:
    """Speed as the Euclidean aggregate of the per-axis components."""
    return math.sqrt(vel.u ** 2 + vel.v ** 2 + vel.w ** 2)


class PowerBreakdown(NamedTuple):
    parasite: float
    induced: float
    total: float


def required_power(spec: UavSpec, V: float) -> PowerBreakdown:
    """Propulsion power (W) needed to hold airspeed V.

    parasite = q*S*cd0*V and induced = W^2*k*V/(q*S) with dynamic pressure
    q = rho*V^2/2. The induced term diverges as V -> 0, so V must be > 0.
    """
    if V <= 0:
        raise ValueError(f"airspeed must be positive, got {V}")
    q = 0.5 * spec.air_density * V ** 2
    parasite = q * spec.wing_area * spec.cd0 * V
    induced = spec.weight ** 2 * spec.k_induced * V / (q * spec.wing_area)
    return PowerBreakdown(parasite, induced, parasite + induced)


def gust_perturb(att: Attitude, sigma: float, rng: np.random.Generator) -> Attitude:
    """Add i.i.d. zero-mean Gaussian noise of std ``sigma`` to each attitude angle."""
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0.0:
        return att
    noise = rng.normal(0.0, sigma, size=3)
    return Attitude(yaw=att.yaw + noise[0], pitch=att.pitch + noise[1],
                    roll=att.roll + noise[2])
