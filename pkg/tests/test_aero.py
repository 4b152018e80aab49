"""UAV power-model tests against scalar substitution and scaling oracles."""
import math

import numpy as np
import pytest

from saginlab.aero import (
    Attitude,
    BodyVelocity,
    GroundVelocity,
    UavSpec,
    airspeed,
    ground_to_body,
    gust_perturb,
    required_power,
    wrap_angle,
)

SPEC = UavSpec()


def test_spec_defaults():
    assert SPEC.mass == 1815.0
    assert SPEC.gravity == 9.81
    assert SPEC.weight == 17799.0
    assert SPEC.wing_area == 6.61
    assert SPEC.air_density == 0.089
    assert SPEC.cd0 == 0.045
    assert SPEC.k_induced == 0.052


def test_spec_rejects_nonpositive():
    with pytest.raises(ValueError):
        UavSpec(wing_area=0.0)
    with pytest.raises(ValueError):
        UavSpec(air_density=-0.1)


# --- axis transforms -------------------------------------------------------

def test_ground_to_body_identity():
    out = ground_to_body(GroundVelocity(3.0, -2.0, 1.0), Attitude())
    assert out == pytest.approx((3.0, -2.0, 1.0), abs=1e-15)


def test_ground_to_body_quarter_yaw():
    # hand multiply of the yaw matrix: [cos, sin; -sin, cos] at psi = pi/2
    out = ground_to_body(GroundVelocity(1.0, 0.0, 0.0), Attitude(yaw=math.pi / 2))
    assert out.u == pytest.approx(0.0, abs=1e-12)
    assert out.v == pytest.approx(-1.0, abs=1e-12)
    assert out.w == pytest.approx(0.0, abs=1e-12)


def test_ground_to_body_norm_preserved():
    rng = np.random.default_rng(21)
    for _ in range(1000):
        vel = GroundVelocity(*rng.normal(0, 50, size=3))
        att = Attitude(*rng.uniform(-math.pi, math.pi, size=3))
        body = ground_to_body(vel, att)
        g = math.sqrt(vel.u ** 2 + vel.v ** 2 + vel.w ** 2)
        b = airspeed(body)
        assert b == pytest.approx(g, rel=1e-9, abs=1e-12)


def test_airspeed_cases():
    assert airspeed(BodyVelocity(3.0, 4.0, 0.0)) == 5.0
    assert airspeed(BodyVelocity(0.0, 0.0, 0.0)) == 0.0


def test_airspeed_invariant_under_transform():
    rng = np.random.default_rng(5)
    for _ in range(100):
        vel = GroundVelocity(*rng.normal(0, 30, size=3))
        att = Attitude(*rng.uniform(-3, 3, size=3))
        assert airspeed(ground_to_body(vel, att)) == pytest.approx(
            airspeed(BodyVelocity(*vel)), rel=1e-9, abs=1e-12)


# --- power model -----------------------------------------------------------

def scalar_power_oracle(spec, V):
    # direct substitution, written independently of the implementation
    q = 0.5 * spec.air_density * V * V
    p_parasite = q * spec.wing_area * spec.cd0 * V
    p_induced = spec.weight * spec.weight * spec.k_induced * V / (q * spec.wing_area)
    return p_parasite, p_induced


def test_required_power_reference_point():
    p = required_power(SPEC, 100.0)
    parasite, induced = scalar_power_oracle(SPEC, 100.0)
    assert p.parasite == pytest.approx(parasite, rel=1e-12)
    assert p.induced == pytest.approx(induced, rel=1e-12)
    assert p.parasite == pytest.approx(1.3237e4, rel=1e-4)
    assert p.induced == pytest.approx(5.6006e5, rel=1e-4)
    assert p.total == p.parasite + p.induced


def test_required_power_scaling():
    p1 = required_power(SPEC, 60.0)
    p2 = required_power(SPEC, 120.0)
    assert p2.parasite / p1.parasite == pytest.approx(8.0, rel=1e-12)
    assert p2.induced / p1.induced == pytest.approx(0.5, rel=1e-12)


def test_parasite_induced_balance_speed():
    # solving parasite == induced gives V* = sqrt(2W/(rho*S)) * (k/cd0)^(1/4)
    v_star = math.sqrt(2 * SPEC.weight / (SPEC.air_density * SPEC.wing_area)) \
        * (SPEC.k_induced / SPEC.cd0) ** 0.25
    p = required_power(SPEC, v_star)
    assert p.parasite == pytest.approx(p.induced, rel=1e-6)


def test_required_power_convexity():
    grid = np.linspace(30.0, 300.0, 40)
    for a, b in zip(grid[:-1], grid[1:]):
        mid = required_power(SPEC, (a + b) / 2).total
        avg = 0.5 * (required_power(SPEC, float(a)).total
                     + required_power(SPEC, float(b)).total)
        assert mid < avg


def test_required_power_exact_exponents():
    for scale in (2.0, 3.0, 7.5):
        base = required_power(SPEC, 80.0)
        scaled = required_power(SPEC, 80.0 * scale)
        assert scaled.parasite == pytest.approx(base.parasite * scale ** 3, rel=1e-12)
        assert scaled.induced == pytest.approx(base.induced / scale, rel=1e-12)


def test_required_power_rejects_nonpositive_speed():
    with pytest.raises(ValueError):
        required_power(SPEC, 0.0)
    with pytest.raises(ValueError):
        required_power(SPEC, -5.0)


# --- gusts -----------------------------------------------------------------

def test_gust_zero_sigma_identity():
    att = Attitude(0.4, -0.2, 1.1)
    assert gust_perturb(att, 0.0, np.random.default_rng(0)) == att


def test_gust_zero_mean():
    rng = np.random.default_rng(99)
    n = 100_000
    sigma = 0.05
    base = Attitude(0.0, 0.0, 0.0)
    samples = np.array([gust_perturb(base, sigma, rng).yaw for _ in range(n)])
    assert abs(samples.mean()) < 3 * sigma / math.sqrt(n)


def test_gust_output_wrapped():
    rng = np.random.default_rng(1)
    att = Attitude(3.1, -3.1, 0.0)
    for _ in range(200):
        out = gust_perturb(att, 2.0, rng)
        for angle in (out.yaw, out.pitch, out.roll):
            assert -math.pi < angle <= math.pi


def test_wrap_angle_boundary():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi, abs=1e-12)
    assert wrap_angle(0.5) == 0.5
