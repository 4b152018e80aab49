"""Orbit model tests against hand-computed and closed-form oracles."""
import math

import numpy as np
import pytest

from saginlab.orbital import (
    EarthConstants,
    GeodeticPosition,
    OrbitalElements,
    TleChecksumError,
    TleParseError,
    conic_radius,
    eccentric_anomaly,
    elements_from_tle,
    great_circle_distance,
    load_tle_file,
    parse_tle,
    slant_distance,
    subpoint,
    true_anomaly,
    wrap_longitude,
)

CONST = EarthConstants()

# Public reference element set (ISS), widely reproduced in propagation literature.
ISS_NAME = "ISS (ZARYA)"
ISS_L1 = "1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927"
ISS_L2 = "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537"
ISS_TEXT = f"{ISS_NAME}\n{ISS_L1}\n{ISS_L2}"


def circular_elements(a, i, raan=0.0, argp=0.0, m0=0.0):
    n = math.sqrt(CONST.mu / a ** 3)
    return OrbitalElements(e=0.0, i=i, raan=raan, arg_perigee=argp,
                           mean_anomaly_at_epoch=m0, semi_major_axis=a,
                           angular_momentum=math.sqrt(CONST.mu * a), mean_motion=n)


# --- TLE parsing -----------------------------------------------------------

def manual_checksum(line):
    # independent re-statement of the modulo-10 rule over the 68 leading chars
    total = 0
    for ch in line[:68]:
        if ch.isdigit():
            total += int(ch)
        elif ch == "-":
            total += 1
    return total % 10


def test_parse_tle_fields():
    rec = parse_tle(ISS_TEXT)
    assert rec.name == "ISS (ZARYA)"
    assert rec.satellite_number == 25544
    assert rec.inclination_deg == pytest.approx(51.6416)
    assert rec.raan_deg == pytest.approx(247.4627)
    assert rec.eccentricity == pytest.approx(0.0006703)
    assert rec.arg_perigee_deg == pytest.approx(130.5360)
    assert rec.mean_anomaly_deg == pytest.approx(325.0288)
    assert rec.mean_motion_rev_per_day == pytest.approx(15.72125391)
    assert rec.checksum_line1 == manual_checksum(ISS_L1)
    assert rec.checksum_line2 == manual_checksum(ISS_L2)
    # invariants
    assert 0.0 <= rec.eccentricity < 1.0
    assert 0.0 <= rec.inclination_deg <= 180.0
    assert rec.mean_motion_rev_per_day > 0.0


def test_parse_tle_without_name_line():
    rec = parse_tle(f"{ISS_L1}\n{ISS_L2}")
    assert rec.name == ""
    assert rec.satellite_number == 25544


def test_parse_tle_zero_eccentricity():
    line2 = ISS_L2[:26] + "0000000" + ISS_L2[33:68]
    line2 += str(manual_checksum(line2))
    rec = parse_tle(f"{ISS_L1}\n{line2}")
    assert rec.eccentricity == 0.0


def test_parse_tle_checksum_mismatch():
    # altering the final digit invalidates the stated checksum
    bad = ISS_L2[:68] + str((int(ISS_L2[68]) + 1) % 10)
    with pytest.raises(TleChecksumError):
        parse_tle(f"{ISS_L1}\n{bad}")


def test_parse_tle_altered_payload_fails_checksum():
    # altering a payload digit changes the computed sum away from the stated one
    assert ISS_L2[10].isdigit()
    altered = ISS_L2[:10] + str((int(ISS_L2[10]) + 1) % 10) + ISS_L2[11:]
    assert manual_checksum(altered) != int(altered[68])
    with pytest.raises(TleChecksumError):
        parse_tle(f"{ISS_L1}\n{altered}")


def test_parse_tle_truncated_line_names_span():
    with pytest.raises(TleParseError, match="columns 1-69"):
        parse_tle(f"{ISS_L1[:60]}\n{ISS_L2}")


def test_parse_tle_non_numeric_field_names_span():
    bad = ISS_L2[:52] + "xx.xxxxxxxx" + ISS_L2[63:68]
    bad += str(manual_checksum(bad))  # keep the checksum valid so decoding is reached
    with pytest.raises(TleParseError, match="columns 53-63"):
        parse_tle(f"{ISS_L1}\n{bad}")


def test_load_tle_file_mixed_entries(tmp_path):
    path = tmp_path / "fleet.tle"
    path.write_text(f"{ISS_TEXT}\n{ISS_L1}\n{ISS_L2}\n")
    records = load_tle_file(path)
    assert len(records) == 2
    assert records[0].name == "ISS (ZARYA)"
    assert records[1].name == ""


# --- element derivation ----------------------------------------------------

def test_semi_major_axis_from_mean_motion():
    # orbit period 5553.6 s (~15.56 rev/day); oracle is direct scalar arithmetic
    rev_per_day = 86400.0 / 5553.6
    n = 2.0 * math.pi / 5553.6
    a_oracle = (CONST.mu / n ** 2) ** (1.0 / 3.0)
    rec = parse_tle(ISS_TEXT)
    rec = type(rec)(**{**rec.__dict__, "mean_motion_rev_per_day": rev_per_day})
    el = elements_from_tle(rec)
    assert el.semi_major_axis == pytest.approx(a_oracle, rel=1e-12)
    assert el.semi_major_axis == pytest.approx(6.778114747e6, rel=1e-6)


def test_circular_angular_momentum():
    rec = parse_tle(ISS_TEXT)
    rec = type(rec)(**{**rec.__dict__, "eccentricity": 0.0})
    el = elements_from_tle(rec)
    assert el.angular_momentum == pytest.approx(
        math.sqrt(CONST.mu * el.semi_major_axis), rel=1e-12)


def test_doubling_mean_motion_shrinks_axis():
    rec = parse_tle(ISS_TEXT)
    el1 = elements_from_tle(rec)
    rec2 = type(rec)(**{**rec.__dict__,
                        "mean_motion_rev_per_day": 2 * rec.mean_motion_rev_per_day})
    el2 = elements_from_tle(rec2)
    assert el2.semi_major_axis / el1.semi_major_axis == pytest.approx(2 ** (-2 / 3), rel=1e-12)


def test_angular_momentum_identity():
    el = elements_from_tle(parse_tle(ISS_TEXT))
    expected = math.sqrt(CONST.mu * el.semi_major_axis * (1 - el.e ** 2))
    assert el.angular_momentum == pytest.approx(expected, rel=1e-9)


def test_nonpositive_mean_motion_rejected():
    rec = parse_tle(ISS_TEXT)
    bad = type(rec)(**{**rec.__dict__, "mean_motion_rev_per_day": 0.0})
    with pytest.raises(ValueError):
        elements_from_tle(bad)


# --- anomaly chain ---------------------------------------------------------

def test_eccentric_anomaly_perigee():
    for e in (0.0, 0.3, 0.9):
        assert eccentric_anomaly(0.0, e) == 0.0
        assert eccentric_anomaly(0.0, e, mode="newton") == pytest.approx(0.0, abs=1e-12)


def test_eccentric_anomaly_first_order_substitution():
    assert eccentric_anomaly(math.pi / 2, 0.1) == pytest.approx(math.pi / 2 + 0.1, abs=1e-15)


def test_eccentric_anomaly_circular_both_modes():
    for M in (0.3, 2.0, 5.5):
        assert eccentric_anomaly(M, 0.0) == M
        assert eccentric_anomaly(M, 0.0, mode="newton") == pytest.approx(M, abs=1e-12)


def test_eccentric_anomaly_newton_satisfies_kepler():
    rng = np.random.default_rng(11)
    for _ in range(50):
        M = float(rng.uniform(0, 2 * math.pi))
        e = float(rng.uniform(0, 0.95))
        E = eccentric_anomaly(M, e, mode="newton")
        assert E - e * math.sin(E) == pytest.approx(M, abs=1e-10)


def test_true_anomaly_half_angle():
    assert true_anomaly(math.pi / 2, 0.5) == pytest.approx(2 * math.atan(math.sqrt(3.0)), abs=1e-12)
    assert true_anomaly(math.pi / 2, 0.5) == pytest.approx(2.0944, abs=1e-4)


def test_true_anomaly_circular_identity():
    for E in (0.0, 1.0, 3.0, 6.0, -2.0):
        assert true_anomaly(E, 0.0) == pytest.approx(E, abs=1e-12)


def test_true_anomaly_apogee():
    for e in (0.0, 0.2, 0.8):
        assert true_anomaly(math.pi, e) == pytest.approx(math.pi, abs=1e-12)


def test_true_anomaly_stays_in_same_revolution():
    # continuity across many revolutions: nu - E never exceeds half a turn
    e = 0.4
    for E in np.linspace(-15.0, 15.0, 301):
        nu = true_anomaly(float(E), e)
        assert abs(nu - E) < math.pi


# --- conic radius ----------------------------------------------------------

def test_conic_radius_circular_constant():
    el = circular_elements(7.0e6, i=0.5)
    values = [conic_radius(el, nu) for nu in np.linspace(0, 2 * math.pi, 50)]
    assert max(values) - min(values) <= 1e-9 * el.semi_major_axis
    assert values[0] == pytest.approx(el.semi_major_axis, rel=1e-12)


def test_conic_radius_apsides():
    # substituting H^2 = mu*a*(1-e^2) collapses to a(1-e), a(1+e) at the apsides
    a, e = 7.2e6, 0.3
    el = OrbitalElements(e=e, i=0.0, raan=0.0, arg_perigee=0.0,
                         mean_anomaly_at_epoch=0.0, semi_major_axis=a,
                         angular_momentum=math.sqrt(CONST.mu * a * (1 - e ** 2)),
                         mean_motion=math.sqrt(CONST.mu / a ** 3))
    assert conic_radius(el, 0.0) == pytest.approx(a * (1 - e), rel=1e-12)
    assert conic_radius(el, math.pi) == pytest.approx(a * (1 + e), rel=1e-12)


# --- subpoint --------------------------------------------------------------

def closed_form_circular(el, t):
    """Hand-derived spherical-trig ground track for a circular orbit.

    The in-plane angle past the perigee axis is u = nu - argp; tilting by i
    gives z = -sin(i) sin(u), and the equatorial angle is shifted by the node
    and by Earth rotation.
    """
    nu = el.mean_anomaly_at_epoch + el.mean_motion * t
    u = nu - el.arg_perigee
    lat = math.asin(-math.sin(el.i) * math.sin(u))
    lon = math.atan2(math.cos(el.i) * math.sin(u), math.cos(u)) - el.raan \
        - CONST.rotation_rate * t
    return lat, wrap_longitude(lon)


def test_subpoint_equatorial_reference():
    el = circular_elements(7.0e6, i=0.0)
    p = subpoint(el, 0.0)
    assert p.latitude == pytest.approx(0.0, abs=1e-12)
    assert p.longitude == pytest.approx(0.0, abs=1e-12)
    assert p.altitude == pytest.approx(7.0e6 - CONST.R_e, rel=1e-12)


def test_subpoint_geosynchronous_longitude():
    n = CONST.rotation_rate
    a = (CONST.mu / n ** 2) ** (1.0 / 3.0)
    el = circular_elements(a, i=0.0, m0=0.5)
    lons = [subpoint(el, t).longitude for t in (0.0, 1000.0, 5000.0)]
    assert lons[1] == pytest.approx(lons[0], abs=1e-9)
    assert lons[2] == pytest.approx(lons[0], abs=1e-9)


def test_subpoint_polar_quarter_period():
    el = circular_elements(6.78e6, i=math.pi / 2)
    t_quarter = (math.pi / 2) / el.mean_motion
    p = subpoint(el, t_quarter)
    assert abs(p.latitude) == pytest.approx(math.pi / 2, abs=1e-6)
    assert p.pole_degenerate
    assert p.longitude == 0.0


def test_subpoint_matches_closed_form_circular():
    el = circular_elements(6.9e6, i=math.radians(51.6), raan=0.7, argp=0.3, m0=0.2)
    for t in np.linspace(0.0, 20000.0, 100):
        p = subpoint(el, float(t))
        lat, lon = closed_form_circular(el, float(t))
        assert p.latitude == pytest.approx(lat, abs=1e-6)
        assert abs(wrap_longitude(p.longitude - lon)) < 1e-6


def test_subpoint_latitude_bounded_by_inclination():
    rng = np.random.default_rng(3)
    for _ in range(20):
        i = float(rng.uniform(0.0, math.pi / 2))
        el = circular_elements(7.1e6, i=i, raan=float(rng.uniform(0, 6)),
                               argp=float(rng.uniform(0, 6)), m0=float(rng.uniform(0, 6)))
        for t in rng.uniform(0, 50000, 20):
            p = subpoint(el, float(t))
            assert -math.pi / 2 <= p.latitude <= math.pi / 2
            assert abs(p.latitude) <= i + 1e-6


def test_subpoint_eccentric_altitude_range():
    rec = parse_tle(ISS_TEXT)
    el = elements_from_tle(rec)
    a, e = el.semi_major_axis, el.e
    for t in np.linspace(0, 12000, 40):
        p = subpoint(el, float(t))
        assert a * (1 - e) - CONST.R_e - 1.0 <= p.altitude <= a * (1 + e) - CONST.R_e + 1.0


# --- distances -------------------------------------------------------------

def test_great_circle_identical_points():
    p = GeodeticPosition(0.4, -1.2, 0.0)
    assert great_circle_distance(p, p) == 0.0


def test_great_circle_quarter_circumference():
    p = GeodeticPosition(0.0, 0.0)
    q = GeodeticPosition(0.0, math.pi / 2)
    assert great_circle_distance(p, q) == pytest.approx(CONST.R_e * math.pi / 2, rel=1e-12)
    assert great_circle_distance(p, q) == pytest.approx(1.00177e7, rel=1e-4)


def test_great_circle_properties():
    rng = np.random.default_rng(7)
    for _ in range(100):
        p = GeodeticPosition(float(rng.uniform(-math.pi / 2, math.pi / 2)),
                             float(rng.uniform(-math.pi, math.pi)))
        q = GeodeticPosition(float(rng.uniform(-math.pi / 2, math.pi / 2)),
                             float(rng.uniform(-math.pi, math.pi)))
        d_pq = great_circle_distance(p, q)
        d_qp = great_circle_distance(q, p)
        assert d_pq == pytest.approx(d_qp, abs=1e-9)
        assert 0.0 <= d_pq <= math.pi * CONST.R_e + 1e-9


def test_slant_vertical_only():
    gs = GeodeticPosition(0.3, 0.9, 0.0)
    sat = GeodeticPosition(0.3, 0.9, 5.0e5)
    assert slant_distance(gs, sat) == pytest.approx(5.0e5, rel=1e-12)


def test_slant_3_4_5():
    # latitude offset of 3e5/R_e puts the horizontal arc at exactly 3e5 m
    gs = GeodeticPosition(0.0, 0.0, 0.0)
    dev = GeodeticPosition(3.0e5 / CONST.R_e, 0.0, 4.0e5)
    assert slant_distance(gs, dev) == pytest.approx(5.0e5, rel=1e-9)


def test_slant_dominates_components():
    rng = np.random.default_rng(13)
    for _ in range(100):
        gs = GeodeticPosition(float(rng.uniform(-1.4, 1.4)),
                              float(rng.uniform(-math.pi, math.pi)), 0.0)
        dev = GeodeticPosition(float(rng.uniform(-1.4, 1.4)),
                               float(rng.uniform(-math.pi, math.pi)),
                               float(rng.uniform(1e4, 1e6)))
        h = great_circle_distance(gs, dev)
        v = dev.altitude - gs.altitude
        d = slant_distance(gs, dev)
        assert d >= h - 1e-9
        assert d >= v - 1e-9


def test_geodetic_longitude_wrapping():
    p = GeodeticPosition(0.0, math.pi + 0.5)
    assert p.longitude == pytest.approx(-math.pi + 0.5, abs=1e-12)
    assert GeodeticPosition(0.0, math.pi).longitude == math.pi
    with pytest.raises(ValueError):
        GeodeticPosition(2.0, 0.0)
    with pytest.raises(ValueError):
        GeodeticPosition(0.0, 0.0, -1.0)
