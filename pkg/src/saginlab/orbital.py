"""Two-body Keplerian orbit model: TLE parsing, element derivation, and ground tracks.

Propagation is deliberately simple — mean-motion Kepler propagation over a
uniformly rotating spherical Earth. No SGP4, no J2, no drag. The anomaly chain
defaults to the first-order form E = M + e*sin(M); an iterative Newton solver
is available for accuracy comparisons.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

TWO_PI = 2.0 * math.pi
SECONDS_PER_DAY = 86400.0


class TleParseError(ValueError):
    """A TLE line is malformed (wrong length or undecodable column span)."""


class TleChecksumError(ValueError):
    """A TLE line fails the modulo-10 checksum."""


@dataclass(frozen=True)
class EarthConstants:
    """Physical constants for position calculations.

    Defaults are the experiment's printed values; ``rotation_rate`` is the
    standard sidereal rate (not part of the printed table).
    """
    G: float = 6.673e-20
    M_e: float = 5.974e24          # kg
    R_e: float = 6.378e6           # m
    mu: float = 3.986e14           # m^3/s^2
    rotation_rate: float = 7.2921159e-5  # rad/s


@dataclass(frozen=True)
class TleRecord:
    """Raw fields decoded from a two-line element set."""
    name: str
    satellite_number: int
    epoch: float                   # seconds, UTC-referenced (Unix)
    inclination_deg: float
    raan_deg: float
    eccentricity: float
    arg_perigee_deg: float
    mean_anomaly_deg: float
    mean_motion_rev_per_day: float
    checksum_line1: int
    checksum_line2: int


@dataclass(frozen=True)
class OrbitalElements:
    """Keplerian element set in SI units and radians."""
    e: float
    i: float
    raan: float
    arg_perigee: float
    mean_anomaly_at_epoch: float
    semi_major_axis: float         # m
    angular_momentum: float        # m^2/s
    mean_motion: float             # rad/s


@dataclass(frozen=True)
class GeodeticPosition:
    """Latitude/longitude in radians, altitude in meters above the sphere.

    Longitude is wrapped to (-pi, pi] on construction. ``pole_degenerate``
    marks positions where longitude is undefined (|cos(lat)| ~ 0) and was
    set to 0 by convention.
    """
    latitude: float
    longitude: float
    altitude: float = 0.0
    pole_degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not -math.pi / 2 <= self.latitude <= math.pi / 2:
            raise ValueError(f"latitude {self.latitude} outside [-pi/2, pi/2]")
        if self.altitude < 0:
            raise ValueError(f"altitude {self.altitude} is negative")
        object.__setattr__(self, "longitude", wrap_longitude(self.longitude))


def wrap_longitude(lon: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.fmod(lon + math.pi, TWO_PI)
    if w <= 0.0:
        w += TWO_PI
    return w - math.pi


def _clamped_acos(x: float) -> float:
    # round-off near +/-1 would otherwise raise
    return math.acos(min(1.0, max(-1.0, x)))


# --- TLE parsing -----------------------------------------------------------

def tle_checksum(line: str) -> int:
    """Modulo-10 checksum over the first 68 characters (digits count, '-' counts 1)."""
    total = 0
    for ch in line[:68]:
        if ch.isdigit():
            total += int(ch)
        elif ch == "-":
            total += 1
    return total % 10


def _span(line: str, lineno: int, start: int, end: int, name: str) -> str:
    """Extract 1-based inclusive column span, erroring with the span on failure."""
    text = line[start - 1:end]
    if len(text) != end - start + 1:
        raise TleParseError(
            f"line {lineno} columns {start}-{end} ({name}): span missing or truncated")
    return text


def _float_span(line: str, lineno: int, start: int, end: int, name: str) -> float:
    text = _span(line, lineno, start, end, name)
    try:
        return float(text)
    except ValueError as exc:
        raise TleParseError(
            f"line {lineno} columns {start}-{end} ({name}): {text!r} is not numeric") from exc


def _int_span(line: str, lineno: int, start: int, end: int, name: str) -> int:
    text = _span(line, lineno, start, end, name)
    try:
        return int(text)
    except ValueError as exc:
        raise TleParseError(
            f"line {lineno} columns {start}-{end} ({name}): {text!r} is not an integer") from exc


def _epoch_seconds(year_two_digit: int, day_of_year: float) -> float:
    # TLE convention: 57-99 -> 1957-1999, 00-56 -> 2000-2056
    year = 1900 + year_two_digit if year_two_digit >= 57 else 2000 + year_two_digit
    jan1 = datetime(year, 1, 1, tzinfo=timezone.utc).timestamp()
    return jan1 + (day_of_year - 1.0) * SECONDS_PER_DAY


def parse_tle(text: str) -> TleRecord:
    """Parse a two-line element set (optionally preceded by a name line).

    Lines must be the fixed 69-column format. Raises :class:`TleParseError`
    for malformed spans and :class:`TleChecksumError` when a line's modulo-10
    checksum does not match its final column.
    """
    lines = [ln.rstrip("\r\n") for ln in text.strip("\n").splitlines() if ln.strip()]
    if len(lines) == 3:
        name, line1, line2 = lines[0].strip(), lines[1], lines[2]
    elif len(lines) == 2:
        name, (line1, line2) = "", lines
    else:
        raise TleParseError(f"expected 2 or 3 lines, got {len(lines)}")

    for lineno, line, lead in ((1, line1, "1"), (2, line2, "2")):
        if len(line) != 69:
            raise TleParseError(
                f"line {lineno} columns 1-69: expected 69 characters, got {len(line)}")
        if line[0] != lead:
            raise TleParseError(f"line {lineno} columns 1-1 (line number): got {line[0]!r}")

    for lineno, line in ((1, line1), (2, line2)):
        stated = _int_span(line, lineno, 69, 69, "checksum")
        computed = tle_checksum(line)
        if stated != computed:
            raise TleChecksumError(
                f"line {lineno}: checksum {stated} does not match computed {computed}")

    satnum = _int_span(line1, 1, 3, 7, "satellite number")
    epoch_year = _int_span(line1, 1, 19, 20, "epoch year")
    epoch_day = _float_span(line1, 1, 21, 32, "epoch day")

    incl = _float_span(line2, 2, 9, 16, "inclination")
    raan = _float_span(line2, 2, 18, 25, "right ascension of ascending node")
    ecc_digits = _span(line2, 2, 27, 33, "eccentricity").strip()
    if not ecc_digits.isdigit():
        raise TleParseError(
            f"line 2 columns 27-33 (eccentricity): {ecc_digits!r} is not an assumed-decimal field")
    ecc = int(ecc_digits) / 1e7
    argp = _float_span(line2, 2, 35, 42, "argument of perigee")
    mean_anom = _float_span(line2, 2, 44, 51, "mean anomaly")
    mean_motion = _float_span(line2, 2, 53, 63, "mean motion")

    return TleRecord(
        name=name,
        satellite_number=satnum,
        epoch=_epoch_seconds(epoch_year, epoch_day),
        inclination_deg=incl,
        raan_deg=raan,
        eccentricity=ecc,
        arg_perigee_deg=argp,
        mean_anomaly_deg=mean_anom,
        mean_motion_rev_per_day=mean_motion,
        checksum_line1=int(line1[68]),
        checksum_line2=int(line2[68]),
    )


def load_tle_file(path) -> list[TleRecord]:
    """Read a TLE text file (optional name line + two data lines per object)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\r\n") for ln in fh if ln.strip()]
    records = []
    i = 0
    while i < len(lines):
        # a data line 1 is exactly 69 columns; anything else is a name line
        take = 2 if len(lines[i]) == 69 and lines[i].startswith("1 ") else 3
        records.append(parse_tle("\n".join(lines[i:i + take])))
        i += take
    return records


# --- element derivation and anomaly chain ----------------------------------

def elements_from_tle(rec: TleRecord, constants: EarthConstants = EarthConstants()) -> OrbitalElements:
    """Derive the full Keplerian element set from a TLE record.

    The semi-major axis is not stored in a TLE; it follows from the mean
    motion via Kepler's third law, a = (mu / n^2)^(1/3) with n in rad/s.
    """
    if rec.mean_motion_rev_per_day <= 0:
        raise ValueError(f"mean motion must be positive, got {rec.mean_motion_rev_per_day}")
    n = rec.mean_motion_rev_per_day * TWO_PI / SECONDS_PER_DAY
    a = (constants.mu / n ** 2) ** (1.0 / 3.0)
    e = rec.eccentricity
    h = math.sqrt(constants.mu * a * (1.0 - e ** 2))
    return OrbitalElements(
        e=e,
        i=math.radians(rec.inclination_deg),
        raan=math.radians(rec.raan_deg),
        arg_perigee=math.radians(rec.arg_perigee_deg),
        mean_anomaly_at_epoch=math.radians(rec.mean_anomaly_deg),
        semi_major_axis=a,
        angular_momentum=h,
        mean_motion=n,
    )


def eccentric_anomaly(mean_anomaly: float, e: float, mode: str = "first-order") -> float:
    """Eccentric anomaly from mean anomaly.

    ``first-order`` (default) is E = M + e*sin(M). ``newton`` solves
    E - e*sin(E) = M to 1e-12 (at most 50 iterations).
    """
    if not 0.0 <= e < 1.0:
        raise ValueError(f"eccentricity {e} outside [0, 1)")
    if mode == "first-order":
        return mean_anomaly + e * math.sin(mean_anomaly)
    if mode == "newton":
        E = mean_anomaly if e < 0.8 else math.pi
        for _ in range(50):
            delta = (E - e * math.sin(E) - mean_anomaly) / (1.0 - e * math.cos(E))
            E -= delta
            if abs(delta) < 1e-12:
                break
        return E
    raise ValueError(f"unknown mode {mode!r}")


def true_anomaly(E: float, e: float) -> float:
    """True anomaly from eccentric anomaly via the half-angle form.

    Branch-corrected so nu is continuous and stays in the same revolution
    as E (the bare arctangent form wraps at every half revolution).
    """
    if not 0.0 <= e < 1.0:
        raise ValueError(f"eccentricity {e} outside [0, 1)")
    rev = math.floor((E + math.pi) / TWO_PI)
    E0 = E - TWO_PI * rev  # [-pi, pi)
    nu0 = 2.0 * math.atan2(math.sqrt(1.0 + e) * math.sin(E0 / 2.0),
                           math.sqrt(1.0 - e) * math.cos(E0 / 2.0))
    return nu0 + TWO_PI * rev


def conic_radius(elements: OrbitalElements, nu: float, constants: EarthConstants = EarthConstants()) -> float:
    """Orbit radius at true anomaly nu: r = (H^2/mu) / (1 + e*cos(nu))."""
    return (elements.angular_momentum ** 2 / constants.mu) / (1.0 + elements.e * math.cos(nu))


# --- ground track ----------------------------------------------------------

def _rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def _rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]])


def subpoint(elements: OrbitalElements, t: float,
             constants: EarthConstants = EarthConstants(),
             anomaly_mode: str = "first-order") -> GeodeticPosition:
    """Ground position (and altitude) of the orbiting body ``t`` seconds after epoch.

    Chains M(t) = M0 + n*t through the eccentric and true anomalies, builds
    the in-plane vector V4 = [r*cos(nu), r*sin(nu), 0], orients it with the
    node/inclination/perigee matrices C1(raan), C2(i), C3(argp), and converts
    to the rotating-Earth frame with C4(theta), theta = rotation_rate * t
    (frames aligned at t = 0). Latitude comes from the third component,
    longitude from the first with the sign of the second resolving the
    east/west ambiguity of the arccosine.
    """
    M = elements.mean_anomaly_at_epoch + elements.mean_motion * t
    E = eccentric_anomaly(M, elements.e, mode=anomaly_mode)
    nu = true_anomaly(E, elements.e)
    r = conic_radius(elements, nu, constants)
    v4 = np.array([r * math.cos(nu), r * math.sin(nu), 0.0])

    orient = _rot_z(elements.raan) @ _rot_x(elements.i) @ _rot_z(elements.arg_perigee)
    # Earth rotation acts on the orbit-oriented vector: it shifts longitude
    # only, never latitude.
    rf = _rot_z(constants.rotation_rate * t) @ (orient @ v4)

    norm = float(np.linalg.norm(rf))
    lat = math.asin(min(1.0, max(-1.0, rf[2] / norm)))
    cos_lat = math.cos(lat)
    if abs(cos_lat) < 1e-12:
        return GeodeticPosition(latitude=lat, longitude=0.0,
                                altitude=norm - constants.R_e, pole_degenerate=True)
    lon = _clamped_acos(rf[0] / (norm * cos_lat))
    if rf[1] < 0.0:
        lon = -lon
    return GeodeticPosition(latitude=lat, longitude=lon, altitude=norm - constants.R_e)


# --- distances (horizontal arc + vertical offset) --------------------------

def great_circle_distance(p: GeodeticPosition, q: GeodeticPosition,
                          constants: EarthConstants = EarthConstants()) -> float:
    """Surface arc between the sub-points of two positions."""
    inner = (math.cos(p.latitude) * math.cos(q.latitude)
             * math.cos(p.longitude - q.longitude)
             + math.sin(p.latitude) * math.sin(q.latitude))
    return constants.R_e * _clamped_acos(inner)


def slant_distance(gs: GeodeticPosition, device: GeodeticPosition,
                   constants: EarthConstants = EarthConstants()) -> float:
    """Link distance: sqrt(horizontal arc^2 + altitude difference^2)."""
    h = great_circle_distance(gs, device, constants)
    v = device.altitude - gs.altitude
    return math.sqrt(h * h + v * v)
