"""Gravity observation ingest, geodetic/Cartesian conversion, dataset split.

Input records are geodetic: latitude and longitude in degrees, height in
meters above the reference ellipsoid, observed gravity acceleration in
mGal. All downstream geometry works on Earth-centered Cartesian
coordinates in meters.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ConfigError, ParseError, ValidationError

logger = logging.getLogger(__name__)

CSV_HEADER = "lat_deg,lon_deg,height_m,gravity_mgal"

__all__ = [
    "CSV_HEADER",
    "Ellipsoid",
    "WGS84",
    "GravityObservation",
    "GeoBoundingBox",
    "Dataset",
    "parse_observations",
    "serialize_observations",
    "geodetic_to_cartesian",
    "cartesian_to_geodetic",
    "split_dataset",
]


@dataclass(frozen=True)
class Ellipsoid:
    """Reference ellipsoid, defined by semi-major axis and inverse flattening."""

    semi_major_m: float
    inverse_flattening: float

    def __post_init__(self):
        if not self.semi_major_m > 0:
            raise ValidationError("ellipsoid semi-major axis must be > 0")
        if not self.inverse_flattening > 1:
            raise ValidationError("inverse flattening must be > 1")

    @property
    def flattening(self) -> float:
        return 1.0 / self.inverse_flattening

    @property
    def e2(self) -> float:
        """First eccentricity squared, f(2 - f)."""
        f = self.flattening
        return f * (2.0 - f)

    @property
    def semi_minor_m(self) -> float:
        return self.semi_major_m * math.sqrt(1.0 - self.e2)


WGS84 = Ellipsoid(semi_major_m=6378137.0, inverse_flattening=298.257223563)


@dataclass(frozen=True)
class GravityObservation:
    """One surveyed point: geodetic position plus observed gravity in mGal."""

    lat_deg: float
    lon_deg: float
    height_m: float
    gravity_mgal: float

    def __post_init__(self):
        for name in ("lat_deg", "lon_deg", "height_m", "gravity_mgal"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} is not finite")
        if not -90.0 <= self.lat_deg <= 90.0:
            raise ValidationError(f"latitude {self.lat_deg} outside [-90, 90]")
        if not -180.0 <= self.lon_deg < 360.0:
            raise ValidationError(f"longitude {self.lon_deg} outside [-180, 360)")


def parse_observations(lines: Iterable[str]) -> list[GravityObservation]:
    """Parse headered CSV gravity records.

    Parameters
    ----------
    lines : iterable of str
        Text lines (an open file object works). The first non-empty line
        must be the header ``lat_deg,lon_deg,height_m,gravity_mgal``.
        Decimal separator is ``.``; LF and CRLF both accepted.

    Returns
    -------
    list of GravityObservation, in file order.

    Raises
    ------
    ParseError
        Missing/wrong header or malformed record (carries line number).
    ValidationError
        A record parses but violates field invariants.
    """
    observations: list[GravityObservation] = []
    header_seen = False
    lineno = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip().lstrip("﻿")
        if not line:
            continue
        if not header_seen:
            if line != CSV_HEADER:
                raise ParseError(
                    f"expected header {CSV_HEADER!r}, got {line!r}", lineno
                )
            header_seen = True
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)}", lineno)
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise ParseError(f"non-numeric field in {line!r}", lineno) from None
        try:
            observations.append(GravityObservation(*values))
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    if not header_seen:
        raise ParseError("empty input, header line missing", max(lineno, 1))
    return observations


def serialize_observations(observations: Iterable[GravityObservation]) -> str:
    """Inverse of :func:`parse_observations`; floats keep full precision."""
    rows = [CSV_HEADER]
    for obs in observations:
        rows.append(
            f"{obs.lat_deg!r},{obs.lon_deg!r},{obs.height_m!r},{obs.gravity_mgal!r}"
        )
    return "\n".join(rows) + "\n"


def geodetic_to_cartesian(lat_deg, lon_deg, height_m, ellipsoid: Ellipsoid = WGS84):
    """Geodetic coordinates to Earth-centered Cartesian, in meters.

    Uses the standard map on the reference ellipsoid: with prime-vertical
    radius N = a / sqrt(1 - e^2 sin^2(lat)),

        x = (N + h) cos(lat) cos(lon)
        y = (N + h) cos(lat) sin(lon)
        z = (N (1 - e^2) + h) sin(lat)

    Accepts scalars or arrays (broadcast together); returns an array with
    a trailing axis of length 3.
    """
    lat = np.radians(np.asarray(lat_deg, dtype=float))
    lon = np.radians(np.asarray(lon_deg, dtype=float))
    h = np.asarray(height_m, dtype=float)
    sin_lat = np.sin(lat)
    cos_lat = np.cos(lat)
    n = ellipsoid.semi_major_m / np.sqrt(1.0 - ellipsoid.e2 * sin_lat**2)
    x = (n + h) * cos_lat * np.cos(lon)
    y = (n + h) * cos_lat * np.sin(lon)
    z = (n * (1.0 - ellipsoid.e2) + h) * sin_lat
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


def cartesian_to_geodetic(xyz, ellipsoid: Ellipsoid = WGS84, max_iter: int = 30):
    """Invert :func:`geodetic_to_cartesian` by fixed-point iteration on latitude.

    Returns ``(lat_deg, lon_deg, height_m)`` arrays. Converges well below
    1e-9 degrees / 1e-4 m for points within a few hundred km of the
    ellipsoid surface.
    """
    xyz = np.asarray(xyz, dtype=float)
    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    a = ellipsoid.semi_major_m
    e2 = ellipsoid.e2
    lon = np.arctan2(y, x)
    p = np.hypot(x, y)
    lat = np.arctan2(z, p * (1.0 - e2))
    n = np.full_like(p, a)
    for _ in range(max_iter):
        sin_lat = np.sin(lat)
        n = a / np.sqrt(1.0 - e2 * sin_lat**2)
        new_lat = np.arctan2(z + e2 * n * sin_lat, p)
        if np.all(np.abs(new_lat - lat) < 1e-14):
            lat = new_lat
            break
        lat = new_lat
    sin_lat = np.sin(lat)
    cos_lat = np.cos(lat)
    n = a / np.sqrt(1.0 - e2 * sin_lat**2)
    # near the poles p/cos(lat) is ill-posed; use the z relation there
    polar = np.abs(cos_lat) < 1e-10
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(
            polar,
            np.abs(z) - ellipsoid.semi_minor_m,
            p / np.where(polar, 1.0, cos_lat) - n,
        )
    return np.degrees(lat), np.degrees(lon), h


@dataclass(frozen=True)
class GeoBoundingBox:
    """Geographic rectangle used to pick interpolation (query) points."""

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self):
        if self.lat_min >= self.lat_max or self.lon_min >= self.lon_max:
            raise ConfigError("bounding box must have positive extent")

    def contains(self, lat_deg, lon_deg):
        lat = np.asarray(lat_deg)
        lon = np.asarray(lon_deg)
        return (
            (lat >= self.lat_min)
            & (lat <= self.lat_max)
            & (lon >= self.lon_min)
            & (lon <= self.lon_max)
        )


QuerySelector = Union[Sequence[int], np.ndarray, GeoBoundingBox]


@dataclass(frozen=True)
class Dataset:
    """Known (support) points and held-out interpolation (query) points.

    Coordinates are Earth-centered Cartesian meters, shape (N, 3); values
    are observed gravity in mGal, shape (N,). The geodetic arrays hold
    (lat_deg, lon_deg) rows and are required only by the
    spherical-harmonic basis; datasets built directly from Cartesian
    points may leave them ``None``.
    """

    known_xyz: np.ndarray
    known_values: np.ndarray
    query_xyz: np.ndarray
    query_values: np.ndarray
    known_latlon_deg: np.ndarray | None = None
    query_latlon_deg: np.ndarray | None = None
    query_orig_indices: np.ndarray | None = None

    def __post_init__(self):
        if len(self.known_xyz) == 0:
            raise ConfigError("dataset has no known points")
        if len(self.known_xyz) != len(self.known_values):
            raise ValueError("known coordinate/value lengths differ")
        if len(self.query_xyz) != len(self.query_values):
            raise ValueError("query coordinate/value lengths differ")

    @property
    def n_known(self) -> int:
        return len(self.known_xyz)

    @property
    def n_queries(self) -> int:
        return len(self.query_xyz)


def _selector_to_indices(
    observations: Sequence[GravityObservation], selector: QuerySelector
) -> np.ndarray:
    if isinstance(selector, GeoBoundingBox):
        lat = np.array([o.lat_deg for o in observations])
        lon = np.array([o.lon_deg for o in observations])
        return np.flatnonzero(selector.contains(lat, lon))
    indices = np.asarray(selector, dtype=np.int64)
    if indices.ndim != 1:
        raise ConfigError("query index selector must be one-dimensional")
    if len(np.unique(indices)) != len(indices):
        raise ConfigError("query index selector contains duplicates")
    if len(indices) and (indices.min() < 0 or indices.max() >= len(observations)):
        raise ConfigError("query index out of range")
    return np.sort(indices)


def split_dataset(
    observations: Sequence[GravityObservation],
    query_selector: QuerySelector,
    ellipsoid: Ellipsoid = WGS84,
) -> Dataset:
    """Split observations into known points and held-out query points.

    Parameters
    ----------
    observations : sequence of GravityObservation
    query_selector : index sequence or GeoBoundingBox
        Which observations become interpolation (query) points; the rest
        remain known points.
    ellipsoid : Ellipsoid
        Used for the geodetic-to-Cartesian conversion of every point.

    Raises
    ------
    ConfigError
        Empty selection, full selection, or invalid index list.
    """
    query_idx = _selector_to_indices(observations, query_selector)
    if len(query_idx) == 0:
        raise ConfigError("query selection is empty")
    if len(query_idx) >= len(observations):
        raise ConfigError("query selection leaves no known points")

    lat = np.array([o.lat_deg for o in observations])
    lon = np.array([o.lon_deg for o in observations])
    height = np.array([o.height_m for o in observations])
    values = np.array([o.gravity_mgal for o in observations])
    xyz = geodetic_to_cartesian(lat, lon, height, ellipsoid)

    mask = np.zeros(len(observations), dtype=bool)
    mask[query_idx] = True
    dataset = Dataset(
        known_xyz=xyz[~mask],
        known_values=values[~mask],
        query_xyz=xyz[mask],
        query_values=values[mask],
        known_latlon_deg=np.column_stack([lat[~mask], lon[~mask]]),
        query_latlon_deg=np.column_stack([lat[mask], lon[mask]]),
        query_orig_indices=query_idx,
    )
    _warn_on_poor_coverage(dataset)
    return dataset


def _warn_on_poor_coverage(dataset: Dataset) -> None:
    """Log a warning for query points far outside the known-point cloud.

    A query whose nearest known point is beyond twice the known set's own
    nearest-neighbor spacing is likely not surrounded by support points.
    No error is raised; the interpolation methods remain defined.
    """
    from .neighbors import build_index  # local import, avoids cycle

    if dataset.n_queries == 0 or dataset.n_known < 2:
        return
    index = build_index(dataset.known_xyz)
    # distance from each known point to its nearest *other* known point
    d_known, _ = index.tree.query(dataset.known_xyz, k=2)
    spacing = float(np.max(d_known[:, 1]))
    d_query, _ = index.tree.query(dataset.query_xyz, k=1)
    worst = float(np.max(d_query))
    if spacing > 0 and worst > 2.0 * spacing:
        n_far = int(np.count_nonzero(d_query > 2.0 * spacing))
        logger.warning(
            "%d query point(s) lie farther than twice the known-point "
            "spacing from any known point (worst %.1f m vs spacing %.1f m); "
            "they may not be surrounded by support points",
            n_far,
            worst,
            spacing,
        )


def surface_band_ok(
    xyz, ellipsoid: Ellipsoid = WGS84, band_m: float = 15000.0
) -> np.ndarray:
    """Sanity mask: point norms within ``band_m`` of the ellipsoid radii.

    Valid surface observations should land inside this band; synthetic
    or unit-test geometry need not.
    """
    norms = np.linalg.norm(np.asarray(xyz, dtype=float), axis=-1)
    lo = ellipsoid.semi_minor_m - band_m
    hi = ellipsoid.semi_major_m + band_m
    return (norms >= lo) & (norms <= hi)
