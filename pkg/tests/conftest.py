"""Shared synthetic-data builders for the test suite."""

import numpy as np
import pytest

from gravinterp.geodata import Dataset, geodetic_to_cartesian


def smooth_gravity_field(lat_deg, lon_deg, height_m):
    """A smooth, realistic-magnitude synthetic gravity field, mGal."""
    lat = np.radians(np.asarray(lat_deg, dtype=float))
    lon = np.radians(np.asarray(lon_deg, dtype=float))
    h = np.asarray(height_m, dtype=float)
    return (
        978650.0
        + 420.0 * np.sin(2.0 * lat)
        + 160.0 * np.cos(3.0 * lon) * np.cos(lat)
        - 0.3086 * h * 1e-3 * 100.0  # mild height trend
    )


def make_geodetic_cloud(rng, count, lat_range=(-45.0, -15.0),
                        lon_range=(10.0, 40.0), height_range=(0.0, 2500.0)):
    lat = rng.uniform(*lat_range, size=count)
    lon = rng.uniform(*lon_range, size=count)
    height = rng.uniform(*height_range, size=count)
    return lat, lon, height


def make_synthetic_dataset(rng, n_known=400, n_query=50, **cloud_kwargs) -> Dataset:
    """A realistic synthetic dataset with Cartesian + geodetic coordinates."""
    lat, lon, height = make_geodetic_cloud(rng, n_known + n_query, **cloud_kwargs)
    values = smooth_gravity_field(lat, lon, height)
    xyz = geodetic_to_cartesian(lat, lon, height)
    k = slice(0, n_known)
    q = slice(n_known, n_known + n_query)
    return Dataset(
        known_xyz=xyz[k],
        known_values=values[k],
        query_xyz=xyz[q],
        query_values=values[q],
        known_latlon_deg=np.column_stack([lat[k], lon[k]]),
        query_latlon_deg=np.column_stack([lat[q], lon[q]]),
    )


def write_synthetic_csv(path, rng, count=550, **cloud_kwargs):
    """Write a headered synthetic observation CSV; returns the row count."""
    lat, lon, height = make_geodetic_cloud(rng, count, **cloud_kwargs)
    values = smooth_gravity_field(lat, lon, height)
    lines = ["lat_deg,lon_deg,height_m,gravity_mgal"]
    for row in zip(lat, lon, height, values):
        lines.append(",".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return count


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
