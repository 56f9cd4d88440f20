"""Synthetic southern-Africa-like gravity observations for the demos."""

import numpy as np

from gravinterp import GravityObservation


def smooth_field(lat_deg, lon_deg, height_m):
    """A smooth gravity model at realistic absolute magnitudes, mGal."""
    lat = np.radians(np.asarray(lat_deg, dtype=float))
    lon = np.radians(np.asarray(lon_deg, dtype=float))
    return (
        978650.0
        + 420.0 * np.sin(2.0 * lat)
        + 160.0 * np.cos(3.0 * lon) * np.cos(lat)
        - 0.03086 * np.asarray(height_m, dtype=float)
    )


def make_observations(count=800, seed=44):
    rng = np.random.default_rng(seed)
    lat = rng.uniform(-36.0, -24.0, size=count)
    lon = rng.uniform(19.0, 31.0, size=count)
    height = rng.uniform(0.0, 2500.0, size=count)
    gravity = smooth_field(lat, lon, height)
    return [
        GravityObservation(float(a), float(o), float(h), float(g))
        for a, o, h, g in zip(lat, lon, height, gravity)
    ]
