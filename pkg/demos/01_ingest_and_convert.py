"""Ingest gravity observations, convert coordinates, split the dataset.

Walks through the data-handling layer: the headered CSV format, the
geodetic-to-Cartesian map on the WGS84 ellipsoid, the iterative inverse,
and the known/query split that the benchmark pipeline evaluates on.
"""

import io

import numpy as np

from _synthetic import make_observations
from gravinterp import (
    GeoBoundingBox,
    cartesian_to_geodetic,
    geodetic_to_cartesian,
    parse_observations,
    serialize_observations,
    split_dataset,
)

observations = make_observations(count=800)

# the library speaks one CSV dialect; serialize/parse round-trips exactly
text = serialize_observations(observations)
print("CSV header:", text.splitlines()[0])
print("first record:", text.splitlines()[1])
assert parse_observations(io.StringIO(text)) == observations

# geodetic -> Earth-centered Cartesian, WGS84 by default
first = observations[0]
xyz = geodetic_to_cartesian(first.lat_deg, first.lon_deg, first.height_m)
print(f"\n({first.lat_deg:.4f} deg, {first.lon_deg:.4f} deg, "
      f"{first.height_m:.1f} m) -> {np.round(xyz, 3)} m")
print(f"distance from Earth's center: {np.linalg.norm(xyz) / 1e3:.3f} km")

# the inverse recovers the geodetic coordinates to survey precision
lat2, lon2, h2 = cartesian_to_geodetic(xyz)
print(f"round trip error: {abs(lat2 - first.lat_deg):.2e} deg latitude, "
      f"{abs(h2 - first.height_m):.2e} m height")

# hold out a geographic window as interpolation (query) points
box = GeoBoundingBox(lat_min=-32.0, lat_max=-28.0, lon_min=23.0, lon_max=27.0)
dataset = split_dataset(observations, box)
print(f"\nbounding-box split: {dataset.n_known} known points, "
      f"{dataset.n_queries} query points")

# an explicit index list works as well
dataset = split_dataset(observations, np.arange(0, 800, 8))
print(f"index split:        {dataset.n_known} known points, "
      f"{dataset.n_queries} query points")
