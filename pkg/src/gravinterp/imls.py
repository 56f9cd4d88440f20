"""Interpolating and weighted moving-least-squares local solves.

The interpolating path (IMLS) uses exactly as many neighbors as basis
functions. With B the square matrix whose row k is the basis row at
neighbor k, the implementation solves B c = F and returns
basis_row(query) . c, which interpolates the neighbor values exactly.
(Equivalently: solve B^T a = basis_row(query) and return a . F; the two
forms agree and the first is what runs.)

The weighted path (MLS) solves the normal equations
(B^T W B) alpha = B^T W F over n >= m neighbors with a compactly
supported weight, and returns basis_row(query) . alpha. It exists for
coverage and testing; the benchmark pipeline runs the square IMLS path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec, monomial_row, scale_coordinates, spherical_harmonic_row
from .errors import ConditioningError, ConfigError, DegenerateScaleError
from .geodata import Dataset
from .neighbors import NeighborSet
from .solvers import RCOND_MIN_DEFAULT, solve_gated

__all__ = ["WeightSpec", "weight", "imls_interpolate", "mls_approximate"]

WEIGHT_SHAPES = ("gaussian", "spline", "inverse_distance")

# the weight of the farthest neighbor is exactly zero (H(0) = 0), so the
# weighted path inflates delta by this factor to keep all n weights positive
_MLS_DELTA_INFLATION = 1.0 + 1e-6


@dataclass(frozen=True)
class WeightSpec:
    """Compactly supported weight profile w = H(1 - r) Psi(r).

    Shapes: ``gaussian`` Psi(r) = exp(-(r/c)^2); ``spline`` the Wendland
    C2 function (1-r)^4 (4r+1); ``inverse_distance`` Psi(r) = 1/(r+eps).
    """

    shape: str = "gaussian"
    gaussian_c: float = 0.4
    inverse_eps: float = 1e-9

    def __post_init__(self):
        if self.shape not in WEIGHT_SHAPES:
            raise ConfigError(f"unknown weight shape {self.shape!r}")
        if self.gaussian_c <= 0 or self.inverse_eps <= 0:
            raise ConfigError("weight parameters must be positive")

    def profile(self, r: np.ndarray) -> np.ndarray:
        """Psi(r) on [0, 1], without the Heaviside support factor."""
        if self.shape == "gaussian":
            return np.exp(-((r / self.gaussian_c) ** 2))
        if self.shape == "spline":
            return (1.0 - r) ** 4 * (4.0 * r + 1.0)
        return 1.0 / (r + self.inverse_eps)


def weight(query, neighbor, delta: float, spec: WeightSpec) -> float:
    """Weight of one neighbor: H(1 - r) Psi(r) with r = |q - nbr| / delta.

    Zero for r >= 1 (H(0) = 0 by convention), so support is the open
    ball of radius delta.
    """
    if not delta > 0:
        raise DegenerateScaleError(f"delta must be > 0, got {delta}")
    q = np.asarray(query, dtype=float)
    nb = np.asarray(neighbor, dtype=float)
    r = float(np.linalg.norm(q - nb)) / delta
    if r >= 1.0:
        return 0.0
    return float(spec.profile(np.asarray(r)))


def _basis_rows(
    spec: BasisSpec,
    xyz: np.ndarray,
    latlon_deg: np.ndarray | None,
    reference_xyz: np.ndarray,
    ell: float,
) -> np.ndarray:
    """Basis rows for a stack of points, (N, 3) -> (N, m)."""
    if spec.is_spherical:
        if latlon_deg is None:
            raise ConfigError(
                "spherical-harmonic basis needs geodetic coordinates; "
                "the dataset or query does not carry them"
            )
        ll = np.radians(np.asarray(latlon_deg, dtype=float))
        return spherical_harmonic_row(ll[..., 0], ll[..., 1], spec.degree)
    scaled = scale_coordinates(xyz, reference_xyz, ell)
    return monomial_row(scaled, spec.degree)


def _local_inputs(query_xyz, neighbors: NeighborSet, dataset: Dataset):
    q = np.asarray(query_xyz, dtype=float)
    nbr_xyz = dataset.known_xyz[neighbors.indices]
    f = dataset.known_values[neighbors.indices]
    nbr_latlon = (
        dataset.known_latlon_deg[neighbors.indices]
        if dataset.known_latlon_deg is not None
        else None
    )
    return q, nbr_xyz, f, nbr_latlon


def imls_interpolate(
    query_xyz,
    neighbors: NeighborSet,
    dataset: Dataset,
    spec: BasisSpec,
    ell: float,
    *,
    query_latlon_deg=None,
    rcond_min: float = RCOND_MIN_DEFAULT,
) -> float:
    """Interpolate gravity at a query point from its neighbor set.

    Parameters
    ----------
    query_xyz : (3,) array
        Cartesian query position, meters.
    neighbors : NeighborSet
        Exactly ``spec.size`` nearest known points.
    dataset : Dataset
        Supplies neighbor coordinates and values.
    spec : BasisSpec
    ell : float
        Global coordinate scale; unused by the spherical-harmonic family.
    query_latlon_deg : (lat_deg, lon_deg), optional
        Required for the spherical-harmonic family.
    rcond_min : float
        Reciprocal-condition gate for the square solve.

    Returns
    -------
    float, interpolated gravity in mGal.

    Raises
    ------
    ConditioningError
        Singular or ill-conditioned basis matrix.
    """
    if len(neighbors) != spec.size:
        raise ValueError(
            f"{spec.family} basis needs exactly {spec.size} neighbors, "
            f"got {len(neighbors)}"
        )
    q, nbr_xyz, f, nbr_latlon = _local_inputs(query_xyz, neighbors, dataset)
    reference = nbr_xyz[0]
    b = _basis_rows(spec, nbr_xyz, nbr_latlon, reference, ell)
    coeffs, _ = solve_gated(b, f, rcond_min)
    query_row = _basis_rows(spec, q, query_latlon_deg, reference, ell)
    return float(query_row @ coeffs)


def mls_approximate(
    query_xyz,
    neighbors: NeighborSet,
    dataset: Dataset,
    spec: BasisSpec,
    wspec: WeightSpec,
    ell: float,
    *,
    query_latlon_deg=None,
    rcond_min: float = RCOND_MIN_DEFAULT,
) -> float:
    """Weighted moving-least-squares value at a query point.

    Needs at least ``spec.size`` neighbors, with at least that many
    carrying nonzero weight. The support radius is the neighbor set's
    delta, slightly inflated so the farthest neighbor keeps a positive
    weight.
    """
    if len(neighbors) < spec.size:
        raise ValueError(
            f"{spec.family} basis needs at least {spec.size} neighbors, "
            f"got {len(neighbors)}"
        )
    q, nbr_xyz, f, nbr_latlon = _local_inputs(query_xyz, neighbors, dataset)
    delta = neighbors.delta * _MLS_DELTA_INFLATION
    if not delta > 0:
        raise DegenerateScaleError("neighbor set has zero support radius")
    r = neighbors.distances / delta
    w = np.where(r < 1.0, wspec.profile(r), 0.0)
    if np.count_nonzero(w > 0) < spec.size:
        raise ConditioningError(rcond=0.0, size=spec.size)

    reference = nbr_xyz[0]
    b = _basis_rows(spec, nbr_xyz, nbr_latlon, reference, ell)
    bw = b * w[:, None]
    normal = b.T @ bw
    rhs = bw.T @ f
    alpha, _ = solve_gated(normal, rhs, rcond_min)
    query_row = _basis_rows(spec, q, query_latlon_deg, reference, ell)
    return float(query_row @ alpha)
