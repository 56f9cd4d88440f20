"""Local meshless interpolation of scattered gravity observations.

Two interpolants over the same n-nearest-neighbor stencils:

* interpolating moving least squares (IMLS) with monomial or surface
  spherical-harmonic bases, and
* spherical radial basis kernels (Poisson, singularity, logarithmic).

Plus the supporting machinery: geodetic ingest and coordinate
conversion, exact k-nearest-neighbor search, and a benchmark pipeline
that sweeps parameters and reports residual standard deviations.
"""

from .basis import BasisSpec, basis_count, legendre, monomial_row, scale_coordinates, spherical_harmonic_row
from .bench import (
    DEFAULT_H_GRID,
    QueryResidual,
    ResidualStats,
    RunConfig,
    SweepResult,
    emit_report,
    parse_sweep_csv,
    residual_sigma,
    run_single,
    run_sweep,
)
from .cssrbf import EARTH_RADIUS_M, KernelSpec, cssrbf_interpolate, kernel_value
from .errors import (
    ConditioningError,
    ConfigError,
    DegenerateScaleError,
    GravinterpError,
    KernelDomainError,
    ParseError,
    StatisticsError,
    ValidationError,
)
from .geodata import (
    WGS84,
    Dataset,
    Ellipsoid,
    GeoBoundingBox,
    GravityObservation,
    cartesian_to_geodetic,
    geodetic_to_cartesian,
    parse_observations,
    serialize_observations,
    split_dataset,
)
from .imls import WeightSpec, imls_interpolate, mls_approximate, weight
from .neighbors import NeighborSet, SpatialIndex, build_index, fill_distance, k_nearest
from .solvers import RCOND_MIN_DEFAULT

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "basis_count",
    "legendre",
    "monomial_row",
    "scale_coordinates",
    "spherical_harmonic_row",
    "DEFAULT_H_GRID",
    "QueryResidual",
    "ResidualStats",
    "RunConfig",
    "SweepResult",
    "emit_report",
    "parse_sweep_csv",
    "residual_sigma",
    "run_single",
    "run_sweep",
    "EARTH_RADIUS_M",
    "KernelSpec",
    "cssrbf_interpolate",
    "kernel_value",
    "ConditioningError",
    "ConfigError",
    "DegenerateScaleError",
    "GravinterpError",
    "KernelDomainError",
    "ParseError",
    "StatisticsError",
    "ValidationError",
    "WGS84",
    "Dataset",
    "Ellipsoid",
    "GeoBoundingBox",
    "GravityObservation",
    "cartesian_to_geodetic",
    "geodetic_to_cartesian",
    "parse_observations",
    "serialize_observations",
    "split_dataset",
    "WeightSpec",
    "imls_interpolate",
    "mls_approximate",
    "weight",
    "NeighborSet",
    "SpatialIndex",
    "build_index",
    "fill_distance",
    "k_nearest",
    "RCOND_MIN_DEFAULT",
    "__version__",
]
