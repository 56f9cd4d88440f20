"""Spherical radial basis kernel interpolation on n-neighbor stencils.

Three kernel families parameterized by a band parameter h in (0, 1) and
a sphere radius R. With Q = |a|^2 |b|^2 + h^2 R^4 - 2 h R^2 (a . b):

* poisson:      (1/4pi) (|a|^2 |b|^2 - h^2 R^4) / Q^(3/2)
* singularity:  (1/2pi) Q^(-1/2)
* logarithmic:  (1/4pi R^2) ln(1 + 2 h R^2 / (sqrt(Q) + |a||b| - h R^2))

These kernels are strictly positive on the sphere; locality comes from
restricting each solve to the query's n nearest known points, not from
kernel support, so no truncation radius is applied. Points enter with
their true norms (geodetic heights perturb them), not projected onto the
sphere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, KernelDomainError
from .geodata import Dataset
from .neighbors import NeighborSet
from .solvers import RCOND_MIN_DEFAULT, solve_gated

__all__ = [
    "EARTH_RADIUS_M",
    "KERNEL_FAMILIES",
    "KernelSpec",
    "kernel_value",
    "cssrbf_interpolate",
]

EARTH_RADIUS_M = 6371000.0
KERNEL_FAMILIES = ("poisson", "singularity", "logarithmic")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus its band parameter h and sphere radius R."""

    family: str
    h: float
    radius_m: float = EARTH_RADIUS_M

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise ConfigError(f"unknown kernel family {self.family!r}")
        if not 0.0 < self.h < 1.0:
            raise ConfigError(f"band parameter h must lie in (0, 1), got {self.h}")
        if not self.radius_m > 0:
            raise ConfigError("sphere radius must be > 0")


def kernel_value(a, b, spec: KernelSpec):
    """Evaluate the kernel for point pairs.

    ``a`` and ``b`` are arrays with a trailing axis of length 3,
    broadcast together; the result drops that axis. Both points must
    have nonzero norm.

    Raises
    ------
    KernelDomainError
        Q <= 0 or a nonpositive logarithm argument; possible only for
        degenerate points or h outside (0, 1).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na2 = np.sum(a * a, axis=-1)
    nb2 = np.sum(b * b, axis=-1)
    if np.any(na2 == 0.0) or np.any(nb2 == 0.0):
        raise KernelDomainError("kernel points must have nonzero norm")
    dot = np.sum(a * b, axis=-1)
    h = spec.h
    r2 = spec.radius_m**2
    hr2 = h * r2
    q = na2 * nb2 + hr2 * hr2 - 2.0 * hr2 * dot
    if np.any(q <= 0.0):
        raise KernelDomainError(f"kernel quadratic form not positive (min {np.min(q)})")
    if spec.family == "poisson":
        return (na2 * nb2 - hr2 * hr2) / (4.0 * np.pi * q * np.sqrt(q))
    if spec.family == "singularity":
        return 1.0 / (2.0 * np.pi * np.sqrt(q))
    denom = np.sqrt(q) + np.sqrt(na2) * np.sqrt(nb2) - hr2
    arg = 1.0 + 2.0 * hr2 / denom
    if np.any(denom <= 0.0) or np.any(arg <= 0.0):
        raise KernelDomainError("logarithmic kernel argument not positive")
    return np.log(arg) / (4.0 * np.pi * r2)


def cssrbf_interpolate(
    query_xyz,
    neighbors: NeighborSet,
    dataset: Dataset,
    spec: KernelSpec,
    *,
    rcond_min: float = RCOND_MIN_DEFAULT,
) -> float:
    """Interpolate gravity at a query from its n-neighbor kernel system.

    Solves K c = F over the neighbor set, where K_ij is the kernel at
    neighbor pair (i, j), then returns sum_i c_i K(query, nbr_i). The
    kernel matrix is symmetric by construction; the solve goes through
    the shared conditioning gate (expected to trip as h -> 1 or for
    near-coincident stencils).
    """
    if len(neighbors) < 1:
        raise ValueError("neighbor set is empty")
    q = np.asarray(query_xyz, dtype=float)
    pts = dataset.known_xyz[neighbors.indices]
    f = dataset.known_values[neighbors.indices]
    k_matrix = kernel_value(pts[:, None, :], pts[None, :, :], spec)
    coeffs, _ = solve_gated(k_matrix, f, rcond_min)
    k_query = kernel_value(q, pts, spec)
    return float(k_query @ coeffs)
