"""Basis-function rows for the moving-least-squares interpolants.

Two families:

* scaled monomials of total degree v = 1, 2, 3 ("planar", "quadratic",
  "cubic") evaluated on nondimensionalized local coordinates, and
* surface spherical harmonics up to degree J, evaluated on geodetic
  (latitude, longitude).

Row term order is frozen: downstream square solves require the query row
and the neighbor rows to share column order exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateScaleError

__all__ = [
    "MONOMIAL_FAMILIES",
    "SPHERICAL_HARMONICS",
    "BasisSpec",
    "basis_count",
    "scale_coordinates",
    "monomial_row",
    "legendre",
    "legendre_table",
    "spherical_harmonic_row",
]

MONOMIAL_FAMILIES = {"planar": 1, "quadratic": 2, "cubic": 3}
SPHERICAL_HARMONICS = "spherical_harmonics"


def basis_count(v: int) -> int:
    """Number of monomials x^i y^j z^k with i + j + k <= v.

    Closed form (v+1)(v+2)(v+3)/6: 4, 10, 20 for v = 1, 2, 3.
    """
    if v < 0:
        raise ValueError("degree must be >= 0")
    return (v + 1) * (v + 2) * (v + 3) // 6


@dataclass(frozen=True)
class BasisSpec:
    """Algebraic configuration of one basis family.

    ``degree`` is the total monomial degree v for the monomial families
    and the maximum harmonic degree J for spherical harmonics. The
    required neighbor count equals the basis size: basis_count(v) for
    monomials, (J+1)^2 for spherical harmonics.
    """

    family: str
    degree: int

    def __post_init__(self):
        if self.family in MONOMIAL_FAMILIES:
            if self.degree != MONOMIAL_FAMILIES[self.family]:
                raise ConfigError(
                    f"{self.family} basis implies degree "
                    f"{MONOMIAL_FAMILIES[self.family]}, got {self.degree}"
                )
        elif self.family == SPHERICAL_HARMONICS:
            if self.degree < 0:
                raise ConfigError("spherical-harmonic degree must be >= 0")
        else:
            raise ConfigError(f"unknown basis family {self.family!r}")

    @classmethod
    def monomial(cls, family: str) -> "BasisSpec":
        if family not in MONOMIAL_FAMILIES:
            raise ConfigError(f"unknown monomial family {family!r}")
        return cls(family=family, degree=MONOMIAL_FAMILIES[family])

    @classmethod
    def spherical_harmonics(cls, max_degree: int) -> "BasisSpec":
        return cls(family=SPHERICAL_HARMONICS, degree=max_degree)

    @property
    def size(self) -> int:
        """Basis length, equal to the neighbor count the square solve needs."""
        if self.family == SPHERICAL_HARMONICS:
            return (self.degree + 1) ** 2
        return basis_count(self.degree)

    @property
    def is_spherical(self) -> bool:
        return self.family == SPHERICAL_HARMONICS


def scale_coordinates(points, reference, ell: float):
    """Nondimensionalize coordinates: (p - reference) / ell.

    ``reference`` is the nearest neighbor of the query's neighbor set,
    applied uniformly to the query and all its neighbors so the local
    coordinates stay O(1).
    """
    if not ell > 0:
        raise DegenerateScaleError(f"scale parameter must be > 0, got {ell}")
    p = np.asarray(points, dtype=float)
    r = np.asarray(reference, dtype=float)
    return (p - r) / ell


def monomial_row(coords, v: int) -> np.ndarray:
    """Monomial basis row(s) of total degree <= v at scaled coordinates.

    ``coords`` is (..., 3); the result appends an axis of length
    basis_count(v). Term order is fixed:

    v=1: 1, x, y, z
    v=2: ... x^2, y^2, z^2, xy, xz, yz
    v=3: ... x^3, y^3, z^3, x^2 y, x y^2, x^2 z, x z^2, y^2 z, y z^2, xyz
    """
    c = np.asarray(coords, dtype=float)
    if c.shape[-1] != 3:
        raise ValueError("coords must have a trailing axis of length 3")
    x, y, z = c[..., 0], c[..., 1], c[..., 2]
    one = np.ones_like(x)
    cols = [one, x, y, z]
    if v >= 2:
        cols += [x * x, y * y, z * z, x * y, x * z, y * z]
    if v == 3:
        cols += [
            x * x * x,
            y * y * y,
            z * z * z,
            x * x * y,
            x * y * y,
            x * x * z,
            x * z * z,
            y * y * z,
            y * z * z,
            x * y * z,
        ]
    if v not in (1, 2, 3):
        raise ValueError(f"monomial degree must be 1, 2, or 3, got {v}")
    return np.stack(cols, axis=-1)


def legendre_table(max_degree: int, t) -> np.ndarray:
    """Fully-normalized associated Legendre functions up to ``max_degree``.

    Geodesy (4-pi) normalization without the Condon-Shortley phase,
    computed by the standard forward column recursion: sectoral seed,
    then increasing degree at fixed order. Stable for the degrees used
    here (J <= ~50).

    Parameters
    ----------
    max_degree : int
    t : float or ndarray
        sin(latitude), in [-1, 1].

    Returns
    -------
    ndarray of shape (max_degree+1, max_degree+1) + t.shape; entry
    [i, j] holds P̄_ij(t), zero for j > i.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise ValueError("t must lie in [-1, 1]")
    j_max = max_degree
    u = np.sqrt(np.maximum(0.0, (1.0 - t) * (1.0 + t)))
    p = np.zeros((j_max + 1, j_max + 1) + t.shape)
    p[0, 0] = 1.0
    for m in range(1, j_max + 1):
        factor = math.sqrt(3.0) if m == 1 else math.sqrt((2 * m + 1) / (2.0 * m))
        p[m, m] = factor * u * p[m - 1, m - 1]
    for m in range(0, j_max):
        p[m + 1, m] = math.sqrt(2 * m + 3) * t * p[m, m]
        for n in range(m + 2, j_max + 1):
            a = math.sqrt((2 * n - 1) * (2 * n + 1) / ((n - m) * (n + m)))
            b = math.sqrt(
                (2 * n + 1)
                * (n + m - 1)
                * (n - m - 1)
                / ((n - m) * (n + m) * (2 * n - 3))
            )
            p[n, m] = a * t * p[n - 1, m] - b * p[n - 2, m]
    return p


def legendre(i: int, j: int, t):
    """Fully-normalized associated Legendre function P̄_ij(t).

    ``t`` is sin(latitude) in [-1, 1]; requires 0 <= j <= i.
    """
    if j < 0 or j > i:
        raise ValueError(f"order j={j} outside [0, degree i={i}]")
    return legendre_table(i, t)[i, j]


def spherical_harmonic_row(phi, lam, max_degree: int) -> np.ndarray:
    """Surface spherical-harmonic basis row(s) at geodetic angles.

    Parameters
    ----------
    phi, lam : float or ndarray
        Latitude and longitude in radians (broadcast together).
    max_degree : int
        Maximum degree J; row length is (J+1)^2.

    Term order: all cosine terms P̄_ij(sin phi) cos(j lam) for
    i = 0..J, j = 0..i, then all sine terms P̄_ij(sin phi) sin(j lam)
    for i = 0..J, j = 1..i.
    """
    phi = np.asarray(phi, dtype=float)
    lam = np.asarray(lam, dtype=float)
    phi, lam = np.broadcast_arrays(phi, lam)
    table = legendre_table(max_degree, np.sin(phi))
    cols = []
    for i in range(max_degree + 1):
        for j in range(i + 1):
            cols.append(table[i, j] * np.cos(j * lam))
    for i in range(max_degree + 1):
        for j in range(1, i + 1):
            cols.append(table[i, j] * np.sin(j * lam))
    return np.stack(cols, axis=-1)
