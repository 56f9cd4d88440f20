"""Interpolate gravity at one point with every local method.

Shows the shared stencil machinery (k-nearest neighbors, the scaling
parameter) and compares the square-system moving-least-squares solve
against the three spherical kernel families at a single query point.
"""

import numpy as np

from _synthetic import make_observations
from gravinterp import (
    BasisSpec,
    ConditioningError,
    KernelSpec,
    WeightSpec,
    build_index,
    cssrbf_interpolate,
    fill_distance,
    imls_interpolate,
    k_nearest,
    mls_approximate,
    split_dataset,
)

dataset = split_dataset(make_observations(count=800), np.arange(0, 800, 8))
index = build_index(dataset.known_xyz)

# one scale parameter for the whole run: the farthest any query point
# sits from its nearest known point
ell = fill_distance(index, dataset.query_xyz)
print(f"scale parameter ell = {ell / 1e3:.2f} km")

qi = 7
query = dataset.query_xyz[qi]
truth = dataset.query_values[qi]
print(f"query point #{qi}: responds {truth:.3f} mGal in the synthetic model\n")

# interpolating moving least squares: neighbor count equals basis size
for family in ("planar", "quadratic", "cubic"):
    spec = BasisSpec.monomial(family)
    neighbors = k_nearest(index, query, spec.size)
    value = imls_interpolate(query, neighbors, dataset, spec, ell)
    print(f"imls {family:9s} (n={spec.size:2d}): {value:12.3f} mGal "
          f"(error {value - truth:+9.4f})")

# spherical harmonics use geodetic coordinates instead of scaled monomials
spec = BasisSpec.spherical_harmonics(2)
neighbors = k_nearest(index, query, spec.size)
value = imls_interpolate(query, neighbors, dataset, spec, ell,
                         query_latlon_deg=dataset.query_latlon_deg[qi])
print(f"imls sph J=2  (n={spec.size:2d}): {value:12.3f} mGal "
      f"(error {value - truth:+9.4f})")

# the weighted variant over a larger stencil (approximates, does not
# interpolate)
spec = BasisSpec.monomial("quadratic")
neighbors = k_nearest(index, query, 16)
value = mls_approximate(query, neighbors, dataset, spec, WeightSpec(), ell)
print(f"mls quadratic (n=16): {value:12.3f} mGal (error {value - truth:+9.4f})\n")

# spherical radial basis kernels on the same stencils; wide stencils at
# low band parameter can be rejected by the conditioning gate
for family in ("poisson", "singularity", "logarithmic"):
    for h in (0.3, 0.9):
        kernel = KernelSpec(family=family, h=h)
        for n in (4, 20):
            neighbors = k_nearest(index, query, n)
            try:
                value = cssrbf_interpolate(query, neighbors, dataset, kernel)
                note = f"{value:12.3f} mGal (error {value - truth:+9.4f})"
            except ConditioningError as exc:
                note = f"rejected by the gate (rcond={exc.rcond:.1e})"
            print(f"cssrbf {family:11s} h={h} n={n:2d}: {note}")
