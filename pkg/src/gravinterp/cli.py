"""The ``interp`` command line tool.

Two subcommands over headered gravity CSV input
(``lat_deg,lon_deg,height_m,gravity_mgal``):

* ``interp run``   -- evaluate one (method, basis/kernel, n, h) cell,
* ``interp sweep`` -- evaluate a grid of cells.

Both write CSV outputs into ``--out``. Exit codes: 0 ok, 2 configuration
error, 3 run with more than 10% failed queries.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from .basis import BasisSpec
from .bench import RunConfig, cell_label, emit_report, run_single, run_sweep
from .cssrbf import EARTH_RADIUS_M, KERNEL_FAMILIES
from .errors import ConfigError, GravinterpError
from .geodata import WGS84, Ellipsoid, GeoBoundingBox
from .imls import WEIGHT_SHAPES, WeightSpec
from .solvers import RCOND_MIN_DEFAULT

EXIT_CONFIG_ERROR = 2
EXIT_EXCESSIVE_FAILURES = 3

_KERNEL_ALIASES = {"log": "logarithmic"}


def _parse_basis(text: str) -> BasisSpec:
    if text.startswith("sph:"):
        try:
            degree = int(text.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad spherical-harmonic degree in {text!r}") from None
        return BasisSpec.spherical_harmonics(degree)
    return BasisSpec.monomial(text)


def _parse_queries(text: str) -> object:
    """``bbox:latmin,latmax,lonmin,lonmax`` or a path to an index file."""
    if text.startswith("bbox:"):
        parts = text[len("bbox:"):].split(",")
        if len(parts) != 4:
            raise ConfigError("bbox needs 4 values: latmin,latmax,lonmin,lonmax")
        try:
            lat_min, lat_max, lon_min, lon_max = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"non-numeric bbox bound in {text!r}") from None
        return GeoBoundingBox(lat_min, lat_max, lon_min, lon_max)
    path = Path(text)
    if not path.exists():
        raise ConfigError(f"query index file not found: {text}")
    indices: list[int] = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for field in line.replace(",", " ").split():
            try:
                indices.append(int(field))
            except ValueError:
                raise ConfigError(f"bad query index {field!r} in {text}") from None
    return np.asarray(indices, dtype=np.int64)


def _parse_float_grid(text: str) -> tuple[float, ...]:
    """Comma list (``0.1,0.5``) or ``start:stop:step`` inclusive range."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid {text!r} must be start:stop:step")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"non-numeric grid bound in {text!r}") from None
        if step <= 0 or stop < start:
            raise ConfigError(f"empty grid {text!r}")
        count = int(round((stop - start) / step)) + 1
        values = tuple(round(start + i * step, 12) for i in range(count))
        return tuple(v for v in values if v <= stop + 1e-12)
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(f"non-numeric grid value in {text!r}") from None


def _parse_int_list(text: str) -> tuple[int, ...]:
    """Comma list of ints; ``a-b`` expands to the inclusive range."""
    values: list[int] = []
    try:
        for field in text.split(","):
            field = field.strip()
            lo, sep, hi = field.partition("-")
            if sep and lo and hi:
                values.extend(range(int(lo), int(hi) + 1))
            else:
                values.append(int(field))
    except ValueError:
        raise ConfigError(f"bad integer list {text!r}") from None
    return tuple(values)


def _check_h(values) -> None:
    for h in values:
        if not 0.0 < h < 1.0:
            raise ConfigError(f"band parameter h must lie in (0, 1), got {h}")


_common_options = [
    click.option("--input", "input_path", required=True,
                 type=click.Path(exists=True, dir_okay=False),
                 help="Headered gravity CSV (lat_deg,lon_deg,height_m,gravity_mgal)."),
    click.option("--queries", "queries_spec", required=True,
                 help="Query split: an index file, or bbox:latmin,latmax,lonmin,lonmax."),
    click.option("--out", "out_dir", required=True,
                 type=click.Path(file_okay=False),
                 help="Output directory for result CSVs."),
    click.option("--ellipsoid-a", default=WGS84.semi_major_m, show_default=True,
                 type=float, help="Ellipsoid semi-major axis, meters."),
    click.option("--ellipsoid-invf", default=WGS84.inverse_flattening,
                 show_default=True, type=float, help="Inverse flattening."),
    click.option("--radius-R", "radius_r", default=EARTH_RADIUS_M, show_default=True,
                 type=float, help="Kernel sphere radius R, meters."),
    click.option("--rcond-min", default=RCOND_MIN_DEFAULT, show_default=True,
                 type=float, help="Reciprocal-condition gate for local solves."),
    click.option("--threads", default=1, show_default=True, type=int,
                 help="Worker threads for per-query evaluation."),
]


def _with_common_options(func):
    for option in reversed(_common_options):
        func = option(func)
    return func


@click.group()
def main():
    """Meshless gravity interpolation benchmark."""


@main.command()
@click.option("--method", required=True, type=click.Choice(["imls", "mls", "cssrbf"]))
@click.option("--basis", "basis_spec", default=None,
              help="planar | quadratic | cubic | sph:J  (imls/mls).")
@click.option("--kernel", default=None,
              type=click.Choice(["poisson", "singularity", "log", "logarithmic"]),
              help="Kernel family (cssrbf).")
@click.option("--h", "h_value", default=None, type=float,
              help="Band parameter in (0, 1) (cssrbf).")
@click.option("--n", "n_value", default=None, type=int,
              help="Neighbor count (cssrbf/mls; forced by the basis for imls).")
@click.option("--weight", default="gaussian", show_default=True,
              type=click.Choice(list(WEIGHT_SHAPES)), help="MLS weight profile.")
@_with_common_options
def run(method, basis_spec, kernel, h_value, n_value, weight,
        input_path, queries_spec, out_dir, ellipsoid_a, ellipsoid_invf,
        radius_r, rcond_min, threads):
    """Evaluate one configuration and write its residual file."""
    try:
        config = RunConfig(
            input_path=input_path,
            query_selector=_parse_queries(queries_spec),
            ellipsoid=Ellipsoid(ellipsoid_a, ellipsoid_invf),
            method=method,
            basis=_parse_basis(basis_spec) if basis_spec else None,
            kernel_family=_KERNEL_ALIASES.get(kernel, kernel),
            h=h_value,
            n=n_value,
            weight=WeightSpec(shape=weight),
            sphere_radius_m=radius_r,
            rcond_min=rcond_min,
            threads=threads,
        )
        if config.h is not None and not 0.0 < config.h < 1.0:
            raise ConfigError(f"band parameter h must lie in (0, 1), got {config.h}")
        result, residuals = run_single(config, out_dir=out_dir)
        emit_report([result], out_dir)
    except GravinterpError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)

    label = cell_label(result.method, result.family, result.n, result.h)
    sigma = "n/a" if result.sigma_mgal is None else f"{result.sigma_mgal:.6g} mGal"
    click.echo(f"{label}: sigma={sigma} failures={result.failures}/{len(residuals)}")
    if result.failures > 0.1 * len(residuals):
        click.echo("error: more than 10% of queries failed", err=True)
        sys.exit(EXIT_EXCESSIVE_FAILURES)


@main.command()
@click.option("--methods", default="imls,cssrbf", show_default=True,
              help="Comma list of sweep sections (imls, cssrbf).")
@click.option("--bases", default="planar,quadratic,cubic", show_default=True,
              help="Monomial IMLS families to sweep ('' to skip).")
@click.option("--sph-degrees", default="1-10", show_default=True,
              help="Spherical-harmonic degrees, e.g. 1-10 or 2,4 ('' to skip).")
@click.option("--kernels", default="poisson,singularity,log", show_default=True,
              help="Kernel families to sweep.")
@click.option("--n-grid", default="4,10,20", show_default=True,
              help="Neighbor counts for the kernel sweep.")
@click.option("--h-grid", default="0.05:0.95:0.05", show_default=True,
              help="Band-parameter grid: comma list or start:stop:step.")
@click.option("--residuals", "residual_files", is_flag=True,
              help="Also write residuals_<cell>.csv for every cell.")
@_with_common_options
def sweep(methods, bases, sph_degrees, kernels, n_grid, h_grid, residual_files,
          input_path, queries_spec, out_dir, ellipsoid_a, ellipsoid_invf,
          radius_r, rcond_min, threads):
    """Evaluate the full parameter grid and write sweep.csv."""
    try:
        h_values = _parse_float_grid(h_grid)
        _check_h(h_values)
        kernel_families = tuple(
            _KERNEL_ALIASES.get(k.strip(), k.strip())
            for k in kernels.split(",") if k.strip()
        )
        for family in kernel_families:
            if family not in KERNEL_FAMILIES:
                raise ConfigError(f"unknown kernel family {family!r}")
        config = RunConfig(
            input_path=input_path,
            query_selector=_parse_queries(queries_spec),
            ellipsoid=Ellipsoid(ellipsoid_a, ellipsoid_invf),
            sweep_methods=tuple(
                m.strip() for m in methods.split(",") if m.strip()
            ),
            monomial_families=tuple(
                b.strip() for b in bases.split(",") if b.strip()
            ),
            sph_degrees=_parse_int_list(sph_degrees) if sph_degrees else (),
            kernel_families=kernel_families,
            n_grid=_parse_int_list(n_grid),
            h_grid=h_values,
            sphere_radius_m=radius_r,
            rcond_min=rcond_min,
            threads=threads,
        )
        results = run_sweep(config, out_dir=out_dir,
                            write_residual_files=residual_files)
    except GravinterpError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)

    click.echo(f"wrote {len(results)} cells to {Path(out_dir) / 'sweep.csv'}")


if __name__ == "__main__":
    main()
