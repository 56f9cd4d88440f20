"""Evaluation pipeline: neighbor search, local solves, residual spread.

One *cell* is a (method, family, n, h) configuration evaluated over all
query points of a dataset: for each query, find its n nearest known
points, run the local solve, and take residual = interpolated -
observed. Failed solves (conditioning gate, kernel domain, degenerate
scale) are counted and excluded from the spread; sigma is the sample
standard deviation of the surviving residuals about their mean, and the
mean is reported alongside.

Per-query work is pure and runs on a configurable thread pool; results
are aggregated in query order, so outputs are identical for any worker
count.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .basis import BasisSpec
from .cssrbf import EARTH_RADIUS_M, KERNEL_FAMILIES, KernelSpec, cssrbf_interpolate
from .errors import (
    ConditioningError,
    ConfigError,
    DegenerateScaleError,
    KernelDomainError,
    StatisticsError,
)
from .geodata import WGS84, Dataset, Ellipsoid, QuerySelector, parse_observations, split_dataset
from .imls import WeightSpec, imls_interpolate, mls_approximate
from .neighbors import SpatialIndex, build_index, fill_distance, k_nearest
from .solvers import RCOND_MIN_DEFAULT

__all__ = [
    "DEFAULT_H_GRID",
    "METHODS",
    "ResidualStats",
    "SweepResult",
    "QueryResidual",
    "RunConfig",
    "residual_sigma",
    "run_single",
    "run_sweep",
    "emit_report",
    "write_residuals",
    "parse_sweep_csv",
    "cell_label",
]

METHODS = ("imls", "mls", "cssrbf")

# 0.05 .. 0.95 in steps of 0.05
DEFAULT_H_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))

SWEEP_COLUMNS = ("method", "family", "n", "h", "sigma_mgal", "mean_mgal", "failures")
RESIDUAL_COLUMNS = (
    "query_index",
    "observed_mgal",
    "interpolated_mgal",
    "residual_mgal",
    "status",
)


@dataclass(frozen=True)
class ResidualStats:
    """Spread of residuals: sample standard deviation and mean, mGal."""

    sigma: float
    mean: float
    count: int


def residual_sigma(residuals) -> ResidualStats:
    """Sample standard deviation (divisor count-1) about the residual mean.

    Raises
    ------
    StatisticsError
        Fewer than two residuals.
    """
    r = np.asarray(residuals, dtype=float)
    if r.ndim != 1 or len(r) < 2:
        raise StatisticsError("need at least 2 residuals for a standard deviation")
    return ResidualStats(
        sigma=float(np.std(r, ddof=1)), mean=float(np.mean(r)), count=len(r)
    )


@dataclass(frozen=True)
class SweepResult:
    """One (method, family, n, h) cell of the sweep table.

    ``h`` is None for IMLS/MLS rows; ``sigma_mgal``/``mean_mgal`` are
    None when fewer than two queries survived the local solves.
    """

    method: str
    family: str
    n: int
    h: float | None
    sigma_mgal: float | None
    mean_mgal: float | None
    failures: int


@dataclass(frozen=True)
class QueryResidual:
    """Per-query outcome; failed solves carry their reason in ``status``."""

    query_index: int
    observed_mgal: float
    interpolated_mgal: float | None
    residual_mgal: float | None
    status: str


@dataclass(frozen=True)
class RunConfig:
    """Everything one run or sweep needs.

    Provide either ``dataset`` directly or ``input_path`` plus
    ``query_selector`` (the headered-CSV path and the query split). The
    scalar fields (method/basis/kernel/n) drive :func:`run_single`; the
    grid fields drive :func:`run_sweep`.
    """

    dataset: Dataset | None = None
    input_path: str | Path | None = None
    query_selector: QuerySelector | None = None
    ellipsoid: Ellipsoid = WGS84

    method: str = "imls"
    basis: BasisSpec | None = None
    kernel_family: str | None = None
    h: float | None = None
    n: int | None = None
    weight: WeightSpec | None = None

    sweep_methods: Sequence[str] = ("imls", "cssrbf")
    monomial_families: Sequence[str] = ("planar", "quadratic", "cubic")
    sph_degrees: Sequence[int] = tuple(range(1, 11))
    kernel_families: Sequence[str] = KERNEL_FAMILIES
    n_grid: Sequence[int] = (4, 10, 20)
    h_grid: Sequence[float] = DEFAULT_H_GRID

    sphere_radius_m: float = EARTH_RADIUS_M
    rcond_min: float = RCOND_MIN_DEFAULT
    threads: int = 1

    def load_dataset(self) -> Dataset:
        if self.dataset is not None:
            return self.dataset
        if self.input_path is None or self.query_selector is None:
            raise ConfigError("config needs a dataset or input_path + query_selector")
        with open(self.input_path, "r", encoding="utf-8") as fh:
            observations = parse_observations(fh)
        return split_dataset(observations, self.query_selector, self.ellipsoid)


def cell_label(method: str, family: str, n: int, h: float | None) -> str:
    """Stable cell identifier used in residual file names."""
    label = f"{method}_{family}_n{n}"
    if h is not None:
        label += f"_h{h:g}"
    return label


class _CellEvaluator:
    """Shared per-dataset state for evaluating cells: index, scale, caches."""

    def __init__(self, dataset: Dataset, rcond_min: float, threads: int):
        if dataset.n_queries == 0:
            raise ConfigError("dataset has no query points to evaluate")
        self.dataset = dataset
        self.rcond_min = rcond_min
        self.threads = max(1, int(threads))
        self.index: SpatialIndex = build_index(dataset.known_xyz)
        self.ell: float = fill_distance(self.index, dataset.query_xyz)
        self._neighbor_cache: dict[int, list] = {}

    def neighbors_for(self, n: int) -> list:
        if n not in self._neighbor_cache:
            if n > self.dataset.n_known:
                raise ConfigError(
                    f"n={n} exceeds the {self.dataset.n_known} known points"
                )
            self._neighbor_cache[n] = [
                k_nearest(self.index, q, n) for q in self.dataset.query_xyz
            ]
        return self._neighbor_cache[n]

    def _map(self, func: Callable[[int], QueryResidual]) -> list[QueryResidual]:
        indices = range(self.dataset.n_queries)
        if self.threads == 1:
            return [func(i) for i in indices]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(func, indices))

    def evaluate(
        self,
        *,
        method: str,
        basis: BasisSpec | None,
        kernel: KernelSpec | None,
        n: int,
        weight: WeightSpec | None,
    ) -> tuple[SweepResult, list[QueryResidual]]:
        dataset = self.dataset
        neighbor_sets = self.neighbors_for(n)
        orig = dataset.query_orig_indices

        def solve_one(qi: int) -> QueryResidual:
            q = dataset.query_xyz[qi]
            observed = float(dataset.query_values[qi])
            latlon = (
                dataset.query_latlon_deg[qi]
                if dataset.query_latlon_deg is not None
                else None
            )
            out_index = int(orig[qi]) if orig is not None else qi
            try:
                if method == "imls":
                    value = imls_interpolate(
                        q, neighbor_sets[qi], dataset, basis, self.ell,
                        query_latlon_deg=latlon, rcond_min=self.rcond_min,
                    )
                elif method == "mls":
                    value = mls_approximate(
                        q, neighbor_sets[qi], dataset, basis, weight, self.ell,
                        query_latlon_deg=latlon, rcond_min=self.rcond_min,
                    )
                else:
                    value = cssrbf_interpolate(
                        q, neighbor_sets[qi], dataset, kernel,
                        rcond_min=self.rcond_min,
                    )
            except ConditioningError as exc:
                return QueryResidual(
                    out_index, observed, None, None,
                    f"conditioning rcond={exc.rcond:.6e}",
                )
            except KernelDomainError:
                return QueryResidual(out_index, observed, None, None, "kernel-domain")
            except DegenerateScaleError:
                return QueryResidual(out_index, observed, None, None, "degenerate-scale")
            return QueryResidual(
                out_index, observed, value, value - observed, "ok"
            )

        residuals = self._map(solve_one)
        ok = [r.residual_mgal for r in residuals if r.status == "ok"]
        failures = dataset.n_queries - len(ok)
        if len(ok) >= 2:
            stats = residual_sigma(ok)
            sigma, mean = stats.sigma, stats.mean
        else:
            sigma = mean = None
        family = kernel.family if method == "cssrbf" else basis.family
        h = kernel.h if method == "cssrbf" else None
        result = SweepResult(
            method=method, family=family, n=n, h=h,
            sigma_mgal=sigma, mean_mgal=mean, failures=failures,
        )
        return result, residuals


def _single_cell(config: RunConfig) -> dict:
    """Validate the scalar (run_single) fields into one cell description."""
    method = config.method
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}")
    if method in ("imls", "mls"):
        if config.basis is None:
            raise ConfigError(f"{method} needs a basis spec")
        required = config.basis.size
        if method == "imls":
            if config.n is not None and config.n != required:
                raise ConfigError(
                    f"{config.basis.family} basis forces n={required}, "
                    f"got n={config.n}"
                )
            n = required
        else:
            n = config.n if config.n is not None else required
            if n < required:
                raise ConfigError(
                    f"mls with {config.basis.family} basis needs n >= {required}"
                )
        weight = config.weight
        if method == "mls" and weight is None:
            weight = WeightSpec()
        return dict(method=method, basis=config.basis, kernel=None, n=n, weight=weight)
    if config.kernel_family is None or config.h is None:
        raise ConfigError("cssrbf needs a kernel family and h")
    if config.n is None:
        raise ConfigError("cssrbf needs an explicit neighbor count n")
    kernel = KernelSpec(
        family=config.kernel_family, h=config.h, radius_m=config.sphere_radius_m
    )
    return dict(method=method, basis=None, kernel=kernel, n=config.n, weight=None)


def run_single(
    config: RunConfig, out_dir: str | Path | None = None
) -> tuple[SweepResult, list[QueryResidual]]:
    """Run one cell over all query points.

    Returns the cell's :class:`SweepResult` and per-query residual
    records. When ``out_dir`` is given, also writes
    ``residuals_<cell>.csv`` there.
    """
    dataset = config.load_dataset()
    cell = _single_cell(config)
    evaluator = _CellEvaluator(dataset, config.rcond_min, config.threads)
    result, residuals = evaluator.evaluate(**cell)
    if out_dir is not None:
        write_residuals(result, residuals, out_dir)
    return result, residuals


def _sweep_cells(config: RunConfig) -> list[dict]:
    cells: list[dict] = []
    for method in config.sweep_methods:
        if method == "imls":
            for family in config.monomial_families:
                basis = BasisSpec.monomial(family)
                cells.append(
                    dict(method="imls", basis=basis, kernel=None,
                         n=basis.size, weight=None)
                )
            for degree in config.sph_degrees:
                basis = BasisSpec.spherical_harmonics(degree)
                cells.append(
                    dict(method="imls", basis=basis, kernel=None,
                         n=basis.size, weight=None)
                )
        elif method == "cssrbf":
            for family in config.kernel_families:
                for n in config.n_grid:
                    for h in config.h_grid:
                        kernel = KernelSpec(
                            family=family, h=h, radius_m=config.sphere_radius_m
                        )
                        cells.append(
                            dict(method="cssrbf", basis=None, kernel=kernel,
                                 n=n, weight=None)
                        )
        else:
            raise ConfigError(f"sweep does not support method {method!r}")
    if not cells:
        raise ConfigError("sweep grids are empty")
    return cells


def run_sweep(
    config: RunConfig,
    out_dir: str | Path | None = None,
    write_residual_files: bool = False,
) -> list[SweepResult]:
    """Run the full grid of cells in deterministic order.

    Row order: IMLS monomial families, then spherical-harmonic degrees,
    then kernels x n x h nested in that order. A cell whose solves all
    fail is recorded with empty sigma, never fatal. When ``out_dir`` is
    given, writes ``sweep.csv`` (and per-cell residual files if
    requested).
    """
    dataset = config.load_dataset()
    cells = _sweep_cells(config)
    evaluator = _CellEvaluator(dataset, config.rcond_min, config.threads)
    results: list[SweepResult] = []
    for cell in cells:
        result, residuals = evaluator.evaluate(**cell)
        results.append(result)
        if out_dir is not None and write_residual_files:
            write_residuals(result, residuals, out_dir)
    if out_dir is not None:
        emit_report(results, out_dir)
    return results


def _format(value) -> str:
    return "" if value is None else repr(value)


def emit_report(results: Sequence[SweepResult], out_dir: str | Path) -> Path:
    """Write ``sweep.csv``: one row per cell, stable column order."""
    if not results:
        raise ConfigError("no results to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for r in results:
            writer.writerow(
                [
                    r.method,
                    r.family,
                    r.n,
                    _format(r.h),
                    _format(r.sigma_mgal),
                    _format(r.mean_mgal),
                    r.failures,
                ]
            )
    return path


def write_residuals(
    result: SweepResult, residuals: Sequence[QueryResidual], out_dir: str | Path
) -> Path:
    """Write ``residuals_<cell>.csv`` for one cell."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    label = cell_label(result.method, result.family, result.n, result.h)
    path = out / f"residuals_{label}.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESIDUAL_COLUMNS)
        for r in residuals:
            writer.writerow(
                [
                    r.query_index,
                    repr(r.observed_mgal),
                    _format(r.interpolated_mgal),
                    _format(r.residual_mgal),
                    r.status,
                ]
            )
    return path


def parse_sweep_csv(path: str | Path) -> list[SweepResult]:
    """Read ``sweep.csv`` back into :class:`SweepResult` rows (round-trip)."""
    results: list[SweepResult] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != SWEEP_COLUMNS:
            raise ConfigError(f"unexpected sweep.csv header: {header}")
        for row in reader:
            method, family, n, h, sigma, mean, failures = row
            results.append(
                SweepResult(
                    method=method,
                    family=family,
                    n=int(n),
                    h=float(h) if h else None,
                    sigma_mgal=float(sigma) if sigma else None,
                    mean_mgal=float(mean) if mean else None,
                    failures=int(failures),
                )
            )
    return results
