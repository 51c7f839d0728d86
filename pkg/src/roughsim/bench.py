"""Timing benchmarks: path-generation schemes and the full pricing pipeline.

`time_path_generation` measures one timed unit = shock draw plus scheme
transform, reporting the median over a configurable trial count (ten by
default, matching the protocol of averaging speeds over repeated trials).
The `markovian-euler` scheme is the complexity baseline: a driftless
one-factor log-normal variance driver whose path step is a plain running
sum, i.e. the O(M·n) Euler cost floor with the identical shock draw.

`time_full_pipeline` times terminal-payoff estimation end to end
(correlated shocks → variance paths → log-stock → payoff mean) in
memory-bounded chunks, for the FFT scheme against the same Markovian
baseline.
"""

from __future__ import annotations

import time
from statistics import median

import numpy as np

from .kernels import Grid, riemann_liouville
from .models import RoughBergomi, phi_apply
from .pricing import _logstock_from_variance
from .shocks import NoiseConfig, draw_shocks
from .volterra import hybrid_scheme_rl, rdonsker_volterra

BENCH_SCHEMES = ("rdonsker-fft", "rdonsker-naive", "hybrid", "markovian-euler")
BENCH_GRID = (256, 1024, 4096, 8192)
_PIPELINE_KINDS = ("rdonsker-fft", "markovian-euler")


def _generate_once(scheme: str, hurst: float, grid: Grid, paths: int,
                   seed: int) -> np.ndarray:
    """One timed unit: draw shocks, then run the scheme transform."""
    zeta = draw_shocks(NoiseConfig(distribution="gaussian", paths=paths,
                                   steps=grid.n, rho=0.0, seed=seed)).zeta
    if scheme == "markovian-euler":
        return np.cumsum(np.sqrt(grid.dt) * zeta, axis=1)
    if scheme == "hybrid":
        return hybrid_scheme_rl(hurst, zeta, grid, seed).values
    if scheme in ("rdonsker-fft", "rdonsker-naive"):
        method = "fft" if scheme == "rdonsker-fft" else "naive"
        return rdonsker_volterra(riemann_liouville(hurst=hurst), "brownian",
                                 zeta, grid, method=method).values
    raise ValueError(f"unknown benchmark scheme {scheme!r}")


def time_path_generation(scheme: str, steps: int, *, paths: int = 256,
                         trials: int = 10, hurst: float = 0.3,
                         horizon: float = 1.0, seed: int = 0) -> float:
    """Median seconds per shock-draw-plus-transform over `trials` runs."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    grid = Grid(steps, horizon)
    _generate_once(scheme, hurst, grid, paths, seed)  # warm-up, untimed
    times = []
    for trial in range(trials):
        start = time.perf_counter()
        _generate_once(scheme, hurst, grid, paths, seed + trial)
        times.append(time.perf_counter() - start)
    return median(times)


def _pipeline_payoff_mean(kind: str, steps: int, paths: int, seed: int, *,
                          hurst: float = 0.3, xi0: float = 0.04,
                          nu: float = 1.0, rho: float = -0.7,
                          chunk_paths: int = 20_000) -> float:
    """ATM-call payoff mean through the full chunked simulation pipeline."""
    if kind not in _PIPELINE_KINDS:
        raise ValueError(f"unknown pipeline kind {kind!r}")
    grid = Grid(steps, 1.0)
    config = NoiseConfig(distribution="gaussian", paths=paths,
                         steps=steps, rho=rho, seed=seed)
    model = RoughBergomi(xi0=xi0, nu=nu, hurst=hurst, rho=rho)
    kernel = model.kernel()
    total = 0.0
    for start in range(0, paths, chunk_paths):
        stop = min(start + chunk_paths, paths)
        shocks = draw_shocks(config, base_range=(start, stop))
        if kind == "markovian-euler":
            w = np.zeros((stop - start, steps + 1))
            np.cumsum(np.sqrt(grid.dt) * shocks.zeta, axis=1, out=w[:, 1:])
            v = xi0 * np.exp(2.0 * nu * w - 2.0 * nu ** 2 * grid.times)
        else:
            phi = rdonsker_volterra(kernel, "brownian", shocks.zeta, grid,
                                    method="fft")
            v = phi_apply(model, phi, grid).values
        x = _logstock_from_variance(v, shocks.xi, grid)
        total += float(np.maximum(np.exp(x[:, -1]) - 1.0, 0.0).sum())
    return total / paths


def time_full_pipeline(kind: str, steps: int = 1024, paths: int = 100_000, *,
                       trials: int = 3, seed: int = 0) -> float:
    """Median seconds for one full pricing pass (draw → paths → payoff)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    times = []
    for trial in range(trials):
        start = time.perf_counter()
        _pipeline_payoff_mean(kind, steps, paths, seed + trial)
        times.append(time.perf_counter() - start)
    return median(times)


def run_bench(schemes=BENCH_SCHEMES, grid=BENCH_GRID, *, paths: int = 256,
              trials: int = 10, hurst: float = 0.3, seed: int = 0) -> dict:
    """Timing table: median of `trials` runs per (scheme, steps) cell."""
    timings = []
    for scheme in schemes:
        for steps in grid:
            med = time_path_generation(scheme, steps, paths=paths,
                                       trials=trials, hurst=hurst, seed=seed)
            timings.append({"scheme": scheme, "steps": int(steps),
                            "median_seconds": med, "trials": int(trials)})
    return {
        "schema_version": 1,
        "protocol": {"paths": int(paths), "trials": int(trials),
                     "hurst": float(hurst), "seed": int(seed),
                     "timed_unit": "shock draw + scheme transform"},
        "timings": timings,
    }
