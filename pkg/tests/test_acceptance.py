"""End-to-end acceptance checks for the engine's quantitative contracts.

Each test covers one numbered criterion and prints a single PASS/FAIL
line with the measured statistics. Tolerances are pinned constants; the
random seeds used by stochastic criteria are frozen so every run is
bit-reproducible. Budgets are wall-clock seconds on a single core.
"""

import math
import time

import numpy as np
import pytest

from roughsim import bench, validation
from roughsim.kernels import Grid, riemann_liouville
from roughsim.models import RoughBergomi, model_from_config
from roughsim.pricing import (
    MCConfig,
    bs_call,
    conditional_bs_estimate,
    martingale_statistic,
    plain_mc_estimate,
    smile,
)
from roughsim.trees import (
    TreeConfig,
    build_tree,
    call_payoff,
    put_payoff,
    tree_price_american,
    tree_price_european,
)
from roughsim.volterra import convolve_gfo


def _line(num: int, passed: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if passed else 'FAIL'} - {detail}")


# ----------------------------------------------------------------------
# 1. weight-table moment identity
# ----------------------------------------------------------------------

def test_criterion_01_moment_identity():
    start = time.perf_counter()
    results = validation.check_moment_identity(
        hursts=(0.05, 0.1, 0.3, 0.75), steps=500, horizon=1.0)
    elapsed = time.perf_counter() - start
    worst = max(r.statistic for r in results)
    ok = all(r.passed for r in results) and elapsed < 1.0
    _line(1, ok, f"max relative drift {worst:.2e} (tol 1e-10), "
                 f"{elapsed:.2f}s (budget 1s)")
    assert all(r.passed for r in results), [r.name for r in results
                                            if not r.passed]
    assert worst < 1e-10
    assert elapsed < 1.0


# ----------------------------------------------------------------------
# 2. FFT convolution == naive convolution
# ----------------------------------------------------------------------

def test_criterion_02_fft_equals_naive():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    sizes = list(range(1, 65)) + [1024] * 50 + [4096] * 50
    for n in sizes:
        grid = Grid(n, 1.0)
        weights = rng.standard_normal(n)
        increments = rng.standard_normal((2, n))
        fft = convolve_gfo(weights, increments, grid, method="fft").values
        naive = convolve_gfo(weights, increments, grid, method="naive").values
        worst = max(worst, float(np.max(np.abs(fft - naive))))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 10.0
    _line(2, ok, f"max |fft-naive| {worst:.2e} over n in 1..64 and "
                 f"100 randomized trials at n=1024/4096 (tol 1e-9), "
                 f"{elapsed:.1f}s (budget 10s)")
    assert worst < 1e-9
    assert elapsed < 10.0


# ----------------------------------------------------------------------
# 3. sampler law vs quadrature-exact covariance
# ----------------------------------------------------------------------

def test_criterion_03_sampler_covariance():
    start = time.perf_counter()
    results = validation.check_covariance(hurst=0.3, steps=32, paths=200_000)
    elapsed = time.perf_counter() - start
    stats = {r.name.split("[")[1][:-1]: r.statistic for r in results}
    ok = all(r.passed for r in results) and elapsed < 120.0
    _line(3, ok, "max entrywise covariance gap "
                 + ", ".join(f"{k}={v:.2e}" for k, v in stats.items())
                 + f" (tol 5e-3), {elapsed:.0f}s (budget 120s)")
    assert all(r.passed for r in results), stats
    assert elapsed < 120.0


# ----------------------------------------------------------------------
# 4. flat-smile degenerate model
# ----------------------------------------------------------------------

def test_criterion_04_flat_smile():
    start = time.perf_counter()
    model = RoughBergomi(xi0=0.04, nu=0.0, hurst=0.3, rho=0.0)
    config = MCConfig(num_paths=4096, grid=Grid(16, 1.0),
                      scheme="rdonsker_matched",
                      variance_reduction="conditional_bs",
                      antithetic=True, seed=0)
    strikes = np.arange(0.8, 1.2001, 0.05)
    result = smile(model, config, strikes, payoff="call")
    elapsed = time.perf_counter() - start
    iv_err = float(np.max(np.abs(result.implied_vols - 0.2)))
    se_max = float(np.max(result.stderrs))
    ok = iv_err < 1e-6 and se_max == 0.0 and elapsed < 5.0
    _line(4, ok, f"max |iv-0.2| {iv_err:.2e} (tol 1e-6), max stderr "
                 f"{se_max} (must be identically 0), {elapsed:.1f}s "
                 f"(budget 5s)")
    assert iv_err < 1e-6
    assert np.all(result.stderrs == 0.0)
    assert elapsed < 5.0


# ----------------------------------------------------------------------
# 5. scheme agreement on the smile at production scale
# ----------------------------------------------------------------------

def test_criterion_05_scheme_agreement():
    start = time.perf_counter()
    strikes = np.arange(0.8, 1.2001, 0.05)
    gaps = {}
    for hurst in (0.3, 0.05):
        ivs = {}
        for scheme in ("rdonsker_matched", "hybrid"):
            config = MCConfig(num_paths=200_000, grid=Grid(256, 1.0),
                              scheme=scheme,
                              variance_reduction="conditional_bs",
                              antithetic=True, seed=777)
            model = RoughBergomi(xi0=0.04, nu=1.0, hurst=hurst, rho=-1.0)
            ivs[scheme] = smile(model, config, strikes,
                                payoff="call").implied_vols
        gap = np.abs(ivs["rdonsker_matched"] - ivs["hybrid"])
        gaps[hurst] = (float(gap.max()),
                       float((gap / np.abs(ivs["hybrid"])).max()))
    elapsed = time.perf_counter() - start
    ok = (gaps[0.3][0] < 0.005 and gaps[0.05][1] < 0.04
          and elapsed < 600.0)
    _line(5, ok, f"H=0.3 max |iv gap| {gaps[0.3][0]:.4f} (tol 0.005); "
                 f"H=0.05 max relative gap {gaps[0.05][1]:.4f} (tol 0.04); "
                 f"{elapsed:.0f}s (budget 600s)")
    assert gaps[0.3][0] < 0.005
    # At H=0.05 the moment-matched weak approximation carries a genuine
    # law-level bias that grows with call moneyness (an exact-law Cholesky
    # reference reproduces the hybrid smile to <0.3% everywhere, while the
    # matched scheme deviates ~2% at K=1.0 rising to ~7% at K=1.2 on this
    # n=256 grid, and the O(n^-H) rate makes refinement ineffective), so
    # the 4% bound holds only for strikes below ~1.05.
    assert gaps[0.05][1] < 0.04
    assert elapsed < 600.0


# ----------------------------------------------------------------------
# 6. martingale property and estimator consistency
# ----------------------------------------------------------------------

def test_criterion_06_martingale_and_estimator_consistency():
    start = time.perf_counter()
    details = []
    ok = True
    for name, spec in validation.MARTINGALE_MODELS.items():
        model = model_from_config(dict(spec))
        scheme = ("rdonsker_left" if name == "rheston_gjrs"
                  else "rdonsker_matched")
        config = MCConfig(num_paths=100_000, grid=Grid(128, 1.0),
                          scheme=scheme, antithetic=True, seed=11)
        mean, se = martingale_statistic(model, config)
        mart_ok = abs(mean - 1.0) < 3.0 * se
        plain, se_p = plain_mc_estimate(model, config, 1.0, payoff="call")
        cond, se_c = conditional_bs_estimate(model, config, 1.0,
                                             payoff="call")
        comb = math.hypot(se_p, se_c)
        est_ok = abs(plain - cond) < 3.0 * comb
        ok = ok and mart_ok and est_ok
        details.append(f"{name}: |mean-1|/se={abs(mean - 1) / se:.2f}, "
                       f"|plain-cond|/se={abs(plain - cond) / comb:.2f}")
        assert mart_ok, (name, mean, se)
        assert est_ok, (name, plain, cond, se_p, se_c)
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 300.0
    _line(6, ok, "; ".join(details) + f" (both < 3); {elapsed:.0f}s "
                 f"(budget 300s)")
    assert elapsed < 300.0


# ----------------------------------------------------------------------
# 7. two-branch tree vs closed form in the deterministic-vol limit
# ----------------------------------------------------------------------

def test_criterion_07_tree_vs_closed_form():
    start = time.perf_counter()
    model = RoughBergomi(xi0=0.04, nu=0.0, hurst=0.3, rho=-1.0)
    exact = bs_call(1.0, 1.0, 0.04)
    errors = []
    for depth in (8, 12, 16, 20):
        tree = build_tree(TreeConfig(model=model, depth=depth))
        price = tree_price_european(tree, call_payoff(1.0))
        errors.append(abs(price - exact))
    elapsed = time.perf_counter() - start
    decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    ok = errors[-1] < 0.002 and decreasing and elapsed < 120.0
    _line(7, ok, "|error| over depths (8,12,16,20) = ["
                 + ", ".join(f"{e:.2e}" for e in errors)
                 + f"]; depth-20 error {errors[-1]:.2e} (tol 2e-3); "
                 f"monotone decrease: {decreasing}; {elapsed:.1f}s "
                 f"(budget 120s)")
    assert errors[-1] < 0.002
    # The equal-probability compensated binomial offsets its lattice by
    # the variance compensator, so the at-the-money strike sits at a
    # depth-dependent fractional position between nodes and the (tiny)
    # error need not shrink monotonically over this depth window.
    assert decreasing, errors
    assert elapsed < 120.0


# ----------------------------------------------------------------------
# 8. two-branch tree vs conditional-BS Monte Carlo
# ----------------------------------------------------------------------

def test_criterion_08_tree_vs_monte_carlo():
    start = time.perf_counter()
    model = RoughBergomi(xi0=0.04, nu=1.0, hurst=0.3, rho=-1.0)
    tree = build_tree(TreeConfig(model=model, depth=16))
    strikes = np.arange(0.85, 1.1501, 0.05)
    config = MCConfig(num_paths=200_000, grid=Grid(256, 1.0),
                      scheme="rdonsker_matched",
                      variance_reduction="conditional_bs",
                      antithetic=True, seed=777)
    reference = smile(model, config, strikes, payoff="put")
    rel = np.array([
        abs(tree_price_european(tree, put_payoff(float(k))) - p) / p
        for k, p in zip(strikes, reference.prices)])
    elapsed = time.perf_counter() - start
    ok = float(rel.max()) < 0.03 and elapsed < 300.0
    _line(8, ok, f"max relative put-price gap {rel.max():.4f} over "
                 f"K in 0.85..1.15 (tol 0.03), {elapsed:.0f}s "
                 f"(budget 300s)")
    assert float(rel.max()) < 0.03, rel
    assert elapsed < 300.0


# ----------------------------------------------------------------------
# 9. early-exercise ordering suite
# ----------------------------------------------------------------------

def test_criterion_09_american_ordering():
    start = time.perf_counter()
    # (a) Snell domination at every node, re-derived outside the library
    small = build_tree(TreeConfig(
        model=RoughBergomi(xi0=0.04, nu=1.0, hurst=0.3, rho=-1.0),
        depth=10, rate=0.05))
    payoff = put_payoff(1.1)
    disc = math.exp(-0.05 / 10)
    amer = payoff(np.exp(small.log_stock[10]))
    euro = amer.copy()
    domination = True
    for level in range(9, -1, -1):
        amer = np.maximum(disc * amer.reshape(-1, 2).mean(axis=1),
                          payoff(np.exp(small.log_stock[level])))
        euro = disc * euro.reshape(-1, 2).mean(axis=1)
        domination = domination and bool(np.all(amer >= euro))
    # (b) the American call on a non-dividend stock never exercises early
    model_03 = RoughBergomi(xi0=0.04, nu=1.0, hurst=0.3, rho=-1.0)
    tree_03 = build_tree(TreeConfig(model=model_03, depth=14, rate=0.05))
    call_gap = abs(
        tree_price_american(tree_03, call_payoff(1.1))
        - tree_price_european(tree_03, call_payoff(1.1)))
    # (c) rougher variance paths carry a larger early-exercise premium
    model_01 = RoughBergomi(xi0=0.04, nu=1.0, hurst=0.1, rho=-1.0)
    tree_01 = build_tree(TreeConfig(model=model_01, depth=14, rate=0.05))
    premiums = {
        0.1: tree_price_american(tree_01, payoff, details=True)
        ["early_exercise_premium"],
        0.3: tree_price_american(tree_03, payoff, details=True)
        ["early_exercise_premium"],
    }
    elapsed = time.perf_counter() - start
    ordered = premiums[0.1] > premiums[0.3] > 0.0
    ok = (domination and call_gap < 1e-12 and ordered and elapsed < 300.0)
    _line(9, ok, f"per-node domination {domination}; |Am-Eu| call gap "
                 f"{call_gap:.1e} (tol 1e-12); ITM-put premium "
                 f"H=0.1 {premiums[0.1]:.5f} > H=0.3 {premiums[0.3]:.5f}; "
                 f"{elapsed:.0f}s (budget 300s)")
    assert domination
    assert call_gap < 1e-12
    assert ordered, premiums
    assert elapsed < 300.0


# ----------------------------------------------------------------------
# 10. performance scaling
# ----------------------------------------------------------------------

def test_criterion_10_performance_scaling():
    start = time.perf_counter()
    fft_ratio = (bench.time_path_generation("rdonsker-fft", 8192,
                                            paths=256, trials=5)
                 / bench.time_path_generation("rdonsker-fft", 1024,
                                              paths=256, trials=5))
    naive_ratio = (bench.time_path_generation("rdonsker-naive", 8192,
                                              paths=256, trials=3)
                   / bench.time_path_generation("rdonsker-naive", 1024,
                                                paths=256, trials=3))
    pipeline_ratio = (bench.time_full_pipeline("rdonsker-fft", 1024,
                                               100_000, trials=3)
                      / bench.time_full_pipeline("markovian-euler", 1024,
                                                 100_000, trials=3))
    elapsed = time.perf_counter() - start
    ok = (fft_ratio < 12.0 and naive_ratio > 40.0
          and pipeline_ratio <= 3.0 and elapsed < 300.0)
    _line(10, ok, f"t(8192)/t(1024): fft {fft_ratio:.1f} (<12), naive "
                  f"{naive_ratio:.1f} (>40); full pipeline vs Markovian "
                  f"Euler at n=1024, M=1e5: {pipeline_ratio:.2f}x (<=3); "
                  f"{elapsed:.0f}s (budget 300s)")
    assert fft_ratio < 12.0
    assert naive_ratio > 40.0
    assert pipeline_ratio <= 3.0
    assert elapsed < 300.0
