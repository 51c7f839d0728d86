"""Benchmark harness: timing units, report schema, pipeline chunking."""

import numpy as np
import pytest

from roughsim.bench import (
    BENCH_GRID,
    BENCH_SCHEMES,
    _pipeline_payoff_mean,
    run_bench,
    time_full_pipeline,
    time_path_generation,
)


def test_path_generation_timings_positive():
    for scheme in BENCH_SCHEMES:
        t = time_path_generation(scheme, 32, paths=8, trials=3)
        assert t > 0.0


def test_path_generation_rejects_unknown_scheme_and_trials():
    with pytest.raises(ValueError, match="unknown benchmark scheme"):
        time_path_generation("bogus", 32, paths=4, trials=1)
    with pytest.raises(ValueError, match="trials"):
        time_path_generation("rdonsker-fft", 32, paths=4, trials=0)


def test_report_schema_stable():
    report = run_bench(schemes=("rdonsker-fft", "markovian-euler"),
                       grid=(16, 32), paths=8, trials=2)
    assert set(report) == {"schema_version", "protocol", "timings"}
    assert report["schema_version"] == 1
    assert set(report["protocol"]) == {"paths", "trials", "hurst", "seed",
                                       "timed_unit"}
    assert len(report["timings"]) == 4
    for cell in report["timings"]:
        assert set(cell) == {"scheme", "steps", "median_seconds", "trials"}
        assert cell["median_seconds"] > 0.0
    assert BENCH_GRID == (256, 1024, 4096, 8192)


def test_pipeline_chunking_is_exact():
    whole = _pipeline_payoff_mean("rdonsker-fft", 32, 3000, seed=9,
                                  chunk_paths=3000)
    chunked = _pipeline_payoff_mean("rdonsker-fft", 32, 3000, seed=9,
                                    chunk_paths=700)
    assert whole == chunked


def test_pipeline_kinds_produce_sane_prices():
    for kind in ("rdonsker-fft", "markovian-euler"):
        price = _pipeline_payoff_mean(kind, 64, 4000, seed=3)
        assert 0.02 < price < 0.2  # ATM call, vol ~0.2, maturity 1
    with pytest.raises(ValueError, match="unknown pipeline kind"):
        _pipeline_payoff_mean("hybrid", 32, 100, seed=0)


def test_full_pipeline_timing_positive():
    assert time_full_pipeline("markovian-euler", steps=64, paths=2000,
                              trials=1) > 0.0
