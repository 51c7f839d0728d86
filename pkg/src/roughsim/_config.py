"""Process-wide knobs: worker count for the batched FFT convolution."""

from __future__ import annotations

import os

_threads = max(1, int(os.environ.get("ROUGHSIM_THREADS", "1")))


def get_threads() -> int:
    """Worker count used by scipy.fft for batched transforms."""
    return _threads


def set_threads(count: int) -> None:
    """Cap the FFT worker pool; results are bitwise independent of it."""
    global _threads
    if count < 1:
        raise ValueError("thread count must be >= 1")
    _threads = int(count)
