"""Bushy fractional binomial trees and Snell-envelope American pricing.

Rough volatility is non-Markovian, so the tree cannot recombine: every
node carries its full shock history. Level i holds branching^i nodes;
node k's children are branching*k .. branching*k + branching-1. Each
level stores the driver increments, the Volterra-mapped variance and the
log-stock, built with the same per-lag weight convolution and Euler
stock step as the Monte-Carlo engine, but over Rademacher shocks that
enumerate every sign combination exactly once.

Child ordering for branching 4 encodes (zeta, zeta_perp) as
(+,+), (+,-), (-,+), (-,-); branching 2 (forced by |rho| = 1, where the
orthogonal shock carries no weight) encodes zeta = +1, -1.

All level computations are vectorized reshaped-view updates applied in a
fixed lag order, so any leaf value is bitwise reproducible by replaying
its shock string through the same scalar recursion (`replay_leaf`).
Level arrays spill to disk-backed scratch when the tree exceeds the
configured in-memory byte budget.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from roughsim.kernels import Grid, left_point_weights, optimal_eval_weights
from roughsim.models import BERGOMI_VARIANTS, squared_integral_profile
from roughsim.volterra import DiffusionSpec


def _clip_domain(state, domain):
    lo, hi = domain
    if lo is None and hi is None:
        return state
    return np.clip(state, lo, hi)

_MAX_DEPTH = {4: 12, 2: 24}
_WEIGHTS = ("moment_matched", "left_point")


# ----------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TreeConfig:
    """Bushy-tree build description.

    `branching` is derived from the model correlation (2 when |rho| = 1,
    else 4) unless forced explicitly; `weights` defaults to the
    moment-matched rule for Brownian drivers and to left-point kernel
    evaluations for diffusion drivers (moment matching presumes
    unit-variance iid increments). `max_in_memory_bytes` caps the level
    arrays held in RAM before spilling to scratch files.
    """

    model: object
    depth: int
    rate: float = 0.0
    dividend: float = 0.0
    horizon: float = 1.0
    weights: str | None = None
    branching: int | None = None
    max_in_memory_bytes: int = 1 << 29

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.horizon <= 0.0:
            raise ValueError("horizon must be positive")
        derived = 2 if abs(self.model.rho) == 1.0 else 4
        if self.branching is None:
            object.__setattr__(self, "branching", derived)
        elif self.branching not in (2, 4):
            raise ValueError("branching must be 2 or 4")
        elif self.branching == 2 and derived == 4:
            raise ValueError("branching 2 requires |rho| = 1")
        if self.depth > _MAX_DEPTH[self.branching]:
            raise ValueError(
                f"depth {self.depth} exceeds the {self.branching}-branch "
                f"guard ({_MAX_DEPTH[self.branching]}: "
                f"{self.branching}**depth leaves)"
            )
        is_diffusion = isinstance(self.model.driver(), DiffusionSpec)
        if self.weights is None:
            object.__setattr__(
                self, "weights",
                "left_point" if is_diffusion else "moment_matched")
        elif self.weights not in _WEIGHTS:
            raise ValueError(f"unknown weights rule {self.weights!r}")
        elif self.weights == "moment_matched" and is_diffusion:
            raise ValueError("moment_matched weights need a Brownian driver")

    @property
    def grid(self) -> Grid:
        return Grid(n=self.depth, T=self.horizon)


@dataclass
class BushyTree:
    """Per-level node arrays of a built tree.

    `log_stock[i]`, `variance[i]` and `driver_increments[i]` hold one
    value per node at level i (`driver_increments[0]` is None: the root
    has no increment). `exercise_counts` is filled by the American
    pricer when boundary export is requested.
    """

    config: TreeConfig
    log_stock: list
    variance: list
    driver_increments: list
    exercise_counts: np.ndarray | None = None
    _scratch: object = None

    @property
    def depth(self) -> int:
        return self.config.depth

    @property
    def branching(self) -> int:
        return self.config.branching

    def num_nodes(self, level: int) -> int:
        return self.branching ** level


# ----------------------------------------------------------------------
# payoffs
# ----------------------------------------------------------------------

def call_payoff(strike: float):
    """Vectorized European call payoff s -> (s - K)+."""
    def payoff(s):
        return np.maximum(s - strike, 0.0)
    return payoff


def put_payoff(strike: float):
    """Vectorized European put payoff s -> (K - s)+."""
    def payoff(s):
        return np.maximum(strike - s, 0.0)
    return payoff


# ----------------------------------------------------------------------
# construction
# ----------------------------------------------------------------------

def _shock_patterns(branching: int, rho: float) -> tuple:
    """Per-child (zeta, stock shock) scalars in child order."""
    rhobar = math.sqrt(max(1.0 - rho * rho, 0.0))
    if branching == 2:
        zetas = (1.0, -1.0)
        stocks = tuple(rho * z for z in zetas)
    else:
        zetas = (1.0, 1.0, -1.0, -1.0)
        perps = (1.0, -1.0, 1.0, -1.0)
        stocks = tuple(rho * z + rhobar * p for z, p in zip(zetas, perps))
    return np.array(zetas), np.array(stocks)


def _tree_weights(config: TreeConfig) -> np.ndarray:
    kernel = config.model.kernel()
    if config.weights == "moment_matched":
        return optimal_eval_weights(kernel, config.grid)
    return left_point_weights(kernel, config.grid)


class _LevelAllocator:
    """Allocate level arrays in RAM or in a disk-backed scratch dir."""

    def __init__(self, budget_bytes: int):
        self._remaining = budget_bytes
        self._scratch = None
        self._count = 0

    def make(self, size: int) -> np.ndarray:
        nbytes = 8 * size
        if nbytes <= self._remaining:
            self._remaining -= nbytes
            return np.empty(size)
        if self._scratch is None:
            self._scratch = tempfile.TemporaryDirectory(prefix="roughsim-tree-")
        self._count += 1
        path = os.path.join(self._scratch.name, f"level{self._count}.f64")
        return np.memmap(path, dtype=np.float64, mode="w+", shape=(size,))

    @property
    def scratch(self):
        return self._scratch


def _phi_to_variance(model, phi, level_time_index: int, q_profile, xi_values):
    """Apply the model's variance map at one level (array or scalar)."""
    if isinstance(model, BERGOMI_VARIANTS):
        c_h = math.sqrt(2.0 * model.hurst)
        gain = 2.0 * model.nu * c_h
        comp = -2.0 * model.nu ** 2 * c_h ** 2 * q_profile[level_time_index]
        return xi_values[level_time_index] * np.exp(gain * phi + comp)
    return np.maximum(model.eta + phi, 0.0)


def build_tree(config: TreeConfig) -> BushyTree:
    """Construct all levels of the bushy tree.

    Per level: enumerate the child shocks, extend the driver increments,
    rebuild the Volterra value phi(t_i) by the per-lag weight sum over
    ancestor increments (ascending lag order, reshaped-view updates) and
    map to variance and log-stock.
    """
    model = config.model
    grid = config.grid
    b = config.branching
    n = config.depth
    dt = grid.dt
    zetas, stock_shocks = _shock_patterns(b, model.rho)
    weights = _tree_weights(config)
    driver = model.driver()
    diffusion = driver if isinstance(driver, DiffusionSpec) else None

    if isinstance(model, BERGOMI_VARIANTS):
        q_profile = squared_integral_profile(model.kernel(), grid)
        xi_values = model.xi0(grid.times)
    else:
        q_profile = xi_values = None

    alloc = _LevelAllocator(config.max_in_memory_bytes)
    log_stock = [np.zeros(1)]
    variance = [np.array([_phi_to_variance(model, 0.0, 0, q_profile,
                                           xi_values)])]
    increments = [None]
    sqrt_dt = np.sqrt(dt)
    growth = (config.rate - config.dividend) * dt
    half_dt = -0.5 * dt
    y_state = None if diffusion is None else np.full(1, diffusion.y0)

    for i in range(1, n + 1):
        parents = b ** (i - 1)
        size = b * parents

        # driver increments for the new level
        dy = alloc.make(size)
        dy_view = dy.reshape(parents, b)
        if diffusion is None:
            dy_view[:] = (sqrt_dt * zetas)[None, :]
        else:
            clipped = _clip_domain(y_state, diffusion.domain)
            drift = np.asarray(diffusion.drift(clipped), dtype=float)
            diff = np.asarray(diffusion.diffusion(clipped), dtype=float)
            dy_view[:] = drift[:, None] * dt + diff[:, None] * (sqrt_dt * zetas)
            y_state = np.repeat(y_state, b) + dy
        increments.append(dy)

        # Volterra value phi(t_i): ascending lags over ancestor increments
        phi = np.zeros(size)
        for m in range(1, i + 1):
            level = i - m + 1
            contrib = weights[m - 1] * increments[level]
            phi.reshape(b ** level, -1)[...] += contrib[:, None]

        v = alloc.make(size)
        v[:] = _phi_to_variance(model, phi, i, q_profile, xi_values)
        variance.append(v)

        # log-stock Euler step from the parent level
        v_prev = variance[i - 1]
        x = alloc.make(size)
        x_view = x.reshape(parents, b)
        base = (log_stock[i - 1] + growth) + half_dt * v_prev
        vol = np.sqrt(dt * v_prev)
        for r in range(b):
            x_view[:, r] = base + vol * stock_shocks[r]
        log_stock.append(x)

    return BushyTree(config=config, log_stock=log_stock, variance=variance,
                     driver_increments=increments, _scratch=alloc.scratch)


def replay_leaf(tree: BushyTree, leaf: int) -> float:
    """Recompute one leaf's log-stock from its shock string alone.

    Follows the identical scalar operation sequence as the vectorized
    builder, so the result is bitwise equal to the stored leaf value.
    """
    config = tree.config
    model = config.model
    b = config.branching
    n = config.depth
    if not 0 <= leaf < b ** n:
        raise ValueError(f"leaf {leaf} outside level {n}")
    grid = config.grid
    dt = grid.dt
    zetas, stock_shocks = _shock_patterns(b, model.rho)
    weights = _tree_weights(config)
    driver = model.driver()
    diffusion = driver if isinstance(driver, DiffusionSpec) else None
    if isinstance(model, BERGOMI_VARIANTS):
        q_profile = squared_integral_profile(model.kernel(), grid)
        xi_values = model.xi0(grid.times)
    else:
        q_profile = xi_values = None

    digits = [(leaf // b ** (n - l)) % b for l in range(1, n + 1)]
    sqrt_dt = np.sqrt(dt)
    growth = (config.rate - config.dividend) * dt
    half_dt = -0.5 * dt
    x = np.float64(0.0)
    v_prev = np.float64(_phi_to_variance(model, 0.0, 0, q_profile, xi_values))
    y_state = None if diffusion is None else np.float64(diffusion.y0)
    dy_path = []
    for i in range(1, n + 1):
        r = digits[i - 1]
        if diffusion is None:
            dy = np.float64(sqrt_dt * zetas[r])
        else:
            clipped = _clip_domain(y_state, diffusion.domain)
            drift = np.float64(diffusion.drift(clipped))
            diff = np.float64(diffusion.diffusion(clipped))
            dy = drift * np.float64(dt) + diff * (sqrt_dt * zetas[r])
            y_state = y_state + dy
        dy_path.append(dy)
        phi = np.float64(0.0)
        for m in range(1, i + 1):
            phi += weights[m - 1] * dy_path[i - m]
        v = np.float64(_phi_to_variance(model, phi, i, q_profile, xi_values))
        base = (x + growth) + half_dt * v_prev
        x = base + np.sqrt(dt * v_prev) * stock_shocks[r]
        v_prev = v
    return float(x)


# ----------------------------------------------------------------------
# pricing
# ----------------------------------------------------------------------

def _leaf_stock(tree: BushyTree) -> np.ndarray:
    return tree.config.model.spot * np.exp(tree.log_stock[tree.depth])


def tree_forward(tree: BushyTree) -> float:
    """Equal-weight mean of the leaf stock (the tree's own forward)."""
    return float(np.mean(_leaf_stock(tree)))


def tree_price_european(tree: BushyTree, payoff) -> float:
    """Discounted equal-weight leaf expectation e^{-rT} * mean payoff."""
    config = tree.config
    disc = math.exp(-config.rate * config.horizon)
    return disc * float(np.mean(payoff(_leaf_stock(tree))))


def tree_price_american(tree: BushyTree, payoff, details: bool = False):
    """Snell-envelope backward induction.

    Per level: node value = max(discount * mean(children), exercise)
    with per-step discount e^{(dividend - rate) * T/n}. Dominance over
    both the European continuation and the exercise value is asserted at
    every node. With `details`, returns a dict carrying the American and
    European root values, the early-exercise premium and per-level
    exercising-node counts (the exercise boundary's level profile, also
    stored on the tree).
    """
    config = tree.config
    b = config.branching
    n = config.depth
    spot = config.model.spot
    disc = math.exp((config.dividend - config.rate) * config.horizon / n)
    amer = payoff(spot * np.exp(tree.log_stock[n]))
    euro = amer.copy()
    counts = np.zeros(n, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        cont_a = disc * amer.reshape(-1, b).mean(axis=1)
        euro = disc * euro.reshape(-1, b).mean(axis=1)
        exercise = payoff(spot * np.exp(tree.log_stock[i]))
        amer = np.maximum(cont_a, exercise)
        if not (np.all(amer >= euro) and np.all(amer >= exercise)):
            raise AssertionError(
                f"Snell domination violated at level {i}")
        counts[i] = np.count_nonzero(exercise > cont_a)
    tree.exercise_counts = counts
    price = float(amer[0])
    if not details:
        return price
    return {
        "price": price,
        "european_price": float(euro[0]),
        "early_exercise_premium": price - float(euro[0]),
        "exercise_counts": counts,
        "depth": n,
        "branching": b,
    }
