"""Bushy-tree construction, leaf replay, European/American pricing."""

import math

import numpy as np
import pytest

from roughsim.kernels import Grid
from roughsim.models import (
    GammaBergomi,
    RoughBergomi,
    RoughHestonGJRS,
    squared_integral_profile,
)
from roughsim.pricing import bs_call
from roughsim.trees import (
    BushyTree,
    TreeConfig,
    build_tree,
    call_payoff,
    put_payoff,
    replay_leaf,
    tree_forward,
    tree_price_american,
    tree_price_european,
)


def _rbergomi(nu=1.0, rho=-0.7, hurst=0.3, xi0=0.04):
    return RoughBergomi(xi0=xi0, nu=nu, hurst=hurst, rho=rho)


# ----------------------------------------------------------------------
# configuration guards
# ----------------------------------------------------------------------

def test_branching_derived_from_correlation():
    assert TreeConfig(model=_rbergomi(rho=-1.0), depth=3).branching == 2
    assert TreeConfig(model=_rbergomi(rho=-0.7), depth=3).branching == 4


def test_depth_guards():
    with pytest.raises(ValueError, match="guard"):
        TreeConfig(model=_rbergomi(rho=-0.7), depth=13)
    with pytest.raises(ValueError, match="guard"):
        TreeConfig(model=_rbergomi(rho=-1.0), depth=25)
    TreeConfig(model=_rbergomi(rho=-1.0), depth=24)  # boundary accepted


def test_branching_override_rules():
    # a |rho| = 1 model may be forced onto the 4-branch layout, but a
    # correlated model cannot drop the orthogonal shock
    assert TreeConfig(model=_rbergomi(rho=-1.0), depth=3,
                      branching=4).branching == 4
    with pytest.raises(ValueError):
        TreeConfig(model=_rbergomi(rho=-0.7), depth=3, branching=2)
    with pytest.raises(ValueError):
        TreeConfig(model=_rbergomi(), depth=3, branching=3)


def test_weights_rule_derivation():
    heston = RoughHestonGJRS(eta=0.04, kappa=1.0, theta=0.04, vol_of_vol=0.1,
                             y0=0.04, hurst=0.3, rho=-0.7)
    assert TreeConfig(model=heston, depth=3).weights == "left_point"
    assert TreeConfig(model=_rbergomi(), depth=3).weights == "moment_matched"
    with pytest.raises(ValueError, match="Brownian"):
        TreeConfig(model=heston, depth=3, weights="moment_matched")


# ----------------------------------------------------------------------
# construction
# ----------------------------------------------------------------------

def test_single_step_two_branch_hand_values():
    model = _rbergomi(nu=0.0, rho=-1.0)
    tree = build_tree(TreeConfig(model=model, depth=1))
    leaves = sorted(tree.log_stock[1])
    np.testing.assert_allclose(leaves, [-0.02 - 0.2, -0.02 + 0.2], atol=1e-15)


def test_level_counts_four_branch():
    tree = build_tree(TreeConfig(model=_rbergomi(), depth=2))
    assert [len(x) for x in tree.log_stock] == [1, 4, 16]
    assert [len(v) for v in tree.variance] == [1, 4, 16]
    assert tree.driver_increments[0] is None
    assert len(tree.driver_increments[2]) == 16
    assert tree.log_stock[0][0] == 0.0
    assert tree.variance[0][0] == 0.04


@pytest.mark.parametrize("hurst", [0.75, 0.1])
def test_fbm_tree_fan_out_pattern(hurst):
    # left-point weights with a Brownian driver reproduce the fractional
    # random-walk display sqrt(dt) * sum (t_i - t_{k-1})^{H-1/2} zeta_k
    n = 5
    model = _rbergomi(nu=1.0, rho=-1.0, hurst=hurst)
    config = TreeConfig(model=model, depth=n, weights="left_point")
    tree = build_tree(config)
    grid = config.grid
    q = squared_integral_profile(model.kernel(), grid)
    c_h = math.sqrt(2.0 * hurst)
    gain, comp = 2.0 * c_h, -2.0 * c_h ** 2 * q[n]
    v_leaves = np.asarray(tree.variance[n])
    phi_rec = (np.log(v_leaves / 0.04) - comp) / gain
    dt = grid.dt
    for leaf in range(2 ** n):
        digits = [(leaf >> (n - l)) & 1 for l in range(1, n + 1)]
        zetas = [1.0 if d == 0 else -1.0 for d in digits]
        expect = sum(math.sqrt(dt) * ((n - k + 1) * dt) ** (hurst - 0.5) * z
                     for k, z in enumerate(zetas, start=1))
        assert abs(phi_rec[leaf] - expect) < 1e-10


@pytest.mark.parametrize("model,weights", [
    (_rbergomi(), None),
    (_rbergomi(rho=-1.0), None),
    (GammaBergomi(xi0=0.04, nu=0.8, hurst=0.3, rho=-0.5, beta_decay=1.0), None),
    (RoughHestonGJRS(eta=0.04, kappa=1.0, theta=0.04, vol_of_vol=0.1,
                     y0=0.05, hurst=0.3, rho=-0.7), None),
])
def test_leaf_replay_bitwise(model, weights):
    config = TreeConfig(model=model, depth=5, rate=0.03, dividend=0.01,
                        weights=weights)
    tree = build_tree(config)
    leaves = tree.log_stock[config.depth]
    for leaf in (0, 1, len(leaves) // 3, len(leaves) - 1):
        assert replay_leaf(tree, leaf) == leaves[leaf]


def test_replay_leaf_bounds():
    tree = build_tree(TreeConfig(model=_rbergomi(), depth=2))
    with pytest.raises(ValueError):
        replay_leaf(tree, 16)


# ----------------------------------------------------------------------
# European pricing
# ----------------------------------------------------------------------

def test_unit_payoff_prices_to_one():
    tree = build_tree(TreeConfig(model=_rbergomi(), depth=4))
    assert tree_price_european(tree, lambda s: np.ones_like(s)) == 1.0


def test_flat_volatility_converges_to_black_scholes():
    model = _rbergomi(nu=0.0, rho=-1.0)
    tree = build_tree(TreeConfig(model=model, depth=12))
    price = tree_price_european(tree, call_payoff(1.0))
    assert abs(price - bs_call(1.0, 1.0, 0.04)) < 0.003


def test_put_call_parity_on_shared_tree():
    config = TreeConfig(model=_rbergomi(), depth=6, rate=0.03, dividend=0.01)
    tree = build_tree(config)
    strike = 1.05
    call = tree_price_european(tree, call_payoff(strike))
    put = tree_price_european(tree, put_payoff(strike))
    disc = math.exp(-config.rate * config.horizon)
    assert abs((call - put) - disc * (tree_forward(tree) - strike)) < 1e-12


# ----------------------------------------------------------------------
# American pricing
# ----------------------------------------------------------------------

def test_american_call_equals_european_without_dividends():
    config = TreeConfig(model=_rbergomi(rho=-1.0), depth=10, rate=0.05)
    tree = build_tree(config)
    american = tree_price_american(tree, call_payoff(1.0))
    european = tree_price_european(tree, call_payoff(1.0))
    assert abs(american - european) < 1e-12


def test_american_put_dominates_european():
    config = TreeConfig(model=_rbergomi(rho=-1.0), depth=10, rate=0.05)
    tree = build_tree(config)
    for strike in (0.9, 1.0, 1.1):
        details = tree_price_american(tree, put_payoff(strike), details=True)
        assert details["price"] >= details["european_price"]
        assert details["early_exercise_premium"] >= 0.0
    # an in-the-money put with positive rates exercises early somewhere
    details = tree_price_american(tree, put_payoff(1.1), details=True)
    assert details["early_exercise_premium"] > 0.0
    assert details["exercise_counts"].sum() > 0
    assert tree.exercise_counts is not None


def test_four_branch_collapse_matches_two_branch():
    model = _rbergomi(rho=-1.0)
    tree2 = build_tree(TreeConfig(model=model, depth=6, rate=0.05))
    tree4 = build_tree(TreeConfig(model=model, depth=6, rate=0.05,
                                  branching=4))
    for payoff in (call_payoff(1.05), put_payoff(1.05)):
        eu2 = tree_price_european(tree2, payoff)
        eu4 = tree_price_european(tree4, payoff)
        am2 = tree_price_american(tree2, payoff)
        am4 = tree_price_american(tree4, payoff)
        assert abs(eu2 - eu4) < 1e-14
        assert abs(am2 - am4) < 1e-14


def test_memmap_spill_reproduces_in_memory_tree():
    config_ram = TreeConfig(model=_rbergomi(), depth=5, rate=0.05)
    config_disk = TreeConfig(model=_rbergomi(), depth=5, rate=0.05,
                             max_in_memory_bytes=256)
    tree_ram = build_tree(config_ram)
    tree_disk = build_tree(config_disk)
    assert tree_disk._scratch is not None and tree_ram._scratch is None
    assert isinstance(tree_disk.log_stock[5], np.memmap)
    np.testing.assert_array_equal(np.asarray(tree_disk.log_stock[5]),
                                  tree_ram.log_stock[5])
    for payoff in (call_payoff(1.0), put_payoff(1.0)):
        assert tree_price_american(tree_disk, payoff) == \
            tree_price_american(tree_ram, payoff)
