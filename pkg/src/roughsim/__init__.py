"""Rough-volatility simulation and pricing engine.

Weak-approximation (rDonsker) path generation for Volterra processes by
FFT convolution, Monte-Carlo European pricing with conditional
Black-Scholes variance reduction, and bushy fractional binomial trees
for American options.
"""

from roughsim.kernels import (
    Grid,
    KernelSpec,
    eval_g,
    eval_G,
    gamma_fractional,
    kernel_from_config,
    left_point_weights,
    optimal_eval_weights,
    power_law,
    riemann_liouville,
    squared_kernel_integral,
)
from roughsim.models import (
    ForwardVarianceCurve,
    GammaBergomi,
    RoughBergomi,
    RoughHestonGJRS,
    as_curve,
    model_from_config,
    phi_apply,
    squared_integral_profile,
)
from roughsim.pricing import (
    MCConfig,
    SmileResult,
    bs_call,
    bs_put,
    conditional_bs_estimate,
    implied_vol,
    martingale_statistic,
    plain_mc_estimate,
    simulate_logstock,
    smile,
)
from roughsim.shocks import NoiseConfig, ShockMatrices, draw_shocks, path_rng
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
from roughsim.validation import InvariantResult, run_invariants
from roughsim.volterra import (
    DiffusionSpec,
    PathSet,
    cholesky_exact_rl,
    convolve_gfo,
    euler_diffusion,
    hybrid_scheme_rl,
    load_binary,
    rdonsker_volterra,
    save_binary,
    save_csv,
    volterra_covariance,
)

__version__ = "0.1.0"
