"""Minimax interpolation errors and budget allocation for two-fidelity regression."""

from ._core import (  # noqa: F401
    __version__,
    alias_sum,
    baseline_plan,
    benefit_ratio,
    estimate_correlation,
    exponential_error_closed,
    exponential_error_taylor,
    fit_cokriging,
    fit_gp,
    generate_nested_design,
    interpolation_error,
    minimax_error_single,
    minimax_error_vf,
    minimax_kernel,
    optimal_grid,
    optimal_ratio,
    optimal_transfer,
    plan,
    rho_squared_from_corr,
    rrms,
    run_baseline_comparison,
    run_share_sweep,
    sample_gp_realization,
    spiky_lower_bound,
    sqexp_error_bounds,
    threshold_correlation,
    verify_kernel_bound,
    CoKrigingModel,
    GPModel,
)
