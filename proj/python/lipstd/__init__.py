"""Likelihood-smoothness scaling for mixed tabular data."""

from ._core import (  # noqa: F401
    __version__,
    apply_bernoulli_trick,
    apply_gamma_trick,
    baseline_omega,
    digamma,
    end_to_end_recovery_error,
    estimate_smoothness,
    estimate_smoothness_fd,
    fit_empirical,
    from_natural,
    log_gamma,
    log_pdf,
    recover_bernoulli,
    recover_categorical,
    recover_poisson,
    run_cli,
    scale_natural,
    smoothness_after_standardization,
    solve_omega,
    solve_quartic_positive_root,
    to_natural,
    transform_data,
    trigamma,
    unscale_natural,
)
