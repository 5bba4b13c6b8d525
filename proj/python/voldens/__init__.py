"""Deconvolution density estimation for stochastic volatility."""

from ._core import (
    ConfigError,
    DeconvKernel,
    DomainError,
    Error,
    IndexError,
    InputError,
    NotFoundError,
    NumericalFailure,
    RangeError,
    bandwidth,
    estimate,
    eval_w,
    gamma0,
    gamma1,
    kernel_moments,
    kernel_names,
    noise_cdf,
    noise_density,
    phi_k,
    phi_w,
    run_experiment,
    sample_noise,
    simulate,
    truth,
)

__version__ = "0.1.0"
