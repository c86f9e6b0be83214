"""Proper complex Gaussian-process regression."""

from ._cgpr import (
    KernelParams,
    Model,
    composite_real_mean,
    gram,
    kernel_kinds,
    maximize_likelihood,
    sample_prior,
)

__all__ = [
    "KernelParams",
    "Model",
    "composite_real_mean",
    "gram",
    "kernel_kinds",
    "maximize_likelihood",
    "sample_prior",
]
