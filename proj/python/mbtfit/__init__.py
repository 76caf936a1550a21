"""Markovian binary tree population models: fitting, selection and simulation."""

from ._core import (
    CapacityError,
    Error,
    Model,
    NumericError,
    OptimizationError,
    ParseError,
    StructuralError,
    aic,
    atmmpp,
    curves,
    extinction_at_age,
    extinction_vector,
    fit_global,
    fit_individual,
    log_likelihood,
    mean_offspring,
    preset,
    simulate,
)

__all__ = [
    "CapacityError",
    "Error",
    "Model",
    "NumericError",
    "OptimizationError",
    "ParseError",
    "StructuralError",
    "aic",
    "atmmpp",
    "curves",
    "extinction_at_age",
    "extinction_vector",
    "fit_global",
    "fit_individual",
    "log_likelihood",
    "mean_offspring",
    "preset",
    "simulate",
]
