"""Small input-validation helpers used across the public API."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.exceptions import NotFittedError


def as_complex_vector(values, name="values", min_len=1):
    """Coerce to a 1-d complex128 array, rejecting non-finite entries."""
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_len:
        raise ValueError(f"{name} needs at least {min_len} entries, got {arr.size}")
    if arr.dtype == object or not np.issubdtype(arr.dtype, np.number):
        raise ValueError(f"{name} must be numeric")
    arr = arr.astype(np.complex128)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_index(value, name, minimum=1):
    if not isinstance(value, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be at least {minimum}, got {value}")
    return value


def as_real(value, name, minimum=None, strict=False):
    if isinstance(value, numbers.Real) and not isinstance(value, bool):
        value = float(value)
    else:
        raise ValueError(f"{name} must be a real number, got {value!r}")
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite")
    if minimum is not None:
        if strict and value <= minimum:
            raise ValueError(f"{name} must be greater than {minimum}, got {value}")
        if not strict and value < minimum:
            raise ValueError(f"{name} must be at least {minimum}, got {value}")
    return value


def check_solver_options(tol, max_iter):
    tol = as_real(tol, "tol", minimum=0.0, strict=True)
    max_iter = as_index(max_iter, "max_iter", minimum=1)
    return tol, max_iter


def check_fitted(estimator, attribute):
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} instance is not fitted yet; call fit first"
        )
