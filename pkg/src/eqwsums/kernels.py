"""Kernels h(z) usable in the equal-weight sum (mu/n) sum_k h(lambda_k z).

A kernel is callable on complex arrays and exposes its Taylor coefficients
around 0.  Two closed-form kernels are built in; arbitrary kernels are given
by truncated Taylor coefficients with a declared convergence radius.
"""

from __future__ import annotations

import numpy as np

from ._validation import as_complex_vector, as_real

#: Calling the rational kernel closer to its pole than this raises.
POLE_TOLERANCE = 1e-12


class ExpKernel:
    """The entire kernel exp(z); Taylor coefficients 1/m!."""

    name = "exp"
    radius = np.inf

    def coefficients(self, up_to):
        out = np.empty(up_to + 1, dtype=np.complex128)
        out[0] = 1.0
        for m in range(1, up_to + 1):
            out[m] = out[m - 1] / m
        return out

    def __call__(self, w):
        return np.exp(np.asarray(w, dtype=np.complex128))


class GeometricKernel:
    """The rational kernel 1/(z - 1); every Taylor coefficient is -1.

    The series converges for |z| < 1 but the closed form is evaluated
    everywhere except within ``POLE_TOLERANCE`` of the pole at z = 1.
    """

    name = "geometric"
    radius = 1.0

    def coefficients(self, up_to):
        return np.full(up_to + 1, -1.0, dtype=np.complex128)

    def __call__(self, w):
        w = np.asarray(w, dtype=np.complex128)
        if np.any(np.abs(w - 1.0) <= POLE_TOLERANCE):
            raise ValueError(
                f"kernel evaluated within {POLE_TOLERANCE:g} of its pole at 1"
            )
        return 1.0 / (w - 1.0)


class TaylorKernel:
    """Kernel given by truncated Taylor coefficients and a declared radius.

    Evaluation outside the declared radius is rejected rather than silently
    extrapolated.  The truncation error of an evaluation is bounded by the
    geometric tail implied by the radius (see :meth:`tail_bound`); with the
    default infinite radius the stored coefficients are taken as the complete
    (polynomial) kernel and the tail is zero.
    """

    name = "taylor"

    def __init__(self, coefficients, radius=np.inf):
        self._coefficients = as_complex_vector(coefficients, "coefficients")
        if radius != np.inf:
            radius = as_real(radius, "radius", minimum=0.0, strict=True)
        self.radius = float(radius)

    @property
    def order(self):
        return len(self._coefficients) - 1

    def coefficients(self, up_to):
        if up_to > self.order:
            if np.isfinite(self.radius):
                raise ValueError(
                    f"kernel coefficients are available only through order {self.order}, "
                    f"requested {up_to}"
                )
            out = np.zeros(up_to + 1, dtype=np.complex128)
            out[: self.order + 1] = self._coefficients
            return out
        return self._coefficients[: up_to + 1].copy()

    def __call__(self, w):
        w = np.asarray(w, dtype=np.complex128)
        if np.isfinite(self.radius) and np.any(np.abs(w) >= self.radius):
            raise ValueError(
                f"kernel argument outside the declared radius {self.radius:g}"
            )
        return np.polynomial.polynomial.polyval(w, self._coefficients)

    def tail_bound(self, magnitude):
        """Geometric bound on the truncation error at argument magnitude |w|."""
        magnitude = as_real(magnitude, "magnitude", minimum=0.0)
        if not np.isfinite(self.radius):
            return 0.0
        ratio = magnitude / self.radius
        if ratio >= 1.0:
            raise ValueError("magnitude is outside the declared radius")
        scale = float(
            np.max(np.abs(self._coefficients) * self.radius ** np.arange(self.order + 1))
        )
        return scale * ratio ** (self.order + 1) / (1.0 - ratio)


def resolve_kernel(kernel):
    """Accept a kernel name, kernel object, or a coefficient array."""
    if isinstance(kernel, str):
        if kernel == "exp":
            return ExpKernel()
        if kernel == "geometric":
            return GeometricKernel()
        raise ValueError(f"unknown kernel name {kernel!r}; use 'exp' or 'geometric'")
    if callable(kernel) and hasattr(kernel, "coefficients"):
        return kernel
    return TaylorKernel(kernel)
