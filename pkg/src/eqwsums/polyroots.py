"""Simultaneous complex polynomial root solving.

All roots are refined together with an Aberth-Ehrlich update, falling back to
a Weierstrass correction for points where the Aberth denominator degenerates.
Acceptance is residual-based: a point is converged once the polynomial value
there is below ``tol`` relative to the coefficient scale, or below the
double-precision evaluation-roundoff floor (in which case the result is
flagged, since no further decrease is measurable).

Multiple roots are returned as clusters of simple-root approximations; the
residual test still holds for them, there is no deflation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._validation import as_complex_vector, check_solver_options
from .exceptions import NonConvergenceError

_EPS = float(np.finfo(np.float64).eps)


@dataclass
class ComplexPolynomial:
    """Polynomial with complex coefficients in ascending degree order.

    The leading coefficient must be nonzero; the zero polynomial is rejected.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = as_complex_vector(self.coefficients, "coefficients")
        if self.coefficients[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coefficients)


@dataclass
class RootResult:
    """Roots in canonical order plus the measured residual quality.

    ``max_residual`` is max over roots of |P(root)| divided by
    max(1, max coefficient magnitude).  ``limited_by_precision`` is set when
    some root's residual sits above ``tol`` but below the double-precision
    evaluation floor, i.e. the iteration converged as far as doubles can
    certify.
    """

    roots: np.ndarray
    max_residual: float
    iterations: int
    limited_by_precision: bool = field(default=False)


def _canonical_order(roots):
    # sort by real part, then imaginary part, then magnitude
    order = np.lexsort((np.abs(roots), roots.imag, roots.real))
    return roots[order]


def _eval_poly(coefficients, points):
    if len(points) == 0:
        return np.zeros(0, dtype=np.complex128)
    powers = np.vander(points, len(coefficients), increasing=True)
    return powers @ coefficients


def _aberth(monic, tol, max_iter, lead_abs, zero_count, scale):
    """Iterate on a monic polynomial (ascending coefficients, degree >= 2).

    Residuals are measured against the original polynomial through the exact
    identity |P(z)| = |c_lead| * |z|^zero_count * |monic(z)|.
    Returns (points, iterations, converged, limited_by_precision).
    """
    m = len(monic) - 1
    deriv = monic[1:] * np.arange(1, m + 1)
    cauchy_radius = 1.0 + float(np.abs(monic[:-1]).max())
    # the Cauchy bound explodes for unbalanced coefficients (evaluating there
    # overflows); the Fujiwara bound also encloses every root and scales right
    fujiwara_radius = 2.0 * float(
        np.max(np.abs(monic[-2::-1]) ** (1.0 / np.arange(1.0, m + 1.0)))
    )
    start_radius = min(cauchy_radius, fujiwara_radius)
    angles = 2.0 * np.pi * np.arange(m) / m + np.pi / (2.0 * m)
    z = start_radius * np.exp(1j * angles)
    ceiling = 4.0 * start_radius + 1.0

    abs_monic = np.abs(monic)
    converged = False
    limited = False
    iterations = 0

    for it in range(1, max_iter + 1):
        iterations = it
        powers = np.vander(z, m + 1, increasing=True)
        values = powers @ monic
        slopes = powers[:, :m] @ deriv

        magnitude = np.abs(z)
        tail = magnitude**zero_count if zero_count else 1.0
        residual = lead_abs * np.abs(values) * tail / scale
        # roundoff floor of evaluating P at these points in doubles
        floor = 4.0 * (m + 1) * _EPS * lead_abs * (np.abs(powers) @ abs_monic) * tail / scale
        if np.all(residual <= np.maximum(tol, floor)):
            converged = True
            limited = bool(np.any(residual > tol))
            break

        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            newton = values / slopes
            pairwise = z[:, None] - z[None, :]
            np.fill_diagonal(pairwise, 1.0)
            repulsion = 1.0 / pairwise
            np.fill_diagonal(repulsion, 0.0)
            step = newton / (1.0 - newton * repulsion.sum(axis=1))
            bad = ~np.isfinite(step)
            if bad.any():
                # Weierstrass correction: P(z_i) / prod_{j != i} (z_i - z_j)
                weier = values / pairwise.prod(axis=1)
                step[bad] = weier[bad]
                bad = ~np.isfinite(step)
        if bad.any():
            # stuck points restart on a rotated circle; deterministic in `it`
            step[bad] = 0.0
            z = z - step
            idx = np.nonzero(bad)[0]
            z[idx] = start_radius * np.exp(1j * (angles[idx] + 0.37 * it))
        else:
            z = z - step
        runaway = np.abs(z) > ceiling
        if runaway.any():
            z[runaway] *= ceiling / np.abs(z[runaway])

    if converged:
        # guarded Newton polish: keep per-point updates only when they reduce |P|
        for _ in range(2):
            powers = np.vander(z, m + 1, increasing=True)
            values = powers @ monic
            slopes = powers[:, :m] @ deriv
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                candidate = z - values / slopes
            usable = np.isfinite(candidate)
            if not usable.any():
                break
            improved = np.zeros_like(usable)
            new_values = _eval_poly(monic, candidate[usable])
            improved[usable] = np.abs(new_values) < np.abs(values[usable])
            z[improved] = candidate[improved]

    return z, iterations, converged, limited


def find_roots(p, tol=1e-12, max_iter=500):
    """Find all roots of ``p`` (a :class:`ComplexPolynomial` or ascending coefficients).

    Deterministic: identical inputs give bit-identical results.  Exact zero
    roots (trailing zero coefficients) are split off before iterating.  Raises
    :class:`NonConvergenceError`, carrying the best points reached, when the
    residual test is not met within ``max_iter`` sweeps.
    """
    if not isinstance(p, ComplexPolynomial):
        p = ComplexPolynomial(p)
    tol, max_iter = check_solver_options(tol, max_iter)
    coefficients = p.coefficients
    degree = p.degree
    if degree < 1:
        raise ValueError("polynomial must have degree at least 1")

    scale = max(1.0, float(np.abs(coefficients).max()))
    zero_count = int(np.nonzero(coefficients)[0][0])
    reduced = coefficients[zero_count:] / coefficients[-1]
    reduced_degree = len(reduced) - 1

    converged = True
    limited = False
    iterations = 0
    if reduced_degree == 0:
        found = np.zeros(0, dtype=np.complex128)
    elif reduced_degree == 1:
        found = np.array([-reduced[0]], dtype=np.complex128)
    else:
        found, iterations, converged, limited = _aberth(
            reduced, tol, max_iter, abs(coefficients[-1]), zero_count, scale
        )

    roots = np.concatenate([np.zeros(zero_count, dtype=np.complex128), found])
    roots = _canonical_order(roots)
    max_residual = float(np.abs(_eval_poly(coefficients, roots)).max() / scale)

    if not converged:
        raise NonConvergenceError(
            f"root iteration did not meet the residual tolerance {tol:g} within "
            f"{max_iter} sweeps (best scaled residual {max_residual:.3e})",
            roots=roots,
            residual=max_residual,
            iterations=iterations,
        )
    return RootResult(
        roots=roots,
        max_residual=max_residual,
        iterations=iterations,
        limited_by_precision=limited,
    )
