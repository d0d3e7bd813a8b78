"""Equal-weight interpolation of a power series against a kernel.

Given Taylor coefficients f_0..f_n of f and a kernel h with h_0 != 0, the
interpolant H(z) = (mu/n) sum_k h(lambda_k z) matches the series of f through
order n, with mu = f_0/h_0 and node power sums S_m = (n/mu) f_m/h_m.  The fit
requires f_0 != 0 and that f_m vanishes wherever h_m does.

Remainder envelopes: when the coefficient ratios r_m = f_m/h_m decay like
(|r_0|/n) a^m (geometric hypothesis) or (|r_0|/n) gamma m a^m (arithmetic
hypothesis), |f(z) - H(z)| admits the explicit majorants implemented at the
bottom of this module, valid inside the stated disk.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import as_complex_vector, as_index, as_real, check_fitted, check_solver_options
from .bounds import epsilon_closed
from .kernels import resolve_kernel
from .powersums import nodes_from_power_sums, power_sums


def compatibility_ratios(f, kernel, n):
    """Coefficient ratios r_0..r_n with r_m = f_m/h_m (r_m = 0 where f_m = 0).

    Rejects series with f_0 = 0 (factor out the leading power of z and reduce
    n before fitting) and kernel gaps (h_m = 0 while f_m != 0 for some
    m <= n).
    """
    f = as_complex_vector(f, "f")
    n = as_index(n, "n", minimum=1)
    if len(f) < n + 1:
        raise ValueError(
            f"need series coefficients through order {n}, got only {len(f) - 1}"
        )
    kernel = resolve_kernel(kernel)
    h = kernel.coefficients(n)
    if f[0] == 0:
        raise ValueError(
            "series has zero constant term; divide out the leading power of z "
            "and fit the reduced series instead"
        )
    nonzero = f[: n + 1] != 0
    gaps = nonzero & (h == 0)
    if gaps.any():
        where = int(np.nonzero(gaps)[0][0])
        raise ValueError(
            f"kernel gap at order {where}: kernel coefficient is zero but the "
            "series coefficient is not"
        )
    ratios = np.zeros(n + 1, dtype=np.complex128)
    ratios[nonzero] = f[: n + 1][nonzero] / h[nonzero]
    return ratios


class PadeInterpolator(BaseEstimator):
    """Equal-weight sum matching a power series through order n.

    Parameters
    ----------
    n : int or None
        Number of nodes; the series must supply coefficients through this
        order.  ``None`` uses every supplied coefficient.
    kernel : str, array-like or kernel object
        ``"exp"``, ``"geometric"``, Taylor coefficients, or any object from
        :mod:`eqwsums.kernels`.
    tol, max_iter : float, int
        Root-iteration controls, passed through to the moment solver.
    precision : str
        "auto" (default), "double", or "extended"; see
        :func:`~eqwsums.powersums.nodes_from_power_sums`.

    Attributes (after :meth:`fit`)
    ------------------------------
    mu_ : complex          leading weight f_0/h_0 (never zero)
    nodes_ : ndarray       the n nodes lambda_k, canonically ordered
    ratios_ : ndarray      coefficient ratios r_0..r_n
    moment_residual_ : float   max_m |S_m(nodes) - target| (absolute)
    """

    def __init__(self, n=None, kernel="exp", tol=1e-12, max_iter=500, precision="auto"):
        self.n = n
        self.kernel = kernel
        self.tol = tol
        self.max_iter = max_iter
        self.precision = precision

    def fit(self, f, y=None):
        """Fit to Taylor coefficients ``f`` (f_0 first).  ``y`` is ignored."""
        f = as_complex_vector(f, "f", min_len=2)
        n = len(f) - 1 if self.n is None else as_index(self.n, "n", minimum=1)
        tol, max_iter = check_solver_options(self.tol, self.max_iter)
        kernel = resolve_kernel(self.kernel)

        ratios = compatibility_ratios(f, kernel, n)
        mu = complex(ratios[0])
        targets = (n / mu) * ratios[1:]
        solution = nodes_from_power_sums(
            targets, tol=tol, max_iter=max_iter, precision=self.precision
        )

        self.n_ = n
        self.kernel_ = kernel
        self.mu_ = mu
        self.ratios_ = ratios
        self.nodes_ = solution.nodes
        self.moment_residual_ = solution.residual
        self.iterations_ = solution.iterations
        return self

    def predict(self, z):
        """Evaluate the interpolant at complex point(s) z."""
        check_fitted(self, "nodes_")
        z = np.asarray(z, dtype=np.complex128)
        flat = np.atleast_1d(z)
        values = self.kernel_(np.multiply.outer(flat, self.nodes_))
        out = (self.mu_ / self.n_) * values.sum(axis=-1)
        return complex(out[0]) if z.ndim == 0 else out

    def taylor(self, up_to):
        """Taylor coefficients of the interpolant through order ``up_to``.

        Coefficient m is h_m (mu/n) S_m with S_0 = n, so coefficients through
        order n reproduce the fitted series.
        """
        check_fitted(self, "nodes_")
        up_to = as_index(up_to, "up_to", minimum=0)
        h = self.kernel_.coefficients(up_to)
        sums = np.empty(up_to + 1, dtype=np.complex128)
        sums[0] = self.n_
        if up_to >= 1:
            sums[1:] = power_sums(self.nodes_, up_to)
        return h * (self.mu_ / self.n_) * sums


def remainder_envelope_geometric(r0_abs, a, n, z_abs):
    """Remainder majorant under the geometric ratio hypothesis |r_m| <= (|r_0|/n) a^m.

    Valid for |z| < 1/((1 + eps_n) a); outside that disk a ValueError is
    raised.  At z = 0 the envelope is 0.
    """
    r0_abs = as_real(r0_abs, "r0_abs", minimum=0.0)
    a = as_real(a, "a", minimum=0.0)
    n = as_index(n, "n", minimum=2)
    z_abs = as_real(z_abs, "z_abs", minimum=0.0)
    shrink = (1.0 + epsilon_closed(n)) * a * z_abs
    if shrink >= 1.0:
        raise ValueError(
            "point lies outside the envelope disk |z| < 1/((1+eps_n) a)"
        )
    return 2.0 * r0_abs * n**2 * (a * z_abs) ** (n + 1) / (1.0 - shrink)


def remainder_envelope_arithmetic(r0_abs, gamma, a, n, z_abs):
    """Remainder majorant under |r_m| <= (|r_0|/n) gamma m a^m.

    Valid for |z| < 1/((1 + 2 gamma) a); outside that disk a ValueError is
    raised.
    """
    r0_abs = as_real(r0_abs, "r0_abs", minimum=0.0)
    gamma = as_real(gamma, "gamma", minimum=0.0, strict=True)
    a = as_real(a, "a", minimum=0.0)
    n = as_index(n, "n", minimum=2)
    z_abs = as_real(z_abs, "z_abs", minimum=0.0)
    grow = (1.0 + 2.0 * gamma) * a
    if grow * z_abs >= 1.0:
        raise ValueError(
            "point lies outside the envelope disk |z| < 1/((1+2 gamma) a)"
        )
    return 2.0 * r0_abs * (grow * z_abs) ** (n + 1) / (1.0 - grow * z_abs) ** 2
