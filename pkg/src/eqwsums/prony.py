"""Exponential-sum recovery from sample tables.

Two solvers:

* :class:`EqualWeightProny` fits H(z) = (mu/n) sum_k l_k^z to a table
  g(0)..g(n) on the integer grid (optionally rescaled to an equispaced grid
  on [a, b]).  It is always solvable when g(0) != 0: mu = g(0) and the bases
  l_k are the nodes whose power sums are (n/g(0)) g(m).
* :class:`ClassicalProny` fits sum_k mu_k l_k^m to 2n samples with free
  weights; it requires the generating polynomial to have full degree and
  pairwise distinct roots, and raises :class:`UnsolvableError` naming the
  failed criterion otherwise.

Frequencies are log l_k on the principal branch (|Im| <= pi).  A base equal
to zero has no finite frequency; it is represented by the distinguished
:data:`NEG_INFINITY` marker and its term evaluates to 0 for Re z > 0 and 1 at
z = 0 (other exponents are rejected).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numpy.polynomial import polynomial as npoly
from sklearn.base import BaseEstimator

from ._validation import as_complex_vector, as_real, check_fitted, check_solver_options
from .bounds import epsilon_closed
from .exceptions import IllConditionedError, UnsolvableError
from .polyroots import ComplexPolynomial, find_roots
from .powersums import nodes_from_power_sums


class _NegativeInfinity:
    """Marker for the frequency of a zero base; never enters complex arithmetic."""

    __slots__ = ()

    def __repr__(self):
        return "NEG_INFINITY"


#: Frequency placeholder for zero bases (their exponential term vanishes).
NEG_INFINITY = _NegativeInfinity()


def _frequencies_of(bases):
    return [NEG_INFINITY if base == 0 else complex(np.log(base)) for base in bases]


def _power_terms(bases, exponents):
    """Matrix l_k^w for complex exponents w; rows index exponents, columns bases.

    Zero bases follow the convention 0^0 = 1, 0^w = 0 for Re w > 0, and are
    rejected for any other exponent.
    """
    finite = bases != 0
    terms = np.zeros((len(exponents), len(bases)), dtype=np.complex128)
    if finite.any():
        logs = np.log(bases[finite])
        terms[:, finite] = np.exp(np.multiply.outer(exponents, logs))
    if not finite.all():
        at_zero = exponents == 0
        positive = exponents.real > 0
        bad = ~(at_zero | positive)
        if bad.any():
            raise ValueError(
                "a zero base cannot be raised to an exponent with non-positive "
                "real part (undefined); offending exponent "
                f"{complex(exponents[bad][0])}"
            )
        terms[np.ix_(at_zero, ~finite)] = 1.0
    return terms


class EqualWeightProny(BaseEstimator):
    """Equal-weight exponential sum through a sample table.

    Parameters
    ----------
    grid : None or (a, b)
        ``None`` fits on the integer grid 0..n.  A pair rescales the fit to
        the n+1 equispaced points of [a, b]; evaluation substitutes
        z -> n (z - a)/(b - a).
    tol, max_iter : float, int
        Root-iteration controls.
    precision : str
        "auto" (default), "double", or "extended"; see
        :func:`~eqwsums.powersums.nodes_from_power_sums`.  Pass "extended"
        for tables whose bases cluster (the moment residual alone cannot
        certify base locations there).

    Attributes (after :meth:`fit`)
    ------------------------------
    mu_ : complex              the common weight g(0)
    bases_ : ndarray           bases l_k, canonically ordered
    frequencies_ : list        log l_k (principal branch) or NEG_INFINITY
    moment_residual_ : float   max_m |sum_k l_k^m - (n/g0) g(m)| (absolute)
    """

    def __init__(self, grid=None, tol=1e-12, max_iter=500, precision="auto"):
        self.grid = grid
        self.tol = tol
        self.max_iter = max_iter
        self.precision = precision

    def _grid_bounds(self):
        if self.grid is None:
            return None
        try:
            a, b = self.grid
        except (TypeError, ValueError):
            raise ValueError("grid must be None or a pair (a, b)") from None
        a = as_real(a, "grid start")
        b = as_real(b, "grid end")
        if not b > a:
            raise ValueError(f"grid must satisfy a < b, got ({a}, {b})")
        return a, b

    def fit(self, g, y=None):
        """Fit to table values ``g`` = (g(0), ..., g(n)).  ``y`` is ignored."""
        g = as_complex_vector(g, "g", min_len=2)
        if g[0] == 0:
            raise ValueError("g(0) must be nonzero (it is the common weight)")
        bounds = self._grid_bounds()
        tol, max_iter = check_solver_options(self.tol, self.max_iter)

        n = len(g) - 1
        # divide by g(0) first: tables proportional to g(0), the constant
        # table above all, then produce exact integer moments instead of
        # one-ulp perturbations that split multiple bases by eps^(1/mult)
        targets = n * (g[1:] / g[0])
        solution = nodes_from_power_sums(
            targets, tol=tol, max_iter=max_iter, precision=self.precision
        )

        self.n_ = n
        self.grid_ = bounds
        self.mu_ = complex(g[0])
        self.bases_ = solution.nodes
        self.frequencies_ = _frequencies_of(solution.nodes)
        self.moment_residual_ = solution.residual
        self.iterations_ = solution.iterations
        return self

    def predict(self, z):
        """Evaluate the fitted sum at complex point(s) z."""
        check_fitted(self, "bases_")
        z = np.asarray(z, dtype=np.complex128)
        flat = np.atleast_1d(z).ravel()
        if self.grid_ is not None:
            a, b = self.grid_
            flat = self.n_ * (flat - a) / (b - a)
        terms = _power_terms(self.bases_, flat)
        out = (self.mu_ / self.n_) * terms.sum(axis=1)
        if z.ndim == 0:
            return complex(out[0])
        return out.reshape(z.shape)

    def sample_points(self):
        """The n+1 grid points the table values live on."""
        check_fitted(self, "bases_")
        if self.grid_ is None:
            return np.arange(self.n_ + 1, dtype=np.float64)
        a, b = self.grid_
        return a + (b - a) * np.arange(self.n_ + 1) / self.n_


@dataclass
class TableNodeBounds:
    """Certified bounds on the bases of an equal-weight table fit."""

    hypothesis: str
    a: float
    gamma: float | None
    base_bound: float
    log_real_bound: float


def table_node_bounds(g, a, gamma=None):
    """Certified base-magnitude and frequency bounds from table decay.

    With ``gamma=None`` the declared hypothesis is geometric,
    |g(m)| <= (|g(0)|/n) a^m for m = 1..n, giving max |l_k| <= (1 + eps_n) a
    and Re log l_k <= ln a + eps_n.  With ``gamma`` set it is arithmetic,
    |g(m)| <= (|g(0)|/n) gamma m a^m, giving max |l_k| <= (1 + 2 gamma) a and
    Re log l_k <= ln a + ln(1 + 2 gamma).  Raises ValueError when the data
    violates the declared hypothesis.
    """
    g = as_complex_vector(g, "g", min_len=2)
    if g[0] == 0:
        raise ValueError("g(0) must be nonzero")
    a = as_real(a, "a", minimum=0.0)
    n = len(g) - 1
    m = np.arange(1, n + 1, dtype=np.float64)
    limit = (abs(g[0]) / n) * a**m
    if gamma is not None:
        gamma = as_real(gamma, "gamma", minimum=0.0, strict=True)
        limit = limit * gamma * m
    observed = np.abs(g[1:])
    slack = 1.0 + 1e-12
    if np.any(observed > limit * slack):
        where = int(np.nonzero(observed > limit * slack)[0][0]) + 1
        raise ValueError(
            f"table violates the declared decay hypothesis at m = {where}: "
            f"|g({where})| = {observed[where - 1]:.6g} > {limit[where - 1]:.6g}"
        )
    if gamma is None:
        eps = epsilon_closed(max(n, 2))
        base_bound = (1.0 + eps) * a
        log_real_bound = np.log(a) + eps if a > 0 else -np.inf
        return TableNodeBounds(
            hypothesis="geometric",
            a=a,
            gamma=None,
            base_bound=base_bound,
            log_real_bound=float(log_real_bound),
        )
    base_bound = (1.0 + 2.0 * gamma) * a
    log_real_bound = np.log(a) + np.log1p(2.0 * gamma) if a > 0 else -np.inf
    return TableNodeBounds(
        hypothesis="arithmetic",
        a=a,
        gamma=gamma,
        base_bound=base_bound,
        log_real_bound=float(log_real_bound),
    )


def _has_unresolvable_pair(coefficients, bases, gaps, reach):
    """Whether two computed roots are numerically one double root.

    A plain distance cutoff cannot decide this: double precision resolves a
    double root only to about sqrt(eps), and the value depends on how hard
    the root finder polished.  The scale-free test is the polynomial's
    extremum between the pair: for genuinely distinct roots it stands far
    above coefficient roundoff, for a collapsed pair it sits at noise level.
    """
    eps = np.finfo(np.float64).eps
    degree = len(coefficients) - 1
    first = npoly.polyder(coefficients)
    second = npoly.polyder(coefficients, 2)
    sizes = np.abs(coefficients)
    for i, j in zip(*np.nonzero(gaps < 1e-3 * reach)):
        if i >= j:
            continue
        mid = 0.5 * (bases[i] + bases[j])
        curvature = npoly.polyval(mid, second)
        if curvature == 0:
            continue
        critical = mid - npoly.polyval(mid, first) / curvature
        value = abs(npoly.polyval(critical, coefficients))
        powers = np.abs(critical) ** np.arange(degree + 1)
        noise = eps * float(powers @ sizes)
        if value <= 64.0 * (degree + 1) * noise:
            return True
    return False


class ClassicalProny(BaseEstimator):
    """Weighted exponential sum sum_k mu_k l_k^m through 2n samples.

    Solvable only when the generating polynomial has full degree n (tested by
    the relative smallest singular value of the sample Hankel matrix against
    ``hankel_rtol``) and its roots are pairwise distinct; otherwise
    :class:`UnsolvableError` names the failed criterion.  Roots collide when
    closer than ``root_separation`` (relative), or when the generating
    polynomial cannot tell them apart from a double root at double precision
    (its extremum between the pair is at coefficient-roundoff level).  Root
    finding always runs at the double-precision floor; ``tol`` can tighten
    the target but not loosen it, since collision detection depends on fully
    polished roots.

    The weights come from the first n samples via a Vandermonde solve, and
    the remaining n samples are verified as a residual: exceeding
    ``residual_rtol`` (relative to the sample scale) raises
    :class:`IllConditionedError`.
    """

    def __init__(
        self,
        hankel_rtol=1e-10,
        root_separation=1e-8,
        residual_rtol=1e-6,
        tol=1e-12,
        max_iter=500,
    ):
        self.hankel_rtol = hankel_rtol
        self.root_separation = root_separation
        self.residual_rtol = residual_rtol
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, s, y=None):
        """Fit to samples ``s`` = (s_0, ..., s_{2n-1}).  ``y`` is ignored."""
        s = as_complex_vector(s, "s", min_len=2)
        if len(s) % 2:
            raise ValueError(
                f"need an even number of samples (2n), got {len(s)}"
            )
        hankel_rtol = as_real(self.hankel_rtol, "hankel_rtol", minimum=0.0)
        separation = as_real(self.root_separation, "root_separation", minimum=0.0)
        residual_rtol = as_real(self.residual_rtol, "residual_rtol", minimum=0.0, strict=True)
        tol, max_iter = check_solver_options(self.tol, self.max_iter)

        n = len(s) // 2
        hankel = scipy.linalg.hankel(s[:n], s[n - 1 : 2 * n - 1])
        singular = np.linalg.svd(hankel, compute_uv=False)
        if singular[0] == 0 or singular[-1] <= hankel_rtol * singular[0]:
            raise UnsolvableError(
                "generating polynomial is degree-deficient (sample Hankel matrix "
                f"is rank-deficient at relative tolerance {hankel_rtol:g})",
                reason="degree-deficient",
            )
        low_coefficients = np.linalg.solve(hankel, -s[n:])
        generating = ComplexPolynomial(np.append(low_coefficients, 1.0))
        bases = find_roots(generating, tol=min(tol, 1e-15), max_iter=max_iter).roots

        if n > 1:
            gaps = np.abs(bases[:, None] - bases[None, :])
            np.fill_diagonal(gaps, np.inf)
            reach = max(1.0, float(np.abs(bases).max()))
            if gaps.min() < separation * reach or _has_unresolvable_pair(
                generating.coefficients, bases, gaps, reach
            ):
                raise UnsolvableError(
                    "generating polynomial has repeated roots (pairwise distinct "
                    "roots are required; the colliding pair is below the "
                    f"{separation:g} relative separation or at roundoff level)",
                    reason="repeated-roots",
                )

        vandermonde = np.vander(bases, n, increasing=True).T
        weights = np.linalg.solve(vandermonde, s[:n])

        back = _power_terms(bases, np.arange(n, 2 * n, dtype=np.complex128))
        residual = float(np.abs(back @ weights - s[n:]).max())
        scale = max(1.0, float(np.abs(s).max()))
        if residual > residual_rtol * scale:
            raise IllConditionedError(
                f"back-half residual {residual:.3e} exceeds {residual_rtol:g} "
                "relative to the sample scale; the recovered sum does not "
                "reproduce the data"
            )

        self.n_ = n
        self.weights_ = weights
        self.bases_ = bases
        self.frequencies_ = _frequencies_of(bases)
        self.residual_ = residual
        return self

    def predict(self, z):
        """Evaluate the fitted weighted sum at complex point(s) z."""
        check_fitted(self, "bases_")
        z = np.asarray(z, dtype=np.complex128)
        flat = np.atleast_1d(z).ravel()
        terms = _power_terms(self.bases_, flat)
        out = terms @ self.weights_
        if z.ndim == 0:
            return complex(out[0])
        return out.reshape(z.shape)
