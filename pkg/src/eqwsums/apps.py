"""Ready-made rules built on equal-weight sums.

* :func:`chebyshev_rule` builds the n-point equal-weight quadrature rule for
  either the symmetric integral over [-x, x] (variant "standard") or the
  one-sided integral over [0, x] (variant "shifted").
* :func:`derivative_formula` builds the n-point rule approximating z h'(z)
  from samples of h, together with its certified node bound and remainder
  envelope.
* :func:`reciprocal_exp_sum` fits the table g(m) = 1/(m+1) by an equal-weight
  exponential sum; its bases coincide with the shifted quadrature nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from ._validation import as_index, as_real, check_solver_options
from .pade import remainder_envelope_arithmetic
from .powersums import nodes_from_power_sums
from .prony import EqualWeightProny, _frequencies_of

QUADRATURE_VARIANTS = ("standard", "shifted")

#: n for which the standard (symmetric) rule has all-real nodes.
REAL_NODE_ORDERS = frozenset({1, 2, 3, 4, 5, 6, 7, 9})

#: Largest n at which the clustered node sets built here stay trustworthy in
#: doubles; beyond it the rules solve their moment problems in extended
#: precision (distinct node sets reproduce these moments to roundoff, so the
#: residual alone cannot certify node locations).
DOUBLE_SAFE_ORDER = 12


def _rule_precision(n):
    return "extended" if n > DOUBLE_SAFE_ORDER else "auto"


@dataclass
class QuadratureRule:
    """Equal-weight quadrature rule x * weight * sum_k h(nodes_k * x).

    ``variant`` "standard" approximates the integral of h over [-x, x];
    "shifted" approximates the integral over [0, x].
    """

    nodes: np.ndarray
    weight: float
    variant: str
    n: int
    moment_residual: float = field(default=0.0)

    @property
    def is_real(self):
        """Whether every node is real (imaginary parts at roundoff level)."""
        scale = max(1.0, float(np.abs(self.nodes).max()))
        return bool(np.abs(self.nodes.imag).max() <= 1e-9 * scale)

    def integrate(self, h, x):
        """Apply the rule: approximate the integral of h up to |x| with sign."""
        x = complex(x)
        return complex(x * self.weight * np.sum(h(self.nodes * x)))


def chebyshev_rule(n, variant="standard", tol=1e-12, max_iter=500):
    """The n-point equal-weight rule integrating polynomials exactly.

    "standard" integrates over [-x, x]: exact through degree n for odd n and
    through degree n + 1 for even n (all odd moments vanish by symmetry).
    "shifted" integrates over [0, x]: exact through degree n.  Nodes may be
    complex; :attr:`QuadratureRule.is_real` reports which.
    """
    n = as_index(n, "n")
    if variant not in QUADRATURE_VARIANTS:
        raise ValueError(
            f"variant must be one of {QUADRATURE_VARIANTS}, got {variant!r}"
        )
    tol, max_iter = check_solver_options(tol, max_iter)
    m = np.arange(1, n + 1, dtype=np.float64)
    if variant == "standard":
        targets = (n / 2.0) * (1.0 + (-1.0) ** m) / (m + 1.0)
        weight = 2.0 / n
        exact = lambda k: mp.mpf(n) * (1 + (-1) ** k) / (2 * (k + 1))
    else:
        targets = n / (m + 1.0)
        weight = 1.0 / n
        exact = lambda k: mp.mpf(n) / (k + 1)
    solution = nodes_from_power_sums(
        targets, tol=tol, max_iter=max_iter, precision=_rule_precision(n), exact=exact
    )
    return QuadratureRule(
        nodes=solution.nodes,
        weight=weight,
        variant=variant,
        n=n,
        moment_residual=solution.residual,
    )


@dataclass
class DerivativeFormula:
    """Equal-weight rule approximating z h'(z) from n + 1 samples of h.

    apply(h, z) = t (-h(0) + (1/n) sum_k h(nodes_k z)).  Exact whenever h is
    a polynomial of degree at most n.  ``node_bound`` certifies
    max |nodes_k| <= (2n + 1) t^(-1/n).
    """

    t: float
    n: int
    mu: float
    nodes: np.ndarray
    node_bound: float
    moment_residual: float

    def apply(self, h, z):
        z = complex(z)
        return complex(self.t * (-h(0.0) + np.mean(h(self.nodes * z))))

    def remainder_bound(self, z_abs):
        """Envelope for |z h'(z) - apply(h, z)| when |h_m| <= 1 for all m.

        Valid for |z| < t^(1/n) / (2n + 1); equals
        2 t^(-1/n) |(2n+1) z|^(n+1) / (1 - (2n+1) t^(-1/n) |z|)^2.
        """
        a = self.t ** (-1.0 / self.n)
        return remainder_envelope_arithmetic(self.t, self.n, a, self.n, z_abs)


def derivative_formula(t, n, tol=1e-12, max_iter=500):
    """Build the n-point differentiation rule with stretch parameter t >= 1.

    The node power sums are (n/t) m for m = 1..n.  Larger t pulls the nodes
    toward the unit circle: max |nodes| <= (2n + 1) t^(-1/n).
    """
    t = as_real(t, "t", minimum=1.0)
    n = as_index(n, "n", minimum=2)
    tol, max_iter = check_solver_options(tol, max_iter)
    m = np.arange(1, n + 1, dtype=np.float64)
    solution = nodes_from_power_sums(
        (n / t) * m,
        tol=tol,
        max_iter=max_iter,
        precision=_rule_precision(n),
        exact=lambda k: mp.mpf(n) * k / mp.mpf(t),
    )
    return DerivativeFormula(
        t=t,
        n=n,
        mu=t,
        nodes=solution.nodes,
        node_bound=(2.0 * n + 1.0) * t ** (-1.0 / n),
        moment_residual=solution.residual,
    )


def reciprocal_exp_sum(n, tol=1e-12, max_iter=500):
    """Equal-weight exponential sum through g(m) = 1/(m+1), m = 0..n.

    Returns a fitted :class:`~eqwsums.prony.EqualWeightProny`.  Its bases are
    exactly the nodes of the shifted quadrature rule (the two solve the same
    moment problem, from the same closed form), and the real parts of its
    frequencies stay below roughly 3 ln n / n for large n.
    """
    n = as_index(n, "n")
    tol, max_iter = check_solver_options(tol, max_iter)
    m = np.arange(1, n + 1, dtype=np.float64)
    solution = nodes_from_power_sums(
        n / (m + 1.0),
        tol=tol,
        max_iter=max_iter,
        precision=_rule_precision(n),
        exact=lambda k: mp.mpf(n) / (k + 1),
    )
    estimator = EqualWeightProny(tol=tol, max_iter=max_iter, precision=_rule_precision(n))
    estimator.n_ = n
    estimator.grid_ = None
    estimator.mu_ = 1.0 + 0.0j
    estimator.bases_ = solution.nodes
    estimator.frequencies_ = _frequencies_of(solution.nodes)
    estimator.moment_residual_ = solution.residual
    estimator.iterations_ = solution.iterations
    return estimator
