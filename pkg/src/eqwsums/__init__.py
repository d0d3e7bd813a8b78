"""Equal-weight exponential and series interpolation.

Approximates a function by a sum with a single common weight,

    H(z) = (mu / n) * sum_k h(lambda_k z),

matching either Taylor coefficients (:class:`PadeInterpolator`) or samples on
an integer grid (:class:`EqualWeightProny`).  The nodes lambda_k are the
solution of a power-sum moment problem (:func:`nodes_from_power_sums`), and
certified bounds on their magnitude follow from the decay of the data
(:func:`geometric_node_bound`, :func:`weighted_node_bound`).  Ready-made
rules for quadrature and differentiation live in :mod:`eqwsums.apps`.
"""

from .apps import (
    REAL_NODE_ORDERS,
    DerivativeFormula,
    QuadratureRule,
    chebyshev_rule,
    derivative_formula,
    reciprocal_exp_sum,
)
from .bounds import (
    EpsilonBound,
    NodeBound,
    NodeBoundCheck,
    check_node_bound_randomized,
    elementary_symmetric_bound,
    epsilon_closed,
    epsilon_exact,
    geometric_node_bound,
    node_bound_epsilon,
    tightness_polynomial,
    weighted_node_bound,
)
from .exceptions import (
    ConditioningError,
    IllConditionedError,
    NonConvergenceError,
    NumericalError,
    UnsolvableError,
)
from .kernels import ExpKernel, GeometricKernel, TaylorKernel, resolve_kernel
from .pade import (
    PadeInterpolator,
    compatibility_ratios,
    remainder_envelope_arithmetic,
    remainder_envelope_geometric,
)
from .polyroots import ComplexPolynomial, RootResult, find_roots
from .powersums import (
    NewtonSolution,
    monic_polynomial,
    multiset_distance,
    newton_girard,
    nodes_from_power_sums,
    power_sums,
)
from .prony import (
    NEG_INFINITY,
    ClassicalProny,
    EqualWeightProny,
    TableNodeBounds,
    table_node_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "ClassicalProny",
    "ComplexPolynomial",
    "ConditioningError",
    "DerivativeFormula",
    "EpsilonBound",
    "EqualWeightProny",
    "ExpKernel",
    "GeometricKernel",
    "IllConditionedError",
    "NEG_INFINITY",
    "NewtonSolution",
    "NodeBound",
    "NodeBoundCheck",
    "NonConvergenceError",
    "NumericalError",
    "PadeInterpolator",
    "QuadratureRule",
    "REAL_NODE_ORDERS",
    "RootResult",
    "TableNodeBounds",
    "TaylorKernel",
    "UnsolvableError",
    "check_node_bound_randomized",
    "chebyshev_rule",
    "compatibility_ratios",
    "derivative_formula",
    "elementary_symmetric_bound",
    "epsilon_closed",
    "epsilon_exact",
    "find_roots",
    "geometric_node_bound",
    "monic_polynomial",
    "multiset_distance",
    "newton_girard",
    "node_bound_epsilon",
    "nodes_from_power_sums",
    "power_sums",
    "reciprocal_exp_sum",
    "remainder_envelope_arithmetic",
    "remainder_envelope_geometric",
    "resolve_kernel",
    "table_node_bounds",
    "tightness_polynomial",
    "weighted_node_bound",
]
