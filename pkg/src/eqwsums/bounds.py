"""Certified bounds on node magnitudes under power-sum growth hypotheses.

Two hypotheses are covered, for nodes lambda_1..lambda_n with power sums S_m:

* geometric:  |S_m| <= a^m          =>  max_k |lambda_k| <= (1 + eps_n) a
* weighted:   |S_m| <= gamma m^v a^m (0 <= v <= 1)
              =>  max_k |lambda_k| <= ((1+gamma) n^((v-1)/(n-1)) + gamma) a
                                   <= (1 + 2 gamma) a

eps_n has an exact value (the unique root in (0,1) of
eps^2 = (1 - eps)^(n+1)) and the closed-form majorant
2 (ln n - ln ln n) / n.  The closed form dominates the exact root for every
n >= 2; it stays below 2 ln n / n only for n >= 3 (at n = 2 the middle term
exceeds 2 ln 2 / 2 because ln ln 2 < 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._validation import as_index, as_real, check_solver_options
from .powersums import nodes_from_power_sums
from .polyroots import ComplexPolynomial

#: Absolute tolerance of the bisection for the exact eps_n root.
EPSILON_BISECTION_TOL = 1e-14
_BISECTION_SWEEPS = 60  # interval shrinks to 2^-60 < 1e-14 starting from (0, 1)


def epsilon_closed(n):
    """Closed-form majorant 2 (ln n - ln ln n) / n; accepts scalars or arrays."""
    n_arr = np.asarray(n, dtype=np.float64)
    if np.any(n_arr < 2):
        raise ValueError("n must be at least 2")
    log_n = np.log(n_arr)
    out = 2.0 * (log_n - np.log(log_n)) / n_arr
    return float(out) if np.isscalar(n) or out.ndim == 0 else out


def epsilon_exact(n):
    """Root in (0,1) of eps^2 = (1-eps)^(n+1), by bisection; scalar or array.

    The function eps^2 - (1-eps)^(n+1) is strictly increasing on [0,1] with a
    sign change, so bisection converges unconditionally; 60 halvings reach the
    1e-14 absolute tolerance from the unit interval.
    """
    n_arr = np.asarray(n, dtype=np.float64)
    if np.any(n_arr < 2):
        raise ValueError("n must be at least 2")
    lo = np.zeros_like(n_arr, dtype=np.float64)
    hi = np.ones_like(n_arr, dtype=np.float64)
    exponent = n_arr + 1.0
    with np.errstate(under="ignore"):
        for _ in range(_BISECTION_SWEEPS):
            mid = 0.5 * (lo + hi)
            positive = mid * mid - (1.0 - mid) ** exponent >= 0.0
            hi = np.where(positive, mid, hi)
            lo = np.where(positive, lo, mid)
    out = 0.5 * (lo + hi)
    return float(out) if np.isscalar(n) or out.ndim == 0 else out


@dataclass
class EpsilonBound:
    """The node-bound inflation factor for a given n: exact root and closed form."""

    n: int
    exact: float
    closed: float


def node_bound_epsilon(n):
    """Both versions of eps_n as an :class:`EpsilonBound`."""
    n = as_index(n, "n", minimum=2)
    return EpsilonBound(n=n, exact=epsilon_exact(n), closed=epsilon_closed(n))


def geometric_node_bound(a, n):
    """Certified bound (1 + eps_n) a on max |lambda_k| when |S_m| <= a^m, m = 1..n.

    Uses the closed-form eps_n, so the bound is fully explicit.
    """
    a = as_real(a, "a", minimum=0.0)
    n = as_index(n, "n", minimum=2)
    return (1.0 + epsilon_closed(n)) * a


class NodeBound(NamedTuple):
    """Sharp and coarse versions of the weighted-hypothesis node bound."""

    sharp: float
    coarse: float


def weighted_node_bound(a, gamma, v, n):
    """Node bound under |S_m| <= gamma m^v a^m with 0 <= v <= 1.

    Returns the sharp value ((1+gamma) n^((v-1)/(n-1)) + gamma) a together
    with the coarse simplification (1 + 2 gamma) a; sharp <= coarse always.
    """
    a = as_real(a, "a", minimum=0.0)
    gamma = as_real(gamma, "gamma", minimum=0.0, strict=True)
    v = as_real(v, "v")
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"v must lie in [0, 1], got {v}")
    n = as_index(n, "n", minimum=2)
    sharp = ((1.0 + gamma) * n ** ((v - 1.0) / (n - 1.0)) + gamma) * a
    coarse = (1.0 + 2.0 * gamma) * a
    return NodeBound(sharp=sharp, coarse=coarse)


def elementary_symmetric_bound(a, gamma, v, n):
    """Bounds gamma m^(v-1) (1+gamma)^(m-1) a^m on |sigma_m|, m = 1..n.

    These are implied by the weighted power-sum hypothesis of
    :func:`weighted_node_bound` and drive its proof; exposed for verification.
    """
    a = as_real(a, "a", minimum=0.0)
    gamma = as_real(gamma, "gamma", minimum=0.0, strict=True)
    v = as_real(v, "v")
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"v must lie in [0, 1], got {v}")
    n = as_index(n, "n", minimum=1)
    m = np.arange(1, n + 1, dtype=np.float64)
    return gamma * m ** (v - 1.0) * (1.0 + gamma) ** (m - 1.0) * a**m


def tightness_polynomial(n):
    """Witness polynomial lambda^n - lambda^(n-1) + 2/n showing the geometric
    bound is nearly attained.

    Its power sums satisfy |S_m| <= 1 for m = 1..n, yet it has a root of
    magnitude at least 1 + 1/(10 n) (and at most 1 + 1/n).  Only defined for
    odd n >= 3.
    """
    n = as_index(n, "n", minimum=3)
    if n % 2 == 0:
        raise ValueError("the tightness witness requires odd n")
    coefficients = np.zeros(n + 1, dtype=np.complex128)
    coefficients[0] = 2.0 / n
    coefficients[n - 1] = -1.0
    coefficients[n] = 1.0
    return ComplexPolynomial(coefficients)


@dataclass
class NodeBoundCheck:
    """Outcome of randomized verification of the geometric node bound.

    ``max_ratio`` is the largest observed node magnitude in units of a (so
    the sharp bound asserts max_ratio <= 1 + epsilon_exact); ``violations``
    counts trials exceeding ``bound_sharp`` beyond 1e-8 slack.
    """

    n: int
    a: float
    trials: int
    seed: int
    epsilon_exact: float
    epsilon_closed: float
    bound_sharp: float
    bound_closed: float
    max_node_magnitude: float
    max_ratio: float
    violations: int


def check_node_bound_randomized(n, a, trials=1000, seed=42, tol=1e-12, max_iter=500):
    """Draw random power sums with |s_m| <= a^m and verify the node bound.

    Each trial draws s_m uniformly from the disk of radius a^m (independent
    per-trial generators derived from ``seed``, so results do not depend on
    execution order), recovers the nodes, and counts violations of
    max |lambda_k| <= (1 + eps_n^exact) a + 1e-8.  The sharp exact-root bound
    implies the closed-form one.
    """
    n = as_index(n, "n", minimum=2)
    a = as_real(a, "a", minimum=0.0)
    trials = as_index(trials, "trials", minimum=1)
    seed = as_index(seed, "seed", minimum=0)
    tol, max_iter = check_solver_options(tol, max_iter)

    eps = node_bound_epsilon(n)
    bound_sharp = (1.0 + eps.exact) * a
    bound_closed = (1.0 + eps.closed) * a

    radii = a ** np.arange(1, n + 1, dtype=np.float64)
    worst = 0.0
    violations = 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        magnitude = radii * np.sqrt(rng.random(n))
        phase = np.exp(2j * np.pi * rng.random(n))
        solution = nodes_from_power_sums(magnitude * phase, tol=tol, max_iter=max_iter)
        largest = float(np.abs(solution.nodes).max())
        worst = max(worst, largest)
        if largest > bound_sharp + 1e-8:
            violations += 1

    return NodeBoundCheck(
        n=n,
        a=a,
        trials=trials,
        seed=seed,
        epsilon_exact=eps.exact,
        epsilon_closed=eps.closed,
        bound_sharp=bound_sharp,
        bound_closed=bound_closed,
        max_node_magnitude=worst,
        max_ratio=worst / a if a > 0 else 0.0,
        violations=violations,
    )
