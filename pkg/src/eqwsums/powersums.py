"""Power sums, elementary symmetric polynomials, and node recovery.

Given power sums s_1..s_n, the node multiset with exactly those power sums is
unique and is recovered via the Newton-Girard recurrence: power sums ->
elementary symmetric polynomials -> monic polynomial -> roots.  The pipeline
is deterministic end to end.

Conditioning deteriorates as n grows (the CLI caps n at 60 by default for
this reason); the round-trip residual max_m |S_m(nodes) - s_m| is always
measured and reported so the caller can judge the solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp
import numpy as np
from numpy.polynomial import polynomial as npoly

from ._validation import as_complex_vector, check_solver_options
from .exceptions import ConditioningError, NonConvergenceError
from .polyroots import ComplexPolynomial, _canonical_order, find_roots

#: Abort threshold for intermediate elementary-symmetric magnitudes.
SIGMA_OVERFLOW_LIMIT = 1e150

#: Escalate to the arbitrary-precision path when the double-precision solve
#: cannot push max_m |S_m - s_m| below this times max(1, max|s_m|).
ESCALATION_RTOL = 1e-9


def power_sums(nodes, up_to):
    """Power sums S_m = sum_k nodes_k^m for m = 1..up_to."""
    nodes = as_complex_vector(nodes, "nodes")
    if up_to < 1:
        raise ValueError(f"up_to must be at least 1, got {up_to}")
    out = np.empty(int(up_to), dtype=np.complex128)
    running = np.ones_like(nodes)
    for m in range(int(up_to)):
        running = running * nodes
        out[m] = running.sum()
    return out


def newton_girard(moments):
    """Elementary symmetric polynomials sigma_1..sigma_n from power sums s_1..s_n.

    sigma_1 = s_1 and, for m >= 2,
    sigma_m = ((-1)^(m+1) / m) * (s_m + sum_{j=1}^{m-1} (-1)^j s_{m-j} sigma_j).

    Raises :class:`ConditioningError` if any |sigma_m| exceeds
    ``SIGMA_OVERFLOW_LIMIT``.
    """
    s = as_complex_vector(moments, "moments")
    n = len(s)
    sigma = np.zeros(n, dtype=np.complex128)
    sigma[0] = s[0]
    if abs(sigma[0]) > SIGMA_OVERFLOW_LIMIT:
        raise ConditioningError("elementary symmetric value sigma_1 overflows the safe range")
    signs = np.empty(n, dtype=np.float64)
    signs[0::2] = -1.0
    signs[1::2] = 1.0
    for m in range(2, n + 1):
        # pair s_{m-1}..s_1 with sigma_1..sigma_{m-1}, signs (-1)^j
        inner = np.sum(signs[: m - 1] * s[: m - 1][::-1] * sigma[: m - 1])
        value = ((-1.0) ** (m + 1) / m) * (s[m - 1] + inner)
        if not np.isfinite(value) or abs(value) > SIGMA_OVERFLOW_LIMIT:
            raise ConditioningError(
                f"elementary symmetric value sigma_{m} overflows the safe range; "
                "the requested problem size is beyond double precision"
            )
        sigma[m - 1] = value
    return sigma


def monic_polynomial(sigmas):
    """Monic polynomial whose roots have the given elementary symmetric values.

    lambda^n - sigma_1 lambda^(n-1) + sigma_2 lambda^(n-2) - ... + (-1)^n sigma_n,
    returned with ascending coefficients.
    """
    sigmas = as_complex_vector(sigmas, "sigmas")
    n = len(sigmas)
    coefficients = np.empty(n + 1, dtype=np.complex128)
    coefficients[n] = 1.0
    coefficients[:n] = sigmas[::-1] * (-1.0) ** np.arange(n, 0, -1)
    return ComplexPolynomial(coefficients)


@dataclass
class NewtonSolution:
    """Nodes recovered from power sums, and how well they reproduce them.

    ``residual`` is max_m |S_m(nodes) - s_m| (absolute); ``root_residual`` is
    the scaled polynomial residual reported by the root finder.
    """

    nodes: np.ndarray
    residual: float
    root_residual: float
    iterations: int


_CLUSTER_LADDER = (1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 5e-2)


def _single_linkage(roots, threshold):
    """Group root indices whose chain of pairwise gaps stays under threshold."""
    parent = list(range(len(roots)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    gaps = np.abs(roots[:, None] - roots[None, :])
    for i, j in zip(*np.nonzero(gaps < threshold)):
        if i < j:
            parent[find(int(j))] = find(int(i))
    groups = {}
    for i in range(len(roots)):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(members) for members in groups.values())


def _refined_multiple_root(coefficients, start, multiplicity):
    """Polish a multiplicity-m root: Newton on the (m-1)th derivative.

    The (m-1)th derivative has a simple root there, so the iteration is
    quadratic where direct Newton stalls at linear rate.
    """
    reduced = coefficients
    for _ in range(multiplicity - 1):
        reduced = npoly.polyder(reduced)
    slope = npoly.polyder(reduced)
    value = start
    for _ in range(60):
        denominator = npoly.polyval(value, slope)
        if denominator == 0:
            break
        step = npoly.polyval(value, reduced) / denominator
        value = value - step
        if abs(step) <= 1e-16 * max(1.0, abs(value)):
            break
    return value


def _best_cluster_collapse(coefficients, roots, beta, s):
    """Try collapsing root clusters to refined multiple roots.

    A residual-tolerance stop spreads a multiplicity-m root over a disk of
    radius about tol^(1/m), which ruins the recovered power sums even though
    every point passes the polynomial residual test.  Each single-linkage
    clustering on a fixed radius ladder proposes collapsed nodes; a proposal
    is kept only if it strictly improves max_m |S_m - s_m|, so genuinely
    distinct close roots are never merged.
    """
    n = len(roots)
    nodes = beta * roots
    residual = float(np.abs(power_sums(nodes, n) - s).max())
    scale = max(1.0, float(np.abs(roots).max()))
    seen = set()
    for level in _CLUSTER_LADDER:
        groups = _single_linkage(roots, level * scale)
        if groups in seen or all(len(g) == 1 for g in groups):
            continue
        seen.add(groups)
        collapsed = roots.copy()
        for group in groups:
            if len(group) == 1:
                continue
            center = roots[list(group)].mean()
            collapsed[list(group)] = _refined_multiple_root(
                coefficients, center, len(group)
            )
        candidate = _canonical_order(beta * collapsed)
        candidate_residual = float(np.abs(power_sums(candidate, n) - s).max())
        if candidate_residual < residual:
            nodes, residual = candidate, candidate_residual
    return nodes, residual


def _forward_error_estimate(coefficients, roots, beta):
    """First-order node displacement caused by coefficient roundoff.

    Coefficient ulps move a simple root x_k by roughly
    eps * sum_m |c_m x_k^(n-m)| / |p'(x_k)|, with p'(x_k) the product of
    separations from the other computed roots.  The moment residual cannot
    see this loss (crowded balanced roots reproduce the moments to roundoff
    while sitting far from the true nodes), so the estimate is what decides
    escalation.  Returned in node units, i.e. scaled back by ``beta``.
    """
    differences = roots[:, None] - roots[None, :]
    np.fill_diagonal(differences, 1.0)
    with np.errstate(divide="ignore", under="ignore"):
        slopes = np.abs(differences).prod(axis=1)
        growth = np.polyval(np.abs(coefficients), np.abs(roots))
        per_root = np.where(slopes > 0.0, growth / np.where(slopes > 0.0, slopes, 1.0), np.inf)
    return beta * float(np.finfo(np.float64).eps * per_root.max())


def _mp_aberth(coefficients, initial, max_sweeps):
    """Simultaneous Newton-corrected iteration at the current mp precision.

    ``coefficients`` descend from the (monic) leading term.  Stops once every
    relative step is below 1e-25 (far beyond double, the output format), or
    on stagnation below 1e-12 as happens for genuinely multiple roots whose
    cluster radius is set by the working precision.  Returns (roots, ok).
    """
    degree = len(coefficients) - 1
    derivative = [c * (degree - i) for i, c in enumerate(coefficients[:-1])]
    z = list(initial)
    target = mp.mpf(10) ** -25
    stagnation_floor = mp.mpf(10) ** -12
    best = mp.inf
    stalled = 0
    for _ in range(max_sweeps):
        worst = mp.mpf(0)
        for k in range(degree):
            value = mp.polyval(coefficients, z[k])
            if value == 0:
                continue
            slope = mp.polyval(derivative, z[k])
            if slope == 0:
                z[k] += mp.mpf(10) ** -6
                worst = max(worst, mp.mpf(10) ** -6)
                continue
            newton = value / slope
            repulsion = mp.mpc(0)
            for j in range(degree):
                if j != k and z[k] != z[j]:
                    repulsion += 1 / (z[k] - z[j])
            denominator = 1 - newton * repulsion
            step = newton if denominator == 0 else newton / denominator
            z[k] = z[k] - step
            worst = max(worst, abs(step) / max(1, abs(z[k])))
        if worst < target:
            return z, True
        if worst < best / 2:
            best = worst
            stalled = 0
        else:
            stalled += 1
            if stalled >= 15 and worst < stagnation_floor:
                return z, True
    return z, False


def _extended_precision_nodes(s, max_iter, initial=None, exact=None):
    """Arbitrary-precision Newton recurrence plus root finding.

    Used for moment sets whose node configurations are too clustered for
    doubles (the coefficient-to-root map sheds roughly one digit per degree
    there).  Working precision grows with the problem size so the final
    rounding to complex128 is the only loss; ``initial`` (typically the
    double-precision roots) warms up the simultaneous iteration; ``exact``
    re-evaluates moment m in working precision so closed-form tables do not
    inherit the double rounding of ``s``.  Raises
    :class:`NonConvergenceError` if the high-precision finder stalls.
    """
    n = len(s)
    sweeps = max(500, max_iter)
    for dps, max_sweeps in ((40 + 2 * n, sweeps), (60 + 3 * n, 4 * sweeps)):
        with mp.workdps(dps):
            if exact is None:
                moments = [mp.mpc(v) for v in s]
            else:
                moments = [mp.mpc(exact(m)) for m in range(1, n + 1)]
            sigma = [mp.mpc(0)] * (n + 1)
            for m in range(1, n + 1):
                acc = moments[m - 1]
                for j in range(1, m):
                    acc += (-1) ** j * moments[m - 1 - j] * sigma[j]
                sigma[m] = (-1) ** (m + 1) * acc / m
            beta = max(abs(sigma[m]) ** (mp.mpf(1) / m) for m in range(1, n + 1))
            if beta == 0:
                return np.zeros(n, dtype=np.complex128)
            # descending coefficients of the balanced monic polynomial in
            # x = lambda/beta; every magnitude is <= 1
            coefficients = [mp.mpc(1)] + [
                (-1) ** m * sigma[m] / beta ** m for m in range(1, n + 1)
            ]
            if initial is not None and len(initial) == n:
                seeds = [mp.mpc(v) / beta for v in initial]
                spread = max(1, max(abs(w) for w in seeds))
                for k in range(n):
                    for j in range(k):
                        if abs(seeds[k] - seeds[j]) < spread * mp.mpf(10) ** -20:
                            seeds[k] += (k + 1) * spread * mp.mpf(10) ** -6
                            break
            else:
                radius = 1 + max(abs(c) for c in coefficients[1:])
                seeds = [
                    radius * mp.exp(mp.mpc(0, 2 * mp.pi * k / n + mp.mpf(2) / 5))
                    for k in range(n)
                ]
            roots, converged = _mp_aberth(coefficients, seeds, max_sweeps)
            if not converged:
                continue
            nodes = np.array([complex(beta * r) for r in roots], dtype=np.complex128)
        if not np.all(np.isfinite(nodes)):
            raise ConditioningError(f"recovered nodes overflow double precision at n={n}")
        return _canonical_order(nodes)
    raise NonConvergenceError(f"extended-precision root finding stalled for degree {n}")


def nodes_from_power_sums(moments, tol=1e-12, max_iter=500, precision="auto", exact=None):
    """Recover the unique node multiset with power sums s_1..s_n.

    The monic polynomial is solved in the rescaled variable x = lambda/beta
    with beta = max_m |sigma_m|^(1/m), which keeps every coefficient at
    magnitude <= 1 regardless of the moment scale; roots are mapped back as
    lambda = beta*x.  Root clusters (numerical multiple roots) are collapsed
    to refined multiple roots whenever that improves the power-sum residual.

    ``precision`` selects the arithmetic: "double" solves in doubles only,
    "extended" always re-solves in arbitrary precision, and "auto" (default)
    escalates to extended precision when the double solve fails, when its
    residual stays above ESCALATION_RTOL relative to the moment scale, or
    when the first-order root-perturbation estimate says coefficient
    roundoff may have displaced the nodes by more than ESCALATION_RTOL
    relative to the balance radius.  The residual only certifies that the
    returned nodes reproduce the moments: for strongly clustered
    configurations, distinct node sets can match the same moments to
    roundoff, so callers that need the exact node locations of an
    ill-conditioned problem should pass precision="extended".

    ``exact``, if given, maps m = 1..n to moment m in arbitrary precision
    (any mpmath-convertible value); the extended path uses it instead of the
    rounded ``moments``, which matters exactly when the node configuration
    amplifies input ulps.  Closed-form tables should pass it.

    Raises :class:`ConditioningError` on unrepresentable intermediates or
    nodes and :class:`NonConvergenceError` when the selected finder stalls.
    """
    s = as_complex_vector(moments, "moments")
    tol, max_iter = check_solver_options(tol, max_iter)
    if precision not in ("auto", "double", "extended"):
        raise ValueError(
            f"precision must be 'auto', 'double', or 'extended', got {precision!r}"
        )
    n = len(s)

    raw = None
    nodes = None
    residual = np.inf
    root_residual = 0.0
    iterations = 0
    forward_risk = np.inf
    risk_cap = np.inf
    try:
        sigma = newton_girard(s)
    except ConditioningError:
        if precision == "double":
            raise
        sigma = None

    if sigma is not None:
        magnitudes = np.abs(sigma)
        if not magnitudes.any():
            nodes = np.zeros(n, dtype=np.complex128)
            residual = float(np.abs(s).max())
            return NewtonSolution(nodes=nodes, residual=residual, root_residual=0.0, iterations=0)
        orders = np.arange(1, n + 1, dtype=np.float64)
        beta = float(np.max(magnitudes ** (1.0 / orders)))
        with np.errstate(under="ignore"):
            scaled_sigma = sigma * np.exp(-orders * np.log(beta))
        monic = monic_polynomial(scaled_sigma)
        try:
            result = find_roots(monic, tol=tol, max_iter=max_iter)
        except NonConvergenceError:
            if precision == "double":
                raise
            result = None
        if result is not None:
            raw = beta * result.roots
            nodes, residual = _best_cluster_collapse(monic.coefficients, result.roots, beta, s)
            root_residual = result.max_residual
            iterations = result.iterations
            forward_risk = _forward_error_estimate(
                monic.coefficients, result.roots, beta
            )
            risk_cap = ESCALATION_RTOL * max(1.0, beta)

    scale = max(1.0, float(np.abs(s).max()))
    must_extend = (
        precision == "extended" or nodes is None or residual > ESCALATION_RTOL * scale
    )
    risky = not must_extend and forward_risk > risk_cap
    if precision != "double" and (must_extend or risky):
        try:
            refined = _extended_precision_nodes(s, max_iter, initial=raw, exact=exact)
        except (ConditioningError, NonConvergenceError):
            # risk-triggered escalation is best-effort: the double answer
            # already reproduces the moments, so keep it if mp stalls
            if not risky:
                raise
            refined = None
        if refined is not None:
            # the check happens in doubles; huge nodes overflow there, which
            # just means the verification is out of reach, not that it failed
            with np.errstate(over="ignore", invalid="ignore", under="ignore"):
                gap = np.abs(power_sums(refined, n) - s)
            refined_residual = float(gap.max()) if np.isfinite(gap).all() else np.inf
            if (
                precision == "extended"
                or nodes is None
                or risky
                or refined_residual < residual
            ):
                nodes = refined
                residual = refined_residual
                root_residual = 0.0
                iterations = 0

    return NewtonSolution(
        nodes=nodes,
        residual=residual,
        root_residual=root_residual,
        iterations=iterations,
    )


def multiset_distance(first, second):
    """Greedy minimal-cost matching distance between two node multisets.

    Returns the largest matched pairwise distance |a_i - b_j| under a greedy
    smallest-first matching.  Adequate for n <= 25 comparisons; exact optimal
    matching is only needed as an external cross-check.
    """
    a = as_complex_vector(first, "first")
    b = as_complex_vector(second, "second")
    if len(a) != len(b):
        raise ValueError(f"multisets must have equal size, got {len(a)} and {len(b)}")
    cost = np.abs(a[:, None] - b[None, :])
    worst = 0.0
    for _ in range(len(a)):
        i, j = np.unravel_index(np.argmin(cost), cost.shape)
        worst = max(worst, float(cost[i, j]))
        cost[i, :] = np.inf
        cost[:, j] = np.inf
    return worst
