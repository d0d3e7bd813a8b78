"""Shared test oracles, kept independent of the library internals."""

import numpy as np
from scipy.optimize import linear_sum_assignment


def multiset_error(first, second):
    """Largest matched distance between two equal-size point multisets.

    Uses optimal assignment, so it cannot be fooled by orderings; the
    library's own greedy matcher is never used to check itself.
    """
    a = np.asarray(first, dtype=np.complex128).ravel()
    b = np.asarray(second, dtype=np.complex128).ravel()
    assert a.size == b.size, "multisets must have equal size"
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max()) if a.size else 0.0


def series_remainder(f_coeffs, h_coeffs, mu, n, nodes, z, extra=20):
    """Truncation remainder of the equal-weight sum, term by term.

    Computes sum_{m=n+1}^{4n+extra} (f_m - h_m (mu/n) S_m) z^m with the power
    sums S_m taken directly from the nodes.  This is an additive oracle with
    no cancellation against the leading terms, so it stays accurate even
    where pointwise evaluation of H - f drowns in rounding error.
    """
    nodes = np.asarray(nodes, dtype=np.complex128)
    z = complex(z)
    top = 4 * n + extra
    f_coeffs = np.asarray(f_coeffs, dtype=np.complex128)
    h_coeffs = np.asarray(h_coeffs, dtype=np.complex128)
    assert f_coeffs.size > top and h_coeffs.size > top
    total = 0.0 + 0.0j
    power = nodes ** (n + 1)
    zpow = z ** (n + 1)
    for m in range(n + 1, top + 1):
        s_m = power.sum()
        total += (f_coeffs[m] - h_coeffs[m] * (mu / n) * s_m) * zpow
        power *= nodes
        zpow *= z
    return total


def exp_coefficients(count):
    out = np.empty(count, dtype=np.float64)
    out[0] = 1.0
    for m in range(1, count):
        out[m] = out[m - 1] / m
    return out
