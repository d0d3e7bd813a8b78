import numpy as np
import pytest

from eqwsums import (
    check_node_bound_randomized,
    elementary_symmetric_bound,
    epsilon_closed,
    epsilon_exact,
    geometric_node_bound,
    newton_girard,
    node_bound_epsilon,
    power_sums,
    tightness_polynomial,
    weighted_node_bound,
)


FROZEN_EPS2_EXACT = 0.43015970900194678
FROZEN_EPS2_CLOSED = 1.0596601011416096


def test_epsilon_exact_frozen_value():
    assert epsilon_exact(2) == pytest.approx(FROZEN_EPS2_EXACT, abs=1e-14)


def test_epsilon_closed_frozen_value():
    assert epsilon_closed(2) == pytest.approx(FROZEN_EPS2_CLOSED, rel=1e-14)


def test_epsilon_exact_satisfies_defining_equation():
    for n in (2, 3, 5, 10, 100, 5000):
        eps = epsilon_exact(n)
        assert eps**2 == pytest.approx((1 - eps) ** (n + 1), abs=1e-13)
        assert 0 < eps < 1


def test_epsilon_chain_exact_below_closed():
    n = np.arange(2, 2000)
    exact = epsilon_exact(n)
    closed = epsilon_closed(n)
    assert np.all(exact > 0)
    assert np.all(exact <= closed + 1e-13)


def test_epsilon_closed_below_log_guide_from_three_up():
    n = np.arange(3, 2000)
    guide = 2 * np.log(n) / n
    assert np.all(epsilon_closed(n) < guide + 1e-13)


def test_epsilon_guide_reversal_at_two():
    # ln ln 2 < 0, so the closed form exceeds 2 ln 2 / 2 at exactly n = 2
    assert epsilon_closed(2) > 2 * np.log(2) / 2


def test_epsilon_array_shapes():
    n = np.array([[2, 10], [100, 1000]])
    assert epsilon_exact(n).shape == (2, 2)
    assert epsilon_closed(n).shape == (2, 2)


def test_epsilon_rejects_n_below_two():
    with pytest.raises(ValueError):
        epsilon_exact(1)
    with pytest.raises(ValueError):
        epsilon_closed(np.array([2, 1]))


def test_node_bound_epsilon_bundle():
    bound = node_bound_epsilon(50)
    assert bound.n == 50
    assert bound.exact == pytest.approx(epsilon_exact(50), abs=1e-15)
    assert bound.closed == pytest.approx(epsilon_closed(50), rel=1e-15)


def test_geometric_node_bound_scales_with_a():
    assert geometric_node_bound(2.0, 7) == pytest.approx(2 * geometric_node_bound(1.0, 7))
    assert geometric_node_bound(1.0, 7) == pytest.approx(1 + epsilon_closed(7))


class TestWeightedNodeBound:
    def test_sharp_below_coarse(self):
        for n in (2, 5, 20):
            for v in (0.0, 0.3, 1.0):
                bound = weighted_node_bound(1.5, 2.0, v, n)
                assert bound.sharp <= bound.coarse * (1 + 1e-12)

    def test_v_one_collapses_sharp_onto_coarse(self):
        gamma = 3.0
        bound = weighted_node_bound(1.0, gamma, 1.0, 9)
        assert bound.coarse == pytest.approx((1 + 2 * gamma) * 1.0)
        assert bound.sharp == pytest.approx(bound.coarse)

    def test_rejects_v_outside_unit_interval(self):
        with pytest.raises(ValueError):
            weighted_node_bound(1.0, 1.0, -0.1, 5)
        with pytest.raises(ValueError):
            weighted_node_bound(1.0, 1.0, 1.5, 5)

    def test_rejects_nonpositive_gamma(self):
        with pytest.raises(ValueError):
            weighted_node_bound(1.0, 0.0, 0.5, 5)


def test_elementary_symmetric_bound_dominates_planted_sigmas():
    """sigma_m from any admissible moment vector stays under the bound."""
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(2, 14))
        a = float(rng.uniform(0.3, 2.0))
        gamma = float(rng.uniform(0.2, 3.0))
        v = float(rng.uniform(0.0, 1.0))
        m = np.arange(1, n + 1)
        caps = gamma * m**v * a**m
        phases = rng.uniform(0, 2 * np.pi, n)
        s = caps * rng.uniform(0.2, 1.0, n) * np.exp(1j * phases)
        sigma = newton_girard(s)
        limit = elementary_symmetric_bound(a, gamma, v, n)
        assert np.all(np.abs(sigma) <= limit * (1 + 1e-10))


class TestTightnessPolynomial:
    def test_power_sums_stay_small_but_a_root_escapes(self):
        p = tightness_polynomial(9)
        from eqwsums import find_roots

        roots = find_roots(p).roots
        s = power_sums(roots, 9)
        assert np.abs(s).max() <= 1 + 1e-9
        top = np.abs(roots).max()
        assert 1 + 1 / 90 <= top <= 1 + 1 / 9

    def test_small_odd_case_power_sums(self):
        # n = 3: lambda^3 - lambda^2 + 2/3 has s = (1, 1, -1)
        p = tightness_polynomial(3)
        from eqwsums import find_roots

        s = power_sums(find_roots(p).roots, 3)
        assert s == pytest.approx([1.0, 1.0, -1.0], abs=1e-12)

    def test_even_or_small_n_rejected(self):
        with pytest.raises(ValueError):
            tightness_polynomial(4)
        with pytest.raises(ValueError):
            tightness_polynomial(1)


def test_randomized_node_bound_check_small_run():
    report = check_node_bound_randomized(6, 1.0, trials=60, seed=7)
    assert report.violations == 0
    assert report.trials == 60
    assert report.max_ratio <= 1.0 + 1e-8
    assert report.bound_sharp == pytest.approx((1 + epsilon_exact(6)) * 1.0)
    assert report.max_node_magnitude <= report.bound_sharp + 1e-8


def test_randomized_check_is_reproducible():
    first = check_node_bound_randomized(4, 0.7, trials=30, seed=123)
    second = check_node_bound_randomized(4, 0.7, trials=30, seed=123)
    assert first.max_node_magnitude == second.max_node_magnitude
    assert first.max_ratio == second.max_ratio
