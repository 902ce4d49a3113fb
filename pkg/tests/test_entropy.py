import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qgraph_entropy.entropy import (RANK_THRESHOLD, alpha_log, conjugate_orders, entropy, max_entropy, max_value, min_entropy,
                                    rank, renyi, shannon, symmetrized, tsallis, tsallis_log_form, variance,
                                    variance_from_definition, weights_from_amplitudes)
from qgraph_entropy.errors import NonpositiveArgument, UnsupportedOrder, ZeroVector

mpmath.mp.dps = 40


def _mp_renyi(w, alpha):
    p = [mpmath.mpf(float(x)) for x in w if x > 0]
    if alpha == 1:
        return float(-sum(x * mpmath.log(x) for x in p))
    return float(mpmath.log(sum(x ** alpha for x in p)) / (1 - mpmath.mpf(alpha)))


def _mp_tsallis(w, alpha):
    p = [mpmath.mpf(float(x)) for x in w if x > 0]
    if alpha == 1:
        return float(-sum(x * mpmath.log(x) for x in p))
    return float((sum(x ** alpha for x in p) - 1) / (1 - mpmath.mpf(alpha)))


weight_vectors = arrays(np.float64, st.integers(1, 40), elements=st.floats(0.0, 1.0)).filter(
    lambda x: x.sum() > 1e-3).map(lambda x: x / x.sum())
orders = st.sampled_from([0.1, 0.25, 0.5, 0.9, 0.999, 1.0, 1.001, 1.5, 2.0, 3.0, 5.0, 17.0])


def test_weights_from_amplitudes():
    w = weights_from_amplitudes([3, 4j])
    assert np.allclose(w, [9 / 25, 16 / 25])
    with pytest.raises(ZeroVector):
        weights_from_amplitudes([0, 0])


def test_invalid_weights_rejected():
    with pytest.raises(ValueError):
        shannon([0.5, 0.6])
    with pytest.raises(ValueError):
        shannon([1.2, -0.2])


@pytest.mark.parametrize("alpha", [0, 0.3, 1, 2, 7, math.inf])
def test_uniform_is_ln_b(alpha):
    assert renyi(np.full(4, 0.25), alpha) == pytest.approx(math.log(4), abs=1e-14)


@pytest.mark.parametrize("alpha", [0, 0.5, 1, 2, math.inf])
def test_point_mass_is_zero(alpha):
    assert renyi([1.0, 0.0, 0.0], alpha) == pytest.approx(0.0, abs=1e-15)


def test_rank_threshold_only_affects_order_zero():
    w = np.array([1 - 1e-15, 1e-15])
    assert rank(w) == 1 and renyi(w, 0) == 0.0
    assert renyi(w, 0.25) > 0


def test_worked_values():
    w = [0.5, 0.5, 0, 0]
    assert renyi(w, 2) == pytest.approx(math.log(2))
    assert tsallis(w, 2) == pytest.approx(0.5)
    assert rank(w) == 2 and max_entropy(w) == pytest.approx(math.log(2))
    assert min_entropy([0.5, 0.25, 0.25]) == pytest.approx(math.log(2))


def test_renyi_rejects_negative_order():
    with pytest.raises(UnsupportedOrder):
        renyi([1.0], -1)


@pytest.mark.parametrize("alpha", [0, -1, math.inf])
def test_tsallis_order_range(alpha):
    with pytest.raises(UnsupportedOrder):
        tsallis([0.5, 0.5], alpha)


def test_tsallis_uniform_is_alpha_log():
    for alpha in (0.3, 2.0, 4.0):
        assert tsallis(np.full(7, 1 / 7), alpha) == pytest.approx(alpha_log(7.0, alpha), rel=1e-13)


def test_alpha_log():
    assert alpha_log(1.0, 3.0) == 0.0
    assert alpha_log(6.0, 2.0) == pytest.approx(alpha_log(2.0, 2.0) + 0.5 * alpha_log(3.0, 2.0))
    # first-order expansion ln xi + (1 - alpha) ln(xi)**2 / 2 near alpha = 1
    for alpha in (1 - 1e-6, 1 + 1e-6):
        series = math.log(5.0) + (1 - alpha) * math.log(5.0) ** 2 / 2
        assert alpha_log(5.0, alpha) == pytest.approx(series, abs=1e-12)
    for alpha in (1 - 1e-9, 1 + 1e-9):
        assert alpha_log(5.0, alpha) == pytest.approx(math.log(5.0), abs=1e-8)
    with pytest.raises(NonpositiveArgument):
        alpha_log(0.0, 2.0)
    assert np.allclose(alpha_log(np.array([1.0, 2.0]), 1.0), [0.0, math.log(2)])


def test_order_one_continuity():
    w = np.array([0.1, 0.2, 0.3, 0.4])
    for alpha in (1 - 1e-9, 1 + 1e-9):
        assert renyi(w, alpha) == pytest.approx(shannon(w), abs=1e-8)
        assert tsallis(w, alpha) == pytest.approx(shannon(w), abs=1e-8)


def test_high_order_does_not_underflow():
    w = np.array([0.9] + [0.1 / 999] * 999)
    assert renyi(w, 500.0) == pytest.approx(_mp_renyi(w, 500), rel=1e-12)
    assert math.isfinite(renyi(w, 1e6))


def test_conjugate_orders():
    for s in (0.0, 0.25, 0.5, 0.75):
        a, b = conjugate_orders(s)
        assert 1 / a + 1 / b == pytest.approx(2.0)
    assert conjugate_orders(1.0) == (math.inf, 0.5)
    with pytest.raises(UnsupportedOrder):
        conjugate_orders(1.5)


def test_symmetrized_values():
    w = np.array([0.5, 0.25, 0.25])
    assert symmetrized(w, 0.0) == pytest.approx(shannon(w))
    assert symmetrized(w, 1.0) == pytest.approx(0.5 * (math.log(2) + math.log(3)))
    assert symmetrized(np.full(4, 0.25), 0.6) == pytest.approx(math.log(4))
    assert symmetrized(w, 0.0, "tsallis") == pytest.approx(shannon(w))
    with pytest.raises(UnsupportedOrder):
        symmetrized(w, 1.0, "tsallis")
    with pytest.raises(ValueError):
        symmetrized(w, 0.5, "boltzmann")


def test_variance_forms():
    w = np.array([0.7, 0.2, 0.1])
    assert variance(w) == pytest.approx(variance_from_definition(w))
    assert variance(np.full(5, 0.2)) == pytest.approx(0.0, abs=1e-15)
    assert variance([1.0, 0, 0, 0]) == pytest.approx(3.0)


def test_entropy_dispatch_and_max_value():
    w = np.array([0.6, 0.4])
    assert entropy(w, 2.0, "renyi") == renyi(w, 2.0)
    assert entropy(w, 2.0, "tsallis") == tsallis(w, 2.0)
    assert max_value(8, 3.0) == pytest.approx(math.log(8))
    assert max_value(8, 3.0, "tsallis") == pytest.approx(alpha_log(8.0, 3.0))


@settings(max_examples=300, deadline=None)
@given(w=weight_vectors, alpha=orders)
def test_against_high_precision_oracle(w, alpha):
    assert renyi(w, alpha) == pytest.approx(_mp_renyi(w, alpha), rel=1e-10, abs=1e-12)
    assert tsallis(w, alpha) == pytest.approx(_mp_tsallis(w, alpha), rel=1e-10, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(w=weight_vectors)
def test_renyi_monotone_and_sandwiched(w):
    # the rank behind R_0 ignores weights at or below RANK_THRESHOLD
    w = np.where(w > RANK_THRESHOLD, w, 0.0)
    w = w / w.sum()
    values = [renyi(w, a) for a in (0, 0.25, 0.5, 1, 1.5, 2, 3, 5, math.inf)]
    assert all(x >= y - 1e-12 for x, y in zip(values, values[1:]))
    assert values[0] <= math.log(w.size) + 1e-12


@settings(max_examples=300, deadline=None)
@given(w=weight_vectors, alpha=orders)
def test_tsallis_forms_agree(w, alpha):
    assert tsallis_log_form(w, alpha) == pytest.approx(tsallis(w, alpha), abs=1e-12)


def test_tsallis_log_form_with_tiny_weights():
    w = np.array([1.0 - 1e-300, 1e-300, 5e-324])
    for alpha in (0.05, 0.5, 3.0):
        assert tsallis_log_form(w, alpha) == pytest.approx(_mp_tsallis(w, alpha), rel=1e-10, abs=1e-14)


@settings(max_examples=300, deadline=None)
@given(w=weight_vectors)
def test_collision_identities(w):
    B, D = w.size, variance(w)
    assert renyi(w, 2) == pytest.approx(math.log(B) - math.log1p(D), abs=1e-12)
    assert tsallis(w, 2) == pytest.approx(1 - (1 + D) / B, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(x=st.floats(1e-3, 1e3), y=st.floats(1e-3, 1e3), alpha=st.floats(0.05, 6.0))
def test_alpha_log_product_identity(x, y, alpha):
    lhs = alpha_log(x * y, alpha)
    t1, t2 = alpha_log(x, alpha), x ** (1 - alpha) * alpha_log(y, alpha)
    # the two terms can nearly cancel, so scale by their size
    assert abs(lhs - (t1 + t2)) <= 1e-12 * max(abs(t1), abs(t2), abs(lhs), 1.0)
