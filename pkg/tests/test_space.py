import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from isoext import DimensionError, Weights, compensated_sum, dist, gram, inner, norm, translate, unit_basis

A3 = Weights([1.0, 0.5, 0.25])


def test_inner_examples():
    assert inner(A3, [0, 0, 0], [3, 4, 5]) == 0.0
    assert inner(A3, [1, 2, 0], [3, 4, 0]) == 5.0
    assert inner(Weights([1.0, 0.5]), [1, 1], [1, -4]) == 0.0


def test_norm_examples():
    assert norm(A3, np.zeros(3)) == 0.0
    assert norm(Weights([1.0, 0.5]), [0, 2]) == 1.0
    assert norm(Weights([1.0, 1.0]), [3, 4]) == 5.0


def test_dist_examples():
    a = Weights([1.0, 0.5])
    x = np.array([0.3, -1.7])
    assert dist(a, x, x) == 0.0
    assert dist(a, [1, 0], [0, 2]) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_dist_symmetric(rng):
    a = Weights(rng.uniform(0.01, 1, 7))
    for _ in range(20):
        x, y = rng.normal(size=(2, 7))
        assert dist(a, x, y) == dist(a, y, x)


def test_translate():
    x = np.array([1.0, 2.0])
    np.testing.assert_array_equal(translate(x, np.zeros(2)), x)
    np.testing.assert_array_equal(translate([1, 2], [3, 4]), [4, 6])
    c = np.array([0.1, -7.3])
    np.testing.assert_allclose(translate(translate(x, c), -c), x, atol=1e-15)


def test_translate_preserves_distance(rng):
    a = Weights(rng.uniform(0.1, 1, 4))
    x, y, c = rng.normal(size=(3, 4))
    assert dist(a, translate(x, c), translate(y, c)) == pytest.approx(dist(a, x, y), rel=1e-14)


def test_unit_basis():
    np.testing.assert_array_equal(unit_basis(A3, 2), [0, 2, 0])
    np.testing.assert_array_equal(unit_basis(A3, 1), [1, 0, 0])
    assert inner(A3, unit_basis(A3, 1), unit_basis(A3, 2)) == 0.0
    with pytest.raises(IndexError):
        unit_basis(A3, 0)
    with pytest.raises(IndexError):
        unit_basis(A3, 4)


def test_unit_basis_gram_is_identity():
    a = Weights.geometric(16)
    B = np.array([unit_basis(a, i) for i in range(1, 17)])
    np.testing.assert_allclose(gram(a, B), np.eye(16), atol=1e-12)


def test_dimension_errors():
    with pytest.raises(DimensionError):
        inner(A3, [1, 2], [1, 2, 3])
    with pytest.raises(DimensionError):
        norm(A3, [1, np.nan, 0])
    with pytest.raises(DimensionError):
        translate([1, 2], [1, 2, 3])


@pytest.mark.parametrize("bad", [[], [1.0, 0.0], [1.0, -2.0], [1.0, np.inf], [np.nan]])
def test_weights_rejected(bad):
    with pytest.raises(ValueError):
        Weights(bad)


def test_weight_rules():
    a = Weights.geometric(5)
    np.testing.assert_array_equal(a.values, [0.5, 0.25, 0.125, 0.0625, 0.03125])
    assert a.tail_note
    np.testing.assert_allclose(Weights.harmonic(3).values, [1, 0.5, 1 / 3])


def test_compensated_sum_matches_fsum(rng):
    for size in (1, 2, 3, 7, 16, 33, 100):
        terms = rng.normal(size=size) * 10.0 ** rng.integers(-12, 12, size=size)
        assert compensated_sum(terms) == pytest.approx(math.fsum(terms), rel=1e-15, abs=1e-300)


def test_compensated_sum_cancellation():
    # naive left-to-right summation returns 0 here
    terms = np.array([1e16, 1.0, -1e16, 1.0])
    assert sum(terms) != 2.0
    assert compensated_sum(terms) == 2.0


def test_compensated_sum_batched():
    t = np.arange(24.0).reshape(2, 3, 4)
    np.testing.assert_array_equal(compensated_sum(t, axis=1), t.sum(axis=1))


weights_st = arrays(float, 6, elements=st.floats(0.01, 1.0))
vec_st = arrays(float, 6, elements=st.floats(-100, 100))


@settings(max_examples=200, deadline=None)
@given(weights_st, vec_st, vec_st, vec_st, st.floats(-10, 10), st.floats(-10, 10))
def test_bilinearity(w, x, y, z, alpha, beta):
    a = Weights(w)
    lhs = inner(a, alpha * x + beta * y, z)
    rhs = alpha * inner(a, x, z) + beta * inner(a, y, z)
    scale = (abs(alpha) * norm(a, x) + abs(beta) * norm(a, y)) * norm(a, z)
    assert abs(lhs - rhs) <= 1e-12 * max(scale, 1e-300)


@settings(max_examples=200, deadline=None)
@given(weights_st, vec_st, vec_st)
def test_cauchy_schwarz(w, x, y):
    a = Weights(w)
    bound = norm(a, x) * norm(a, y)
    assert abs(inner(a, x, y)) <= bound * (1 + 1e-14) + 1e-300


@settings(max_examples=200, deadline=None)
@given(weights_st, vec_st, vec_st)
def test_parallelogram(w, x, y):
    a = Weights(w)
    lhs = norm(a, x + y) ** 2 + norm(a, x - y) ** 2
    rhs = 2 * norm(a, x) ** 2 + 2 * norm(a, y) ** 2
    assert abs(lhs - rhs) <= 1e-10 * max(rhs, 1e-300)


@settings(max_examples=100, deadline=None)
@given(weights_st, vec_st, vec_st)
def test_inner_symmetric(w, x, y):
    a = Weights(w)
    assert inner(a, x, y) == inner(a, y, x)


def test_inner_matrix_blocked_path_matches_rowwise(monkeypatch):
    import isoext.space as sp

    monkeypatch.setattr(sp, "_BLOCK", 64)
    a = sp.Weights([1.0, 0.5, 0.25, 0.125])
    rng = np.random.default_rng(0)
    xs, ys = rng.normal(size=(37, 4)), rng.normal(size=(5, 4))
    blocked = sp.inner_matrix(a, xs, ys)
    rowwise = np.array([[sp.inner(a, x, y) for y in ys] for x in xs])
    np.testing.assert_array_equal(blocked, rowwise)


def test_norm_survives_underflow_and_overflow():
    a = Weights([1.0, 0.5])
    assert norm(a, [3e-200, 0.0]) == pytest.approx(3e-200, rel=1e-15)
    assert norm(a, [3e200, 8e200]) == pytest.approx(5e200, rel=1e-15)
    assert norm(a, [0.0, 0.0]) == 0.0


@pytest.mark.parametrize("scale", [1.0, 1e-250, 1e250, 1e280])
def test_compensated_sum_ill_conditioned(scale):
    rng = np.random.default_rng(42)
    for _ in range(200):
        n = int(rng.integers(2, 70))
        t = rng.normal(size=n) * 10.0 ** rng.integers(-12, 12, size=n)
        t = np.concatenate([t, -t[: n // 2] * (1 + 1e-15)]) * scale
        exact = math.fsum(t.tolist())
        assert compensated_sum(t) == pytest.approx(exact, rel=1e-15, abs=1e-300 * scale)


def test_compensated_sum_non_finite_propagates():
    assert math.isnan(compensated_sum(np.array([1.0, np.nan, 2.0])))
    assert compensated_sum(np.array([1.0, np.inf])) == np.inf
