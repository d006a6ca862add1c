import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from matsvm import DimensionError, KernelSpec, ParameterError, augmented_gram, gram
from oracles import rbf_loop

points = st.tuples(st.integers(1, 12), st.integers(1, 5)).flatmap(
    lambda s: arrays(np.float64, s, elements=st.floats(-3, 3, allow_nan=False))
)
widths = st.floats(0.05, 5.0)


class TestKernelSpec:
    @pytest.mark.parametrize("p", [0.0, -1.0, None, np.nan, np.inf])
    def test_rbf_width_must_be_positive(self, p):
        with pytest.raises(ParameterError):
            KernelSpec("rbf", p)

    def test_unknown_kind(self):
        with pytest.raises(ParameterError):
            KernelSpec("poly", 2.0)

    def test_linear_ignores_width(self):
        assert KernelSpec.linear().to_dict() == {"kind": "linear", "p": None}

    def test_dict_round_trip(self):
        spec = KernelSpec.rbf(0.7)
        assert KernelSpec.from_dict(spec.to_dict()) == spec


class TestGram:
    def test_rbf_zero_distance(self, rng):
        x = rng.standard_normal((1, 4))
        np.testing.assert_array_equal(gram(x, x, KernelSpec.rbf(0.3)), [[1.0]])

    def test_rbf_scalar_value(self):
        out = gram([[0.0, 0.0]], [[1.0, 0.0]], KernelSpec.rbf(0.7))
        np.testing.assert_allclose(out, [[np.exp(-0.7)]], rtol=1e-15)
        assert out[0, 0] == pytest.approx(0.4965853, abs=1e-7)

    def test_linear_dot_product(self):
        np.testing.assert_array_equal(gram([[1.0, 2.0]], [[3.0, 4.0]], KernelSpec.linear()), [[11.0]])

    def test_rbf_matches_loop(self, rng):
        x1, x2 = rng.standard_normal((7, 3)), rng.standard_normal((5, 3))
        np.testing.assert_allclose(gram(x1, x2, KernelSpec.rbf(0.4)), rbf_loop(x1, x2, 0.4), rtol=1e-12)

    def test_linear_matches_matmul(self, rng):
        x1, x2 = rng.standard_normal((6, 4)), rng.standard_normal((3, 4))
        np.testing.assert_allclose(gram(x1, x2, KernelSpec.linear()), x1 @ x2.T, rtol=1e-12)

    def test_feature_mismatch(self):
        with pytest.raises(DimensionError, match="feature dimension"):
            gram(np.ones((2, 3)), np.ones((2, 4)), KernelSpec.linear())

    def test_near_duplicate_points_clamped(self):
        # The expansion ||a||^2 + ||b||^2 - 2ab can go slightly negative.
        x = np.array([[1e8 + 1.0, 1e8], [1e8 + 1.0, 1e8]])
        k = gram(x, x, KernelSpec.rbf(1.0))
        assert np.all(k <= 1.0)

    @given(points, widths)
    def test_rbf_symmetric_unit_diagonal_bounded(self, x, p):
        k = gram(x, x, KernelSpec.rbf(p))
        np.testing.assert_allclose(k, k.T, atol=1e-12)
        np.testing.assert_array_equal(np.diag(k), 1.0)
        assert np.all((k >= 0.0) & (k <= 1.0))

    @given(points)
    def test_linear_symmetric(self, x):
        k = gram(x, x, KernelSpec.linear())
        np.testing.assert_allclose(k, k.T, atol=1e-12)


class TestAugmentedGram:
    def test_rbf_diagonal_is_two(self, rng):
        x = rng.standard_normal((5, 3))
        np.testing.assert_array_equal(np.diag(augmented_gram(x, x, KernelSpec.rbf(0.3))), 2.0)

    def test_linear_two_points(self):
        out = augmented_gram([[1.0], [-1.0]], [[1.0], [-1.0]], KernelSpec.linear())
        np.testing.assert_array_equal(out, [[2.0, 0.0], [0.0, 2.0]])

    def test_linear_equals_ones_augmented_product(self, rng):
        x = rng.standard_normal((6, 3))
        xa = np.hstack([x, np.ones((6, 1))])
        np.testing.assert_allclose(augmented_gram(x, x, KernelSpec.linear()), xa @ xa.T, atol=1e-12)

    @given(points, widths)
    def test_rbf_entries_in_one_two(self, x, p):
        # Distant pairs may underflow exp() to 0, so the lower end is closed.
        k = augmented_gram(x, x, KernelSpec.rbf(p))
        assert np.all((k >= 1.0) & (k <= 2.0))

    def test_rbf_close_points_strictly_above_one(self, rng):
        x = rng.uniform(-1, 1, (8, 3))
        k = augmented_gram(x, x, KernelSpec.rbf(0.3))
        assert np.all(k > 1.0) and np.all(k <= 2.0)

    @given(points, st.integers(0, 2**32 - 1))
    def test_linear_positive_semidefinite(self, x, seed):
        k = augmented_gram(x, x, KernelSpec.linear())
        for v in np.random.default_rng(seed).standard_normal((5, x.shape[0])):
            assert v @ k @ v >= -1e-9 * (v @ v)

    def test_does_not_mutate_inputs(self, rng):
        x = rng.standard_normal((4, 2))
        before = x.copy()
        augmented_gram(x, x, KernelSpec.rbf(1.0))
        np.testing.assert_array_equal(x, before)
