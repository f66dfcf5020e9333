import numpy as np
import pytest

from freechannels import (
    InvalidParameterError,
    RngStream,
    clean_probability_vector,
    confining_spectrum,
    conjugate_product_spectrum,
    majorizes,
    projector_product_edges,
    projector_product_measure,
    projector_product_norm_limit,
    sorted_descending,
)
from freechannels.channels import projector_product_norm
from freechannels.linalg import haar_unitary


class TestEdges:
    def test_complementary_ranks(self):
        assert projector_product_edges(0.5, 0.5) == (0.0, 1.0)

    def test_equal_ranks_cancel_lower_edge(self):
        lo, hi = projector_product_edges(0.3, 0.3)
        assert lo == pytest.approx(0.0, abs=1e-15)
        assert hi == pytest.approx(0.84, abs=1e-14)

    def test_printed_formula(self):
        lo, hi = projector_product_edges(0.2, 0.4)
        assert lo == pytest.approx(0.44 - np.sqrt(0.1536), abs=1e-12)
        assert hi == pytest.approx(0.44 + np.sqrt(0.1536), abs=1e-12)

    def test_symmetry_and_range(self):
        gen = RngStream(0).generator()
        x, y = gen.random(200), gen.random(200)
        lo_xy, hi_xy = projector_product_edges(x, y)
        lo_yx, hi_yx = projector_product_edges(y, x)
        np.testing.assert_array_equal(lo_xy, lo_yx)
        np.testing.assert_array_equal(hi_xy, hi_yx)
        assert np.all((0 <= lo_xy) & (lo_xy <= hi_xy) & (hi_xy <= 1))

    def test_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            projector_product_edges(-0.1, 0.5)
        with pytest.raises(InvalidParameterError):
            projector_product_edges(0.5, 1.2)


class TestNormLimit:
    def test_zero_rank_gives_zero(self):
        assert projector_product_norm_limit(0.0, 0.7) == 0.0
        assert projector_product_norm_limit(0.7, 0.0) == 0.0

    def test_forced_intersection_gives_one(self):
        assert projector_product_norm_limit(0.6, 0.5) == 1.0

    def test_quarter_half(self):
        assert projector_product_norm_limit(0.25, 0.5) == pytest.approx(
            0.5 + np.sqrt(3) / 4, abs=1e-14
        )

    def test_symmetric_on_grid(self):
        grid = np.linspace(0, 1, 100)
        xs, ys = np.meshgrid(grid, grid)
        np.testing.assert_array_equal(
            projector_product_norm_limit(xs, ys),
            projector_product_norm_limit(ys, xs),
        )

    def test_continuous_across_the_seam(self):
        x = np.linspace(0.01, 0.99, 500)
        _, hi = projector_product_edges(x, 1.0 - x)
        assert np.max(np.abs(hi - 1.0)) <= 1e-12

    def test_nondecreasing_in_each_argument(self):
        grid = np.linspace(0, 1, 101)
        for other in (0.1, 0.35, 0.8):
            vals = projector_product_norm_limit(grid, other)
            assert np.all(np.diff(vals) >= -1e-14)


class TestProductMeasure:
    def test_atom_at_one(self):
        m = projector_product_measure(0.6, 0.7)
        assert dict(m.atoms)[1.0] == pytest.approx(0.3, abs=1e-14)

    def test_half_half_masses(self):
        m = projector_product_measure(0.5, 0.5)
        assert dict(m.atoms)[0.0] == pytest.approx(0.5)
        assert dict(m.atoms)[1.0] == 0.0
        density_mass = m.total_mass() - 0.5
        assert density_mass == pytest.approx(0.5, abs=1e-6)

    @pytest.mark.parametrize(
        "alpha,beta", [(0.5, 0.5), (0.3, 0.3), (0.2, 0.4), (0.6, 0.7), (0.9, 0.15)]
    )
    def test_mass_and_first_moment(self, alpha, beta):
        m = projector_product_measure(alpha, beta)
        assert m.total_mass() == pytest.approx(1.0, abs=1e-6)
        assert m.moment(1) == pytest.approx(alpha * beta, abs=1e-6)

    def test_boundary_rejected(self):
        for bad in ((0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0)):
            with pytest.raises(InvalidParameterError):
                projector_product_measure(*bad)

    def test_second_moment_against_monte_carlo(self):
        # the simulated moment tr((P Q P)^2) / N is the oracle here
        alpha = beta = 0.3
        total_dim, trials = 800, 5
        gen = RngStream(77).generator()
        rank = round(alpha * total_dim)
        samples = []
        for _ in range(trials):
            u = haar_unitary(total_dim, gen)
            block = u[:rank, :rank]
            sing = np.linalg.svd(block, compute_uv=False)
            samples.append(np.sum(sing**4) / total_dim)
        samples = np.asarray(samples)
        stderr = samples.std(ddof=1) / np.sqrt(trials)
        predicted = projector_product_measure(alpha, beta).moment(2)
        assert abs(predicted - samples.mean()) < 3 * max(stderr, 1e-6)


class TestConfiningSpectrum:
    def test_binary_half(self):
        np.testing.assert_allclose(confining_spectrum(2, 0.5), [1.0, 0.0], atol=1e-15)

    def test_four_half(self):
        vec = confining_spectrum(4, 0.5)
        np.testing.assert_allclose(
            vec, [0.9330127018922193, 0.0669872981077807, 0.0, 0.0], atol=1e-12
        )
        assert vec.sum() == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("k", [2, 5, 8, 33])
    @pytest.mark.parametrize("t", [0.07, 1 / 3, 0.5, 0.9])
    def test_shape_tail_and_normalization(self, k, t):
        vec = confining_spectrum(k, t)
        assert vec.shape == (k,)
        assert np.all(np.diff(vec) <= 1e-15)
        assert vec.sum() == pytest.approx(1.0, abs=1e-10)
        assert vec[0] == projector_product_norm_limit(1 / k, t)
        cutoff = int(np.floor(k * (1 - t))) + 1  # zero from this 0-based index on
        assert np.all(vec[cutoff:] == 0.0)

    @pytest.mark.parametrize("k", [3, 16, 64])
    @pytest.mark.parametrize("t", [0.07, 0.2, 1 / 3, 0.5, 0.77])
    def test_partial_sums_telescope_exactly(self, k, t):
        vec = confining_spectrum(k, t)
        sums = np.cumsum(sorted_descending(vec))
        target = projector_product_norm_limit(np.arange(1, k + 1) / k, t)
        np.testing.assert_array_equal(sums, target)

    def test_parameter_validation(self):
        with pytest.raises(InvalidParameterError):
            confining_spectrum(1, 0.5)
        for bad_t in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(InvalidParameterError):
                confining_spectrum(4, bad_t)


class TestConjugateProductSpectrum:
    def test_binary_half(self):
        np.testing.assert_allclose(
            conjugate_product_spectrum(2, 0.5), [0.625, 0.125, 0.125, 0.125], atol=1e-15
        )

    def test_three_third_is_rational(self):
        vec = conjugate_product_spectrum(3, 1 / 3)
        np.testing.assert_allclose(vec[0], 11 / 27, atol=1e-15)
        np.testing.assert_allclose(vec[1:], np.full(8, 2 / 27), atol=1e-15)

    @pytest.mark.parametrize("k,t", [(2, 0.5), (3, 0.1), (7, 0.9), (10, 1 / 3)])
    def test_normalization_and_uniform_majorization(self, k, t):
        vec = conjugate_product_spectrum(k, t)
        assert vec.shape == (k * k,)
        assert vec.sum() == pytest.approx(1.0, abs=1e-10)
        uniform = np.full(k * k, 1.0 / (k * k))
        assert majorizes(vec, uniform).majorized


class TestProbabilityVectorHelpers:
    def test_clamps_tiny_negatives(self):
        out = clean_probability_vector([1.0 + 5e-13, -5e-13])
        assert out[1] == 0.0

    def test_rejects_bad_sum_and_big_negatives(self):
        with pytest.raises(InvalidParameterError):
            clean_probability_vector([0.5, 0.4])
        with pytest.raises(InvalidParameterError):
            clean_probability_vector([1.1, -0.1])

    def test_sorted_descending_idempotent(self):
        x = np.array([0.2, 0.5, 0.3])
        once = sorted_descending(x)
        np.testing.assert_array_equal(once, sorted_descending(once))
