import numpy as np
import pytest

from freechannels import (
    InvalidDimensionError,
    InvalidMatrixError,
    NotNormalizedError,
    RngStream,
    haar_unitary,
    hermitian_eigenvalues,
    is_hermitian,
    is_unitary,
    partial_trace_left,
    psd_operator_norm,
    random_unit_vector,
    schmidt_spectrum,
)


def random_hermitian(dim, gen):
    a = gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def random_density(dim, gen):
    a = gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


class TestHermitianEigenvalues:
    def test_identity(self):
        np.testing.assert_array_equal(hermitian_eigenvalues(np.eye(5)), np.ones(5))

    def test_diagonal_sorted_descending(self):
        np.testing.assert_array_equal(
            hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])), [3.0, 2.0, 1.0]
        )

    def test_two_by_two_closed_form(self):
        # oracle: roots of the characteristic polynomial via the quadratic formula
        gen = RngStream(11).generator()
        for _ in range(20):
            m = random_hermitian(2, gen)
            a, d = m[0, 0].real, m[1, 1].real
            b = m[0, 1]
            half_gap = np.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
            expected = np.array([(a + d) / 2 + half_gap, (a + d) / 2 - half_gap])
            np.testing.assert_allclose(
                hermitian_eigenvalues(m), expected, rtol=0, atol=1e-10
            )

    def test_trace_and_hs_norm_identities(self):
        gen = RngStream(12).generator()
        for dim in (3, 17, 50):
            m = random_hermitian(dim, gen)
            w = hermitian_eigenvalues(m)
            assert w.shape == (dim,)
            assert np.all(np.diff(w) <= 0)
            np.testing.assert_allclose(np.sum(w), np.trace(m).real, rtol=1e-9)
            np.testing.assert_allclose(
                np.sum(w**2), np.sum(np.abs(m) ** 2), rtol=1e-9
            )

    def test_rejects_non_square_and_non_hermitian(self):
        with pytest.raises(InvalidMatrixError):
            hermitian_eigenvalues(np.ones((2, 3)))
        with pytest.raises(InvalidMatrixError):
            hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestHaarUnitary:
    def test_dim_one_is_a_phase(self):
        u = haar_unitary(1, RngStream(1))
        assert u.shape == (1, 1)
        assert abs(abs(u[0, 0]) - 1.0) < 1e-12

    @pytest.mark.parametrize("dim", [2, 7, 33])
    def test_unitarity(self, dim):
        u = haar_unitary(dim, RngStream(dim))
        assert is_unitary(u, tol=1e-10)

    def test_zero_dim_rejected(self):
        with pytest.raises(InvalidDimensionError):
            haar_unitary(0, RngStream(0))

    def test_entry_moment(self):
        # E|U_11|^2 = 1/dim; check the Monte-Carlo mean within 3 standard errors
        dim, trials = 50, 2000
        gen = RngStream(2).generator()
        samples = np.array(
            [abs(haar_unitary(dim, gen)[0, 0]) ** 2 for _ in range(trials)]
        )
        stderr = samples.std(ddof=1) / np.sqrt(trials)
        assert abs(samples.mean() - 1.0 / dim) < 3 * stderr

    def test_left_invariance_of_moments(self):
        # observables of VU and U agree for a fixed unitary V
        dim, trials = 12, 10**4
        fixed = haar_unitary(dim, RngStream(99))
        gen = RngStream(3).generator()
        plain, rotated = np.empty(trials), np.empty(trials)
        for i in range(trials):
            u = haar_unitary(dim, gen)
            plain[i] = abs(u[0, 0]) ** 2
            rotated[i] = abs((fixed @ u)[0, 0]) ** 2
        combined_se = np.sqrt(
            plain.var(ddof=1) / trials + rotated.var(ddof=1) / trials
        )
        assert abs(plain.mean() - rotated.mean()) < 4 * combined_se


class TestPartialTrace:
    def test_product_state(self):
        n, k = 3, 2
        x = np.zeros(n * k, dtype=complex)
        x[0] = 1.0  # e_1 (x) f_1
        reduced = partial_trace_left(np.outer(x, x.conj()), n, k)
        expected = np.zeros((k, k))
        expected[0, 0] = 1.0
        np.testing.assert_allclose(reduced, expected, atol=1e-15)

    def test_bell_marginal_is_maximally_mixed(self):
        bell = np.zeros(4, dtype=complex)
        bell[0] = bell[3] = 1 / np.sqrt(2)  # (e1 f1 + e2 f2)/sqrt(2), n = k = 2
        reduced = partial_trace_left(np.outer(bell, bell.conj()), 2, 2)
        np.testing.assert_allclose(reduced, np.eye(2) / 2, atol=1e-15)

    def test_against_double_loop_contraction(self):
        n, k = 3, 2
        rho = random_density(n * k, RngStream(4).generator())
        brute = np.zeros((k, k), dtype=complex)
        for b in range(k):
            for d in range(k):
                for a in range(n):
                    brute[b, d] += rho[a * k + b, a * k + d]
        np.testing.assert_allclose(partial_trace_left(rho, n, k), brute, atol=1e-12)

    def test_preserves_trace_hermiticity_positivity(self):
        gen = RngStream(5).generator()
        n, k = 3, 4
        for _ in range(100):
            rho = random_density(n * k, gen)
            out = partial_trace_left(rho, n, k)
            assert is_hermitian(out)
            np.testing.assert_allclose(np.trace(out).real, 1.0, atol=1e-12)
            assert np.linalg.eigvalsh(out).min() > -1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidDimensionError):
            partial_trace_left(np.eye(6), 2, 2)


class TestSchmidtSpectrum:
    def test_product_vector_is_rank_one(self):
        n, k = 4, 3
        x = np.zeros(n * k, dtype=complex)
        x[0] = 1.0
        np.testing.assert_allclose(
            schmidt_spectrum(x, n, k), [1.0, 0.0, 0.0], atol=1e-15
        )

    def test_maximally_entangled_is_uniform(self):
        n, k = 5, 3
        x = np.zeros(n * k, dtype=complex)
        for i in range(k):
            x[i * k + i] = 1 / np.sqrt(k)
        np.testing.assert_allclose(schmidt_spectrum(x, n, k), np.full(k, 1 / k), atol=1e-12)

    def test_fast_path_matches_partial_trace(self):
        n, k = 8, 3
        x = random_unit_vector(n * k, RngStream(6))
        slow = hermitian_eigenvalues(partial_trace_left(np.outer(x, x.conj()), n, k))
        np.testing.assert_allclose(schmidt_spectrum(x, n, k), slow, atol=1e-10)

    def test_fast_equals_slow_on_many_vectors(self):
        gen = RngStream(7).generator()
        n, k = 5, 4
        worst = 0.0
        for _ in range(100):
            x = random_unit_vector(n * k, gen)
            slow = hermitian_eigenvalues(
                partial_trace_left(np.outer(x, x.conj()), n, k)
            )
            worst = max(worst, np.max(np.abs(schmidt_spectrum(x, n, k) - slow)))
        assert worst <= 1e-10

    def test_rejects_unnormalized(self):
        with pytest.raises(NotNormalizedError):
            schmidt_spectrum(np.ones(6), 3, 2)


class TestPsdOperatorNorm:
    def test_zero_matrix(self):
        assert psd_operator_norm(np.zeros((3, 3))) == 0.0

    def test_projector(self):
        p = np.diag([1.0, 1.0, 0.0])
        assert psd_operator_norm(p) == pytest.approx(1.0, abs=1e-14)

    def test_diagonal(self):
        assert psd_operator_norm(np.diag([0.3, 0.84, 0.1])) == pytest.approx(0.84)

    def test_rejects_non_hermitian_and_negative(self):
        with pytest.raises(InvalidMatrixError):
            psd_operator_norm(np.array([[0.0, 1.0], [0.0, 0.0]]))
        with pytest.raises(InvalidMatrixError):
            psd_operator_norm(np.diag([1.0, -0.5]))


class TestRngStream:
    def test_bitwise_reproducible(self):
        a = RngStream(42, 7).generator().standard_normal(16)
        b = RngStream(42, 7).generator().standard_normal(16)
        np.testing.assert_array_equal(a, b)

    def test_streams_differ(self):
        a = RngStream(42, 0).generator().standard_normal(16)
        b = RngStream(42, 1).generator().standard_normal(16)
        assert not np.allclose(a, b)

    def test_jump_substreams_differ(self):
        base = RngStream(42, 3)
        a = base.generator(jump=1).standard_normal(8)
        b = base.generator(jump=2).standard_normal(8)
        assert not np.allclose(a, b)

    def test_child(self):
        assert RngStream(1, 0).child(5) == RngStream(1, 5)
