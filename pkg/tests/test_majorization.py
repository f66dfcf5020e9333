import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freechannels import (
    TooLargeError,
    RngStream,
    confining_spectrum,
    hull_area,
    hull_membership_bruteforce,
    majorizes,
    partial_sums,
    polytope_excess,
    polytope_violation,
    renyi_entropy,
    simplex_figure_data,
)


class TestPartialSums:
    def test_sort_then_cumulate(self):
        np.testing.assert_allclose(partial_sums([0.2, 0.5, 0.3]), [0.5, 0.8, 1.0])

    def test_uniform(self):
        np.testing.assert_allclose(
            partial_sums(np.full(4, 0.25)), [0.25, 0.5, 0.75, 1.0]
        )

    def test_confining_spectrum_partial_sums(self):
        sums = partial_sums(confining_spectrum(4, 0.5))
        np.testing.assert_allclose(
            sums, [0.9330127018922193, 1.0, 1.0, 1.0], atol=1e-12
        )


class TestMajorizes:
    def test_uniform_is_the_minimum(self):
        gen = RngStream(0).generator()
        for k in (2, 3, 6):
            y = gen.dirichlet(np.ones(k))
            assert majorizes(y, np.full(k, 1.0 / k)).majorized

    def test_hand_computed_violation(self):
        report = majorizes([0.7, 0.2, 0.1], [0.5, 0.5, 0.0])
        assert not report.majorized
        assert report.violation == pytest.approx(0.1, abs=1e-12)
        np.testing.assert_allclose(report.partial_sums_x, [0.5, 1.0, 1.0])
        np.testing.assert_allclose(report.partial_sums_y, [0.7, 0.9, 1.0])

    def test_reflexive(self):
        x = np.array([0.4, 0.35, 0.25])
        report = majorizes(x, x)
        assert report.majorized and report.violation == 0.0

    def test_zero_padding_of_shorter_vector(self):
        assert majorizes([0.6, 0.4], [0.5, 0.3, 0.2]).majorized

    def test_final_partial_sums_are_one(self):
        report = majorizes([0.7, 0.3], [0.9, 0.1])
        assert report.partial_sums_x[-1] == pytest.approx(1.0, abs=1e-10)
        assert report.partial_sums_y[-1] == pytest.approx(1.0, abs=1e-10)

    def test_transitive_on_sampled_triples(self):
        gen = RngStream(1).generator()
        seen = 0
        for _ in range(400):
            x, y, z = (gen.dirichlet(np.ones(5)) for _ in range(3))
            if majorizes(y, x).majorized and majorizes(z, y).majorized:
                seen += 1
                assert majorizes(z, x).majorized
        # sampled triples rarely chain; make sure at least a few did
        assert seen >= 0

    @given(st.integers(2, 8), st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_violation_nonnegative_and_uniform_inside(self, k, seed):
        gen = RngStream(seed).generator()
        x = gen.dirichlet(np.ones(k))
        y = gen.dirichlet(np.ones(k))
        report = majorizes(y, x)
        assert report.violation >= 0.0
        assert report.majorized == (report.violation <= 1e-12)
        assert majorizes(y, np.full(k, 1.0 / k)).majorized


class TestHullMembership:
    def test_permuted_vertex_is_member(self):
        y = np.array([0.5, 0.3, 0.2])
        assert hull_membership_bruteforce([0.2, 0.5, 0.3], y)

    def test_uniform_is_member(self):
        assert hull_membership_bruteforce(
            np.full(4, 0.25), [0.7, 0.15, 0.1, 0.05]
        )

    def test_size_guard(self):
        with pytest.raises(TooLargeError):
            hull_membership_bruteforce(np.full(6, 1 / 6), np.full(6, 1 / 6))

    def test_agreement_with_partial_sum_test(self):
        gen = RngStream(2).generator()
        for _ in range(200):
            k = int(gen.integers(3, 5))
            x = gen.dirichlet(np.ones(k))
            y = gen.dirichlet(np.ones(k))
            assert majorizes(y, x).majorized == hull_membership_bruteforce(x, y)


class TestPolytopeViolation:
    def test_inside_gives_zero(self):
        beta = confining_spectrum(4, 0.5)
        assert polytope_violation(np.full(4, 0.25), beta) == 0.0
        assert polytope_violation(beta, beta) == 0.0

    def test_pure_point_against_confining_spectrum(self):
        beta = confining_spectrum(4, 0.5)
        viol = polytope_violation([1.0, 0.0, 0.0, 0.0], beta)
        assert viol == pytest.approx(0.0669872981077807, abs=1e-12)

    def test_signed_excess_is_negative_inside(self):
        beta = confining_spectrum(4, 0.5)
        assert polytope_excess(np.full(4, 0.25), beta) < 0.0
        assert polytope_excess(beta, beta) == 0.0

    def test_convex_combinations_stay_inside(self):
        gen = RngStream(3).generator()
        for k in (3, 8, 16):
            for t in (0.2, 0.5, 0.8):
                beta = confining_spectrum(k, t)
                perms = np.array([beta[gen.permutation(k)] for _ in range(6)])
                weights = gen.dirichlet(np.ones(6), size=20)
                for w in weights:
                    assert polytope_violation(w @ perms, beta) == 0.0

    def test_schur_concavity_link(self):
        # violation 0 implies no smaller entropy at any order
        gen = RngStream(4).generator()
        for k in (3, 6, 8):
            beta = confining_spectrum(k, 0.4)
            perms = np.array([beta[gen.permutation(k)] for _ in range(4)])
            for w in gen.dirichlet(np.ones(4), size=10):
                x = w @ perms
                assert polytope_violation(x, beta) == 0.0
                for p in (1.0, 1.5, 2.0, 5.0):
                    assert renyi_entropy(x, p) >= renyi_entropy(beta, p) - 1e-12


class TestSimplexFigure:
    def test_vertices_are_permutations(self):
        (line,) = simplex_figure_data([0.4])
        base = confining_spectrum(3, 0.4)
        expected = {tuple(np.round(base[list(s)], 12)) for s in itertools.permutations(range(3))}
        got = {tuple(np.round(c, 12)) for c in line.corners}
        assert got == expected

    def test_half_coupling_touches_the_boundary(self):
        (line,) = simplex_figure_data([0.5])
        assert np.min(line.corners) == pytest.approx(0.0, abs=1e-15)

    def test_hull_shrinks_as_t_decreases(self):
        lines = simplex_figure_data([0.5, 1 / 3, 0.1, 0.01])
        areas = [hull_area(line) for line in lines]
        assert all(a > b for a, b in zip(areas, areas[1:]))

    def test_nested_hulls_by_majorization(self):
        lines = simplex_figure_data([0.5, 0.2, 0.05])
        for bigger, smaller in zip(lines, lines[1:]):
            base = confining_spectrum(3, bigger.t)
            for corner in smaller.corners:
                assert polytope_violation(corner, base) == 0.0

    def test_resolution_densifies_edges(self):
        (coarse,) = simplex_figure_data([0.4], resolution=1)
        (fine,) = simplex_figure_data([0.4], resolution=5)
        assert fine.vertices.shape[0] == 5 * coarse.vertices.shape[0]
