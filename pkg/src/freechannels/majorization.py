"""Majorization partial order and the permutation polytope of a vector.

A probability vector ``x`` is majorized by ``y`` when every descending
partial sum of ``x`` is dominated by the corresponding one of ``y``;
equivalently ``x`` lies in the convex hull of the coordinate permutations
of ``y``.  Both characterizations are implemented (the hull one as a small
brute-force feasibility solve) so each can serve as an oracle for the
other.  Closeness to the polytope is measured throughout by the maximal
positive partial-sum excess, the scalar that the confinement theorems
control directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .errors import TooLargeError
from .freeprob import clean_probability_vector, confining_spectrum, sorted_descending

__all__ = [
    "partial_sums",
    "MajorizationReport",
    "majorizes",
    "polytope_violation",
    "polytope_excess",
    "hull_membership_bruteforce",
    "HullPolyline",
    "simplex_figure_data",
    "barycentric_embedding",
    "hull_area",
]

MAJORIZATION_TOL = 1e-12


def partial_sums(x) -> np.ndarray:
    """Cumulative sums of the descending rearrangement of ``x``."""
    return np.cumsum(sorted_descending(x))


def _pad_pair(x, y):
    x = clean_probability_vector(x)
    y = clean_probability_vector(y)
    size = max(x.size, y.size)
    x = np.pad(x, (0, size - x.size))
    y = np.pad(y, (0, size - y.size))
    return x, y


@dataclass(frozen=True)
class MajorizationReport:
    """Outcome of a majorization comparison.

    ``violation`` is the largest positive excess of a partial sum of ``x``
    over the matching partial sum of ``y``; ``majorized`` holds exactly
    when that excess is at most 1e-12.
    """

    partial_sums_x: np.ndarray
    partial_sums_y: np.ndarray
    violation: float
    majorized: bool


def majorizes(y, x) -> MajorizationReport:
    """Report whether ``x`` is majorized by ``y`` (shorter side zero-padded)."""
    x, y = _pad_pair(x, y)
    sx = partial_sums(x)
    sy = partial_sums(y)
    violation = float(np.max(np.clip(sx - sy, 0.0, None)))
    return MajorizationReport(
        partial_sums_x=sx,
        partial_sums_y=sy,
        violation=violation,
        majorized=violation <= MAJORIZATION_TOL,
    )


def polytope_violation(x, target) -> float:
    """Maximal positive partial-sum excess of ``x`` over ``target``.

    Zero exactly when ``x`` lies in the permutation polytope of ``target``.
    This scalar is the library's meaning of "distance into the
    ε-neighborhood" of the polytope.
    """
    return majorizes(target, x).violation


def polytope_excess(x, target) -> float:
    """Signed version of :func:`polytope_violation`, for trend studies.

    Maximum of ``s_j(x) - s_j(target)`` over the informative indices
    ``j < len`` (the final sums are both 1, so including them would clamp
    the statistic at 0 for every input).  Negative values measure how far
    inside the polytope ``x`` sits.
    """
    x, target = _pad_pair(x, target)
    diff = partial_sums(x) - partial_sums(target)
    if diff.size <= 1:
        return 0.0
    return float(np.max(diff[:-1]))


def hull_membership_bruteforce(x, y, tol: float = 1e-9) -> bool:
    """Decide ``x ∈ conv{σ.y}`` by a nonnegative least-squares feasibility solve.

    Enumerates all coordinate permutations of ``y`` (hence the guard
    ``k <= 5``, at most 120 vertices) and checks whether ``x`` is a convex
    combination of them, using an active-set NNLS solve with the convexity
    row appended; feasibility means residual at most ``tol``.
    """
    x, y = _pad_pair(x, y)
    k = y.size
    if k > 5:
        raise TooLargeError("brute-force hull membership is limited to k <= 5")
    vertices = np.array(
        [y[list(sigma)] for sigma in itertools.permutations(range(k))]
    ).T
    system = np.vstack([vertices, np.ones(vertices.shape[1])])
    rhs = np.concatenate([x, [1.0]])
    _, residual = nnls(system, rhs)
    return bool(residual <= tol)


def barycentric_embedding(points) -> np.ndarray:
    """Map probability vectors on 3 outcomes to the standard planar triangle.

    Corners (0,0), (1,0), (1/2, sqrt(3)/2) receive the three basis vectors.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != 3:
        raise ValueError("barycentric embedding requires length-3 vectors")
    corners = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]])
    return points @ corners


@dataclass(frozen=True)
class HullPolyline:
    """Boundary polygon of one permutation polytope inside the triangle."""

    t: float
    corners: np.ndarray  # (m, 3) distinct permutations, in boundary order
    vertices: np.ndarray  # (m, 2) their planar embedding


def hull_area(polyline: HullPolyline) -> float:
    """Shoelace area of the boundary polygon."""
    v = polyline.vertices
    if v.shape[0] < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def simplex_figure_data(t_values, resolution: int = 1) -> list:
    """Boundary polygons of the confining polytopes on 3 outcomes.

    For each ``t`` the polygon vertices are the distinct permutations of the
    confining spectrum at ``k = 3``, ordered around their centroid (the
    orbit of a point under coordinate permutations is always in convex
    position).  ``resolution > 1`` interpolates that many points along each
    edge of the polygon.
    """
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    out = []
    for t in t_values:
        base = confining_spectrum(3, float(t))
        perms = np.unique(
            np.array([base[list(s)] for s in itertools.permutations(range(3))]),
            axis=0,
        )
        planar = barycentric_embedding(perms)
        if perms.shape[0] > 2:
            center = planar.mean(axis=0)
            order = np.argsort(np.arctan2(*(planar - center).T[::-1]))
            perms, planar = perms[order], planar[order]
        if resolution > 1 and perms.shape[0] > 1:
            segs3, segs2 = [], []
            for i in range(perms.shape[0]):
                nxt = (i + 1) % perms.shape[0]
                w = np.linspace(0.0, 1.0, resolution, endpoint=False)[:, None]
                segs3.append((1 - w) * perms[i] + w * perms[nxt])
                segs2.append((1 - w) * planar[i] + w * planar[nxt])
            perms = np.vstack(segs3)
            planar = np.vstack(segs2)
        out.append(HullPolyline(t=float(t), corners=perms, vertices=planar))
    return out
