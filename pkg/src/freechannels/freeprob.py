"""Closed-form limit predictions from free probability.

Two independent uniformly random subspaces of ``C^N`` with relative
dimensions ``x`` and ``y`` have projectors whose product ``P Q P`` acquires,
as ``N`` grows, a deterministic spectral distribution: an atom at 0, an atom
at 1 when the subspaces must intersect, and an absolutely continuous part
supported between two explicit edges.  This module evaluates those edges,
the limiting operator norm, the full limiting measure, and the two spectra
derived from them for random channels: the extremal ("confining") output
spectrum of a single channel and the Bell-state output spectrum of a
channel coupled with its conjugate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import InvalidParameterError, NumericalFailureError

__all__ = [
    "projector_product_edges",
    "projector_product_norm_limit",
    "SpectralMeasure",
    "projector_product_measure",
    "confining_spectrum",
    "conjugate_product_spectrum",
    "clean_probability_vector",
    "sorted_descending",
]


def _check_unit_interval(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise InvalidParameterError(f"{name} must lie in [0, 1]")
    return arr


def projector_product_edges(x, y) -> tuple:
    """Support edges (lower, upper) of the limiting projector-product spectrum.

    ``x + y - 2xy ∓ sqrt(4xy(1-x)(1-y))`` for relative ranks ``x, y`` in
    ``[0, 1]``.  Symmetric in its arguments; both edges lie in ``[0, 1]``.
    Accepts scalars or arrays.
    """
    x = _check_unit_interval(x, "x")
    y = _check_unit_interval(y, "y")
    mid = x + y - 2.0 * x * y
    half = np.sqrt(4.0 * x * y * (1.0 - x) * (1.0 - y))
    lo = np.clip(mid - half, 0.0, 1.0)
    hi = np.clip(mid + half, 0.0, 1.0)
    if lo.ndim == 0:
        return float(lo), float(hi)
    return lo, hi


def projector_product_norm_limit(x, y):
    """Limiting operator norm of the product of two free random projectors.

    Piecewise: 0 when either relative rank is 0, exactly 1 when the ranks
    force the subspaces to intersect (``x + y > 1``), and the upper support
    edge otherwise.  Nondecreasing in each argument.  Accepts scalars or
    arrays (broadcast together).
    """
    x = _check_unit_interval(x, "x")
    y = _check_unit_interval(y, "y")
    x, y = np.broadcast_arrays(x, y)
    _, hi = projector_product_edges(x, y)
    out = np.where(x + y > 1.0, 1.0, np.asarray(hi))
    out = np.where((x == 0.0) | (y == 0.0), 0.0, out)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class SpectralMeasure:
    """Probability measure with point atoms plus a density on an interval.

    ``atoms`` is a tuple of ``(location, mass)`` pairs; ``density`` is a
    vectorized callable supported on ``support = (lo, hi)``, or None when
    the measure is purely atomic.
    """

    atoms: tuple
    density: Callable | None
    support: tuple

    def integrate(self, f: Callable, tol: float = 1e-8) -> float:
        """Integrate ``f`` against the measure (atoms + quadrature).

        The absolutely continuous part is integrated after the substitution
        ``x = lo + (hi - lo) sin^2(θ)``, which removes the square-root
        vanishing of the density at both support edges.
        """
        total = sum(mass * f(np.asarray(loc)) for loc, mass in self.atoms if mass > 0)
        if self.density is not None:
            lo, hi = self.support
            width = hi - lo
            if width > 0:

                def integrand(theta):
                    s = np.sin(theta)
                    c = np.cos(theta)
                    xv = lo + width * s * s
                    return f(xv) * self.density(xv) * width * 2.0 * s * c

                val, err = integrate.quad(
                    integrand, 0.0, np.pi / 2.0, epsabs=tol, epsrel=tol, limit=200
                )
                if err > 10 * max(tol, tol * abs(val)) + 1e-12:
                    raise NumericalFailureError(
                        f"quadrature error estimate {err:g} exceeds tolerance"
                    )
                total += val
        return float(total)

    def total_mass(self, tol: float = 1e-8) -> float:
        return self.integrate(np.ones_like, tol=tol)

    def moment(self, order: int, tol: float = 1e-8) -> float:
        return self.integrate(lambda x: x**order, tol=tol)


def projector_product_measure(alpha: float, beta: float) -> SpectralMeasure:
    """Limiting spectral measure of the product of two free projectors.

    For relative ranks ``alpha, beta`` strictly inside ``(0, 1)``: an atom
    at 0 of mass ``1 - min(alpha, beta)``, an atom at 1 of mass
    ``max(alpha + beta - 1, 0)``, and the density
    ``sqrt((hi - x)(x - lo)) / (2π x (1 - x))`` on ``[lo, hi]``.
    Total mass 1; first moment ``alpha * beta``.
    """
    if not (0.0 < alpha < 1.0) or not (0.0 < beta < 1.0):
        raise InvalidParameterError("relative ranks must lie strictly in (0, 1)")
    lo, hi = projector_product_edges(alpha, beta)

    def density(x):
        x = np.asarray(x, dtype=float)
        bulk = np.clip((hi - x) * (x - lo), 0.0, None)
        return np.sqrt(bulk) / (2.0 * np.pi * x * (1.0 - x))

    atoms = ((0.0, 1.0 - min(alpha, beta)), (1.0, max(alpha + beta - 1.0, 0.0)))
    return SpectralMeasure(atoms=atoms, density=density, support=(lo, hi))


def confining_spectrum(k: int, t: float) -> np.ndarray:
    """Extremal limiting output spectrum of the random channel model.

    Length-``k`` probability vector whose j-th descending partial sum equals
    the limiting norm ``projector_product_norm_limit(j/k, t)``; entries are
    the increments of that norm along the grid ``j/k``, which keeps the
    partial sums exact (no cancellation).  Entries from index
    ``floor(k(1-t)) + 2`` on are exactly zero.
    """
    if k < 2:
        raise InvalidParameterError("output dimension k must be >= 2")
    if not (0.0 < t < 1.0):
        raise InvalidParameterError("t must lie strictly in (0, 1)")
    grid = projector_product_norm_limit(np.arange(k + 1) / k, t)
    vec = np.diff(grid)
    return np.clip(vec, 0.0, None)


def conjugate_product_spectrum(k: int, t: float) -> np.ndarray:
    """Limiting Bell-output spectrum of a channel tensored with its conjugate.

    Length ``k^2``: one eigenvalue ``t + (1-t)/k^2`` and ``k^2 - 1`` equal
    eigenvalues ``(1-t)/k^2``.
    """
    if k < 2:
        raise InvalidParameterError("output dimension k must be >= 2")
    if not (0.0 < t < 1.0):
        raise InvalidParameterError("t must lie strictly in (0, 1)")
    rest = (1.0 - t) / k**2
    vec = np.full(k * k, rest)
    vec[0] = t + rest
    return vec


def clean_probability_vector(x, sum_tol: float = 1e-10, neg_tol: float = 1e-12) -> np.ndarray:
    """Validate and clean a probability vector.

    Entries below ``-neg_tol`` or a total farther than ``sum_tol`` from 1
    are rejected; small negative entries are clamped to exact zeros so that
    downstream entropy code sees clean zeros.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size == 0:
        raise InvalidParameterError("probability vector must be nonempty")
    if np.min(x) < -neg_tol:
        raise InvalidParameterError(f"negative entry {np.min(x):g} below tolerance")
    if abs(float(np.sum(x)) - 1.0) > sum_tol:
        raise InvalidParameterError(f"entries sum to {np.sum(x):.15g}, not 1")
    return np.clip(x, 0.0, None)


def sorted_descending(x) -> np.ndarray:
    """Descending-sorted copy; idempotent on already-sorted input."""
    return np.sort(np.asarray(x, dtype=float).reshape(-1))[::-1]
