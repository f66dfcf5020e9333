"""Entropies of the predicted spectra and the additivity-violation margins.

Everything here is pure numerics on the closed-form spectra: Rényi and
Shannon entropies, the conversion to output norms, the margin whose
positivity certifies an asymptotic additivity violation, the scan for the
smallest violating output dimension, and the expansions used in the
small-coupling regime ``t = k^(-alpha)``.

All logarithms are natural.  The convention ``0·log 0 = 0`` is applied
after clamping tiny negative entries to zero.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import InvalidParameterError, NumericalFailureError
from .freeprob import confining_spectrum

__all__ = [
    "entropy_term",
    "renyi_entropy",
    "shannon_entropy",
    "confining_entropy",
    "conjugate_product_entropy",
    "schatten_norm_from_entropy",
    "violation_margin",
    "min_violation_k",
    "shannon_deficit",
    "confining_entropy_asymptote",
    "conjugate_product_entropy_asymptote",
    "quantile_entropy_integral",
    "EntropyParams",
]


def entropy_term(x):
    """Elementwise ``-x log x`` with the value 0 at ``x = 0``."""
    return special.entr(np.asarray(x, dtype=float))


def renyi_entropy(x, p: float) -> float:
    """Rényi entropy of order ``p`` of a probability vector, in nats.

    ``log(sum x_i^p) / (1 - p)`` for ``p != 1``; the ``p = 1`` input is
    routed to the Shannon limit ``-sum x_i log x_i``.  Entries below
    -1e-12 are rejected, smaller negatives are clamped to exact zeros.
    """
    if p <= 0:
        raise InvalidParameterError("entropy order p must be positive")
    x = np.asarray(x, dtype=float).reshape(-1)
    if np.min(x) < -1e-12:
        raise InvalidParameterError("probability entries must be nonnegative")
    x = np.clip(x, 0.0, None)
    if p == 1:
        return float(np.sum(entropy_term(x)))
    x = x[x > 0.0]
    return float(np.log(np.sum(x**p)) / (1.0 - p))


def shannon_entropy(x) -> float:
    return renyi_entropy(x, 1.0)


def confining_entropy(k: int, t: float, p: float = 1.0) -> float:
    """Entropy of the extremal single-channel output spectrum."""
    return renyi_entropy(confining_spectrum(k, t), p)


def conjugate_product_entropy(k: int, t: float, p: float = 1.0) -> float:
    """Entropy of the Bell-output spectrum of the conjugate channel pair.

    Evaluated from the two distinct eigenvalues, so it stays cheap even
    when the ``k^2`` entries would be too many to materialize.
    """
    if p <= 0:
        raise InvalidParameterError("entropy order p must be positive")
    if k < 2:
        raise InvalidParameterError("output dimension k must be >= 2")
    if not (0.0 < t < 1.0):
        raise InvalidParameterError("t must lie strictly in (0, 1)")
    rest = (1.0 - t) / k**2
    top = t + rest
    multiplicity = k * k - 1
    if p == 1:
        return float(entropy_term(top) + multiplicity * entropy_term(rest))
    return float(np.log(top**p + multiplicity * rest**p) / (1.0 - p))


def schatten_norm_from_entropy(entropy: float, p: float) -> float:
    """Output p-norm implied by a Rényi entropy: ``exp((1-p) H / p)``."""
    if p <= 1:
        raise InvalidParameterError("norm order p must exceed 1")
    return float(np.exp((1.0 - p) * entropy / p))


def violation_margin(k: int, t: float, p: float) -> float:
    """Asymptotic additivity-violation certificate at ``(k, t, p)``.

    Twice the single-channel entropy bound minus the conjugate-pair bound;
    a positive value certifies that the pair beats twice the single copy in
    the large-``n`` limit.
    """
    if p <= 1:
        raise InvalidParameterError(
            "violation margin requires p > 1; use shannon_deficit for p = 1"
        )
    return 2.0 * confining_entropy(k, t, p) - conjugate_product_entropy(k, t, p)


def min_violation_k(t: float, p: float, k_max: int = 10**4):
    """Smallest output dimension with a positive violation margin.

    Scans every integer ``k`` from 2 to ``k_max`` (no divisibility
    restriction on ``1/t``: the limit formulas are defined for every
    ``k``).  Returns None when no dimension up to ``k_max`` violates.
    """
    if p <= 1:
        raise InvalidParameterError("the scan requires p > 1")
    if not (0.0 < t < 1.0):
        raise InvalidParameterError("t must lie strictly in (0, 1)")
    if k_max > 10**5:
        raise InvalidParameterError("k_max is capped at 1e5")
    for k in range(2, int(k_max) + 1):
        if violation_margin(k, t, p) > 0.0:
            return k
    return None


def shannon_deficit(k: int) -> float:
    """Shannon-entropy deficit of the conjugate pair at half coupling.

    ``H(pair) - 2 H(single)`` at ``t = 1/2``; tends to ``log 2`` from above
    as ``k`` grows, so these bounds never certify a Shannon (p = 1)
    violation.  ``k`` must be even so that ``k(1-t)`` is an integer.
    """
    if k < 4 or k % 2:
        raise InvalidParameterError("k must be an even integer >= 4")
    return conjugate_product_entropy(k, 0.5, 1.0) - 2.0 * confining_entropy(k, 0.5, 1.0)


def confining_entropy_asymptote(k: int, alpha: float) -> float:
    """Large-``k`` expansion of the single-channel entropy at ``t = k^-alpha``.

    ``log k - log k / k^alpha`` (the correction is positive for all
    ``alpha > 0``).
    """
    if alpha <= 0:
        raise InvalidParameterError("alpha must be positive")
    if k < 2:
        raise InvalidParameterError("k must be >= 2")
    return float(np.log(k) * (1.0 - k ** (-float(alpha))))


def conjugate_product_entropy_asymptote(k: int, alpha: float) -> float:
    """Large-``k`` expansion of the pair entropy at ``t = k^-alpha``.

    Three branches by comparing ``alpha`` to 2:
    ``2 log k - (2 - alpha) log k / k^alpha`` below,
    ``2 log k - (2 log 2 - 1) / k^2`` at,
    ``2 log k - 1 / (2 k^(2 alpha - 2))`` above.
    """
    if alpha <= 0:
        raise InvalidParameterError("alpha must be positive")
    if k < 2:
        raise InvalidParameterError("k must be >= 2")
    base = 2.0 * np.log(k)
    if alpha < 2:
        return float(base - (2.0 - alpha) * np.log(k) / k**alpha)
    if alpha == 2:
        return float(base - (2.0 * np.log(2.0) - 1.0) / k**2)
    return float(base - 0.5 / k ** (2.0 * alpha - 2.0))


def _half_coupling_quantile(u):
    """Rescaled limiting eigenvalue profile at half coupling.

    Derivative of ``sqrt(u(1-u))``; diverges like ``1/(2 sqrt(u))`` at 0.
    """
    u = np.asarray(u, dtype=float)
    return (1.0 - 2.0 * u) / (2.0 * np.sqrt(u * (1.0 - u)))


def quantile_entropy_integral(tol: float = 1e-10) -> float:
    """Integral of the entropy term along the half-coupling quantile profile.

    Integrates ``-q log q`` with ``q(u)`` the rescaled spectral profile over
    ``u`` in ``(0, 1/2)`` after the substitution ``u = v^2``, which tames
    the inverse-square-root blowup of ``q`` at the origin.  The exact value
    is ``-log(2)/2``.
    """

    def integrand(v):
        return entropy_term(_half_coupling_quantile(v * v)) * 2.0 * v

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(
                integrand,
                0.0,
                np.sqrt(0.5),
                epsabs=tol,
                epsrel=tol,
                limit=300,
            )
        except integrate.IntegrationWarning as exc:
            raise NumericalFailureError(f"quadrature did not converge: {exc}") from exc
    if err > 1e-8:
        raise NumericalFailureError(f"quadrature error estimate {err:g} too large")
    return float(val)


@dataclass(frozen=True)
class EntropyParams:
    """Parameter bundle for entropy studies.

    When ``alpha`` is set, the coupling is derived as ``t = k^-alpha``.
    ``p = 1`` selects the Shannon branch everywhere.
    """

    p: float
    k: int
    t: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.p <= 0:
            raise InvalidParameterError("entropy order p must be positive")
        if self.k < 2:
            raise InvalidParameterError("output dimension k must be >= 2")
        if self.alpha is not None:
            if self.alpha <= 0:
                raise InvalidParameterError("alpha must be positive")
            derived = float(self.k ** (-float(self.alpha)))
            if self.t is not None and abs(self.t - derived) > 1e-12:
                raise InvalidParameterError("t conflicts with k^-alpha")
            object.__setattr__(self, "t", derived)
        if self.t is None or not (0.0 < self.t < 1.0):
            raise InvalidParameterError("t must lie strictly in (0, 1)")
