"""Optimization over pure channel inputs.

Two solvers share a config: an alternating maximization that drives the
j-th descending partial sum of the output spectrum toward its limiting
value (alternating between the best rank-j output subspace for the current
input and the best input for the current subspace), and a projected
gradient descent on the input sphere that estimates the minimum output
Rényi entropy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .channels import ChannelInstance, apply_channel_pure
from .entropy import renyi_entropy
from .linalg import RngStream, hermitian_eigenvalues

__all__ = [
    "OptimizerConfig",
    "OptResult",
    "max_partial_sum",
    "renyi_objective_and_gradient",
    "estimate_hmin",
]


@dataclass(frozen=True)
class OptimizerConfig:
    """Shared knobs for both optimizers.

    ``tol`` stops a run once the objective improves by less than that per
    iteration; the backtracking line search starts at ``init_step``,
    shrinks by ``shrink`` and accepts on an Armijo ``sufficient`` decrease.
    The inner eigensolver of the alternating scheme is a warm-started power
    iteration with residual tolerance ``power_tol``.
    """

    restarts: int = 20
    max_iters: int = 500
    tol: float = 1e-7
    grad_tol: float = 1e-7
    init_step: float = 1.0
    shrink: float = 0.5
    sufficient: float = 1e-4
    power_tol: float = 1e-8
    power_max_steps: int = 80

    def __post_init__(self):
        if self.restarts < 1:
            raise InvalidParameterError("need at least one restart")
        for name in ("tol", "grad_tol", "init_step", "shrink", "sufficient", "power_tol"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"{name} must be positive")


@dataclass(frozen=True)
class OptResult:
    """Best run over all restarts.

    ``value`` always equals the objective re-evaluated at ``argument``;
    ``history`` (objective per iteration of the best run) is recorded only
    when requested.
    """

    value: float
    argument: np.ndarray
    iterations: int
    restart_index: int
    converged: bool
    history: tuple = ()


def _top_eigvec_power(mat_thin, mat_thin_h, z, tol, max_steps):
    """Top eigenvector of ``mat_thin_h @ mat_thin``, warm-started at ``z``.

    Plain power iteration; each step cannot decrease the Rayleigh quotient
    of a PSD operator, which is what keeps the outer scheme monotone even
    when the step cap is reached before the residual target.
    """
    for _ in range(max_steps):
        w = mat_thin_h @ (mat_thin @ z)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return z
        rayleigh = float(np.real(np.vdot(z, w)))
        z_next = w / norm_w
        if np.linalg.norm(w - rayleigh * z) <= tol * norm_w:
            return z_next
        z = z_next
    return z


def max_partial_sum(
    channel: ChannelInstance,
    j: int,
    cfg: OptimizerConfig | None = None,
    rng=None,
    record_history: bool = False,
) -> OptResult:
    """Maximize the j-th descending partial sum of the output spectrum.

    Alternates (i) the output subspace: span of the top-j eigenvectors of
    the current output density, and (ii) the input: top eigenvector of the
    compression of the subspace projector to the channel image, computed in
    input coordinates.  Both half-steps are ascent steps, so the objective
    is nondecreasing; the best value over all restarts is returned, with
    the limiting norm at relative ranks ``(j/k, t)`` as its large-``n``
    target.
    """
    if not 1 <= j <= channel.k:
        raise InvalidParameterError(f"j must lie in [1, {channel.k}]")
    cfg = cfg or OptimizerConfig()
    stream = rng if rng is not None else RngStream(channel.seed, 0)
    n, k, p = channel.n, channel.k, channel.p_n
    basis = channel.image_basis
    basis_tensor = basis.reshape(n, k, p)

    best = None
    for restart in range(cfg.restarts):
        gen = stream.generator(jump=restart + 1) if isinstance(stream, RngStream) else stream
        z = gen.standard_normal(p) + 1j * gen.standard_normal(p)
        z /= np.linalg.norm(z)
        previous = -np.inf
        value = 0.0
        history = []
        for iteration in range(cfg.max_iters):
            output = (basis @ z).reshape(n, k)
            density = output.T @ output.conj()
            eigvals, eigvecs = np.linalg.eigh(density)
            value = float(np.sum(eigvals[::-1][:j]).real)
            history.append(value)
            if value - previous < cfg.tol:
                break
            previous = value
            subspace = eigvecs[:, ::-1][:, :j]
            thin = np.einsum("bc,abm->acm", subspace.conj(), basis_tensor).reshape(
                n * j, p
            )
            thin_h = thin.conj().T.copy()
            z = _top_eigvec_power(thin, thin_h, z, cfg.power_tol, cfg.power_max_steps)
            z /= np.linalg.norm(z)
        converged = iteration < cfg.max_iters - 1
        if best is None or value > best.value:
            best = OptResult(
                value=value,
                argument=z,
                iterations=iteration,
                restart_index=restart,
                converged=converged,
                history=tuple(history) if record_history else (),
            )
    # report the value from a fresh evaluation so the result is self-consistent
    spectrum = hermitian_eigenvalues(apply_channel_pure(channel, best.argument))
    return OptResult(
        value=float(np.sum(spectrum[:j])),
        argument=best.argument,
        iterations=best.iterations,
        restart_index=best.restart_index,
        converged=best.converged,
        history=best.history,
    )


def renyi_objective_and_gradient(channel: ChannelInstance, x: np.ndarray, p: float):
    """Output Rényi entropy of a pure input and its ambient gradient.

    The gradient is returned as a complex vector ``g`` whose real and
    imaginary parts are the partial derivatives of the objective with
    respect to the real and imaginary parts of ``x`` (no sphere
    constraint applied); the objective is invariant under a global phase
    of ``x``, so ``g`` has no component along ``i x``.
    """
    if p <= 1:
        raise InvalidParameterError("gradient path requires p > 1")
    x = np.asarray(x).reshape(-1)
    basis = channel.image_basis
    output = (basis @ x).reshape(channel.n, channel.k)
    density = output.T @ output.conj()
    eigvals, eigvecs = np.linalg.eigh(density)
    eigvals = np.clip(eigvals.real, 0.0, None)
    power_sum = float(np.sum(eigvals**p))
    value = float(np.log(power_sum) / (1.0 - p))
    # d(sum rho^p) pushed through the Gram map: dF/d(conj Y) = p Y (rho^(p-1))^T
    density_power = (eigvecs * (p * eigvals ** (p - 1.0))) @ eigvecs.conj().T
    sensitivity = output @ density_power.T
    grad_power_sum = 2.0 * (basis.conj().T @ sensitivity.reshape(-1))
    gradient = grad_power_sum / ((1.0 - p) * power_sum)
    return value, gradient


def estimate_hmin(
    channel: ChannelInstance,
    p: float,
    cfg: OptimizerConfig | None = None,
    rng=None,
    warm_starts=None,
) -> OptResult:
    """Estimate the minimum output Rényi entropy over pure inputs.

    Projected gradient descent on the unit sphere of the input space
    (retraction by normalization) with Armijo backtracking; restarts are
    uniform on the sphere, optionally preceded by caller-supplied warm
    starts.  The large-``n`` lower bound for the result is the entropy of
    the confining spectrum.
    """
    if p <= 1:
        raise InvalidParameterError("descent requires p > 1")
    cfg = cfg or OptimizerConfig()
    stream = rng if rng is not None else RngStream(channel.seed, 0)
    dim = channel.p_n

    starts = [np.asarray(w, dtype=complex) for w in (warm_starts or [])]
    best = None
    for restart in range(cfg.restarts):
        if restart < len(starts):
            x = starts[restart]
        else:
            gen = (
                stream.generator(jump=restart + 1)
                if isinstance(stream, RngStream)
                else stream
            )
            x = gen.standard_normal(dim) + 1j * gen.standard_normal(dim)
        x = x / np.linalg.norm(x)
        value, gradient = renyi_objective_and_gradient(channel, x, p)
        converged = False
        for iteration in range(cfg.max_iters):
            tangent = gradient - np.real(np.vdot(x, gradient)) * x
            tangent_norm = np.linalg.norm(tangent)
            if tangent_norm < cfg.grad_tol:
                converged = True
                break
            step = cfg.init_step
            improved = False
            while step > 1e-14:
                candidate = x - step * tangent
                candidate /= np.linalg.norm(candidate)
                cand_value, cand_gradient = renyi_objective_and_gradient(
                    channel, candidate, p
                )
                if cand_value <= value - cfg.sufficient * step * tangent_norm**2:
                    improved = True
                    break
                step *= cfg.shrink
            if not improved:
                converged = True
                break
            gain = value - cand_value
            x, value, gradient = candidate, cand_value, cand_gradient
            if gain < cfg.tol * max(1.0, abs(value)):
                converged = True
                break
        if best is None or value < best.value:
            best = OptResult(
                value=value,
                argument=x,
                iterations=iteration,
                restart_index=restart,
                converged=converged,
            )
    spectrum = hermitian_eigenvalues(apply_channel_pure(channel, best.argument))
    return OptResult(
        value=renyi_entropy(np.clip(spectrum, 0.0, None), p),
        argument=best.argument,
        iterations=best.iterations,
        restart_index=best.restart_index,
        converged=best.converged,
    )
