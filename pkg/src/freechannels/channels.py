"""Monte-Carlo realizations of the random objects the predictions describe.

A channel instance couples a ``p_n``-dimensional input space into
``C^n ⊗ C^k`` through a fixed coordinate embedding followed by a Haar
unitary, then traces out the ``C^n`` factor.  The module also builds the
Bell-state output of a channel tensored with its conjugate (through a
rank-one fast path that never materializes operators beyond ``nk x nk``)
and samples norms of random projector products.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateParameterError,
    InvalidDimensionError,
    InvalidParameterError,
    NotNormalizedError,
    TooLargeError,
)
from .linalg import RngStream, as_generator, haar_unitary, partial_trace_left

__all__ = [
    "ChannelInstance",
    "build_channel",
    "embed_vector",
    "embed_matrix",
    "apply_channel_pure",
    "apply_channel",
    "conjugate_bell_output",
    "projector_product_norm",
    "BELL_DIM_GUARD",
    "BELL_OUTPUT_GUARD",
]

# Rank-one Bell fast path holds an (nk)^2-entry complex vector; these guards
# keep that about 16 MiB and the k^2 x k^2 output about 1 MiB.
BELL_DIM_GUARD = 1024
BELL_OUTPUT_GUARD = 256


@dataclass(frozen=True, eq=False)
class ChannelInstance:
    """One realization of the random channel model.

    ``p_n = round(t n k)`` is the input dimension (nearest integer, ties to
    even); ``unitary`` is the ``nk x nk`` Haar sample.  Instances are
    immutable values, safe to share across workers.
    """

    n: int
    k: int
    t: float
    p_n: int
    unitary: np.ndarray = field(repr=False)
    seed: int

    @property
    def coupled_dim(self) -> int:
        return self.n * self.k

    @property
    def image_basis(self) -> np.ndarray:
        """Orthonormal basis of the image of the embedded input space."""
        return self.unitary[:, : self.p_n]


def build_channel(n: int, k: int, t: float, seed: int, stream_id: int = 0) -> ChannelInstance:
    """Draw one channel instance, deterministic in ``(seed, stream_id)``."""
    if n < 2 or k < 2:
        raise InvalidDimensionError("channel requires n >= 2 and k >= 2")
    if not (0.0 < t < 1.0):
        raise InvalidParameterError("t must lie strictly in (0, 1)")
    p_n = round(t * n * k)
    if p_n < 1 or p_n >= n * k:
        raise DegenerateParameterError(
            f"input dimension round(t*n*k) = {p_n} leaves no room at n*k = {n * k}"
        )
    unitary = haar_unitary(n * k, RngStream(seed, stream_id))
    return ChannelInstance(n=n, k=k, t=t, p_n=p_n, unitary=unitary, seed=seed)


def embed_vector(x: np.ndarray, dim: int) -> np.ndarray:
    """Zero-pad a vector onto the first coordinates of ``C^dim``."""
    x = np.asarray(x).reshape(-1)
    if x.size > dim:
        raise InvalidDimensionError("cannot embed into a smaller space")
    out = np.zeros(dim, dtype=complex)
    out[: x.size] = x
    return out


def embed_matrix(x: np.ndarray, dim: int) -> np.ndarray:
    """Embed a matrix as the top-left block of a ``dim x dim`` matrix."""
    x = np.asarray(x)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InvalidDimensionError("embedding expects a square matrix")
    if x.shape[0] > dim:
        raise InvalidDimensionError("cannot embed into a smaller space")
    out = np.zeros((dim, dim), dtype=complex)
    out[: x.shape[0], : x.shape[0]] = x
    return out


def apply_channel_pure(channel: ChannelInstance, x: np.ndarray) -> np.ndarray:
    """Output density of a pure input state, via the Gram fast path.

    Rotates the embedded input into the coupled space, reshapes to
    ``(n, k)``, and returns the ``k x k`` Gram matrix, which equals the
    partial trace of the rotated rank-one projector.
    """
    x = np.asarray(x).reshape(-1)
    if x.size != channel.p_n:
        raise InvalidDimensionError(
            f"input vector length {x.size} != channel input dimension {channel.p_n}"
        )
    if abs(np.linalg.norm(x) - 1.0) > 1e-8:
        raise NotNormalizedError("input state must have unit norm")
    y = (channel.image_basis @ x).reshape(channel.n, channel.k)
    return y.T @ y.conj()


def apply_channel(channel: ChannelInstance, rho: np.ndarray) -> np.ndarray:
    """Output density of a general input density matrix (slow path).

    Embeds ``rho`` into the coupled space, conjugates by the unitary and
    partial-traces the ``C^n`` factor.  Used as the reference
    implementation that the pure-state fast path is checked against.
    """
    rho = np.asarray(rho)
    if rho.shape != (channel.p_n, channel.p_n):
        raise InvalidDimensionError("density matrix does not match the input dimension")
    big = embed_matrix(rho, channel.coupled_dim)
    rotated = channel.unitary @ big @ channel.unitary.conj().T
    return partial_trace_left(rotated, channel.n, channel.k)


def conjugate_bell_output(channel: ChannelInstance) -> np.ndarray:
    """Bell-state output of the channel tensored with its conjugate.

    The image of the maximally entangled input under both couplings is the
    rank-one state whose ``nk x nk`` matrix form is the image projector
    divided by ``sqrt(p_n)``; tracing the two ``C^n`` factors is a single
    tensor contraction.  Returns the ``k^2 x k^2`` output density.
    """
    n, k = channel.n, channel.k
    if k * k > BELL_OUTPUT_GUARD:
        raise TooLargeError(f"bell output needs k^2 <= {BELL_OUTPUT_GUARD}")
    if n * k > BELL_DIM_GUARD:
        raise TooLargeError(f"bell fast path needs n*k <= {BELL_DIM_GUARD}")
    basis = channel.image_basis
    pair_matrix = (basis @ basis.conj().T) / np.sqrt(channel.p_n)
    tensor = pair_matrix.reshape(n, k, n, k)
    out = np.einsum("abcd,aecf->bdef", tensor, tensor.conj())
    return out.reshape(k * k, k * k)


def projector_product_norm(
    total_dim: int,
    alpha: float,
    beta: float,
    rng,
    unitary: np.ndarray | None = None,
) -> float:
    """Norm of ``P Q P`` for one fixed and one Haar-rotated projector.

    ``P`` projects onto the first ``round(alpha N)`` coordinates and ``Q``
    is the rank-``round(beta N)`` coordinate projector conjugated by a Haar
    unitary (drawn from ``rng`` unless an explicit ``unitary`` is supplied,
    which is useful for deterministic checks).  The norm is the squared top
    singular value of the corresponding block of the unitary.
    """
    rank_fixed = round(alpha * total_dim)
    rank_rotated = round(beta * total_dim)
    for rank in (rank_fixed, rank_rotated):
        if rank < 1 or rank > total_dim - 1:
            raise DegenerateParameterError(
                f"projector rank {rank} is degenerate at dimension {total_dim}"
            )
    if unitary is None:
        unitary = haar_unitary(total_dim, as_generator(rng))
    block = unitary[:rank_fixed, :rank_rotated]
    top = np.linalg.svd(block, compute_uv=False)[0]
    return float(top * top)
