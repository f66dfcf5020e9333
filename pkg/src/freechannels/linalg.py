"""Dense complex linear algebra primitives shared by the simulation modules.

The tensor index convention is fixed once for the whole library: the basis
vector ``e_a ⊗ f_b`` of ``C^n ⊗ C^k`` maps to coordinate ``a*k + b``, so
reshaping a length-``n*k`` vector to shape ``(n, k)`` puts the first factor
on axis 0.  All spectra are returned sorted in descending order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidDimensionError,
    InvalidMatrixError,
    NotNormalizedError,
)

_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream keyed by ``(seed, stream_id)``.

    Identical keys reproduce identical draws bit-for-bit; distinct
    ``stream_id`` values give statistically independent streams, which is
    what makes trial-level parallelism reproducible.
    """

    seed: int
    stream_id: int = 0

    def generator(self, jump: int = 0) -> np.random.Generator:
        """Fresh generator for this stream; ``jump`` selects a substream."""
        key = np.array(
            [self.seed & _UINT64_MASK, self.stream_id & _UINT64_MASK],
            dtype=np.uint64,
        )
        bits = np.random.Philox(key=key)
        if jump:
            bits = bits.jumped(jump)
        return np.random.Generator(bits)

    def child(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


def as_generator(rng) -> np.random.Generator:
    """Coerce an RngStream, Generator, or integer seed to a Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator()
    if rng is None:
        return np.random.default_rng()
    raise TypeError(f"cannot interpret {type(rng).__name__} as a random source")


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    """True when ``m`` is square and equals its conjugate transpose.

    The tolerance is relative to the largest entry magnitude.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = np.max(np.abs(m)) if m.size else 0.0
    if scale == 0.0:
        return True
    return np.max(np.abs(m - m.conj().T)) <= tol * scale


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    eye = np.eye(u.shape[0])
    return np.max(np.abs(u.conj().T @ u - eye)) <= tol


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted descending.

    Raises InvalidMatrixError for non-square or non-Hermitian input.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidMatrixError(f"expected a square matrix, got shape {m.shape}")
    if not is_hermitian(m):
        raise InvalidMatrixError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(m)[::-1]


def haar_unitary(dim: int, rng) -> np.ndarray:
    """Sample a Haar-distributed unitary of size ``dim``.

    QR decomposition of an i.i.d. standard complex Gaussian matrix, with
    each column of Q rephased by ``conj(R_jj)/|R_jj|`` so the result is
    exactly Haar rather than carrying the QR sign convention.
    """
    if dim < 1:
        raise InvalidDimensionError("unitary dimension must be >= 1")
    gen = as_generator(rng)
    a = gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    return q * (d.conj() / np.abs(d))


def random_unit_vector(dim: int, rng) -> np.ndarray:
    """Uniform random point on the unit sphere of ``C^dim``."""
    if dim < 1:
        raise InvalidDimensionError("vector dimension must be >= 1")
    gen = as_generator(rng)
    x = gen.standard_normal(dim) + 1j * gen.standard_normal(dim)
    return x / np.linalg.norm(x)


def partial_trace_left(m: np.ndarray, n: int, k: int) -> np.ndarray:
    """Trace out the first (``C^n``) factor of an operator on ``C^n ⊗ C^k``.

    Preserves the trace, Hermiticity and positive semidefiniteness of the
    input.  Returns a ``k x k`` matrix.
    """
    m = np.asarray(m)
    if n < 1 or k < 1:
        raise InvalidDimensionError("factor dimensions must be >= 1")
    if m.ndim != 2 or m.shape != (n * k, n * k):
        raise InvalidDimensionError(
            f"expected shape ({n * k}, {n * k}) for n={n}, k={k}, got {m.shape}"
        )
    return np.einsum("abad->bd", m.reshape(n, k, n, k))


def schmidt_spectrum(x: np.ndarray, n: int, k: int) -> np.ndarray:
    """Schmidt coefficients of a unit vector in ``C^n ⊗ C^k``, descending.

    Computed from the ``k x k`` Gram matrix of the ``(n, k)`` reshaping of
    ``x``, which equals the reduced density matrix obtained by tracing out
    the ``C^n`` factor.  Tiny negative eigenvalues are clamped to zero.
    """
    x = np.asarray(x).reshape(-1)
    if x.size != n * k:
        raise InvalidDimensionError(f"vector length {x.size} != n*k = {n * k}")
    if abs(np.linalg.norm(x) - 1.0) > 1e-8:
        raise NotNormalizedError("input vector must have unit norm")
    y = x.reshape(n, k)
    gram = y.T @ y.conj()
    w = np.linalg.eigvalsh(gram)[::-1]
    return np.clip(w.real, 0.0, None)


def psd_operator_norm(m: np.ndarray) -> float:
    """Operator norm of a positive semidefinite Hermitian matrix.

    Equals the top eigenvalue.  Eigenvalues below -1e-10 are rejected.
    """
    w = hermitian_eigenvalues(m)
    if w.size and w[-1] < -1e-10:
        raise InvalidMatrixError("matrix is not positive semidefinite")
    return float(max(w[0], 0.0)) if w.size else 0.0
