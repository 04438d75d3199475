"""Fast transforms and spectral solvers for the Neumann difference stencil.

The one-sided difference matrix ``D`` (zero last row) factorizes in closed
form as an SVD built from orthonormal cosine and sine transforms:

* singular values  ``sigma[i] = 2 sin(pi * i / (2n))`` for ``i = 0..n-1``
* right factor ``C``: the orthonormal DCT-II matrix, first row ``1/sqrt(n)``,
  row ``i >= 1`` equal to ``sqrt(2/n) * cos(pi * i * (2j+1) / (2n))``
* left factor: a block matrix pairing the DST-I matrix ``S`` with a
  wrap-around unit entry.  With ``[[0, S], [1, 0]]`` the product
  ``P @ diag(sigma) @ C`` equals ``-D`` (checked densely), so
  :meth:`DiffFactors.assemble` negates the sine block to reproduce ``D``
  exactly while keeping every factor orthogonal.

Because ``D^T D = C^T diag(sigma)^2 C`` holds per axis, the grid operator
``adjoint_grad . grad`` diagonalizes in the tensor DCT basis with eigenvalues
``sum_k sigma_k[i_k]^2``: the sum of *squared* per-axis singular values.  The
eigenvalue vanishes only at the all-zeros frequency (the constant mode),
which is the pseudoinverse nullspace; its coefficient is forced to zero.

All fast paths use FFT-based transforms (scipy.fft) with orthonormal
scaling, which agree with the dense factors to better than 1e-12; the dense
matrices are retained for small-n verification.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft as _fft

from .errors import DimensionError, ParameterError
from .fields import adjoint_grad, grad

__all__ = [
    "diff_matrix",
    "singular_values",
    "DiffFactors",
    "diff_factors",
    "dct_axis",
    "grad_operator_norm",
    "dual_step_bound",
    "PoissonPlan",
    "poisson_solve",
    "project_gradient_field",
]


def diff_matrix(n: int) -> np.ndarray:
    """Dense n-by-n one-sided difference matrix with a zero last row."""
    if n < 2:
        raise DimensionError(f"difference matrix needs n >= 2, got {n}")
    mat = np.zeros((n, n))
    idx = np.arange(n - 1)
    mat[idx, idx] = -1.0
    mat[idx, idx + 1] = 1.0
    return mat


def singular_values(n: int) -> np.ndarray:
    """Singular values of the difference matrix: ``2 sin(pi*i/(2n))``."""
    if n < 2:
        raise DimensionError(f"need n >= 2, got {n}")
    return 2.0 * np.sin(np.pi * np.arange(n) / (2.0 * n))


@dataclass(frozen=True)
class DiffFactors:
    """Closed-form SVD factors of the difference matrix at one axis length.

    ``cosine`` is the n-by-n orthonormal DCT-II matrix, ``sine`` the
    (n-1)-by-(n-1) orthonormal DST-I matrix.  Dense factors are meant for
    verification at small n; production transforms go through
    :func:`dct_axis`.
    """

    n: int
    sigma: np.ndarray
    cosine: np.ndarray
    sine: np.ndarray

    def assemble(self) -> np.ndarray:
        """Rebuild the difference matrix from the stored factors.

        Uses the sign-adjusted left factor ``[[0, -S], [1, 0]]`` so the
        product equals ``D`` rather than ``-D``.
        """
        left = np.zeros((self.n, self.n))
        left[: self.n - 1, 1:] = -self.sine
        left[self.n - 1, 0] = 1.0
        return left @ (self.sigma[:, None] * self.cosine)


def diff_factors(n: int) -> DiffFactors:
    """Compute the spectral factors of the difference matrix of size ``n``."""
    sigma = singular_values(n)
    j = np.arange(n)
    cosine = np.sqrt(2.0 / n) * np.cos(np.pi * np.outer(j, 2 * j + 1) / (2.0 * n))
    cosine[0, :] = np.sqrt(1.0 / n)
    i = np.arange(1, n)
    sine = np.sqrt(2.0 / n) * np.sin(np.pi * np.outer(i, i) / n)
    return DiffFactors(n=n, sigma=sigma, cosine=cosine, sine=sine)


def dct_axis(u: np.ndarray, axis: int, direction: str = "forward") -> np.ndarray:
    """Orthonormal cosine transform along one axis via FFT.

    ``forward`` applies the DCT-II factor ``C``; ``inverse`` applies its
    transpose, so the two compose to the identity.
    """
    u = np.asarray(u, dtype=np.float64)
    if not -u.ndim <= axis < u.ndim:
        raise DimensionError(f"axis {axis} out of range for {u.ndim}-d field")
    if direction == "forward":
        return _fft.dct(u, type=2, axis=axis, norm="ortho")
    if direction == "inverse":
        return _fft.dct(u, type=3, axis=axis, norm="ortho")
    raise ParameterError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def grad_operator_norm(dims) -> float:
    """Spectral norm of the gradient operator at the given grid shape.

    Equals ``2 * ||[sin(pi*(N1-1)/(2*N1)), ...]||_2`` and approaches
    ``2*sqrt(d)`` as every axis grows.
    """
    dims = tuple(int(n) for n in dims)
    if not dims or any(n < 2 for n in dims):
        raise DimensionError(f"invalid grid shape {dims}")
    s = sum(np.sin(np.pi * (n - 1) / (2.0 * n)) ** 2 for n in dims)
    return float(2.0 * np.sqrt(s))


def dual_step_bound(ndim: int) -> float:
    """Largest dual step size with a nonexpansiveness guarantee: ``1/(2d)``.

    Follows from the gradient norm bound ``grad_operator_norm(dims)^2 < 4d``
    and the step condition ``tau <= 2 / norm^2``.
    """
    if ndim < 1:
        raise ParameterError(f"ndim must be >= 1, got {ndim}")
    return 1.0 / (2.0 * ndim)


class PoissonPlan:
    """Precomputed spectral data for the Neumann Poisson pseudo-solve.

    Holds the per-axis squared singular values and their broadcast sum (the
    eigenvalues of ``adjoint_grad . grad`` in the DCT basis).  The plan is
    immutable after construction and safe to share across threads.
    """

    def __init__(self, dims):
        dims = tuple(int(n) for n in dims)
        if not dims or any(n < 2 for n in dims):
            raise DimensionError(f"invalid grid shape {dims}")
        self.dims = dims
        self.sigma_sq = tuple(singular_values(n) ** 2 for n in dims)
        denom = np.zeros(dims)
        for axis, sq in enumerate(self.sigma_sq):
            shape = [1] * len(dims)
            shape[axis] = dims[axis]
            denom = denom + sq.reshape(shape)
        self.denominator = denom
        # Reciprocal with the constant mode zeroed: multiplying by it both
        # inverts the spectrum and discards the nullspace coefficient.
        inverse = np.zeros(dims)
        origin = (0,) * len(dims)
        mask = np.ones(dims, dtype=bool)
        mask[origin] = False
        inverse[mask] = 1.0 / denom[mask]
        self._inverse = inverse

    def solve(self, f: np.ndarray) -> np.ndarray:
        """Pseudoinverse solve of ``adjoint_grad(grad(u)) = f``.

        The first spectral coefficient of the result is zero; exactness
        requires ``f`` in the operator's range (arbitrary input is accepted
        and its constant-mode coefficient discarded).
        """
        f = np.asarray(f, dtype=np.float64)
        if f.shape != self.dims:
            raise DimensionError(f"field shape {f.shape} does not match plan {self.dims}")
        fhat = _fft.dctn(f, type=2, norm="ortho")
        fhat *= self._inverse
        return _fft.idctn(fhat, type=2, norm="ortho")


@lru_cache(maxsize=8)
def _cached_plan(dims: tuple) -> PoissonPlan:
    return PoissonPlan(dims)


def poisson_solve(f: np.ndarray, plan: PoissonPlan | None = None) -> np.ndarray:
    """Convenience wrapper around :meth:`PoissonPlan.solve`."""
    f = np.asarray(f, dtype=np.float64)
    if plan is None:
        plan = _cached_plan(f.shape)
    return plan.solve(f)


def project_gradient_field(v: np.ndarray, plan: PoissonPlan | None = None) -> np.ndarray:
    """Orthogonal projection of a vector field onto the gradient subspace.

    Computes ``grad(poisson_solve(adjoint_grad(v)))``; the result is the
    closest field expressible as ``grad(u)``.  Idempotent and self-adjoint.
    """
    v = np.asarray(v, dtype=np.float64)
    if plan is None:
        plan = _cached_plan(v.shape[1:])
    return grad(plan.solve(adjoint_grad(v)))
