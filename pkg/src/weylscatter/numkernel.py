"""Dense complex linear algebra used throughout the package.

Thin, checked wrappers around LAPACK (through numpy and scipy.linalg).  Every
routine validates its input, enforces the residual guarantees documented on
each function and raises a package exception instead of returning noise.
"""

from dataclasses import dataclass
import warnings

import numpy as np
import scipy.linalg as sla

from .errors import (
    ConvergenceFailure,
    IndefiniteInput,
    NonFiniteInput,
    NonHermitianInput,
    SingularMatrix,
)

DEFAULT_COND_CAP = 1e12
HERMITIAN_RTOL = 1e-12


def as_matrix(a, name="matrix"):
    """Return `a` as a finite complex 2-D array.

    Scalars become 1x1 matrices.  NaN or Inf entries are rejected here so that
    nothing non-finite travels further into the pipeline.
    """
    arr = np.asarray(a, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return arr


def hermitian_part(a):
    """(A + A*)/2"""
    return 0.5 * (a + a.conj().T)


def imag_part(a):
    """Hermitian imaginary part (A - A*)/(2i)."""
    return (a - a.conj().T) / 2j


def _hermitize(h, name):
    h = as_matrix(h, name)
    if h.shape[0] != h.shape[1]:
        raise ValueError(f"{name} must be square, got shape {h.shape}")
    scale = np.linalg.norm(h)
    asym = np.linalg.norm(h - h.conj().T)
    if asym > HERMITIAN_RTOL * max(scale, 1e-300) and asym > 0:
        raise NonHermitianInput(
            f"{name} is not Hermitian: |H - H*|_F = {asym:.3e}, |H|_F = {scale:.3e}"
        )
    return hermitian_part(h)


@dataclass(frozen=True)
class HermitianEig:
    """Spectral decomposition H = V diag(w) V*.

    Attributes
    ----------
    eigenvalues : ndarray, shape (n,)
        Real, ascending.
    eigenvectors : ndarray, shape (n, n)
        Unitary, eigenvectors stored as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def herm_eig(h):
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as (H + H*)/2 after checking that the
    antihermitian part is below 1e-12 |H|_F.

    Raises
    ------
    NonHermitianInput
        If the asymmetry exceeds the tolerance.
    ConvergenceFailure
        If LAPACK does not converge.
    """
    h = _hermitize(h, "H")
    n = h.shape[0]
    if n == 0:
        return HermitianEig(np.zeros(0), np.zeros((0, 0), dtype=complex))
    try:
        w, v = sla.eigh(h, driver="evd")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return HermitianEig(np.asarray(w, dtype=float), np.asarray(v, dtype=complex))


def psd_sqrt(h, clip_tol=None):
    """Square root of a Hermitian positive semidefinite matrix.

    Parameters
    ----------
    h : array_like
        Hermitian matrix, PSD up to roundoff.
    clip_tol : float, optional
        Negative eigenvalues down to ``-clip_tol`` are clipped to zero.
        Defaults to ``1e-10 * |H|_F``.

    Returns
    -------
    ndarray
        Hermitian PSD R with R @ R equal to the clipped H.
    """
    eig = herm_eig(h)
    w = eig.eigenvalues
    if clip_tol is None:
        clip_tol = 1e-10 * float(np.linalg.norm(w))
    if w.size and w[0] < -clip_tol:
        raise IndefiniteInput(
            f"smallest eigenvalue {w[0]:.3e} below -clip_tol = {-clip_tol:.3e}"
        )
    root = np.sqrt(np.clip(w, 0.0, None))
    v = eig.eigenvectors
    return hermitian_part((v * root) @ v.conj().T)


@dataclass(frozen=True)
class SolveResult:
    x: np.ndarray
    cond: float


def solve(a, b, cond_cap=DEFAULT_COND_CAP):
    """Solve A X = B by LU with partial pivoting.

    Returns the solution together with the LAPACK estimate of the 1-norm
    condition number.

    Raises
    ------
    SingularMatrix
        If a pivot is below 1e-300 in magnitude or the condition estimate
        exceeds `cond_cap`.
    """
    a = as_matrix(a, "A")
    b_arr = np.asarray(b, dtype=complex)
    vector = b_arr.ndim == 1
    b2 = as_matrix(b_arr.reshape(-1, 1) if vector else b_arr, "B")
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError(f"A must be square, got shape {a.shape}")
    if b2.shape[0] != n:
        raise ValueError(f"B has {b2.shape[0]} rows, expected {n}")
    if n == 0:
        return SolveResult(b_arr.copy(), 1.0)
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrix
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=False)
    if np.min(np.abs(np.diag(lu))) < 1e-300:
        raise SingularMatrix("zero pivot in LU factorization")
    gecon = sla.get_lapack_funcs("gecon", (lu,))
    anorm = np.linalg.norm(a, 1)
    rcond, info = gecon(lu, anorm, norm="1")
    cond = np.inf if rcond == 0 else 1.0 / rcond
    if not cond <= cond_cap:
        raise SingularMatrix(f"condition estimate {cond:.3e} exceeds cap {cond_cap:.1e}")
    x = sla.lu_solve((lu, piv), b2, check_finite=False)
    return SolveResult(x.ravel() if vector else x, float(cond))


def singular_values(a):
    """Singular values in descending order."""
    a = as_matrix(a, "A")
    if a.size == 0:
        return np.zeros(0)
    try:
        return sla.svd(a, compute_uv=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        try:
            return sla.svd(a, compute_uv=False, lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise ConvergenceFailure(str(exc)) from exc
