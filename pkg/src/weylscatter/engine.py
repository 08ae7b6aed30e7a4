"""Scattering matrix from the boundary value of a Weyl function.

    S(lambda) = I - 2i sqrt(Im M) M^{-1} sqrt(Im M),   M = M(lambda + i0),

compressed to the channel space ran Im M(lambda + i0).  For couplings
written as M = N - 1/alpha the equivalent form

    S(lambda) = I + 2i sqrt(Im N) (I - alpha N)^{-1} alpha sqrt(Im N)

is used, which stays valid where alpha vanishes.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import os

import numpy as np

from . import numkernel as nk
from .errors import (
    IndefiniteImPart,
    IndefiniteInput,
    NonUnitarySample,
    SingularMatrix,
    SingularRobinPencil,
    SingularWeylValue,
    WeylScatterError,
)
from .weyl import boundary_limit

UNITARITY_TOL = 1e-8
PHASE_TIE_TOL = 1e-12


@dataclass(frozen=True)
class ScatteringMatrixSample:
    """Unitary S(lambda) on the channel space.

    Attributes
    ----------
    S : ndarray, shape (r, r)
        In the basis given by the columns of `channel_isometry`.
    eigenphases : ndarray
        arg of the eigenvalues of S in (-pi, pi], ascending.
    phase_channels : ndarray of int
        Channel index (largest eigenvector component) of each eigenphase.
    flagged : bool
        True if the unitarity defect or an eigenvalue modulus misses `tol`.
    """

    lam: float
    S: np.ndarray
    channel_isometry: np.ndarray
    unitarity_defect: float
    eigenphases: np.ndarray
    phase_channels: np.ndarray
    cond: float = 1.0
    tol: float = UNITARITY_TOL
    flagged: bool = False
    rank_ambiguous: tuple = ()

    @property
    def rank(self):
        return self.S.shape[0]

    def mode_space(self):
        """Embed S into the truncation space: I + P (S - I) P*."""
        p = self.channel_isometry
        n = p.shape[0]
        return np.eye(n) + p @ (self.S - np.eye(self.rank)) @ p.conj().T


@dataclass(frozen=True)
class PointFailure:
    """Placeholder for a sweep point whose evaluation raised."""

    lam: float
    error: str
    message: str


def _eigenphases(s):
    """Eigenphases in (-pi, pi] sorted ascending, ties by channel index."""
    r = s.shape[0]
    if r == 0:
        return np.zeros(0), np.zeros(0, dtype=int), 0.0
    w, v = np.linalg.eig(s)
    ph = np.angle(w)
    ph = np.where(ph <= -np.pi, np.pi, ph)
    chan = np.argmax(np.abs(v), axis=0)
    order = np.lexsort((chan, ph))
    ph, chan = ph[order], chan[order]
    # within clusters of equal phase, order strictly by channel
    i = 0
    while i < r:
        j = i + 1
        while j < r and ph[j] - ph[j - 1] <= PHASE_TIE_TOL:
            j += 1
        if j - i > 1:
            sub = np.argsort(chan[i:j], kind="stable")
            chan[i:j] = chan[i:j][sub]
            ph[i:j] = ph[i:j][sub]
        i = j
    modulus_err = float(np.max(np.abs(np.abs(w) - 1.0)))
    return ph, chan, modulus_err


def _finish(lam, s_full, iso, cond, tol, ambiguous):
    s = iso.conj().T @ s_full @ iso
    r = s.shape[0]
    defect = float(np.linalg.norm(s @ s.conj().T - np.eye(r))) if r else 0.0
    ph, chan, merr = _eigenphases(s)
    flagged = bool(defect > tol or merr > tol)
    return ScatteringMatrixSample(float(lam), s, iso, defect, ph, chan, float(cond), tol,
                                  flagged, tuple(ambiguous))


def smatrix(bl, tol=UNITARITY_TOL, cond_cap=nk.DEFAULT_COND_CAP):
    """Scattering matrix from M(lambda + i0).

    Parameters
    ----------
    bl : BoundaryLimit
        With symbol "weyl".
    tol : float
        Unitarity tolerance; samples above it are flagged, not rejected.

    Raises
    ------
    SingularWeylValue
        If M(lambda + i0) is numerically singular.
    IndefiniteImPart
        If Im M has a negative eigenvalue beyond the clip tolerance.
    """
    iso = bl.channel_isometry
    n = bl.M_plus.shape[0]
    if iso.shape[1] == 0:
        return _finish(bl.lam, np.eye(n, dtype=complex), iso, 1.0, tol, bl.ambiguous)
    try:
        q = nk.psd_sqrt(bl.im_M, clip_tol=bl.rank_tol)
    except IndefiniteInput as exc:
        raise IndefiniteImPart(str(exc)) from exc
    try:
        res = nk.solve(bl.M_plus, q, cond_cap=cond_cap)
    except SingularMatrix as exc:
        raise SingularWeylValue(f"M(lambda+i0) singular at lambda={bl.lam}: {exc}") from exc
    s_full = np.eye(n) - 2j * q @ res.x
    return _finish(bl.lam, s_full, iso, res.cond, tol, bl.ambiguous)


def _alpha_as_matrix(alpha, n):
    a = np.asarray(alpha, dtype=complex)
    if a.ndim == 0:
        return a * np.eye(n)
    if a.ndim == 1:
        if a.size != n:
            raise ValueError(f"alpha vector has {a.size} entries, expected {n}")
        return np.diag(a)
    if a.shape != (n, n):
        raise ValueError(f"alpha matrix has shape {a.shape}, expected {(n, n)}")
    return a


def robin_form_smatrix(bl_of_N, alpha, tol=UNITARITY_TOL, cond_cap=nk.DEFAULT_COND_CAP):
    """Scattering matrix for M = N - 1/alpha without inverting alpha.

    Parameters
    ----------
    bl_of_N : BoundaryLimit
        Boundary value of N; ran Im N = ran Im M since alpha is real.
    alpha : float, 1-D array (per mode) or 2-D Hermitian array

    Raises
    ------
    SingularRobinPencil
        If I - alpha N(lambda + i0) is numerically singular.
    """
    iso = bl_of_N.channel_isometry
    n = bl_of_N.M_plus.shape[0]
    a = _alpha_as_matrix(alpha, n)
    if iso.shape[1] == 0:
        return _finish(bl_of_N.lam, np.eye(n, dtype=complex), iso, 1.0, tol, bl_of_N.ambiguous)
    try:
        q = nk.psd_sqrt(bl_of_N.im_M, clip_tol=bl_of_N.rank_tol)
    except IndefiniteInput as exc:
        raise IndefiniteImPart(str(exc)) from exc
    pencil = np.eye(n) - a @ bl_of_N.M_plus
    try:
        res = nk.solve(pencil, a @ q, cond_cap=cond_cap)
    except SingularMatrix as exc:
        raise SingularRobinPencil(f"I - alpha N singular at lambda={bl_of_N.lam}: {exc}") from exc
    s_full = np.eye(n) + 2j * q @ res.x
    return _finish(bl_of_N.lam, s_full, iso, res.cond, tol, bl_of_N.ambiguous)


def model_smatrix(model, lam, trunc, strategy="direct", tol=UNITARITY_TOL):
    """S(lambda) for a model, through the Robin form when the model has one."""
    if model.robin:
        bl = boundary_limit(model, lam, trunc, strategy, symbol="ntd")
        return robin_form_smatrix(bl, model.alpha_matrix(trunc), tol)
    return smatrix(boundary_limit(model, lam, trunc, strategy), tol)


def worker_count():
    """Workers for sweeps: WEYL_SCATTER_THREADS, 0 or unset meaning automatic."""
    raw = os.environ.get("WEYL_SCATTER_THREADS", "").strip()
    n = int(raw) if raw else 0
    if n < 0:
        raise ValueError("WEYL_SCATTER_THREADS must be >= 0")
    return n if n > 0 else min(8, os.cpu_count() or 1)


def smatrix_sweep(model, lambda_grid, trunc, strategy="direct", tol=UNITARITY_TOL, workers=None):
    """S(lambda) over a grid.

    Returns one entry per grid point in grid order.  Points that raise a
    package error are returned as `PointFailure` instead of aborting.
    """
    grid = [float(x) for x in lambda_grid]
    if not grid:
        return []

    def one(lam):
        try:
            return model_smatrix(model, lam, trunc, strategy, tol)
        except WeylScatterError as exc:
            return PointFailure(lam, type(exc).__name__, str(exc))

    n = workers if workers is not None else worker_count()
    if n <= 1 or len(grid) == 1:
        return [one(x) for x in grid]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(one, grid))


@dataclass(frozen=True)
class EigenphaseRow:
    lam: float
    channel: int
    phase: float


def eigenphase_report(samples):
    """Flatten eigenphases of samples into (lambda, channel, phase) rows.

    No unwrapping across lambda.

    Raises
    ------
    NonUnitarySample
        If a sample's unitarity defect exceeds its tolerance.
    """
    rows = []
    for s in samples:
        if s.unitarity_defect > s.tol:
            raise NonUnitarySample(
                f"lambda={s.lam}: unitarity defect {s.unitarity_defect:.3e} > {s.tol:.1e}")
        rows.extend(EigenphaseRow(s.lam, int(c), float(p))
                    for c, p in zip(s.phase_channels, s.eigenphases))
    return rows
