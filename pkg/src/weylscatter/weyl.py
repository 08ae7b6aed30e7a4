"""Weyl-function sampling, Nevanlinna checks and boundary values M(lambda+i0).

A model (see `weylscatter.models`) supplies M(z) off the real axis and,
where it can, the boundary value M(lambda+i0) in closed form.  This module
wraps those samples into checked containers, extracts the channel space
ran Im M(lambda+i0) with an explicit rank decision, and provides the
epsilon -> 0 extrapolation used as a cross-check path.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg as sla

from . import numkernel as nk
from .errors import (
    ExtrapolationDiverged,
    IndefiniteImPart,
    ModelDomainError,
    UnsupportedBoundaryPoint,
)

NEVANLINNA_TOL = 1e-10
CONJUGATION_TOL = 1e-10
RANK_RTOL = 1e-8
RANK_ABS_FLOOR = 1e-14
AMBIGUITY_FACTOR = 10.0
CLUSTER_RTOL = 1e-10


@dataclass(frozen=True)
class SpectralPoint:
    """z = lambda + i*epsilon with epsilon >= 0; epsilon == 0 means lambda + i0."""

    lam: float
    epsilon: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.lam) or not np.isfinite(self.epsilon):
            raise ValueError("spectral point must be finite")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")

    @property
    def on_axis(self):
        return self.epsilon == 0.0

    @property
    def z(self):
        return complex(self.lam, self.epsilon)

    @classmethod
    def from_complex(cls, z):
        z = complex(z)
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class ChannelTruncation:
    """Finite section of the boundary space.

    Attributes
    ----------
    mode_labels : tuple
        Integers m for circle models, (l, m) pairs for the sphere, a single
        string label for one-channel models.
    """

    mode_labels: tuple

    def __post_init__(self):
        labels = tuple(self.mode_labels)
        object.__setattr__(self, "mode_labels", labels)
        if len(set(labels)) != len(labels):
            raise ValueError("mode labels must be unique")

    @property
    def n(self):
        return len(self.mode_labels)

    @classmethod
    def circle(cls, kmax):
        return cls(tuple(range(-int(kmax), int(kmax) + 1)))

    @classmethod
    def sphere(cls, lmax):
        return cls(tuple((l, m) for l in range(int(lmax) + 1) for m in range(-l, l + 1)))

    @classmethod
    def single(cls, label="s"):
        return cls((label,))


@dataclass(frozen=True)
class RiggingWeights:
    """Per-mode weights w_m of the rigging map on a circle of radius R.

    kind ``"laplace"`` gives w_m = (1 + m^2/R^2)^(1/4), the quarter power of
    (1 - Laplace-Beltrami).  ``"identity"`` gives w_m = 1.  ``"dtn"`` stores
    explicit values (square roots of a positive DtN symbol at a reference
    energy below the spectrum); those are filled in by the model.
    """

    kind: str = "laplace"
    radius: float = 1.0
    ref_energy: float = -1.0

    def __post_init__(self):
        if self.kind not in ("laplace", "identity", "dtn"):
            raise ValueError(f"unknown rigging kind {self.kind!r}")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.kind == "dtn" and not self.ref_energy < 0:
            raise ValueError("reference energy must lie below the spectrum (< 0)")

    def weights(self, modes):
        m = np.abs(np.asarray(modes, dtype=float))
        if self.kind == "identity":
            return np.ones_like(m)
        if self.kind == "laplace":
            return (1.0 + (m / self.radius) ** 2) ** 0.25
        raise ValueError("dtn weights are computed by the model")


@dataclass(frozen=True)
class WeylSample:
    z: complex
    M: np.ndarray
    truncation: ChannelTruncation
    boundary: bool = False
    min_im_eig: float = 0.0


@dataclass(frozen=True)
class EpsSchedule:
    """Geometric schedule eps_k = eps0 * ratio**(-k), k = 0..levels."""

    eps0: float = 1e-2
    levels: int = 6
    ratio: float = 2.0

    def __post_init__(self):
        if not (self.eps0 > 0 and self.ratio > 1 and self.levels >= 1):
            raise ValueError("need eps0 > 0, ratio > 1 and levels >= 1")

    @property
    def nodes(self):
        return self.eps0 * self.ratio ** -np.arange(self.levels + 1, dtype=float)


@dataclass(frozen=True)
class BoundaryLimit:
    """M(lambda+i0) with its imaginary part and the channel space.

    Attributes
    ----------
    im_M : ndarray
        Hermitian imaginary part with eigenvalues below zero clipped.
    channel_isometry : ndarray, shape (n, r)
        Orthonormal eigenvectors of im_M with eigenvalue above rank_tol,
        largest eigenvalue first.
    ambiguous : tuple of float
        Eigenvalues within a factor 10 of rank_tol (rank decision fragile).
    """

    lam: float
    M_plus: np.ndarray
    im_M: np.ndarray
    channel_isometry: np.ndarray
    rank_tol: float
    extrapolation_error: float = 0.0
    ambiguous: tuple = ()
    symbol: str = "weyl"

    @property
    def rank(self):
        return self.channel_isometry.shape[1]


def _point(z):
    if isinstance(z, SpectralPoint):
        return z
    return SpectralPoint.from_complex(z)


def _raw_sample(model, z, trunc, symbol):
    if symbol == "weyl":
        return model.weyl(z, trunc)
    if symbol == "ntd":
        return model.robin_symbol(z, trunc)
    raise ValueError(f"unknown symbol {symbol!r}")


def _raw_boundary(model, lam, trunc, symbol):
    if symbol == "weyl":
        return model.weyl_boundary(lam, trunc)
    if symbol == "ntd":
        return model.robin_symbol_boundary(lam, trunc)
    raise ValueError(f"unknown symbol {symbol!r}")


def evaluate_weyl(model, z, trunc):
    """Sample M at a point of the closed upper half-plane.

    Parameters
    ----------
    model : WeylModel
    z : SpectralPoint or complex
        epsilon == 0 requests the direct boundary value.
    trunc : ChannelTruncation

    Raises
    ------
    UnsupportedBoundaryPoint
        For on-axis points of models without direct boundary values.
    ModelDomainError
        Propagated from the model, or when the Nevanlinna inequality fails.
    """
    pt = _point(z)
    if pt.on_axis:
        if not model.supports_direct:
            raise UnsupportedBoundaryPoint(f"{model.kind} has no direct boundary values")
        M = nk.as_matrix(model.weyl_boundary(pt.lam, trunc), "M")
        return WeylSample(pt.z, M, trunc, boundary=True,
                          min_im_eig=_min_eig(nk.imag_part(M)))
    M = nk.as_matrix(model.weyl(pt.z, trunc), "M")
    lo = _min_eig(nk.imag_part(M))
    if lo < -NEVANLINNA_TOL * (1.0 + np.linalg.norm(M, 2)):
        raise ModelDomainError(
            f"Nevanlinna inequality fails for {model.kind} at z={pt.z}: min eig Im M = {lo:.3e}"
        )
    return WeylSample(pt.z, M, trunc, boundary=False, min_im_eig=lo)


def _min_eig(h):
    if h.size == 0:
        return 0.0
    return float(nk.herm_eig(h).eigenvalues[0])


def neville_to_zero(nodes, values):
    """Polynomial extrapolation of values(eps) to eps = 0.

    Parameters
    ----------
    nodes : sequence of float
        Distinct abscissae, ordered from largest to smallest.
    values : sequence of ndarray
        Samples at the nodes (any common shape).

    Returns
    -------
    limit : ndarray
    diagonal : list of ndarray
        Successive extrapolants using 1, 2, ... nodes; consecutive differences
        give the error estimate.
    """
    x = [float(t) for t in nodes]
    p = [np.asarray(v, dtype=complex) for v in values]
    diagonal = [p[-1]]
    n = len(x)
    for j in range(1, n):
        p = [(p[i + 1] * x[i] - p[i] * x[i + j]) / (x[i] - x[i + j]) for i in range(n - j)]
        diagonal.append(p[-1])
    return p[0], diagonal


def extrapolate(nodes, values, floor=0.0, strict=True):
    """Extrapolate to eps = 0 and estimate the error.

    With ``strict=False`` a growing correction is returned as the error
    estimate instead of raising.

    Returns
    -------
    limit, error : ndarray, float

    Raises
    ------
    ExtrapolationDiverged
        If the last correction exceeds the one before it while both are above
        the roundoff `floor`.
    """
    limit, diag = neville_to_zero(nodes, values)
    diffs = [float(np.max(np.abs(diag[k] - diag[k - 1]))) for k in range(1, len(diag))]
    if strict and len(diffs) >= 2 and diffs[-1] > diffs[-2] and diffs[-1] > floor:
        raise ExtrapolationDiverged(
            f"extrapolation corrections grew: {diffs[-2]:.3e} -> {diffs[-1]:.3e}"
        )
    err = diffs[-1] if diffs else 0.0
    return limit, err


def _canonical_basis(vecs):
    """Deterministic orthonormal basis of span(vecs).

    Columns are phase-normalized so the largest entry is real positive.
    A repeated eigenvalue leaves the basis free, so in that case the
    projector is re-orthonormalized on its dominant coordinate columns.
    """
    d = vecs.shape[1]
    if d > 1:
        proj = vecs @ vecs.conj().T
        diag = np.real(np.diag(proj))
        order = np.argsort(-np.round(diag, 10), kind="stable")[:d]
        cols = np.sort(order)
        q, r = sla.qr(proj[:, cols], mode="economic")
        signs = np.diag(r) / np.where(np.abs(np.diag(r)) > 0, np.abs(np.diag(r)), 1.0)
        vecs = q * signs
    out = np.empty_like(vecs)
    for j in range(d):
        v = vecs[:, j]
        k = int(np.argmax(np.abs(v) - 1e-12 * np.arange(v.size)))
        out[:, j] = v * (abs(v[k]) / v[k])
    return out


def channel_space(im_M, rank_rtol=RANK_RTOL, scale=1.0):
    """Split Im M(lambda+i0) into its numerical range.

    Returns
    -------
    isometry : ndarray (n, r)
    clipped : ndarray
        im_M with negative eigenvalues set to zero.
    rank_tol : float
    ambiguous : tuple of float
    """
    eig = nk.herm_eig(im_M)
    w, v = eig.eigenvalues, eig.eigenvectors
    n = w.size
    wmax = float(w[-1]) if n else 0.0
    rank_tol = max(rank_rtol * max(wmax, 0.0), RANK_ABS_FLOOR * scale)
    clip_tol = max(rank_tol, 1e-10 * float(np.linalg.norm(w)))
    if n and w[0] < -clip_tol:
        raise IndefiniteImPart(f"Im M has eigenvalue {w[0]:.3e} below -{clip_tol:.3e}")
    wc = np.clip(w, 0.0, None)
    clipped = nk.hermitian_part((v * wc) @ v.conj().T)
    keep = np.nonzero(w > rank_tol)[0][::-1]
    ambiguous = tuple(float(t) for t in w
                      if rank_tol / AMBIGUITY_FACTOR < abs(t) < rank_tol * AMBIGUITY_FACTOR)
    # group repeated eigenvalues so degenerate blocks get a canonical basis
    blocks = []
    for idx in keep:
        if blocks and abs(w[idx] - w[blocks[-1][-1]]) <= CLUSTER_RTOL * max(wmax, 1e-300):
            blocks[-1].append(idx)
        else:
            blocks.append([idx])
    cols = [_canonical_basis(v[:, b]) for b in blocks]
    iso = np.hstack(cols) if cols else np.zeros((n, 0), dtype=complex)
    return iso, clipped, rank_tol, ambiguous


def boundary_limit_from_matrix(lam, M_plus, rank_rtol=RANK_RTOL, extrapolation_error=0.0,
                               symbol="weyl"):
    """Wrap a given boundary value M(lambda+i0) as a BoundaryLimit."""
    M = nk.as_matrix(M_plus, "M_plus")
    im = nk.imag_part(M)
    iso, clipped, tol, amb = channel_space(im, rank_rtol, scale=1.0 + np.linalg.norm(M))
    return BoundaryLimit(float(lam), M, clipped, iso, tol, float(extrapolation_error), amb, symbol)


def boundary_limit(model, lam, trunc, strategy="direct", rank_rtol=RANK_RTOL, symbol="weyl"):
    """Boundary value M(lambda+i0) and the channel space H_lambda.

    Parameters
    ----------
    model : WeylModel
    lam : float
    trunc : ChannelTruncation
    strategy : "direct", "extrapolate" or EpsSchedule
        "direct" uses the model's outgoing-solution formula.  Otherwise
        M(lambda + i eps_k) is extrapolated to eps = 0 by a Neville table.
    symbol : "weyl" or "ntd"
        "ntd" returns the boundary value of the Robin symbol N instead of M
        (for models written as M = N - 1/alpha).
    """
    lam = float(lam)
    model.check_point(lam, trunc)
    if strategy == "direct":
        if not model.supports_direct:
            raise UnsupportedBoundaryPoint(f"{model.kind} has no direct boundary values")
        M = _raw_boundary(model, lam, trunc, symbol)
        return boundary_limit_from_matrix(lam, M, rank_rtol, 0.0, symbol)
    sched = EpsSchedule() if strategy == "extrapolate" else strategy
    if not isinstance(sched, EpsSchedule):
        raise ValueError(f"unknown strategy {strategy!r}")
    nodes = sched.nodes
    samples = [nk.as_matrix(_raw_sample(model, complex(lam, e), trunc, symbol)) for e in nodes]
    scale = max(float(np.max(np.abs(s))) for s in samples)
    M, err = extrapolate(nodes, samples, floor=1e-12 * (1.0 + scale))
    return boundary_limit_from_matrix(lam, M, rank_rtol, err, symbol)


@dataclass
class NevanlinnaAudit:
    """Report of `nevanlinna_audit`.

    Attributes
    ----------
    points : list of dict
        Per grid point: z, min eigenvalue of Im M, conjugation residual.
    min_im_eig : float
        Minimum over the grid (strictness witness, must be > 0).
    max_conjugation_residual : float
    decay : dict
        Truncation size -> descending singular values of Im M at the first
        grid point.
    """

    model: str
    points: list = field(default_factory=list)
    min_im_eig: float = np.inf
    max_conjugation_residual: float = 0.0
    decay: dict = field(default_factory=dict)

    @property
    def strict(self):
        return bool(self.min_im_eig > 0)

    def as_dict(self):
        return {
            "model": self.model,
            "strict": self.strict,
            "min_im_eig": self.min_im_eig,
            "max_conjugation_residual": self.max_conjugation_residual,
            "points": self.points,
            "decay": {str(k): list(v) for k, v in self.decay.items()},
        }


def nevanlinna_audit(model, grid: Sequence, trunc, sizes: Optional[Sequence] = None):
    """Check positivity of Im M and the symmetry M(conj z) = M(z)* on a grid.

    Parameters
    ----------
    grid : sequence of complex or SpectralPoint
        Points with Im z > 0.
    sizes : sequence of ChannelTruncation, optional
        Truncations at which the singular values of Im M are recorded
        (at the first grid point).
    """
    rep = NevanlinnaAudit(model.kind)
    for pt in map(_point, grid):
        if pt.on_axis:
            raise ValueError("audit grid must lie in the open upper half-plane")
        M = nk.as_matrix(model.weyl(pt.z, trunc))
        Mc = nk.as_matrix(model.weyl(pt.z.conjugate(), trunc))
        lo = _min_eig(nk.imag_part(M))
        conj_res = float(np.linalg.norm(Mc - M.conj().T) / (1.0 + np.linalg.norm(M)))
        rep.points.append({"z_re": pt.lam, "z_im": pt.epsilon,
                           "min_im_eig": lo, "conjugation_residual": conj_res})
        rep.min_im_eig = min(rep.min_im_eig, lo)
        rep.max_conjugation_residual = max(rep.max_conjugation_residual, conj_res)
    if grid and sizes:
        z0 = _point(grid[0]).z
        for tr in sizes:
            s = nk.singular_values(nk.imag_part(nk.as_matrix(model.weyl(z0, tr))))
            rep.decay[tr.n] = [float(t) for t in s]
    return rep
