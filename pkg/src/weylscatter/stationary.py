"""Stationary scattering representation on the half-line chain.

An independent route to S(lambda) that never forms M(lambda + i0): the
resolvent difference at z = i is factorized as phi(A) C G C^* with
phi(t) = (t + i)/(t - i), C = gamma(-i) and G = -M(i)^{-1}.  The spectral
density

    K(lambda) = lim (eps/pi) C^* (A - lambda - i eps)^{-1} (A - lambda + i eps)^{-1} C

and

    Z(lambda) = Q^*Q/(lambda + i) + phi(lambda) G/(lambda + i)^2
                + lim Q^* (B - lambda - i eps)^{-1} Q,     Q = phi(A) C G,

give S = I + 2 pi i (1 + lambda^2)^2 sqrt(K) Z sqrt(K).  All resolvents act
on a truncated chain; the eps -> 0 limits are Neville extrapolations.
"""

from dataclasses import dataclass

import numpy as np

from .engine import UNITARITY_TOL, _finish, model_smatrix
from .errors import (
    ConfigurationError,
    FactorizationResidual,
    IndefiniteImPart,
    ModelDomainError,
    TruncationTooSmall,
)
from .models.jacobi import free_m_boundary
from .weyl import EpsSchedule, extrapolate

# Smallest eps = 0.32/1.6**8 ~ 7.5e-3 keeps the reflection from the far end
# of 4000 sites (~exp(-2 N eps / |velocity|)) far below 1e-8; the largest eps
# stays under the distance to the poles of C at z = -i.
STATIONARY_SCHEDULE = EpsSchedule(eps0=0.32, levels=8, ratio=1.6)
DEFAULT_SIZE = 4000
FACTORIZATION_TOL = 1e-8
DOUBLING_TOL = 1e-6


def phi(t):
    return (t + 1j) / (t - 1j)


def _require_chain(model):
    if model.kind != "jacobi_halfline":
        raise ConfigurationError(f"stationary route is implemented for jacobi_halfline only, got {model.kind}")


@dataclass(frozen=True)
class StationaryFactorization:
    """Truncated-chain data of the factorization at z = i.

    Attributes
    ----------
    C : ndarray
        gamma(-i) = (A + i)^{-1} delta_0.
    G : complex
        -M(i)^{-1} = -alpha/(1 + alpha m(i)).
    Q : ndarray
        phi(A) C G.
    residual : float
        Relative probe residual of (B-i)^{-1} - (A-i)^{-1} - phi(A) C G C^*.
    """

    size: int
    alpha: float
    C: np.ndarray
    G: complex
    Q: np.ndarray
    residual: float


def factorization(model, size=DEFAULT_SIZE, n_probes=4, seed=0):
    """Build and check the factorization on a chain of `size` sites.

    Raises
    ------
    FactorizationResidual
        If the probe residual exceeds 1e-8.
    """
    _require_chain(model)
    chain = model.chain(size)
    d0 = chain.delta0()
    c = chain.resolvent(-1j, d0)
    m_i = complex(chain.resolvent(1j, d0)[0])
    a = model.alpha
    g = -a / (1.0 + a * m_i)
    u = chain.resolvent(1j, c)
    phi_c = chain.apply(u) + 1j * u
    q = phi_c * g
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_probes):
        f = np.zeros(size, dtype=complex)
        sup = min(size, 200)
        f[:sup] = rng.standard_normal(sup) + 1j * rng.standard_normal(sup)
        lhs = chain.resolvent(1j, f, True) - chain.resolvent(1j, f, False)
        rhs = phi_c * (g * np.vdot(c, f))
        worst = max(worst, float(np.linalg.norm(lhs - rhs) / np.linalg.norm(f)))
    if worst > FACTORIZATION_TOL:
        raise FactorizationResidual(f"factorization residual {worst:.3e} > {FACTORIZATION_TOL:.0e}")
    return StationaryFactorization(size, a, c, complex(g), q, worst)


@dataclass(frozen=True)
class SpectralDensitySample:
    """K(lambda) with its extrapolation error and the Im M identity check."""

    lam: float
    K: np.ndarray
    error: float
    im_identity_residual: float
    size: int


def _density_value(model, lam, schedule, size, strict=True):
    chain = model.chain(size)
    c = chain.resolvent(-1j, chain.delta0())
    vals = []
    for eps in schedule.nodes:
        u = chain.resolvent(complex(lam, -eps), c)
        vals.append(eps / np.pi * np.vdot(u, u).real)
    k, err = extrapolate(schedule.nodes, vals, floor=1e-13, strict=strict)
    return float(np.real(k)), err


def spectral_density(model, lam, eps_schedule=STATIONARY_SCHEDULE, size=DEFAULT_SIZE,
                     doubling=True, tol=DOUBLING_TOL, strict=True):
    """K(lambda) for the free chain seen through C = gamma(-i).

    Outside [-2, 2] K vanishes identically.  The doubling test recomputes K
    on 2*size sites and raises TruncationTooSmall if the relative change
    exceeds `tol`.
    """
    _require_chain(model)
    lam = float(lam)
    if abs(lam) == 2.0:
        raise ModelDomainError("lambda = +-2 is a band edge")
    if abs(lam) > 2.0:
        return SpectralDensitySample(lam, np.zeros((1, 1)), 0.0, 0.0, size)
    k, err = _density_value(model, lam, eps_schedule, size, strict)
    if doubling:
        k2, _ = _density_value(model, lam, eps_schedule, 2 * size, strict)
        if abs(k2 - k) > tol * abs(k2):
            raise TruncationTooSmall(
                f"K changed by {abs(k2 - k) / abs(k2):.2e} (relative) when doubling {size} sites")
    if k < -1e-10:
        raise IndefiniteImPart(f"spectral density {k:.3e} is negative")
    im_m = free_m_boundary(lam).imag
    res = abs(im_m - np.pi * (1 + lam**2) * k) / abs(im_m)
    return SpectralDensitySample(lam, np.array([[max(k, 0.0)]]), float(err), float(res), size)


@dataclass(frozen=True)
class ZReport:
    lam: float
    Z: complex
    target: complex
    residual: float
    error: float


def z_function(model, lam, eps_schedule=STATIONARY_SCHEDULE, size=DEFAULT_SIZE, fac=None,
               strict=True):
    """Z(lambda) from the stationary formula, against -M(lambda+i0)^{-1}/(1+lambda^2).

    The residual is absolute; both sides are O(1) for moderate alpha.  Near
    the band edges pass ``strict=False`` to get a residual instead of an
    ExtrapolationDiverged error.
    """
    _require_chain(model)
    lam = float(lam)
    fac = fac if fac is not None else factorization(model, size)
    chain = model.chain(fac.size)
    q = fac.Q
    w = lam + 1j
    head = np.vdot(q, q) / w + phi(lam) * fac.G / w**2
    vals = []
    for eps in eps_schedule.nodes:
        vals.append(np.vdot(q, chain.resolvent(complex(lam, eps), q, perturbed=True)))
    tail, err = extrapolate(eps_schedule.nodes, vals, floor=1e-13, strict=strict)
    z_val = complex(head + tail)
    trunc = model.truncation()
    minv = complex(model.weyl_inverse_boundary(lam, trunc)[0, 0])
    target = -minv / (1 + lam**2)
    return ZReport(lam, z_val, target, abs(z_val - target), float(err))


def qq_identity_residual(model, size=DEFAULT_SIZE):
    """|Q^*Q - (1/2i)(M(-i)^{-1} - M(i)^{-1})| on the truncated chain."""
    fac = factorization(model, size)
    chain = model.chain(size)
    m_i = complex(chain.resolvent(1j, chain.delta0())[0])
    a = model.alpha
    minv_i = a / (1.0 + a * m_i)
    minv_mi = np.conj(minv_i)
    rhs = (minv_mi - minv_i) / 2j
    return float(abs(np.vdot(fac.Q, fac.Q) - rhs))


def stationary_smatrix(model, lam, eps_schedule=STATIONARY_SCHEDULE, size=DEFAULT_SIZE,
                       tol=UNITARITY_TOL, doubling=True):
    """S(lambda) through the stationary representation."""
    _require_chain(model)
    lam = float(lam)
    dens = spectral_density(model, lam, eps_schedule, size, doubling)
    k = float(dens.K[0, 0])
    if k == 0.0:
        return _finish(lam, np.eye(0, dtype=complex), np.zeros((1, 0), dtype=complex), 1.0, tol, ())
    zr = z_function(model, lam, eps_schedule, size)
    s = 1 + 2j * np.pi * (1 + lam**2) ** 2 * k * zr.Z
    return _finish(lam, np.array([[s]]), np.eye(1, dtype=complex), 1.0, tol, ())


def classical_rank_one_s(alpha, lam):
    """(1 + alpha m(lambda - i0))/(1 + alpha m(lambda + i0)) with the closed-form m."""
    m = free_m_boundary(lam)
    return complex((1 + alpha * np.conj(m)) / (1 + alpha * m))


def three_route(model, lam, eps_schedule=STATIONARY_SCHEDULE, size=DEFAULT_SIZE):
    """S(lambda) from the Weyl-function formula, the stationary formula and the
    classical rank-one formula, with pairwise deviations and the Z residual."""
    _require_chain(model)
    lam = float(lam)
    trunc = model.truncation()
    weyl_s = model_smatrix(model, lam, trunc)
    routes = {
        "weyl": complex(weyl_s.S[0, 0]) if weyl_s.rank else 1.0 + 0j,
        "stationary": complex(stationary_smatrix(model, lam, eps_schedule, size).S[0, 0]),
        "classical": classical_rank_one_s(model.alpha, lam),
    }
    names = sorted(routes)
    pairs = {f"{a}-{b}": abs(routes[a] - routes[b])
             for i, a in enumerate(names) for b in names[i + 1:]}
    zr = z_function(model, lam, eps_schedule, size)
    return {"lambda": lam, "routes": routes, "pairwise": pairs,
            "max_pairwise": max(pairs.values()), "z_residual": zr.residual}


def band_edge_report(model, guard=1e-2, eps_schedule=STATIONARY_SCHEDULE, size=DEFAULT_SIZE):
    """Z residuals at lambda = +-(2 - guard), where the limits degrade.

    Diagnostic only: extrapolation is run non-strictly and nothing is gated.
    """
    out = []
    for lam in (-(2 - guard), 2 - guard):
        zr = z_function(model, lam, eps_schedule, size, strict=False)
        dens = spectral_density(model, lam, eps_schedule, size, doubling=False, strict=False)
        out.append({"lambda": lam, "z_residual": zr.residual, "z_error": zr.error,
                    "im_identity_residual": dens.im_identity_residual})
    return out
