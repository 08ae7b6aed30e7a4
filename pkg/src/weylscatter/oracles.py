"""Scattering matrices computed without any Weyl function.

Each oracle solves the scattering problem directly: transfer-matrix
matching for the point interaction on the line, plane-wave matching on the
chain, and partial-wave matching of incoming/outgoing Hankel solutions for
the radial models.  Special functions come straight from scipy.special, not
from the ratio recurrences used by the models.
"""

import numpy as np
from scipy import special as sp

from .engine import UNITARITY_TOL, _finish
from .errors import ModelDomainError, OracleUnavailable

ORACLE_MODELS = (
    "delta_line",
    "jacobi_halfline",
    "disk_neumann_robin",
    "disk_dirichlet_robin",
    "circle_delta_shell",
    "sphere_delta_shell",
)


def delta_line_even_s(alpha, lam):
    """Even-channel S = t + r for -f'' + alpha*delta*f at energy lam > 0.

    Matching f = e^{ikx} + r e^{-ikx} (x < 0), f = t e^{ikx} (x > 0):
    continuity 1 + r = t and derivative jump f'(0+) - f'(0-) = alpha f(0).
    """
    k = np.sqrt(lam)
    a = np.array([[1.0, -1.0], [1j * k, 1j * k - alpha]])
    r, t = np.linalg.solve(a, np.array([-1.0, 1j * k]))
    return complex(t + r)


def chain_s(alpha, lam):
    """S for the half-line chain with coupling alpha at site 0.

    psi_n = e^{i n theta} + s e^{-i n theta} with lam = 2 cos(theta); the
    coupled chain imposes psi_{-1} = alpha psi_0, the free one psi_{-1} = 0.
    S is the ratio of the two outgoing amplitudes.
    """
    theta = np.arccos(lam / 2.0)
    e = np.exp(1j * theta)
    s_coupled = (alpha - 1 / e) / (e - alpha)
    s_free = -1 / e**2
    return complex(s_coupled / s_free)


def _cyl(m, x):
    return (sp.hankel1(m, x), sp.h1vp(m, x), sp.hankel2(m, x), sp.h2vp(m, x))


def _sph(l, x):
    j, y = sp.spherical_jn(l, x), sp.spherical_yn(l, x)
    dj, dy = sp.spherical_jn(l, x, True), sp.spherical_yn(l, x, True)
    return (j + 1j * y, dj + 1j * dy, j - 1j * y, dj - 1j * dy)


def _regular(m, x, family):
    if family == "cylinder":
        return sp.jv(m, x), sp.jvp(m, x)
    return sp.spherical_jn(m, x), sp.spherical_jn(m, x, True)


def _outgoing_amplitude_robin(k, R, alpha, m, family):
    """f = H2 + s H1 outside, d_r f = -alpha f at r = R (exterior Robin)."""
    h1, dh1, h2, dh2 = (_cyl if family == "cylinder" else _sph)(m, k * R)
    return -(k * dh2 + alpha * h2) / (k * dh1 + alpha * h1)


def disk_robin_s(R, alpha, lam, m, reference):
    """Per-mode S of Robin against Neumann or Dirichlet on the disk exterior."""
    k = np.sqrt(lam)
    h1, dh1, h2, dh2 = _cyl(m, k * R)
    s_robin = _outgoing_amplitude_robin(k, R, alpha, m, "cylinder")
    s_ref = -dh2 / dh1 if reference == "neumann" else -h2 / h1
    return complex(s_robin / s_ref)


def _shell_amplitude(k, k_in, R, alpha, m, family):
    h1, dh1, h2, dh2 = (_cyl if family == "cylinder" else _sph)(m, k * R)
    j, dj = _regular(m, k_in * R, family)
    # unknowns (a, s): a*reg = H2 + s*H1 and
    # a*(k_in reg' - alpha reg) = k (H2' + s H1')
    mat = np.array([[j, -h1], [k_in * dj - alpha * j, -k * dh1]], dtype=complex)
    rhs = np.array([h2, k * dh2], dtype=complex)
    return np.linalg.solve(mat, rhs)[1]


def shell_s(R, alpha, lam, m, family, v0=0.0):
    """Per-mode S of the delta-shell against the unperturbed operator.

    Jump f'(R-) - f'(R+) = alpha f(R), interior wave number sqrt(lam - v0).
    """
    k = np.sqrt(lam)
    k_in = np.sqrt(complex(lam - v0))
    s_alpha = _shell_amplitude(k, k_in, R, alpha, m, family)
    s_zero = _shell_amplitude(k, k_in, R, 0.0, m, family)
    return complex(s_alpha / s_zero)


def analytic_oracle_smatrix(model, lam, trunc, tol=UNITARITY_TOL):
    """Mode-space S(lambda) from direct solution matching.

    Returns a sample whose channel isometry is the identity on the
    truncation, so `S` is indexed by the truncation labels.

    Raises
    ------
    OracleUnavailable
        For models outside the oracle list or non-scalar alpha.
    """
    kind = model.kind
    if kind not in ORACLE_MODELS:
        raise OracleUnavailable(f"no analytic oracle for {kind}")
    lam = float(lam)
    lo, hi = model.band()
    if not lo < lam < hi:
        raise ModelDomainError(f"lambda = {lam} outside the band of {kind}")
    if kind == "delta_line":
        vals = [delta_line_even_s(model.alpha, lam)]
    elif kind == "jacobi_halfline":
        vals = [chain_s(model.alpha, lam)]
    else:
        if model.alpha.scalar is None:
            raise OracleUnavailable("partial-wave oracle needs a scalar alpha")
        alpha = model.alpha.scalar
        R = model.sym.radius
        orders = model.sym.orders(trunc)
        per = {}
        for m in sorted(set(orders)):
            m = int(m)
            if kind == "disk_neumann_robin":
                per[m] = disk_robin_s(R, alpha, lam, m, "neumann")
            elif kind == "disk_dirichlet_robin":
                per[m] = disk_robin_s(R, alpha, lam, m, "dirichlet")
            else:
                per[m] = shell_s(R, alpha, lam, m, model.family, model.sym.v0)
        vals = [per[int(m)] for m in orders]
    s = np.diag(np.asarray(vals, dtype=complex))
    return _finish(lam, s, np.eye(len(vals), dtype=complex), 1.0, tol, ())


def compare_with_oracle(sample, oracle):
    """Max entrywise deviation after compressing the oracle to the sample's channels."""
    p = sample.channel_isometry
    comp = p.conj().T @ oracle.S @ p
    if comp.size == 0:
        return 0.0
    return float(np.max(np.abs(comp - sample.S)))
