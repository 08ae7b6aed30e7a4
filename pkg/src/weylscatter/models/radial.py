"""Radially symmetric continuum models on circles and spheres.

All symbols are diagonal in the angular modes and depend only on |m| (or
on l for the sphere).  Conventions:

* wave number k = sqrt(z) with Im k > 0 off the axis; k = sqrt(lambda) > 0
  on the axis above the threshold, where the exterior solution is the
  outgoing Hankel function H^(1);
* below zero the symbols are evaluated with modified Bessel functions in
  real arithmetic, so they are exactly real there;
* DtN maps use the outward normal of the respective domain.  Interior:
  k f'/f for the regular solution.  Exterior: -k f'/f for the outgoing
  solution (the normal points towards the obstacle).  Both are positive
  below the spectrum.
"""

import numpy as np
from scipy import special as sp

from .. import specfun
from ..errors import ConfigurationError, ExclusionSetHit, ModelDomainError
from ..weyl import ChannelTruncation, RiggingWeights
from .base import AlphaProfile, ModeSymbolTable, RobinModel, WeylModel, _real

EXCLUSION_RTOL = 1e-6


def _order(label):
    return abs(label) if not isinstance(label, tuple) else label[0]


class RadialSymbols:
    """DtN symbols per angular order on a circle (n=2) or sphere (n=3).

    Parameters
    ----------
    radius : float
    family : {"cylinder", "sphere"}
    v0 : float
        Constant potential inside the obstacle (interior symbols only).
    """

    def __init__(self, radius, family, v0=0.0):
        radius = _real(radius)
        if not radius > 0:
            raise ConfigurationError("radius must be positive")
        self.radius = radius
        self.family = family
        self.v0 = _real(v0)

    def orders(self, trunc):
        return np.array([_order(lab) for lab in trunc.mode_labels], dtype=int)

    def exterior(self, z, boundary, nmax):
        R, fam = self.radius, self.family
        if boundary:
            lam = float(np.real(z))
            if lam > 0:
                k = np.sqrt(lam)
                return -k * specfun.outgoing_logderiv(nmax, k * R, fam)
            if lam < 0:
                kap = np.sqrt(-lam)
                return -kap * specfun.modified_decaying_logderiv(nmax, kap * R, fam)
            raise ModelDomainError("lambda = 0 is the threshold of the exterior problem")
        k = 1j * np.sqrt(-complex(z))
        return -k * specfun.outgoing_logderiv(nmax, k * R, fam)

    def interior(self, z, boundary, nmax):
        R, fam = self.radius, self.family
        if boundary:
            w = float(np.real(z)) - self.v0
            if w > 0:
                k = np.sqrt(w)
                return k * specfun.regular_logderiv(nmax, k * R, fam)
            if w < 0:
                kap = np.sqrt(-w)
                return kap * specfun.modified_regular_logderiv(nmax, kap * R, fam)
            return np.arange(nmax + 1) / R
        k = np.sqrt(complex(z) - self.v0)
        return k * specfun.regular_logderiv(nmax, k * R, fam)

    def near_interior_zero(self, lam, order, derivative):
        """True if k_in R lies within the guard band of a zero of J_m (or J'_m)."""
        w = float(lam) - self.v0
        if w <= 0:
            return False
        x = np.sqrt(w) * self.radius
        if order > 2 * x + 1:
            # first zero of J_m and of J'_m exceeds m
            return False
        nt = int(x / np.pi) + 3
        if self.family == specfun.CYLINDER:
            zeros = sp.jnp_zeros(order, nt) if derivative else sp.jn_zeros(order, nt)
        else:
            raise ModelDomainError("interior zero search only implemented for circles")
        return bool(np.any(np.abs(x - zeros) <= EXCLUSION_RTOL * zeros))


class _RadialModel:
    """Shared plumbing of the radial models."""

    family = specfun.CYLINDER
    has_interior = False

    def truncation(self, modes=16):
        if self.family == specfun.SPHERE:
            return ChannelTruncation.sphere(modes)
        return ChannelTruncation.circle(modes)

    def band(self):
        return (0.0, np.inf)

    def sweep_band(self):
        return (0.1, 10.0)

    def thresholds(self):
        return (0.0,)

    def _expand(self, per_order, trunc):
        return per_order[self.sym.orders(trunc)]

    def _nmax(self, trunc):
        return int(self.sym.orders(trunc).max()) if trunc.n else 0

    def robin_symbol(self, z, trunc):
        return np.diag(self.robin_vector(z, False, trunc)).astype(complex)

    def robin_symbol_boundary(self, lam, trunc):
        return np.diag(self.robin_vector(lam, True, trunc)).astype(complex)

    def _weyl_vector(self, z, boundary, trunc):
        if self.robin:
            return self.robin_vector(z, boundary, trunc) - 1.0 / self.alpha.diagonal(trunc)
        raise NotImplementedError

    def diagonal_data(self, z, trunc):
        """Mode vectors (Im M, M^{-1}) at non-real z for mode-diagonal models.

        Avoids dense assembly, so very large truncations stay cheap.
        """
        if not self.mode_diagonal:
            raise ValueError("model is not diagonal in modes")
        if self.robin:
            n = self.robin_vector(z, False, trunc)
            a = self.alpha.diagonal(trunc)
            return n.imag, -a / (1.0 - a * n)
        m = self._weyl_vector(z, False, trunc)
        return m.imag, 1.0 / m

    def dtn_orders(self, z, boundary, nmax):
        """Per-order symbols: dict with interior_dtn/exterior_dtn/dtn."""
        ext = self.sym.exterior(z, boundary, nmax)
        out = {"exterior_dtn": ext}
        if self.has_interior:
            inn = self.sym.interior(z, boundary, nmax)
            out["interior_dtn"] = inn
            out["dtn"] = inn + ext
        else:
            out["dtn"] = ext
        return out

    def mode_symbols(self, z, trunc, kind="weyl", boundary=False):
        """Table of one symbol kind over the truncation labels."""
        if boundary:
            self.check_point(float(np.real(z)), trunc)
        nmax = self._nmax(trunc)
        tab = self.dtn_orders(z, boundary, nmax)
        if kind in tab:
            per = tab[kind]
        elif kind == "ntd" or (kind == "coupled" and self.has_interior):
            per = 1.0 / tab["dtn"]
        elif kind == "weyl":
            vec = self._weyl_vector(z, boundary, trunc)
            return ModeSymbolTable(self.kind, complex(z), boundary, kind,
                                   dict(zip(trunc.mode_labels, vec)))
        else:
            raise ConfigurationError(f"{self.kind} has no symbol kind {kind!r}")
        vec = self._expand(per, trunc)
        return ModeSymbolTable(self.kind, complex(z), boundary, kind,
                               dict(zip(trunc.mode_labels, vec)))


class _RiggedMixin:
    def _init_rigging(self, rigging):
        if isinstance(rigging, str):
            rigging = RiggingWeights(rigging, self.sym.radius)
        self.rigging = rigging

    def weights(self, trunc):
        if self.rigging.kind != "dtn":
            return self.rigging.weights(self.sym.orders(trunc))
        per = self.dtn_orders(self.rigging.ref_energy, True, self._nmax(trunc))["dtn"]
        return np.sqrt(self._expand(per, trunc))


class DiskDirichletRobin(_RiggedMixin, _RadialModel, WeylModel):
    """Exterior of a disk: Dirichlet against Robin condition d_nu f = alpha f.

    M(z) = w^{-1} (alpha - Lambda(z)) w^{-1}, Lambda the exterior DtN map and
    w the rigging weights.  alpha may vanish (Neumann case) or be a
    Fourier-banded function on the circle.
    """

    kind = "disk_dirichlet_robin"

    def __init__(self, radius=1.0, alpha=1.0, rigging="laplace"):
        self.sym = RadialSymbols(radius, specfun.CYLINDER)
        self.alpha = AlphaProfile.parse(alpha)
        self._init_rigging(rigging)

    def params(self):
        return {"model": self.kind, "radius": self.sym.radius,
                "alpha": self.alpha.describe(), "rigging": self.rigging.kind}

    @property
    def mode_diagonal(self):
        return self.alpha.is_diagonal

    def _weyl_vector(self, z, boundary, trunc):
        if not self.alpha.is_diagonal:
            raise ConfigurationError("Weyl symbol table needs a mode-diagonal alpha")
        lam = self._expand(self.sym.exterior(z, boundary, self._nmax(trunc)), trunc)
        w = self.weights(trunc)
        return (self.alpha.diagonal(trunc) - lam) / w**2

    def _assemble(self, z, boundary, trunc):
        if self.alpha.is_diagonal:
            return np.diag(self._weyl_vector(z, boundary, trunc)).astype(complex)
        lam = self._expand(self.sym.exterior(z, boundary, self._nmax(trunc)), trunc)
        winv = 1.0 / self.weights(trunc)
        core = self.alpha.matrix(trunc) - np.diag(lam)
        return winv[:, None] * core * winv[None, :]

    def weyl(self, z, trunc):
        return self._assemble(z, False, trunc)

    def weyl_boundary(self, lam, trunc):
        return self._assemble(lam, True, trunc)


class DiskNeumannRobin(_RadialModel, RobinModel):
    """Exterior of a disk: Neumann against Robin.

    M(z) = N(z) - 1/alpha with N the exterior Neumann-to-Dirichlet map,
    N_m = 1/Lambda_m.  H'_m has no real zeros (its modulus is bounded below
    through the Wronskian), so no exclusion set is needed.
    """

    kind = "disk_neumann_robin"

    def __init__(self, radius=1.0, alpha=1.0):
        self.sym = RadialSymbols(radius, specfun.CYLINDER)
        self.alpha = AlphaProfile.parse(alpha)

    def params(self):
        return {"model": self.kind, "radius": self.sym.radius, "alpha": self.alpha.describe()}

    @property
    def mode_diagonal(self):
        return self.alpha.is_diagonal

    def alpha_matrix(self, trunc):
        return self.alpha.matrix(trunc)

    def robin_vector(self, z, boundary, trunc):
        lam = self.sym.exterior(z, boundary, self._nmax(trunc))
        return self._expand(1.0 / lam, trunc)


class CircleDirichletFree(_RiggedMixin, _RadialModel, WeylModel):
    """Free plane operator against the decoupled Dirichlet operator on a circle.

    M(z) = -w^{-1} (Lambda_in(z) + Lambda_out(z)) w^{-1}.  Interior Dirichlet
    eigenvalues (zeros of J_m(k R)) are excluded.
    """

    kind = "circle_dirichlet_free"
    has_interior = True

    def __init__(self, radius=1.0, v0=0.0, rigging="laplace"):
        self.sym = RadialSymbols(radius, specfun.CYLINDER, v0)
        self._init_rigging(rigging)

    def params(self):
        return {"model": self.kind, "radius": self.sym.radius, "v0": self.sym.v0,
                "rigging": self.rigging.kind}

    def check_point(self, lam, trunc):
        super().check_point(lam, trunc)
        for m in sorted(set(self.sym.orders(trunc))):
            if self.sym.near_interior_zero(lam, int(m), derivative=False):
                raise ExclusionSetHit(f"lambda = {lam} is near a zero of J_{m}(kR)")

    def _weyl_vector(self, z, boundary, trunc):
        d = self.dtn_orders(z, boundary, self._nmax(trunc))["dtn"]
        return -self._expand(d, trunc) / self.weights(trunc) ** 2

    def weyl(self, z, trunc):
        return np.diag(self._weyl_vector(z, False, trunc)).astype(complex)

    def weyl_boundary(self, lam, trunc):
        return np.diag(self._weyl_vector(lam, True, trunc)).astype(complex)


class CircleNeumannFree(_RiggedMixin, _RadialModel, WeylModel):
    """Free plane operator against the decoupled Neumann operator on a circle.

    M(z) = w (N_in(z) + N_out(z)) w with N = 1/Lambda on each side.  Zeros of
    J'_m(k R) (interior Neumann eigenvalues) are excluded.
    """

    kind = "circle_neumann_free"
    has_interior = True

    def __init__(self, radius=1.0, v0=0.0, rigging="laplace"):
        self.sym = RadialSymbols(radius, specfun.CYLINDER, v0)
        self._init_rigging(rigging)

    def params(self):
        return {"model": self.kind, "radius": self.sym.radius, "v0": self.sym.v0,
                "rigging": self.rigging.kind}

    def check_point(self, lam, trunc):
        super().check_point(lam, trunc)
        for m in sorted(set(self.sym.orders(trunc))):
            if self.sym.near_interior_zero(lam, int(m), derivative=True):
                raise ExclusionSetHit(f"lambda = {lam} is near a zero of J'_{m}(kR)")

    def _weyl_vector(self, z, boundary, trunc):
        tab = self.dtn_orders(z, boundary, self._nmax(trunc))
        per = 1.0 / tab["interior_dtn"] + 1.0 / tab["exterior_dtn"]
        return self._expand(per, trunc) * self.weights(trunc) ** 2

    def weyl(self, z, trunc):
        return np.diag(self._weyl_vector(z, False, trunc)).astype(complex)

    def weyl_boundary(self, lam, trunc):
        return np.diag(self._weyl_vector(lam, True, trunc)).astype(complex)


class _ShellModel(_RadialModel, RobinModel):
    """delta-interaction of strength alpha on a circle or sphere.

    Jump condition alpha f = d_nu f_in + d_nu f_out (outward normals), i.e.
    f'(R-) - f'(R+) = alpha f(R).  M(z) = E(z) - 1/alpha with
    E = (Lambda_in + Lambda_out)^{-1}.
    """

    has_interior = True

    def __init__(self, radius=1.0, alpha=1.0, v0=0.0):
        self.sym = RadialSymbols(radius, self.family, v0)
        self.alpha = AlphaProfile.parse(alpha)
        if self.family == specfun.SPHERE and self.alpha.fourier is not None:
            raise ConfigurationError("sphere shell accepts scalar or per-mode alpha only")

    def params(self):
        return {"model": self.kind, "radius": self.sym.radius, "v0": self.sym.v0,
                "alpha": self.alpha.describe()}

    @property
    def mode_diagonal(self):
        return self.alpha.is_diagonal

    def alpha_matrix(self, trunc):
        return self.alpha.matrix(trunc)

    def robin_vector(self, z, boundary, trunc):
        d = self.dtn_orders(z, boundary, self._nmax(trunc))["dtn"]
        return self._expand(1.0 / d, trunc)


class CircleDeltaShell(_ShellModel):
    kind = "circle_delta_shell"
    family = specfun.CYLINDER


class SphereDeltaShell(_ShellModel):
    kind = "sphere_delta_shell"
    family = specfun.SPHERE
