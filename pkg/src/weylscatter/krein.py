"""Krein's resolvent formula and gamma-field identities on discretized models.

The continuum formula

    (A1 - z)^{-1} - (A0 - z)^{-1} = -gamma(z) M(z)^{-1} gamma(conj z)^*

is the target; the left side is computed on the model's own finite
discretization (truncated chain, or finite differences on an interval).
Tolerances therefore reflect discretization error and are reported with the
measured convergence order.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import ConfigurationError, ResolventUnavailable
from .models.jacobi import TruncatedChain


@dataclass(frozen=True)
class GammaSample:
    """gamma(z) sampled on the discretization grid (one boundary channel)."""

    z: complex
    gamma: np.ndarray


class ChainSystem:
    """jacobi_halfline restricted to its first `size` sites."""

    def __init__(self, model, size=2000):
        if model.kind != "jacobi_halfline":
            raise ResolventUnavailable(f"ChainSystem needs jacobi_halfline, got {model.kind}")
        self.model = model
        self.chain = TruncatedChain(int(size), model.alpha)
        self.weight = 1.0

    @property
    def size(self):
        return self.chain.size

    def resolvent(self, z, v, perturbed=False):
        return self.chain.resolvent(z, v, perturbed)

    def gamma(self, z):
        return GammaSample(complex(z), self.model.gamma(z, self.size))

    def probes(self, count, rng):
        """Random complex vectors on the first quarter of the chain."""
        support = max(2, self.size // 4)
        out = np.zeros((count, self.size), dtype=complex)
        out[:, :support] = rng.standard_normal((count, support)) + 1j * rng.standard_normal((count, support))
        return out


class FiniteDifferenceLine:
    """delta_line on [-L/2, L/2] with step h and Dirichlet ends.

    A_h is the three-point Laplacian (with a minus sign), B_h adds alpha/h at
    the grid point x = 0.  Vectors are grid samples, inner products carry the
    weight h.
    """

    def __init__(self, model, length=200.0, step=0.01):
        if model.kind != "delta_line":
            raise ResolventUnavailable(f"FiniteDifferenceLine needs delta_line, got {model.kind}")
        half = int(round(length / (2 * step)))
        if half < 2 or abs(half * step - length / 2) > 1e-9 * length:
            raise ConfigurationError("length/2 must be a multiple of the step")
        self.model = model
        self.step = float(step)
        self.x = step * np.arange(-half + 1, half)
        self.center = half - 1
        self.weight = self.step

    @property
    def size(self):
        return self.x.size

    def resolvent(self, z, v, perturbed=False):
        n, h = self.size, self.step
        ab = np.zeros((3, n), dtype=complex)
        ab[0, 1:] = -1.0 / h**2
        ab[2, :-1] = -1.0 / h**2
        ab[1, :] = 2.0 / h**2 - complex(z)
        if perturbed:
            ab[1, self.center] += self.model.alpha / h
        return solve_banded((1, 1), ab, np.asarray(v, dtype=complex))

    def gamma(self, z):
        return GammaSample(complex(z), self.model.gamma(z, self.x))

    def probes(self, count, rng):
        """Smooth random probes: sums of Gaussian bumps inside |x| < L/4."""
        quarter = self.x[-1] / 2
        out = np.zeros((count, self.size), dtype=complex)
        for i in range(count):
            centers = rng.uniform(-quarter / 2, quarter / 2, size=4)
            widths = rng.uniform(0.5, 2.0, size=4)
            amps = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            for c, w, a in zip(centers, widths, amps):
                out[i] += a * np.exp(-((self.x - c) / w) ** 2)
        return out


def discretization(model, **kw):
    if model.kind == "jacobi_halfline":
        return ChainSystem(model, **kw)
    if model.kind == "delta_line":
        return FiniteDifferenceLine(model, **kw)
    raise ResolventUnavailable(f"no discretized resolvent for {model.kind}")


def krein_residual(model, z, probes=None, system=None, n_probes=16, seed=0):
    """Largest relative Krein-formula residual over probe vectors.

    Returns max_f |[R1(z) - R0(z) + gamma(z) M(z)^{-1} gamma(conj z)^*] f| / |f|
    in the weighted norm of the discretization.
    """
    z = complex(z)
    system = system if system is not None else discretization(model)
    trunc = model.truncation()
    minv = complex(np.asarray(model.weyl_inverse(z, trunc))[0, 0])
    g = system.gamma(z).gamma
    gbar = system.gamma(z.conjugate()).gamma
    if probes is None:
        probes = system.probes(n_probes, np.random.default_rng(seed))
    w = system.weight
    worst = 0.0
    for f in np.atleast_2d(probes):
        diff = system.resolvent(z, f, True) - system.resolvent(z, f, False)
        krein = g * (minv * w * np.vdot(gbar, f))
        num = np.sqrt(w) * np.linalg.norm(diff + krein)
        den = np.sqrt(w) * np.linalg.norm(f)
        worst = max(worst, float(num / den))
    return worst


@dataclass
class GridConvergence:
    steps: list
    residuals: list

    @property
    def observed_order(self):
        h, r = np.asarray(self.steps), np.asarray(self.residuals)
        return float(np.log(r[-2] / r[-1]) / np.log(h[-2] / h[-1]))


def fd_convergence(model, z, steps=(0.02, 0.01), length=200.0, n_probes=8, seed=0):
    """Krein residual of the finite-difference line under step refinement.

    Probes are the same smooth functions sampled on each grid.
    """
    res = []
    for h in steps:
        system = FiniteDifferenceLine(model, length, h)
        probes = system.probes(n_probes, np.random.default_rng(seed))
        res.append(krein_residual(model, z, probes, system))
    return GridConvergence(list(steps), res)


@dataclass
class GammaAudit:
    rows: list = field(default_factory=list)

    def max_residual(self, identity=None):
        vals = [r["residual"] for r in self.rows if identity in (None, r["identity"])]
        return max(vals) if vals else 0.0


def gamma_field_audit(model, z_list, xi_list=None, size=2000, seed=0):
    """Residuals of the gamma-field identities on the truncated chain.

    For each pair (z, xi):

    * gutgut:  M(z) - M(xi)^* = (z - conj xi) gamma(xi)^* gamma(z)
    * imm:     Im M(z) = Im z |gamma(z)|^2                 (xi unused)
    * gform1:  gamma(z) = (I + (z - xi)(A0 - z)^{-1}) gamma(xi)
    * gstar:   gamma(z)^* f = Gamma1 (A0 - conj z)^{-1} f  (random f)

    Scalar identities are measured relative to 1 + |lhs|, vector ones
    relative to |gamma(z)|.
    """
    if model.kind != "jacobi_halfline":
        raise ResolventUnavailable("gamma-field audit needs the truncated chain")
    system = ChainSystem(model, size)
    trunc = model.truncation()
    xi_list = list(z_list) if xi_list is None else list(xi_list)
    rng = np.random.default_rng(seed)
    audit = GammaAudit()

    def weyl(z):
        # M = m + 1/alpha; the constant cancels in every identity, so alpha = 0
        # falls back to the m-function
        n_sym = complex(model.robin_symbol(z, trunc)[0, 0])
        return n_sym + (1.0 / model.alpha if model.alpha != 0 else 0.0)

    def row(name, z, xi, res):
        audit.rows.append({"identity": name, "z": complex(z), "xi": complex(xi),
                           "residual": float(res)})

    for z in map(complex, z_list):
        gz = system.gamma(z).gamma
        mz = weyl(z)
        row("imm", z, z, abs(mz.imag - z.imag * np.vdot(gz, gz).real) / (1 + abs(mz.imag)))
        f = np.zeros(system.size, dtype=complex)
        f[:50] = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        u = system.resolvent(z.conjugate(), f)
        row("gstar", z, z.conjugate(), abs(np.vdot(gz, f) - u[0]) / (1 + abs(u[0])))
        for xi in map(complex, xi_list):
            gx = system.gamma(xi).gamma
            lhs = mz - np.conj(weyl(xi))
            rhs = (z - xi.conjugate()) * np.vdot(gx, gz)
            row("gutgut", z, xi, abs(lhs - rhs) / (1 + abs(lhs)))
            pred = gx + (z - xi) * system.resolvent(z, gx)
            row("gform1", z, xi, np.linalg.norm(gz - pred) / np.linalg.norm(gz))
    return audit
