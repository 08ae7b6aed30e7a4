"""Discrete half-line Laplacian with a boundary coupling."""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from ..errors import ConfigurationError, ModelDomainError
from ..weyl import ChannelTruncation
from .base import ModeSymbolTable, RobinModel, _real


def free_m_function(z):
    """m(z) = <delta_0, (A - z)^{-1} delta_0> for the free half-line chain.

    m(z) = (-z + sqrt(z - 2) sqrt(z + 2))/2 with principal square roots.
    The product of the two roots has its cut on [-2, 2] only, so m is
    analytic off the band, Im m > 0 on the upper half-plane and |m| < 1.
    """
    z = np.asarray(z, dtype=complex)
    return 0.5 * (-z + np.sqrt(z - 2) * np.sqrt(z + 2))


def free_m_boundary(lam):
    """m(lambda + i0) for real lambda, lambda != +-2."""
    lam = float(lam)
    if abs(lam) < 2:
        return complex(-lam, np.sqrt(4 - lam * lam)) / 2
    if abs(lam) > 2:
        return complex((-lam + np.sign(lam) * np.sqrt(lam * lam - 4)) / 2, 0.0)
    raise ModelDomainError("lambda = +-2 are band edges of the free chain")


@dataclass(frozen=True)
class TruncatedChain:
    """First `size` sites of the chain, Dirichlet at the far end.

    A has zero diagonal and unit hopping; B adds `alpha` at site 0.
    """

    size: int
    alpha: float = 0.0

    def __post_init__(self):
        if self.size < 2:
            raise ConfigurationError("chain needs at least two sites")

    def _bands(self, z, perturbed):
        ab = np.zeros((3, self.size), dtype=complex)
        ab[0, 1:] = 1.0
        ab[2, :-1] = 1.0
        ab[1, :] = -z
        if perturbed:
            ab[1, 0] += self.alpha
        return ab

    def resolvent(self, z, v, perturbed=False):
        """(A - z)^{-1} v, or (B - z)^{-1} v when `perturbed`."""
        return solve_banded((1, 1), self._bands(complex(z), perturbed), np.asarray(v, dtype=complex))

    def apply(self, v, perturbed=False):
        v = np.asarray(v, dtype=complex)
        out = np.zeros_like(v)
        out[:-1] += v[1:]
        out[1:] += v[:-1]
        if perturbed:
            out[0] += self.alpha * v[0]
        return out

    def delta0(self):
        e = np.zeros(self.size, dtype=complex)
        e[0] = 1.0
        return e

    def m_function(self, z):
        return complex(self.resolvent(z, self.delta0())[0])


class JacobiHalfLine(RobinModel):
    """Free half-line chain A against B = A + alpha <delta_0, .> delta_0.

    Boundary maps on pairs (f, A f + c delta_0): Gamma0 = -c and
    Gamma1 = f(0) + Gamma0/alpha.  Then gamma(z) = (A - z)^{-1} delta_0, with
    entries m (-m)^n, and M(z) = m(z) + 1/alpha, i.e. N = m with effective
    coupling -alpha.
    """

    kind = "jacobi_halfline"
    single_channel = True

    def __init__(self, alpha=0.7):
        self.alpha = _real(alpha)

    def params(self):
        return {"model": self.kind, "alpha": self.alpha}

    def band(self):
        return (-2.0, 2.0)

    def sweep_band(self):
        return (-1.98, 1.98)

    def thresholds(self):
        return (-2.0, 2.0)

    def truncation(self, modes=None):
        return ChannelTruncation.single("site0")

    def alpha_matrix(self, trunc):
        return np.array([[-self.alpha]], dtype=complex)

    def robin_symbol(self, z, trunc):
        z = complex(z)
        if z.imag == 0:
            raise ModelDomainError("use robin_symbol_boundary on the real axis")
        return np.array([[complex(free_m_function(z))]])

    def robin_symbol_boundary(self, lam, trunc):
        return np.array([[free_m_boundary(lam)]])

    def gamma(self, z, size):
        """gamma(z) on the first `size` sites: entries m (-m)^n."""
        m = complex(free_m_function(z))
        return m * (-m) ** np.arange(size)

    def chain(self, size):
        return TruncatedChain(int(size), self.alpha)

    def mode_symbols(self, z, trunc, kind="ntd", boundary=False):
        lam = complex(z).real
        n = self.robin_symbol_boundary(lam, trunc) if boundary else self.robin_symbol(z, trunc)
        if kind == "ntd":
            val = n[0, 0]
        elif kind == "weyl":
            if self.alpha == 0:
                raise ModelDomainError("alpha = 0 has no Weyl function of this form")
            val = n[0, 0] + 1.0 / self.alpha
        else:
            raise ConfigurationError(f"jacobi_halfline has no symbol kind {kind!r}")
        return ModeSymbolTable(self.kind, complex(z), boundary, kind, {"site0": val})
