"""Point interaction on the real line, even channel."""

import numpy as np

from ..errors import ConfigurationError, ModelDomainError
from ..weyl import ChannelTruncation
from .base import ModeSymbolTable, RobinModel, _real


def wavenumber(z):
    """k with k^2 = z and Im k > 0 for non-real z."""
    return 1j * np.sqrt(-complex(z))


class DeltaLine(RobinModel):
    """Free line operator -d^2/dx^2 against -d^2/dx^2 + alpha*delta(x).

    Boundary maps on the adjoint of the operator restricted to f(0) = 0:
    Gamma0 f = f'(0-) - f'(0+) and Gamma1 f = f(0) + Gamma0 f / alpha.  The
    Weyl function is M(z) = i/(2 sqrt z) + 1/alpha, i.e. N(z) = i/(2k) with
    effective coupling -alpha.  Only the even channel scatters.
    """

    kind = "delta_line"
    single_channel = True

    def __init__(self, alpha=1.0):
        self.alpha = _real(alpha)

    def params(self):
        return {"model": self.kind, "alpha": self.alpha}

    def band(self):
        return (0.0, np.inf)

    def sweep_band(self):
        return (0.01, 10.0)

    def thresholds(self):
        return (0.0,)

    def truncation(self, modes=None):
        return ChannelTruncation.single("even")

    def alpha_matrix(self, trunc):
        return np.array([[-self.alpha]], dtype=complex)

    def robin_symbol(self, z, trunc):
        z = complex(z)
        if z.imag == 0:
            raise ModelDomainError("use robin_symbol_boundary on the real axis")
        return np.array([[1j / (2 * wavenumber(z))]])

    def robin_symbol_boundary(self, lam, trunc):
        lam = float(lam)
        if lam > 0:
            return np.array([[1j / (2 * np.sqrt(lam))]])
        if lam < 0:
            return np.array([[1.0 / (2 * np.sqrt(-lam))]], dtype=complex)
        raise ModelDomainError("lambda = 0 is the threshold of the free line")

    def gamma(self, z, x):
        """Defect function gamma(z)1 = (i/2k) exp(ik|x|) sampled on `x`."""
        k = wavenumber(z)
        return (1j / (2 * k)) * np.exp(1j * k * np.abs(np.asarray(x, dtype=float)))

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
            raise ConfigurationError(f"delta_line has no symbol kind {kind!r}")
        return ModeSymbolTable(self.kind, complex(z), boundary, kind, {"even": val})
