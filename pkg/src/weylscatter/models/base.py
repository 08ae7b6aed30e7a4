"""Model interface shared by every concrete operator pair."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import numkernel as nk
from ..errors import ConfigurationError, ModelDomainError, SingularMatrix
from ..weyl import ChannelTruncation

SYMBOL_KINDS = ("interior_dtn", "exterior_dtn", "dtn", "ntd", "coupled", "weyl")


def parse_complex(text):
    """Parse ``a+bi`` (no spaces), plain reals or complex numbers."""
    if isinstance(text, (int, float, complex, np.number)):
        return complex(text)
    s = str(text).strip()
    if " " in s:
        raise ConfigurationError(f"complex value {text!r} must not contain spaces")
    try:
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse complex value {text!r}") from exc


@dataclass(frozen=True)
class AlphaProfile:
    """Boundary coupling alpha in mode space.

    Exactly one representation is set: a scalar, a per-mode vector (one
    value per truncation label), or the non-negative Fourier coefficients of
    a real function on the circle; negative coefficients follow from
    alpha_hat(-k) = conj(alpha_hat(k)).
    """

    scalar: Optional[float] = None
    per_mode: Optional[tuple] = None
    fourier: Optional[tuple] = None

    @classmethod
    def parse(cls, obj):
        if isinstance(obj, AlphaProfile):
            return obj
        if isinstance(obj, dict):
            coeffs = []
            for key, val in obj.items():
                k = int(key)
                if k < 0:
                    raise ConfigurationError("give Fourier coefficients for k >= 0 only")
                coeffs.append((k, parse_complex(val)))
            coeffs.sort()
            if coeffs and coeffs[0][0] == 0 and abs(coeffs[0][1].imag) > 0:
                raise ConfigurationError("alpha_hat(0) must be real for a real alpha")
            return cls(fourier=tuple(coeffs))
        if np.ndim(obj) == 1:
            vals = tuple(_real(v) for v in obj)
            return cls(per_mode=vals)
        return cls(scalar=_real(obj))

    @property
    def is_diagonal(self):
        return self.fourier is None or all(k == 0 or c == 0 for k, c in self.fourier)

    def describe(self):
        if self.scalar is not None:
            return self.scalar
        if self.per_mode is not None:
            return list(self.per_mode)
        return {str(k): [c.real, c.imag] for k, c in self.fourier}

    def diagonal(self, trunc):
        n = trunc.n
        if self.scalar is not None:
            return np.full(n, float(self.scalar))
        if self.per_mode is not None:
            if len(self.per_mode) != n:
                raise ConfigurationError(
                    f"per-mode alpha has {len(self.per_mode)} entries, truncation has {n}")
            return np.asarray(self.per_mode, dtype=float)
        if not self.is_diagonal:
            raise ValueError("alpha is not diagonal in modes")
        c0 = dict(self.fourier).get(0, 0.0)
        return np.full(n, float(np.real(c0)))

    def matrix(self, trunc):
        if self.is_diagonal:
            return np.diag(self.diagonal(trunc)).astype(complex)
        labels = trunc.mode_labels
        if not all(isinstance(m, (int, np.integer)) for m in labels):
            raise ConfigurationError("Fourier alpha needs integer (circle) mode labels")
        coeffs = dict(self.fourier)

        def hat(k):
            if k >= 0:
                return coeffs.get(k, 0.0)
            return np.conj(coeffs.get(-k, 0.0))

        return np.array([[hat(m - n) for n in labels] for m in labels], dtype=complex)


def _real(v):
    c = parse_complex(v)
    if c.imag != 0:
        raise ConfigurationError(f"alpha must be real, got {v!r}")
    if not np.isfinite(c.real):
        raise ConfigurationError("alpha must be finite")
    return float(c.real)


@dataclass(frozen=True)
class ModeSymbolTable:
    """Per-mode scalar symbols of a radially symmetric model."""

    model: str
    z: complex
    boundary: bool
    kind: str
    values: dict

    def vector(self, trunc):
        return np.array([self.values[lab] for lab in trunc.mode_labels])


class WeylModel:
    """Base class of an operator pair described by a Weyl function.

    Subclasses implement `weyl` (any non-real z) and, when
    `supports_direct` is true, `weyl_boundary` (lambda + i0).
    """

    kind = "abstract"
    supports_direct = True
    robin = False
    single_channel = False

    def truncation(self, modes=None):
        return ChannelTruncation.single()

    def band(self):
        """Interval carrying the absolutely continuous spectrum."""
        return (-np.inf, np.inf)

    def sweep_band(self):
        return (0.1, 10.0)

    def thresholds(self):
        return ()

    def check_point(self, lam, trunc):
        """Raise ModelDomainError if lambda is a threshold or excluded point."""
        for t in self.thresholds():
            if lam == t:
                raise ModelDomainError(f"lambda = {lam} is a spectral threshold of {self.kind}")

    @property
    def mode_diagonal(self):
        return True

    def params(self):
        return {"model": self.kind}

    def weyl(self, z, trunc):
        raise NotImplementedError

    def weyl_boundary(self, lam, trunc):
        raise NotImplementedError

    def weyl_inverse(self, z, trunc):
        M = self.weyl(z, trunc)
        try:
            return nk.solve(M, np.eye(M.shape[0])).x
        except SingularMatrix as exc:
            raise ModelDomainError(str(exc)) from exc


class RobinModel(WeylModel):
    """Pairs whose Weyl function reads M = N - alpha^{-1}.

    N is the model's Neumann-to-Dirichlet type symbol (`robin_symbol`) and
    alpha is the effective coupling returned by `alpha_matrix`.  The inverse
    M^{-1} = -(I - alpha N)^{-1} alpha stays finite where alpha vanishes.
    """

    robin = True

    def alpha_matrix(self, trunc):
        raise NotImplementedError

    def robin_symbol(self, z, trunc):
        raise NotImplementedError

    def robin_symbol_boundary(self, lam, trunc):
        raise NotImplementedError

    def _inv_alpha(self, trunc):
        a = self.alpha_matrix(trunc)
        try:
            return nk.solve(a, np.eye(a.shape[0])).x
        except (SingularMatrix, ValueError) as exc:
            raise ModelDomainError(
                f"{self.kind}: M = N - 1/alpha needs invertible alpha") from exc

    def weyl(self, z, trunc):
        return self.robin_symbol(z, trunc) - self._inv_alpha(trunc)

    def weyl_boundary(self, lam, trunc):
        return self.robin_symbol_boundary(lam, trunc) - self._inv_alpha(trunc)

    def weyl_inverse(self, z, trunc):
        return self._robin_inverse(self.robin_symbol(z, trunc), trunc)

    def weyl_inverse_boundary(self, lam, trunc):
        return self._robin_inverse(self.robin_symbol_boundary(lam, trunc), trunc)

    def _robin_inverse(self, n_sym, trunc):
        a = self.alpha_matrix(trunc)
        pencil = np.eye(a.shape[0]) - a @ n_sym
        try:
            return -nk.solve(pencil, a).x
        except SingularMatrix as exc:
            raise ModelDomainError(str(exc)) from exc


class ConstantWeyl(WeylModel):
    """Synthetic model with M(z) = M0 on the upper half-plane.

    M(conj z) = M0* keeps the conjugation symmetry; boundary values are M0.
    """

    kind = "constant"

    def __init__(self, M0):
        self.M0 = nk.as_matrix(M0, "M0")
        self._trunc = ChannelTruncation(tuple(range(self.M0.shape[0])))

    def truncation(self, modes=None):
        return self._trunc

    def weyl(self, z, trunc):
        return self.M0.copy() if complex(z).imag > 0 else self.M0.conj().T.copy()

    def weyl_boundary(self, lam, trunc):
        return self.M0.copy()

    @property
    def mode_diagonal(self):
        return bool(np.count_nonzero(self.M0 - np.diag(np.diag(self.M0))) == 0)
