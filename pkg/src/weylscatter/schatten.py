"""Singular-value decay of Im M, gamma-fields and resolvent differences.

Upper-bound diagnostics only: an O(j^-p) claim passes when s_j j^p does not
grow along the computed sequence.  Concretely, with t_j = s_j j^p, the
verdict requires max over the second half of t_j to stay within `slack`
times the max over the first half.  The fitted exponent is reported but
never gates the verdict, because analytic boundaries decay much faster than
the worst-case bounds.
"""

from dataclasses import dataclass

import numpy as np

from . import numkernel as nk
from .errors import ConfigurationError, ModelNotDiagonal

ENTITIES = ("im_weyl", "gamma_field", "krein_difference")
DENSE_CAP = 512
DEFAULT_SLACK = 2.0

# O(j^-p) exponents per (model, entity).  Resolvent differences follow the
# claimed ideals; gamma-fields get half the exponent of the product
# gamma M^{-1} gamma^* (1/p + 1/q = 1/r with equal factors); Im M inherits
# the S_1 regularity of the Weyl function.
BOUND_EXPONENTS = {
    ("circle_dirichlet_free", "im_weyl"): 1.0,
    ("circle_neumann_free", "im_weyl"): 1.0,
    ("disk_neumann_robin", "im_weyl"): 1.0,
    ("disk_dirichlet_robin", "im_weyl"): 1.0,
    ("circle_delta_shell", "im_weyl"): 1.0,
    ("sphere_delta_shell", "im_weyl"): 1.0,
    ("disk_dirichlet_robin", "krein_difference"): 2.0,
    ("disk_neumann_robin", "krein_difference"): 3.0,
    ("circle_dirichlet_free", "krein_difference"): 2.0,
    ("circle_neumann_free", "krein_difference"): 2.0,
    ("circle_delta_shell", "krein_difference"): 3.0,
    ("sphere_delta_shell", "krein_difference"): 1.5,
}
for (_m, _e), _p in list(BOUND_EXPONENTS.items()):
    if _e == "krein_difference":
        BOUND_EXPONENTS[(_m, "gamma_field")] = _p / 2


@dataclass(frozen=True)
class DecayReport:
    """Result of `sv_decay`.

    Attributes
    ----------
    j : ndarray of int
        1-based indices.
    s : ndarray
        Singular values, descending.
    bound_exponent : float
        Claimed p in s_j = O(j^-p).
    constant : float
        max_j s_j j^p.
    fitted_exponent : float
        -slope of log s_j against log j over the tail half (nan if undefined).
    passed : bool
    """

    entity: str
    model: str
    z: complex
    j: np.ndarray
    s: np.ndarray
    bound_exponent: float
    constant: float
    head_constant: float
    tail_constant: float
    fitted_exponent: float
    slack: float
    passed: bool

    def verdict(self):
        return {
            "entity": self.entity,
            "model": self.model,
            "z_re": self.z.real,
            "z_im": self.z.imag,
            "count": int(self.s.size),
            "bound_exponent": self.bound_exponent,
            "constant": self.constant,
            "head_constant": self.head_constant,
            "tail_constant": self.tail_constant,
            "fitted_exponent": self.fitted_exponent,
            "slack": self.slack,
            "pass": self.passed,
        }


def decay_verdict(values, bound_exponent, slack=DEFAULT_SLACK, entity="values", model="", z=0j):
    """Verdict on a sequence of singular values (sorted here, descending)."""
    s = np.sort(np.abs(np.asarray(values, dtype=float)))[::-1]
    n = s.size
    j = np.arange(1, n + 1)
    p = float(bound_exponent)
    t = s * j.astype(float) ** p
    finite = bool(np.all(np.isfinite(t)))
    half = max(1, n // 2)
    head = float(np.max(t[:half])) if n else 0.0
    tail = float(np.max(t[half:])) if n > half else 0.0
    const = float(np.max(t)) if n else 0.0
    passed = finite and (tail <= slack * head or const == 0.0)
    pos = (s > 0) & (j > half)
    if np.count_nonzero(pos) >= 2:
        slope = np.polyfit(np.log(j[pos]), np.log(s[pos]), 1)[0]
        fitted = float(-slope)
    else:
        fitted = float("nan")
    return DecayReport(entity, model, complex(z), j, s, p, const, head, tail, fitted,
                       float(slack), bool(passed))


def _entity_values(entity, im_m, minv, y):
    if entity == "im_weyl":
        return im_m
    if entity == "gamma_field":
        return np.sqrt(np.clip(im_m, 0, None) / y)
    return np.abs(im_m * minv) / y


def entity_singular_values(entity, model, z, trunc):
    """Singular values of the entity at z on the truncation.

    Mode-diagonal models are handled per mode with no dense matrix.  Other
    models are assembled densely (n <= 512): with Q = sqrt(Im M(z)) the
    gamma-field has singular values of Q/sqrt(Im z) and the resolvent
    difference those of Q M^{-1} Q / Im z.
    """
    if entity not in ENTITIES:
        raise ConfigurationError(f"unknown entity {entity!r}; choose from {ENTITIES}")
    z = complex(z)
    y = z.imag
    if not y > 0:
        raise ConfigurationError("sv_decay needs Im z > 0")
    if model.mode_diagonal and hasattr(model, "diagonal_data"):
        im_m, minv = model.diagonal_data(z, trunc)
        return _entity_values(entity, im_m, minv, y)
    if trunc.n > DENSE_CAP:
        raise ModelNotDiagonal(f"dense assembly of {trunc.n} modes exceeds cap {DENSE_CAP}")
    m_sym = model.robin_symbol(z, trunc) if model.robin else model.weyl(z, trunc)
    im_m = nk.imag_part(nk.as_matrix(m_sym))
    if model.mode_diagonal:
        minv = np.diag(model.weyl_inverse(z, trunc))
        return _entity_values(entity, np.real(np.diag(im_m)), minv, y)
    if entity == "im_weyl":
        return nk.singular_values(im_m)
    q = nk.psd_sqrt(im_m)
    if entity == "gamma_field":
        return nk.singular_values(q) / np.sqrt(y)
    return nk.singular_values(q @ model.weyl_inverse(z, trunc) @ q) / y


def sv_decay(entity, model, z=1j, max_modes=64, bound_exponent=None, slack=DEFAULT_SLACK):
    """Singular values of an entity and the verdict against its O(j^-p) claim.

    Parameters
    ----------
    entity : {"im_weyl", "gamma_field", "krein_difference"}
    model : WeylModel
    z : complex
        Point in the upper half-plane.
    max_modes : int
        Circle models keep |m| <= max_modes, the sphere l <= max_modes.
    bound_exponent : float, optional
        Overrides the tabulated claim.
    """
    if bound_exponent is None:
        key = (model.kind, entity)
        if key not in BOUND_EXPONENTS:
            raise ConfigurationError(f"no tabulated bound for {key}; pass bound_exponent")
        bound_exponent = BOUND_EXPONENTS[key]
    trunc = model.truncation(max_modes)
    vals = entity_singular_values(entity, model, z, trunc)
    return decay_verdict(vals, bound_exponent, slack, entity, model.kind, z)
