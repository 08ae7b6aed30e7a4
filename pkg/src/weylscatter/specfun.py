"""Bessel-family special functions for the radial model symbols.

Point evaluations (`bessel_jy`, `spherical_jyh`, `hankel1`) wrap
scipy.special and attach the Wronskian check.  The radial models only ever
need logarithmic derivatives f'/f, so those come from three-term recurrences
on ratios f_m/f_{m-1}.  Ratios never overflow, which keeps orders up to the cap
usable at small arguments where Y_m itself is out of range, and the same code
works for complex arguments (needed off the real axis).
"""

from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import DomainError, OrderCapExceeded

ORDER_CAP = 256
MAX_ARG = 1e8
WRONSKIAN_RTOL = 1e-10

CYLINDER = "cylinder"
SPHERE = "sphere"


def _check(order, x, order_cap):
    if not np.isfinite(x) or x <= 0:
        raise DomainError(f"argument must be positive and finite, got {x!r}")
    if x > MAX_ARG:
        raise DomainError(f"argument {x!r} exceeds {MAX_ARG:g}")
    if order < 0 or int(order) != order:
        raise DomainError(f"order must be a non-negative integer, got {order!r}")
    if order > order_cap:
        raise OrderCapExceeded(f"order {order} exceeds cap {order_cap}")


def _wronskian_ok(lhs, rhs):
    if not (np.isfinite(lhs) and np.isfinite(rhs)):
        # Y overflowed (large order, small argument); nothing to compare
        return True
    return abs(lhs - rhs) <= WRONSKIAN_RTOL * abs(rhs) * 10


@dataclass(frozen=True)
class BesselEval:
    """J_m, Y_m and their derivatives at a positive real argument."""

    order: int
    arg: float
    J: float
    Y: float
    dJ: float
    dY: float

    @property
    def wronskian(self):
        return self.J * self.dY - self.Y * self.dJ


def bessel_jy(order, x, order_cap=ORDER_CAP):
    """Cylinder functions J_m(x), Y_m(x) and derivatives.

    Parameters
    ----------
    order : int
        0 <= order <= order_cap.
    x : float
        0 < x <= 1e8.
    """
    _check(order, x, order_cap)
    m = int(order)
    x = float(x)
    out = BesselEval(m, x, float(sp.jv(m, x)), float(sp.yv(m, x)),
                     float(sp.jvp(m, x)), float(sp.yvp(m, x)))
    assert _wronskian_ok(out.wronskian, 2.0 / (np.pi * x)), "Wronskian check failed"
    return out


@dataclass(frozen=True)
class SphericalEval:
    """Spherical j_l, y_l, derivatives and h_l = j_l + i y_l."""

    order: int
    arg: float
    j: float
    y: float
    dj: float
    dy: float

    @property
    def h(self):
        return complex(self.j, self.y)

    @property
    def dh(self):
        return complex(self.dj, self.dy)

    @property
    def wronskian(self):
        return self.j * self.dy - self.y * self.dj


def spherical_jyh(order, x, order_cap=ORDER_CAP):
    """Spherical Bessel functions of the first and second kind."""
    _check(order, x, order_cap)
    n = int(order)
    x = float(x)
    out = SphericalEval(
        n, x,
        float(sp.spherical_jn(n, x)), float(sp.spherical_yn(n, x)),
        float(sp.spherical_jn(n, x, derivative=True)),
        float(sp.spherical_yn(n, x, derivative=True)),
    )
    assert _wronskian_ok(out.wronskian, 1.0 / x**2), "spherical Wronskian check failed"
    return out


@dataclass(frozen=True)
class HankelEval:
    order: int
    arg: float
    H: complex
    dH: complex


def hankel1(order, x, order_cap=ORDER_CAP):
    """Outgoing Hankel function H_m = J_m + i Y_m and its derivative."""
    b = bessel_jy(order, x, order_cap)
    return HankelEval(b.order, b.arg, complex(b.J, b.Y), complex(b.dJ, b.dY))


# Ratio recurrences.
#
# Both families obey f_{m+1} = a_m f_m - f_{m-1} with a_m = 2m/x (cylinder)
# or (2m+1)/x (sphere), and
#   f'_m = f_{m-1} - b_m f_m = -f_{m+1} + (m/x) f_m,
# with b_m = m/x (cylinder) or (m+1)/x (sphere).  Modified functions flip
# signs as noted inline.

def _a(m, x, family):
    return (2 * m + (family == SPHERE)) / x


def _b(m, x, family):
    return (m + (family == SPHERE)) / x


def _check_family(family, nmax, order_cap):
    if family not in (CYLINDER, SPHERE):
        raise ValueError(f"unknown family {family!r}")
    if nmax < 0:
        raise DomainError("nmax must be non-negative")
    if nmax > order_cap:
        raise OrderCapExceeded(f"order {nmax} exceeds cap {order_cap}")


def _downward_start(nmax, x):
    return nmax + 40 + int(2.0 * abs(x))


def outgoing_logderiv(nmax, x, family=CYLINDER, order_cap=ORDER_CAP):
    """f'_m(x)/f_m(x) for outgoing Hankel functions, m = 0..nmax.

    `x` may be complex with Im x >= 0.  Upward recurrence on
    rho_m = f_m/f_{m-1} is stable because the Hankel functions grow with
    order.
    """
    _check_family(family, nmax, order_cap)
    x = complex(x)
    if x == 0 or x.imag < 0:
        raise DomainError(f"outgoing data needs x != 0 with Im x >= 0, got {x}")
    if family == CYLINDER:
        rho = complex(sp.hankel1e(1, x) / sp.hankel1e(0, x))
    else:
        rho = 1.0 / x - 1j
    out = np.empty(nmax + 1, dtype=complex)
    out[0] = -rho
    for m in range(1, nmax + 1):
        out[m] = 1.0 / rho - _b(m, x, family)
        rho = _a(m, x, family) - 1.0 / rho
    return out


def regular_logderiv(nmax, x, family=CYLINDER, order_cap=ORDER_CAP):
    """f'_m(x)/f_m(x) for the regular solutions J_m or j_m, m = 0..nmax.

    Downward recurrence on r_m = f_m/f_{m-1} (a continued fraction started
    well above nmax).  Valid for complex x.
    """
    _check_family(family, nmax, order_cap)
    x = complex(x) if np.iscomplexobj(x) else float(x)
    if x == 0:
        raise DomainError("argument must be non-zero")
    top = _downward_start(nmax, x)
    r_next = 0.0
    ratios = {}
    for m in range(top, 0, -1):
        r = 1.0 / (_a(m, x, family) - r_next)
        if m <= nmax + 1:
            ratios[m] = r
        r_next = r
    out = np.empty(nmax + 1, dtype=complex if isinstance(x, complex) else float)
    for m in range(nmax + 1):
        out[m] = m / x - ratios[m + 1]
    return out


def modified_regular_logderiv(nmax, x, family=CYLINDER, order_cap=ORDER_CAP):
    """I'_m/I_m (or i'_l/i_l for the sphere) at real x > 0, m = 0..nmax.

    Uses f_{m-1} - f_{m+1} = a_m f_m and f'_m = f_{m+1} + (m/x) f_m.
    """
    _check_family(family, nmax, order_cap)
    x = float(x)
    if not x > 0:
        raise DomainError(f"argument must be positive, got {x}")
    top = _downward_start(nmax, x)
    r_next = 0.0
    ratios = {}
    for m in range(top, 0, -1):
        r = 1.0 / (_a(m, x, family) + r_next)
        if m <= nmax + 1:
            ratios[m] = r
        r_next = r
    out = np.empty(nmax + 1)
    for m in range(nmax + 1):
        out[m] = m / x + ratios[m + 1]
    return out


def modified_decaying_logderiv(nmax, x, family=CYLINDER, order_cap=ORDER_CAP):
    """K'_m/K_m (or k'_l/k_l for the sphere) at real x > 0, m = 0..nmax.

    Uses f_{m+1} = f_{m-1} + a_m f_m and f'_m = -f_{m-1} - b_m f_m.
    """
    _check_family(family, nmax, order_cap)
    x = float(x)
    if not x > 0:
        raise DomainError(f"argument must be positive, got {x}")
    if family == CYLINDER:
        rho = float(sp.kve(1, x) / sp.kve(0, x))
    else:
        rho = 1.0 + 1.0 / x
    out = np.empty(nmax + 1)
    out[0] = -rho
    for m in range(1, nmax + 1):
        out[m] = -1.0 / rho - _b(m, x, family)
        rho = _a(m, x, family) + 1.0 / rho
    return out
