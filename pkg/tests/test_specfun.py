import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, strategies as st

from weylscatter import specfun
from weylscatter.errors import DomainError, OrderCapExceeded

# frozen from independent closed forms / power series
J1_AT_1 = 0.44005058574493355  # sum (-1)^k (1/2)^(2k+1) / (k! (k+1)!)
SPH_J3_AT_HALF = 0.0011740354438675572  # exact rational power series x^n sum (-x^2/2)^k/(k!(2n+2k+1)!!)
SPH_Y1_AT_2 = -0.35061200427605527  # -cos x/x^2 - sin x/x


def test_bessel_j1_power_series():
    b = specfun.bessel_jy(1, 1.0)
    assert abs(b.J - J1_AT_1) < 1e-15
    assert abs(b.wronskian - 2 / np.pi) < 1e-14


def test_spherical_closed_forms():
    assert abs(specfun.spherical_jyh(3, 0.5).j - SPH_J3_AT_HALF) < 1e-17
    e = specfun.spherical_jyh(1, 2.0)
    assert abs(e.y - SPH_Y1_AT_2) < 1e-15
    assert e.h == complex(e.j, e.y)


def test_hankel_is_j_plus_iy():
    h = specfun.hankel1(2, 3.0)
    assert abs(h.H - sp.hankel1(2, 3.0)) < 1e-14


def test_domain_and_order_cap():
    with pytest.raises(DomainError):
        specfun.bessel_jy(0, 0.0)
    with pytest.raises(DomainError):
        specfun.bessel_jy(0, 2e8)
    with pytest.raises(OrderCapExceeded):
        specfun.bessel_jy(257, 1.0)
    with pytest.raises(OrderCapExceeded):
        specfun.outgoing_logderiv(300, 1.0)


def test_outgoing_logderiv_high_order_stays_finite():
    # H_256(1) overflows double precision; its log-derivative does not
    d = specfun.outgoing_logderiv(256, 1.0)
    assert np.all(np.isfinite(d))
    assert abs(d[256] + 256.0) < 1.0  # ~ -m/x for m >> x


@given(st.floats(0.05, 60.0), st.integers(0, 40))
def test_outgoing_logderiv_matches_scipy(x, m):
    d = specfun.outgoing_logderiv(m, x)[m]
    ref = sp.h1vp(m, x) / sp.hankel1(m, x)
    assert abs(d - ref) <= 1e-10 * (1 + abs(ref))


@given(st.floats(0.05, 40.0), st.integers(0, 30))
def test_spherical_outgoing_logderiv(x, l):
    d = specfun.outgoing_logderiv(l, x, specfun.SPHERE)[l]
    h = sp.spherical_jn(l, x) + 1j * sp.spherical_yn(l, x)
    dh = sp.spherical_jn(l, x, True) + 1j * sp.spherical_yn(l, x, True)
    assert abs(d - dh / h) <= 1e-10 * (1 + abs(dh / h))


@given(st.floats(0.05, 20.0), st.integers(0, 30))
def test_regular_logderiv_away_from_zeros(x, m):
    j, dj = sp.jv(m, x), sp.jvp(m, x)
    if abs(j) < 1e-3:
        return
    d = specfun.regular_logderiv(m, x)[m]
    assert abs(d - dj / j) <= 1e-9 * (1 + abs(dj / j))


@given(st.floats(0.05, 30.0), st.integers(0, 30))
def test_modified_logderivs(x, m):
    i_ratio = sp.ivp(m, x) / sp.iv(m, x)
    k_ratio = sp.kvp(m, x) / sp.kv(m, x)
    assert abs(specfun.modified_regular_logderiv(m, x)[m] - i_ratio) <= 1e-10 * (1 + abs(i_ratio))
    assert abs(specfun.modified_decaying_logderiv(m, x)[m] - k_ratio) <= 1e-10 * (1 + abs(k_ratio))


def test_complex_argument_outgoing():
    x = 1.3 + 0.4j
    d = specfun.outgoing_logderiv(5, x)
    ref = sp.h1vp(5, x) / sp.hankel1(5, x)
    assert abs(d[5] - ref) < 1e-11 * abs(ref)
    with pytest.raises(DomainError):
        specfun.outgoing_logderiv(2, 1.0 - 0.1j)
