import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, strategies as st

from weylscatter import MODEL_IDS, make_model
from weylscatter.engine import model_smatrix
from weylscatter.errors import ConfigurationError, ExclusionSetHit, ModelDomainError
from weylscatter.models import AlphaProfile, TruncatedChain, free_m_boundary, free_m_function
from weylscatter.models.base import parse_complex
from weylscatter.weyl import ChannelTruncation

# Neumann-to-Dirichlet symbol 1/Lambda_ext of the unit disk exterior at
# lambda = 1, frozen from an independent ODE shooting oracle: the radial
# equation integrated inward with DOP853 (rtol 1e-13) from r = 60, where the
# outgoing solution is set by the large-argument Hankel expansion.
SHOOTING_NTD = {
    0: 0.3330831746484351 + 0.7918767121562135j,
    3: 0.3681182676158536 + 0.0025456476712725803j,
}


def test_registry_and_errors():
    assert set(MODEL_IDS) == {
        "delta_line", "jacobi_halfline", "disk_dirichlet_robin", "disk_neumann_robin",
        "circle_dirichlet_free", "circle_neumann_free", "circle_delta_shell", "sphere_delta_shell"}
    assert make_model("disk-neumann-robin").kind == "disk_neumann_robin"
    with pytest.raises(ConfigurationError):
        make_model("nope")
    with pytest.raises(ConfigurationError):
        make_model("delta_line", radius=1.0)
    with pytest.raises(ConfigurationError):
        make_model("disk_neumann_robin", radius=-1.0)


def test_parse_complex():
    assert parse_complex("0.5+0.5i") == 0.5 + 0.5j
    assert parse_complex("-2i") == -2j
    with pytest.raises(ConfigurationError):
        parse_complex("1 + 2i")


@pytest.mark.parametrize("m", sorted(SHOOTING_NTD))
def test_disk_exterior_symbol_against_shooting(m):
    model = make_model("disk_neumann_robin", radius=1.0, alpha=1.0)
    tab = model.mode_symbols(1.0, model.truncation(3), kind="ntd", boundary=True)
    assert abs(tab.values[m] - SHOOTING_NTD[m]) < 1e-8


@given(st.floats(-20, 20).filter(lambda a: abs(a) > 1e-3), st.floats(0.01, 50))
def test_delta_line_closed_form(alpha, lam):
    # even channel of -f'' + alpha delta: S = (2ik + alpha)/(2ik - alpha)
    k = np.sqrt(lam)
    m = make_model("delta_line", alpha=alpha)
    s = model_smatrix(m, lam, m.truncation())
    assert abs(s.S[0, 0] - (2j * k + alpha) / (2j * k - alpha)) < 1e-12


def test_delta_line_reference_value():
    m = make_model("delta_line", alpha=2.0)
    assert abs(model_smatrix(m, 1.0, m.truncation()).S[0, 0] - (-1j)) < 1e-15


def test_free_chain_m_function_vs_truncated_resolvent():
    for z in (0.5 + 0.5j, -1.7 + 0.05j, 3 + 1j):
        assert abs(free_m_function(z) - TruncatedChain(4000, 0.0).m_function(z)) < 1e-12
        # fixed point of the continued fraction m = -1/(z + m)
        m = free_m_function(z)
        assert abs(m + 1 / (z + m)) < 1e-14
        assert m.imag > 0


def test_free_m_boundary_edges():
    assert free_m_boundary(0.0) == pytest.approx(1j)
    with pytest.raises(ModelDomainError):
        free_m_boundary(2.0)


def test_conjugation_symmetry():
    for mid in MODEL_IDS:
        m = make_model(mid)
        t = m.truncation(3)
        z = 1.3 + 0.4j
        a, b = np.asarray(m.weyl(z, t)), np.asarray(m.weyl(np.conj(z), t))
        assert np.allclose(b, a.conj().T, atol=1e-12), mid


def test_sphere_truncation_size():
    m = make_model("sphere_delta_shell")
    assert m.truncation(4).n == 25


def test_exclusion_set_hit():
    m = make_model("circle_dirichlet_free", radius=1.0)
    lam = sp.jn_zeros(0, 1)[0] ** 2
    with pytest.raises(ExclusionSetHit):
        model_smatrix(m, lam, m.truncation(4))
    n = make_model("circle_neumann_free", radius=1.0)
    with pytest.raises(ExclusionSetHit):
        model_smatrix(n, sp.jnp_zeros(1, 1)[0] ** 2, n.truncation(4))
    # a point nearby is fine
    assert model_smatrix(m, lam + 0.1, m.truncation(4)).rank > 0


def test_thresholds_rejected():
    m = make_model("disk_neumann_robin")
    with pytest.raises(ModelDomainError):
        model_smatrix(m, 0.0, m.truncation(2))


def test_below_spectrum_has_no_channels():
    m = make_model("disk_neumann_robin")
    assert model_smatrix(m, -1.0, m.truncation(4)).rank == 0
    j = make_model("jacobi_halfline")
    assert model_smatrix(j, 2.5, j.truncation()).rank == 0


def test_rigging_choice_does_not_change_s():
    ref = None
    for rig in ("laplace", "identity", "dtn"):
        m = make_model("circle_dirichlet_free", radius=1.3, rigging=rig)
        t = m.truncation(4)
        s = model_smatrix(m, 2.0, t).mode_space()
        ref = s if ref is None else ref
        assert np.max(np.abs(s - ref)) < 1e-12


def test_alpha_profiles():
    t = ChannelTruncation.circle(2)
    assert np.allclose(AlphaProfile.parse(2.0).diagonal(t), 2.0)
    with pytest.raises(ConfigurationError):
        AlphaProfile.parse([1.0, 2.0]).diagonal(t)
    f = AlphaProfile.parse({"0": 1.0, "1": "0.2+0.1i"})
    a = f.matrix(t)
    assert not f.is_diagonal
    assert np.allclose(a, a.conj().T)
    assert a[1, 0] == 0.2 + 0.1j  # alpha_hat(m - n) with m = -1, n = -2
    with pytest.raises(ConfigurationError):
        AlphaProfile.parse({"-1": 1.0})
    with pytest.raises(ConfigurationError):
        AlphaProfile.parse("1+1i")


def test_per_mode_alpha_on_disk():
    m = make_model("disk_neumann_robin", alpha=[1.0, 0.5, 0.0, 0.5, 1.0])
    s = model_smatrix(m, 2.0, m.truncation(2))
    assert s.unitarity_defect < 1e-12
    # alpha = 0 in mode 0 decouples it, so that diagonal entry is 1
    full = s.mode_space()
    assert abs(full[2, 2] - 1) < 1e-12


def test_fourier_alpha_unitary_and_coupling():
    m = make_model("disk_neumann_robin", alpha={"0": 1.0, "2": "0.3-0.2i"})
    t = m.truncation(6)
    s = model_smatrix(m, 3.0, t)
    assert s.unitarity_defect < 1e-12
    full = s.mode_space()
    off = full - np.diag(np.diag(full))
    assert np.max(np.abs(off)) > 1e-3  # non-constant alpha mixes modes


def test_jacobi_gamma_is_resolvent_of_delta0():
    m = make_model("jacobi_halfline", alpha=0.7)
    z = 0.3 + 0.2j
    g = m.gamma(z, 3000)
    ref = m.chain(3000).resolvent(z, m.chain(3000).delta0())
    assert np.max(np.abs(g[:200] - ref[:200])) < 1e-13
