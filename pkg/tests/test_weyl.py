import numpy as np
import pytest
from hypothesis import given, strategies as st

from weylscatter import make_model
from weylscatter.errors import (
    ExtrapolationDiverged,
    IndefiniteImPart,
    ModelDomainError,
    UnsupportedBoundaryPoint,
)
from weylscatter.models import ConstantWeyl
from weylscatter.weyl import (
    ChannelTruncation,
    EpsSchedule,
    RiggingWeights,
    SpectralPoint,
    boundary_limit,
    boundary_limit_from_matrix,
    channel_space,
    evaluate_weyl,
    extrapolate,
    neville_to_zero,
    nevanlinna_audit,
)

from conftest import random_psd


def test_spectral_point_validation():
    assert SpectralPoint(1.0).on_axis
    assert SpectralPoint.from_complex(2 + 3j).z == 2 + 3j
    with pytest.raises(ValueError):
        SpectralPoint(1.0, -0.1)
    with pytest.raises(ValueError):
        SpectralPoint(np.inf)


def test_truncation_labels():
    assert ChannelTruncation.circle(2).mode_labels == (-2, -1, 0, 1, 2)
    assert ChannelTruncation.sphere(3).n == 16
    with pytest.raises(ValueError):
        ChannelTruncation((1, 1))


def test_rigging_weights():
    w = RiggingWeights("laplace", 2.0).weights([0, 2, -2])
    assert np.allclose(w, [1.0, 2 ** 0.25, 2 ** 0.25])
    with pytest.raises(ValueError):
        RiggingWeights("dtn", 1.0, ref_energy=1.0)


def test_eps_schedule_nodes():
    s = EpsSchedule(1e-2, 3, 2.0)
    assert np.allclose(s.nodes, [1e-2, 5e-3, 2.5e-3, 1.25e-3])
    with pytest.raises(ValueError):
        EpsSchedule(1e-2, 0, 2.0)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=5))
def test_neville_exact_on_polynomials(coeffs):
    nodes = 0.1 * 2.0 ** -np.arange(len(coeffs) + 1)
    vals = [np.polyval(coeffs, e) for e in nodes]
    lim, _ = neville_to_zero(nodes, vals)
    assert abs(lim - coeffs[-1]) < 1e-9 * (1 + max(map(abs, coeffs)))


def test_extrapolate_diverging_sequence_raises():
    # linear data with a corrupted sample at the largest eps: only the
    # highest-order extrapolant sees it, so the last correction grows
    nodes = EpsSchedule(1e-2, 6, 2.0).nodes
    vals = 1 + nodes
    vals[0] += 1e-3
    with pytest.raises(ExtrapolationDiverged):
        extrapolate(nodes, vals)
    lim, err = extrapolate(nodes, vals, strict=False)
    assert err > 0


def test_channel_space_rank_and_basis(rng):
    h = random_psd(rng, 6, 3)
    iso, clipped, tol, amb = channel_space(h)
    assert iso.shape == (6, 3)
    assert np.allclose(iso.conj().T @ iso, np.eye(3), atol=1e-12)
    proj = iso @ iso.conj().T
    assert np.linalg.norm(proj @ h - h) < 1e-10 * np.linalg.norm(h)
    assert amb == ()


def test_channel_space_ambiguity_recorded():
    iso, _, tol, amb = channel_space(np.diag([1.0, 2e-8]))
    assert iso.shape[1] == 1 or iso.shape[1] == 2
    assert len(amb) == 1


def test_channel_space_degenerate_block_is_deterministic():
    # identical input through different eigenvector phases gives one basis
    h = np.eye(3)
    a = channel_space(h)[0]
    u = np.diag(np.exp(1j * np.array([0.3, 1.1, -2.0])))
    b = channel_space(u @ h @ u.conj().T)[0]
    assert np.allclose(a, b)


def test_channel_space_rejects_indefinite():
    with pytest.raises(IndefiniteImPart):
        channel_space(np.diag([1.0, -0.5]))


def test_evaluate_weyl_nevanlinna_check():
    bad = ConstantWeyl(np.array([[1 - 1j]]))
    with pytest.raises(ModelDomainError):
        evaluate_weyl(bad, 1j, bad.truncation())
    good = ConstantWeyl(np.array([[1 + 1j]]))
    assert evaluate_weyl(good, 1j, good.truncation()).min_im_eig == pytest.approx(1.0)


def test_direct_unsupported_for_model_without_boundary_values():
    m = ConstantWeyl(np.array([[1 + 1j]]))
    m.supports_direct = False
    with pytest.raises(UnsupportedBoundaryPoint):
        evaluate_weyl(m, SpectralPoint(1.0), m.truncation())


@pytest.mark.parametrize("model_id,params,lam", [
    ("delta_line", {"alpha": 2.0}, 1.3),
    ("jacobi_halfline", {"alpha": 0.7}, 0.4),
    ("disk_neumann_robin", {"alpha": 1.0}, 2.0),
    ("circle_delta_shell", {"alpha": 1.0}, 3.0),
    ("disk_dirichlet_robin", {"alpha": -0.5}, 1.5),
])
def test_direct_vs_extrapolated_boundary_value(model_id, params, lam):
    m = make_model(model_id, **params)
    t = m.truncation(4)
    direct = boundary_limit(m, lam, t, "direct")
    extra = boundary_limit(m, lam, t, "extrapolate")
    assert np.max(np.abs(direct.M_plus - extra.M_plus)) <= 1e-6
    assert extra.extrapolation_error < 1e-6


@pytest.mark.parametrize("model_id", ["delta_line", "jacobi_halfline", "disk_neumann_robin",
                                      "circle_dirichlet_free", "circle_neumann_free",
                                      "sphere_delta_shell", "disk_dirichlet_robin"])
def test_nevanlinna_audit_is_strict(model_id):
    m = make_model(model_id)
    t = m.truncation(3)
    rep = nevanlinna_audit(m, [0.5 + 0.1j, 3 + 1j, -1 + 2j], t, [m.truncation(1), t])
    assert rep.strict
    assert rep.max_conjugation_residual < 1e-12
    d = rep.as_dict()
    assert d["strict"] is True


def test_boundary_limit_from_matrix_records_rank():
    bl = boundary_limit_from_matrix(0.0, np.diag([1 + 1j, 2 + 0j]))
    assert bl.rank == 1
