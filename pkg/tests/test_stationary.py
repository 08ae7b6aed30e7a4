import numpy as np
import pytest

from weylscatter import make_model
from weylscatter.errors import ConfigurationError, ModelDomainError, TruncationTooSmall
from weylscatter.stationary import (
    band_edge_report,
    classical_rank_one_s,
    factorization,
    qq_identity_residual,
    spectral_density,
    three_route,
    z_function,
)
from weylscatter.models import free_m_boundary


@pytest.fixture(scope="module")
def chain():
    return make_model("jacobi_halfline", alpha=0.7)


def test_classical_formula_matches_plane_wave_oracle():
    from weylscatter.oracles import chain_s
    for lam in (-1.5, 0.0, 1.2):
        assert abs(classical_rank_one_s(0.7, lam) - chain_s(0.7, lam)) < 1e-14


def test_factorization_residual(chain):
    assert factorization(chain, 1000).residual < 1e-10


def test_qq_identity(chain):
    assert qq_identity_residual(chain, 2000) < 1e-10


def test_density_reproduces_im_m(chain):
    d = spectral_density(chain, 0.5)
    assert d.im_identity_residual < 1e-8
    assert d.K[0, 0] == pytest.approx(free_m_boundary(0.5).imag / (np.pi * 1.25), rel=1e-8)
    assert spectral_density(chain, 2.5).K[0, 0] == 0.0
    with pytest.raises(ModelDomainError):
        spectral_density(chain, 2.0)


def test_three_routes_agree(chain):
    rep = three_route(chain, 0.5)
    assert rep["max_pairwise"] <= 1e-6
    assert rep["z_residual"] <= 1e-6
    assert abs(abs(rep["routes"]["stationary"]) - 1) < 1e-8


def test_alpha_zero_gives_identity():
    rep = three_route(make_model("jacobi_halfline", alpha=0.0), 0.3)
    for v in rep["routes"].values():
        assert abs(v - 1) < 1e-12


def test_band_edge_is_reported_not_raised(chain):
    rows = band_edge_report(chain)
    assert [r["lambda"] for r in rows] == [-1.99, 1.99]
    assert all(np.isfinite(r["z_residual"]) for r in rows)


def test_stationary_only_on_chain():
    with pytest.raises(ConfigurationError):
        z_function(make_model("delta_line"), 1.0)


def test_short_chain_detected_by_doubling(chain):
    # with eps down to ~7.5e-3 the far-end echo of 1000 sites is visible
    with pytest.raises(TruncationTooSmall):
        spectral_density(chain, 0.3, size=1000)
