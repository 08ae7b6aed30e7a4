"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines are repeated in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from weylscatter import MODEL_IDS, make_model
from weylscatter.engine import PointFailure, model_smatrix, smatrix, smatrix_sweep
from weylscatter.errors import ExclusionSetHit
from weylscatter.krein import ChainSystem, fd_convergence, gamma_field_audit, krein_residual
from weylscatter.oracles import analytic_oracle_smatrix, compare_with_oracle
from weylscatter.schatten import sv_decay
from weylscatter.stationary import three_route, z_function
from weylscatter.weyl import boundary_limit, boundary_limit_from_matrix

RESULTS = []
STATIONARY_LAMBDAS = (-1.5, -0.5, 0.0, 0.5, 1.5)


def report(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _modes_for(model):
    return 16 if model.kind == "sphere_delta_shell" else 32


def test_criterion_1_unitarity_sweeps():
    t0 = time.perf_counter()
    worst, excluded, other = 0.0, 0, []
    for mid in MODEL_IDS:
        m = make_model(mid)
        trunc = m.truncation(_modes_for(m))
        lo, hi = m.sweep_band()
        for r in smatrix_sweep(m, np.linspace(lo, hi, 100), trunc):
            if isinstance(r, PointFailure):
                if r.error == ExclusionSetHit.__name__:
                    excluded += 1
                else:
                    other.append((mid, r.lam, r.error))
            else:
                worst = max(worst, r.unitarity_defect)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-8 and not other and dt < 60
    report(1, ok, f"{len(MODEL_IDS)} models x 100 points, max unitarity defect {worst:.2e} "
                  f"(<= 1e-8), {excluded} excluded, {len(other)} failures, {dt:.1f} s (< 60 s)")


ORACLE_CASES = [
    ("delta_line", 0.5), ("delta_line", 2.0), ("delta_line", -1.0),
    ("disk_neumann_robin", 1.0), ("disk_neumann_robin", -0.5),
    ("disk_dirichlet_robin", 1.0), ("disk_dirichlet_robin", -0.5),
    ("circle_delta_shell", 1.0), ("circle_delta_shell", 3.0),
    ("sphere_delta_shell", 1.0), ("sphere_delta_shell", 3.0),
]


def test_criterion_2_engine_vs_oracle():
    worst, where = 0.0, None
    for mid, alpha in ORACLE_CASES:
        params = {"alpha": alpha} if mid == "delta_line" else {"alpha": alpha, "radius": 1.0}
        m = make_model(mid, **params)
        trunc = m.truncation(16)
        lo, hi = m.sweep_band()
        for lam in np.linspace(lo, hi, 25):
            dev = compare_with_oracle(model_smatrix(m, lam, trunc), analytic_oracle_smatrix(m, lam, trunc))
            if dev > worst:
                worst, where = dev, (mid, alpha, float(lam))
    report(2, worst <= 1e-8, f"{len(ORACLE_CASES)} model/alpha cases x 25 points, "
                             f"max entrywise deviation {worst:.2e} (<= 1e-8) at {where}")


@pytest.fixture(scope="module")
def chain():
    return make_model("jacobi_halfline", alpha=0.7)


def test_criterion_3_three_routes(chain):
    t0 = time.perf_counter()
    worst = max(three_route(chain, lam, size=4000)["max_pairwise"] for lam in STATIONARY_LAMBDAS)
    dt = time.perf_counter() - t0
    report(3, worst <= 1e-6 and dt < 120,
           f"Weyl / stationary / rank-one routes at {STATIONARY_LAMBDAS}, max pairwise "
           f"{worst:.2e} (<= 1e-6), {dt:.1f} s (< 120 s)")


def test_criterion_4_z_identity(chain):
    worst = max(z_function(chain, lam, size=4000).residual for lam in STATIONARY_LAMBDAS)
    report(4, worst <= 1e-6, f"Z(lambda) vs -M(lambda+i0)^-1/(1+lambda^2), max residual {worst:.2e} (<= 1e-6)")


def test_criterion_5_krein_residuals(chain):
    chain_res = krein_residual(chain, 0.5 + 0.5j, system=ChainSystem(chain, 2000), n_probes=16)
    conv = fd_convergence(make_model("delta_line", alpha=1.0), 0.5 + 0.5j, steps=(0.02, 0.01))
    order = conv.observed_order
    ok = chain_res <= 1e-8 and conv.residuals[-1] <= 1e-4 and 1.8 <= order <= 2.2
    report(5, ok, f"chain residual {chain_res:.2e} (<= 1e-8); finite-difference line residual "
                  f"{conv.residuals[-1]:.2e} (<= 1e-4), observed order {order:.3f} (~2)")


def test_criterion_6_gamma_identities(chain):
    zs = [0.5 + 0.5j, -1.2 + 0.3j, 1.7 + 1.5j]
    xis = [0.1 + 0.2j, -0.4 + 1.0j, 2.5 + 0.7j]
    audit = gamma_field_audit(chain, zs, xis, size=2000)
    worst = {k: audit.max_residual(k) for k in ("gutgut", "imm", "gform1")}
    ok = max(worst.values()) <= 1e-8
    report(6, ok, "3x3 (z, xi) grid, max residuals " +
           ", ".join(f"{k} {v:.2e}" for k, v in worst.items()) + " (<= 1e-8)")


def test_criterion_7_schatten_bounds():
    cases = [("circle_dirichlet_free", "im_weyl"),
             ("disk_neumann_robin", "krein_difference"),
             ("sphere_delta_shell", "krein_difference")]
    reps = [sv_decay(entity, make_model(mid), 1j, 128) for mid, entity in cases]
    ok = all(r.passed for r in reps)
    detail = "; ".join(f"{r.model} {r.entity} O(j^-{r.bound_exponent:g}) "
                       f"{'PASS' if r.passed else 'FAIL'} (fit {r.fitted_exponent:.2f})" for r in reps)
    report(7, ok, detail + ", 128 modes")


def test_criterion_8_invariances():
    m = make_model("disk_dirichlet_robin", alpha=1.0)
    trunc = m.truncation(8)
    bl = boundary_limit(m, 2.0, trunc)
    base = smatrix(bl).mode_space()
    scale = max(np.max(np.abs(smatrix(boundary_limit_from_matrix(2.0, c * bl.M_plus)).mode_space() - base))
                for c in (0.1, 7.0))
    devs = []
    for a in (1e-2, 1e-4, 1e-6):
        ma = make_model("disk_neumann_robin", alpha=a)
        devs.append(float(np.max(np.abs(model_smatrix(ma, 2.0, ma.truncation(8)).mode_space() - np.eye(17)))))
    monotone = devs[0] > devs[1] > devs[2]
    mr = make_model("disk_neumann_robin", radius=1.0, alpha=1.0)
    tr = mr.truncation(8)
    equiv = float(np.max(np.abs(model_smatrix(mr, 1.0, tr).mode_space() - smatrix(boundary_limit(mr, 1.0, tr)).mode_space())))
    ok = scale <= 1e-10 and monotone and equiv <= 1e-10
    report(8, ok, f"scaling {scale:.2e} (<= 1e-10); |S-I| at alpha 1e-2/1e-4/1e-6 = "
                  f"{devs[0]:.1e}/{devs[1]:.1e}/{devs[2]:.1e} (monotone {monotone}); "
                  f"Robin vs generic {equiv:.2e} (<= 1e-10)")


def test_criterion_9_determinism():
    args = ["smatrix", "--model", "disk-neumann-robin", "--radius", "1.0", "--alpha", "1.0",
            "--lambda", "0.1:10:100", "--modes", "32"]
    with tempfile.TemporaryDirectory() as tmp:
        outs = []
        for name in ("a", "b"):
            out = Path(tmp) / name
            proc = subprocess.run([sys.executable, "-m", "weylscatter", *args, "--out", str(out)],
                                  capture_output=True)
            assert proc.returncode == 0, proc.stderr
            outs.append((out / "smatrix.csv").read_bytes())
        same = outs[0] == outs[1]
        report(9, same, f"two CLI runs, smatrix.csv {len(outs[0])} bytes, byte-identical {same}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
