"""Metric jets against finite-difference oracles and hand-derived values."""

import numpy as np
import pytest

from chernkit import expr as ex
from chernkit.catalog import builtin, sample_points
from chernkit.dsl import parse_metric
from chernkit.jets import MetricError, factor_jet, metric_jet, metric_jets


def _fd_entry(spec, i_or_none, j_or_none, k, l, p, h=1e-5):
    """Central-difference d_i dbar_j g_{k lbar}(p); either index may be None."""

    def val(q):
        return complex(ex.evaluate(spec.entries[k][l], q))

    def d_holo(f, q, i):
        e = np.zeros(spec.n, dtype=complex)
        e[i] = 1
        fx = (f(q + h * e) - f(q - h * e)) / (2 * h)
        fy = (f(q + 1j * h * e) - f(q - 1j * h * e)) / (2 * h)
        return 0.5 * (fx - 1j * fy)

    def d_anti(f, q, j):
        e = np.zeros(spec.n, dtype=complex)
        e[j] = 1
        fx = (f(q + h * e) - f(q - h * e)) / (2 * h)
        fy = (f(q + 1j * h * e) - f(q - 1j * h * e)) / (2 * h)
        return 0.5 * (fx + 1j * fy)

    if i_or_none is None:
        return d_anti(val, p, j_or_none)
    if j_or_none is None:
        return d_holo(val, p, i_or_none)
    return d_anti(lambda q: d_holo(val, q, i_or_none), p, j_or_none)


def test_euclidean_jet_trivial():
    spec = builtin("euclidean-3").spec
    jet = metric_jet(spec, [0.3 + 1j, -0.2, 0.5j])
    assert np.array_equal(jet.g, np.eye(3))
    assert np.array_equal(jet.g_inv, np.eye(3))
    assert np.max(np.abs(jet.dg)) == 0
    assert np.max(np.abs(jet.ddbar_g)) == 0


def test_hopf_jet_hand_value():
    # d_1 (1/|z|^2) at (1, 0) is -zbar_1/|z|^4 = -1
    spec = builtin("hopf-2").spec
    jet = metric_jet(spec, [1.0, 0.0])
    assert np.max(np.abs(jet.g - np.eye(2))) < 1e-15
    assert abs(jet.dg[0, 0, 0] - (-1.0)) < 1e-15
    # cross-check the full first-derivative table by finite differences
    p = np.array([0.7 + 0.3j, -0.4 + 0.9j])
    jet = metric_jet(spec, p)
    for i in range(2):
        for k in range(2):
            for l in range(2):
                fd = _fd_entry(spec, i, None, k, l, p)
                assert abs(jet.dg[i, k, l] - fd) < 1e-8


def test_fubini_study_1_second_derivative_at_origin():
    # g = (1+|z|^2)^-2 for n=1; d dbar g at 0 equals -2 (hand expansion),
    # cross-checked against the finite-difference oracle
    spec = builtin("fubini-study-1").spec
    p = np.array([0.0])
    jet = metric_jet(spec, p)
    fd = _fd_entry(spec, 0, 0, 0, 0, p, h=1e-4)
    assert abs(jet.ddbar_g[0, 0, 0, 0] - fd) < 1e-6
    assert abs(jet.ddbar_g[0, 0, 0, 0] - (-2.0)) < 1e-12


def test_jet_tables_match_fd_on_catalog_samples():
    for name in ("fubini-study-2", "complex-hyperbolic-2", "hopf-2", "adm-product-surface"):
        entry = builtin(name)
        spec = entry.spec
        p = sample_points(entry, 1, 42)[0]
        jet = metric_jet(spec, p)
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    for l in range(2):
                        fd = _fd_entry(spec, i, j, k, l, p, h=1e-4)
                        assert abs(jet.ddbar_g[i, j, k, l] - fd) < 2e-5 * max(1, abs(fd)), name
                fd1 = _fd_entry(spec, i, None, j, k, p)
                assert abs(jet.dg[i, j, k] - fd1) < 1e-7 * max(1, abs(fd1)), name


def test_hermitianity_links_dg_and_dbar_g():
    for name in ("fubini-study-3", "hopf-3", "complex-hyperbolic-2"):
        entry = builtin(name)
        pts = sample_points(entry, 10, 3)
        for jet in metric_jets(entry.spec, pts):
            # dbar_g[j,k,l] = conj(dg[j,l,k])
            linked = np.conj(np.swapaxes(jet.dg, 1, 2))
            assert np.max(np.abs(jet.dbar_g - linked)) < 1e-12


def test_inverse_metric_identity():
    entry = builtin("complex-hyperbolic-3")
    pts = sample_points(entry, 10, 4)
    for jet in metric_jets(entry.spec, pts):
        assert np.max(np.abs(jet.g_inv @ jet.g - np.eye(3))) < 1e-12


def test_non_positive_definite_rejected():
    spec = parse_metric("dim 1\ng[1,1] = -1")
    with pytest.raises(MetricError, match="positive definite"):
        metric_jet(spec, [0.5])


def test_non_hermitian_rejected():
    spec = parse_metric("dim 2\ng[1,1]=1\ng[2,2]=1\ng[1,2]=z1")
    with pytest.raises(MetricError, match="Hermitian"):
        metric_jet(spec, [0.5, 0.5])


def test_batch_matches_single_point():
    entry = builtin("fubini-study-2")
    pts = sample_points(entry, 5, 17)
    batch = metric_jets(entry.spec, pts)
    for p, jet in zip(pts, batch):
        single = metric_jet(entry.spec, p)
        assert np.array_equal(single.g, jet.g)
        assert np.array_equal(single.ddbar_g, jet.ddbar_g)


def test_factor_jet_against_fd():
    from chernkit.dsl import parse_expression

    F = parse_expression("0.1*(z1*zbar1 - z2*zbar2) + 0.05*(z1*zbar2 + z2*zbar1)", 2)
    p = np.array([0.4 - 0.1j, 0.2 + 0.3j])
    fj = factor_jet(F, p, 2)
    assert abs(fj.value - complex(ex.evaluate(F, p)).real) < 1e-15
    h = 1e-5
    for k in range(2):
        e = np.zeros(2, dtype=complex)
        e[k] = 1
        fx = (complex(ex.evaluate(F, p + h * e)) - complex(ex.evaluate(F, p - h * e))) / (2 * h)
        fy = (complex(ex.evaluate(F, p + 1j * h * e)) - complex(ex.evaluate(F, p - 1j * h * e))) / (2 * h)
        assert abs(fj.grad[k] - 0.5 * (fx - 1j * fy)) < 1e-9
        assert abs(fj.grad_bar[k] - 0.5 * (fx + 1j * fy)) < 1e-9
    # mixed Hessian of this quadratic factor is constant: [[0.1, 0.05], [0.05, -0.1]]
    assert np.max(np.abs(fj.hess - np.array([[0.1, 0.05], [0.05, -0.1]]))) < 1e-14


def test_factor_jet_rejects_complex_factor():
    from chernkit.dsl import parse_expression

    F = parse_expression("z1", 1)
    with pytest.raises(ValueError, match="not real"):
        factor_jet(F, [0.3 + 0.2j], 1)
