import numpy as np
import numpy.testing as npt
import pytest

from stratumlab import (
    ChartConfig,
    chart_config_for,
    chart_forward,
    chart_inverse,
    contour_projector,
    contour_small_part,
    full_algebra,
    in_chart_domain,
    linalg,
    sample_block_unitary,
    sample_rank,
    sample_unitary,
    small_spectral_projector,
    spectral_gap,
    validate_density,
)
from stratumlab.errors import (
    AlphaTooLarge,
    EigenvalueOnContour,
    NotInChartDomain,
)

M3 = full_algebra(3)


def _diag_state(entries, alg=None):
    entries = np.asarray(entries, dtype=float)
    return validate_density(np.diag(entries).astype(complex), alg or full_algebra(entries.size))


def test_chart_config_defaults():
    f = _diag_state([0.5, 0.5, 0.0])
    assert spectral_gap(f) == pytest.approx(0.5)
    cfg = chart_config_for(f)
    assert cfg.gap_a == pytest.approx(0.5)
    assert cfg.epsilon == pytest.approx(0.125)
    assert cfg.contour_radius == pytest.approx(0.25)
    assert cfg.quadrature_nodes == 64


def test_chart_config_validation():
    with pytest.raises(ValueError):
        ChartConfig(gap_a=0.5, epsilon=0.6, contour_radius=0.25)
    with pytest.raises(ValueError):
        ChartConfig(gap_a=0.5, epsilon=0.1, contour_radius=0.05)
    with pytest.raises(ValueError):
        ChartConfig(gap_a=0.5, epsilon=0.1, contour_radius=0.45)
    with pytest.raises(ValueError):
        ChartConfig(gap_a=0.5, epsilon=0.125, contour_radius=0.25, quadrature_nodes=8)


def test_chart_worked_example():
    f = _diag_state([0.5, 0.5, 0.0])
    g = _diag_state([0.49, 0.49, 0.02])
    cfg = chart_config_for(f)
    assert in_chart_domain(f, g, cfg)
    p = chart_forward(f, g, cfg)
    assert p.alpha == pytest.approx(0.02, abs=1e-15)
    npt.assert_allclose(p.cone_part, [[0.02]], atol=1e-15)
    npt.assert_allclose(p.base_part, np.eye(2) / 2, atol=1e-15)
    back = chart_inverse(p)
    npt.assert_allclose(back.matrix, g.matrix, atol=1e-14)


def test_chart_center_maps_to_vertex():
    f = _diag_state([0.5, 0.5, 0.0])
    p = chart_forward(f, f)
    assert p.alpha == 0.0
    back = chart_inverse(p)
    assert linalg.hs_norm(back.matrix - f.matrix) <= 1e-12


def test_chart_domain_rejections():
    f = _diag_state([0.5, 0.5, 0.0])
    cfg = chart_config_for(f)
    # 0.3 and 0.2 land inside the forbidden band (0.125, 0.375)
    g_band = _diag_state([0.5, 0.3, 0.2])
    assert not in_chart_domain(f, g_band, cfg)
    with pytest.raises(NotInChartDomain):
        chart_forward(f, g_band, cfg)
    # spectrum splits, but with the wrong number of small eigenvalues
    g_split = _diag_state([0.9, 0.05, 0.05])
    assert in_chart_domain(f, g_split, cfg)
    with pytest.raises(NotInChartDomain):
        chart_forward(f, g_split, cfg)


def test_chart_alpha_budget():
    f = _diag_state([0.7, 0.3, 0.0, 0.0, 0.0, 0.0], full_algebra(6))
    cfg = ChartConfig(gap_a=0.3, epsilon=0.14, contour_radius=0.15)
    g = _diag_state([0.2325, 0.2325, 0.135, 0.135, 0.135, 0.13], full_algebra(6))
    assert in_chart_domain(f, g, cfg)
    with pytest.raises(AlphaTooLarge) as err:
        chart_forward(f, g, cfg)
    assert err.value.alpha == pytest.approx(0.535)


def test_chart_roundtrip_off_diagonal():
    rng = np.random.default_rng(40)
    worst = 0.0
    for s in range(25):
        f = sample_rank(4, 2, seed=41, index=s)
        cfg = chart_config_for(f)
        # spectral perturbation: shrink the small part well under epsilon
        w, v = linalg.eigh_fixed(f.matrix)
        small = rng.uniform(0, 0.2 * cfg.epsilon, size=2)
        large = w[2:] * (1 - small.sum())
        g = validate_density(
            (v * np.concatenate([small, large])) @ v.conj().T, f.alg
        )
        p = chart_forward(f, g, cfg)
        back = chart_inverse(p)
        worst = max(worst, linalg.hs_norm(back.matrix - g.matrix))
    assert worst <= 1e-10


def test_chart_equivariance_under_unitaries():
    f = _diag_state([0.5, 0.5, 0.0])
    g = _diag_state([0.49, 0.48, 0.03])
    cfg = chart_config_for(f)
    u = sample_unitary(3, seed=42)
    fu = validate_density(u @ f.matrix @ u.conj().T, M3)
    gu = validate_density(u @ g.matrix @ u.conj().T, M3)
    # the chart data transforms covariantly: alpha is invariant, the
    # round-trip stays exact
    p = chart_forward(f, g, cfg)
    pu = chart_forward(fu, gu, chart_config_for(fu))
    assert pu.alpha == pytest.approx(p.alpha, abs=1e-13)
    npt.assert_allclose(chart_inverse(pu).matrix, gu.matrix, atol=1e-12)


def test_contour_matches_eigen_route():
    rng = np.random.default_rng(43)
    for n in (2, 3, 5):
        w = np.concatenate([rng.uniform(0, 0.1, size=1), rng.uniform(0.4, 1.0, size=n - 1)])
        u = sample_unitary(n, seed=44, index=n)
        g = (u * w) @ u.conj().T
        p_eig = small_spectral_projector(g, 0.25)
        p_q = contour_projector(g, 0.25, nodes=64)
        assert linalg.hs_norm(p_q - p_eig) <= 1e-10
        s_q = contour_small_part(g, 0.25, nodes=64)
        small_v = linalg.eigh_fixed(g)[1][:, :1]
        s_eig = (small_v * w[:1]) @ small_v.conj().T
        assert linalg.hs_norm(s_q - s_eig) <= 1e-10


def test_contour_projector_worked_example():
    g = np.diag([0.5, 0.5, 0.0]).astype(complex)
    p = contour_projector(g, 0.25, nodes=64)
    npt.assert_allclose(p, np.diag([0.0, 0.0, 1.0]), atol=1e-10)


def test_contour_scalar_error_is_geometric():
    # trapezoid quadrature of the resolvent has an exact geometric error for
    # a 1x1 matrix: w^N / (1 - w^N) with w the eigenvalue/radius ratio
    r, nodes = 0.25, 16
    lam_in = 0.1
    p = contour_projector(np.array([[lam_in]]), r, nodes=nodes)
    w = (lam_in / r) ** nodes
    npt.assert_allclose(p[0, 0] - 1.0, w / (1.0 - w), rtol=1e-9)
    lam_out = 0.6
    p = contour_projector(np.array([[lam_out]]), r, nodes=nodes)
    v = (r / lam_out) ** nodes
    npt.assert_allclose(p[0, 0], -v / (1.0 - v), rtol=1e-9)


def test_contour_node_halving_gains_accuracy():
    rng = np.random.default_rng(45)
    ratios = []
    for s in range(20):
        w = np.concatenate([rng.uniform(0, 0.15, size=2), rng.uniform(0.4, 1.0, size=2)])
        u = sample_unitary(4, seed=46, index=s)
        g = (u * w) @ u.conj().T
        p_eig = small_spectral_projector(g, 0.25)
        e32 = linalg.hs_norm(contour_projector(g, 0.25, nodes=32) - p_eig)
        e64 = linalg.hs_norm(contour_projector(g, 0.25, nodes=64) - p_eig)
        ratios.append(e32 / max(e64, 1e-16))
    assert np.median(ratios) >= 10.0


def test_contour_guard():
    g = np.diag([0.25, 0.9]).astype(complex)
    with pytest.raises(EigenvalueOnContour):
        contour_projector(g, 0.25, nodes=32)
    with pytest.raises(EigenvalueOnContour):
        small_spectral_projector(np.diag([0.2501, 0.9]).astype(complex), 0.25)
    with pytest.raises(ValueError):
        contour_projector(np.diag([0.1, 0.9]).astype(complex), 0.25, nodes=2)


def test_chart_respects_block_structure():
    from stratumlab import AlgebraDescriptor

    alg = AlgebraDescriptor((1, 2))
    f = validate_density(np.diag([0.5, 0.5, 0.0]).astype(complex), alg)
    g = validate_density(np.diag([0.49, 0.49, 0.02]).astype(complex), alg)
    u = sample_block_unitary(alg, seed=47)
    gu = validate_density(u @ g.matrix @ u.conj().T, alg)
    p = chart_forward(f, gu, chart_config_for(f))
    back = chart_inverse(p)
    npt.assert_allclose(back.matrix, gu.matrix, atol=1e-12)
    assert linalg.off_block_magnitude(back.matrix, alg.block_sizes) <= 1e-14
