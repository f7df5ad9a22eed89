import math
from dataclasses import replace

import numpy as np
import pytest
from scipy import integrate

from postsel import catalog, pointer, qcore, tsvf
from postsel.errors import GridTooSmall, PostSelectionImpossible
from postsel.pointer import PointerConfig, simulate_measurement
from postsel.qcore import make_state
from postsel.tsvf import TwoStateVector


def _single_particle():
    e = catalog.single_particle_pair()
    o = qcore.proj_a(0) * qcore.sx(1)
    return e.tsv, o, qcore.eigendecompose(o, 2)


def _quad_mean_x(tsv, spectral, g, delta):
    """Independent oracle: adaptive quadrature of the Gaussian superposition."""
    amps = [np.vdot(tsv.post.amplitudes, p @ tsv.pre.amplitudes) for p in spectral.projectors]

    def phi(x):
        return sum(c * (2 * np.pi * delta**2) ** -0.25 * np.exp(-((x - g * o) ** 2) / (4 * delta**2))
                   for c, o in zip(amps, spectral.eigenvalues))

    lim = 12 * delta + abs(g) * 2
    w = integrate.quad(lambda x: abs(phi(x)) ** 2, -lim, lim, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    m = integrate.quad(lambda x: x * abs(phi(x)) ** 2, -lim, lim, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    return m / w


def test_eigenstate_gives_single_gaussian():
    up = make_state(1, [(0, 1)])
    t = TwoStateVector(up, up)
    sp = qcore.eigendecompose(qcore.sz(0), 1)
    for g in (0.01, 0.5, 3.0):
        res = simulate_measurement(t, sp, PointerConfig(g=g))
        assert abs(res.mean_x - g) <= 1e-10 * (1 + g)
        assert res.var_x == pytest.approx(1.0, abs=1e-9)


def test_single_particle_weak_limit():
    t, _, sp = _single_particle()
    res = simulate_measurement(t, sp, PointerConfig(delta=1, g=0.01))
    assert abs(res.mean_x / 0.01 - (-1)) <= 5e-3
    assert res.mean_x / 0.01 == pytest.approx(_quad_mean_x(t, sp, 0.01, 1.0) / 0.01, abs=1e-8)


def test_hardy_strong_limit_matches_abl():
    e = catalog.hardy_pair()
    sp = qcore.eigendecompose(qcore.proj_a(0), 2)
    cfg = PointerConfig.covering(100.0, sp.eigenvalues)
    res = simulate_measurement(e.tsv, sp, cfg)
    np.testing.assert_allclose(res.captured_weights(), [0.0, 1.0], atol=1e-6)
    # a +-3 delta window around a single Gaussian holds erf(3/sqrt 2), not all of it
    assert res.weight_near(100.0, 3.0) == pytest.approx(math.erf(3 / math.sqrt(2)), abs=1e-8)


def test_wavefunction_is_the_closed_form():
    t, _, sp = _single_particle()
    cfg = PointerConfig(g=0.7)
    res = simulate_measurement(t, sp, cfg)
    amps = [np.vdot(t.post.amplitudes, p @ t.pre.amplitudes) for p in sp.projectors]
    x = cfg.grid
    ref = sum(c * (2 * np.pi) ** -0.25 * np.exp(-((x - 0.7 * o) ** 2) / 4) for c, o in zip(amps, sp.eigenvalues))
    np.testing.assert_allclose(res.wavefunction, ref, atol=1e-12)


@pytest.mark.parametrize("g", [0.01, 0.5, 2.0])
def test_total_weight_matches_analytic_overlaps(g):
    t, _, sp = _single_particle()
    res = simulate_measurement(t, sp, PointerConfig(g=g))
    amps = res.amplitudes
    a = g * np.array(sp.eigenvalues)
    w = sum(np.conj(amps[i]) * amps[j] * np.exp(-((a[i] - a[j]) ** 2) / 8)
            for i in range(len(a)) for j in range(len(a)))
    assert res.total_weight == pytest.approx(w.real, abs=1e-10)


def test_grid_doubling_converged():
    t, _, sp = _single_particle()
    cfg = PointerConfig(g=0.01)
    a = simulate_measurement(t, sp, cfg)
    b = simulate_measurement(t, sp, replace(cfg, grid_points=2 * cfg.grid_points))
    assert abs(a.mean_x - b.mean_x) < 1e-10


def test_strong_limit_total_variation():
    t, _, sp = _single_particle()
    cfg = PointerConfig.covering(100.0, sp.eigenvalues)
    res = simulate_measurement(t, sp, cfg)
    abl = tsvf.abl_probabilities(t, sp.projectors, sp.eigenvalues, validate=False)
    assert 0.5 * np.abs(res.captured_weights() - abl.probabilities).sum() <= 1e-6


def test_sweep_error_shrinks_monotonically():
    t, _, sp = _single_particle()
    pts = pointer.coupling_sweep(t, sp, [1e-1, 1e-2, 1e-3])
    errs = [abs(p.mean_x_over_g + 1) for p in pts]
    assert errs[0] > errs[1] > errs[2]
    for p in pts:
        assert p.mean_x_over_g == pytest.approx(_quad_mean_x(t, sp, p.ratio, 1.0) / p.ratio, abs=1e-7)
        assert abs(p.mean_p) <= 1e-15  # real weak value


def test_momentum_tracks_imaginary_weak_value():
    # pre |up_x>, post |up_y>: (sz)_w = (1+i)/(1-i) = i
    pre = qcore.StateVector(1, qcore.UP_X)
    post = qcore.StateVector(1, qcore.UP_Y)
    t = TwoStateVector(pre, post)
    o = qcore.sz(0)
    wv = tsvf.weak_value(t, o).value
    assert wv == pytest.approx(1j)
    sp = qcore.eigendecompose(o, 1)
    g, delta = 1e-3, 1.0
    res = simulate_measurement(t, sp, PointerConfig(g=g, delta=delta))
    assert res.mean_p == pytest.approx(2 * g * wv.imag / (4 * delta**2), rel=1e-4)
    # finite-difference oracle for <p> on the sampled grid
    x, phi = res.x, np.asarray(res.wavefunction)
    dphi = np.gradient(phi, x)
    p_fd = np.trapezoid(np.conj(phi) * (-1j) * dphi, x).real / np.trapezoid(np.abs(phi) ** 2, x)
    assert res.mean_p == pytest.approx(p_fd, rel=1e-3)


def test_anomaly_demo():
    h = catalog.hardy_pair()
    r = pointer.weak_value_anomaly_demo(h.tsv, qcore.proj_b(0) * qcore.proj_b(1), PointerConfig(g=0.001))
    assert (r.eigen_min, r.eigen_max) == pytest.approx((0, 1))
    assert r.anomalous
    assert r.pointer_mean_over_g == pytest.approx(-1, abs=5e-3)
    up = make_state(1, [(0, 1)])
    assert not pointer.weak_value_anomaly_demo(TwoStateVector(up, up), qcore.sz(0)).anomalous
    epr = pointer.weak_value_anomaly_demo(catalog.epr_pair().tsv, qcore.sz(0))
    assert epr.weak_value == pytest.approx(-1) and not epr.anomalous


def test_errors():
    t, _, sp = _single_particle()
    with pytest.raises(GridTooSmall):
        simulate_measurement(t, sp, PointerConfig(g=10.0, grid_halfwidth=40))
    with pytest.raises(ValueError):
        PointerConfig(grid_points=100)
    e = catalog.hardy_pair()
    bad = TwoStateVector(e.pre, make_state(2, [(0, 1)]))  # post |AA> is orthogonal to pre
    with pytest.raises(PostSelectionImpossible):
        simulate_measurement(bad, qcore.eigendecompose(qcore.proj_a(0), 2), PointerConfig())


def test_csv_export(tmp_path):
    t, _, sp = _single_particle()
    res = simulate_measurement(t, sp, PointerConfig(grid_points=256))
    path = tmp_path / "phi.csv"
    res.to_csv(path)
    lines = path.read_bytes().split(b"\n")
    assert lines[0] == b"x,re_phi,im_phi,abs2_phi"
    assert len(lines) == 256 + 2  # header + rows + trailing empty
    assert b"\r" not in path.read_bytes()
