import math
import os
import tempfile

import numpy as np
import pytest

import dsnls


def gaussian(spec, scale=1.0):
    return dsnls.sample_function(spec, lambda x, y: np.exp(-math.pi * (x**2 + y**2) / scale**2))


def test_grid_and_field_roundtrip():
    g = dsnls.GridSpec.cube(2, 32, 8.0)
    a = np.random.default_rng(0).standard_normal((32, 32)) + 0j
    f = dsnls.Field(g, a, 0.5)
    assert f.time == 0.5
    np.testing.assert_array_equal(f.to_numpy(), a)
    back = dsnls.inverse_transform(dsnls.forward_transform(f))
    assert np.max(np.abs(back.to_numpy() - a)) < 1e-12


def test_shape_mismatch_raises():
    g = dsnls.GridSpec.cube(2, 16, 4.0)
    with pytest.raises(dsnls.ArgumentError):
        dsnls.Field(g, np.zeros((16, 8)))


def test_gaussian_norm():
    # ||e^{-pi|x|^2}||_2^2 = 1/2 in two dimensions
    g = dsnls.GridSpec.cube(2, 64, 10.0)
    assert abs(dsnls.lp_norm(gaussian(g), 2.0) ** 2 - 0.5) < 1e-10


def test_free_evolution_matches_closed_form():
    g = dsnls.GridSpec.cube(2, 128, 20.0)
    t = 0.3
    u = dsnls.free_evolve(gaussian(g), t, 1.0).to_numpy()
    x = np.asarray(g.coordinates(0))
    X, Y = np.meshgrid(x, x, indexing="ij")
    z = 1 + 4j * math.pi * t
    # periodized: sum over images of the box
    exact = sum(np.exp(-math.pi * ((X + 20 * i) ** 2 + (Y + 20 * j) ** 2) / z) / z
                for i in range(-3, 4) for j in range(-3, 4))
    assert np.max(np.abs(u - exact)) < 1e-10


def test_apply_E_on_plane_wave():
    g = dsnls.GridSpec.cube(2, 32, 8.0)
    f = dsnls.sample_function(g, lambda x, y: np.cos(2 * math.pi * (x + y) / 8.0))
    e = dsnls.apply_E(f, dsnls.MultiplierParams(2.0, 2))
    # p = 1 / (1 + m) on the diagonal wavevector
    assert np.max(np.abs(e.to_numpy() - f.to_numpy() / 3.0)) < 1e-12


def test_split_step_conserves_mass():
    g = dsnls.GridSpec.cube(2, 64, 16.0)
    mp = dsnls.ModelParams(alpha=2.0, b=0.5)
    u = dsnls.split_step_evolve(gaussian(g), 0.25, 1 / 64, mp, store_every=4)
    assert len(u) == 5
    m0, m1 = dsnls.lp_norm(u[0], 2.0), dsnls.lp_norm(u[len(u) - 1], 2.0)
    assert abs(m1 - m0) < 1e-12 * m0


def test_picard_small_data():
    g = dsnls.GridSpec.cube(2, 32, 8.0)
    u0 = dsnls.Field(g, 0.1 * gaussian(g).to_numpy())
    sol, rep = dsnls.picard_solve(u0, dsnls.ModelParams(alpha=2.0), 0.125, 1 / 64, 50, 1e-10)
    assert rep.converged
    assert rep.contraction_ratio < 0.1
    assert sol.to_numpy().shape == (9, 32, 32)


def test_weak_norm_of_indicator():
    # indicator of a set of measure V has weak L^p norm V^{1/p}
    g = dsnls.GridSpec.cube(2, 32, 4.0)
    f = dsnls.sample_function(g, lambda x, y: (x**2 + y**2 < 1.0).astype(float))
    V = dsnls.distribution_function(f, 0.5)
    assert abs(dsnls.weak_lp_norm(f, 2.0) - math.sqrt(V)) < 1e-12


def test_cw_series_coefficients():
    s = dsnls.CwSeries(dsnls.SeriesParams(n=3, p=5 / 3))
    a, b = 5 / 6, 2 / 3
    assert abs(s.A(1) - a * (1 - b)) < 1e-14
    assert abs(s.B(0) - math.gamma(b) / math.gamma(a)) < 1e-14


def test_admissibility_and_window():
    ok, why = dsnls.is_admissible(dsnls.ExponentQuad(4, 4, 4, 4, 2))
    assert ok and why == []
    ok, why = dsnls.is_admissible(dsnls.ExponentQuad(2, 6, 2, 6, 3))
    assert not ok and why
    inside, lo, hi, p = dsnls.prop3_window(4.0, 2)
    assert inside and lo == 3.0 and hi == 6.0 and abs(p - 4 / 3) < 1e-14
    assert not dsnls.prop3_window(3.0, 2)[0]


def test_strichartz_sweep_is_seeded():
    q = dsnls.ExponentQuad(4, 4, 4, 4, 2)
    a = dsnls.strichartz_sweep(q, N=32, L=12.0, betas=[1.0, 2.0], seed=3)
    b = dsnls.strichartz_sweep(q, N=32, L=12.0, betas=[1.0, 2.0], seed=3)
    assert a[0] == b[0]
    assert a[0].splitlines()[0] == "q,r,qt,rt,beta,sample,ratio_G,ratio_TTstar"


def test_io_and_harness():
    cfg = dsnls.parse_config("[model]\nalpha = 2\n[grid]\nN = 32\nL = 8\n[time]\nT = 0.125\ndt = 0.015625\n")
    assert len(dsnls.config_hash(cfg)) == 16
    with tempfile.TemporaryDirectory() as d:
        code, artifacts, failed = dsnls.run_simulate(cfg, d)
        assert code == 0 and failed == []
        traj = os.path.join(d, "trajectory.dstrj")
        u = dsnls.read_trajectory(traj)
        assert len(u) >= 2
        csv = dsnls.run_norms(traj, 2.0)
        assert csv.startswith("norm_name,p,q,r,value")
        with pytest.raises(dsnls.IoError):
            dsnls.read_field(os.path.join(d, "missing.dsfld"))


def test_config_error_lists_problems():
    with pytest.raises(dsnls.ConfigError, match="alpha"):
        dsnls.parse_config("[model]\nalpha = 3.5\n")
