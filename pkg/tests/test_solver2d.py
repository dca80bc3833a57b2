from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nldiff.grid import SolverParams, Window, mirror_pad_2d
from nldiff.ratio2d import RatioField2D
from nldiff.solver2d import (
    divergence_term,
    euler_step_2d,
    gaussian_presmooth_2d,
    gradient_2d,
    gradient_field,
    max_stable_tau,
    run_2d,
)


def test_gradient_examples():
    r, c = np.mgrid[0:6, 0:7].astype(float)
    assert gradient_2d(np.full((5, 5), 2.0), (2, 2)) == (0.0, 0.0)
    assert gradient_2d(c, (2, 3)) == (1.0, 0.0)
    # u = x y at x = 2, y = 3 (x is the column)
    assert gradient_2d(c * r, (3, 2)) == (3.0, 2.0)
    with pytest.raises(IndexError):
        gradient_2d(c, (0, 3))


def test_gradient_field_neumann_border():
    a = np.random.RandomState(0).rand(5, 6)
    gx, gy = gradient_field(a)
    assert np.all(gx[:, 0] == 0) and np.all(gx[:, -1] == 0)
    assert np.all(gy[0] == 0) and np.all(gy[-1] == 0)
    assert gx[2, 3] == gradient_2d(mirror_pad_2d(a, 1, 1), (3, 4))[0]


@pytest.mark.parametrize("stencil", ["compact", "central"])
def test_constant_image_unchanged(stencil):
    u = np.full((8, 9), 0.3)
    g = np.random.RandomState(1).rand(8, 9)
    np.testing.assert_allclose(euler_step_2d(u, g, max_stable_tau(g, stencil), stencil), u, atol=1e-16)


def test_compact_stencil_is_five_point_laplacian():
    u = np.random.RandomState(2).rand(6, 7)
    p = np.pad(u, 1, mode="edge")
    lap = p[1:-1, 2:] + p[1:-1, :-2] + p[2:, 1:-1] + p[:-2, 1:-1] - 4 * u
    np.testing.assert_allclose(divergence_term(u, np.ones_like(u)), lap, atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 20), st.integers(3, 20), st.integers(0, 2**31 - 1))
def test_compact_step_conserves_mean_and_bounds(h, w, seed):
    r = np.random.RandomState(seed)
    u, g = r.rand(h, w), 0.05 + 0.95 * r.rand(h, w)
    v = euler_step_2d(u, g, max_stable_tau(g))
    assert abs(v.mean() - u.mean()) <= 1e-15 * 8
    assert v.max() <= u.max() + 1e-15 and v.min() >= u.min() - 1e-15


def test_checkerboard_decays():
    r, c = np.mgrid[0:10, 0:10]
    u = ((r + c) % 2).astype(float)
    v = euler_step_2d(u, np.ones_like(u), 0.2)
    assert v.std() < 0.5 * u.std()


def test_stability_guard():
    u = np.zeros((5, 5))
    g = np.ones((5, 5))
    assert max_stable_tau(g) == 0.25 and max_stable_tau(g, "central") == 1.0
    with pytest.raises(ValueError):
        euler_step_2d(u, g, 0.3)
    with pytest.raises(ValueError):
        euler_step_2d(u, g, 0.0)
    with pytest.raises(ValueError):
        divergence_term(u, g, "upwind")
    with pytest.raises(ValueError):
        euler_step_2d(u, np.ones((4, 5)), 0.1)


def test_presmooth_2d():
    u = np.random.RandomState(3).rand(9, 11)
    np.testing.assert_array_equal(gaussian_presmooth_2d(u, 0.0), u)
    s = gaussian_presmooth_2d(u, 1.0)
    assert s.std() < u.std()
    np.testing.assert_allclose(gaussian_presmooth_2d(np.full((6, 6), 2.0), 1.5), 2.0, atol=1e-15)


@pytest.fixture(scope="module")
def small_engine():
    return RatioField2D.build(Window.square(2), M=1, L=96)


def test_run_zero_steps(small_engine):
    u = np.random.RandomState(4).rand(12, 12)
    r = run_2d(u, SolverParams(steps=0, sigma0=0.7), Window.square(2), engine=small_engine)
    np.testing.assert_array_equal(r.final.pixels, gaussian_presmooth_2d(u, 0.7))


def test_run_smooths_flat_noise_and_keeps_mean(small_engine):
    rs = np.random.RandomState(5)
    clean = np.zeros((24, 24))
    clean[:, 12:] = 1.0
    u = clean + 0.05 * rs.randn(24, 24)
    r = run_2d(u, SolverParams(tau=0.2, steps=30, sigma0=0.5), Window.square(2), stride=10, engine=small_engine)
    flat = (slice(3, 21), slice(2, 8))
    var = [np.var(s[flat]) for _, s in r.snapshots]
    assert all(b < a for a, b in zip(var, var[1:]))
    assert abs(r.history[-1][1] - r.history[0][1]) < 1e-12
    # the step survives
    assert r.final.pixels[:, 14:].mean() - r.final.pixels[:, :10].mean() > 0.8
    assert r.pixels == 30 * 24 * 24


def test_refresh_every_reuses_field():
    calls = []

    def g_fn(v):
        calls.append(1)
        return np.ones_like(v)

    run_2d(np.zeros((8, 8)), SolverParams(tau=0.2, steps=7), Window.square(1), refresh_every=3, g_fn=g_fn)
    assert len(calls) == 3
    with pytest.raises(ValueError):
        run_2d(np.zeros((8, 8)), SolverParams(steps=1), Window.square(1), refresh_every=0, g_fn=g_fn)
