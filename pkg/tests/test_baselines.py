from __future__ import annotations

import numpy as np
import pytest

from nldiff.baselines import (
    default_lambda,
    gradient_magnitude,
    linear_diffusion,
    linear_step,
    perona_malik_step,
    pm_diffusivity,
    run_pm_1d,
    run_pm_2d,
)
from nldiff.grid import Image2D, Signal1D, SolverParams, Window
from nldiff.solver1d import run_1d
from nldiff.solver2d import run_2d


def test_default_lambda():
    assert default_lambda([0.0, 2.0]) == pytest.approx(0.2)
    assert default_lambda([1.0, 1.0]) == 0.1


def test_gradient_magnitude_1d_and_2d():
    np.testing.assert_allclose(gradient_magnitude(np.arange(6.0) * 2, h=2.0)[1:-1], 1.0)
    r, c = np.mgrid[0:5, 0:5].astype(float)
    np.testing.assert_allclose(gradient_magnitude(3 * c + 4 * r)[1:-1, 1:-1], 5.0)


def test_pm_diffusivity_range():
    g = pm_diffusivity(np.random.RandomState(0).rand(50), 0.1)
    assert np.all((g > 0) & (g <= 1))
    with pytest.raises(ValueError):
        pm_diffusivity(np.zeros(3), 0.0)


@pytest.mark.parametrize("shape", [(40,), (9, 10)])
def test_pm_constant_unchanged(shape):
    u = np.full(shape, 0.4)
    np.testing.assert_allclose(perona_malik_step(u, 0.1, 0.2), u, atol=1e-15)


@pytest.mark.parametrize("shape", [(40,), (9, 10)])
def test_pm_large_lambda_is_linear(shape):
    u = np.random.RandomState(1).rand(*shape)
    np.testing.assert_allclose(perona_malik_step(u, 1e9, 0.2), linear_step(u, 0.2), atol=1e-8)


def test_pm_shares_the_main_loop_1d():
    u = Signal1D(np.random.RandomState(2).rand(80), 0.5)
    params = SolverParams(tau=0.3, steps=5, sigma0=1.0)
    a = run_pm_1d(u, params, lam=0.05)
    b = run_1d(u, params, Window(l=1), g_fn=lambda v: pm_diffusivity(v, 0.05, 0.5))
    np.testing.assert_array_equal(a.final.values, b.final.values)


def test_pm_shares_the_main_loop_2d():
    u = np.random.RandomState(3).rand(12, 12)
    params = SolverParams(tau=0.2, steps=4)
    a = run_pm_2d(u, params, lam=0.1)
    b = run_2d(u, params, Window.square(1), g_fn=lambda v: pm_diffusivity(v, 0.1))
    np.testing.assert_array_equal(a.final.pixels, b.final.pixels)


def test_linear_diffusion_identity_and_types():
    u = np.random.RandomState(4).rand(30)
    np.testing.assert_array_equal(linear_diffusion(u, 0.0), u)
    s = linear_diffusion(Signal1D(u, 0.5), 1.0)
    assert isinstance(s, Signal1D) and s.h == 0.5
    assert isinstance(linear_diffusion(Image2D(np.zeros((4, 4))), 1.0), Image2D)
    with pytest.raises(ValueError):
        linear_diffusion(u, -1.0)


@pytest.mark.parametrize("shape", [(64,), (12, 17)])
def test_linear_diffusion_semigroup_mean_bounds(shape):
    u = np.random.RandomState(5).rand(*shape)
    a = linear_diffusion(linear_diffusion(u, 0.7), 1.8)
    np.testing.assert_allclose(a, linear_diffusion(u, 2.5), atol=1e-12)
    assert a.mean() == pytest.approx(u.mean(), abs=1e-14)
    assert a.max() <= u.max() and a.min() >= u.min()


def test_linear_diffusion_impulse_response():
    from scipy.special import ive

    n, t = 401, 50.0
    u = np.zeros(n)
    u[n // 2] = 1.0
    v = linear_diffusion(u, t)
    x = np.arange(n) - n // 2
    # the discrete heat kernel on the integers is exp(-2t) I_x(2t)
    np.testing.assert_allclose(v, ive(x, 2 * t), atol=1e-13)
    gauss = np.exp(-(x**2) / (4 * t)) / np.sqrt(4 * np.pi * t)
    assert np.abs(v - gauss).max() < 1e-2 * gauss.max()


def test_linear_diffusion_matches_small_implicit_steps():
    # the exact semigroup of the operator the solvers discretize
    u = np.random.RandomState(6).rand(20)
    v = u.copy()
    for _ in range(4000):
        v = linear_step(v, 1e-3)
    np.testing.assert_allclose(linear_diffusion(u, 4.0), v, atol=2e-4)
