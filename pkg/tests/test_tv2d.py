from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nldiff.grid import Window, mirror_pad_2d
from nldiff.tv2d import abs_linear_integral, box_sum, cell_tv, cell_tv_field, tv_field
from oracles import quadrature_cell_tv


@pytest.mark.parametrize(
    "corners, expect",
    [((0, 1, 0, 1), 1.0), ((0, 0, 0, 0), 0.0), ((0, 1, 1, 0), 1.0)],
)
def test_cell_tv_examples(corners, expect):
    assert cell_tv(*corners) == pytest.approx(expect, abs=1e-15)


def test_abs_linear_integral_cases():
    assert abs_linear_integral(1.0, 1.0) == 1.0
    assert abs_linear_integral(1.0, -1.0) == 0.5
    assert abs_linear_integral(0.0, 0.0) == 0.0
    assert abs_linear_integral(2.0, 0.0) == 1.0


def test_cell_tv_vs_quadrature(rng):
    c = rng.randn(200, 4)
    exact = cell_tv(c[:, 0], c[:, 1], c[:, 2], c[:, 3])
    quad = np.array([quadrature_cell_tv(*row) for row in c])
    np.testing.assert_allclose(exact, quad, atol=1e-12)


def test_box_sum_vs_brute_force(rng):
    f = rng.rand(13, 17)
    ny, nx = 4, 6
    out = box_sum(f, ny, nx)
    brute = np.array([[f[r : r + ny, c : c + nx].sum() for c in range(17 - nx + 1)] for r in range(13 - ny + 1)])
    np.testing.assert_allclose(out, brute, atol=1e-12)


def test_tv_field_ramp_is_sixteen():
    a = np.tile(np.arange(12.0), (12, 1))
    D = tv_field(mirror_pad_2d(a, 2, 2), Window.square(2))
    np.testing.assert_allclose(D[:, 2:-2], 16.0, atol=1e-12)


def test_tv_field_constant_zero():
    D = tv_field(mirror_pad_2d(np.full((8, 9), 0.4), 2, 2), Window.square(2))
    assert D.shape == (8, 9)
    np.testing.assert_array_equal(D, 0)


def test_tv_field_rectangular_window_shape(rng):
    a = rng.rand(10, 14)
    w = Window(q1=3, q2=1)
    D = tv_field(mirror_pad_2d(a, 3, 1), w)
    assert D.shape == a.shape
    cells = cell_tv_field(mirror_pad_2d(a, 3, 1))
    assert D[4, 5] == pytest.approx(cells[4:6, 5:11].sum(), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=4, max_size=4), st.floats(-10, 10))
def test_cell_tv_symmetries(c, k):
    u00, u10, u01, u11 = c
    base = cell_tv(u00, u10, u01, u11)
    assert base >= 0
    # invariant under adding a constant, scales with |k|
    assert cell_tv(u00 + 3, u10 + 3, u01 + 3, u11 + 3) == pytest.approx(base, abs=1e-9)
    assert cell_tv(k * u00, k * u10, k * u01, k * u11) == pytest.approx(abs(k) * base, rel=1e-9, abs=1e-9)
    # transposing the cell swaps the two terms
    assert cell_tv(u00, u01, u10, u11) == pytest.approx(base, rel=1e-12, abs=1e-12)
