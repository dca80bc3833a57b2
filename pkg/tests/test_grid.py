from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nldiff.errors import FormatError
from nldiff.grid import (
    EdgeStopSpec,
    Image2D,
    Signal1D,
    SolverParams,
    Window,
    default_eps_tv,
    mirror_pad_1d,
    mirror_pad_2d,
    normalize,
    quantize,
)


def test_normalize_endpoints():
    np.testing.assert_array_equal(normalize([0, 255], 255), [0.0, 1.0])
    assert normalize([128], 255)[0] == 128 / 255


def test_normalize_rejects_out_of_range():
    with pytest.raises(FormatError):
        normalize([0, 256], 255)
    with pytest.raises(FormatError):
        normalize([-1], 255)


@pytest.mark.parametrize("maxval", [255, 1023, 65535])
def test_quantize_inverts_normalize(rng, maxval):
    for _ in range(1000 if maxval == 255 else 50):
        raw = rng.randint(0, maxval + 1, size=(7, 5))
        np.testing.assert_array_equal(quantize(normalize(raw, maxval), maxval), raw)


def test_quantize_dtype():
    assert quantize([0.5], 255).dtype == np.uint8
    assert quantize([0.5], 65535).dtype == np.uint16


def test_mirror_pad_1d_example():
    np.testing.assert_array_equal(mirror_pad_1d([1, 2, 3], 1), [2, 1, 2, 3, 2])


def test_mirror_pad_1d_margin_too_large():
    with pytest.raises(ValueError):
        mirror_pad_1d([5.0], 1)
    with pytest.raises(ValueError):
        mirror_pad_1d([1.0, 2.0, 3.0], 3)


def test_mirror_pad_2d_small():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    expect = np.array(
        [
            [4, 3, 4, 3],
            [2, 1, 2, 1],
            [4, 3, 4, 3],
            [2, 1, 2, 1],
        ],
        dtype=float,
    )
    np.testing.assert_array_equal(mirror_pad_2d(a, 1, 1), expect)


def test_mirror_pad_2d_asymmetric_margins():
    a = np.arange(20.0).reshape(4, 5)
    p = mirror_pad_2d(a, 2, 1)
    assert p.shape == (6, 9)
    # q1 pads columns, q2 rows
    np.testing.assert_array_equal(p[1:-1, 2:-2], a)
    with pytest.raises(ValueError):
        mirror_pad_2d(a, 5, 1)


def test_mirror_pad_2d_crop_roundtrip(rng):
    for _ in range(100):
        h, w = rng.randint(3, 12, size=2)
        a = rng.rand(h, w)
        q1, q2 = rng.randint(0, w), rng.randint(0, h)
        p = mirror_pad_2d(a, q1, q2)
        np.testing.assert_array_equal(p[q2 : q2 + h, q1 : q1 + w], a)


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5), st.integers(1, 9), st.integers(10, 40))
def test_padding_keeps_constants(c, m, n):
    np.testing.assert_array_equal(mirror_pad_1d(np.full(n, c), m), np.full(n + 2 * m, c))
    p = mirror_pad_2d(np.full((n, n), c), m, m)
    assert np.all(p == c)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(2, 30), elements=st.floats(-1e3, 1e3)))
def test_pad_1d_boundary_difference_vanishes(u):
    p = mirror_pad_1d(u, 1)
    # central difference at either end is zero: the discrete Neumann condition
    assert p[2] - p[0] == 0
    assert p[-1] - p[-3] == 0


def test_value_types_validate():
    with pytest.raises(ValueError):
        Signal1D([1.0])
    with pytest.raises(ValueError):
        Signal1D([1.0, 2.0], h=0)
    with pytest.raises(ValueError):
        Signal1D([1.0, np.nan])
    with pytest.raises(ValueError):
        Image2D(np.zeros(3))
    s = Signal1D([1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 3.0
    img = Image2D(np.zeros((2, 3)))
    assert (img.width, img.height) == (3, 2)


def test_window_checks():
    with pytest.raises(ValueError):
        Window()
    with pytest.raises(ValueError):
        Window(l=0)
    with pytest.raises(ValueError):
        Window(l=10).check_1d(10)
    with pytest.raises(ValueError):
        Window.square(2).check_2d(4, 10)
    Window.square(2).check_2d(5, 5)


def test_param_validation():
    with pytest.raises(ValueError):
        EdgeStopSpec(form="cubic")
    with pytest.raises(ValueError):
        EdgeStopSpec(eps_g=0.0)
    with pytest.raises(ValueError):
        SolverParams(tau=0.0)
    with pytest.raises(ValueError):
        SolverParams(eps_tv=-1.0)


def test_default_eps_tv():
    assert default_eps_tv([0.0, 2.0]) == pytest.approx(2e-4)
    assert default_eps_tv([3.0, 3.0]) == 1e-4
    assert SolverParams(eps_tv=0.5).resolve_eps_tv([0, 9]) == 0.5
