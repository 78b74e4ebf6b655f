import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from reference import naive_convolve

from curveflow.core import (
    FormatError,
    IdentityOperator,
    ParameterError,
    Stencil3,
    StencilOperator,
    adjoint_mismatch,
    convolve3,
    map_row_blocks,
    merge_channels,
    per_channel,
    set_threads,
    split_channels,
    to_uint8,
)
from curveflow.kernels import BANK, kernel
from curveflow.synthetic import ramp


def test_constant_image_zero_sum_stencil_gives_zero():
    img = np.full((6, 7), 7.0)
    for s in BANK.all():
        assert np.array_equal(convolve3(img, s), np.zeros((6, 7)))


def test_impulse_h1_center():
    img = np.zeros((3, 3))
    img[1, 1] = 1.0
    assert convolve3(img, kernel("h1"))[1, 1] == -1.0


def test_ramp_h2_interior_zero():
    out = convolve3(ramp((5, 5)), kernel("h2"))
    assert np.abs(out[1:-1, 1:-1]).max() == 0.0


def test_matches_naive_loop_and_orientation(rng):
    s = Stencil3.from_array(rng.standard_normal((3, 3)))
    u = rng.uniform(0, 255, (9, 11))
    assert np.allclose(convolve3(u, s), naive_convolve(u, s.weights), rtol=0, atol=1e-10)
    # correlation, not convolution: a right-hand tap reads the right neighbour
    right = Stencil3(((0, 0, 0), (0, 0, 1), (0, 0, 0)))
    assert np.array_equal(convolve3(u, right)[:, :-1], u[:, 1:])


def test_linear_and_shift_invariant(rng):
    u, v = rng.uniform(0, 255, (2, 12, 12))
    for s in BANK.all():
        lhs = convolve3(2.5 * u - 0.5 * v, s)
        rhs = 2.5 * convolve3(u, s) - 0.5 * convolve3(v, s)
        assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-9)
        assert np.allclose(convolve3(u + 40.0, s), convolve3(u, s), rtol=0, atol=1e-10)


def test_thread_count_does_not_change_bits(rng):
    u = rng.uniform(0, 255, (37, 23))
    ref = convolve3(u, kernel("k4"), threads=1)
    for t in (2, 3, 8, 64):
        assert np.array_equal(convolve3(u, kernel("k4"), threads=t), ref)


def test_map_row_blocks_covers_rows_once():
    seen = []
    map_row_blocks(10, lambda a, b: seen.extend(range(a, b)), threads=4)
    assert sorted(seen) == list(range(10))


def test_set_threads_validation():
    with pytest.raises(ParameterError):
        set_threads(-1)
    set_threads(0)
    set_threads(1)


def test_stencil_validation():
    with pytest.raises(ParameterError):
        Stencil3(((1, 2), (3, 4)))
    with pytest.raises(ParameterError):
        Stencil3.from_array(np.zeros((2, 3)))
    assert kernel("k1").weights.flags.writeable is False


def test_split_merge_roundtrip(rng):
    px = np.array([[[10, 20, 30]]], dtype=np.uint8)
    ch = split_channels(px)
    assert [c.item() for c in ch] == [10, 20, 30]
    assert np.array_equal(merge_channels(ch), px)
    grey = rng.uniform(0, 255, (4, 4))
    assert len(split_channels(grey)) == 1
    rgb = rng.integers(0, 256, (2, 2, 3)).astype(float)
    assert np.array_equal(merge_channels(split_channels(rgb)), rgb)
    assert np.array_equal(per_channel(lambda c: c, rgb), rgb)


@pytest.mark.parametrize("shape", [(4, 4, 2), (4, 4, 4), (4,), (2, 2, 2, 3)])
def test_bad_channel_count(shape):
    with pytest.raises(FormatError):
        split_channels(np.zeros(shape))


def test_merge_bad_count():
    with pytest.raises(FormatError):
        merge_channels([np.zeros((2, 2))] * 2)


def test_to_uint8_clamps_and_rounds():
    assert to_uint8([[-3.0, 0.4, 0.6, 254.5, 300.0]]).tolist() == [[0, 0, 1, 254, 255]]


def test_identity_operator_copies():
    u = np.ones((3, 3))
    A = IdentityOperator()
    out = A.apply(u)
    out[0, 0] = 5
    assert u[0, 0] == 1
    assert np.array_equal(A.adjoint(u), u)


@pytest.mark.parametrize("shape", [(1, 1), (1, 5), (6, 1), (8, 8), (13, 7)])
def test_stencil_operator_adjoint(shape):
    for s in BANK.all():
        assert adjoint_mismatch(StencilOperator(s), shape, rng=0) < 1e-9
    assert adjoint_mismatch(IdentityOperator(), shape, rng=0) == 0.0


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 8), st.integers(1, 8)),
              elements=st.floats(-1e3, 1e3)))
def test_constant_shift_property(u):
    s = kernel("h5")
    assert np.allclose(convolve3(u + 17.0, s), convolve3(u, s), atol=1e-9)
