import csv
import io
from fractions import Fraction as F

import numpy as np
import pytest

from curveflow.core import ParameterError
from curveflow.kernels import (
    BANK,
    HALF_LAPLACE,
    LAPLACE,
    NAMES,
    anisotropy,
    frequency_response,
    kernel,
    kernels_csv_rows,
    mirror_lr,
    mirror_tb,
    ring_anisotropy,
    rot90_cw,
    rotate_spectrum,
    spectral_magnitude,
)


def test_named_examples():
    assert kernel("k4").exact == ((F(1, 12), F(1, 6), F(1, 12)), (F(1, 6), -1, F(1, 6)), (F(1, 12), F(1, 6), F(1, 12)))
    assert kernel("h2").exact == ((F(1, 6), F(1, 3), F(1, 6)), (F(1, 6), -1, F(1, 6)), (0, 0, 0))
    assert kernel("H7").total == 0


def test_bank_order_and_names():
    assert [k.name for k in BANK.laplace] == ["k1", "k2", "k3", "k4"]
    assert [k.name for k in BANK.half_laplace] == [f"h{i}" for i in range(1, 9)]
    assert len(NAMES) == 12 and len(BANK.all()) == 12
    with pytest.raises(ParameterError):
        kernel("h9")


@pytest.mark.parametrize("k", LAPLACE + HALF_LAPLACE, ids=lambda k: k.name)
def test_zero_sum_centre(k):
    assert k.total == 0 and k.center == -1


@pytest.mark.parametrize("k", HALF_LAPLACE, ids=lambda k: k.name)
def test_half_window_support(k):
    off = [(r, c) for r in range(3) for c in range(3) if (r, c) != (1, 1) and k.exact[r][c] != 0]
    assert len(off) <= 6
    # the support lies in a closed half plane through the centre
    pts = np.array([(c - 1, r - 1) for r, c in off], dtype=float)
    normals = [np.array([np.cos(t), np.sin(t)]) for t in np.arange(8) * np.pi / 4]
    assert any(np.all(pts @ n >= -1e-12) for n in normals)


def test_mirror_and_rotation_relations():
    h = {k.name: k.exact for k in HALF_LAPLACE}
    assert mirror_lr(h["h1"]) == h["h3"]
    assert mirror_tb(h["h2"]) == h["h4"]
    assert rot90_cw(h["h5"]) == h["h6"]
    assert rot90_cw(h["h6"]) == h["h7"]
    assert rot90_cw(h["h7"]) == h["h8"]
    assert rot90_cw(h["h8"]) == h["h5"]


def test_spectrum_dc_and_validation():
    mag = spectral_magnitude(kernel("k1"), 64)
    assert mag.shape == (64, 64) and mag[0, 0] < 1e-15
    with pytest.raises(ParameterError):
        spectral_magnitude(kernel("k1"), 7)


def test_k4_spectrum_rotation_symmetric():
    mag = spectral_magnitude(kernel("k4"), 64)
    assert np.abs(rotate_spectrum(mag) - mag).max() <= 1e-12


def test_frequency_response_matches_fft():
    s = kernel("h5")
    mag = spectral_magnitude(s, 16)
    k = np.fft.fftfreq(16) * 2 * np.pi
    wx, wy = np.meshgrid(k, k)
    # zero-padding puts the stencil centre at (1, 1): a pure phase shift
    assert np.allclose(frequency_response(s, -wx, -wy), mag, atol=1e-12)


def test_anisotropy_ranks_k4_most_isotropic():
    scores = {k.name: anisotropy(k) for k in LAPLACE}
    assert min(scores, key=scores.get) == "k4"


def test_single_mid_ring_favours_k3():
    # documents why the score takes the worst ring: at radius pi/2 alone the
    # fourth-order-isotropic k3 beats k4
    scores = {k.name: ring_anisotropy(k, np.pi / 2) for k in LAPLACE}
    assert min(scores, key=scores.get) == "k3"


def test_csv_dump():
    rows = list(csv.reader(io.StringIO("\n".join(",".join(map(str, r)) for r in kernels_csv_rows()))))
    assert rows[0] == ["name", "row", "c0", "c1", "c2"]
    assert len(rows) == 1 + 12 * 3
    assert ["k4", "0", "1/12", "1/6", "1/12"] in rows
