import numpy as np
import pytest

from curveflow.imageio import save_image
from curveflow.stats import (
    SCATTER_COLUMNS,
    FitError,
    HistogramStats,
    area_grad_scatter,
    corpus_stats,
    fit_sparsity_model,
    write_stats,
)


def test_histogram_invariants(rng):
    h = HistogramStats.from_values(rng.normal(0, 40, 10_000))
    assert h.counts.sum() == h.total == 10_000
    assert len(h.bin_edges) == 513 and h.bin_edges[0] == -256 and h.bin_edges[-1] == 256
    cdf = h.abs_cdf()
    assert np.all(np.diff(cdf) >= 0) and cdf[-1] == pytest.approx(1.0)


def test_histogram_binning_edges():
    h = HistogramStats.from_values([0.0, 0.5, -0.5, 256.0, -300.0, 1.0])
    assert h.counts[256] == 2  # [0, 1)
    assert h.counts[255] == 1  # [-1, 0)
    assert h.counts[-1] == 1 and h.counts[0] == 1  # clipped into the end bins
    assert h.abs_counts[0] == 1 and h.abs_counts[1] == 3


def test_merge_is_order_free(rng):
    parts = [rng.normal(0, 20, 500) for _ in range(4)]
    a = HistogramStats.empty()
    for p in parts:
        a = a.merge(HistogramStats.from_values(p))
    b = HistogramStats.from_values(np.concatenate(parts[::-1]))
    assert np.array_equal(a.counts, b.counts) and np.array_equal(a.abs_counts, b.abs_counts)


def test_constant_corpus_single_spike(tmp_path):
    for i, v in enumerate((0, 90, 255)):
        save_image(tmp_path / f"c{i}.png", np.full((16, 20), float(v)))
    grad, wmc = corpus_stats(tmp_path)
    for h in (grad, wmc):
        assert np.count_nonzero(h.counts) == 1 and h.counts[256] == h.total
    assert grad.total == 3 * (16 * 19 + 15 * 20)
    assert wmc.total == 3 * 16 * 20
    s = area_grad_scatter(tmp_path)
    assert not s[:, :3].any()


def test_missing_or_empty_dir(tmp_path):
    with pytest.raises(FileNotFoundError):
        corpus_stats(tmp_path / "nope")
    with pytest.raises(FileNotFoundError):
        corpus_stats(tmp_path)


def test_fit_recovers_coefficient():
    h = HistogramStats.empty()
    x = h.centers
    p = np.exp(-11 / 8 * np.sqrt(np.abs(x)))
    h.counts[:] = np.round(1e15 * p / p.sum()).astype(np.int64)
    fit = fit_sparsity_model(h)
    assert fit.coef == pytest.approx(1.375, abs=1e-3) and fit.r2 > 0.9999
    # empty bins are skipped rather than producing log(0)
    h.counts[:200] = 0
    assert np.isfinite(fit_sparsity_model(h).coef)


def test_fit_degenerate():
    with pytest.raises(FitError):
        fit_sparsity_model(HistogramStats.from_values(np.zeros(10)))


def test_natural_corpus_fit_and_scatter(natural_corpus, tmp_path):
    grad, wmc = corpus_stats(natural_corpus)
    cg, cw = grad.abs_cdf(), wmc.abs_cdf()
    assert cw[30] > cg[30]
    fit = fit_sparsity_model(wmc)
    assert 0.8 <= fit.coef <= 2.0
    out = tmp_path / "s.csv"
    s = area_grad_scatter(natural_corpus, out)
    assert len(s) == 100_000
    m = s[:, SCATTER_COLUMNS.index("grad_norm")] >= 10
    r = np.corrcoef(s[m, SCATTER_COLUMNS.index("area_flow")], s[m, SCATTER_COLUMNS.index("wmc_fd")])[0, 1]
    assert r >= 0.99
    out2 = tmp_path / "s2.csv"
    area_grad_scatter(natural_corpus, out2)
    assert out.read_bytes() == out2.read_bytes()
    assert out.read_text().splitlines()[0] == ",".join(SCATTER_COLUMNS)


def test_write_stats(tmp_path, rng):
    g = HistogramStats.from_values(rng.normal(0, 30, 1000))
    w = HistogramStats.from_values(rng.normal(0, 5, 1000))
    paths = write_stats(str(tmp_path / "x_"), g, w, fit_sparsity_model(w))
    assert [p.name for p in paths] == ["x_hist.csv", "x_cdf.csv", "x_fit.csv"]
    assert len(paths[0].read_text().splitlines()) == 513
    assert len(paths[1].read_text().splitlines()) == 258
