import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from tfprecoding.dsp import (
    DegenerateChannelError,
    OfdmConfig,
    QamConstellation,
    c_weights,
    ctilde_offset,
    ctilde_table,
    dft,
    offset_mix,
    qam_detect,
    qam_map,
    weight_c,
    weight_ctilde,
)


def test_config_derived_constants():
    cfg = OfdmConfig(2048, 144, 600, 60e3)
    assert cfg.symbol_duration == pytest.approx(1 / 60e3)
    assert cfg.sample_period == pytest.approx(1 / (60e3 * 2048))
    assert cfg.block_length == 2192
    assert cfg.rate_prefactor == pytest.approx(2048 / (2192 * 600))
    assert cfg.with_cp(0).cp_efficiency == 1.0


@pytest.mark.parametrize("args", [(0, 0, 1), (8, 8, 4), (8, 2, 9), (8, -1, 4), (8, 2, 0)])
def test_config_rejects_invalid(args):
    with pytest.raises(ValueError):
        OfdmConfig(*args)


def test_dft_impulse_is_flat():
    assert np.allclose(dft([1, 0, 0, 0]), np.ones(4))


def test_dft_round_trip(rng):
    x = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    back = dft(dft(x), inverse=True)
    assert np.max(np.abs(back - x)) / np.max(np.abs(x)) < 1e-12


def test_dft_matches_direct_sum():
    n = 8
    k = np.arange(n)
    x = np.exp(2j * np.pi * k * 3 / n)
    direct = np.array([np.sum(x * np.exp(-2j * np.pi * i * k / n)) for i in range(n)])
    X = dft(x)
    assert np.allclose(X, direct, atol=1e-12)
    assert np.argmax(np.abs(X)) == 3 and abs(X[3] - 8) < 1e-12


def test_dft_parseval(rng):
    x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    assert np.sum(np.abs(dft(x)) ** 2) / 64 == pytest.approx(np.sum(np.abs(x) ** 2), rel=1e-10)


def test_c_weight_branches():
    cfg = OfdmConfig(2048, 144, 600)
    assert all(weight_c(m, cfg) == 1.0 for m in (0, 1, 77, 144))
    assert weight_c(145, cfg) == 2047 / 2048
    assert weight_c(-2048, cfg) == 0.0
    assert weight_c(2048 + 144, cfg) == 0.0
    assert weight_c(-1, cfg) == 2047 / 2048
    assert weight_c(5000, cfg) == 0.0 and weight_c(-5000, cfg) == 0.0


@given(st.integers(-100, 100), st.integers(1, 40), st.integers(0, 39))
def test_c_weight_range(m, n_fft, n_cp):
    n_cp = n_cp % n_fft
    c = c_weights(m, n_fft, n_cp)
    assert 0.0 <= c <= 1.0
    if 0 <= m <= n_cp:
        assert c == 1.0
    if m < -n_fft or m > n_fft + n_cp:
        assert c == 0.0


def test_ctilde_vanishes_inside_cp():
    cfg = OfdmConfig(16, 4, 16)
    for m in range(0, 5):
        for l in range(16):
            for i in range(16):
                assert abs(weight_ctilde(l, i, m, cfg)) < 1e-15


def test_ctilde_diagonal():
    cfg = OfdmConfig(32, 4, 12)
    for k in (1, 5, 20):
        m = cfg.n_cp + k
        assert weight_ctilde(3, 3, m, cfg) == pytest.approx((1 - weight_c(m, cfg)) / np.sqrt(2))


def test_ctilde_depends_on_offset_only():
    cfg = OfdmConfig(32, 3, 20)
    for m in (-7, 9, 30):
        assert weight_ctilde(7, 2, m, cfg) == weight_ctilde(15, 10, m, cfg)


def test_ctilde_rejects_full_period_offset():
    with pytest.raises(ValueError):
        ctilde_offset(16, 20, 16, 2)


def test_ctilde_matches_geometric_sum():
    # |c~|^2 structure from its defining sum over the samples that leak
    n_fft, n_cp = 16, 3
    for m in (6, 12, 18):
        for d in (1, 5, -3):
            k = np.arange(m - n_cp, n_fft) if m <= n_fft + n_cp else np.arange(0)
            direct = np.sum(np.exp(2j * np.pi * d * k / n_fft)) / n_fft
            assert abs(ctilde_offset(d, m, n_fft, n_cp) - direct) < 1e-12 or abs(ctilde_offset(d, m, n_fft, n_cp) + direct) < 1e-12


def test_ctilde_power_sum_over_band():
    # summing over l != i gives c - c^2; adding the diagonal completes 1 - c^2
    n = 16
    cfg = OfdmConfig(n, 3, n)
    for m in (-5, 4, 8, 15, 18):
        c = weight_c(m, cfg)
        off = sum(abs(weight_ctilde(l, 5, m, cfg)) ** 2 for l in range(n) if l != 5)
        assert off == pytest.approx(c - c * c, abs=1e-12)
        total = 2 * off + 2 * abs(weight_ctilde(5, 5, m, cfg)) ** 2
        assert total == pytest.approx(1 - c * c, abs=1e-12)


def test_ctilde_table_and_offset_mix(rng):
    n_fft, n_cp, n_sc = 32, 2, 12
    delays = [5, 9, 17]
    table = ctilde_table(n_fft, n_cp, n_sc, delays)
    assert table.shape == (2 * n_sc - 1, 3)
    assert not table.flags.writeable
    b = rng.standard_normal((n_sc, 3)) + 1j * rng.standard_normal((n_sc, 3))
    out = offset_mix(table, b)
    ref = np.zeros((n_sc, n_sc), complex)
    for l in range(n_sc):
        for i in range(n_sc):
            ref[l, i] = sum(ctilde_offset(l - i, m, n_fft, n_cp) * b[l, q] for q, m in enumerate(delays))
    assert np.allclose(out, ref, atol=1e-14)


@pytest.mark.parametrize("order", [4, 16, 64])
def test_qam_unit_energy_and_size(order):
    q = QamConstellation(order)
    assert q.points.size == order
    assert abs(np.mean(np.abs(q.points) ** 2) - 1) < 1e-12
    assert np.unique(np.round(q.points, 12)).size == order


@pytest.mark.parametrize("order", [16, 64])
def test_qam_gray_neighbours_differ_by_one_bit(order):
    q = QamConstellation(order)
    d = np.abs(q.points[:, None] - q.points[None, :])
    near = np.isclose(d, q.min_distance)
    for a, b in zip(*np.nonzero(near)):
        assert bin(int(a) ^ int(b)).count("1") == 1


def test_qam_rejects_unsupported_order():
    with pytest.raises(ValueError):
        QamConstellation(8)


def test_qam_noiseless_detection_exact():
    q = QamConstellation(64)
    idx = np.arange(64)
    h = 0.3 - 1.7j
    assert np.array_equal(qam_detect(h * qam_map(idx, q), h, q), idx)


def test_qam_detect_zero_channel_raises():
    q = QamConstellation(4)
    with pytest.raises(DegenerateChannelError):
        qam_detect(np.ones(3), np.array([1, 0, 1]), q)


def test_qam_map_range():
    with pytest.raises(ValueError):
        qam_map([4], QamConstellation(4))


def test_qam_high_snr_no_errors(rng):
    q = QamConstellation(4)
    idx = rng.integers(0, 4, 20000)
    y = qam_map(idx, q) + 1e-4 * (rng.standard_normal(idx.size) + 1j * rng.standard_normal(idx.size))
    assert np.array_equal(qam_detect(y, 1.0, q), idx)


@pytest.mark.parametrize("order,snr_db", [(4, 10.0), (16, 16.0)])
def test_qam_awgn_ser_matches_integration_oracle(rng, order, snr_db):
    q = QamConstellation(order)
    snr = 10 ** (snr_db / 10)
    n = 400_000
    idx = rng.integers(0, order, n)
    noise = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * np.sqrt(0.5 / snr)
    h = 0.8 * np.exp(0.4j)
    ser = np.mean(qam_detect(h * qam_map(idx, q) + h * noise, h, q) != idx)
    p = oracles.awgn_qam_ser(order, snr)
    assert abs(ser - p) < 3 * np.sqrt(p * (1 - p) / n)


@settings(max_examples=50)
@given(st.integers(1, 64))
def test_dft_round_trip_any_length(n):
    x = np.exp(1j * np.arange(n)) * (1 + np.arange(n))
    assert np.allclose(dft(dft(x), inverse=True), x, rtol=1e-12, atol=1e-12)
