import numpy as np
import pytest

import oracles
from tfprecoding import linksim
from tfprecoding.channel import ChannelRealization, exponential_pdp, generate_cir, single_tap_pdp
from tfprecoding.dsp import OfdmConfig, qam_map
from tfprecoding.linksim import LinkScenario, mc_rate, run_link, simulate_subframe_tf, simulate_subframe_tr, throughput
from tfprecoding.precoding import effective_channels, sinr_tf, tf_precoder
from tfprecoding.trfilter import sinr_tr, tr_channels, tr_effective_channel

CFG = OfdmConfig(32, 2, 12)


def test_scenario_validation():
    pdp = exponential_pdp(5)
    with pytest.raises(ValueError):
        LinkScenario(CFG, pdp, "MMSE", 4)
    with pytest.raises(ValueError):
        LinkScenario(CFG, pdp, "TF", 4)
    with pytest.raises(ValueError):
        LinkScenario(CFG, pdp, "F", 4, bler_unit="slot")
    with pytest.raises(ValueError):
        LinkScenario(CFG, exponential_pdp(40), "F", 4)
    sc = LinkScenario(CFG, pdp, "TR-noCP", 8, snr_db=20)
    assert sc.link_cfg.n_cp == 0
    assert sc.snr_per_antenna == pytest.approx([100 / 8])
    assert sc.snr_op == pytest.approx([100])


def test_noise_calibration(rng):
    sc = LinkScenario(CFG, exponential_pdp(3), "F", 4, snr_db=(0.0, 10.0), snr_is_operational=False)
    sigma, z = linksim._noise(sc, rng, 201 * CFG.block_length)
    nz = linksim._demodulate(z, CFG, 200, 0)
    power = np.mean(np.abs(nz) ** 2)
    assert power * sigma[0] ** 2 == pytest.approx(1.0, rel=0.03)
    assert power * sigma[1] ** 2 == pytest.approx(0.1, rel=0.03)


def test_modulate_demodulate_round_trip(rng):
    x = qam_map(rng.integers(0, 16, (5, 12)), linksim.QamConstellation(16))
    s = np.concatenate([linksim._modulate(x, CFG), np.zeros(CFG.n_cp)])
    assert np.allclose(linksim._demodulate(s, CFG, 5, 0), x)


def test_throughput_formula():
    assert throughput(1.0, 64, CFG) == 0.0
    assert throughput(0.0, 16, OfdmConfig(2048, 144, 600)) == pytest.approx(4 * 2048 / 2192)
    assert throughput([0.5], 4, CFG.with_cp(0)) == pytest.approx([1.0])


def _residual_power(y, h_eff, idx, q):
    e = y - h_eff * qam_map(idx, q)
    return np.mean(np.abs(e) ** 2, axis=0)


def test_tf_chain_interference_matches_closed_form():
    rng = np.random.default_rng(7)
    pdp = exponential_pdp(20)
    cir = generate_cir(pdp, 4, rng)
    sc = LinkScenario(CFG, pdp, "TF", 4, tau_tr=6, qam_order=4, n_blocks=4000)
    _, y, h_eff, idx = simulate_subframe_tf(sc, cir, rng, return_symbols=True)
    rep = sinr_tf(effective_channels(cir, tf_precoder(cir, CFG, 6), CFG), 1.0, CFG)
    assert np.allclose(np.abs(h_eff) ** 2, rep.signal)
    got = _residual_power(y, h_eff, idx, sc.constellation)
    assert np.mean(got) == pytest.approx(np.mean(rep.interference), rel=0.05)


def test_tr_chain_interference_matches_closed_form():
    rng = np.random.default_rng(8)
    pdp = exponential_pdp(20)
    cir = generate_cir(pdp, 4, rng)
    sc = LinkScenario(CFG, pdp, "TR", 4, qam_order=4, n_blocks=4000)
    _, y, h_eff, idx = simulate_subframe_tr(sc, cir, rng, return_symbols=True)
    rep = sinr_tr(tr_channels(tr_effective_channel(cir, CFG), CFG), 1.0, CFG)
    got = _residual_power(y, h_eff, idx, sc.constellation)
    assert np.mean(got) == pytest.approx(np.mean(rep.interference), rel=0.05)


def test_noiseless_interference_free_has_no_errors():
    sc = LinkScenario(CFG, single_tap_pdp(), "F", 4, qam_order=64, snr_db=200.0, trials=3)
    res = run_link(sc)
    assert res.ser[0] == 0.0 and res.bler[0] == 0.0
    assert res.throughput_bps_hz[0] == pytest.approx(6 * 32 / 34)


def test_reproducible_for_a_seed():
    sc = LinkScenario(CFG, exponential_pdp(10), "TF", 4, tau_tr=3, qam_order=16, snr_db=(10, 15), trials=3, seed=11)
    a, b = run_link(sc), run_link(sc)
    assert np.array_equal(a.ser, b.ser) and np.array_equal(a.bler, b.bler)
    assert np.array_equal(mc_rate(sc).samples, mc_rate(sc).samples)


def test_threads_do_not_change_results(monkeypatch):
    sc = LinkScenario(CFG, exponential_pdp(10), "TR", 4, qam_order=16, snr_db=12, trials=4, seed=2)
    serial = run_link(sc)
    monkeypatch.setenv(linksim.THREADS_ENV, "3")
    assert np.array_equal(run_link(sc).ser, serial.ser)
    monkeypatch.setenv(linksim.THREADS_ENV, "x")
    with pytest.raises(ValueError):
        linksim.n_threads()


def test_single_tap_tr_matches_awgn_ser():
    cfg = OfdmConfig(64, 0, 64)
    n_t, snr_db = 4, 10.0
    cir = ChannelRealization([0], np.ones((1, n_t)) * np.exp(0.3j))
    sc = LinkScenario(cfg, single_tap_pdp(), "TR-noCP", n_t, qam_order=4, snr_db=snr_db, n_blocks=500)
    errors = n = 0
    for seed in range(4):
        out = simulate_subframe_tr(sc, cir, np.random.default_rng(seed))
        errors += out.symbol_errors[0]
        n += out.n_symbols
    p = oracles.awgn_qam_ser(4, 10 ** (snr_db / 10))
    assert abs(errors / n - p) < 3 * np.sqrt(p * (1 - p) / n)


def test_subframe_bler_unit():
    sc = LinkScenario(CFG, exponential_pdp(10), "F", 4, qam_order=64, snr_db=0.0, trials=2, bler_unit="subframe")
    res = run_link(sc)
    assert res.n_block_trials == 2 and res.bler[0] == 1.0
    assert res.throughput_bps_hz[0] == 0.0


def test_mc_rate_close_to_approximation():
    from tfprecoding.finite_size import gamma_tf, rate_approx

    pdp = exponential_pdp(20)
    sc = LinkScenario(CFG, pdp, "TF", 64, tau_tr=4, snr_db=30.0, trials=300, seed=4)
    curve = mc_rate(sc)
    approx = rate_approx(gamma_tf(pdp, 4, 64, 1000.0, CFG), CFG)
    assert curve.rate_bps_hz[0] == pytest.approx(approx, rel=0.03)
    assert curve.samples.shape == (300, 1)
