"""
Time-domain Monte-Carlo link simulation.

Each trial draws one block-fading channel and sends a subframe of OFDM
blocks through it sample by sample. A dummy block with random data is
sent before and after the subframe so that every block sees physical
interference from its neighbours. Symbols are equalized with the
closed-form desired coefficient and detected by ML.

Noise is drawn once per trial at unit variance and scaled per SNR point,
so all points of a sweep share channel and data (common random numbers).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, PowerDelayProfile, SpatialCorrelationSpec, generate_cir
from .dsp import OfdmConfig, QamConstellation, qam_detect, qam_map
from .precoding import desired_channel, effective_channels, f_precoder, sinr_tf, tf_precoder
from .trfilter import default_delta, sinr_tr, tr_channels, tr_desired, tr_effective_channel

__all__ = [
    "SCHEMES",
    "LinkScenario",
    "SubframeOutcome",
    "LinkResult",
    "RateCurve",
    "simulate_subframe_tf",
    "simulate_subframe_tr",
    "run_link",
    "mc_rate",
    "throughput",
    "n_threads",
]

SCHEMES = ("F", "TF", "TR", "TR-noCP")
THREADS_ENV = "TFPRECODING_THREADS"


def _cn(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class LinkScenario:
    """One link configuration swept over a grid of SNR values.

    ``snr_db`` is operational (``n_t * SNR``) when ``snr_is_operational`` is
    set, otherwise per-antenna. ``TR-noCP`` transmits with ``n_cp = 0``
    regardless of ``cfg.n_cp``; see :attr:`link_cfg`.
    """

    cfg: OfdmConfig
    pdp: PowerDelayProfile
    scheme: str
    n_t: int
    tau_tr: int | None = None
    correlation: SpatialCorrelationSpec | None = None
    qam_order: int = 4
    snr_db: tuple = (10.0,)
    snr_is_operational: bool = True
    trials: int = 10
    seed: int = 0
    n_blocks: int = 14
    bler_unit: str = "ofdm_symbol"
    delta: int | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.scheme == "TF" and (self.tau_tr is None or self.tau_tr < 1):
            raise ValueError("TF scheme needs tau_tr >= 1")
        if self.n_t < 1 or self.trials < 1 or self.n_blocks < 1:
            raise ValueError("n_t, trials and n_blocks must be positive")
        if self.bler_unit not in ("ofdm_symbol", "subframe"):
            raise ValueError("bler_unit must be 'ofdm_symbol' or 'subframe'")
        object.__setattr__(self, "snr_db", tuple(float(s) for s in np.atleast_1d(self.snr_db)))
        self.pdp.check_fits(self.cfg)

    @property
    def link_cfg(self) -> OfdmConfig:
        return self.cfg.with_cp(0) if self.scheme == "TR-noCP" else self.cfg

    @property
    def snr_per_antenna(self) -> np.ndarray:
        snr = 10.0 ** (np.asarray(self.snr_db) / 10.0)
        return snr / self.n_t if self.snr_is_operational else snr

    @property
    def snr_op(self) -> np.ndarray:
        return self.snr_per_antenna * self.n_t

    @property
    def constellation(self) -> QamConstellation:
        return QamConstellation(self.qam_order)


@dataclass(frozen=True, eq=False)
class SubframeOutcome:
    """Per-SNR error counts of one subframe (rows follow ``scenario.snr_db``)."""

    symbol_errors: np.ndarray
    block_errors: np.ndarray
    n_symbols: int
    n_block_trials: int


@dataclass(frozen=True, eq=False)
class LinkResult:
    scenario: LinkScenario
    ser: np.ndarray
    bler: np.ndarray
    throughput_bps_hz: np.ndarray
    ser_halfwidth: np.ndarray
    bler_halfwidth: np.ndarray
    n_symbols: int
    n_block_trials: int


@dataclass(frozen=True, eq=False)
class RateCurve:
    """Monte-Carlo average of the per-realization rate formula, one value per SNR.

    ``samples[r, j]`` is the rate of realization ``r`` at SNR point ``j``.
    Realization ``r`` draws its channel from the same stream whatever the
    scheme, so curves from scenarios sharing a seed are paired.
    """

    scenario: LinkScenario
    rate_bps_hz: np.ndarray
    halfwidth: np.ndarray
    n_realizations: int
    samples: np.ndarray


def throughput(bler, qam_order: int, cfg: OfdmConfig) -> np.ndarray:
    return np.log2(qam_order) * cfg.cp_efficiency * (1.0 - np.asarray(bler, dtype=float))


def n_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _modulate(x: np.ndarray, cfg: OfdmConfig) -> np.ndarray:
    """OFDM blocks with CP: ``x`` of shape (..., n_blocks, n_sc) -> (..., n_blocks * (n_fft + n_cp))."""
    spec = np.zeros(x.shape[:-1] + (cfg.n_fft,), dtype=complex)
    spec[..., : cfg.n_sc] = x
    body = np.fft.ifft(spec, axis=-1) * (cfg.n_fft / np.sqrt(cfg.n_sc))
    blocks = np.concatenate([body[..., cfg.n_fft - cfg.n_cp:], body], axis=-1)
    return blocks.reshape(x.shape[:-2] + (-1,))


def _demodulate(r: np.ndarray, cfg: OfdmConfig, n_blocks: int, first: int) -> np.ndarray:
    """Demodulate blocks ``first .. first+n_blocks-1`` of stream ``r`` (block index 0 at sample 0)."""
    blk = cfg.block_length
    start = first * blk + cfg.n_cp
    win = r[..., start:start + n_blocks * blk].reshape(r.shape[:-1] + (n_blocks, blk))[..., : cfg.n_fft]
    return np.fft.fft(win, axis=-1)[..., : cfg.n_sc] * (np.sqrt(cfg.n_sc) / cfg.n_fft)


def _delay(s: np.ndarray, shift: int) -> np.ndarray:
    """``out[..., k] = s[..., k - shift]`` with zeros shifted in."""
    out = np.zeros_like(s)
    n = s.shape[-1]
    if shift >= 0:
        out[..., shift:] = s[..., : n - shift]
    else:
        out[..., : n + shift] = s[..., -shift:]
    return out


def _frame(scenario: LinkScenario, rng: np.random.Generator):
    """Random indices for dummy + subframe + dummy blocks; returns (indices, symbols)."""
    n_tot = scenario.n_blocks + 2
    idx = rng.integers(0, scenario.qam_order, size=(n_tot, scenario.cfg.n_sc))
    return idx, qam_map(idx, scenario.constellation)


def _count_errors(y, h_eff, idx, noise, scenario: LinkScenario, sigma_z) -> SubframeOutcome:
    const = scenario.constellation
    sym_err, blk_err = [], []
    for s in sigma_z:
        det = qam_detect(y + s * noise, h_eff, const)
        wrong = det != idx
        sym_err.append(int(wrong.sum()))
        per_block = wrong.any(axis=-1)
        blk_err.append(int(per_block.sum()) if scenario.bler_unit == "ofdm_symbol" else int(per_block.any()))
    n_block_trials = scenario.n_blocks if scenario.bler_unit == "ofdm_symbol" else 1
    return SubframeOutcome(np.array(sym_err), np.array(blk_err), int(idx.size), n_block_trials)


def _noise(scenario: LinkScenario, rng, length):
    # post-FFT noise variance (n_sc / n_fft) * sigma_z^2 equals 1 / SNR
    sigma_z = np.sqrt(scenario.cfg.n_fft / scenario.cfg.n_sc / scenario.snr_per_antenna)
    return sigma_z, _cn(rng, length)


def simulate_subframe_tf(
    scenario: LinkScenario,
    cir: ChannelRealization,
    rng: np.random.Generator,
    return_symbols: bool = False,
):
    """F- or TF-precoded subframe through ``cir``.

    Returns a :class:`SubframeOutcome`; with ``return_symbols`` also the
    noiseless demodulated symbols of shape (n_blocks, n_sc), the desired
    coefficients and the transmitted data indices.
    """
    cfg = scenario.link_cfg
    if scenario.scheme == "TF":
        pre = tf_precoder(cir, cfg, scenario.tau_tr)
    elif scenario.scheme == "F":
        pre = f_precoder(cir, cfg)
    else:
        raise ValueError("simulate_subframe_tf handles the F and TF schemes only")
    idx, x = _frame(scenario, rng)
    # per-antenna frequency-domain symbols w_l[t] x_l, then OFDM per antenna
    s = _modulate(np.moveaxis(x[:, :, None] * pre.vectors[None, :, :], -1, 0), cfg)
    r = np.zeros(s.shape[-1], dtype=complex)
    for d, h in zip(cir.delays, cir.taps):
        r += _delay(h @ s, int(d))
    sigma_z, z = _noise(scenario, rng, r.size)
    y = _demodulate(r, cfg, scenario.n_blocks, 1)
    nz = _demodulate(z, cfg, scenario.n_blocks, 1)
    h_eff = desired_channel(cir, pre, cfg)
    out = _count_errors(y, h_eff, idx[1:-1], nz, scenario, sigma_z)
    if return_symbols:
        return out, y, h_eff, idx[1:-1]
    return out


def simulate_subframe_tr(
    scenario: LinkScenario,
    cir: ChannelRealization,
    rng: np.random.Generator,
    return_symbols: bool = False,
):
    """TR-filtered subframe: every antenna sends the common OFDM stream
    through ``conj(h_t[-n]) / omega`` advanced by ``delta`` samples."""
    if scenario.scheme not in ("TR", "TR-noCP"):
        raise ValueError("simulate_subframe_tr handles the TR schemes only")
    cfg = scenario.link_cfg
    delta = default_delta(cfg.n_cp) if scenario.delta is None else scenario.delta
    idx, x = _frame(scenario, rng)
    s = _modulate(x, cfg)
    omega = float(np.sqrt(np.sum(np.abs(cir.taps) ** 2)))
    n_t = cir.n_t
    stx = np.zeros((n_t, s.size), dtype=complex)
    for d, h in zip(cir.delays, cir.taps):
        stx += np.conj(h)[:, None] * _delay(s, delta - int(d))[None, :]
    stx /= omega
    r = np.zeros(s.size, dtype=complex)
    for d, h in zip(cir.delays, cir.taps):
        r += _delay(h @ stx, int(d))
    sigma_z, z = _noise(scenario, rng, r.size)
    y = _demodulate(r, cfg, scenario.n_blocks, 1)
    nz = _demodulate(z, cfg, scenario.n_blocks, 1)
    h_eff = tr_desired(tr_effective_channel(cir, cfg, delta), cfg)
    out = _count_errors(y, h_eff, idx[1:-1], nz, scenario, sigma_z)
    if return_symbols:
        return out, y, h_eff, idx[1:-1]
    return out


def _trial_rngs(scenario: LinkScenario):
    seqs = np.random.SeedSequence(scenario.seed).spawn(scenario.trials)
    return [np.random.default_rng(s) for s in seqs]


def _map_trials(fn, scenario: LinkScenario):
    rngs = _trial_rngs(scenario)
    workers = n_threads()
    if workers == 1:
        return [fn(r) for r in rngs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, rngs))


def _halfwidth(p, n):
    return 1.96 * np.sqrt(p * (1.0 - p) / n)


def run_link(scenario: LinkScenario) -> LinkResult:
    """SER, BLER and throughput over ``scenario.trials`` independent subframes."""
    sim = simulate_subframe_tr if scenario.scheme in ("TR", "TR-noCP") else simulate_subframe_tf

    def one(rng):
        cir = generate_cir(scenario.pdp, scenario.n_t, rng, scenario.correlation)
        return sim(scenario, cir, rng)

    outcomes = _map_trials(one, scenario)
    sym = np.sum([o.symbol_errors for o in outcomes], axis=0)
    blk = np.sum([o.block_errors for o in outcomes], axis=0)
    n_sym = sum(o.n_symbols for o in outcomes)
    n_blk = sum(o.n_block_trials for o in outcomes)
    ser = sym / n_sym
    bler = blk / n_blk
    return LinkResult(
        scenario,
        ser,
        bler,
        throughput(bler, scenario.qam_order, scenario.link_cfg),
        _halfwidth(ser, n_sym),
        _halfwidth(bler, n_blk),
        n_sym,
        n_blk,
    )


def _powers(scenario: LinkScenario, cir: ChannelRealization):
    cfg = scenario.link_cfg
    if scenario.scheme in ("TR", "TR-noCP"):
        coeffs = tr_channels(tr_effective_channel(cir, cfg, scenario.delta), cfg)
        rep = sinr_tr(coeffs, 1.0, cfg)
    else:
        pre = f_precoder(cir, cfg) if scenario.scheme == "F" else tf_precoder(cir, cfg, scenario.tau_tr)
        rep = sinr_tf(effective_channels(cir, pre, cfg), 1.0, cfg)
    return rep.signal, rep.interference


def mc_rate(scenario: LinkScenario) -> RateCurve:
    """Average of the per-realization rate formula over ``scenario.trials`` channels.

    No waveform is simulated; signal and interference powers come from the
    closed-form coefficients of each realization.
    """
    cfg = scenario.link_cfg
    snr = scenario.snr_per_antenna

    def one(rng):
        cir = generate_cir(scenario.pdp, scenario.n_t, rng, scenario.correlation)
        sig, intf = _powers(scenario, cir)
        sinr = sig[None, :] / (intf[None, :] + 1.0 / snr[:, None])
        return cfg.rate_prefactor * np.log2(1.0 + sinr).sum(axis=1)

    rates = np.array(_map_trials(one, scenario))
    n = rates.shape[0]
    spread = rates.std(axis=0, ddof=1) if n > 1 else np.zeros(rates.shape[1])
    return RateCurve(scenario, rates.mean(axis=0), 1.96 * spread / np.sqrt(n), n, rates)
