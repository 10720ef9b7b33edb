"""
Infinite-antenna limits with the operational SNR ``snr_op = n_t * snr`` held fixed.

All functions work on the power delay profile only; no channel draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .channel import PowerDelayProfile
from .dsp import OfdmConfig, c_weights, ctilde_table

__all__ = [
    "AsymptoticReport",
    "TwoTapPrediction",
    "lemma1_prediction",
    "sinr_inf_tf",
    "asymptotic_report",
    "rate_inf_tf",
    "rate_inf_tr",
    "threshold_candidates",
    "threshold_scan",
    "optimize_threshold",
]


def offset_window_sum(per_offset: np.ndarray, n_sc: int) -> np.ndarray:
    """``out[i] = sum_{l=0}^{n_sc-1} per_offset[l - i + n_sc - 1]``.

    ``per_offset`` holds a quantity indexed by the subcarrier offset
    ``d = l - i`` over ``d = -n_sc+1 .. n_sc-1``.
    """
    windows = sliding_window_view(per_offset, n_sc)  # window j covers d = j-n_sc+1 .. j
    return windows.sum(axis=1)[::-1]


def _offsets(n_sc: int) -> np.ndarray:
    return np.arange(-n_sc + 1, n_sc)


@dataclass(frozen=True, eq=False)
class AsymptoticReport:
    sinr_inf: np.ndarray
    rate_inf_bps_hz: float
    snr_op: float
    tau_tr: int


@dataclass(frozen=True, eq=False)
class TwoTapPrediction:
    """Limit of ``r[k] / sqrt(n_t)`` under F-precoding.

    ``r[k] / sqrt(n_t) -> current[j] * s[k] + previous[j] * s[k - n_fft]`` for
    ``k = k[j]``, ``k = -n_cp .. n_fft-1``.
    """

    k: np.ndarray
    current: np.ndarray
    previous: np.ndarray
    flat_start: int


def lemma1_prediction(pdp: PowerDelayProfile, cfg: OfdmConfig) -> TwoTapPrediction:
    pdp.check_fits(cfg)
    alpha_sq = pdp.total_energy
    alpha = np.sqrt(alpha_sq)
    k = np.arange(-cfg.n_cp, cfg.n_fft)
    cum = np.cumsum(pdp.dense())
    upto = np.minimum(k + cfg.n_cp, pdp.L - 1)
    beta_sq = cum[upto]
    full = upto == pdp.L - 1
    beta_sq[full] = alpha_sq
    previous = np.where(full, 0.0, (alpha_sq - beta_sq) / alpha)
    return TwoTapPrediction(k, beta_sq / alpha, previous, pdp.L - cfg.n_cp)


def _tf_terms(pdp: PowerDelayProfile, tau_tr: int, cfg: OfdmConfig):
    """Signal sum, alpha_tau^2 and per-offset interference amplitudes for TF precoding."""
    if tau_tr < 1:
        raise ValueError("tau_tr must be at least 1")
    p, E = pdp.delays, pdp.energies
    inc = p < tau_tr
    signal = float(np.sum(c_weights(p[inc], cfg.n_fft, cfg.n_cp) * E[inc]))
    alpha_sq = pdp.alpha_sq(tau_tr)
    beyond = inc & (p > cfg.n_cp)
    weights = ctilde_table(cfg.n_fft, cfg.n_cp, cfg.n_sc, p[beyond])
    amp = weights @ E[beyond]
    return signal, alpha_sq, amp


def _select(values: np.ndarray, subcarriers):
    if subcarriers is None:
        return values
    return values[subcarriers]


def sinr_inf_tf(pdp: PowerDelayProfile, tau_tr: int, snr_op: float, cfg: OfdmConfig, subcarriers=None):
    """Limit SINR of TF precoding on each occupied subcarrier.

    ``subcarriers`` may be an index or index array; ``None`` returns all.
    """
    if not snr_op > 0:
        raise ValueError("snr_op must be positive")
    signal, alpha_sq, amp = _tf_terms(pdp, tau_tr, cfg)
    interference = 2.0 * offset_window_sum(np.abs(amp) ** 2, cfg.n_sc)
    # algebraically S^2 / (I + alpha^2 / snr_op); this ordering is exact when I == 0
    sinr = (signal / alpha_sq) * signal * snr_op / (interference * snr_op / alpha_sq + 1.0)
    return _select(sinr, subcarriers)


def rate_inf_tf(pdp: PowerDelayProfile, tau_tr: int, snr_op: float, cfg: OfdmConfig) -> float:
    sinr = sinr_inf_tf(pdp, tau_tr, snr_op, cfg)
    return float(cfg.rate_prefactor * np.sum(np.log2(1.0 + sinr)))


def asymptotic_report(pdp: PowerDelayProfile, tau_tr: int, snr_op: float, cfg: OfdmConfig) -> AsymptoticReport:
    sinr = sinr_inf_tf(pdp, tau_tr, snr_op, cfg)
    rate = float(cfg.rate_prefactor * np.sum(np.log2(1.0 + sinr)))
    return AsymptoticReport(sinr, rate, snr_op, tau_tr)


def rate_inf_tr(pdp: PowerDelayProfile, snr_op: float, cfg: OfdmConfig | None = None) -> float:
    """``log2(1 + alpha_L^2 snr_op)``.

    TR filtering needs no CP in the limit, so by default there is no overhead
    factor. Passing ``cfg`` gives the limit of a TR link that still carries
    ``cfg.n_cp`` samples of CP, i.e. the same value scaled by
    ``n_fft / (n_fft + n_cp)``.
    """
    if not snr_op > 0:
        raise ValueError("snr_op must be positive")
    rate = float(np.log2(1.0 + pdp.total_energy * snr_op))
    return rate if cfg is None else cfg.cp_efficiency * rate


def threshold_candidates(pdp: PowerDelayProfile, cfg: OfdmConfig) -> np.ndarray:
    """``n_cp + 1`` followed by ``p + 1`` for every tap delay ``p > n_cp``."""
    beyond = pdp.delays[pdp.delays > cfg.n_cp] + 1
    return np.concatenate([[cfg.n_cp + 1], beyond]).astype(int)


def threshold_scan(pdp: PowerDelayProfile, snr_op: float, cfg: OfdmConfig, taus=None):
    """Asymptotic TF rate for every threshold in ``taus`` (default ``1 .. L``).

    The rate only changes when a tap enters the precoder, so it is evaluated
    once per distinct tap count and broadcast.
    """
    taus = np.arange(1, pdp.L + 1) if taus is None else np.asarray(taus, dtype=int)
    n_included = np.searchsorted(pdp.delays, taus, side="left")
    cache = {}
    rates = np.empty(taus.size)
    for j, (tau, key) in enumerate(zip(taus, n_included)):
        if key not in cache:
            cache[key] = rate_inf_tf(pdp, int(tau), snr_op, cfg)
        rates[j] = cache[key]
    return taus, rates


def optimize_threshold(pdp: PowerDelayProfile, snr_op: float, cfg: OfdmConfig) -> int:
    """Smallest candidate threshold maximizing the asymptotic TF rate."""
    best_tau, best_rate = None, -np.inf
    for tau in threshold_candidates(pdp, cfg):
        rate = rate_inf_tf(pdp, int(tau), snr_op, cfg)
        if rate > best_rate:
            best_tau, best_rate = int(tau), rate
    return best_tau
