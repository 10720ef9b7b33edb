"""
Deterministic average-rate approximations for a finite number of antennas.

Each SINR is replaced by the ratio of the average signal power to the
average interference-plus-noise power, computed in closed form from the
power delay profile.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asymptotics import _select, _tf_terms, offset_window_sum
from .channel import PowerDelayProfile
from .dsp import OfdmConfig, c_weights, ctilde_table
from .trfilter import default_delta

__all__ = [
    "FiniteSizeReport",
    "gamma_tf",
    "rho",
    "rho_table",
    "gamma_tr",
    "gamma_tr_full_band",
    "rate_approx",
    "tf_report",
    "tr_report",
]


@dataclass(frozen=True, eq=False)
class FiniteSizeReport:
    n_t: int
    gamma: np.ndarray
    rate_bps_hz: float


def gamma_tf(pdp: PowerDelayProfile, tau_tr: int, n_t: int, snr_op: float, cfg: OfdmConfig, subcarriers=None):
    """Approximate SINR of TF precoding with ``n_t`` antennas."""
    if n_t < 1 or not snr_op > 0:
        raise ValueError("need n_t >= 1 and snr_op > 0")
    signal, alpha_sq, amp = _tf_terms(pdp, tau_tr, cfg)
    p, E = pdp.delays, pdp.energies
    c = c_weights(p, cfg.n_fft, cfg.n_cp)
    numerator = n_t * signal**2 + alpha_sq * float(np.sum(c**2 * E))

    beyond = p > cfg.n_cp
    w = ctilde_table(cfg.n_fft, cfg.n_cp, cfg.n_sc, p[beyond])
    spread = (np.abs(w) ** 2) @ E[beyond]
    per_offset = 2.0 * (n_t * np.abs(amp) ** 2 + alpha_sq * spread)
    denominator = offset_window_sum(per_offset, cfg.n_sc) + n_t * alpha_sq / snr_op
    return _select(numerator / denominator, subcarriers)


def rho_table(pdp: PowerDelayProfile):
    """Sparse energy autocorrelation ``rho_m = sum_n E_n E_{n-m}``: (lags, values)."""
    lag = pdp.delays[:, None] - pdp.delays[None, :]
    prod = np.outer(pdp.energies, pdp.energies)
    lags, inv = np.unique(lag, return_inverse=True)
    values = np.zeros(lags.size)
    np.add.at(values, inv.ravel(), prod.ravel())
    return lags, values


def rho(pdp: PowerDelayProfile, m):
    lags, values = rho_table(pdp)
    m = np.asarray(m)
    pos = np.searchsorted(lags, m)
    pos = np.clip(pos, 0, lags.size - 1)
    out = np.where(lags[pos] == m, values[pos], 0.0)
    return out if out.ndim else float(out)


def gamma_tr(pdp: PowerDelayProfile, n_t: int, snr_op: float, cfg: OfdmConfig, delta: int | None = None, subcarriers=None):
    """Approximate SINR of TR filtering with ``n_t`` antennas."""
    if n_t < 1 or not snr_op > 0:
        raise ValueError("need n_t >= 1 and snr_op > 0")
    delta = default_delta(cfg.n_cp) if delta is None else int(delta)
    alpha_sq = pdp.total_energy
    lags, r = rho_table(pdp)
    shifted = lags + delta
    c = c_weights(shifted, cfg.n_fft, cfg.n_cp)
    numerator = n_t * alpha_sq**2 + float(np.sum(c**2 * r))
    w = ctilde_table(cfg.n_fft, cfg.n_cp, cfg.n_sc, shifted)
    per_offset = 2.0 * (np.abs(w) ** 2) @ r
    denominator = offset_window_sum(per_offset, cfg.n_sc) + n_t * alpha_sq / snr_op
    return _select(numerator / denominator, subcarriers)


def gamma_tr_full_band(pdp: PowerDelayProfile, n_t: int, snr_op: float, n_fft: int) -> float:
    """Closed form of :func:`gamma_tr` for ``n_cp = delta = 0`` and ``n_sc = n_fft``."""
    alpha_sq = pdp.total_energy
    lags, r = rho_table(pdp)
    c = c_weights(lags, n_fft, 0)
    numerator = n_t * alpha_sq**2 + float(np.sum(c**2 * r))
    denominator = float(np.sum((1.0 - c**2) * r)) + n_t * alpha_sq / snr_op
    return numerator / denominator


def rate_approx(gammas, cfg: OfdmConfig) -> float:
    gammas = np.asarray(gammas, dtype=float)
    if gammas.size == 0:
        return 0.0
    return float(cfg.rate_prefactor * np.sum(np.log2(1.0 + gammas)))


def tf_report(pdp, tau_tr, n_t, snr_op, cfg) -> FiniteSizeReport:
    g = gamma_tf(pdp, tau_tr, n_t, snr_op, cfg)
    return FiniteSizeReport(n_t, g, rate_approx(g, cfg))


def tr_report(pdp, n_t, snr_op, cfg, delta=None) -> FiniteSizeReport:
    g = gamma_tr(pdp, n_t, snr_op, cfg, delta)
    return FiniteSizeReport(n_t, g, rate_approx(g, cfg))
