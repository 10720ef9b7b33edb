"""
Subcarrier-level MRT precoding over an OFDM link with a possibly short CP.

``tf_precoder`` builds each precoder from the CIR truncated at ``tau_tr``;
``f_precoder`` is the untruncated special case. ``effective_channels``
evaluates the single-sum closed forms for the desired, ICI and ISI
coefficients seen after FFT demodulation of block 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, freq_response
from .dsp import DegenerateChannelError, OfdmConfig, c_weights, ctilde_table, offset_mix

__all__ = [
    "PrecoderSet",
    "EffectiveChannels",
    "SinrRateReport",
    "tf_precoder",
    "f_precoder",
    "desired_channel",
    "effective_channels",
    "isi_channels_direct",
    "sinr_tf",
    "rate_from_sinr",
]


@dataclass(frozen=True, eq=False)
class PrecoderSet:
    """Unit-norm precoders, one row ``vectors[i]`` per occupied subcarrier.

    ``norms[i]`` is ``||h_i(tau_tr)||`` before normalization.
    """

    tau_tr: int
    vectors: np.ndarray
    norms: np.ndarray

    @property
    def n_t(self) -> int:
        return int(self.vectors.shape[1])


@dataclass(frozen=True, eq=False)
class EffectiveChannels:
    """Precoded channel coefficients for the demodulated block.

    Attributes
    ----------
    desired : (n_sc,) complex
        ``H_{0,i,i} w_i``.
    ici : (n_sc, n_sc) complex
        ``ici[l, i] = H_{0,l,i} w_l`` for ``l != i``; the diagonal is zero.
    isi_same : (n_sc,) complex
        ``(h_i - H_{0,i,i}) w_i``: ISI from subcarrier ``i`` of the previous block.
    hhat_w : (n_sc,) complex
        ``h_i w_i`` with the full (untruncated) response.
    """

    desired: np.ndarray
    ici: np.ndarray
    isi_same: np.ndarray
    hhat_w: np.ndarray
    n_fft: int
    n_cp: int

    @property
    def n_sc(self) -> int:
        return int(self.desired.size)

    def isi(self) -> np.ndarray:
        """``isi[l, i] = H_{-1,l,i} w_l`` from the compact relation.

        ``H_{-1,l,i} = exp(2j*pi*l*n_cp/n_fft) * (delta_{l,i} h_i - H_{0,l,i})``.
        """
        l = np.arange(self.n_sc)
        phase = np.exp(2j * np.pi * l * self.n_cp / self.n_fft)
        out = -self.ici * phase[:, None]
        out[l, l] = phase * (self.hhat_w - self.desired)
        return out


@dataclass(frozen=True, eq=False)
class SinrRateReport:
    signal: np.ndarray
    interference: np.ndarray
    sinr: np.ndarray
    rate_bps_hz: float


def tf_precoder(cir: ChannelRealization, cfg: OfdmConfig, tau_tr: int) -> PrecoderSet:
    """MRT on the frequency response of the CIR truncated below ``tau_tr``.

    Any ``tau_tr >= L`` keeps every tap.
    """
    if tau_tr < 1:
        raise ValueError(f"tau_tr must be at least 1, got {tau_tr}")
    h = freq_response(cir, np.arange(cfg.n_sc), cfg.n_fft, tau_tr)
    norms = np.linalg.norm(h, axis=1)
    if np.any(norms == 0):
        raise DegenerateChannelError("zero-norm truncated frequency response")
    return PrecoderSet(int(tau_tr), h.conj() / norms[:, None], norms)


def f_precoder(cir: ChannelRealization, cfg: OfdmConfig) -> PrecoderSet:
    """Conventional MRT; identical to ``tf_precoder(cir, cfg, cir.L)``."""
    return tf_precoder(cir, cfg, cir.L)


def _tap_projections(cir: ChannelRealization, precoders: PrecoderSet, n_fft: int) -> np.ndarray:
    # a[q, l] = h_{d_q} w_l exp(-2j pi l d_q / n_fft)
    n_sc = precoders.vectors.shape[0]
    hw = cir.taps @ precoders.vectors.T
    return hw * np.exp(-2j * np.pi * np.outer(cir.delays, np.arange(n_sc)) / n_fft)


def desired_channel(cir: ChannelRealization, precoders: PrecoderSet, cfg: OfdmConfig) -> np.ndarray:
    """``H_{0,i,i} w_i`` alone, without materializing the ICI matrix."""
    a = _tap_projections(cir, precoders, cfg.n_fft)
    return c_weights(cir.delays, cfg.n_fft, cfg.n_cp) @ a


def effective_channels(cir: ChannelRealization, precoders: PrecoderSet, cfg: OfdmConfig) -> EffectiveChannels:
    if cir.L > cfg.n_fft:
        raise ValueError("channel longer than one OFDM symbol")
    if precoders.vectors.shape != (cfg.n_sc, cir.n_t):
        raise ValueError("precoder dimensions do not match the channel and numerology")
    n_fft, n_cp, n_sc = cfg.n_fft, cfg.n_cp, cfg.n_sc
    a = _tap_projections(cir, precoders, n_fft)
    c = c_weights(cir.delays, n_fft, n_cp)
    desired = c @ a
    hhat_w = a.sum(axis=0)

    l = np.arange(n_sc)
    beyond = cir.delays > n_cp
    table = ctilde_table(n_fft, n_cp, n_sc, cir.delays[beyond])
    ici = offset_mix(table, a[beyond].T)
    ici[l, l] = 0.0
    return EffectiveChannels(desired, ici, hhat_w - desired, hhat_w, n_fft, n_cp)


def isi_channels_direct(cir: ChannelRealization, precoders: PrecoderSet, cfg: OfdmConfig) -> np.ndarray:
    """``H_{-1,l,i} w_l`` from its own single sums (no use of ``H_{0,l,i}``)."""
    n_fft, n_cp, n_sc = cfg.n_fft, cfg.n_cp, cfg.n_sc
    a = _tap_projections(cir, precoders, n_fft)
    l = np.arange(n_sc)
    phase = np.exp(2j * np.pi * l * n_cp / n_fft)
    beyond = cir.delays > n_cp
    table = ctilde_table(n_fft, n_cp, n_sc, cir.delays[beyond])
    out = -offset_mix(table, a[beyond].T)
    out[l, l] = (1.0 - c_weights(cir.delays[beyond], n_fft, n_cp)) @ a[beyond]
    return out * phase[:, None]


def rate_from_sinr(sinr: np.ndarray, cfg: OfdmConfig) -> float:
    return float(cfg.rate_prefactor * np.sum(np.log2(1.0 + sinr)))


def sinr_tf(effch: EffectiveChannels, snr: float, cfg: OfdmConfig) -> SinrRateReport:
    """Per-subcarrier SINR and rate for a precoded link.

    The interference on subcarrier ``i`` is ``|isi_same_i|^2`` plus
    ``2 |ici[l, i]|^2`` over ``l != i``; ICI and ISI from the same
    subcarrier ``l`` carry equal power, hence the factor 2.
    """
    if not snr > 0:
        raise ValueError("snr must be positive")
    signal = np.abs(effch.desired) ** 2
    interference = np.abs(effch.isi_same) ** 2 + 2.0 * np.sum(np.abs(effch.ici) ** 2, axis=0)
    sinr = signal / (interference + 1.0 / snr)
    return SinrRateReport(signal, interference, sinr, rate_from_sinr(sinr, cfg))
