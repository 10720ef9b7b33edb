"""
Multi-antenna time-reversal (TR) filtering of a common OFDM signal.

Antenna ``t`` transmits ``s`` filtered by ``conj(h_t[-n]) / omega``. The
link then collapses to a single-antenna OFDM system with the non-causal
channel ``g[n]``. The FFT window is placed ``delta`` samples early so that the
pulse around ``n = 0`` sits inside the CP; in effect the receiver sees
``g[n - delta]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .dsp import OfdmConfig, c_weights, ctilde_table, offset_mix
from .precoding import SinrRateReport, rate_from_sinr

__all__ = [
    "TrEffectiveChannel",
    "TrChannels",
    "default_delta",
    "tr_effective_channel",
    "tr_desired",
    "tr_channels",
    "sinr_tr",
    "inband_ripple",
]


def default_delta(n_cp: int) -> int:
    return n_cp // 2


@dataclass(frozen=True, eq=False)
class TrEffectiveChannel:
    """``g[n]`` stored densely for ``n = -L+1 .. L-1`` (``g[n]`` at index ``n + L - 1``).

    ``lags`` lists every delay difference between two channel taps; ``g`` is
    zero outside this set by construction.
    """

    g: np.ndarray
    lags: np.ndarray
    omega_tilde: float
    delta: int
    L: int

    def at(self, n) -> np.ndarray:
        n = np.asarray(n)
        out = np.zeros(n.shape, dtype=complex)
        inside = np.abs(n) < self.L
        out[inside] = self.g[n[inside] + self.L - 1]
        return out

    @property
    def support(self) -> np.ndarray:
        return np.arange(-self.L + 1, self.L)


@dataclass(frozen=True, eq=False)
class TrChannels:
    """Coefficients of the demodulated block for the TR air interface.

    ``ici[l, i]`` (zero diagonal), ``isi_prev[l, i]`` and ``isi_next[l, i]``
    multiply ``x_{0,l}``, ``x_{-1,l}`` and ``x_{1,l}`` in subcarrier ``i``.
    """

    desired: np.ndarray
    ici: np.ndarray
    isi_prev: np.ndarray
    isi_next: np.ndarray


def tr_effective_channel(cir: ChannelRealization, cfg: OfdmConfig, delta: int | None = None) -> TrEffectiveChannel:
    delta = default_delta(cfg.n_cp) if delta is None else int(delta)
    L = cir.L
    gram = cir.taps @ cir.taps.conj().T  # gram[p, q] = h_p h_q^H
    omega = float(np.sqrt(np.real(np.trace(gram))))
    lag = cir.delays[:, None] - cir.delays[None, :]
    g = np.zeros(2 * L - 1, dtype=complex)
    np.add.at(g, (lag + L - 1).ravel(), gram.ravel())
    g /= omega
    g[L - 1] = g[L - 1].real
    lags = np.unique(lag)
    return TrEffectiveChannel(g, lags, omega, delta, L)


def _check_delta(trch: TrEffectiveChannel, cfg: OfdmConfig) -> None:
    if not 0 <= trch.delta <= cfg.n_cp:
        raise ValueError(f"delta must satisfy 0 <= delta <= n_cp={cfg.n_cp}, got {trch.delta}")
    if trch.L > cfg.n_fft:
        raise ValueError("channel longer than one OFDM symbol")


def tr_desired(trch: TrEffectiveChannel, cfg: OfdmConfig) -> np.ndarray:
    """``G_{0,i,i}`` only; cheaper than :func:`tr_channels` when ICI/ISI are not needed."""
    _check_delta(trch, cfg)
    n_fft, d = cfg.n_fft, trch.delta
    i = np.arange(cfg.n_sc)
    n = trch.lags
    c = c_weights(n + d, n_fft, cfg.n_cp)
    phase = np.exp(-2j * np.pi * np.outer(n, i) / n_fft)
    return np.exp(-2j * np.pi * i * d / n_fft) * ((c * trch.at(n)) @ phase)


def tr_channels(trch: TrEffectiveChannel, cfg: OfdmConfig) -> TrChannels:
    _check_delta(trch, cfg)
    n_fft, n_cp, n_sc, d = cfg.n_fft, cfg.n_cp, cfg.n_sc, trch.delta
    l = np.arange(n_sc)
    lags = trch.lags
    gl = trch.at(lags)
    # raw sums of c~_{l-i}[n + delta] g[n] exp(-2j pi l n / n_fft), split by the sign of n
    b = gl[None, :] * np.exp(-2j * np.pi * np.outer(l, lags) / n_fft)
    acc = {}
    for sign in (-1, 0, 1):
        sel = np.sign(lags) == sign
        acc[sign] = offset_mix(ctilde_table(n_fft, n_cp, n_sc, lags[sel] + d), b[:, sel])
    one_minus_c = 1.0 - c_weights(lags + d, n_fft, n_cp)
    diag = {-1: b[:, lags >= 0] @ one_minus_c[lags >= 0], 1: b[:, lags <= 0] @ one_minus_c[lags <= 0]}

    total = acc[-1] + acc[0] + acc[1]
    prev_raw = acc[1] + acc[0]  # b = -1 sums over n in [0, L-1]
    next_raw = acc[-1] + acc[0]  # b = +1 sums over n in [-L+1, 0]

    ph0 = np.exp(-2j * np.pi * l * d / n_fft)
    ph_prev = np.exp(-2j * np.pi * l * (-n_cp + d) / n_fft)
    ph_next = np.exp(-2j * np.pi * l * (n_cp + d) / n_fft)

    ici = ph0[:, None] * total
    ici[l, l] = 0.0
    isi_prev = -ph_prev[:, None] * prev_raw
    isi_prev[l, l] = ph_prev * diag[-1]
    isi_next = -ph_next[:, None] * next_raw
    isi_next[l, l] = ph_next * diag[1]
    return TrChannels(tr_desired(trch, cfg), ici, isi_prev, isi_next)


def sinr_tr(coeffs: TrChannels, snr: float, cfg: OfdmConfig) -> SinrRateReport:
    if not snr > 0:
        raise ValueError("snr must be positive")
    signal = np.abs(coeffs.desired) ** 2
    interference = (
        np.sum(np.abs(coeffs.ici) ** 2, axis=0)
        + np.sum(np.abs(coeffs.isi_prev) ** 2, axis=0)
        + np.sum(np.abs(coeffs.isi_next) ** 2, axis=0)
    )
    sinr = signal / (interference + 1.0 / snr)
    return SinrRateReport(signal, interference, sinr, rate_from_sinr(sinr, cfg))


def inband_ripple(coeffs: TrChannels) -> tuple[np.ndarray, float]:
    """Per-subcarrier ``|G_{0,i,i}|^2`` and its max/min spread in dB.

    TR normalizes the whole signal rather than each subcarrier, so the
    received spectrum follows the channel; this reports by how much.
    """
    p = np.abs(coeffs.desired) ** 2
    return p, float(10.0 * np.log10(p.max() / p.min()))
