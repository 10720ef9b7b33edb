"""Brute-force time-domain reference computations used as test oracles.

Nothing here calls into the package's closed forms; signals are built
sample by sample, convolved tap by tap and demodulated with an explicit
DFT sum.
"""

import numpy as np


def _dft_rows(n_fft, n_sc):
    k = np.arange(n_fft)
    i = np.arange(n_sc)
    return np.exp(-2j * np.pi * np.outer(i, k) / n_fft)


def _live(h_dense):
    # all-zero rows contribute nothing to the convolution
    return np.flatnonzero(np.any(h_dense != 0, axis=1))


def _ofdm_block(x_freq, n_fft, n_cp, n_sc):
    """Samples k = -n_cp .. n_fft-1 of one block; x_freq has shape (..., n_sc)."""
    k = np.arange(-n_cp, n_fft)
    l = np.arange(n_sc)
    basis = np.exp(2j * np.pi * np.outer(l, k) / n_fft) / np.sqrt(n_sc)
    return x_freq @ basis


def tf_coefficients(h_dense, W, n_fft, n_cp):
    """Coefficient of ``x_{b,l}`` in ``y[i]`` for b in (-1, 0).

    h_dense: (L, n_t); W: (n_sc, n_t) with row l the precoder of subcarrier l.
    Returns array (2, n_sc, n_sc) indexed [b + 1, l, i].
    """
    L, n_t = h_dense.shape
    n_sc = W.shape[0]
    blk = n_fft + n_cp
    out = np.zeros((2, n_sc, n_sc), dtype=complex)
    F = _dft_rows(n_fft, n_sc)
    for bi, b in enumerate((-1, 0)):
        start = (b + 1) * blk  # stream index of sample k = -n_cp of block b
        # batch over the one-hot source subcarrier l
        s = np.zeros((n_sc, n_t, 2 * blk), dtype=complex)
        onehot = np.eye(n_sc)
        # unprecoded block per source l: (n_sc, blk); then spread over antennas with w_l
        base = _ofdm_block(onehot, n_fft, n_cp, n_sc)
        s[:, :, start:start + blk] = base[:, None, :] * W[:, :, None]
        r = np.zeros((n_sc, 2 * blk), dtype=complex)
        for m in _live(h_dense):
            shifted = np.zeros_like(s)
            shifted[:, :, m:] = s[:, :, : 2 * blk - m]
            r += np.einsum("t,lts->ls", h_dense[m], shifted)
        win = blk + n_cp  # sample k = 0 of block 0
        y = np.sqrt(n_sc) / n_fft * (r[:, win:win + n_fft] @ F.T)
        out[bi] = y
    return out


def tr_coefficients(h_dense, n_fft, n_cp, n_sc, delta):
    """Coefficient of ``x_{b,l}`` in ``y[i]`` for b in (-1, 0, 1) through the TR chain.

    Each antenna filters the common OFDM signal with ``conj(h_t[-n]) / omega``
    delayed by ``delta`` samples; the receiver demodulates k = 0 .. n_fft-1 of
    block 0. Returns (3, n_sc, n_sc) indexed [b + 1, l, i].
    """
    L, n_t = h_dense.shape
    omega = np.sqrt(np.sum(np.abs(h_dense) ** 2))
    blk = n_fft + n_cp
    pad = 2 * L + delta + 2
    total = 3 * blk + 2 * pad
    origin = pad + blk + n_cp  # stream index of sample k = 0 of block 0
    F = _dft_rows(n_fft, n_sc)
    out = np.zeros((3, n_sc, n_sc), dtype=complex)
    onehot = np.eye(n_sc)
    base = _ofdm_block(onehot, n_fft, n_cp, n_sc)
    for bi, b in enumerate((-1, 0, 1)):
        s = np.zeros((n_sc, total), dtype=complex)
        start = origin - n_cp + b * blk
        s[:, start:start + blk] = base
        # transmit filter per antenna: stx_t[k] = sum_p conj(h_t[p]) s[k - delta + p] / omega
        stx = np.zeros((n_sc, n_t, total), dtype=complex)
        for p in _live(h_dense):
            sh = p - delta  # stx[k] gets s[k + sh]
            moved = np.zeros_like(s)
            if sh >= 0:
                moved[:, : total - sh] = s[:, sh:]
            else:
                moved[:, -sh:] = s[:, : total + sh]
            stx += np.conj(h_dense[p])[None, :, None] * moved[:, None, :] / omega
        r = np.zeros((n_sc, total), dtype=complex)
        for m in _live(h_dense):
            shifted = np.zeros_like(stx)
            shifted[:, :, m:] = stx[:, :, : total - m]
            r += np.einsum("t,lts->ls", h_dense[m], shifted)
        out[bi] = np.sqrt(n_sc) / n_fft * (r[:, origin:origin + n_fft] @ F.T)
    return out


def gaussian_tail(x):
    """Q(x) by numerical integration of the standard normal density."""
    from scipy.integrate import quad

    val, _ = quad(lambda t: np.exp(-0.5 * t * t) / np.sqrt(2.0 * np.pi), x, np.inf)
    return val


def awgn_qam_ser(order, snr):
    """SER of square QAM with unit-energy symbols and complex noise variance 1/snr.

    Each quadrature rail is an independent sqrt(order)-PAM decision with
    per-rail noise variance 1/(2 snr).
    """
    side = np.sqrt(order)
    d_min = 2.0 / np.sqrt(2.0 * (order - 1) / 3.0)
    sigma = np.sqrt(0.5 / snr)
    p_rail = 2.0 * (1.0 - 1.0 / side) * gaussian_tail(d_min / (2.0 * sigma))
    return 1.0 - (1.0 - p_rail) ** 2
