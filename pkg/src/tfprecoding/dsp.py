"""
OFDM numerology, DFT helpers, the CP weight functions and QAM constellations.

Everything here is a pure function of its arguments. The weight functions
accept integer scalars or arrays and broadcast like numpy ufuncs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

__all__ = [
    "OfdmConfig",
    "QamConstellation",
    "DegenerateChannelError",
    "dft",
    "weight_c",
    "weight_ctilde",
    "c_weights",
    "ctilde_offset",
    "ctilde_table",
    "offset_mix",
    "qam_map",
    "qam_detect",
]


class DegenerateChannelError(ValueError):
    """Raised when an effective channel or a precoder norm is exactly zero."""


@dataclass(frozen=True)
class OfdmConfig:
    """OFDM numerology.

    Parameters
    ----------
    n_fft : int
        IFFT size.
    n_cp : int
        Cyclic prefix length in samples.
    n_sc : int
        Number of occupied subcarriers, placed at bins ``0 .. n_sc-1``.
    scs_hz : float
        Subcarrier spacing in Hz.
    """

    n_fft: int
    n_cp: int
    n_sc: int
    scs_hz: float = 60e3

    def __post_init__(self):
        if self.n_fft < 1:
            raise ValueError(f"n_fft must be positive, got {self.n_fft}")
        if not 0 <= self.n_cp < self.n_fft:
            raise ValueError(f"n_cp must satisfy 0 <= n_cp < n_fft, got {self.n_cp}")
        if not 1 <= self.n_sc <= self.n_fft:
            raise ValueError(f"n_sc must satisfy 1 <= n_sc <= n_fft, got {self.n_sc}")
        if not self.scs_hz > 0:
            raise ValueError(f"scs_hz must be positive, got {self.scs_hz}")

    @property
    def symbol_duration(self) -> float:
        return 1.0 / self.scs_hz

    @property
    def sample_period(self) -> float:
        return self.symbol_duration / self.n_fft

    @property
    def block_length(self) -> int:
        """Samples per OFDM block including the CP."""
        return self.n_fft + self.n_cp

    @property
    def cp_efficiency(self) -> float:
        return self.n_fft / (self.n_fft + self.n_cp)

    @property
    def rate_prefactor(self) -> float:
        """Scale applied to the per-subcarrier sum of log2(1 + SINR)."""
        return self.n_fft / ((self.n_fft + self.n_cp) * self.n_sc)

    def with_cp(self, n_cp: int) -> "OfdmConfig":
        return OfdmConfig(self.n_fft, n_cp, self.n_sc, self.scs_hz)


def dft(x, inverse: bool = False) -> np.ndarray:
    """DFT along the last axis.

    The forward kernel is ``exp(-2j*pi*i*k/N)`` and unscaled; the inverse
    carries the ``1/N`` factor. Link-level scale factors are applied by the
    callers, never hidden here.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape[-1] < 1:
        raise ValueError("dft needs at least one sample")
    return np.fft.ifft(x) if inverse else np.fft.fft(x)


def c_weights(m, n_fft: int, n_cp: int):
    """Desired-signal weight ``c[m]`` for a tap at integer delay ``m``.

    Piecewise linear: ramps up on ``[-n_fft, 0]``, equals 1 on ``[0, n_cp]``,
    ramps down on ``[n_cp, n_fft + n_cp]`` and is zero elsewhere.
    """
    m = np.asarray(m)
    out = np.zeros(m.shape, dtype=float)
    neg = (m >= -n_fft) & (m <= 0)
    flat = (m >= 0) & (m <= n_cp)
    tail = (m > n_cp) & (m <= n_fft + n_cp)
    out[neg] = (n_fft + m[neg]) / n_fft
    out[flat] = 1.0
    out[tail] = (n_fft - (m[tail] - n_cp)) / n_fft
    return out if out.ndim else float(out)


def ctilde_offset(d, m, n_fft: int, n_cp: int):
    """Interference weight as a function of the subcarrier offset ``d = l - i``.

    ``d == 0`` gives the diagonal extension ``(1 - c[m]) / sqrt(2)``.
    ``d`` must lie strictly inside ``(-n_fft, n_fft)`` so that the geometric
    sum denominator never vanishes for ``d != 0``.
    """
    d, m = np.broadcast_arrays(np.asarray(d), np.asarray(m))
    if np.any(np.abs(d) >= n_fft):
        raise ValueError("subcarrier offset must satisfy |l - i| < n_fft")
    out = np.zeros(d.shape, dtype=complex)

    diag = d == 0
    out[diag] = (1.0 - c_weights(m[diag], n_fft, n_cp)) / np.sqrt(2.0)

    off = ~diag
    dd = d[off]
    mm = m[off]
    denom = n_fft * (1.0 - np.exp(2j * np.pi * dd / n_fft))
    assert np.all(np.abs(denom) > 0)
    val = np.zeros(dd.shape, dtype=complex)
    neg = (mm >= -n_fft) & (mm <= 0)
    tail = (mm >= n_cp) & (mm <= n_fft + n_cp)
    val[neg] = (1.0 - np.exp(2j * np.pi * mm[neg] * dd[neg] / n_fft)) / denom[neg]
    val[tail] = (np.exp(2j * np.pi * (mm[tail] - n_cp) * dd[tail] / n_fft) - 1.0) / denom[tail]
    out[off] = val
    return out if out.ndim else complex(out)


@lru_cache(maxsize=256)
def _ctilde_table_cached(n_fft: int, n_cp: int, n_sc: int, shifts: tuple) -> np.ndarray:
    table = ctilde_offset(
        np.arange(-n_sc + 1, n_sc)[:, None], np.asarray(shifts, dtype=np.int64)[None, :], n_fft, n_cp
    )
    table.setflags(write=False)
    return table


def ctilde_table(n_fft: int, n_cp: int, n_sc: int, delays) -> np.ndarray:
    """``c~`` for every offset ``d = -n_sc+1 .. n_sc-1`` (rows) and delay (columns).

    Tables are cached per numerology and delay set since the same profile is
    reused across channel realizations.
    """
    return _ctilde_table_cached(int(n_fft), int(n_cp), int(n_sc), tuple(int(m) for m in np.ravel(delays)))


def offset_mix(table: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``out[l, i] = sum_n table[l - i + n_sc - 1, n] * b[l, n]``.

    ``table`` comes from :func:`ctilde_table`; ``b`` has one row per source
    subcarrier ``l`` and one column per delay.
    """
    n_sc = b.shape[0]
    v = b @ table.T
    l = np.arange(n_sc)
    return v[l[:, None], l[:, None] - l[None, :] + n_sc - 1]


def weight_c(m, cfg: OfdmConfig):
    """``c[m]`` for the numerology in ``cfg``."""
    return c_weights(m, cfg.n_fft, cfg.n_cp)


def weight_ctilde(l, i, m, cfg: OfdmConfig):
    """Weight ``c~_{l,i}[m]`` of subcarrier ``l`` leaking onto subcarrier ``i``."""
    return ctilde_offset(np.asarray(l) - np.asarray(i), m, cfg.n_fft, cfg.n_cp)


def _gray_to_binary(g: np.ndarray) -> np.ndarray:
    b = g.copy()
    shift = g >> 1
    while np.any(shift):
        b ^= shift
        shift >>= 1
    return b


@dataclass(frozen=True)
class QamConstellation:
    """Gray-coded square QAM with unit average energy.

    Point ``points[k]`` is the symbol for index ``k``; the upper half of the
    index bits selects the in-phase level, the lower half the quadrature one.
    """

    order: int
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.order not in (4, 16, 64):
            raise ValueError(f"unsupported QAM order {self.order}; expected 4, 16 or 64")
        side = int(round(np.sqrt(self.order)))
        half_bits = int(np.log2(side))
        idx = np.arange(self.order)
        i_gray = idx >> half_bits
        q_gray = idx & (side - 1)
        levels = 2 * np.arange(side) - (side - 1)
        pts = levels[_gray_to_binary(i_gray)] + 1j * levels[_gray_to_binary(q_gray)]
        pts = pts / np.sqrt(2.0 * (self.order - 1) / 3.0)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def bits_per_symbol(self) -> int:
        return int(np.log2(self.order))

    @cached_property
    def min_distance(self) -> float:
        return float(2.0 / np.sqrt(2.0 * (self.order - 1) / 3.0))


def qam_map(indices, constellation: QamConstellation) -> np.ndarray:
    """Map integer symbol indices onto constellation points."""
    indices = np.asarray(indices)
    if np.any((indices < 0) | (indices >= constellation.order)):
        raise ValueError("symbol index out of range")
    return constellation.points[indices]


def qam_detect(y, h_eff, constellation: QamConstellation) -> np.ndarray:
    """Maximum-likelihood detection of ``y = h_eff * q + noise``.

    Returns the index minimising ``|y - h_eff * q|``. Since ``|h_eff|`` is a
    common factor this is nearest-neighbour detection on ``y / h_eff``.
    """
    y = np.asarray(y, dtype=complex)
    h_eff = np.broadcast_to(np.asarray(h_eff, dtype=complex), y.shape)
    if np.any(h_eff == 0):
        raise DegenerateChannelError("zero effective channel; cannot equalize")
    z = (y / h_eff)[..., None]
    return np.argmin(np.abs(z - constellation.points), axis=-1)
