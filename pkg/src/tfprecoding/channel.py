"""
Sample-spaced power delay profiles and block-fading Rayleigh channel draws.

A channel is kept sparse: a vector of integer tap delays and one complex
row vector per tap (one entry per transmit antenna).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .dsp import OfdmConfig

__all__ = [
    "PowerDelayProfile",
    "ChannelRealization",
    "SpatialCorrelationSpec",
    "pdp_from_spec",
    "read_pdp_table",
    "etu_pdp",
    "exponential_pdp",
    "single_tap_pdp",
    "correlation_matrix",
    "hermitian_sqrt",
    "generate_cir",
    "freq_response",
]


def _frozen(a, dtype) -> np.ndarray:
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PowerDelayProfile:
    """Average tap energies ``E_p`` at integer sample delays ``p``.

    Only taps with non-zero energy are stored; delays are strictly
    increasing. ``L`` is the largest delay plus one.
    """

    delays: np.ndarray
    energies: np.ndarray

    def __post_init__(self):
        delays = _frozen(self.delays, np.int64)
        energies = _frozen(self.energies, float)
        if delays.ndim != 1 or delays.shape != energies.shape or delays.size == 0:
            raise ValueError("delays and energies must be equal-length, non-empty 1-D sequences")
        if np.any(delays < 0) or np.any(np.diff(delays) <= 0):
            raise ValueError("tap delays must be non-negative and strictly increasing")
        if np.any(energies <= 0):
            raise ValueError("tap energies must be positive")
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "energies", energies)

    @property
    def L(self) -> int:
        return int(self.delays[-1]) + 1

    @property
    def n_taps(self) -> int:
        return int(self.delays.size)

    @property
    def total_energy(self) -> float:
        """``alpha_L^2``."""
        return float(np.sum(self.energies))

    def alpha_sq(self, tau: int) -> float:
        """Energy of the taps with delay strictly below ``tau``."""
        return float(np.sum(self.energies[self.delays < tau]))

    def dense(self, length: int | None = None) -> np.ndarray:
        """Energies on the full sample grid ``0 .. length-1`` (default ``L``)."""
        length = self.L if length is None else length
        out = np.zeros(length)
        keep = self.delays < length
        out[self.delays[keep]] = self.energies[keep]
        return out

    def normalized(self) -> "PowerDelayProfile":
        return PowerDelayProfile(self.delays, self.energies / self.total_energy)

    def check_fits(self, cfg: OfdmConfig) -> None:
        if self.L > cfg.n_fft:
            raise ValueError(
                f"channel length L={self.L} exceeds n_fft={cfg.n_fft}; "
                "the maximum delay must be shorter than one OFDM symbol"
            )

    def __eq__(self, other):
        if not isinstance(other, PowerDelayProfile):
            return NotImplemented
        return np.array_equal(self.delays, other.delays) and np.array_equal(
            self.energies, other.energies
        )

    def __repr__(self):
        return f"PowerDelayProfile(n_taps={self.n_taps}, L={self.L})"


def pdp_from_spec(delays_ns, powers_db, cfg: OfdmConfig) -> PowerDelayProfile:
    """Quantize a tapped-delay-line table onto the sample grid of ``cfg``.

    Delays are rounded to the nearest sample, taps landing on the same
    sample are merged by adding their linear energies, and the result is
    normalized to unit total energy.
    """
    delays_ns = np.asarray(delays_ns, dtype=float)
    powers_db = np.asarray(powers_db, dtype=float)
    if delays_ns.shape != powers_db.shape or delays_ns.ndim != 1 or delays_ns.size == 0:
        raise ValueError("delays_ns and powers_db must be equal-length, non-empty")
    if np.any(delays_ns < 0):
        raise ValueError("tap delays must be non-negative")
    samples = np.rint(delays_ns * 1e-9 / cfg.sample_period).astype(np.int64)
    lin = 10.0 ** (powers_db / 10.0)
    uniq, inv = np.unique(samples, return_inverse=True)
    merged = np.zeros(uniq.size)
    np.add.at(merged, inv, lin)
    pdp = PowerDelayProfile(uniq, merged).normalized()
    pdp.check_fits(cfg)
    return pdp


def read_pdp_table(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a ``delay_ns power_db`` table; ``#`` starts a comment."""
    rows = []
    header_seen = False
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.replace(",", " ").split()
        if not header_seen:
            if [f.lower() for f in fields] != ["delay_ns", "power_db"]:
                raise ValueError(f"{path}:{lineno}: expected header 'delay_ns power_db'")
            header_seen = True
            continue
        if len(fields) != 2:
            raise ValueError(f"{path}:{lineno}: expected two columns, got {len(fields)}")
        rows.append((float(fields[0]), float(fields[1])))
    if not rows:
        raise ValueError(f"{path}: no taps found")
    arr = np.array(rows)
    return arr[:, 0], arr[:, 1]


def etu_pdp(cfg: OfdmConfig) -> PowerDelayProfile:
    """The shipped ETU profile quantized for ``cfg``."""
    with resources.as_file(resources.files("tfprecoding") / "data" / "etu.txt") as p:
        delays, powers = read_pdp_table(p)
    return pdp_from_spec(delays, powers, cfg)


def exponential_pdp(length: int) -> PowerDelayProfile:
    """``E_p = exp(-p)`` for ``p = 0 .. length-1``, normalized."""
    p = np.arange(length)
    return PowerDelayProfile(p, np.exp(-p.astype(float))).normalized()


def single_tap_pdp(delay: int = 0) -> PowerDelayProfile:
    return PowerDelayProfile([delay], [1.0])


@dataclass(frozen=True)
class SpatialCorrelationSpec:
    """Exponential correlation ``rho**|k-l| * exp(1j*(k-l)*phi)`` between antennas.

    ``phi`` (angle of departure) is drawn uniformly on ``aod_range`` per tap
    and per channel realization.
    """

    rho: float
    aod_range: tuple[float, float] = (-math.pi / 3, math.pi / 3)

    def __post_init__(self):
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        lo, hi = self.aod_range
        if hi < lo:
            raise ValueError("aod_range must be an increasing interval")


def correlation_matrix(n_t: int, rho: float, phi: float) -> np.ndarray:
    k = np.arange(n_t)
    diff = k[:, None] - k[None, :]
    return rho ** np.abs(diff) * np.exp(1j * diff * phi)


def hermitian_sqrt(R: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Hermitian square root via eigendecomposition.

    Eigenvalues down to ``-tol`` (relative to the largest) are clamped to
    zero; anything more negative means ``R`` is not PSD.
    """
    vals, vecs = np.linalg.eigh(R)
    scale = max(float(np.max(np.abs(vals))), 1.0)
    if np.min(vals) < -tol * scale:
        raise ValueError("correlation matrix is not positive semi-definite")
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One multi-antenna CIR: ``taps[q]`` is the row vector at ``delays[q]``."""

    delays: np.ndarray
    taps: np.ndarray

    def __post_init__(self):
        delays = _frozen(self.delays, np.int64)
        taps = _frozen(np.atleast_2d(self.taps), complex)
        if taps.shape[0] != delays.size:
            raise ValueError("one tap vector per delay is required")
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "taps", taps)

    @property
    def n_t(self) -> int:
        return int(self.taps.shape[1])

    @property
    def L(self) -> int:
        return int(self.delays[-1]) + 1

    def dense(self) -> np.ndarray:
        """CIR as an ``(L, n_t)`` array with zero rows between taps."""
        out = np.zeros((self.L, self.n_t), dtype=complex)
        out[self.delays] = self.taps
        return out

    def scaled(self, gamma: float) -> "ChannelRealization":
        return ChannelRealization(self.delays, gamma * self.taps)


def _cn(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def generate_cir(
    pdp: PowerDelayProfile,
    n_t: int,
    rng: np.random.Generator,
    correlation: SpatialCorrelationSpec | None = None,
) -> ChannelRealization:
    """Draw one Rayleigh block-fading CIR following ``pdp``.

    Without ``correlation`` the entries of every tap are i.i.d.
    ``CN(0, E_p)``. With it, tap ``p`` is ``sqrt(E_p) * z @ sqrtm(R_p)`` for a
    unit-variance i.i.d. row ``z``.
    """
    if n_t < 1:
        raise ValueError("n_t must be at least 1")
    z = _cn(rng, (pdp.n_taps, n_t))
    if correlation is not None:
        lo, hi = correlation.aod_range
        phis = rng.uniform(lo, hi, size=pdp.n_taps)
        for q, phi in enumerate(phis):
            z[q] = z[q] @ hermitian_sqrt(correlation_matrix(n_t, correlation.rho, phi))
    taps = np.sqrt(pdp.energies)[:, None] * z
    return ChannelRealization(pdp.delays, taps)


def freq_response(cir: ChannelRealization, subcarriers, n_fft: int, tau_tr: int | None = None) -> np.ndarray:
    """Frequency response of the CIR truncated to delays below ``tau_tr``.

    Returns an array of shape ``(len(subcarriers), n_t)`` (or ``(n_t,)`` for
    a scalar subcarrier). ``tau_tr=None`` keeps every tap.
    """
    sub = np.asarray(subcarriers)
    keep = slice(None) if tau_tr is None else cir.delays < tau_tr
    delays = cir.delays[keep]
    taps = cir.taps[keep]
    phase = np.exp(-2j * np.pi * np.outer(np.atleast_1d(sub), delays) / n_fft)
    out = phase @ taps
    return out[0] if sub.ndim == 0 else out
