"""
Rayleigh MIMO channel model: random channels, SNR bookkeeping and the
complex-to-real rewrite of the system.

Trials are generated from counter-based streams (Philox) keyed by the base
seed, so trial ``i`` can be regenerated on its own in any worker.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constellation import Constellation
from .linalg import realify

__all__ = [
    "ChannelInstance",
    "Trial",
    "sample_channel",
    "sample_trial",
    "snr_to_n0",
    "db_to_linear",
    "trial_rng",
    "CHANNEL_STREAM",
    "SIGNAL_STREAM",
]

CHANNEL_STREAM = 0
SIGNAL_STREAM = 1


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def snr_to_n0(rho: float, M: int, es: float) -> float:
    """Noise variance per complex entry for a linear receive SNR ``rho``.

    ``rho`` is the mean SNR per receive antenna: each row of the channel has
    expected squared norm ``M``, so ``N0 = M * Es / rho``.
    """
    if rho <= 0:
        raise ValueError("SNR must be positive")
    return M * es / rho


def trial_rng(seed: int, index: int, stream: int) -> np.random.Generator:
    """Independent generator for (seed, trial index, stream).

    The index and stream live in the high counter words, so the low word has
    2**64 draws of headroom before two trials could overlap.
    """
    bg = np.random.Philox(key=np.uint64(seed),
                          counter=[0, 0, np.uint64(index), np.uint64(stream)])
    return np.random.Generator(bg)


@dataclass
class ChannelInstance:
    hc: np.ndarray
    h: np.ndarray
    n0: float
    rho: float

    @property
    def M(self) -> int:
        return self.hc.shape[1]

    @property
    def N(self) -> int:
        return self.hc.shape[0]


@dataclass
class Trial:
    x: np.ndarray
    w: np.ndarray
    y: np.ndarray
    seed: Optional[int] = None

    @property
    def xc(self) -> np.ndarray:
        half = self.x.shape[0] // 2
        return self.x[:half] + 1j * self.x[half:]


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """i.i.d. CN(0, 1): variance 1/2 per real dimension."""
    g = rng.standard_normal(shape + (2,) if isinstance(shape, tuple)
                            else (shape, 2))
    return (g[..., 0] + 1j * g[..., 1]) * np.sqrt(0.5)


def sample_channel(M: int, N: int, rng: np.random.Generator, *,
                   rho: float = 1.0, es: float = 1.0) -> ChannelInstance:
    if not 1 <= M <= N:
        raise ValueError("need 1 <= M <= N")
    hc = complex_gaussian(rng, (N, M))
    return ChannelInstance(hc=hc, h=realify(hc), n0=snr_to_n0(rho, M, es),
                           rho=rho)


def sample_trial(ch: ChannelInstance, S: Constellation,
                 rng: np.random.Generator, seed: Optional[int] = None) -> Trial:
    """Uniform symbols, Gaussian noise of variance ``N0/2`` per real dimension."""
    x = S.sample(rng, 2 * ch.M)
    w = rng.standard_normal(2 * ch.N) * np.sqrt(ch.n0 / 2)
    y = ch.h @ x + w
    return Trial(x=x, w=w, y=y, seed=seed)
