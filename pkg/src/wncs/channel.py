"""Finite-blocklength AWGN link model and reproducible loss sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class BlocklengthError(ValueError):
    """Raised when a frame would carry fewer than one channel symbol."""


@dataclass(frozen=True)
class ChannelParams:
    """AWGN link parameters. SNR is stored as a linear power ratio."""

    bandwidth: float = 1000.0
    symbol_rate: float = 10000.0
    snr: float = 1.0
    payload_bits: int = 64

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be > 0")
        if not self.symbol_rate > 0:
            raise ValueError("symbol_rate must be > 0")
        if not self.snr > 0:
            raise ValueError("snr must be > 0")
        if self.payload_bits < 1:
            raise ValueError("payload_bits must be >= 1")


def snr_db_to_linear(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def capacity(params: ChannelParams) -> float:
    """Shannon capacity C = B log2(1 + snr) in bit/s."""
    return params.bandwidth * math.log2(1.0 + params.snr)


def dispersion(snr: float) -> float:
    """AWGN channel dispersion V = 1 - 1/(1+snr)^2, in (0, 1) for snr > 0."""
    if not snr > 0:
        raise ValueError("snr must be > 0")
    return 1.0 - 1.0 / (1.0 + snr) ** 2


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x) = erfc(x / sqrt(2)) / 2."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def blocklength(params: ChannelParams, t_ctr: float) -> float:
    """Channel symbols per frame when the frame occupies one control period."""
    return params.symbol_rate * t_ctr


def per(params: ChannelParams, t_ctr: float) -> float:
    """Packet error rate of one frame in the normal approximation.

    eps = Q( sqrt(n/V) * ln2 * (log2(1+snr) - d/n) ) with n = symbol_rate * t_ctr.
    The bits-to-nats factor ln2 multiplies the whole rate difference, so the
    error rate is exactly 0.5 at rate equal to capacity. Result clamped to
    [0, 1].
    """
    n = blocklength(params, t_ctr)
    if n < 1.0:
        raise BlocklengthError(
            f"blocklength {n:.6g} symbols < 1 (t_ctr={t_ctr:.6g}, "
            f"symbol_rate={params.symbol_rate:.6g})"
        )
    v = dispersion(params.snr)
    rate_margin = math.log2(1.0 + params.snr) - params.payload_bits / n
    arg = math.sqrt(n / v) * math.log(2.0) * rate_margin
    return min(1.0, max(0.0, q_function(arg)))


class RngStream:
    """Deterministic random stream keyed by (master seed, episode, link).

    Identical origins always reproduce the identical draw sequence, so
    episodes can run in any order or on any worker without changing results.
    """

    def __init__(self, master_seed: int, episode_index: int, link_index: int):
        self.origin = (int(master_seed), int(episode_index), int(link_index))
        self._gen = np.random.Generator(np.random.PCG64(self.origin))

    def uniform(self) -> float:
        return float(self._gen.random())

    def normal(self, count: int) -> np.ndarray:
        return self._gen.standard_normal(count)


def sample_loss(eps: float, rng: RngStream) -> bool:
    """Bernoulli frame erasure: true with probability eps, one draw consumed."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must be in [0, 1]")
    return rng.uniform() < eps
