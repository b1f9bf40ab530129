"""Latency components and end-to-end composition for both architectures.

Per packet of ``l`` bits from a VRU whose offset bin holds ``n_hat``
concurrent senders:

    backhaul    t_bh  = l * n_hat / c_bh          (capacity shared equally)
    execution   t_exc = n_hat * l * beta / f      (server batches the bin)
    transport + core: one combined uniform draw per packet, one-way

End-to-end, distant cloud:  t_ul + 2*(t_bh + t_tn_cn) + t_exc + t_dl
End-to-end, edge host:      t_ul + t_exc + t_dl   (no network segment)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

ARCHITECTURES = ("cloud", "mec")


@dataclass(frozen=True)
class TnCnDistribution:
    """Uniform one-way transport+core delay, in seconds."""

    low_s: float
    high_s: float

    def __post_init__(self):
        if not 0 <= self.low_s <= self.high_s:
            raise ConfigurationError("transport+core delay range must satisfy 0 <= min <= max")

    @property
    def mean_s(self) -> float:
        return 0.5 * (self.low_s + self.high_s)


@dataclass(frozen=True)
class NetworkParams:
    backhaul_bps: float = 10e6
    tn_cn: TnCnDistribution = TnCnDistribution(0.035, 0.055)
    server_cycles_per_s: float = 9e9

    def __post_init__(self):
        if self.backhaul_bps <= 0:
            raise ConfigurationError("backhaul capacity must be positive")
        if self.server_cycles_per_s <= 0:
            raise ConfigurationError("server capacity must be positive")


def backhaul_latency(size_bits, n_hat, backhaul_bps: float):
    """Routing time through the shared finite-capacity backhaul."""
    if backhaul_bps <= 0:
        raise ConfigurationError("backhaul capacity must be positive")
    out = np.asarray(size_bits, dtype=float) * np.asarray(n_hat, dtype=float) / backhaul_bps
    return out if out.ndim else float(out)


def execution_latency(size_bits, cycles_per_bit, n_hat, server_cycles_per_s: float):
    """Processing time when the server's capacity is split over the bin."""
    if server_cycles_per_s <= 0:
        raise ConfigurationError("server capacity must be positive")
    out = (
        np.asarray(n_hat, dtype=float)
        * np.asarray(size_bits, dtype=float)
        * np.asarray(cycles_per_bit, dtype=float)
        / server_cycles_per_s
    )
    return out if out.ndim else float(out)


def sample_tn_cn(dist: TnCnDistribution, rng: np.random.Generator, size=None):
    """One combined transport+core one-way delay draw per packet."""
    draw = rng.uniform(dist.low_s, dist.high_s, size=size)
    return draw if size is not None else float(draw)


@dataclass(frozen=True)
class LatencyBreakdown:
    """Per-VRU one-way component latencies and E2E figures, in seconds."""

    vru_id: int
    t_ul: float
    t_bh: float
    t_tn_cn: float
    t_exc: float
    t_dl: float
    e2e_cloud: float
    e2e_mec: float

    @property
    def one_way_cloud(self) -> float:
        """Diagnostic: uplink-to-processing one-way time in the cloud case."""
        return self.t_ul + self.t_bh + self.t_tn_cn + self.t_exc

    def e2e(self, architecture: str) -> float:
        if architecture == "cloud":
            return self.e2e_cloud
        if architecture == "mec":
            return self.e2e_mec
        raise ValueError(f"unknown architecture {architecture!r}")


def compose_e2e(
    vru_id: int,
    t_ul: float,
    t_bh: float,
    t_tn_cn: float,
    t_exc: float,
    t_dl: float,
) -> LatencyBreakdown:
    """Combine one packet's components into both architectures' E2E figures.

    The edge-host path skips backhaul and transport/core entirely, so
    e2e_cloud == e2e_mec + 2*(t_bh + t_tn_cn) holds exactly by construction.
    """
    components = (t_ul, t_bh, t_tn_cn, t_exc, t_dl)
    if any(c < 0 for c in components):
        raise ValueError("latency components must be non-negative")
    e2e_mec = t_ul + t_exc + t_dl
    e2e_cloud = e2e_mec + 2.0 * (t_bh + t_tn_cn)
    return LatencyBreakdown(
        vru_id=vru_id,
        t_ul=t_ul,
        t_bh=t_bh,
        t_tn_cn=t_tn_cn,
        t_exc=t_exc,
        t_dl=t_dl,
        e2e_cloud=e2e_cloud,
        e2e_mec=e2e_mec,
    )
