"""Periodic awareness-message workload.

Every period each VRU emits one packet: size and compute demand are drawn
uniform from their ranges, and the transmission start is a uniform offset
bin inside the period. Offsets are redrawn fresh every period; resource
sharing is driven by how many VRUs land in the same bin.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigurationError
from .scenario import Vru


@dataclass(frozen=True)
class TrafficParams:
    period_s: float = 0.1
    offset_bins: int = 5
    size_bits_range: tuple[float, float] = (8000.0, 12000.0)
    compute_cycles_per_bit_range: tuple[float, float] = (100.0, 300.0)

    def __post_init__(self):
        if self.period_s <= 0:
            raise ConfigurationError("period must be positive")
        if self.offset_bins < 1:
            raise ConfigurationError("at least one offset bin is required")
        if not 0 < self.size_bits_range[0] <= self.size_bits_range[1]:
            raise ConfigurationError("packet size range must satisfy 0 < min <= max")
        lo, hi = self.compute_cycles_per_bit_range
        if not 0 <= lo <= hi:
            raise ConfigurationError("compute range must satisfy 0 <= min <= max")


@dataclass(frozen=True)
class CamJob:
    """One VRU's packet in one period."""

    vru_id: int
    size_bits: float
    offset_bin: int
    compute_density: float  # cycles per bit
    period_index: int


def generate_period(
    vrus: Sequence[Vru],
    params: TrafficParams,
    period_index: int,
    rng: np.random.Generator,
) -> list[CamJob]:
    """Draw one period's worth of jobs: exactly one per VRU, fresh randomness."""
    if not vrus:
        raise ConfigurationError("cannot generate traffic for an empty VRU list")
    n = len(vrus)
    offsets = rng.integers(0, params.offset_bins, size=n)
    sizes = rng.uniform(params.size_bits_range[0], params.size_bits_range[1], size=n)
    densities = rng.uniform(
        params.compute_cycles_per_bit_range[0], params.compute_cycles_per_bit_range[1], size=n
    )
    return [
        CamJob(
            vru_id=vru.id,
            size_bits=float(sizes[i]),
            offset_bin=int(offsets[i]),
            compute_density=float(densities[i]),
            period_index=period_index,
        )
        for i, vru in enumerate(vrus)
    ]


def bin_occupancy(jobs: Sequence[CamJob], offset_bins: int) -> np.ndarray:
    """Number of jobs per offset bin."""
    offsets = np.fromiter((j.offset_bin for j in jobs), dtype=np.int64, count=len(jobs))
    return np.bincount(offsets, minlength=offset_bins)


def concurrent_count(jobs: Sequence[CamJob], vru_id: int) -> int:
    """How many jobs (including VRU ``vru_id``'s own) share that VRU's offset bin."""
    target = next((j for j in jobs if j.vru_id == vru_id), None)
    if target is None:
        raise LookupError(f"no job for VRU {vru_id} in this period")
    return sum(1 for j in jobs if j.offset_bin == target.offset_bin)
