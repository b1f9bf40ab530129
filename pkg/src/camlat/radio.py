"""Radio access layer: PRB pool, equal-share scheduling, clustering, UL/DL latency.

The scheduler is fluid: the PRB pool splits equally (fractionally) among
every user scheduled in the same offset bin. A link's rate is

    r = prbs * prb_bandwidth * log2(1 + SNR_linear)   [bits/s]

and its transmission latency is size / r. Downlink multicast to a VRU's
vehicle cluster completes when the slowest member has received the packet.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, ScenarioError, UnreachableLinkError
from .scenario import Vehicle, Vru
from .traffic import CamJob


@dataclass(frozen=True)
class PrbPool:
    bandwidth_hz: float = 9e6
    prb_bandwidth_hz: float = 180e3

    def __post_init__(self):
        if self.prb_bandwidth_hz <= 0:
            raise ConfigurationError("PRB bandwidth must be positive")
        if self.total_prbs < 1:
            raise ConfigurationError("bandwidth must fit at least one PRB")

    @property
    def total_prbs(self) -> int:
        return int(self.bandwidth_hz // self.prb_bandwidth_hz)


@dataclass(frozen=True)
class VehicleCluster:
    """The vehicles nearest a VRU, ordered by ascending distance."""

    vru_id: int
    members: tuple[Vehicle, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def nearest_member_indices(
    vru_x: np.ndarray,
    vru_y: np.ndarray,
    vehicle_x: np.ndarray,
    vehicle_y: np.ndarray,
    vehicle_lane: np.ndarray,
    m: int,
) -> np.ndarray:
    """Indices of each VRU's m nearest vehicles, shape (n_vru, m).

    Ties on exact distance break toward the lower x-coordinate, then the
    lower lane index: vehicles are pre-ordered by (x, lane) and a stable
    sort on squared distance preserves that order among equals.
    """
    if m < 1:
        raise ConfigurationError("cluster size must be at least 1")
    if vehicle_x.size == 0:
        raise ScenarioError("no vehicles on the road; cannot form clusters")
    order = np.lexsort((vehicle_lane, vehicle_x))
    dx = np.subtract.outer(vru_x, vehicle_x[order])
    dy = np.subtract.outer(vru_y, vehicle_y[order])
    d2 = dx * dx + dy * dy
    take = min(m, vehicle_x.size)
    nearest = np.argsort(d2, axis=1, kind="stable")[:, :take]
    return order[nearest]


def select_cluster(vru: Vru, vehicles: Sequence[Vehicle], m: int) -> VehicleCluster:
    """The m vehicles nearest to the VRU (fewer if the road holds fewer)."""
    if not vehicles:
        raise ScenarioError("no vehicles on the road; cannot form clusters")
    xs = np.array([v.position[0] for v in vehicles], dtype=float)
    ys = np.array([v.position[1] for v in vehicles], dtype=float)
    lanes = np.array([v.lane_index for v in vehicles], dtype=np.int64)
    idx = nearest_member_indices(
        np.array([vru.position[0]]), np.array([vru.position[1]]), xs, ys, lanes, m
    )[0]
    return VehicleCluster(vru_id=vru.id, members=tuple(vehicles[i] for i in idx))


def ul_allocation(jobs: Sequence[CamJob], pool: PrbPool) -> dict[int, float]:
    """Fractional PRBs per VRU: the pool splits equally within each offset bin."""
    occupancy: dict[int, int] = {}
    for job in jobs:
        occupancy[job.offset_bin] = occupancy.get(job.offset_bin, 0) + 1
    return {job.vru_id: pool.total_prbs / occupancy[job.offset_bin] for job in jobs}


def link_rate_bps(prbs, snr_db, pool: PrbPool):
    """Achievable rate of a link holding ``prbs`` (possibly fractional) PRBs."""
    snr_linear = np.power(10.0, np.asarray(snr_db, dtype=float) / 10.0)
    rate = np.asarray(prbs, dtype=float) * pool.prb_bandwidth_hz * np.log2(1.0 + snr_linear)
    return rate if rate.ndim else float(rate)


def ul_latency(size_bits, prbs, snr_db, pool: PrbPool):
    """Uplink transmission time size / rate; a zero-rate link is an error."""
    rate = link_rate_bps(prbs, snr_db, pool)
    if np.any(np.asarray(rate) <= 0) or not np.all(np.isfinite(np.asarray(rate))):
        raise UnreachableLinkError("uplink has zero achievable rate")
    out = np.asarray(size_bits, dtype=float) / rate
    return out if isinstance(out, np.ndarray) and out.ndim else float(out)


def dl_allocation(clusters: Sequence[VehicleCluster], pool: PrbPool) -> float:
    """PRBs per vehicle when all clusters of one offset bin are served together."""
    if not clusters:
        raise ConfigurationError("at least one active cluster is required")
    total_members = sum(c.size for c in clusters)
    return pool.total_prbs / total_members


def dl_latency(
    job: CamJob,
    cluster: VehicleCluster,
    per_vehicle_prbs: float,
    member_snr_db: np.ndarray,
    pool: PrbPool,
) -> float:
    """Multicast completion time: the slowest member's reception latency."""
    if cluster.size == 0:
        raise ScenarioError("cannot multicast to an empty cluster")
    if per_vehicle_prbs <= 0:
        raise ConfigurationError("per-vehicle PRB share must be positive")
    snr = np.asarray(member_snr_db, dtype=float)
    if snr.shape != (cluster.size,):
        raise ValueError("one SNR draw per cluster member is required")
    rates = link_rate_bps(np.full(cluster.size, per_vehicle_prbs), snr, pool)
    if np.any(rates <= 0) or not np.all(np.isfinite(rates)):
        raise UnreachableLinkError(f"cluster of VRU {cluster.vru_id} has an unreachable member")
    return float(np.max(job.size_bits / rates))
