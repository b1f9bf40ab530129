"""Monte-Carlo orchestration: replications, the per-period pipeline, statistics.

A run is ``replications`` independent scenario realizations, each simulated
for ``periods`` message cycles. Every (replication, period) consumes its own
random substreams, so a replication's output depends only on
(master_seed, replication_index): replications can run in any order, on any
number of workers, and aggregates come out bit-identical because per-packet
results are merged in replication order before any reduction.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import channel, latency, radio, scenario, traffic
from .config import SimulationPlan
from .errors import AggregationError, CamlatError, ScenarioError
from .latency import LatencyBreakdown
from .rng import SubstreamFactory

COMPONENT_KEYS = ("ul", "bh", "tn_cn", "exc", "dl", "e2e_cloud", "e2e_mec")

_COMPONENT_ATTRS = {
    "ul": "t_ul",
    "bh": "t_bh",
    "tn_cn": "t_tn_cn",
    "exc": "t_exc",
    "dl": "t_dl",
    "e2e_cloud": "e2e_cloud",
    "e2e_mec": "e2e_mec",
}


@dataclass(frozen=True)
class AggregateStats:
    mean_s: float
    sample_std_s: float
    ci95_half_width_s: float
    sample_count: int


def evaluate_period(
    scn: scenario.Scenario,
    plan: SimulationPlan,
    jobs: list[traffic.CamJob],
    ul_rng: np.random.Generator,
    dl_rng: np.random.Generator,
    tn_cn_rng: np.random.Generator,
) -> list[LatencyBreakdown]:
    """All per-VRU latency components for one period (pure given the streams).

    ``jobs[i]`` must belong to the i-th VRU of the scenario arrays.
    """
    pool = plan.radio.pool
    n = len(jobs)
    offsets = np.fromiter((j.offset_bin for j in jobs), dtype=np.int64, count=n)
    sizes = np.fromiter((j.size_bits for j in jobs), dtype=float, count=n)
    densities = np.fromiter((j.compute_density for j in jobs), dtype=float, count=n)

    occupancy = np.bincount(offsets, minlength=plan.traffic.offset_bins)
    n_hat = occupancy[offsets]
    eta = pool.total_prbs / n_hat  # fluid equal split within each bin

    enb_x, enb_y = plan.scenario.road.enb_position_m
    d_ul = np.hypot(scn.vru_x - enb_x, scn.vru_y - enb_y)
    snr_ul = channel.sample_snr_db(plan.channel.ul_budget(), d_ul, ul_rng)
    t_ul = radio.ul_latency(sizes, eta, snr_ul, pool)

    t_bh = latency.backhaul_latency(sizes, n_hat, plan.network.backhaul_bps)
    t_exc = latency.execution_latency(sizes, densities, n_hat, plan.network.server_cycles_per_s)
    t_tn_cn = latency.sample_tn_cn(plan.network.tn_cn, tn_cn_rng, size=n)

    if scn.vehicle_count == 0:
        raise ScenarioError("no vehicles on the road; cannot form clusters")
    m = min(plan.radio.cluster_size, scn.vehicle_count)
    members = radio.nearest_member_indices(
        scn.vru_x, scn.vru_y, scn.vehicle_x, scn.vehicle_y, scn.vehicle_lane, m
    )
    # All clusters scheduled in one bin share the pool across all their members.
    members_in_bin = occupancy[offsets] * m
    per_vehicle_prbs = pool.total_prbs / members_in_bin

    d_dl = np.hypot(scn.vehicle_x[members] - enb_x, scn.vehicle_y[members] - enb_y)
    snr_dl = channel.sample_snr_db(plan.channel.dl_budget(), d_dl, dl_rng)
    rates_dl = radio.link_rate_bps(per_vehicle_prbs[:, None], snr_dl, pool)
    t_dl = np.max(sizes[:, None] / rates_dl, axis=1)

    return [
        latency.compose_e2e(
            vru_id=jobs[i].vru_id,
            t_ul=float(t_ul[i]),
            t_bh=float(t_bh[i]),
            t_tn_cn=float(t_tn_cn[i]),
            t_exc=float(t_exc[i]),
            t_dl=float(t_dl[i]),
        )
        for i in range(n)
    ]


def run_replication(plan: SimulationPlan, replication_index: int) -> list[LatencyBreakdown]:
    """Simulate one scenario realization for all periods of the plan."""
    streams = SubstreamFactory(plan.master_seed)
    try:
        scn = scenario.sample_scenario(plan.scenario, streams, replication_index)
        vrus = scn.vrus
        breakdowns: list[LatencyBreakdown] = []
        for period in range(plan.periods):
            jobs = traffic.generate_period(
                vrus, plan.traffic, period, streams.stream("traffic", replication_index, period)
            )
            breakdowns.extend(
                evaluate_period(
                    scn,
                    plan,
                    jobs,
                    ul_rng=streams.stream("ul", replication_index, period),
                    dl_rng=streams.stream("dl", replication_index, period),
                    tn_cn_rng=streams.stream("tn_cn", replication_index, period),
                )
            )
            if plan.scenario.mobility:
                scn = scenario.advance_vehicles(scn, plan.traffic.period_s)
        return breakdowns
    except CamlatError as exc:
        raise type(exc)(f"replication {replication_index}: {exc}") from exc


def _replication_task(args: tuple[SimulationPlan, int]) -> list[LatencyBreakdown]:
    return run_replication(*args)


def run_plan(plan: SimulationPlan) -> list[LatencyBreakdown]:
    """All replications, merged in replication order regardless of worker count."""
    if plan.workers == 1:
        results = [run_replication(plan, rep) for rep in range(plan.replications)]
    else:
        with ProcessPoolExecutor(max_workers=plan.workers) as executor:
            results = list(
                executor.map(_replication_task, ((plan, rep) for rep in range(plan.replications)))
            )
    merged: list[LatencyBreakdown] = []
    for rep_result in results:
        merged.extend(rep_result)
    return merged


def aggregate(breakdowns: list[LatencyBreakdown]) -> dict[str, AggregateStats]:
    """Unweighted mean, sample std, and 95% CI half-width per component."""
    if not breakdowns:
        raise AggregationError("cannot aggregate an empty breakdown list")
    n = len(breakdowns)
    stats: dict[str, AggregateStats] = {}
    for key, attr in _COMPONENT_ATTRS.items():
        values = np.fromiter((getattr(b, attr) for b in breakdowns), dtype=float, count=n)
        mean = float(np.mean(values))
        std = float(np.std(values, ddof=1)) if n > 1 else 0.0
        stats[key] = AggregateStats(
            mean_s=mean,
            sample_std_s=std,
            ci95_half_width_s=1.96 * std / np.sqrt(n),
            sample_count=n,
        )
    return stats
