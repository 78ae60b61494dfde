"""Synthetic two-echelon, multi-period network LP instances.

Geometry, tail-heavy prices, seasonal demand, and post-demand capacity
sizing: every knob below is a named constant that GenConfig.overrides can
replace. Capacities are sized after demand (1.5x the demand reachable by
each facility, +/-5% noise, floored), which makes every generated instance
feasible by construction; a final per-period scale-up guarantees the
aggregate production capacity stays at or above 1.5x total system demand
even at tiny scales where the reachability overlap is thin.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from . import common as C
from .rng import stream

SEASONAL = (0.85, 0.80, 0.90, 1.00, 1.05, 1.10, 1.15, 1.10, 1.05, 1.00,
            0.95, 1.30)

# Total demand units at the flagship scale; keeps the default capacity
# floor at 10,000 there and scales it proportionally elsewhere.
FLOOR_REFERENCE_DEMAND = 5_300_000.0
FLOOR_REFERENCE_VALUE = 10_000.0

DEFAULTS = {
    "transport_rate_ps_dc": 0.05,
    "transport_rate_dc_cust": 0.08,
    "revenue_mu": 3.9,
    "revenue_sigma": 0.6,
    "efficiency_low": 0.30,
    "efficiency_high": 0.55,
    "production_noise_low": 0.85,
    "production_noise_high": 1.15,
    "holding_site_low": 0.010,
    "holding_site_high": 0.020,
    "holding_dc_low": 0.008,
    "holding_dc_high": 0.018,
    "demand_products_low": 40,
    "demand_products_high": 80,
    "demand_mu": 2.5,
    "demand_sigma": 0.6,
    "demand_noise_low": 0.8,
    "demand_noise_high": 1.2,
    "capacity_slack": 1.5,
    "capacity_noise": 0.05,
    "capacity_floor": -1.0,  # negative = proportional default
    "storage_site_low": 5_000.0,
    "storage_site_high": 12_000.0,
    "storage_dc_low": 8_000.0,
    "storage_dc_high": 15_000.0,
}


@dataclass
class LpNetworkConfig:
    seed: int = 42
    sites: int = 50
    dcs: int = 50
    customers: int = 500
    products: int = 500
    periods: int = 12
    ps_fanout: int = 8
    dc_fanout: int = 20
    clusters: int = 20
    overrides: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("sites", "dcs", "customers", "products", "periods",
                     "ps_fanout", "dc_fanout", "clusters"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        unknown = set(self.overrides) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown override(s): {sorted(unknown)}")

    def knob(self, name: str) -> float:
        return self.overrides.get(name, DEFAULTS[name])

    def to_dict(self) -> dict:
        return {
            "family": "lp_network", "seed": self.seed,
            "scale": {"sites": self.sites, "dcs": self.dcs,
                      "customers": self.customers, "products": self.products,
                      "periods": self.periods, "ps_fanout": self.ps_fanout,
                      "dc_fanout": self.dc_fanout, "clusters": self.clusters},
            "overrides": dict(self.overrides),
        }


@dataclass
class LpInstance:
    cfg: LpNetworkConfig
    ps_pos: np.ndarray
    dc_pos: np.ndarray
    cust_pos: np.ndarray
    links_ij: list[tuple[int, int]]
    links_jk: list[tuple[int, int]]
    transport_ij: dict[tuple[int, int], float]
    transport_jk: dict[tuple[int, int], float]
    revenue: np.ndarray
    production_cost: dict[tuple[int, int], float]
    holding_site: dict[tuple[int, int], float]
    holding_dc: dict[tuple[int, int], float]
    demand: dict[tuple[int, int, int], float]  # (customer, product, period0)
    cust_period_total: np.ndarray  # customers x periods
    ps_capacity: np.ndarray  # sites x periods
    dc_capacity: np.ndarray  # dcs x periods
    storage_site: np.ndarray
    storage_dc: np.ndarray

    def total_demand_by_period(self) -> np.ndarray:
        return self.cust_period_total.sum(axis=0)

    def production_margin_by_period(self) -> np.ndarray:
        """Aggregate production capacity over total demand, per period."""
        total = self.total_demand_by_period()
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(total > 0, self.ps_capacity.sum(axis=0) / total,
                            np.inf)


def seasonal_factor(t: int) -> float:
    return SEASONAL[t % len(SEASONAL)]


def draw_revenue(cfg: LpNetworkConfig) -> np.ndarray:
    gen = stream(cfg.seed, "revenue")
    return gen.lognormal(cfg.knob("revenue_mu"), cfg.knob("revenue_sigma"),
                         cfg.products)


def build_lp_instance(cfg: LpNetworkConfig) -> LpInstance:
    I, J, K, P, T = (cfg.sites, cfg.dcs, cfg.customers, cfg.products,
                     cfg.periods)
    ps_pos = stream(cfg.seed, "ps_positions").uniform(200, 800, (I, 2))
    dc_pos = stream(cfg.seed, "dc_positions").uniform(50, 950, (J, 2))
    centers = stream(cfg.seed, "cluster_centers").uniform(
        100, 900, (cfg.clusters, 2))
    which = stream(cfg.seed, "customer_cluster").integers(0, cfg.clusters, K)
    offsets = stream(cfg.seed, "customer_offsets").normal(0.0, 30.0, (K, 2))
    cust_pos = centers[which] + offsets

    links_ij = C.nearest_links(ps_pos, dc_pos, cfg.ps_fanout)
    links_jk = C.nearest_links(dc_pos, cust_pos, cfg.dc_fanout)

    noise_ij = stream(cfg.seed, "transport_noise_ps_dc")
    rate_ij = cfg.knob("transport_rate_ps_dc")
    transport_ij = {
        (i, j): rate_ij * C.euclidean(ps_pos[i], dc_pos[j])
        * noise_ij.uniform(0.9, 1.1)
        for i, j in links_ij
    }
    noise_jk = stream(cfg.seed, "transport_noise_dc_cust")
    rate_jk = cfg.knob("transport_rate_dc_cust")
    transport_jk = {
        (j, k): rate_jk * C.euclidean(dc_pos[j], cust_pos[k])
        * noise_jk.uniform(0.9, 1.1)
        for j, k in links_jk
    }

    revenue = draw_revenue(cfg)
    efficiency = stream(cfg.seed, "site_efficiency").uniform(
        cfg.knob("efficiency_low"), cfg.knob("efficiency_high"), I)
    pnoise = stream(cfg.seed, "production_cost_noise").uniform(
        cfg.knob("production_noise_low"), cfg.knob("production_noise_high"),
        (I, P))
    production_cost = {(i, p): efficiency[i] * revenue[p] * pnoise[i, p]
                       for i in range(I) for p in range(P)}
    hs = stream(cfg.seed, "holding_site").uniform(
        cfg.knob("holding_site_low"), cfg.knob("holding_site_high"), (I, P))
    holding_site = {(i, p): hs[i, p] * revenue[p]
                    for i in range(I) for p in range(P)}
    hd = stream(cfg.seed, "holding_dc").uniform(
        cfg.knob("holding_dc_low"), cfg.knob("holding_dc_high"), (J, P))
    holding_dc = {(j, p): hd[j, p] * revenue[p]
                  for j in range(J) for p in range(P)}

    count_gen = stream(cfg.seed, "demand_product_count")
    choice_gen = stream(cfg.seed, "demand_product_choice")
    base_gen = stream(cfg.seed, "demand_base")
    dnoise_gen = stream(cfg.seed, "demand_noise")
    lo = int(cfg.knob("demand_products_low"))
    hi = int(cfg.knob("demand_products_high"))
    demand: dict[tuple[int, int, int], float] = {}
    cust_period_total = np.zeros((K, T))
    for k in range(K):
        count = min(P, int(count_gen.integers(lo, hi + 1)))
        chosen = np.sort(choice_gen.choice(P, size=count, replace=False))
        for p in chosen:
            base = base_gen.lognormal(cfg.knob("demand_mu"),
                                      cfg.knob("demand_sigma"))
            for t in range(T):
                value = base * seasonal_factor(t) * dnoise_gen.uniform(
                    cfg.knob("demand_noise_low"),
                    cfg.knob("demand_noise_high"))
                if round(value) == 0:
                    continue
                demand[(k, int(p), t)] = value
                cust_period_total[k, t] += value

    dc_customers = [[] for _ in range(J)]
    for j, k in links_jk:
        dc_customers[j].append(k)
    site_customers = [set() for _ in range(I)]
    for i, j in links_ij:
        site_customers[i].update(dc_customers[j])

    slack = cfg.knob("capacity_slack")
    cap_noise = cfg.knob("capacity_noise")
    total_demand = cust_period_total.sum()
    floor = cfg.knob("capacity_floor")
    if floor < 0:
        floor = FLOOR_REFERENCE_VALUE * total_demand / FLOOR_REFERENCE_DEMAND

    dcn = stream(cfg.seed, "dc_capacity_noise")
    dc_capacity = np.zeros((J, T))
    for j in range(J):
        reach = cust_period_total[dc_customers[j], :].sum(axis=0) \
            if dc_customers[j] else np.zeros(T)
        for t in range(T):
            cap = slack * reach[t] * dcn.uniform(1 - cap_noise, 1 + cap_noise)
            dc_capacity[j, t] = max(cap, floor)
    psn = stream(cfg.seed, "ps_capacity_noise")
    ps_capacity = np.zeros((I, T))
    for i in range(I):
        members = sorted(site_customers[i])
        reach = cust_period_total[members, :].sum(axis=0) if members \
            else np.zeros(T)
        for t in range(T):
            cap = slack * reach[t] * psn.uniform(1 - cap_noise, 1 + cap_noise)
            ps_capacity[i, t] = max(cap, floor)
    # Aggregate guarantee: at least slack * total demand in every period.
    period_demand = cust_period_total.sum(axis=0)
    for t in range(T):
        agg = ps_capacity[:, t].sum()
        need = slack * period_demand[t]
        if 0 < agg < need:
            ps_capacity[:, t] *= need / agg

    storage_site = stream(cfg.seed, "storage_site").uniform(
        cfg.knob("storage_site_low"), cfg.knob("storage_site_high"), I)
    storage_dc = stream(cfg.seed, "storage_dc").uniform(
        cfg.knob("storage_dc_low"), cfg.knob("storage_dc_high"), J)

    return LpInstance(cfg, ps_pos, dc_pos, cust_pos, links_ij, links_jk,
                      transport_ij, transport_jk, revenue, production_cost,
                      holding_site, holding_dc, demand, cust_period_total,
                      ps_capacity, dc_capacity, storage_site, storage_dc)


def lp_tables(inst: LpInstance) -> dict[str, tuple[list[str], list]]:
    """The 12-file CSV set for the network LP."""
    cfg = inst.cfg
    I, J, K, P, T = (cfg.sites, cfg.dcs, cfg.customers, cfg.products,
                     cfg.periods)
    sets_rows = (
        [["production_sites", C.ps_id(i)] for i in range(I)]
        + [["distribution_centers", C.dc_id(j)] for j in range(J)]
        + [["customers", C.customer_id(k)] for k in range(K)]
        + [["products", C.product_id(p)] for p in range(P)]
        + [["periods", str(t + 1)] for t in range(T)]
    )
    demand_rows = [
        [C.customer_id(k), C.product_id(p), str(t + 1), C.fmt(v)]
        for (k, p, t), v in sorted(inst.demand.items())
    ]
    tables = {
        "sets": (["set_name", "element"], sets_rows),
        "demand": (["customer_id", "product_id", "period", "demand_quantity"],
                   demand_rows),
        "production_capacity": (
            ["site_id", "period", "capacity"],
            [[C.ps_id(i), str(t + 1), C.fmt(inst.ps_capacity[i, t])]
             for i in range(I) for t in range(T)]),
        "storage_capacity_sites": (
            ["site_id", "capacity"],
            [[C.ps_id(i), C.fmt(inst.storage_site[i])] for i in range(I)]),
        "storage_capacity_dcs": (
            ["dc_id", "capacity"],
            [[C.dc_id(j), C.fmt(inst.storage_dc[j])] for j in range(J)]),
        "throughput_capacity": (
            ["dc_id", "period", "capacity"],
            [[C.dc_id(j), str(t + 1), C.fmt(inst.dc_capacity[j, t])]
             for j in range(J) for t in range(T)]),
        "production_cost": (
            ["site_id", "product_id", "unit_cost"],
            [[C.ps_id(i), C.product_id(p), C.fmt(v)]
             for (i, p), v in sorted(inst.production_cost.items())]),
        "transport_cost_site_to_dc": (
            ["from_site_id", "to_dc_id", "unit_cost"],
            [[C.ps_id(i), C.dc_id(j), C.fmt(v)]
             for (i, j), v in sorted(inst.transport_ij.items())]),
        "transport_cost_dc_to_customer": (
            ["from_dc_id", "to_customer_id", "unit_cost"],
            [[C.dc_id(j), C.customer_id(k), C.fmt(v)]
             for (j, k), v in sorted(inst.transport_jk.items())]),
        "holding_cost_sites": (
            ["site_id", "product_id", "unit_cost"],
            [[C.ps_id(i), C.product_id(p), C.fmt(v)]
             for (i, p), v in sorted(inst.holding_site.items())]),
        "holding_cost_dcs": (
            ["dc_id", "product_id", "unit_cost"],
            [[C.dc_id(j), C.product_id(p), C.fmt(v)]
             for (j, p), v in sorted(inst.holding_dc.items())]),
        "revenue": (
            ["product_id", "unit_revenue"],
            [[C.product_id(p), C.fmt(inst.revenue[p])] for p in range(P)]),
    }
    return tables


def gen_lp_network(cfg: LpNetworkConfig, out_dir) -> LpInstance:
    """Generate and write a network LP instance; returns the in-memory
    instance for reuse (the MIP generator subsets it)."""
    inst = build_lp_instance(cfg)
    C.write_instance(out_dir, lp_tables(inst), "supply_chain_lp",
                     cfg.to_dict())
    return inst
