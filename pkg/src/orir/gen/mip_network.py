"""Facility-opening MIP instances: a subset of a base network LP instance
plus binary open/operate economics and a linking big-M scalar.

The retained facilities and customers are the first N of each base set;
links whose endpoints survive are kept, then uncovered distribution
centers and customers are reconnected to their nearest retained neighbor
(the same fallback rule the base network uses). Capacities are re-sized on
the subset network so the instance stays feasible by construction. Opening
and per-period operating costs are sized from each facility's reachable
demand margin; both knobs are overridable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from . import common as C
from .lp_network import (
    build_lp_instance,
    DEFAULTS as LP_DEFAULTS,
    LpInstance,
    LpNetworkConfig,
)
from .rng import stream

MIP_DEFAULTS = {
    "open_cost_low": 0.5,
    "open_cost_high": 1.5,
    "operating_frac_low": 0.05,
    "operating_frac_high": 0.15,
    "margin_rate": 0.3,
}


@dataclass
class MipNetworkConfig:
    seed: int = 42
    sites: int = 25
    dcs: int = 25
    customers: int = 250
    products: int = 500
    periods: int = 12
    base_sites: int | None = None
    base_dcs: int | None = None
    base_customers: int | None = None
    ps_fanout: int = 8
    dc_fanout: int = 20
    clusters: int = 20
    overrides: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("sites", "dcs", "customers", "products", "periods"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.base_sites is None:
            self.base_sites = 2 * self.sites
        if self.base_dcs is None:
            self.base_dcs = 2 * self.dcs
        if self.base_customers is None:
            self.base_customers = 2 * self.customers
        if self.base_sites < self.sites or self.base_dcs < self.dcs \
                or self.base_customers < self.customers:
            raise ConfigError("base counts must cover the retained counts")
        unknown = set(self.overrides) - set(LP_DEFAULTS) - set(MIP_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown override(s): {sorted(unknown)}")

    def knob(self, name: str) -> float:
        if name in self.overrides:
            return self.overrides[name]
        return MIP_DEFAULTS.get(name, LP_DEFAULTS.get(name))

    def base_config(self) -> LpNetworkConfig:
        lp_overrides = {k: v for k, v in self.overrides.items()
                        if k in LP_DEFAULTS}
        return LpNetworkConfig(
            seed=self.seed, sites=self.base_sites, dcs=self.base_dcs,
            customers=self.base_customers, products=self.products,
            periods=self.periods, ps_fanout=self.ps_fanout,
            dc_fanout=self.dc_fanout, clusters=self.clusters,
            overrides=lp_overrides)

    def to_dict(self) -> dict:
        return {
            "family": "mip_network", "seed": self.seed,
            "scale": {"sites": self.sites, "dcs": self.dcs,
                      "customers": self.customers, "products": self.products,
                      "periods": self.periods, "base_sites": self.base_sites,
                      "base_dcs": self.base_dcs,
                      "base_customers": self.base_customers,
                      "ps_fanout": self.ps_fanout,
                      "dc_fanout": self.dc_fanout, "clusters": self.clusters},
            "overrides": dict(self.overrides),
        }


@dataclass
class MipInstance:
    cfg: MipNetworkConfig
    base: LpInstance
    links_ij: list[tuple[int, int]]
    links_jk: list[tuple[int, int]]
    transport_ij: dict[tuple[int, int], float]
    transport_jk: dict[tuple[int, int], float]
    demand: dict[tuple[int, int, int], float]
    ps_capacity: np.ndarray
    dc_capacity: np.ndarray
    open_cost_site: np.ndarray
    open_cost_dc: np.ndarray
    operating_cost_site: np.ndarray
    operating_cost_dc: np.ndarray
    big_m: float


def build_mip_instance(cfg: MipNetworkConfig) -> MipInstance:
    base = build_lp_instance(cfg.base_config())
    I, J, K = cfg.sites, cfg.dcs, cfg.customers
    T = cfg.periods

    links_ij = [(i, j) for i, j in base.links_ij if i < I and j < J]
    links_jk = [(j, k) for j, k in base.links_jk if j < J and k < K]
    transport_ij = {lk: base.transport_ij[lk] for lk in links_ij}
    transport_jk = {lk: base.transport_jk[lk] for lk in links_jk}

    # Reconnect dangling retained nodes exactly like the base fallback.
    sub_ij_noise = stream(cfg.seed, "sub_transport_noise_ps_dc")
    rate_ij = cfg.knob("transport_rate_ps_dc")
    fed_dcs = {j for _, j in links_ij}
    for j in range(J):
        if j not in fed_dcs:
            d2 = ((base.ps_pos[:I] - base.dc_pos[j]) ** 2).sum(axis=1)
            i = int(np.argmin(d2))
            links_ij.append((i, j))
            transport_ij[(i, j)] = rate_ij * C.euclidean(
                base.ps_pos[i], base.dc_pos[j]) * sub_ij_noise.uniform(0.9, 1.1)
    sub_jk_noise = stream(cfg.seed, "sub_transport_noise_dc_cust")
    rate_jk = cfg.knob("transport_rate_dc_cust")
    served = {k for _, k in links_jk}
    for k in range(K):
        if k not in served:
            d2 = ((base.dc_pos[:J] - base.cust_pos[k]) ** 2).sum(axis=1)
            j = int(np.argmin(d2))
            links_jk.append((j, k))
            transport_jk[(j, k)] = rate_jk * C.euclidean(
                base.dc_pos[j], base.cust_pos[k]) * sub_jk_noise.uniform(0.9, 1.1)
    links_ij.sort()
    links_jk.sort()

    demand = {(k, p, t): v for (k, p, t), v in base.demand.items() if k < K}
    cust_period_total = base.cust_period_total[:K, :]

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
        from .lp_network import FLOOR_REFERENCE_DEMAND, FLOOR_REFERENCE_VALUE
        floor = FLOOR_REFERENCE_VALUE * total_demand / FLOOR_REFERENCE_DEMAND

    dcn = stream(cfg.seed, "sub_dc_capacity_noise")
    dc_capacity = np.zeros((J, T))
    for j in range(J):
        reach = cust_period_total[dc_customers[j], :].sum(axis=0) \
            if dc_customers[j] else np.zeros(T)
        for t in range(T):
            cap = slack * reach[t] * dcn.uniform(1 - cap_noise, 1 + cap_noise)
            dc_capacity[j, t] = max(cap, floor)
    psn = stream(cfg.seed, "sub_ps_capacity_noise")
    ps_capacity = np.zeros((I, T))
    for i in range(I):
        members = sorted(site_customers[i])
        reach = cust_period_total[members, :].sum(axis=0) if members \
            else np.zeros(T)
        for t in range(T):
            cap = slack * reach[t] * psn.uniform(1 - cap_noise, 1 + cap_noise)
            ps_capacity[i, t] = max(cap, floor)
    period_demand = cust_period_total.sum(axis=0)
    for t in range(T):
        agg = ps_capacity[:, t].sum()
        need = slack * period_demand[t]
        if 0 < agg < need:
            ps_capacity[:, t] *= need / agg

    # Facility economics: opening cost ~ the mean-period margin of the
    # demand the facility can reach; operating cost a fraction of that per
    # period. Invented sizing (the instance family only asks for
    # "economically meaningful" numbers); override to taste.
    unit_margin = cfg.knob("margin_rate") * float(np.mean(base.revenue))
    open_site_gen = stream(cfg.seed, "open_cost_site")
    open_dc_gen = stream(cfg.seed, "open_cost_dc")
    op_site_gen = stream(cfg.seed, "operating_frac_site")
    op_dc_gen = stream(cfg.seed, "operating_frac_dc")
    lo, hi = cfg.knob("open_cost_low"), cfg.knob("open_cost_high")
    flo, fhi = cfg.knob("operating_frac_low"), cfg.knob("operating_frac_high")
    open_cost_site = np.zeros(I)
    operating_cost_site = np.zeros(I)
    for i in range(I):
        members = sorted(site_customers[i])
        mean_demand = cust_period_total[members, :].sum() / T if members else 0.0
        open_cost_site[i] = open_site_gen.uniform(lo, hi) * mean_demand * unit_margin
        operating_cost_site[i] = op_site_gen.uniform(flo, fhi) * open_cost_site[i]
    open_cost_dc = np.zeros(J)
    operating_cost_dc = np.zeros(J)
    for j in range(J):
        mean_demand = cust_period_total[dc_customers[j], :].sum() / T \
            if dc_customers[j] else 0.0
        open_cost_dc[j] = open_dc_gen.uniform(lo, hi) * mean_demand * unit_margin
        operating_cost_dc[j] = op_dc_gen.uniform(flo, fhi) * open_cost_dc[j]

    big_m = float(max(
        (dc_capacity[j, t] + base.storage_dc[j]
         for j in range(J) for t in range(T)), default=0.0))

    return MipInstance(cfg, base, links_ij, links_jk, transport_ij,
                       transport_jk, demand, ps_capacity, dc_capacity,
                       open_cost_site, open_cost_dc, operating_cost_site,
                       operating_cost_dc, big_m)


def mip_tables(inst: MipInstance) -> dict[str, tuple[list[str], list]]:
    """The 18-file CSV set plus the computed bigM.csv."""
    cfg = inst.cfg
    base = inst.base
    I, J, K, P, T = (cfg.sites, cfg.dcs, cfg.customers, cfg.products,
                     cfg.periods)
    sets_rows = (
        [["production_sites", C.ps_id(i)] for i in range(I)]
        + [["distribution_centers", C.dc_id(j)] for j in range(J)]
        + [["customers", C.customer_id(k)] for k in range(K)]
        + [["products", C.product_id(p)] for p in range(P)]
        + [["periods", str(t + 1)] for t in range(T)]
    )
    return {
        "sets": (["set_name", "element"], sets_rows),
        "demand": (["customer_id", "product_id", "period_id", "demand"],
                   [[C.customer_id(k), C.product_id(p), str(t + 1), C.fmt(v)]
                    for (k, p, t), v in sorted(inst.demand.items())]),
        "production_capacity": (
            ["site_id", "period_id", "capacity"],
            [[C.ps_id(i), str(t + 1), C.fmt(inst.ps_capacity[i, t])]
             for i in range(I) for t in range(T)]),
        "throughput_capacity": (
            ["dc_id", "period_id", "capacity"],
            [[C.dc_id(j), str(t + 1), C.fmt(inst.dc_capacity[j, t])]
             for j in range(J) for t in range(T)]),
        "storage_capacity_sites": (
            ["site_id", "capacity"],
            [[C.ps_id(i), C.fmt(base.storage_site[i])] for i in range(I)]),
        "storage_capacity_dcs": (
            ["dc_id", "capacity"],
            [[C.dc_id(j), C.fmt(base.storage_dc[j])] for j in range(J)]),
        "production_cost": (
            ["site_id", "product_id", "unit_cost"],
            [[C.ps_id(i), C.product_id(p), C.fmt(base.production_cost[i, p])]
             for i in range(I) for p in range(P)]),
        "transport_cost_prod_to_dc": (
            ["site_id", "dc_id", "unit_cost"],
            [[C.ps_id(i), C.dc_id(j), C.fmt(v)]
             for (i, j), v in sorted(inst.transport_ij.items())]),
        "transport_cost_dc_to_cust": (
            ["dc_id", "customer_id", "unit_cost"],
            [[C.dc_id(j), C.customer_id(k), C.fmt(v)]
             for (j, k), v in sorted(inst.transport_jk.items())]),
        "holding_cost_sites": (
            ["site_id", "product_id", "unit_cost"],
            [[C.ps_id(i), C.product_id(p), C.fmt(base.holding_site[i, p])]
             for i in range(I) for p in range(P)]),
        "holding_cost_dcs": (
            ["dc_id", "product_id", "unit_cost"],
            [[C.dc_id(j), C.product_id(p), C.fmt(base.holding_dc[j, p])]
             for j in range(J) for p in range(P)]),
        "fixed_cost_open_sites": (
            ["site_id", "cost"],
            [[C.ps_id(i), C.fmt(inst.open_cost_site[i])] for i in range(I)]),
        "fixed_cost_open_dcs": (
            ["dc_id", "cost"],
            [[C.dc_id(j), C.fmt(inst.open_cost_dc[j])] for j in range(J)]),
        "operating_cost_sites": (
            ["site_id", "cost"],
            [[C.ps_id(i), C.fmt(inst.operating_cost_site[i])]
             for i in range(I)]),
        "operating_cost_dcs": (
            ["dc_id", "cost"],
            [[C.dc_id(j), C.fmt(inst.operating_cost_dc[j])]
             for j in range(J)]),
        "revenue": (
            ["product_id", "unit_revenue"],
            [[C.product_id(p), C.fmt(base.revenue[p])] for p in range(P)]),
        "initial_inventory_sites": (
            ["site_id", "product_id", "quantity"], []),
        "initial_inventory_dcs": (
            ["dc_id", "product_id", "quantity"], []),
        "bigM": (["bigM"], [[C.fmt(inst.big_m)]]),
    }


def gen_mip_network(cfg: MipNetworkConfig, out_dir) -> MipInstance:
    inst = build_mip_instance(cfg)
    C.write_instance(out_dir, mip_tables(inst), "facility_open_mip",
                     cfg.to_dict())
    return inst
