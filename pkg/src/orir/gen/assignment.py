"""Freight-assignment instances: shipments to carriers, dense pair tables,
capacities sized after weights so the fleet comfortably covers demand.
The empty assignment is always feasible, so every instance solves."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from . import common as C
from .rng import stream

DEFAULTS = {
    "cost_rate_low": 0.04,
    "cost_rate_high": 0.12,
    "handling_low": 0.85,
    "handling_high": 1.15,
    "weight_mu": 4.4,
    "weight_sigma": 0.5,
    "weight_min": 5.0,
    "capacity_target_factor": 1.3,
    "capacity_spread_low": 0.7,
    "capacity_spread_high": 1.3,
    "price_low": 2.5,
    "price_high": 6.0,
    "handling_fee_low": 20.0,
    "handling_fee_high": 80.0,
    "consumption_noise_low": 0.92,
    "consumption_noise_high": 1.08,
}


@dataclass
class AssignmentConfig:
    seed: int = 42
    carriers: int = 400
    shipments: int = 3200
    overrides: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.carriers < 1 or self.shipments < 1:
            raise ConfigError("carriers and shipments must be >= 1")
        unknown = set(self.overrides) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown override(s): {sorted(unknown)}")

    def knob(self, name: str) -> float:
        return self.overrides.get(name, DEFAULTS[name])

    def to_dict(self) -> dict:
        return {
            "family": "assignment", "seed": self.seed,
            "scale": {"carriers": self.carriers, "shipments": self.shipments},
            "overrides": dict(self.overrides),
        }


@dataclass
class AssignmentInstance:
    cfg: AssignmentConfig
    depots: np.ndarray
    origins: np.ndarray
    weights: np.ndarray
    revenue: np.ndarray
    capacity: np.ndarray
    cost: np.ndarray  # shipments x carriers
    consumption: np.ndarray  # shipments x carriers


def build_assignment_instance(cfg: AssignmentConfig) -> AssignmentInstance:
    S, J = cfg.shipments, cfg.carriers
    depots = stream(cfg.seed, "carrier_depots").uniform(0, 1000, (J, 2))
    origins = stream(cfg.seed, "shipment_origins").uniform(0, 1000, (S, 2))
    rate = stream(cfg.seed, "carrier_cost_rate").uniform(
        cfg.knob("cost_rate_low"), cfg.knob("cost_rate_high"), J)
    handling = stream(cfg.seed, "carrier_handling").uniform(
        cfg.knob("handling_low"), cfg.knob("handling_high"), J)
    weights = stream(cfg.seed, "shipment_weights").lognormal(
        cfg.knob("weight_mu"), cfg.knob("weight_sigma"), S)
    weights = np.maximum(weights, cfg.knob("weight_min"))
    target = cfg.knob("capacity_target_factor") * weights.sum() / J
    capacity = stream(cfg.seed, "carrier_capacity_factor").uniform(
        cfg.knob("capacity_spread_low"), cfg.knob("capacity_spread_high"),
        J) * target
    revenue = weights * stream(cfg.seed, "shipment_price_factor").uniform(
        cfg.knob("price_low"), cfg.knob("price_high"), S)
    dist = np.hypot(origins[:, 0][:, None] - depots[:, 0][None, :],
                    origins[:, 1][:, None] - depots[:, 1][None, :])
    fee = stream(cfg.seed, "pair_handling_fee").uniform(
        cfg.knob("handling_fee_low"), cfg.knob("handling_fee_high"), (S, J))
    cost = rate[None, :] * weights[:, None] * dist / 100.0 + fee
    eta = stream(cfg.seed, "pair_consumption_noise").uniform(
        cfg.knob("consumption_noise_low"), cfg.knob("consumption_noise_high"),
        (S, J))
    consumption = weights[:, None] * handling[None, :] * eta
    return AssignmentInstance(cfg, depots, origins, weights, revenue,
                              capacity, cost, consumption)


def assignment_tables(inst: AssignmentInstance):
    """The 5-file CSV set: sets, revenue, cost, capacity consumption,
    carrier capacity."""
    cfg = inst.cfg
    S, J = cfg.shipments, cfg.carriers
    sets_rows = ([["shipments", C.shipment_id(i)] for i in range(S)]
                 + [["carriers", C.carrier_id(j)] for j in range(J)])
    pair_rows_cost = []
    pair_rows_cons = []
    for i in range(S):
        sid = C.shipment_id(i)
        cost_row = inst.cost[i]
        cons_row = inst.consumption[i]
        for j in range(J):
            cid = C.carrier_id(j)
            pair_rows_cost.append([sid, cid, C.fmt(cost_row[j])])
            pair_rows_cons.append([sid, cid, C.fmt(cons_row[j])])
    return {
        "sets": (["set_name", "element"], sets_rows),
        "revenue": (["shipment_id", "revenue"],
                    [[C.shipment_id(i), C.fmt(inst.revenue[i])]
                     for i in range(S)]),
        "cost": (["shipment_id", "carrier_id", "cost"], pair_rows_cost),
        "capacity_consumption": (
            ["shipment_id", "carrier_id", "capacity_consumption"],
            pair_rows_cons),
        "carrier_capacity": (
            ["carrier_id", "carrier_capacity"],
            [[C.carrier_id(j), C.fmt(inst.capacity[j])] for j in range(J)]),
    }


def gen_assignment(cfg: AssignmentConfig, out_dir) -> AssignmentInstance:
    inst = build_assignment_instance(cfg)
    C.write_instance(out_dir, assignment_tables(inst), "freight_assignment",
                     cfg.to_dict())
    return inst
