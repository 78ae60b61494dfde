"""Counter-based random streams for instance generation.

Every data field draws from its own Philox stream, keyed by (seed,
stream id), so adding or resizing one field never perturbs another and
regeneration is byte-reproducible within this package. Stream ids are
fixed forever; append new fields at the end.
"""

from __future__ import annotations

import numpy as np

STREAM_IDS = {
    # two-echelon network family
    "ps_positions": 1,
    "dc_positions": 2,
    "cluster_centers": 3,
    "customer_cluster": 4,
    "customer_offsets": 5,
    "transport_noise_ps_dc": 6,
    "transport_noise_dc_cust": 7,
    "revenue": 8,
    "site_efficiency": 9,
    "production_cost_noise": 10,
    "holding_site": 11,
    "holding_dc": 12,
    "demand_product_count": 13,
    "demand_product_choice": 14,
    "demand_base": 15,
    "demand_noise": 16,
    "dc_capacity_noise": 17,
    "ps_capacity_noise": 18,
    "storage_site": 19,
    "storage_dc": 20,
    # facility-opening additions
    "open_cost_site": 21,
    "open_cost_dc": 22,
    "operating_frac_site": 23,
    "operating_frac_dc": 24,
    "sub_dc_capacity_noise": 25,
    "sub_ps_capacity_noise": 26,
    "sub_transport_noise_ps_dc": 27,
    "sub_transport_noise_dc_cust": 28,
    # freight assignment family
    "carrier_depots": 40,
    "shipment_origins": 41,
    "carrier_cost_rate": 42,
    "carrier_handling": 43,
    "shipment_weights": 44,
    "carrier_capacity_factor": 45,
    "shipment_price_factor": 46,
    "pair_handling_fee": 47,
    "pair_consumption_noise": 48,
}


def stream(seed: int, name: str) -> np.random.Generator:
    key = np.array([np.uint64(seed), np.uint64(STREAM_IDS[name])],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
