import json
from pathlib import Path

import pytest

from orir.data.store import DataStore, parse_csv_text
from orir.ir.parser import parse_ir

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "src" / "orir" / "fixtures"

FIXTURE_NAMES = ("supply_chain_lp", "facility_open_mip", "freight_assignment")


def fixture_text(name: str) -> str:
    return (FIXTURE_DIR / f"{name}.json").read_text(encoding="utf-8")


def fixture_model(name: str):
    return parse_ir(fixture_text(name))


def fixture_json(name: str) -> dict:
    return json.loads(fixture_text(name))


def store_from(tables: dict[str, str]) -> DataStore:
    """Build a DataStore from {table_name: csv_text}."""
    return DataStore({name: parse_csv_text(text, f"{name}.csv")
                      for name, text in tables.items()})


MICRO_ASSIGNMENT_TABLES = {
    "sets": "set_name,element\nshipments,S_001\nshipments,S_002\ncarriers,C_001\n",
    "revenue": "shipment_id,revenue\nS_001,10\nS_002,20\n",
    "cost": "shipment_id,carrier_id,cost\nS_001,C_001,3\nS_002,C_001,4\n",
    "capacity_consumption": ("shipment_id,carrier_id,capacity_consumption\n"
                             "S_001,C_001,120\nS_002,C_001,180\n"),
    "carrier_capacity": "carrier_id,carrier_capacity\nC_001,500\n",
}


@pytest.fixture
def micro_assignment():
    return fixture_model("freight_assignment"), store_from(
        dict(MICRO_ASSIGNMENT_TABLES))


@pytest.fixture(scope="session")
def assignment_model():
    return fixture_model("freight_assignment")


@pytest.fixture(scope="session")
def desk_assignment_dir(tmp_path_factory):
    from orir.gen import AssignmentConfig, gen_assignment
    out = tmp_path_factory.mktemp("desk") / "assignment"
    gen_assignment(AssignmentConfig(seed=7, carriers=3, shipments=8), out)
    return out


@pytest.fixture(scope="session")
def desk_lp_dir(tmp_path_factory):
    from orir.gen import gen_lp_network, LpNetworkConfig
    out = tmp_path_factory.mktemp("desk") / "lp_network"
    gen_lp_network(LpNetworkConfig(
        seed=42, sites=4, dcs=4, customers=20, products=10, periods=12,
        ps_fanout=2, dc_fanout=5, clusters=5), out)
    return out


@pytest.fixture(scope="session")
def desk_mip_dir(tmp_path_factory):
    from orir.gen import gen_mip_network, MipNetworkConfig
    out = tmp_path_factory.mktemp("desk") / "mip_network"
    gen_mip_network(MipNetworkConfig(
        seed=42, sites=4, dcs=4, customers=10, products=10, periods=6,
        ps_fanout=2, dc_fanout=5, clusters=5), out)
    return out


def load_instance(instance_dir: Path):
    from orir.data.store import load_tables
    model = parse_ir((instance_dir / "ir.json").read_text(encoding="utf-8"))
    labels = json.loads(
        (instance_dir / "dim_labels.json").read_text(encoding="utf-8"))
    store = load_tables(instance_dir / "data")
    return model, store, labels
