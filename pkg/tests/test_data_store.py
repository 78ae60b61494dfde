import math

import pytest

from orir.data import (
    DEFAULT_INF,
    DEFAULT_ZERO,
    load_tables,
    lookup,
    materialize_param,
    materialize_set,
)
from orir.errors import (
    ArityError,
    CellParseError,
    CsvError,
    DuplicateElement,
    DuplicateKey,
    MissingTable,
    ScalarCardinality,
    UnknownIndexElement,
)
from orir.ir.nodes import ParamDef, SetDef

from conftest import fixture_model, store_from

SETS_CSV = (
    "set_name,element\n"
    "production_sites,PS_001\n"
    "production_sites,PS_002\n"
    "distribution_centers,DC_001\n"
    "customers,C_0001\n"
    "customers,C_0002\n"
    "products,P_001\n"
    "products,P_002\n"
    + "".join(f"periods,{t}\n" for t in range(1, 13))
)


def _set_def(filter_value, ordered=False):
    return SetDef(index_symbol="i", source="sets.csv", column="element",
                  filter_column="set_name", filter_value=filter_value,
                  ordered=ordered)


def test_load_tables_counts(tmp_path):
    (tmp_path / "sets.csv").write_text(SETS_CSV)
    for i in range(11):
        (tmp_path / f"param_{i}.csv").write_text("a,b\n1,2\n")
    store = load_tables(tmp_path)
    assert len(store.tables) == 12


def test_load_empty_directory(tmp_path):
    assert load_tables(tmp_path).tables == {}


def test_ragged_row_is_csv_error(tmp_path):
    (tmp_path / "sets.csv").write_text("a,b\n1,2\n1,2,3\n")
    with pytest.raises(CsvError) as err:
        load_tables(tmp_path)
    assert err.value.line == 3


def test_empty_file_yields_empty_table(tmp_path):
    (tmp_path / "empty.csv").write_text("")
    store = load_tables(tmp_path)
    assert store.table("empty") == []


def test_whitespace_preserved_in_cells(tmp_path):
    (tmp_path / "t.csv").write_text("a,b\n x ,y\n")
    store = load_tables(tmp_path)
    assert store.table("t")[0]["a"] == " x "


def test_materialize_set_filters_rows():
    store = store_from({"sets": SETS_CSV})
    inst = materialize_set("ProductionSites", _set_def("production_sites"),
                           store)
    assert inst.elements == ("PS_001", "PS_002")


def test_materialize_ordered_positions():
    store = store_from({"sets": SETS_CSV})
    inst = materialize_set("Periods", _set_def("periods", ordered=True), store)
    assert inst.position["1"] == 0
    assert inst.position["12"] == 11


def test_empty_filter_match_warns():
    store = store_from({"sets": SETS_CSV})
    warnings = []
    inst = materialize_set("Ghost", _set_def("warehouses"), store, warnings)
    assert inst.elements == ()
    assert any(w.code == "empty-set" for w in warnings)


def test_duplicate_element_rejected():
    store = store_from({"sets": "set_name,element\ns,A\ns,A\n"})
    with pytest.raises(DuplicateElement):
        materialize_set("S", _set_def("s"), store)


def test_size_mismatch_warns():
    store = store_from({"sets": SETS_CSV})
    sdef = SetDef(index_symbol="i", source="sets.csv", column="element",
                  filter_column="set_name", filter_value="production_sites",
                  ordered=False, size=7)
    warnings = []
    materialize_set("ProductionSites", sdef, store, warnings)
    assert any(w.code == "size-mismatch" for w in warnings)


def _sets():
    store = store_from({"sets": SETS_CSV})
    return {
        "Customers": materialize_set("Customers", _set_def("customers"), store),
        "Products": materialize_set("Products", _set_def("products"), store),
        "Periods": materialize_set("Periods", _set_def("periods", True), store),
    }


DEMAND_DEF = ParamDef(
    domain=("Customers", "Products", "Periods"), type="float",
    source="demand.csv", column="demand_quantity",
    index_columns=("customer_id", "product_id", "period"),
    missing_default="zero")


def test_materialize_param_direct_mapping():
    store = store_from({"demand": (
        "customer_id,product_id,period,demand_quantity\n"
        "C_0001,P_001,3,17.5\n")})
    inst = materialize_param("demand", DEMAND_DEF, store, _sets())
    assert inst.entries[("C_0001", "P_001", "3")] == 17.5


def test_lookup_three_outcomes():
    store = store_from({"demand": (
        "customer_id,product_id,period,demand_quantity\n"
        "C_0001,P_001,3,17.5\n")})
    inst = materialize_param("demand", DEMAND_DEF, store, _sets())
    assert lookup(inst, ("C_0001", "P_001", "3")).value == 17.5
    absent = lookup(inst, ("C_0002", "P_001", "3"))
    assert absent is DEFAULT_ZERO
    inf_def = ParamDef(domain=("Customers",), type="float", source="demand.csv",
                       column="demand_quantity", index_columns=("customer_id",),
                       missing_default="inf")
    store2 = store_from({"demand": "customer_id,demand_quantity\nC_0001,1\n"})
    inst2 = materialize_param("p", inf_def, store2, _sets())
    assert lookup(inst2, ("C_0002",)) is DEFAULT_INF
    assert math.isinf(DEFAULT_INF.value)


def test_lookup_arity_checked():
    store = store_from({"demand": (
        "customer_id,product_id,period,demand_quantity\n"
        "C_0001,P_001,3,17.5\n")})
    inst = materialize_param("demand", DEMAND_DEF, store, _sets())
    with pytest.raises(ArityError):
        lookup(inst, ("C_0001", "P_001"))


def test_lookup_totality_over_cross_product():
    store = store_from({"demand": (
        "customer_id,product_id,period,demand_quantity\n"
        "C_0001,P_001,3,17.5\nC_0002,P_002,12,1\n")})
    inst = materialize_param("demand", DEMAND_DEF, store, _sets())
    sets = _sets()
    for c in sets["Customers"].elements:
        for p in sets["Products"].elements:
            for t in sets["Periods"].elements:
                result = lookup(inst, (c, p, t))
                assert result.kind in ("value", "zero", "inf")


def test_optional_absent_table_defaults_to_zero():
    pdef = ParamDef(domain=("Customers", "Products"), type="float",
                    source="initial_inventory_sites.csv", column="quantity",
                    index_columns=("customer_id", "product_id"),
                    missing_default="zero", optional=True)
    inst = materialize_param("initial_inventory", pdef, store_from({}), _sets())
    assert inst.entries == {}
    assert lookup(inst, ("C_0001", "P_001")) is DEFAULT_ZERO


def test_required_absent_table_raises():
    with pytest.raises(MissingTable):
        materialize_param("demand", DEMAND_DEF, store_from({}), _sets())


def test_scalar_cardinality():
    pdef = ParamDef(domain=(), type="float", source="bigM.csv",
                    column="bigM", index_columns=None, missing_default="inf")
    store = store_from({"bigM": "bigM\n100\n200\n"})
    with pytest.raises(ScalarCardinality):
        materialize_param("bigM", pdef, store, {})
    store = store_from({"bigM": "bigM\n1500000\n"})
    inst = materialize_param("bigM", pdef, store, {})
    assert lookup(inst, ()).value == 1500000.0


def test_unknown_index_element():
    store = store_from({"demand": (
        "customer_id,product_id,period,demand_quantity\n"
        "C_9999,P_001,3,17.5\n")})
    with pytest.raises(UnknownIndexElement):
        materialize_param("demand", DEMAND_DEF, store, _sets())


def test_duplicate_key_rejected_not_last_wins():
    store = store_from({"demand": (
        "customer_id,product_id,period,demand_quantity\n"
        "C_0001,P_001,3,17.5\nC_0001,P_001,3,99\n")})
    with pytest.raises(DuplicateKey):
        materialize_param("demand", DEMAND_DEF, store, _sets())


def test_no_numeric_key_coercion():
    """Period "01" is not period "1"."""
    store = store_from({"demand": (
        "customer_id,product_id,period,demand_quantity\n"
        "C_0001,P_001,01,17.5\n")})
    with pytest.raises(UnknownIndexElement):
        materialize_param("demand", DEMAND_DEF, store, _sets())


def test_numeric_parsing_rules():
    base = {"domain": ("Customers",), "source": "t.csv", "column": "v",
            "index_columns": ("customer_id",), "missing_default": "zero"}
    fdef = ParamDef(type="float", **base)
    store = store_from({"t": "customer_id,v\nC_0001,1.5e2\n"})
    inst = materialize_param("p", fdef, store, _sets())
    assert inst.entries[("C_0001",)] == 150.0
    for bad in ("1,5", "inf", "nan", "abc"):
        store = store_from({"t": f"customer_id,v\nC_0001,\"{bad}\"\n"})
        with pytest.raises(CellParseError):
            materialize_param("p", fdef, store, _sets())
    idef = ParamDef(type="int", **base)
    store = store_from({"t": "customer_id,v\nC_0001,2.5\n"})
    with pytest.raises(CellParseError):
        materialize_param("p", idef, store, _sets())


def test_generated_instance_materializes_clean(desk_lp_dir):
    """Every parameter of a generated instance materializes with zero
    unknown-element errors."""
    from orir.data import load_tables
    model = fixture_model("supply_chain_lp")
    store = load_tables(desk_lp_dir / "data")
    sets = {name: materialize_set(name, sdef, store)
            for name, sdef in model.sets.items()}
    for name, pdef in model.parameters.items():
        materialize_param(name, pdef, store, sets)
