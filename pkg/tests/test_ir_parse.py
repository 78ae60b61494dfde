import json

import pytest

from orir.errors import SchemaError, TokenError
from orir.ir import parse_index_token, parse_ir, Positional, Symbol

from conftest import fixture_json, fixture_model, fixture_text


def test_assignment_fixture_shape():
    model = fixture_model("freight_assignment")
    assert model.problem_class == "Assignment"
    assert len(model.sets) == 2
    assert len(model.parameters) == 4
    assert len(model.variables) == 1
    assert model.variables["x"].type == "binary"
    assert len(model.constraints) == 2


def test_lp_fixture_shape():
    model = fixture_model("supply_chain_lp")
    assert model.sense == "maximize"
    assert len(model.sets) == 5
    assert model.sets["Periods"].ordered
    assert len(model.parameters) == 11
    assert len(model.variables) == 5
    assert len(model.constraints) == 9
    assert model.variables["production_quantity"].domain_filter == "production_cost"


def test_mip_fixture_shape():
    model = fixture_model("facility_open_mip")
    assert len(model.parameters) == 18
    assert model.parameters["bigM"].index_columns is None
    assert model.parameters["bigM"].domain == ()
    assert model.parameters["initial_inventory_site"].optional
    assert model.variables["open_site"].type == "binary"


def test_unknown_operation_rejected():
    doc = fixture_json("freight_assignment")
    doc["objective"]["expression"] = {
        "operation": "divide",
        "left": {"type": "constant", "value": 1},
        "right": {"type": "constant", "value": 2},
    }
    with pytest.raises(SchemaError) as err:
        parse_ir(json.dumps(doc))
    assert "divide" in str(err.value)
    assert "objective.expression" in err.value.path


def test_positional_offset_outside_range():
    with pytest.raises(TokenError):
        parse_index_token("Periods[3]")
    with pytest.raises(TokenError):
        parse_index_token("Periods[-2]")
    with pytest.raises(TokenError):
        parse_index_token("9bad")


def test_token_forms():
    assert parse_index_token("i") == Symbol("i")
    assert parse_index_token("Periods[0]") == Positional("Periods", 0)
    assert parse_index_token("Periods[-1]") == Positional("Periods", -1)


def test_bad_json_raises_decode_error():
    with pytest.raises(json.JSONDecodeError):
        parse_ir("{not json")


def test_unknown_extra_fields_become_warnings():
    doc = fixture_json("freight_assignment")
    doc["variables"]["x"]["priority"] = 3
    model = parse_ir(json.dumps(doc))
    assert any(w.code == "unknown-field" and "priority" in w.path
               for w in model.parse_warnings)


def test_duplicate_name_rejected():
    text = fixture_text("freight_assignment")
    dup = text.replace('"assignment_limit"', '"carrier_capacity_constraint"', 1)
    with pytest.raises(SchemaError):
        parse_ir(dup)


def test_missing_required_section():
    doc = fixture_json("freight_assignment")
    del doc["objective"]
    with pytest.raises(SchemaError):
        parse_ir(json.dumps(doc))


def test_bad_sense_rejected():
    doc = fixture_json("freight_assignment")
    doc["constraints"]["assignment_limit"]["sense"] = "<"
    with pytest.raises(SchemaError):
        parse_ir(json.dumps(doc))
