import difflib
import json

import pytest

from orir.ir import parse_ir, serialize_ir
from orir.whatif.patches import apply_struct_patch, StructPatch

from conftest import FIXTURE_NAMES, fixture_model, fixture_text


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_roundtrip_idempotent(name):
    """parse . serialize . parse is structurally idempotent."""
    first = parse_ir(serialize_ir(fixture_model(name)))
    second = parse_ir(serialize_ir(first))
    assert first == second
    assert serialize_ir(first) == serialize_ir(second)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_serialized_text_is_valid_json(name):
    doc = json.loads(serialize_ir(fixture_model(name)))
    assert set(doc) >= {"problem_class", "model_type", "sense", "sets",
                        "parameters", "variables", "constraints", "objective"}


def test_empty_constraint_map_serializes():
    model = fixture_model("freight_assignment").with_constraints({})
    text = serialize_ir(model)
    assert '"constraints": {}' in text
    assert parse_ir(text).constraints == {}


def test_structural_patch_diff_is_local():
    """Serializing a patched model differs only in the patched constraint
    (textual diff oracle)."""
    model = fixture_model("freight_assignment")
    patched = apply_struct_patch(model, StructPatch(
        action="set_rhs_constant_shift", name="assignment_limit", delta=1))
    before = serialize_ir(model).splitlines()
    after = serialize_ir(patched).splitlines()
    changed = [line for line in difflib.unified_diff(before, after, n=0)
               if line.startswith(("-", "+")) and
               not line.startswith(("---", "+++"))]
    # Only the rhs value line of assignment_limit changes: one removal,
    # one addition.
    assert len(changed) == 2
    assert any('"value": 1' in line for line in changed if line[0] == "-")
    assert any('"value": 2' in line for line in changed if line[0] == "+")


def test_declaration_order_preserved():
    text = fixture_text("supply_chain_lp")
    model = parse_ir(text)
    out = serialize_ir(model)
    original_order = list(json.loads(text)["constraints"])
    serialized_order = list(json.loads(out)["constraints"])
    assert original_order == serialized_order
