"""What-if patches.

Two disjoint categories: data patches edit parameter tables and leave the
model structure intact; structural patches edit the IR itself and are
revalidated in full. Both apply copy-on-write so the base model and store
are never mutated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Optional, Union

from ..build.lpwrite import format_number
from ..data.materialize import table_stem
from ..data.store import DataStore
from ..errors import (
    DuplicateConstraint,
    NoMatch,
    SchemaError,
    UnknownConstraint,
    UnknownParam,
    UnknownVariable,
)
from ..ir.nodes import Const, ConstraintDef, IRModel, Issue, ROW_SENSES, VariableFix
from ..ir.parser import _parse_constraint
from ..ir.validator import require_valid


@dataclass(frozen=True)
class DataPatch:
    param: str
    selector_kind: str  # "all" | "key" | "prefix"
    selector: tuple[str, ...]
    op: str  # "set" | "scale"
    value: float

    def __post_init__(self):
        if self.op not in ("set", "scale"):
            raise SchemaError("patch.op", f"unknown op {self.op!r}")
        if self.op == "scale" and not self.value > 0:
            raise SchemaError("patch.value", "scale factor must be positive")
        if self.op == "set" and self.selector_kind != "key":
            raise SchemaError("patch.selector",
                              "set requires an exact-key selector")


@dataclass(frozen=True)
class StructPatch:
    action: str
    name: Optional[str] = None
    definition: Optional[ConstraintDef] = None
    sense: Optional[str] = None
    delta: Optional[float] = None
    variable: Optional[str] = None
    key: Optional[tuple[str, ...]] = None
    lb: Optional[float] = None
    ub: Optional[float] = None
    value: Optional[float] = None


Patch = Union[DataPatch, StructPatch]

_STRUCT_ACTIONS = ("add_constraint", "remove_constraint", "set_sense",
                   "set_rhs_constant_shift", "set_variable_bound",
                   "fix_variable")


def parse_patch(raw: dict, index: int) -> Patch:
    path = f"patches[{index}]"
    if not isinstance(raw, dict):
        raise SchemaError(path, "patch must be an object")
    kind = raw.get("kind")
    if kind == "data":
        selector = raw.get("selector", {"type": "all"})
        if not isinstance(selector, dict) or "type" not in selector:
            raise SchemaError(path + ".selector", "selector needs a type")
        stype = selector["type"]
        if stype == "all":
            sel: tuple[str, ...] = ()
        elif stype == "key":
            sel = tuple(str(k) for k in selector.get("key", []))
        elif stype == "prefix":
            sel = tuple(str(k) for k in selector.get("prefix", []))
        else:
            raise SchemaError(path + ".selector.type",
                              f"unknown selector type {stype!r}")
        try:
            return DataPatch(str(raw["param"]), stype, sel,
                             str(raw["op"]), float(raw["value"]))
        except KeyError as exc:
            raise SchemaError(path, f"missing field {exc.args[0]!r}") from None
    if kind == "struct":
        action = raw.get("action")
        if action not in _STRUCT_ACTIONS:
            raise SchemaError(path + ".action", f"unknown action {action!r}")
        definition = None
        if action == "add_constraint":
            if "definition" not in raw:
                raise SchemaError(path, "add_constraint needs a definition")
            definition = _parse_constraint(str(raw.get("name", "added")),
                                           raw["definition"], [])
        sense = raw.get("sense")
        if action == "set_sense" and sense not in ROW_SENSES:
            raise SchemaError(path + ".sense", f"invalid sense {sense!r}")
        key = raw.get("key")
        return StructPatch(
            action=action,
            name=raw.get("name"),
            definition=definition,
            sense=sense,
            delta=None if raw.get("delta") is None else float(raw["delta"]),
            variable=raw.get("variable"),
            key=None if key is None else tuple(str(k) for k in key),
            lb=None if raw.get("lb") is None else float(raw["lb"]),
            ub=None if raw.get("ub") is None else float(raw["ub"]),
            value=None if raw.get("value") is None else float(raw["value"]),
        )
    raise SchemaError(path + ".kind", f"patch kind must be 'data' or "
                                      f"'struct', got {kind!r}")


def parse_patches(text: str) -> list[Patch]:
    raw = json.loads(text)
    if not isinstance(raw, list):
        raise SchemaError("patches", "patch file must be a JSON array")
    return [parse_patch(entry, i) for i, entry in enumerate(raw)]


def _match(selector_kind: str, selector: tuple[str, ...],
           key: tuple[str, ...]) -> bool:
    if selector_kind == "all":
        return True
    if selector_kind == "key":
        return key == selector
    return key[: len(selector)] == selector


def apply_data_patch(store: DataStore, model: IRModel, patch: DataPatch,
                     warnings: list[Issue] | None = None) -> DataStore:
    """Returns a new store; untouched tables are shared. A `set` on an
    absent exact key inserts a row."""
    pdef = model.parameters.get(patch.param)
    if pdef is None:
        raise UnknownParam(f"unknown parameter {patch.param!r}")
    if pdef.index_columns is None and patch.selector_kind != "all" \
            and patch.selector:
        raise SchemaError("patch.selector",
                          f"{patch.param!r} is scalar; use an empty key")
    stem = table_stem(pdef.source)
    rows = store.table(stem)
    if rows is None:
        if not pdef.optional:
            raise UnknownParam(f"table {pdef.source!r} for parameter "
                               f"{patch.param!r} is not loaded")
        rows = []
    index_columns = pdef.index_columns or ()
    new_rows = []
    matched = 0
    for row in rows:
        key = tuple(row[c].strip() for c in index_columns)
        if _match(patch.selector_kind, patch.selector, key):
            matched += 1
            new_value = (patch.value if patch.op == "set"
                         else float(row[pdef.column]) * patch.value)
            row = dict(row)
            row[pdef.column] = format_number(new_value)
        new_rows.append(row)
    if matched == 0:
        if patch.op == "set" and patch.selector_kind == "key":
            inserted = {c: k for c, k in zip(index_columns, patch.selector)}
            inserted[pdef.column] = format_number(patch.value)
            if new_rows:
                template = {c: "" for c in new_rows[0]}
                template.update(inserted)
                inserted = template
            new_rows.append(inserted)
        elif patch.op == "scale" and patch.selector_kind == "key":
            raise NoMatch(f"scale on absent key {patch.selector!r} of "
                          f"{patch.param!r}")
        elif warnings is not None:
            warnings.append(Issue(
                "patch-no-match", f"parameters.{patch.param}",
                f"{patch.op} matched no rows"))
    return store.with_table(stem, new_rows)


def apply_struct_patch(model: IRModel, patch: StructPatch) -> IRModel:
    """Returns a new, fully-revalidated model. Raises ValidationFailed when
    the edit breaks the model."""
    action = patch.action
    if action == "add_constraint":
        if patch.name in model.constraints:
            raise DuplicateConstraint(f"constraint {patch.name!r} exists")
        constraints = dict(model.constraints)
        constraints[patch.name] = patch.definition
        out = model.with_constraints(constraints)
    elif action == "remove_constraint":
        if patch.name not in model.constraints:
            raise UnknownConstraint(f"unknown constraint {patch.name!r}")
        constraints = dict(model.constraints)
        del constraints[patch.name]
        out = model.with_constraints(constraints)
    elif action == "set_sense":
        cdef = model.constraints.get(patch.name)
        if cdef is None:
            raise UnknownConstraint(f"unknown constraint {patch.name!r}")
        constraints = dict(model.constraints)
        constraints[patch.name] = replace(cdef, sense=patch.sense)
        out = model.with_constraints(constraints)
    elif action == "set_rhs_constant_shift":
        cdef = model.constraints.get(patch.name)
        if cdef is None:
            raise UnknownConstraint(f"unknown constraint {patch.name!r}")
        if not isinstance(cdef.rhs, Const):
            raise SchemaError(f"constraints.{patch.name}.rhs",
                              "rhs shift requires a constant right-hand "
                              "side; edit parameter data instead")
        constraints = dict(model.constraints)
        constraints[patch.name] = replace(
            cdef, rhs=Const(cdef.rhs.value + patch.delta))
        out = model.with_constraints(constraints)
    elif action == "set_variable_bound":
        vdef = model.variables.get(patch.variable)
        if vdef is None:
            raise UnknownVariable(f"unknown variable {patch.variable!r}")
        changes = {}
        if patch.lb is not None:
            changes["lower_bound"] = patch.lb
        if patch.ub is not None:
            changes["upper_bound"] = patch.ub
        variables = dict(model.variables)
        variables[patch.variable] = replace(vdef, **changes)
        out = model.with_variables(variables)
    elif action == "fix_variable":
        if patch.variable not in model.variables:
            raise UnknownVariable(f"unknown variable {patch.variable!r}")
        fixes = tuple(f for f in model.variable_fixes
                      if not (f.variable == patch.variable
                              and f.key == patch.key))
        fixes += (VariableFix(patch.variable, patch.key, patch.value),)
        out = model.with_fixes(fixes)
    else:  # pragma: no cover - parse_patch rejects unknown actions
        raise SchemaError("patch.action", f"unknown action {action!r}")
    require_valid(out)
    return out
