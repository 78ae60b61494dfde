"""Parse IR JSON documents into typed IRModel values.

Shape and tag problems raise SchemaError/TokenError immediately; fields we
do not recognize on otherwise-valid objects are kept as warnings so the
validator can surface them without rejecting the document.
"""

from __future__ import annotations

import json
import re

from ..errors import SchemaError, TokenError
from .nodes import (
    BinOp,
    Const,
    ConstraintDef,
    Expr,
    IndexedSum,
    IRModel,
    Issue,
    MISSING_DEFAULTS,
    ObjectiveDef,
    ParamDef,
    ParamRef,
    PARAM_TYPES,
    Positional,
    ROW_SENSES,
    SENSES,
    SetDef,
    Symbol,
    VarDef,
    VariableFix,
    VarRef,
    VAR_TYPES,
)

_SYMBOL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_POSITIONAL_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\[(-?\d+)\]$")

_SET_FIELDS = {"size", "index_symbol", "source", "column", "filter_column",
               "filter_value", "ordered"}
_PARAM_FIELDS = {"domain", "type", "source", "column", "index_columns",
                 "missing_default", "optional"}
_VAR_FIELDS = {"description", "label", "domain", "type", "lower_bound",
               "upper_bound", "domain_filter", "upper_bound_set",
               "exclude_diagonal"}
_CONSTRAINT_FIELDS = {"domain", "expression", "sense", "rhs", "sparse_filter"}
_ROOT_FIELDS = {"problem_class", "model_type", "sense", "sets", "parameters",
                "variables", "constraints", "objective", "variable_fixes"}


def parse_index_token(text: str) -> Symbol | Positional:
    """Parse one index token: a bare symbol, ``Name[0]``, or ``Name[-1]``."""
    if not isinstance(text, str):
        raise TokenError(f"index token must be a string, got {text!r}")
    if _SYMBOL_RE.match(text):
        return Symbol(text)
    m = _POSITIONAL_RE.match(text)
    if m:
        offset = int(m.group(2))
        if offset not in (0, -1):
            raise TokenError(
                f"positional index {text!r}: offset must be 0 or -1")
        return Positional(m.group(1), offset)
    raise TokenError(f"malformed index token {text!r}")


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise SchemaError(path, f"missing required field {key!r}")
    return obj[key]


def _check_enum(value, allowed, path: str):
    if value not in allowed:
        raise SchemaError(path, f"expected one of {list(allowed)}, got {value!r}")
    return value


def _no_dupes(pairs, path: str):
    obj = {}
    for key, value in pairs:
        if key in obj:
            raise SchemaError(path, f"duplicate name {key!r}")
        obj[key] = value
    return obj


def _parse_indices(raw, path: str) -> tuple:
    if not isinstance(raw, list):
        raise SchemaError(path, "indices must be a list")
    return tuple(parse_index_token(tok) for tok in raw)


def parse_expr(raw, path: str, warnings: list[Issue]) -> Expr:
    if not isinstance(raw, dict):
        raise SchemaError(path, f"expression must be an object, got {type(raw).__name__}")
    if "operation" in raw:
        op = raw["operation"]
        if op == "indexed_sum":
            over = _require(raw, "over", path)
            if not isinstance(over, list) or not all(isinstance(s, str) for s in over):
                raise SchemaError(path + ".over", "must be a list of set names")
            body = parse_expr(_require(raw, "body", path), path + ".body", warnings)
            _warn_extra(raw, {"operation", "over", "body"}, path, warnings)
            return IndexedSum(tuple(over), body)
        if op in ("sum", "subtract", "multiply"):
            left = parse_expr(_require(raw, "left", path), path + ".left", warnings)
            right = parse_expr(_require(raw, "right", path), path + ".right", warnings)
            _warn_extra(raw, {"operation", "left", "right"}, path, warnings)
            return BinOp(op, left, right)
        raise SchemaError(path, f"unknown operation {op!r}")
    if "type" in raw:
        kind = raw["type"]
        if kind == "constant":
            value = _require(raw, "value", path)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise SchemaError(path + ".value", "constant value must be a number")
            _warn_extra(raw, {"type", "value"}, path, warnings)
            return Const(float(value))
        if kind == "variable":
            name = _require(raw, "name", path)
            indices = _parse_indices(_require(raw, "indices", path), path + ".indices")
            lag = raw.get("lag")
            if lag is not None and (not isinstance(lag, int) or isinstance(lag, bool)):
                raise SchemaError(path + ".lag", "lag must be an integer")
            _warn_extra(raw, {"type", "name", "indices", "lag"}, path, warnings)
            return VarRef(name, indices, lag)
        if kind == "parameter":
            name = _require(raw, "name", path)
            indices = _parse_indices(_require(raw, "indices", path), path + ".indices")
            _warn_extra(raw, {"type", "name", "indices"}, path, warnings)
            return ParamRef(name, indices)
        raise SchemaError(path, f"unknown expression type {kind!r}")
    raise SchemaError(path, "expression needs an 'operation' or 'type' tag")


def _warn_extra(obj: dict, known: set, path: str, warnings: list[Issue]):
    for key in obj:
        if key not in known:
            warnings.append(Issue("unknown-field", f"{path}.{key}",
                                  f"unrecognized field {key!r} ignored"))


def _parse_set(name: str, raw, warnings: list[Issue]) -> SetDef:
    path = f"sets.{name}"
    if not isinstance(raw, dict):
        raise SchemaError(path, "set definition must be an object")
    size = raw.get("size")
    if size is not None and (not isinstance(size, int) or isinstance(size, bool)):
        raise SchemaError(path + ".size", "size must be an integer or null")
    filter_column = raw.get("filter_column")
    filter_value = raw.get("filter_value")
    if (filter_column is None) != (filter_value is None):
        raise SchemaError(path, "filter_column and filter_value must be "
                                "both present or both absent")
    _warn_extra(raw, _SET_FIELDS, path, warnings)
    return SetDef(
        index_symbol=str(_require(raw, "index_symbol", path)),
        source=str(_require(raw, "source", path)),
        column=str(_require(raw, "column", path)),
        filter_column=filter_column,
        filter_value=None if filter_value is None else str(filter_value),
        ordered=bool(raw.get("ordered", False)),
        size=size,
    )


def _parse_param(name: str, raw, warnings: list[Issue]) -> ParamDef:
    path = f"parameters.{name}"
    if not isinstance(raw, dict):
        raise SchemaError(path, "parameter definition must be an object")
    domain = _require(raw, "domain", path)
    if not isinstance(domain, list) or not all(isinstance(s, str) for s in domain):
        raise SchemaError(path + ".domain", "must be a list of set names")
    index_columns = _require(raw, "index_columns", path)
    if index_columns is not None:
        if not isinstance(index_columns, list) or not all(
                isinstance(c, str) for c in index_columns):
            raise SchemaError(path + ".index_columns",
                              "must be a list of column names or null")
        index_columns = tuple(index_columns)
    _warn_extra(raw, _PARAM_FIELDS, path, warnings)
    return ParamDef(
        domain=tuple(domain),
        type=_check_enum(_require(raw, "type", path), PARAM_TYPES, path + ".type"),
        source=str(_require(raw, "source", path)),
        column=str(_require(raw, "column", path)),
        index_columns=index_columns,
        missing_default=_check_enum(_require(raw, "missing_default", path),
                                    MISSING_DEFAULTS, path + ".missing_default"),
        optional=bool(raw.get("optional", False)),
    )


def _parse_number(raw, path: str):
    if raw is None:
        return None
    if not isinstance(raw, (int, float)) or isinstance(raw, bool):
        raise SchemaError(path, "bound must be a number or null")
    return float(raw)


def _parse_var(name: str, raw, warnings: list[Issue]) -> VarDef:
    path = f"variables.{name}"
    if not isinstance(raw, dict):
        raise SchemaError(path, "variable definition must be an object")
    domain = _require(raw, "domain", path)
    if not isinstance(domain, list) or not all(isinstance(s, str) for s in domain):
        raise SchemaError(path + ".domain", "must be a list of set names")
    _warn_extra(raw, _VAR_FIELDS, path, warnings)
    return VarDef(
        description=str(raw.get("description", "")),
        label=str(raw.get("label", name)),
        domain=tuple(domain),
        type=_check_enum(_require(raw, "type", path), VAR_TYPES, path + ".type"),
        lower_bound=_parse_number(raw.get("lower_bound"), path + ".lower_bound"),
        upper_bound=_parse_number(raw.get("upper_bound"), path + ".upper_bound"),
        domain_filter=raw.get("domain_filter"),
        upper_bound_set=raw.get("upper_bound_set"),
        exclude_diagonal=bool(raw.get("exclude_diagonal", False)),
    )


def _parse_constraint(name: str, raw, warnings: list[Issue]) -> ConstraintDef:
    path = f"constraints.{name}"
    if not isinstance(raw, dict):
        raise SchemaError(path, "constraint definition must be an object")
    domain = _require(raw, "domain", path)
    if not isinstance(domain, list) or not all(isinstance(s, str) for s in domain):
        raise SchemaError(path + ".domain", "must be a list of set names")
    _warn_extra(raw, _CONSTRAINT_FIELDS, path, warnings)
    return ConstraintDef(
        domain=tuple(domain),
        expression=parse_expr(_require(raw, "expression", path),
                              path + ".expression", warnings),
        sense=_check_enum(_require(raw, "sense", path), ROW_SENSES, path + ".sense"),
        rhs=parse_expr(_require(raw, "rhs", path), path + ".rhs", warnings),
        sparse_filter=raw.get("sparse_filter"),
    )


def _parse_fix(i: int, raw) -> VariableFix:
    path = f"variable_fixes[{i}]"
    if not isinstance(raw, dict):
        raise SchemaError(path, "variable fix must be an object")
    key = _require(raw, "key", path)
    if not isinstance(key, list) or not all(isinstance(k, str) for k in key):
        raise SchemaError(path + ".key", "must be a list of element ids")
    value = _require(raw, "value", path)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise SchemaError(path + ".value", "must be a number")
    return VariableFix(str(_require(raw, "variable", path)), tuple(key), float(value))


def parse_ir(text: str) -> IRModel:
    """Parse an IR JSON document.

    Raises json.JSONDecodeError for bad JSON, SchemaError for wrong shapes
    or unknown tags, and TokenError for malformed index tokens. Unrecognized
    extra fields on known objects become warnings on the returned model.
    """
    raw = json.loads(
        text, object_pairs_hook=lambda pairs: _no_dupes(pairs, "document"))
    if not isinstance(raw, dict):
        raise SchemaError("document", "top level must be an object")
    warnings: list[Issue] = []
    for section in ("sets", "parameters", "variables", "constraints"):
        value = _require(raw, section, "document")
        if not isinstance(value, dict):
            raise SchemaError(section, "must be an object")
    objective_raw = _require(raw, "objective", "document")
    if not isinstance(objective_raw, dict):
        raise SchemaError("objective", "must be an object")
    _warn_extra(raw, _ROOT_FIELDS, "document", warnings)
    _warn_extra(objective_raw, {"sense", "expression"}, "objective", warnings)

    sense = _check_enum(_require(raw, "sense", "document"), SENSES, "sense")
    objective = ObjectiveDef(
        sense=_check_enum(_require(objective_raw, "sense", "objective"),
                          SENSES, "objective.sense"),
        expression=parse_expr(_require(objective_raw, "expression", "objective"),
                              "objective.expression", warnings),
    )
    fixes_raw = raw.get("variable_fixes", [])
    if not isinstance(fixes_raw, list):
        raise SchemaError("variable_fixes", "must be a list")
    return IRModel(
        problem_class=str(raw.get("problem_class", "")),
        model_type=str(raw.get("model_type", "")),
        sense=sense,
        sets={n: _parse_set(n, d, warnings) for n, d in raw["sets"].items()},
        parameters={n: _parse_param(n, d, warnings)
                    for n, d in raw["parameters"].items()},
        variables={n: _parse_var(n, d, warnings)
                   for n, d in raw["variables"].items()},
        constraints={n: _parse_constraint(n, d, warnings)
                     for n, d in raw["constraints"].items()},
        objective=objective,
        variable_fixes=tuple(_parse_fix(i, f) for i, f in enumerate(fixes_raw)),
        parse_warnings=tuple(warnings),
    )
