"""Deterministic JSON serialization of IR models.

Key order is canonical and follows declaration order for named entities, so
reserializing an edited model changes only the edited region. Reparsing a
serialized model yields a structurally equal model.
"""

from __future__ import annotations

import json

from .nodes import (
    BinOp,
    Const,
    Expr,
    IndexedSum,
    IRModel,
    ParamRef,
    VarRef,
)


def _num(value: float):
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def _expr_dict(expr: Expr) -> dict:
    if isinstance(expr, Const):
        return {"type": "constant", "value": _num(expr.value)}
    if isinstance(expr, VarRef):
        out = {"type": "variable", "name": expr.name,
               "indices": [t.text() for t in expr.indices]}
        if expr.lag is not None:
            out["lag"] = expr.lag
        return out
    if isinstance(expr, ParamRef):
        return {"type": "parameter", "name": expr.name,
                "indices": [t.text() for t in expr.indices]}
    if isinstance(expr, IndexedSum):
        return {"operation": "indexed_sum", "over": list(expr.over),
                "body": _expr_dict(expr.body)}
    assert isinstance(expr, BinOp)
    return {"operation": expr.op, "left": _expr_dict(expr.left),
            "right": _expr_dict(expr.right)}


def model_to_dict(model: IRModel) -> dict:
    sets = {}
    for name, s in model.sets.items():
        sets[name] = {
            "size": s.size,
            "index_symbol": s.index_symbol,
            "source": s.source,
            "column": s.column,
            "filter_column": s.filter_column,
            "filter_value": s.filter_value,
            "ordered": s.ordered,
        }
    parameters = {}
    for name, p in model.parameters.items():
        entry = {
            "domain": list(p.domain),
            "type": p.type,
            "source": p.source,
            "column": p.column,
            "index_columns": None if p.index_columns is None else list(p.index_columns),
            "missing_default": p.missing_default,
        }
        if p.optional:
            entry["optional"] = True
        parameters[name] = entry
    variables = {}
    for name, v in model.variables.items():
        entry = {
            "description": v.description,
            "label": v.label,
            "domain": list(v.domain),
            "type": v.type,
            "lower_bound": None if v.lower_bound is None else _num(v.lower_bound),
            "upper_bound": None if v.upper_bound is None else _num(v.upper_bound),
        }
        if v.upper_bound_set is not None:
            entry["upper_bound_set"] = v.upper_bound_set
        if v.exclude_diagonal:
            entry["exclude_diagonal"] = True
        if v.domain_filter is not None:
            entry["domain_filter"] = v.domain_filter
        variables[name] = entry
    constraints = {}
    for name, c in model.constraints.items():
        entry = {
            "domain": list(c.domain),
            "expression": _expr_dict(c.expression),
            "sense": c.sense,
            "rhs": _expr_dict(c.rhs),
        }
        if c.sparse_filter is not None:
            entry["sparse_filter"] = c.sparse_filter
        constraints[name] = entry
    doc = {
        "problem_class": model.problem_class,
        "model_type": model.model_type,
        "sense": model.sense,
        "sets": sets,
        "parameters": parameters,
        "variables": variables,
        "constraints": constraints,
        "objective": {
            "sense": model.objective.sense,
            "expression": _expr_dict(model.objective.expression),
        },
    }
    if model.variable_fixes:
        doc["variable_fixes"] = [
            {"variable": f.variable, "key": list(f.key), "value": _num(f.value)}
            for f in model.variable_fixes
        ]
    return doc


def serialize_ir(model: IRModel) -> str:
    """Serialize to UTF-8 JSON text with 2-space indentation."""
    return json.dumps(model_to_dict(model), indent=2) + "\n"
