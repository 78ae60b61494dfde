"""Variable instantiation over materialized sets.

Sparse-network encodings come from domain filters: a tuple is instantiated
only when its projection onto the filter parameter's domain appears in that
parameter's table. Instance ids are dense and follow iteration order, so
two expansions of the same inputs are identical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import CompileError, UnknownVariable
from ..ir.nodes import IRModel
from ..data.materialize import ParamInstance, SetInstance


@dataclass(frozen=True, slots=True)
class VarInstance:
    """One concrete decision variable. lb is always finite (the IR default
    lower bound is 0); ub of +inf means unbounded above."""

    id: int
    group: str
    key: tuple[str, ...]
    type: str  # "continuous" | "binary"
    lb: float
    ub: float


INF = float("inf")


def instantiate_variables(
    model: IRModel,
    sets: dict[str, SetInstance],
    params: dict[str, ParamInstance],
) -> tuple[list[VarInstance], dict[str, dict[tuple[str, ...], int]]]:
    """Expand every variable over its domain cross product in declaration
    order, applying domain filters and diagonal exclusion. Returns the
    instance list and a per-group key -> id map."""
    instances: list[VarInstance] = []
    index: dict[str, dict[tuple[str, ...], int]] = {}
    fixes = {}
    for fix in model.variable_fixes:
        fixes[(fix.variable, fix.key)] = fix.value

    next_id = 0
    for name, vdef in model.variables.items():
        group_index: dict[tuple[str, ...], int] = {}
        index[name] = group_index
        if vdef.type == "binary":
            # Declared binary bounds may narrow [0, 1] (e.g. a pinned ub
            # of 0) but never widen it.
            lb = 0.0 if vdef.lower_bound is None else max(0.0, vdef.lower_bound)
            ub = 1.0 if vdef.upper_bound is None else min(1.0, vdef.upper_bound)
        else:
            lb = 0.0 if vdef.lower_bound is None else float(vdef.lower_bound)
            ub = INF if vdef.upper_bound is None else float(vdef.upper_bound)
        filter_entries = None
        filter_arity = 0
        if vdef.domain_filter is not None:
            fparam = params[vdef.domain_filter]
            filter_entries = fparam.entries
            filter_arity = fparam.arity
        exclude_diagonal = vdef.exclude_diagonal
        element_lists = [sets[s].elements for s in vdef.domain]
        for key in itertools.product(*element_lists):
            if exclude_diagonal and key[0] == key[1]:
                continue
            if filter_entries is not None and key[:filter_arity] not in filter_entries:
                continue
            vlb, vub = lb, ub
            fixed = fixes.pop((name, key), None)
            if fixed is not None:
                vlb = vub = fixed
            group_index[key] = next_id
            instances.append(VarInstance(next_id, name, key, vdef.type, vlb, vub))
            next_id += 1

    if fixes:
        (group, key), _ = next(iter(fixes.items()))
        raise CompileError(
            "variable_fixes", None,
            UnknownVariable(f"no instance {group}{tuple(key)} to fix "
                            "(filtered out or key outside the domain)"))
    return instances, index
