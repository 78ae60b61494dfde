"""Materialize IR sets and parameters from loaded CSV tables.

Sparse-default semantics: a parameter key that is absent from its table
resolves to a tagged default (zero or infinity) chosen by the definition;
callers decide how the infinity default composes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import (
    ArityError,
    CellParseError,
    DuplicateElement,
    DuplicateKey,
    MissingColumn,
    MissingTable,
    ScalarCardinality,
    UnknownIndexElement,
)
from ..ir.nodes import Issue, ParamDef, SetDef
from .store import DataStore


@dataclass(frozen=True)
class SetInstance:
    name: str
    elements: tuple[str, ...]
    ordered: bool
    position: dict[str, int] = field(default_factory=dict)

    @staticmethod
    def build(name: str, elements: list[str], ordered: bool) -> "SetInstance":
        return SetInstance(name, tuple(elements), ordered,
                           {e: i for i, e in enumerate(elements)})

    def __contains__(self, element: str) -> bool:
        return element in self.position

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class ParamInstance:
    name: str
    arity: int
    entries: dict[tuple[str, ...], float]
    default: str  # "zero" | "inf"
    scalar_value: float | None = None


@dataclass(frozen=True, slots=True)
class LookupResult:
    kind: str  # "value" | "zero" | "inf"
    value: float

    @property
    def is_value(self) -> bool:
        return self.kind == "value"


DEFAULT_ZERO = LookupResult("zero", 0.0)
DEFAULT_INF = LookupResult("inf", math.inf)


def table_stem(source: str) -> str:
    return Path(source).stem


def materialize_set(name: str, sdef: SetDef, store: DataStore,
                    warnings: list[Issue] | None = None) -> SetInstance:
    """Collect a set's elements from its source table in row order."""
    rows = store.table(table_stem(sdef.source))
    if rows is None:
        raise MissingTable(f"set {name!r}: table {sdef.source!r} not loaded")
    if rows and sdef.column not in rows[0]:
        raise MissingColumn(f"set {name!r}: column {sdef.column!r} missing "
                            f"from {sdef.source!r}")
    if rows and sdef.filter_column is not None and sdef.filter_column not in rows[0]:
        raise MissingColumn(f"set {name!r}: filter column "
                            f"{sdef.filter_column!r} missing from {sdef.source!r}")
    elements: list[str] = []
    seen = set()
    for row in rows:
        if sdef.filter_column is not None and \
                row[sdef.filter_column] != sdef.filter_value:
            continue
        element = row[sdef.column].strip()
        if element in seen:
            raise DuplicateElement(name, element)
        seen.add(element)
        elements.append(element)
    if not elements and warnings is not None:
        warnings.append(Issue("empty-set", f"sets.{name}",
                              "no rows matched; the set is empty"))
    if warnings is not None and sdef.size is not None \
            and sdef.size != len(elements):
        warnings.append(Issue("size-mismatch", f"sets.{name}",
                              f"declared size {sdef.size} but materialized "
                              f"{len(elements)} elements"))
    return SetInstance.build(name, elements, sdef.ordered)


def parse_numeric(cell: str, kind: str, context: str) -> float:
    text = cell.strip()
    lowered = text.lower().lstrip("+-")
    if lowered in ("inf", "infinity", "nan"):
        raise CellParseError(f"{context}: non-finite value {cell!r}")
    try:
        value = float(text)
    except ValueError:
        raise CellParseError(f"{context}: cannot parse {cell!r}") from None
    if not math.isfinite(value):
        raise CellParseError(f"{context}: non-finite value {cell!r}")
    if kind == "int" and not value.is_integer():
        raise CellParseError(f"{context}: expected an integer, got {cell!r}")
    return value


def materialize_param(name: str, pdef: ParamDef, store: DataStore,
                      sets: dict[str, SetInstance]) -> ParamInstance:
    """Index a parameter table by its key columns.

    Keys are matched against set elements as trimmed strings; there is no
    numeric coercion ("1" and "01" are different keys). Optional parameters
    with no table succeed with empty entries.
    """
    rows = store.table(table_stem(pdef.source))
    if rows is None:
        if pdef.optional:
            return ParamInstance(name, len(pdef.domain), {}, pdef.missing_default)
        raise MissingTable(f"parameter {name!r}: table {pdef.source!r} not loaded")

    if pdef.index_columns is None:  # scalar
        if len(rows) != 1:
            raise ScalarCardinality(
                f"parameter {name!r}: scalar table {pdef.source!r} has "
                f"{len(rows)} rows, expected exactly 1")
        if pdef.column not in rows[0]:
            raise MissingColumn(f"parameter {name!r}: column {pdef.column!r} "
                                f"missing from {pdef.source!r}")
        value = parse_numeric(rows[0][pdef.column], pdef.type,
                              f"{pdef.source} row 1")
        return ParamInstance(name, 0, {}, pdef.missing_default, value)

    if rows:
        missing = [c for c in (*pdef.index_columns, pdef.column)
                   if c not in rows[0]]
        if missing:
            raise MissingColumn(f"parameter {name!r}: columns {missing} "
                                f"missing from {pdef.source!r}")
    domain_sets = [sets[s] for s in pdef.domain]
    entries: dict[tuple[str, ...], float] = {}
    for i, row in enumerate(rows, start=2):
        key = tuple(row[c].strip() for c in pdef.index_columns)
        for component, sinst in zip(key, domain_sets):
            if component not in sinst:
                raise UnknownIndexElement(name, key)
        if key in entries:
            raise DuplicateKey(f"parameter {name!r}: key {key!r} appears "
                               "more than once")
        entries[key] = parse_numeric(row[pdef.column], pdef.type,
                                     f"{pdef.source} row {i}")
    return ParamInstance(name, len(pdef.domain), entries, pdef.missing_default)


def lookup(param: ParamInstance, key: tuple[str, ...]) -> LookupResult:
    """Resolve a key to its stored value or the parameter's tagged default."""
    if len(key) != param.arity:
        raise ArityError(f"parameter {param.name!r}: key arity {len(key)} "
                         f"does not match parameter arity {param.arity}")
    if param.arity == 0:
        if param.scalar_value is not None:
            return LookupResult("value", param.scalar_value)
    else:
        value = param.entries.get(key)
        if value is not None:
            return LookupResult("value", value)
    return DEFAULT_ZERO if param.default == "zero" else DEFAULT_INF
