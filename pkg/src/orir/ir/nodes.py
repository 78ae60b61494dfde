"""Typed model for IR documents: sets, parameters, variables, constraints,
and the expression tree. All values are immutable after construction and
safe to share across threads."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

SENSES = ("maximize", "minimize")
ROW_SENSES = ("<=", "=", ">=")
PARAM_TYPES = ("float", "int")
VAR_TYPES = ("continuous", "binary")
MISSING_DEFAULTS = ("zero", "inf")


@dataclass(frozen=True, slots=True)
class Symbol:
    """Index token bound by a constraint domain or an indexed sum."""

    name: str

    def text(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Positional:
    """Index token selecting the first (0) or last (-1) element of an
    ordered set."""

    set_name: str
    offset: int  # 0 or -1

    def text(self) -> str:
        return f"{self.set_name}[{self.offset}]"


IndexToken = Union[Symbol, Positional]


@dataclass(frozen=True, slots=True)
class Const:
    value: float


@dataclass(frozen=True, slots=True)
class VarRef:
    name: str
    indices: tuple[IndexToken, ...]
    lag: Optional[int] = None


@dataclass(frozen=True, slots=True)
class ParamRef:
    name: str
    indices: tuple[IndexToken, ...]


@dataclass(frozen=True, slots=True)
class BinOp:
    op: str  # "sum" | "subtract" | "multiply"
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class IndexedSum:
    over: tuple[str, ...]
    body: "Expr"


Expr = Union[Const, VarRef, ParamRef, BinOp, IndexedSum]


@dataclass(frozen=True, slots=True)
class SetDef:
    index_symbol: str
    source: str
    column: str
    filter_column: Optional[str] = None
    filter_value: Optional[str] = None
    ordered: bool = False
    size: Optional[int] = None


@dataclass(frozen=True, slots=True)
class ParamDef:
    domain: tuple[str, ...]
    type: str
    source: str
    column: str
    index_columns: Optional[tuple[str, ...]]
    missing_default: str
    optional: bool = False


@dataclass(frozen=True, slots=True)
class VarDef:
    description: str
    label: str
    domain: tuple[str, ...]
    type: str
    lower_bound: Optional[float]
    upper_bound: Optional[float]
    domain_filter: Optional[str] = None
    upper_bound_set: Optional[str] = None
    exclude_diagonal: bool = False


@dataclass(frozen=True, slots=True)
class ConstraintDef:
    domain: tuple[str, ...]
    expression: Expr
    sense: str
    rhs: Expr
    sparse_filter: Optional[str] = None


@dataclass(frozen=True, slots=True)
class ObjectiveDef:
    sense: str
    expression: Expr


@dataclass(frozen=True, slots=True)
class VariableFix:
    """A single-instance variable pin, carried alongside the IR so what-if
    fixes survive serialization. A dialect extension: only serialized when
    present, so documents without fixes round-trip unchanged."""

    variable: str
    key: tuple[str, ...]
    value: float


@dataclass(frozen=True)
class IRModel:
    problem_class: str
    model_type: str
    sense: str
    sets: dict[str, SetDef]
    parameters: dict[str, ParamDef]
    variables: dict[str, VarDef]
    constraints: dict[str, ConstraintDef]
    objective: ObjectiveDef
    variable_fixes: tuple[VariableFix, ...] = ()
    # Unrecognized-field notes collected during parsing; surfaced as
    # warnings by the validator.
    parse_warnings: tuple["Issue", ...] = ()

    def with_constraints(self, constraints: dict[str, ConstraintDef]) -> "IRModel":
        return replace(self, constraints=dict(constraints))

    def with_variables(self, variables: dict[str, VarDef]) -> "IRModel":
        return replace(self, variables=dict(variables))

    def with_fixes(self, fixes: tuple[VariableFix, ...]) -> "IRModel":
        return replace(self, variable_fixes=fixes)


@dataclass(frozen=True, slots=True)
class Issue:
    code: str
    path: str
    message: str


@dataclass(frozen=True, slots=True)
class ValidationReport:
    errors: tuple[Issue, ...] = ()
    warnings: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict:
        as_dict = lambda i: {"code": i.code, "path": i.path, "message": i.message}
        return {
            "ok": self.ok,
            "errors": [as_dict(e) for e in self.errors],
            "warnings": [as_dict(w) for w in self.warnings],
        }


def walk_expr(expr: Expr):
    """Yield every node of an expression tree, root first."""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, BinOp):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, IndexedSum):
            stack.append(node.body)


def expr_has_variables(expr: Expr) -> bool:
    """Structural test: does any VarRef appear under this node?"""
    return any(isinstance(n, VarRef) for n in walk_expr(expr))
