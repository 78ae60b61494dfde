from .nodes import (
    BinOp,
    Const,
    ConstraintDef,
    Expr,
    expr_has_variables,
    IndexedSum,
    IRModel,
    Issue,
    ObjectiveDef,
    ParamDef,
    ParamRef,
    Positional,
    SetDef,
    Symbol,
    ValidationReport,
    VarDef,
    VariableFix,
    VarRef,
    walk_expr,
)
from .parser import parse_index_token, parse_ir
from .serializer import model_to_dict, serialize_ir
from .validator import require_valid, subsequence_positions, validate_ir

__all__ = [
    "BinOp", "Const", "ConstraintDef", "Expr", "expr_has_variables",
    "IndexedSum", "IRModel", "Issue", "ObjectiveDef", "ParamDef", "ParamRef",
    "Positional", "SetDef", "Symbol", "ValidationReport", "VarDef",
    "VariableFix", "VarRef", "walk_expr", "parse_index_token", "parse_ir",
    "model_to_dict", "serialize_ir", "require_valid",
    "subsequence_positions", "validate_ir",
]
