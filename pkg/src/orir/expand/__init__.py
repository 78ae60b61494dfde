from .constraints import ExpandResult, expand_constraint, Row
from .instances import instantiate_variables, VarInstance
from .linearize import (
    eval_constant,
    ExpandEnv,
    LinearForm,
    linearize,
    resolve_index,
)

__all__ = [
    "ExpandResult", "expand_constraint", "Row", "instantiate_variables",
    "VarInstance", "eval_constant", "ExpandEnv", "LinearForm", "linearize",
    "resolve_index",
]
