"""orir: a deterministic compiler, desk-scale solver, and what-if engine
for a solver-agnostic optimization model IR (JSON + CSV tables in,
validated canonical LP/MIP out, solved with reproducible artifacts)."""

from .build import compile_model, emit_lp, model_stats
from .data import load_tables
from .ir import parse_ir, serialize_ir, validate_ir
from .solver import check_solution, solve, solve_lp, solve_mip, SolveOptions

__version__ = "0.1.0"

__all__ = [
    "compile_model", "emit_lp", "model_stats", "load_tables", "parse_ir",
    "serialize_ir", "validate_ir", "check_solution", "solve", "solve_lp",
    "solve_mip", "SolveOptions", "__version__",
]
