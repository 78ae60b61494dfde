from .branch_bound import solve_mip
from .check import check_solution, CheckReport
from .kernels import USING_COMPILED
from .lp import solve_lp
from .solution import (
    build_solution,
    evaluate_form,
    Solution,
    SolutionGroup,
    SolveOptions,
    write_solution,
)

from ..build.compile import CanonicalModel


def solve(cm: CanonicalModel, opts: SolveOptions | None = None) -> Solution:
    """Dispatch on variable types: pure LPs go to the simplex, anything
    with binaries to branch and bound."""
    if any(v.type == "binary" for v in cm.variables):
        return solve_mip(cm, opts)
    return solve_lp(cm, opts)


__all__ = [
    "solve", "solve_lp", "solve_mip", "check_solution", "CheckReport",
    "USING_COMPILED", "build_solution", "evaluate_form", "Solution",
    "SolutionGroup", "SolveOptions", "write_solution",
]
