"""LP solve entry point."""

from __future__ import annotations

import sys
import time

from ..build.compile import CanonicalModel
from ..errors import NumericalBreakdown
from . import simplex as sx
from .solution import build_solution, Solution, SolveOptions


def _deadline(opts: SolveOptions) -> float | None:
    if opts.time_limit is None:
        return None
    return time.monotonic() + opts.time_limit


def make_engine(cm: CanonicalModel, opts: SolveOptions,
                deadline: float | None) -> sx.SimplexEngine:
    A, b, c, lb, ub, n_struct = sx.build_standard_form(cm)
    engine = sx.SimplexEngine(A, b, c, lb, ub,
                              feasibility_tol=opts.feasibility_tol,
                              deadline=deadline)
    engine.n_struct = n_struct
    return engine


def relaxation_status(cm: CanonicalModel, engine: sx.SimplexEngine) -> str:
    try:
        return engine.two_phase()
    except sx.TimeLimit:
        return sx.FEASIBLE if engine.phase == 2 else sx.ERROR
    except NumericalBreakdown:
        return sx.ERROR


def solve_lp(cm: CanonicalModel, opts: SolveOptions | None = None) -> Solution:
    """Two-phase primal simplex on the compiled model; raises ValueError if
    binaries are present (use solve_mip)."""
    opts = opts or SolveOptions()
    if any(v.type == "binary" for v in cm.variables):
        raise ValueError("model has binary variables; use solve_mip")
    if cm.infeasible_rows:
        return Solution("infeasible", None)
    if not cm.variables:
        return Solution("optimal", cm.objective.constant)
    engine = make_engine(cm, opts, _deadline(opts))
    status = relaxation_status(cm, engine)
    if opts.log:
        print(f"simplex: status={status} iterations={engine.iterations}",
              file=sys.stderr)
    if status in (sx.OPTIMAL, sx.FEASIBLE):
        x = engine.solution_vector()[:engine.n_struct]
        return build_solution(cm, status, x, iterations=engine.iterations)
    return Solution(status, None, iterations=engine.iterations)
