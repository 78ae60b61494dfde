"""Branch and bound over binary variables.

One working LP is kept warm across the tree: moving to a node edits
variable bounds in place, a dual-simplex pass repairs primal feasibility,
and a primal cleanup pass restores optimality. Exploration is depth-first
(branching on the binary nearest 0.5, preferred child first) with a
best-bound restart every 1,000 nodes. If anything numerical goes wrong at
a node, that node is re-solved from scratch before giving up.
"""

from __future__ import annotations

import dataclasses
import sys
import time
from dataclasses import replace

import numpy as np

from ..build.compile import CanonicalModel
from ..errors import NumericalBreakdown
from . import simplex as sx
from .lp import make_engine, solve_lp
from .solution import build_solution, evaluate_form, Solution, SolveOptions

RESTART_EVERY = 1000


class _Node:
    __slots__ = ("fixings", "bound", "seq")

    def __init__(self, fixings: dict[int, float], bound: float, seq: int):
        self.fixings = fixings
        self.bound = bound
        self.seq = seq


class _Tree:
    def __init__(self, cm: CanonicalModel, opts: SolveOptions,
                 deadline: float | None):
        self.cm = cm
        self.opts = opts
        self.deadline = deadline
        self.maximize = cm.sense == "maximize"
        self.binaries = [v.id for v in cm.variables if v.type == "binary"]
        self.engine = make_engine(cm, opts, None)
        self.current: dict[int, float] = {}
        self.incumbent_x = None
        self.incumbent_obj = None
        self.nodes = 0

    # -- objective helpers -------------------------------------------------

    def model_objective(self, x) -> float:
        values = {v.id: float(x[v.id]) for v in self.cm.variables}
        return evaluate_form(self.cm.objective, values)

    def improves(self, candidate: float) -> bool:
        if self.incumbent_obj is None:
            return True
        if self.maximize:
            return candidate > self.incumbent_obj
        return candidate < self.incumbent_obj

    def prunable(self, bound: float) -> bool:
        if self.incumbent_obj is None:
            return False
        gap = self.opts.relative_gap_tol
        inc = self.incumbent_obj
        if self.maximize:
            return bound <= inc + gap * abs(inc)
        return bound >= inc - gap * abs(inc)

    # -- node evaluation ---------------------------------------------------

    def _transition(self, fixings: dict[int, float]):
        engine = self.engine
        for var_id in list(self.current):
            if var_id not in fixings:
                engine.set_bounds(var_id, 0.0, 1.0)
                del self.current[var_id]
        for var_id, value in fixings.items():
            if self.current.get(var_id) != value:
                engine.set_bounds(var_id, value, value)
                self.current[var_id] = value

    def _fresh_engine(self, fixings: dict[int, float]):
        # Cold restart for one node: rebuild with the fixings baked into
        # the variable bounds so phase-1 setup sees a consistent problem.
        variables = [
            replace(v, lb=fixings[v.id], ub=fixings[v.id])
            if v.id in fixings else v
            for v in self.cm.variables
        ]
        pinned = dataclasses.replace(self.cm, variables=variables)
        engine = make_engine(pinned, self.opts, self.engine.deadline)
        status = engine.two_phase()
        self.engine = engine
        self.current = dict(fixings)
        return status

    def solve_node(self, fixings: dict[int, float]) -> str:
        try:
            self._transition(fixings)
            status = self.engine.dual_restore(
                max_iter=50_000 + 10 * (self.engine.m + self.engine.n))
            if status == sx.INFEASIBLE:
                return sx.INFEASIBLE
            return self.engine.primal()
        except NumericalBreakdown:
            return self._fresh_engine(fixings)

    def fractional(self, x) -> list[tuple[float, int]]:
        tol = self.opts.integrality_tol
        out = []
        for var_id in self.binaries:
            value = x[var_id]
            frac = value - round(value)
            if abs(frac) > tol:
                out.append((abs(value - np.floor(value) - 0.5), var_id))
        return out

    def accept_incumbent(self, x):
        snapped = np.array(x, dtype=float)
        for var_id in self.binaries:
            snapped[var_id] = float(round(snapped[var_id]))
        objective = self.model_objective(snapped)
        if self.improves(objective):
            self.incumbent_x = snapped
            self.incumbent_obj = objective
            if self.deadline is not None:
                self.engine.deadline = self.deadline


def solve_mip(cm: CanonicalModel, opts: SolveOptions | None = None) -> Solution:
    """Depth-first branch and bound with LP-relaxation bounds. Returns
    optimal when the tree is exhausted within the relative gap, feasible
    with the incumbent on time limit, infeasible when no node admits an
    LP-feasible point."""
    opts = opts or SolveOptions()
    if not any(v.type == "binary" for v in cm.variables):
        return solve_lp(cm, opts)
    if cm.infeasible_rows:
        return Solution("infeasible", None)
    deadline = None if opts.time_limit is None \
        else time.monotonic() + opts.time_limit
    tree = _Tree(cm, opts, deadline)

    root_status = tree.engine.two_phase()
    if root_status == sx.INFEASIBLE:
        return Solution("infeasible", None, iterations=tree.engine.iterations)
    if root_status == sx.UNBOUNDED:
        return Solution("unbounded", None, iterations=tree.engine.iterations)
    if root_status != sx.OPTIMAL:
        return Solution("error", None, iterations=tree.engine.iterations)

    x = tree.engine.solution_vector()
    root_bound = tree.model_objective(x)
    stack = [_Node({}, root_bound, 0)]
    seq = 1
    status = "optimal"

    while stack:
        if tree.nodes and tree.nodes % RESTART_EVERY == 0:
            # Best-first restart: jump to the open node with the best bound.
            if tree.maximize:
                best = max(range(len(stack)), key=lambda i: stack[i].bound)
            else:
                best = min(range(len(stack)), key=lambda i: stack[i].bound)
            stack.append(stack.pop(best))
        node = stack.pop()
        if tree.prunable(node.bound):
            continue
        if deadline is not None and tree.incumbent_obj is not None \
                and time.monotonic() > deadline:
            status = "feasible"
            break
        tree.nodes += 1
        try:
            node_status = tree.solve_node(node.fixings)
        except sx.TimeLimit:
            status = "feasible" if tree.incumbent_obj is not None else "error"
            break
        if node_status == sx.INFEASIBLE:
            continue
        if node_status != sx.OPTIMAL:
            if tree.incumbent_obj is not None:
                status = "feasible"
                break
            return Solution("error", None, nodes=tree.nodes,
                            iterations=tree.engine.iterations)
        x = tree.engine.solution_vector()
        bound = tree.model_objective(x)
        if tree.prunable(bound):
            continue
        fractionals = tree.fractional(x)
        if not fractionals:
            tree.accept_incumbent(x)
            continue
        _, branch_var = min(fractionals)
        value = x[branch_var]
        prefer = 1.0 if value >= 0.5 else 0.0
        for child_value in (1.0 - prefer, prefer):
            fixings = dict(node.fixings)
            fixings[branch_var] = child_value
            stack.append(_Node(fixings, bound, seq))
            seq += 1

    if tree.incumbent_obj is None:
        if status == "error":
            return Solution("error", None, nodes=tree.nodes,
                            iterations=tree.engine.iterations)
        return Solution("infeasible", None, nodes=tree.nodes,
                        iterations=tree.engine.iterations)
    if opts.log:
        print(f"branch-and-bound: status={status} nodes={tree.nodes} "
              f"iterations={tree.engine.iterations}", file=sys.stderr)
    sol = build_solution(cm, status, tree.incumbent_x[:tree.engine.n_struct],
                         iterations=tree.engine.iterations, nodes=tree.nodes)
    return sol
