"""Solution values, solve options, and solution artifacts on disk."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..build.compile import CanonicalModel
from ..build.lpwrite import format_number
from ..data.store import write_table
from ..expand.linearize import LinearForm

ZERO_WRITE_TOL = 1e-9


@dataclass
class SolveOptions:
    """time_limit is wall-clock seconds; for MIP solves it is enforced
    between nodes once an incumbent exists (the root relaxation and the
    first dive always complete so a limited run can still return a
    feasible point)."""

    time_limit: float | None = None
    feasibility_tol: float = 1e-6
    integrality_tol: float = 1e-6
    relative_gap_tol: float = 1e-6
    log: bool = False

    def __post_init__(self):
        for name in ("feasibility_tol", "integrality_tol", "relative_gap_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class SolutionGroup:
    group_name: str
    dimension_labels: list[str]
    values: dict[tuple[str, ...], float]


@dataclass
class Solution:
    status: str
    objective: float | None
    values: dict[int, float] = field(default_factory=dict)
    groups: list[SolutionGroup] = field(default_factory=list)
    iterations: int = 0
    nodes: int = 0


def evaluate_form(form: LinearForm, values) -> float:
    """Dot a linear form with a value vector in ascending variable-id
    order. Every objective the solver or a test oracle reports goes
    through here so float summation order is identical everywhere."""
    total = 0.0
    get = values.__getitem__
    for var_id in sorted(form.terms):
        total += form.terms[var_id] * get(var_id)
    return total + form.constant


def build_solution(cm: CanonicalModel, status: str, x=None,
                   iterations: int = 0, nodes: int = 0) -> Solution:
    """Assemble a Solution from a raw value vector (structural part)."""
    if x is None or status not in ("optimal", "feasible"):
        return Solution(status, None, iterations=iterations, nodes=nodes)
    values = {v.id: float(x[v.id]) for v in cm.variables}
    objective = evaluate_form(cm.objective, values) if values \
        else cm.objective.constant
    groups = []
    for group, keymap in cm.var_index.items():
        labels = cm.group_dims.get(
            group, [f"idx{i}" for i in range(
                len(next(iter(keymap), ())) if keymap else 0)])
        groups.append(SolutionGroup(
            group, list(labels),
            {key: values[var_id] for key, var_id in keymap.items()}))
    return Solution(status, objective, values, groups, iterations, nodes)


def write_solution(sol: Solution, cm: CanonicalModel,
                   directory: str | Path) -> list[Path]:
    """Write one solution_<group>.csv per variable group plus summary.json.
    Rows follow instantiation order; magnitudes below 1e-9 are written as
    0 so reruns diff cleanly."""
    if sol.status not in ("optimal", "feasible"):
        raise ValueError(f"no solution artifacts for status {sol.status!r}")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    nonzero_counts = {}
    for group, keymap in cm.var_index.items():
        labels = cm.group_dims.get(group) or []
        path = directory / f"solution_{group}.csv"
        nonzeros = 0
        rows = []
        for key, var_id in keymap.items():
            value = sol.values.get(var_id, 0.0)
            if abs(value) < ZERO_WRITE_TOL:
                value = 0.0
            else:
                nonzeros += 1
            rows.append(list(key) + [format_number(value)])
        width = len(next(iter(keymap), ()))
        header = list(labels[:width])
        header += [f"idx{i}" for i in range(len(header), width)]
        write_table(path, header + ["value"], rows)
        nonzero_counts[group] = nonzeros
        written.append(path)
    summary = {
        "status": sol.status,
        "objective": sol.objective,
        "nonzeros_by_group": nonzero_counts,
    }
    summary_path = directory / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2) + "\n",
                            encoding="utf-8")
    written.append(summary_path)
    return written
