"""Apply an ordered patch list, recompile, re-solve, and diff against the
base solution. Zero LLMs, zero nondeterminism: identical inputs yield
identical diffs."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..build.compile import compile_model
from ..data.store import DataStore
from ..errors import OrirError
from ..ir.nodes import IRModel
from ..solver import solve, Solution, SolveOptions
from .patches import apply_data_patch, apply_struct_patch, DataPatch, Patch

CHANGE_TOL = 1e-9
TOP_K = 10


class ScenarioError(OrirError):
    """A patch failed to apply or the patched model failed downstream."""

    def __init__(self, patch_index: int, cause: Exception):
        super().__init__(f"patch {patch_index}: {cause}")
        self.patch_index = patch_index
        self.cause = cause


@dataclass
class VariableDelta:
    group: str
    key: tuple[str, ...]
    base: float
    new: float

    @property
    def delta(self) -> float:
        return self.new - self.base

    def to_dict(self) -> dict:
        return {"group": self.group, "key": list(self.key),
                "base": self.base, "new": self.new, "delta": self.delta}


@dataclass
class ScenarioDiff:
    base_objective: float | None
    new_objective: float | None
    base_status: str
    new_status: str
    changed_variables: int
    top_deltas: list[VariableDelta] = field(default_factory=list)

    def to_dict(self) -> dict:
        delta = None
        if self.base_objective is not None and self.new_objective is not None:
            delta = self.new_objective - self.base_objective
        return {
            "base_objective": self.base_objective,
            "new_objective": self.new_objective,
            "objective_delta": delta,
            "base_status": self.base_status,
            "new_status": self.new_status,
            "changed_variables": self.changed_variables,
            "top_deltas": [d.to_dict() for d in self.top_deltas],
        }


def _by_key(solution: Solution) -> dict[tuple[str, tuple[str, ...]], float]:
    out = {}
    for group in solution.groups:
        for key, value in group.values.items():
            out[(group.group_name, key)] = value
    return out


def apply_patches(model: IRModel, store: DataStore, patches: list[Patch]):
    """Apply patches in order; failures carry the patch index."""
    for i, patch in enumerate(patches):
        try:
            if isinstance(patch, DataPatch):
                store = apply_data_patch(store, model, patch)
            else:
                model = apply_struct_patch(model, patch)
        except OrirError as exc:
            raise ScenarioError(i, exc) from exc
    return model, store


def diff_solutions(base: Solution, new: Solution, top_k: int = TOP_K) -> ScenarioDiff:
    """Compare variables by (group, key) so scenarios that change
    instantiation counts still diff; instances on one side only count as 0
    on the other."""
    base_values = _by_key(base)
    new_values = _by_key(new)
    deltas = []
    for ident in sorted(set(base_values) | set(new_values)):
        b = base_values.get(ident, 0.0)
        n = new_values.get(ident, 0.0)
        if abs(n - b) > CHANGE_TOL:
            deltas.append(VariableDelta(ident[0], ident[1], b, n))
    deltas.sort(key=lambda d: (-abs(d.delta), d.group, d.key))
    return ScenarioDiff(
        base_objective=base.objective,
        new_objective=new.objective,
        base_status=base.status,
        new_status=new.status,
        changed_variables=len(deltas),
        top_deltas=deltas[:top_k],
    )


def run_scenario(model: IRModel, store: DataStore, patches: list[Patch],
                 opts: SolveOptions | None = None,
                 dim_labels: dict[str, list[str]] | None = None,
                 base_solution: Solution | None = None) -> ScenarioDiff:
    """Solve the base (unless a cached base solution is supplied), apply
    the patches, recompile, re-solve, and diff."""
    opts = opts or SolveOptions()
    if base_solution is None:
        base_solution = solve(compile_model(model, store, dim_labels), opts)
    patched_model, patched_store = apply_patches(model, store, patches)
    try:
        new_cm = compile_model(patched_model, patched_store, dim_labels)
        new_solution = solve(new_cm, opts)
    except OrirError as exc:
        raise ScenarioError(len(patches) - 1 if patches else 0, exc) from exc
    return diff_solutions(base_solution, new_solution)
