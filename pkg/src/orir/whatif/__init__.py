from .patches import (
    apply_data_patch,
    apply_struct_patch,
    DataPatch,
    parse_patch,
    parse_patches,
    Patch,
    StructPatch,
)
from .scenario import (
    apply_patches,
    diff_solutions,
    run_scenario,
    ScenarioDiff,
    ScenarioError,
    VariableDelta,
)

__all__ = [
    "apply_data_patch", "apply_struct_patch", "DataPatch", "parse_patch",
    "parse_patches", "Patch", "StructPatch", "apply_patches",
    "diff_solutions", "run_scenario", "ScenarioDiff", "ScenarioError",
    "VariableDelta",
]
