"""Expand constraint definitions into flat rows.

Each row keeps its family (the constraint name) so statistics and the
solution checker can aggregate per family. Expansion is a generator so
full-scale compiles can stream rows without retaining them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ..errors import InfRhsError, LagUnderflow
from ..ir.nodes import ConstraintDef, Issue
from ..ir.validator import subsequence_positions
from .linearize import ExpandEnv, _accumulate, _isfinite


@dataclass
class Row:
    name: str
    family: str
    terms: dict[int, float]
    sense: str  # "<=" | "=" | ">="
    rhs: float


@dataclass
class ExpandResult:
    """Carries per-constraint side findings: rows are yielded separately."""

    emitted: int = 0
    skipped_vacuous: int = 0
    skipped_filtered: int = 0
    skipped_lag: int = 0
    dropped_trivial: int = 0
    infeasible: list[str] = None

    def __post_init__(self):
        if self.infeasible is None:
            self.infeasible = []


def _trivial_row_is_infeasible(sense: str, rhs: float) -> bool:
    if sense == "<=":
        return rhs < 0.0
    if sense == ">=":
        return rhs > 0.0
    return rhs != 0.0


def expand_constraint(name: str, cdef: ConstraintDef, env: ExpandEnv,
                      result: ExpandResult | None = None,
                      warnings: list[Issue] | None = None):
    """Yield rows for every surviving binding of the constraint domain.

    Skip rules, in order: sparse-filter misses, vacuous +inf <= rows, and
    lag underflow (how a lagged balance pairs with its _init companion).
    Rows with no terms are dropped when trivially satisfied and recorded as
    compile-time infeasibilities otherwise.
    """
    if result is None:
        result = ExpandResult()
    filter_positions = None
    filter_entries = None
    if cdef.sparse_filter is not None:
        fparam = env.params[cdef.sparse_filter]
        filter_positions = subsequence_positions(
            env.model.parameters[cdef.sparse_filter].domain, cdef.domain)
        filter_entries = fparam.entries
        if warnings is not None and filter_positions != tuple(
                range(len(filter_positions))):
            warnings.append(Issue(
                "sparse-filter-subsequence", f"constraints.{name}",
                "sparse_filter projects a non-prefix subsequence of the "
                "constraint domain"))
    symbols = [env.model.sets[s].index_symbol for s in cdef.domain]
    element_lists = [env.sets[s].elements for s in cdef.domain]

    for combo in itertools.product(*element_lists):
        if filter_entries is not None:
            fkey = tuple(combo[p] for p in filter_positions)
            if fkey not in filter_entries:
                result.skipped_filtered += 1
                continue
        binding = dict(zip(symbols, combo))
        try:
            rhs_terms: dict[int, float] = {}
            rhs_const = _accumulate(cdef.rhs, dict(binding), env, 1.0, rhs_terms)
            if rhs_const == math.inf and not rhs_terms:
                if cdef.sense == "<=":
                    result.skipped_vacuous += 1
                    continue
                raise InfRhsError(
                    f"constraint {name!r} at {combo!r}: infinite right-hand "
                    f"side on a {cdef.sense!r} row")
            lhs_terms: dict[int, float] = {}
            lhs_const = _accumulate(cdef.expression, dict(binding), env, 1.0,
                                    lhs_terms)
        except LagUnderflow:
            result.skipped_lag += 1
            continue
        terms = lhs_terms
        for var_id, coef in rhs_terms.items():
            terms[var_id] = terms.get(var_id, 0.0) - coef
        rhs = rhs_const - lhs_const
        if not _isfinite(rhs):
            if rhs == math.inf and cdef.sense == "<=":
                result.skipped_vacuous += 1
                continue
            raise InfRhsError(
                f"constraint {name!r} at {combo!r}: non-finite normalized "
                f"right-hand side {rhs!r}")
        terms = {k: v for k, v in terms.items() if v != 0.0}
        row_name = name + "_" + "_".join(combo) if combo else name
        if not terms:
            if _trivial_row_is_infeasible(cdef.sense, rhs):
                result.infeasible.append(row_name)
            else:
                result.dropped_trivial += 1
            continue
        result.emitted += 1
        yield Row(row_name, name, terms, cdef.sense, rhs)
