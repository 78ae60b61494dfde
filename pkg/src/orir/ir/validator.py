"""Semantic validation of parsed IR models.

Every violation is reported (not just the first); a model is accepted iff
the report has no errors. Data-dependent checks (set membership, set size
mismatches) happen at compile time, not here.
"""

from __future__ import annotations

from .nodes import (
    BinOp,
    Const,
    ConstraintDef,
    Expr,
    expr_has_variables,
    IndexedSum,
    IRModel,
    Issue,
    ParamRef,
    Positional,
    Symbol,
    ValidationReport,
    VarRef,
)


class _Checker:
    def __init__(self, model: IRModel):
        self.model = model
        self.errors: list[Issue] = []
        self.warnings: list[Issue] = list(model.parse_warnings)

    def error(self, code: str, path: str, message: str):
        self.errors.append(Issue(code, path, message))

    def run(self) -> ValidationReport:
        m = self.model
        if m.objective.sense != m.sense:
            self.error("sense-mismatch", "objective.sense",
                       f"objective sense {m.objective.sense!r} does not match "
                       f"top-level sense {m.sense!r}")
        for name, pdef in m.parameters.items():
            self.check_param(name, pdef)
        for name, vdef in m.variables.items():
            self.check_variable(name, vdef)
        for name, cdef in m.constraints.items():
            self.check_constraint(name, cdef)
        self.check_expr(m.objective.expression, "objective.expression", scope={})
        for i, fix in enumerate(m.variable_fixes):
            path = f"variable_fixes[{i}]"
            vdef = m.variables.get(fix.variable)
            if vdef is None:
                self.error("unknown-variable", path,
                           f"fix references unknown variable {fix.variable!r}")
            elif len(fix.key) != len(vdef.domain):
                self.error("arity", path,
                           f"fix key arity {len(fix.key)} does not match "
                           f"variable domain arity {len(vdef.domain)}")
        return ValidationReport(tuple(self.errors), tuple(self.warnings))

    def check_domain_sets(self, domain, path: str) -> bool:
        ok = True
        for set_name in domain:
            if set_name not in self.model.sets:
                self.error("unknown-set", path,
                           f"references unknown set {set_name!r}")
                ok = False
        return ok

    def check_param(self, name: str, pdef):
        path = f"parameters.{name}"
        self.check_domain_sets(pdef.domain, path + ".domain")
        if pdef.index_columns is None:
            if pdef.domain:
                self.error("index-columns", path + ".index_columns",
                           "null index_columns require an empty domain")
        else:
            if not pdef.domain:
                self.error("index-columns", path + ".index_columns",
                           "scalar parameters must have null index_columns")
            elif len(pdef.index_columns) != len(pdef.domain):
                self.error("index-columns", path + ".index_columns",
                           f"{len(pdef.index_columns)} index columns for "
                           f"{len(pdef.domain)} domain sets")

    def check_variable(self, name: str, vdef):
        path = f"variables.{name}"
        self.check_domain_sets(vdef.domain, path + ".domain")
        lb = 0.0 if vdef.lower_bound is None else vdef.lower_bound
        if vdef.type == "binary":
            ub = 1.0 if vdef.upper_bound is None else vdef.upper_bound
            if lb < 0 or ub > 1 or lb > ub:
                self.error("binary-bounds", path,
                           f"binary bounds [{lb}, {ub}] are not within [0, 1]")
        elif vdef.upper_bound is not None and vdef.lower_bound is not None \
                and vdef.lower_bound > vdef.upper_bound:
            self.error("bounds", path,
                       f"lower bound {vdef.lower_bound} exceeds upper "
                       f"bound {vdef.upper_bound}")
        if vdef.upper_bound_set is not None:
            self.error("upper-bound-set", path + ".upper_bound_set",
                       "upper_bound_set is accepted only as null")
        if vdef.exclude_diagonal:
            if len(vdef.domain) < 2 or vdef.domain[0] != vdef.domain[1]:
                self.error("exclude-diagonal", path + ".exclude_diagonal",
                           "requires the first two domain sets to be identical")
        if vdef.domain_filter is not None:
            pdef = self.model.parameters.get(vdef.domain_filter)
            if pdef is None:
                self.error("unknown-parameter", path + ".domain_filter",
                           f"references unknown parameter {vdef.domain_filter!r}")
            elif pdef.domain != vdef.domain[: len(pdef.domain)] or not pdef.domain:
                self.error("domain-filter", path + ".domain_filter",
                           f"parameter domain {list(pdef.domain)} is not a "
                           f"prefix of variable domain {list(vdef.domain)}")

    def check_constraint(self, name: str, cdef: ConstraintDef):
        path = f"constraints.{name}"
        if not self.check_domain_sets(cdef.domain, path + ".domain"):
            return
        scope: dict[str, str] = {}
        for set_name in cdef.domain:
            symbol = self.model.sets[set_name].index_symbol
            if symbol in scope:
                self.error("symbol-collision", path + ".domain",
                           f"index symbol {symbol!r} bound twice by the "
                           "constraint domain")
            scope[symbol] = set_name
        if cdef.sparse_filter is not None:
            pdef = self.model.parameters.get(cdef.sparse_filter)
            if pdef is None:
                self.error("unknown-parameter", path + ".sparse_filter",
                           f"references unknown parameter {cdef.sparse_filter!r}")
            else:
                positions = subsequence_positions(pdef.domain, cdef.domain)
                if positions is None or not pdef.domain:
                    self.error("sparse-filter", path + ".sparse_filter",
                               f"parameter domain {list(pdef.domain)} is not a "
                               f"subsequence of constraint domain {list(cdef.domain)}")
        self.check_expr(cdef.expression, path + ".expression", scope)
        self.check_expr(cdef.rhs, path + ".rhs", scope)

    def check_expr(self, expr: Expr, path: str, scope: dict[str, str]):
        if isinstance(expr, Const):
            return
        if isinstance(expr, IndexedSum):
            inner = dict(scope)
            for set_name in expr.over:
                sdef = self.model.sets.get(set_name)
                if sdef is None:
                    self.error("unknown-set", path + ".over",
                               f"sums over unknown set {set_name!r}")
                    continue
                if sdef.index_symbol in inner:
                    self.error("symbol-collision", path + ".over",
                               f"index symbol {sdef.index_symbol!r} is already "
                               "bound in scope")
                inner[sdef.index_symbol] = set_name
            self.check_expr(expr.body, path + ".body", inner)
            return
        if isinstance(expr, BinOp):
            if expr.op == "multiply":
                if expr_has_variables(expr.left) and expr_has_variables(expr.right):
                    self.error("nonlinear", path,
                               "multiply has variables on both sides")
            self.check_expr(expr.left, path + ".left", scope)
            self.check_expr(expr.right, path + ".right", scope)
            return
        # VarRef / ParamRef
        if isinstance(expr, VarRef):
            target = self.model.variables.get(expr.name)
            kind = "variable"
        else:
            target = self.model.parameters.get(expr.name)
            kind = "parameter"
        if target is None:
            self.error(f"unknown-{kind}", path,
                       f"references unknown {kind} {expr.name!r}")
            return
        if len(expr.indices) != len(target.domain):
            self.error("arity", path,
                       f"{kind} {expr.name!r} has arity {len(target.domain)} "
                       f"but is indexed with {len(expr.indices)} tokens")
            return
        for pos, token in enumerate(expr.indices):
            tpath = f"{path}.indices[{pos}]"
            domain_set = target.domain[pos]
            if isinstance(token, Symbol):
                bound_set = scope.get(token.name)
                if bound_set is None:
                    self.error("unbound-symbol", tpath,
                               f"symbol {token.name!r} is not bound by the "
                               "constraint domain or an enclosing sum")
                elif bound_set != domain_set:
                    self.error("index-set-mismatch", tpath,
                               f"symbol {token.name!r} is bound to set "
                               f"{bound_set!r} but position {pos} of "
                               f"{expr.name!r} expects {domain_set!r}")
            else:
                assert isinstance(token, Positional)
                sdef = self.model.sets.get(token.set_name)
                if sdef is None:
                    self.error("unknown-set", tpath,
                               f"positional token names unknown set "
                               f"{token.set_name!r}")
                elif not sdef.ordered:
                    self.error("positional-unordered", tpath,
                               f"positional token on unordered set "
                               f"{token.set_name!r}")
                if token.set_name != domain_set:
                    self.error("index-set-mismatch", tpath,
                               f"positional token names set {token.set_name!r} "
                               f"but position {pos} expects {domain_set!r}")
        if isinstance(expr, VarRef) and expr.lag is not None:
            if expr.lag >= 0:
                self.error("lag", path, f"lag must be negative, got {expr.lag}")
            ordered = [s for s in target.domain
                       if s in self.model.sets and self.model.sets[s].ordered]
            if len(ordered) == 0:
                self.error("lag", path,
                           f"lag on {expr.name!r} requires an ordered set in "
                           "its domain")
            elif len(ordered) > 1:
                self.error("lag", path,
                           f"lag on {expr.name!r} is ambiguous: domain has "
                           f"{len(ordered)} ordered sets")


def subsequence_positions(needle, haystack) -> tuple[int, ...] | None:
    """Greedy leftmost match of needle inside haystack; returns the matched
    positions or None."""
    positions = []
    start = 0
    for item in needle:
        try:
            idx = haystack.index(item, start)
        except ValueError:
            return None
        positions.append(idx)
        start = idx + 1
    return tuple(positions)


def validate_ir(model: IRModel) -> ValidationReport:
    """Check every reference, arity, binding, and structural-linearity rule;
    the report lists all violations."""
    return _Checker(model).run()


def require_valid(model: IRModel) -> ValidationReport:
    """Validate and raise if the model is rejected."""
    report = validate_ir(model)
    if not report.ok:
        from ..errors import ValidationFailed
        raise ValidationFailed(report)
    return report
