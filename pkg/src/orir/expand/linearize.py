"""Flatten IR expression trees into linear forms under an index binding.

The rules that make sparse models work:

* a VarRef whose instance was filtered out contributes nothing, and the
  term is dropped before any parameter on the other side of a multiply is
  looked up (so an infinite default cost never meets a missing variable);
* an infinite parameter default multiplying an instantiated variable is a
  CoefficientError;
* infinities arising in pure-constant context propagate so the constraint
  expander can decide (a +inf right-hand side on a <= row is vacuous);
* a lagged reference that falls off the front of its ordered set raises
  LagUnderflow, which the expander turns into "no row for this binding".
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from ..errors import (
    CoefficientError,
    EmptyOrderedSet,
    NonlinearError,
    LagUnderflow,
    UnboundSymbol,
)
from ..data.materialize import ParamInstance, SetInstance, lookup
from ..ir.nodes import (
    BinOp,
    Const,
    Expr,
    IndexedSum,
    IRModel,
    ParamRef,
    Positional,
    Symbol,
    VarRef,
    walk_expr,
)

_isfinite = math.isfinite


@dataclass
class LinearForm:
    """terms: variable id -> coefficient (no zero entries); constant may be
    infinite only in pure-constant contexts."""

    terms: dict[int, float] = field(default_factory=dict)
    constant: float = 0.0


class ExpandEnv:
    """Immutable expansion context shared by all constraints."""

    def __init__(self, model: IRModel, sets: dict[str, SetInstance],
                 params: dict[str, ParamInstance],
                 var_index: dict[str, dict[tuple[str, ...], int]]):
        self.model = model
        self.sets = sets
        self.params = params
        self.var_index = var_index
        # Position of the unique ordered set in each variable's domain,
        # used to apply lags; None when the domain has no ordered set.
        self.ordered_pos: dict[str, int | None] = {}
        for name, vdef in model.variables.items():
            pos = [i for i, s in enumerate(vdef.domain) if sets[s].ordered]
            self.ordered_pos[name] = pos[0] if len(pos) == 1 else None
        self._bearing: dict[int, bool] = {}

    def bears_variables(self, expr: Expr) -> bool:
        cached = self._bearing.get(id(expr))
        if cached is None:
            cached = any(isinstance(n, VarRef) for n in walk_expr(expr))
            self._bearing[id(expr)] = cached
        return cached


def resolve_index(token, binding: dict[str, str],
                  sets: dict[str, SetInstance]) -> str:
    """Resolve one index token to a set element."""
    if isinstance(token, Symbol):
        try:
            return binding[token.name]
        except KeyError:
            raise UnboundSymbol(f"symbol {token.name!r} is not bound") from None
    assert isinstance(token, Positional)
    sinst = sets[token.set_name]
    if not sinst.elements:
        raise EmptyOrderedSet(f"positional index on empty set {token.set_name!r}")
    return sinst.elements[token.offset]


def _resolve_var_key(node: VarRef, binding, env: ExpandEnv) -> tuple[str, ...]:
    key = [resolve_index(tok, binding, env.sets) for tok in node.indices]
    if node.lag is not None:
        pos = env.ordered_pos[node.name]
        if pos is None:
            raise LagUnderflow(f"lag on {node.name!r} without a unique "
                               "ordered domain set")
        vdef = env.model.variables[node.name]
        sinst = env.sets[vdef.domain[pos]]
        shifted = sinst.position[key[pos]] + node.lag
        if shifted < 0:
            raise LagUnderflow(
                f"{node.name!r} lag {node.lag} falls before the first "
                f"element of {sinst.name!r}")
        key[pos] = sinst.elements[shifted]
    return tuple(key)


def _param_value(node: ParamRef, binding, env: ExpandEnv) -> float:
    key = tuple(resolve_index(tok, binding, env.sets) for tok in node.indices)
    return lookup(env.params[node.name], key).value


def _scaled(scale: float, value: float) -> float:
    out = scale * value
    if math.isnan(out):
        raise CoefficientError(
            f"explicit product of {scale!r} and {value!r} is undefined")
    return out


def eval_constant(expr: Expr, binding, env: ExpandEnv) -> float:
    """Numerically evaluate a variable-free expression; infinite parameter
    defaults propagate."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, ParamRef):
        return _param_value(expr, binding, env)
    if isinstance(expr, BinOp):
        left = eval_constant(expr.left, binding, env)
        right = eval_constant(expr.right, binding, env)
        if expr.op == "sum":
            out = left + right
        elif expr.op == "subtract":
            out = left - right
        else:
            out = _scaled(left, right)
        if math.isnan(out):
            raise CoefficientError(
                f"undefined constant arithmetic: {left!r} {expr.op} {right!r}")
        return out
    if isinstance(expr, IndexedSum):
        return _sum_over(expr, binding, env,
                         lambda b: eval_constant(expr.body, b, env))
    raise NonlinearError("variable reference in a constant-only context")


def _sum_over(node: IndexedSum, binding, env: ExpandEnv, body_fn) -> float:
    symbols = [env.model.sets[s].index_symbol for s in node.over]
    element_lists = [env.sets[s].elements for s in node.over]
    total = 0.0
    for combo in itertools.product(*element_lists):
        for sym, el in zip(symbols, combo):
            binding[sym] = el
        total += body_fn(binding)
    for sym in symbols:
        del binding[sym]
    return total


def _accumulate(expr: Expr, binding, env: ExpandEnv, scale: float,
                terms: dict[int, float]) -> float:
    """Add scale * expr to terms; returns the accumulated constant part."""
    if isinstance(expr, VarRef):
        var_id = env.var_index[expr.name].get(_resolve_var_key(expr, binding, env))
        if var_id is None:
            return 0.0  # instance removed by a filter: the term vanishes
        terms[var_id] = terms.get(var_id, 0.0) + scale
        return 0.0
    if isinstance(expr, Const):
        return _scaled(scale, expr.value)
    if isinstance(expr, ParamRef):
        return _scaled(scale, _param_value(expr, binding, env))
    if isinstance(expr, BinOp):
        if expr.op == "sum":
            return (_accumulate(expr.left, binding, env, scale, terms)
                    + _accumulate(expr.right, binding, env, scale, terms))
        if expr.op == "subtract":
            return (_accumulate(expr.left, binding, env, scale, terms)
                    + _accumulate(expr.right, binding, env, -scale, terms))
        return _multiply(expr, binding, env, scale, terms)
    if isinstance(expr, IndexedSum):
        return _sum_over(
            expr, binding, env,
            lambda b: _accumulate(expr.body, b, env, scale, terms))
    raise NonlinearError(f"cannot linearize node {expr!r}")


def _multiply(expr: BinOp, binding, env: ExpandEnv, scale: float,
              terms: dict[int, float]) -> float:
    left_vars = env.bears_variables(expr.left)
    right_vars = env.bears_variables(expr.right)
    if left_vars and right_vars:
        raise NonlinearError("multiply carries variables on both sides")
    if not left_vars and not right_vars:
        return _scaled(scale, eval_constant(expr, binding, env))
    var_side, const_side = ((expr.left, expr.right) if left_vars
                            else (expr.right, expr.left))
    if isinstance(var_side, VarRef) and var_side.lag is None:
        # Fast path for the ubiquitous coefficient * variable shape. The
        # variable is resolved first so filtered-out instances never force
        # a lookup of the (possibly infinite-by-default) coefficient.
        var_id = env.var_index[var_side.name].get(
            _resolve_var_key(var_side, binding, env))
        if var_id is None:
            return 0.0
        coef = eval_constant(const_side, binding, env)
        if not _isfinite(coef):
            raise CoefficientError(
                f"non-finite coefficient {coef!r} on variable "
                f"{var_side.name!r}")
        terms[var_id] = terms.get(var_id, 0.0) + scale * coef
        return 0.0
    sub_terms: dict[int, float] = {}
    sub_const = _accumulate(var_side, binding, env, 1.0, sub_terms)
    if not sub_terms and sub_const == 0.0:
        return 0.0
    coef = eval_constant(const_side, binding, env)
    if not _isfinite(coef):
        if sub_terms:
            raise CoefficientError(
                "non-finite coefficient would scale variable terms")
        return _scaled(scale, _scaled(coef, sub_const))
    for var_id, value in sub_terms.items():
        terms[var_id] = terms.get(var_id, 0.0) + scale * coef * value
    return scale * coef * sub_const


def linearize(expr: Expr, binding: dict[str, str], env: ExpandEnv) -> LinearForm:
    """Linearize an expression under a binding of index symbols to
    elements. Zero coefficients are dropped from the result."""
    terms: dict[int, float] = {}
    constant = _accumulate(expr, dict(binding), env, 1.0, terms)
    if any(v != 0.0 and not _isfinite(v) for v in terms.values()):
        raise CoefficientError("non-finite coefficient in linear form")
    return LinearForm({k: v for k, v in terms.items() if v != 0.0}, constant)
