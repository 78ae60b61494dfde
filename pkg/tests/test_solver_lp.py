import numpy as np
import pytest

from orir.build.compile import CanonicalModel
from orir.expand.constraints import Row
from orir.expand.instances import VarInstance
from orir.expand.linearize import LinearForm
from orir.solver import solve_lp, SolveOptions
from orir.solver import kernels as K
from orir.solver.lp import make_engine

from oracles import enumerate_vertices

INF = float("inf")


def make_cm(sense, bounds, objective, rows, types=None):
    """bounds: list of (lb, ub); rows: list of (terms dict, sense, rhs)."""
    types = types or ["continuous"] * len(bounds)
    variables = [VarInstance(i, f"v{i}", (str(i),), types[i], lb, ub)
                 for i, (lb, ub) in enumerate(bounds)]
    cm_rows = [Row(f"r{i}", f"r{i}", dict(terms), rsense, float(rhs))
               for i, (terms, rsense, rhs) in enumerate(rows)]
    return CanonicalModel(
        sense=sense, variables=variables,
        var_index={v.group: {v.key: v.id} for v in variables},
        objective=LinearForm(dict(objective), 0.0), rows=cm_rows,
        group_dims={v.group: ["k"] for v in variables},
        family_counts={r.family: 1 for r in cm_rows},
        nonzeros=sum(len(r.terms) for r in cm_rows))


def test_simple_bounded_maximization():
    cm = make_cm("maximize", [(0.0, INF)], {0: 7.0},
                 [({0: 1.0}, "<=", 1.0)])
    sol = solve_lp(cm)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(7.0, abs=1e-9)
    assert sol.values[0] == pytest.approx(1.0, abs=1e-9)


def test_unbounded_detection():
    cm = make_cm("maximize", [(0.0, INF)], {0: 1.0}, [])
    assert solve_lp(cm).status == "unbounded"


def test_infeasible_detection():
    cm = make_cm("maximize", [(0.0, 1.0)], {0: 1.0},
                 [({0: 1.0}, ">=", 2.0)])
    assert solve_lp(cm).status == "infeasible"


def test_equality_rows_and_negative_costs():
    cm = make_cm("minimize", [(0.0, 10.0), (0.0, 10.0)], {0: 1.0, 1: 2.0},
                 [({0: 1.0, 1: 1.0}, "=", 4.0)])
    sol = solve_lp(cm)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(4.0, abs=1e-8)
    assert sol.values[0] == pytest.approx(4.0, abs=1e-8)


def test_rejects_binaries():
    cm = make_cm("maximize", [(0.0, 1.0)], {0: 1.0}, [], types=["binary"])
    with pytest.raises(ValueError):
        solve_lp(cm)


def test_compile_time_infeasibility_short_circuits():
    cm = make_cm("maximize", [(0.0, 1.0)], {0: 1.0}, [])
    cm.infeasible_rows.append("broken_row")
    assert solve_lp(cm).status == "infeasible"


def test_empty_model_is_constant():
    cm = CanonicalModel(sense="maximize", variables=[], var_index={},
                        objective=LinearForm({}, 12.5), rows=[],
                        group_dims={}, family_counts={}, nonzeros=0)
    sol = solve_lp(cm)
    assert sol.status == "optimal"
    assert sol.objective == 12.5


def _random_lp(rng):
    n = int(rng.integers(2, 7))
    m = int(rng.integers(1, 5))
    ub = rng.uniform(0.5, 10.0, n).round(3)
    c = rng.integers(-5, 6, n).astype(float)
    A = rng.integers(-3, 4, (m, n)).astype(float)
    senses = [("<=", ">=", "=")[int(rng.integers(0, 3))] for _ in range(m)]
    # Right-hand sides anchored near a random box point to keep a decent
    # share of the instances feasible.
    anchor = rng.uniform(0, 1, n) * ub
    b = (A @ anchor + rng.uniform(-2, 4, m)).round(3)
    sense = "maximize" if rng.integers(0, 2) else "minimize"
    return sense, c, A, senses, b, ub


def test_lp_matches_vertex_enumeration_oracle():
    """100 seeded random LPs agree with the vertex-enumeration oracle to
    1e-7 (status and objective)."""
    rng = np.random.default_rng(42)
    feasible_seen = 0
    infeasible_seen = 0
    for case in range(100):
        sense, c, A, senses, b, ub = _random_lp(rng)
        n = len(c)
        cm = make_cm(sense, [(0.0, float(u)) for u in ub],
                     {j: float(c[j]) for j in range(n) if c[j] != 0.0},
                     [({j: float(A[i, j]) for j in range(n)
                        if A[i, j] != 0.0}, senses[i], float(b[i]))
                      for i in range(len(b))
                      if any(A[i, j] != 0.0 for j in range(n))
                      or senses[i] != "<=" or b[i] < 0])
        sol = solve_lp(cm)
        oracle = enumerate_vertices(c, A, senses, b, np.zeros(n), ub,
                                    sense == "maximize")
        if oracle is None:
            assert sol.status == "infeasible", f"case {case}"
            infeasible_seen += 1
        else:
            assert sol.status == "optimal", f"case {case}: {sol.status}"
            assert sol.objective == pytest.approx(oracle[0], abs=1e-7), \
                f"case {case}"
            feasible_seen += 1
    assert feasible_seen >= 40
    assert infeasible_seen >= 5


def test_duality_spot_check():
    """On 20 random feasible LPs the phase-2 optimum is a basic solution
    and the reduced-cost signs admit no improving direction."""
    rng = np.random.default_rng(777)
    checked = 0
    while checked < 20:
        sense, c, A, senses, b, ub = _random_lp(rng)
        n = len(c)
        cm = make_cm(sense, [(0.0, float(u)) for u in ub],
                     {j: float(c[j]) for j in range(n)},
                     [({j: float(A[i, j]) for j in range(n)}, senses[i],
                       float(b[i])) for i in range(len(b))])
        opts = SolveOptions()
        engine = make_engine(cm, opts, None)
        if engine.two_phase() != "optimal":
            continue
        checked += 1
        m = engine.m
        assert int((engine.status == K.BASIC).sum()) == m
        lb_b = engine.lb[engine.basis]
        ub_b = engine.ub[engine.basis]
        assert (engine.beta >= lb_b - 1e-7).all()
        assert (engine.beta <= ub_b + 1e-7).all()
        for j in range(engine.n):
            if engine.status[j] == K.NB_LOWER:
                assert engine.d[j] >= -1e-7
            elif engine.status[j] == K.NB_UPPER:
                assert engine.d[j] <= 1e-7


def test_time_limit_statuses():
    # No equalities: phase 2 starts immediately, so an expired deadline
    # returns the current feasible point.
    cm = make_cm("maximize", [(0.0, 5.0)] * 3, {0: 1.0, 1: 1.0, 2: 1.0},
                 [({0: 1.0, 1: 1.0}, "<=", 4.0)])
    sol = solve_lp(cm, SolveOptions(time_limit=0.0))
    assert sol.status == "feasible"
    # An equality forces phase 1; the limit lands there and reports error.
    cm2 = make_cm("maximize", [(0.0, 5.0)] * 2, {0: 1.0},
                  [({0: 1.0, 1: 1.0}, "=", 4.0)])
    assert solve_lp(cm2, SolveOptions(time_limit=0.0)).status == "error"


def test_log_flag_writes_stderr(capsys):
    cm = make_cm("maximize", [(0.0, 1.0)], {0: 2.0}, [({0: 1.0}, "<=", 1.0)])
    solve_lp(cm, SolveOptions(log=True))
    assert "simplex" in capsys.readouterr().err
