"""Acceptance suite.

Each test implements one acceptance criterion at its stated tolerance and
prints one PASS/FAIL line (run with -s to see them live). Budgets are
asserted, not just reported.
"""

import contextlib
import json
import resource
import time

import numpy as np
import pytest

from orir.build import (
    compile_model,
    lp_network_formulas,
    mip_network_formulas,
    model_stats,
)
from orir.cli import main as cli_main
from orir.ir import parse_ir, validate_ir
from orir.solver import check_solution, solve, solve_lp, solve_mip
from orir.whatif import DataPatch, run_scenario, StructPatch

from conftest import FIXTURE_NAMES, fixture_model, load_instance, store_from, \
    fixture_text
from oracles import enumerate_vertices


@contextlib.contextmanager
def criterion(name: str, budget_seconds: float | None = None):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name} ({time.perf_counter() - start:.2f}s)",
              flush=True)
        raise
    elapsed = time.perf_counter() - start
    if budget_seconds is not None:
        assert elapsed < budget_seconds, \
            f"{name}: {elapsed:.2f}s exceeds {budget_seconds}s budget"
    print(f"[PASS] {name} ({elapsed:.2f}s)", flush=True)


def test_criterion_fixture_validation():
    """The three committed IR fixtures parse and validate with zero
    errors in under a second."""
    with criterion("fixture-validation", budget_seconds=1.0):
        for name in FIXTURE_NAMES:
            model = parse_ir(fixture_text(name))
            report = validate_ir(model)
            assert report.errors == (), f"{name}: {report.errors}"


def test_criterion_table1_arithmetic():
    """Closed-form counts at the flagship network scale match the
    published size table exactly."""
    with criterion("table1-arithmetic", budget_seconds=1.0):
        counts = lp_network_formulas(50, 50, 500, 500, 12, 404, 1065)
        assert counts["production_variables"] == 300_000
        assert counts["shipment_variables"] == 8_814_000
        assert counts["inventory_variables"] == 600_000
        assert counts["total_variables"] == 9_714_000
        assert counts["inventory_balance_constraints"] == 600_000
        assert counts["capacity_constraints"] == 2_400


def test_criterion_mip_variable_counts(desk_mip_dir):
    """Compiling the MIP fixture against a generated desk instance yields
    exactly (|I|+|J|)*|T| binaries; the closed form reproduces the
    published continuous/binary variable counts. The published constraint
    total is a documented discrepancy and is excluded."""
    with criterion("mip-variable-counts"):
        model, store, labels = load_instance(desk_mip_dir)
        stats = model_stats(compile_model(model, store, labels))
        assert stats.binary == (4 + 4) * 6
        closed = mip_network_formulas(25, 25, 250, 500, 12, 109, 299)
        assert closed["continuous_variables"] == 2_898_000
        assert closed["binary_variables"] == 600


def test_criterion_assignment_pair_count(tmp_path):
    """Flagship-scale assignment generation emits exactly 400 * 3200 cost
    rows; the compile runs in lp-only mode within 10 minutes and 8 GB."""
    with criterion("assignment-pair-count", budget_seconds=600.0):
        from orir.gen import AssignmentConfig, gen_assignment
        out = tmp_path / "flagship"
        gen_assignment(AssignmentConfig(seed=42, carriers=400,
                                        shipments=3200), out)
        with open(out / "data" / "cost.csv") as fh:
            rows = sum(1 for _ in fh) - 1
        assert rows == 1_280_000
        rc = cli_main(["solve", str(out / "ir.json"), str(out / "data"),
                       "-o", str(tmp_path / "run"), "--lp-only"])
        assert rc == 0
        stats = json.loads((tmp_path / "run" / "stats.json").read_text())
        assert stats["variables"]["binary"] == 1_280_000
        assert stats["constraints"]["total"] == 3_600
        peak_gb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1e6
        assert peak_gb < 8.0, f"peak RSS {peak_gb:.2f} GB"


def test_criterion_solver_oracle_equivalence():
    """50 seeded assignment MIPs match exhaustive enumeration exactly and
    100 seeded LPs match vertex enumeration to 1e-7, within 60 s."""
    from test_solver_lp import _random_lp, make_cm
    from test_solver_mip import compile_assignment, exact_oracle_value
    from orir.gen import AssignmentConfig

    with criterion("solver-oracle-equivalence", budget_seconds=60.0):
        rng = np.random.default_rng(4242)
        for _ in range(50):
            cfg = AssignmentConfig(seed=int(rng.integers(1, 100_000)),
                                   carriers=int(rng.integers(1, 4)),
                                   shipments=int(rng.integers(1, 9)))
            inst, cm = compile_assignment(cfg)
            sol = solve_mip(cm)
            assert sol.status == "optimal"
            oracle_value, _ = exact_oracle_value(inst, cm)
            assert sol.objective == oracle_value

        rng = np.random.default_rng(42)
        for _ in range(100):
            sense, c, A, senses, b, ub = _random_lp(rng)
            n = len(c)
            cm = make_cm(sense, [(0.0, float(u)) for u in ub],
                         {j: float(c[j]) for j in range(n)},
                         [({j: float(A[i, j]) for j in range(n)}, senses[i],
                           float(b[i])) for i in range(len(b))])
            sol = solve_lp(cm)
            oracle = enumerate_vertices(c, A, senses, b, np.zeros(n), ub,
                                        sense == "maximize")
            if oracle is None:
                assert sol.status == "infeasible"
            else:
                assert sol.status == "optimal"
                assert abs(sol.objective - oracle[0]) <= 1e-7 * max(
                    1.0, abs(oracle[0]))


def test_criterion_desk_end_to_end(tmp_path):
    """gen -> compile -> solve -> check for all three families at desk
    scale: all optimal, every constraint within 1e-6, equalities included,
    within 2 minutes."""
    from orir.gen import (AssignmentConfig, gen_assignment, gen_lp_network,
                          gen_mip_network, LpNetworkConfig, MipNetworkConfig)
    with criterion("desk-end-to-end", budget_seconds=120.0):
        gen_lp_network(LpNetworkConfig(
            seed=42, sites=4, dcs=4, customers=20, products=10, periods=12,
            ps_fanout=2, dc_fanout=5, clusters=5), tmp_path / "lp")
        gen_mip_network(MipNetworkConfig(
            seed=42, sites=4, dcs=4, customers=10, products=10, periods=6,
            ps_fanout=2, dc_fanout=5, clusters=5), tmp_path / "mip")
        gen_assignment(AssignmentConfig(seed=7, carriers=3, shipments=8),
                       tmp_path / "assignment")
        equality_families = {
            "lp": ("demand_satisfaction", "inventory_balance_site",
                   "inventory_balance_site_init", "inventory_balance_dc",
                   "inventory_balance_dc_init"),
            "mip": ("demand_satisfaction", "inv_balance_site_follow",
                    "inv_balance_site_follow_init", "inv_balance_dc_follow",
                    "inv_balance_dc_follow_init"),
            "assignment": (),
        }
        for family in ("lp", "mip", "assignment"):
            model, store, labels = load_instance(tmp_path / family)
            cm = compile_model(model, store, labels)
            sol = solve(cm)
            assert sol.status == "optimal", f"{family}: {sol.status}"
            report = check_solution(cm, sol.values, tol=1e-6)
            assert report.max_violation <= 1e-6, family
            for eq_family in equality_families[family]:
                assert report.max_violation_by_family[eq_family] <= 1e-6


@pytest.mark.parametrize("family", ["lp", "mip", "assignment"])
def test_criterion_determinism(family, tmp_path, desk_lp_dir, desk_mip_dir,
                               desk_assignment_dir):
    """Two cmd_solve runs on identical inputs produce byte-identical
    model.lp, summary.json, and solution CSVs."""
    instance = {"lp": desk_lp_dir, "mip": desk_mip_dir,
                "assignment": desk_assignment_dir}[family]
    with criterion(f"determinism-{family}"):
        outs = []
        for run in ("one", "two"):
            out = tmp_path / run
            rc = cli_main(["solve", str(instance / "ir.json"),
                           str(instance / "data"), "-o", str(out)])
            assert rc == 0
            outs.append(out)
        names = sorted(p.name for p in outs[0].iterdir())
        assert names == sorted(p.name for p in outs[1].iterdir())
        for name in names:
            assert (outs[0] / name).read_bytes() == \
                (outs[1] / name).read_bytes(), name


def test_criterion_whatif_properties():
    """Added-constraint monotonicity, empty-patch zero diff, and exact
    revenue doubling on the costless fixture, within 30 s."""
    import dataclasses
    from orir.gen import AssignmentConfig
    from orir.gen.assignment import assignment_tables
    from orir.ir.nodes import Const
    from test_solver_mip import compile_assignment, exact_oracle_value

    with criterion("whatif-properties", budget_seconds=30.0):
        cfg = AssignmentConfig(seed=31, carriers=2, shipments=5,
                               overrides={"handling_fee_low": 0.0,
                                          "handling_fee_high": 0.0,
                                          "cost_rate_low": 0.0,
                                          "cost_rate_high": 0.0})
        inst, cm = compile_assignment(cfg)
        tables = assignment_tables(inst)
        csv_tables = {
            name: "\n".join([",".join(h)] + [",".join(r) for r in rows]) + "\n"
            for name, (h, rows) in tables.items()}
        model = fixture_model("freight_assignment")
        store = store_from(csv_tables)
        base = solve(compile_model(model, store))
        assert base.status == "optimal" and base.objective > 0

        # Empty patch list: zero diff.
        diff = run_scenario(model, store, [])
        assert diff.base_objective == diff.new_objective
        assert diff.changed_variables == 0

        # Added <= constraint on a maximization model shrinks the optimum.
        tighter = dataclasses.replace(
            model.constraints["assignment_limit"], rhs=Const(0.0))
        diff = run_scenario(model, store, [StructPatch(
            action="add_constraint", name="nothing_moves",
            definition=tighter)])
        assert diff.new_objective <= diff.base_objective \
            + 1e-9 * abs(diff.base_objective)

        # Revenue doubling on the costless (all-profitable) fixture,
        # verified against the brute-force oracle on the patched model.
        diff = run_scenario(model, store,
                            [DataPatch("revenue", "all", (), "scale", 2.0)])
        assert diff.new_objective == pytest.approx(2.0 * base.objective,
                                                   rel=1e-9)
        from orir.whatif import apply_data_patch
        patched_store = apply_data_patch(
            store, model, DataPatch("revenue", "all", (), "scale", 2.0))
        oracle_value, _ = exact_oracle_value(
            inst, compile_model(model, patched_store))
        assert diff.new_objective == oracle_value


def test_criterion_statistical_sanity():
    """Full-scale objective values are not reproducible (no RNG spec in
    the source material); the substitute checks are the property suites
    plus these revenue-distribution statistics at flagship scale."""
    from orir.gen import LpNetworkConfig
    from orir.gen.lp_network import draw_revenue

    with criterion("statistical-sanity"):
        revenue = draw_revenue(LpNetworkConfig(seed=42))
        median = float(np.median(revenue))
        cv = float(np.std(revenue) / np.mean(revenue))
        assert abs(median - np.exp(3.9)) <= 0.10 * np.exp(3.9)
        assert abs(cv - 0.66) <= 0.15 * 0.66
