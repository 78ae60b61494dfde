"""HTTP scenario service for interactive what-if exploration.

One base instance per process: the model is compiled and solved at
startup, scenarios are applied against immutable base state, and each
scenario's diff and solution live in a registry until deleted. Responses
are deterministic for a given sequence of requests.
"""

from __future__ import annotations

import itertools
import json
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from .build.compile import compile_model
from .build.stats import model_stats
from .data.materialize import table_stem
from .data.store import load_tables
from .errors import OrirError, SchemaError, TokenError, ValidationFailed
from .ir.parser import parse_ir
from .solver import solve, SolveOptions
from .whatif.patches import parse_patch
from .whatif.scenario import apply_patches, diff_solutions, ScenarioError

PAGE_SIZE = 100


class ScenarioRegistry:
    def __init__(self):
        self._lock = threading.Lock()
        self._entries: dict[str, dict] = {}
        self._counter = itertools.count(1)

    def reserve(self, requested: str | None) -> str:
        with self._lock:
            if requested is not None:
                if requested in self._entries:
                    raise KeyError(requested)
                self._entries[requested] = {}
                return requested
            while True:
                candidate = f"s{next(self._counter)}"
                if candidate not in self._entries:
                    self._entries[candidate] = {}
                    return candidate

    def put(self, scenario_id: str, entry: dict):
        with self._lock:
            self._entries[scenario_id] = entry

    def get(self, scenario_id: str) -> dict | None:
        with self._lock:
            entry = self._entries.get(scenario_id)
            return entry if entry else None

    def delete(self, scenario_id: str) -> bool:
        with self._lock:
            return self._entries.pop(scenario_id, None) is not None

    def discard(self, scenario_id: str):
        with self._lock:
            self._entries.pop(scenario_id, None)


def _solution_payload(solution, scenario_id=None):
    groups = [
        {
            "group": g.group_name,
            "dimension_labels": g.dimension_labels,
            "values": [[list(key), value] for key, value in g.values.items()],
        }
        for g in solution.groups
    ]
    payload = {
        "status": solution.status,
        "objective": solution.objective,
        "groups": groups,
    }
    if scenario_id is not None:
        payload["id"] = scenario_id
    return payload


def create_app(ir_path: str, data_dir: str, labels_path: str | None = None,
               opts: SolveOptions | None = None,
               max_workers: int = 4) -> FastAPI:
    """Compile and solve the base instance, then serve it."""
    ir_path = Path(ir_path)
    model = parse_ir(ir_path.read_text(encoding="utf-8"))
    labels = None
    labels_file = (Path(labels_path) if labels_path
                   else ir_path.parent / "dim_labels.json")
    if labels_file.exists():
        labels = json.loads(labels_file.read_text(encoding="utf-8"))
    store = load_tables(data_dir)
    opts = opts or SolveOptions()
    base_cm = compile_model(model, store, labels)
    base_solution = solve(base_cm, opts)
    base_stats = model_stats(base_cm)
    registry = ScenarioRegistry()
    workers = threading.Semaphore(max_workers)

    sets_sizes = {}
    for name, sdef in model.sets.items():
        rows = store.table(table_stem(sdef.source)) or []
        if sdef.filter_column is None:
            sets_sizes[name] = len(rows)
        else:
            sets_sizes[name] = sum(
                1 for r in rows if r[sdef.filter_column] == sdef.filter_value)

    app = FastAPI(title="orir scenario service")

    @app.get("/model")
    def get_model():
        parameters = []
        for name, pdef in model.parameters.items():
            rows = store.table(table_stem(pdef.source))
            parameters.append({
                "name": name,
                "domain": list(pdef.domain),
                "source": pdef.source,
                "rows": 0 if rows is None else len(rows),
                "missing_default": pdef.missing_default,
                "page_size": PAGE_SIZE,
            })
        constraints = [
            {"name": name, "sense": cdef.sense, "domain": list(cdef.domain)}
            for name, cdef in model.constraints.items()
        ]
        return {
            "problem_class": model.problem_class,
            "model_type": model.model_type,
            "sense": model.sense,
            "stats": base_stats.to_dict(),
            "sets": sets_sizes,
            "parameters": parameters,
            "constraints": constraints,
        }

    @app.get("/solution")
    def get_solution():
        return _solution_payload(base_solution)

    @app.get("/model/param/{name}")
    def get_param(name: str, page: int = 1, page_size: int = PAGE_SIZE):
        pdef = model.parameters.get(name)
        if pdef is None:
            return JSONResponse({"error": f"unknown parameter {name!r}"},
                                status_code=404)
        rows = store.table(table_stem(pdef.source)) or []
        page_size = max(1, min(page_size, 1000))
        total_pages = max(1, -(-len(rows) // page_size))
        page = max(1, page)
        start = (page - 1) * page_size
        return {
            "name": name,
            "page": page,
            "page_size": page_size,
            "total_rows": len(rows),
            "total_pages": total_pages,
            "rows": rows[start:start + page_size],
        }

    @app.post("/scenario")
    async def post_scenario(request: Request):
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return JSONResponse({"error": f"malformed JSON: {exc}"},
                                status_code=400)
        if not isinstance(body, dict) or not isinstance(
                body.get("patches"), list):
            return JSONResponse(
                {"error": "body must be {patches: [...], id?: str}"},
                status_code=400)
        try:
            patches = [parse_patch(raw, i)
                       for i, raw in enumerate(body["patches"])]
        except (SchemaError, TokenError) as exc:
            return JSONResponse({"error": f"malformed patch: {exc}"},
                                status_code=400)
        requested = body.get("id")
        if requested is not None and not isinstance(requested, str):
            return JSONResponse({"error": "id must be a string"},
                                status_code=400)
        try:
            scenario_id = registry.reserve(requested)
        except KeyError:
            return JSONResponse(
                {"error": f"scenario id {requested!r} already exists"},
                status_code=409)

        def compute():
            with workers:
                patched_model, patched_store = apply_patches(
                    model, store, patches)
                cm = compile_model(patched_model, patched_store, labels)
                return solve(cm, opts)

        try:
            solution = await run_in_threadpool(compute)
            diff = diff_solutions(base_solution, solution)
        except ScenarioError as exc:
            registry.discard(scenario_id)
            detail = {"error": str(exc), "patch_index": exc.patch_index}
            if isinstance(exc.cause, ValidationFailed):
                detail["report"] = exc.cause.report.to_dict()
            return JSONResponse(detail, status_code=422)
        except OrirError as exc:
            registry.discard(scenario_id)
            return JSONResponse({"error": str(exc)}, status_code=422)
        entry = {"diff": diff.to_dict(), "solution": solution,
                 "patches": body["patches"]}
        registry.put(scenario_id, entry)
        return {"id": scenario_id, "diff": entry["diff"]}

    @app.get("/scenario/{scenario_id}")
    def get_scenario(scenario_id: str):
        entry = registry.get(scenario_id)
        if entry is None:
            return JSONResponse({"error": "unknown scenario"},
                                status_code=404)
        return {"id": scenario_id, "diff": entry["diff"],
                "patches": entry["patches"]}

    @app.get("/scenario/{scenario_id}/solution")
    def get_scenario_solution(scenario_id: str):
        entry = registry.get(scenario_id)
        if entry is None:
            return JSONResponse({"error": "unknown scenario"},
                                status_code=404)
        return _solution_payload(entry["solution"], scenario_id)

    @app.delete("/scenario/{scenario_id}")
    def delete_scenario(scenario_id: str):
        if not registry.delete(scenario_id):
            return JSONResponse({"error": "unknown scenario"},
                                status_code=404)
        return JSONResponse({"deleted": scenario_id}, status_code=200)

    return app
