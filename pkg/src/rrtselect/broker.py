"""HTTP broker: registry and selection endpoints for composition engines.

Endpoints:
    GET  /health               engine version probe
    GET  /services?keyword=K   keyword lookup (all services without keyword)
    POST /services             register a descriptor (persisted before replying)
    POST /selection            evaluate a tree for a task, body carries the tree

Errors use {"error": code, "detail": str}; validation failures add a
"violations" list. Selection responses reuse the CLI's report renderer
so both paths emit byte-identical documents.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from . import __version__
from .engine import NoFeasibleServiceError, evaluate, report_to_json
from .qos import ServiceDescriptor, descriptor_from_json, descriptor_to_json, validate_descriptor
from .registry import (
    Catalog,
    DuplicateIdError,
    ValidationFailedError,
    find_by_keyword,
    load_catalog,
    register_service,
    save_catalog,
)
from .rrt import RrtError, parse_rrt, validate_rrt


def _error(status: int, code: str, detail: str, violations: list[str] | None = None) -> JSONResponse:
    body: dict = {"error": code, "detail": detail}
    if violations is not None:
        body["violations"] = violations
    return JSONResponse(status_code=status, content=body)


def create_app(catalog_path: Path) -> FastAPI:
    """Build the broker app around a catalog file.

    The in-memory catalog is an immutable snapshot: selects read whatever
    snapshot is current when they start, writes are serialized behind a
    lock and persisted to disk before the response is sent.
    """
    app = FastAPI(title="rrtselect broker", version=__version__)
    app.state.catalog = load_catalog(catalog_path)
    app.state.catalog_path = Path(catalog_path)
    app.state.write_lock = threading.Lock()

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "engine_version": __version__}

    @app.get("/services")
    def list_services(keyword: str | None = None) -> dict:
        catalog: Catalog = app.state.catalog
        if keyword is None:
            services = [catalog.services[sid] for sid in sorted(catalog.services)]
        else:
            services = find_by_keyword(catalog, keyword)
        return {"services": [descriptor_to_json(d) for d in services]}

    @app.post("/services")
    async def handle_register(request: Request):
        try:
            data = json.loads(await request.body())
            descriptor = descriptor_from_json(data)
        except (ValueError, TypeError) as exc:
            return _error(422, "validation_failed", str(exc))
        with app.state.write_lock:
            catalog: Catalog = app.state.catalog
            try:
                updated = register_service(catalog, descriptor)
            except DuplicateIdError as exc:
                return _error(409, "duplicate_id", str(exc))
            except ValidationFailedError as exc:
                return _error(422, "validation_failed", str(exc), violations=exc.violations)
            save_catalog(updated, app.state.catalog_path)
            app.state.catalog = updated
        return JSONResponse(status_code=201, content=descriptor_to_json(descriptor))

    @app.post("/selection")
    async def handle_select(request: Request):
        try:
            data = json.loads(await request.body())
        except ValueError as exc:
            return _error(400, "malformed_request", f"invalid JSON: {exc}")
        if not isinstance(data, dict):
            return _error(400, "malformed_request", "request body must be a JSON object")
        unknown = sorted(set(data) - {"task", "rrt", "services"})
        if unknown:
            return _error(400, "malformed_request", f"unknown request field: {unknown[0]}")
        task = data.get("task")
        if not isinstance(task, str) or not task:
            return _error(400, "malformed_request", "task must be a non-empty string")
        if "rrt" not in data:
            return _error(400, "malformed_request", "rrt document is missing")

        try:
            tree = parse_rrt(json.dumps(data["rrt"]))
        except RrtError as exc:
            return _error(422, "invalid_rrt", str(exc))
        violations = validate_rrt(tree)
        if violations:
            return _error(422, "invalid_rrt", "; ".join(violations), violations=violations)

        if "services" in data:
            candidates = _parse_inline_services(data["services"], task)
            if isinstance(candidates, JSONResponse):
                return candidates
        else:
            candidates = find_by_keyword(app.state.catalog, task)

        try:
            report = evaluate(tree, candidates, task)
        except NoFeasibleServiceError as exc:
            return _error(404, "no_feasible_service", str(exc))
        return Response(content=report_to_json(report), media_type="application/json")

    return app


def _parse_inline_services(data: object, task: str) -> list[ServiceDescriptor] | JSONResponse:
    """Parse a request-supplied candidate list, filtered like the registry lookup."""
    if not isinstance(data, list):
        return _error(400, "malformed_request", "services must be a list")
    needle = task.casefold()
    out: list[ServiceDescriptor] = []
    seen: set[str] = set()
    for entry in data:
        try:
            descriptor = descriptor_from_json(entry)
        except (ValueError, TypeError) as exc:
            return _error(400, "malformed_request", f"service entry: {exc}")
        violations = validate_descriptor(descriptor)
        if violations:
            return _error(400, "malformed_request", f"service {descriptor.id!r}: {violations[0]}")
        if descriptor.id in seen:
            return _error(400, "malformed_request", f"duplicate service id: {descriptor.id!r}")
        seen.add(descriptor.id)
        if needle in descriptor.task_keywords:
            out.append(descriptor)
    return sorted(out, key=lambda d: d.id)
