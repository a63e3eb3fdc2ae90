"""Stateless HTTP/JSON facade over the evaluation engine.

Every POST response is an envelope ``{request_id, elapsed_ms, result}`` or
``{request_id, elapsed_ms, error}`` where ``error`` carries a code from the
closed enum (VALIDATION, INFEASIBLE_ASSOCIATION, UNDETECTABLE_EFFECT,
QUADRATURE_FAILURE, INTERNAL), a human-readable message, and — on 4xx — the
path of the offending field. Handlers hold no state beyond configuration
read at startup; identical bodies yield identical result payloads.

Environment: BIND_ADDR (host:port for the CLI ``serve`` command),
MAX_SIM_DRAWS (simulation work cap, default 10**9), CORS_ORIGIN
(comma-separated origins; middleware installed only when set), LOG_LEVEL.
"""

from __future__ import annotations

import json
import logging
import os
import time
import uuid
from importlib.metadata import version as _dist_version
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from . import engine
from .errors import CompareKitError, NumericFailure, ValidationFailure

__all__ = ["create_app", "app", "DEFAULT_MAX_SIM_DRAWS"]

DEFAULT_MAX_SIM_DRAWS = 10 ** 9

_logger = logging.getLogger("compare_kit.service")


def _require_int(payload: dict, key: str, minimum: int = 1,
                 default: int | None = None) -> int:
    if key not in payload:
        if default is not None:
            return default
        raise ValidationFailure(f"missing required field {key!r}", field=key)
    value = payload[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationFailure(
            f"{key} must be an integer, got {value!r}", field=key)
    if value < minimum:
        raise ValidationFailure(
            f"{key} must be at least {minimum}, got {value}", field=key)
    return value


def _nested_scenario(payload: dict) -> engine.Scenario:
    """Parse payload['scenario'], prefixing field paths with 'scenario.'."""
    if "scenario" not in payload:
        raise ValidationFailure("missing required field 'scenario'",
                                field="scenario")
    try:
        return engine.Scenario.from_dict(payload["scenario"])
    except CompareKitError as exc:
        exc.field = ("scenario" if exc.field is None
                     else f"scenario.{exc.field}")
        raise


def _do_evaluate(payload: dict) -> dict:
    return engine.report_to_dict(engine.evaluate(engine.Scenario.from_dict(payload)))


def _do_samplesize(payload: dict) -> dict:
    return engine.sample_size_summary(engine.Scenario.from_dict(payload))


def _do_convert(payload: dict) -> dict:
    return engine.convert_association(payload)


def _do_sweep(payload: dict) -> dict:
    scenario = _nested_scenario(payload)
    grid_spec = payload.get("grid")
    if not isinstance(grid_spec, dict) or not grid_spec:
        raise ValidationFailure(
            "grid must be a non-empty object mapping axis names to value "
            "lists or 'start:stop:step' strings", field="grid")
    axes: list[tuple[str, list]] = []
    for name, values in grid_spec.items():
        if isinstance(values, str):
            axes.append(engine.parse_grid_axis(f"{name}={values}"))
        elif isinstance(values, list) and values:
            axes.append((name, values))
        else:
            raise ValidationFailure(
                f"grid axis {name!r} must be a non-empty list or a "
                f"'start:stop:step' string", field=f"grid.{name}")
    return engine.sweep_to_dict(engine.sweep(scenario, axes))


class _WorkCapExceeded(CompareKitError):
    code = "VALIDATION"


def _make_simulate(max_draws: int) -> Callable[[dict], dict]:
    def _do_simulate(payload: dict) -> dict:
        scenario = _nested_scenario(payload)
        endpoint = payload.get("endpoint", "composite")
        if endpoint not in ("composite", "relevant"):
            raise ValidationFailure(
                f"endpoint must be 'composite' or 'relevant', got {endpoint!r}",
                field="endpoint")
        n_total = _require_int(payload, "n_total", minimum=2)
        n_replications = _require_int(payload, "n_replications", minimum=1)
        seed = _require_int(payload, "seed", minimum=0, default=0)
        if n_total * n_replications > max_draws:
            raise _WorkCapExceeded(
                f"busy: simulation work cap exceeded — n_total * "
                f"n_replications = {n_total * n_replications} > {max_draws}; "
                f"lower the request or raise MAX_SIM_DRAWS",
                field="n_replications")
        return engine.simulate(scenario, endpoint, n_total, n_replications,
                               seed)
    return _do_simulate


def _error_response(request_id: str, started: float, status: int,
                    error: dict) -> JSONResponse:
    return JSONResponse(
        {"request_id": request_id,
         "elapsed_ms": int((time.perf_counter() - started) * 1000),
         "error": error},
        status_code=status)


def _status_for(exc: CompareKitError) -> int:
    if isinstance(exc, _WorkCapExceeded):
        return 429
    if isinstance(exc, NumericFailure):
        return 500
    return 422


def create_app() -> FastAPI:
    """Build the service with configuration read from the environment."""
    level = os.environ.get("LOG_LEVEL", "").upper()
    if level:
        logging.getLogger("compare_kit").setLevel(level)
    try:
        max_draws = int(os.environ.get("MAX_SIM_DRAWS",
                                       str(DEFAULT_MAX_SIM_DRAWS)))
    except ValueError:
        raise ValidationFailure(
            f"MAX_SIM_DRAWS must be an integer, got "
            f"{os.environ.get('MAX_SIM_DRAWS')!r}")
    app = FastAPI(title="compare-kit", version=_dist_version("artifact"))
    origins = [o.strip() for o in os.environ.get("CORS_ORIGIN", "").split(",")
               if o.strip()]
    if origins:
        app.add_middleware(CORSMiddleware, allow_origins=origins,
                           allow_methods=["*"], allow_headers=["*"])

    async def dispatch(request: Request,
                       worker: Callable[[dict], dict]) -> JSONResponse:
        started = time.perf_counter()
        request_id = uuid.uuid4().hex
        raw = await request.body()
        try:
            payload = json.loads(raw)
        except json.JSONDecodeError as exc:
            return _error_response(
                request_id, started, 400,
                {"code": "VALIDATION",
                 "message": f"malformed JSON body: {exc}", "field": "body"})
        if not isinstance(payload, dict):
            return _error_response(
                request_id, started, 400,
                {"code": "VALIDATION",
                 "message": "request body must be a JSON object",
                 "field": "body"})
        try:
            result = await run_in_threadpool(worker, payload)
        except CompareKitError as exc:
            return _error_response(request_id, started, _status_for(exc),
                                   exc.to_payload())
        except Exception:
            _logger.exception("unhandled error (request_id=%s)", request_id)
            return _error_response(
                request_id, started, 500,
                {"code": "INTERNAL", "message": "internal error; see logs"})
        return JSONResponse(
            {"request_id": request_id,
             "elapsed_ms": int((time.perf_counter() - started) * 1000),
             "result": result})

    simulate_worker = _make_simulate(max_draws)

    @app.post("/v1/evaluate")
    async def evaluate(request: Request) -> JSONResponse:
        return await dispatch(request, _do_evaluate)

    @app.post("/v1/sweep")
    async def sweep(request: Request) -> JSONResponse:
        return await dispatch(request, _do_sweep)

    @app.post("/v1/samplesize")
    async def samplesize(request: Request) -> JSONResponse:
        return await dispatch(request, _do_samplesize)

    @app.post("/v1/association/convert")
    async def convert(request: Request) -> JSONResponse:
        return await dispatch(request, _do_convert)

    @app.post("/v1/simulate")
    async def simulate(request: Request) -> JSONResponse:
        return await dispatch(request, simulate_worker)

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"status": "ok", "version": _dist_version("artifact")}

    return app


app = create_app()
