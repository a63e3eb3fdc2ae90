#!/usr/bin/env python3
"""Record real API payloads for the frontend test suite.

Runs the JSON service in-process and the installed ``compare-kit`` console
script, and writes their verbatim responses to tests/fixtures/. The vitest
suite replays these recordings offline, so the numbers the UI tests assert
against are exactly what the engine produces.

Deterministic: the randomized scenario set is seeded, and envelope fields
that vary per request (request_id, elapsed_ms) are normalized.
"""

from __future__ import annotations

import json
import pathlib
import subprocess
import sys

import numpy as np
from fastapi.testclient import TestClient

from compare_kit.service import create_app

HERE = pathlib.Path(__file__).resolve().parent
FRONTEND = HERE.parent
REPO = FRONTEND.parent
FIXTURES = FRONTEND / "tests" / "fixtures"

SEED = 20260815

TUXEDO = json.loads((REPO / "scenarios" / "tuxedo.json").read_text())
OASIS6 = json.loads((REPO / "scenarios" / "oasis6.json").read_text())

# Chart grids pinned in src/presets.ts; the CLI is driven with the same ones.
TUXEDO_GRID = {"rho": "0:0.72:0.048", "delta2": [0.0049, 0.0098, 0.0147]}
OASIS6_GRID = {"spearman_rho": "0:0.9:0.06", "hr2": [0.56, 0.66, 0.76]}


def normalize(envelope: dict) -> dict:
    out = dict(envelope)
    if "request_id" in out:
        out["request_id"] = "fixture"
    if "elapsed_ms" in out:
        out["elapsed_ms"] = 0
    return out


def record_post(client: TestClient, path: str, body: dict) -> dict:
    response = client.post(path, json=body)
    return {
        "request": {"method": "POST", "path": path, "body": body},
        "status": response.status_code,
        "response": normalize(response.json()),
    }


def write(name: str, payload: dict) -> None:
    target = FIXTURES / name
    target.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    print(f"wrote {target.relative_to(FRONTEND)}")


def record_cli_sweep(name: str, scenario_file: str, grids: list[str]) -> None:
    argv = ["compare-kit", "sweep", "--scenario",
            str(REPO / "scenarios" / scenario_file), "--format", "json"]
    for grid in grids:
        argv += ["--grid", grid]
    completed = subprocess.run(argv, capture_output=True, text=True, check=True)
    write(name, {"command": argv[1:], "output": json.loads(completed.stdout)})


def random_binary(rng: np.random.Generator) -> dict:
    p1 = float(rng.uniform(0.02, 0.30))
    p2 = float(rng.uniform(0.01, 0.25))
    return {
        "kind": "binary",
        "label": "randomized binary design",
        "p1": p1,
        "p2": p2,
        "delta1": float(rng.uniform(0.05, 0.5) * p1),
        "delta2": float(rng.uniform(0.0, 0.5) * p2),
        "rho": float(rng.uniform(0.0, 0.6)),
        "alpha": 0.05,
        "power": 0.8,
        "sidedness": "one",
        "variance_variant": "pooled",
    }


def random_survival(rng: np.random.Generator) -> dict:
    shapes = [0.5, 1.0, 2.0, "constant", "increasing", "decreasing"]
    return {
        "kind": "survival",
        "label": "randomized survival design",
        "p1": float(rng.uniform(0.05, 0.30)),
        "p2": float(rng.uniform(0.02, 0.20)),
        "shape1": shapes[int(rng.integers(len(shapes)))],
        "shape2": shapes[int(rng.integers(len(shapes)))],
        "hr1": float(rng.uniform(0.60, 0.95)),
        "hr2": float(rng.uniform(0.55, 1.0)),
        "spearman_rho": float(rng.uniform(0.0, 0.85)),
        "tau": 1.0,
        "eps1_terminal": bool(rng.integers(2)),
        "alpha": 0.05,
        "power": 0.8,
        "sidedness": "one",
    }


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app())

    health = client.get("/healthz")
    write("healthz.json", {
        "request": {"method": "GET", "path": "/healthz"},
        "status": health.status_code,
        "response": health.json(),
    })

    write("tuxedo-evaluate.json", record_post(client, "/v1/evaluate", TUXEDO))
    write("oasis6-evaluate.json", record_post(client, "/v1/evaluate", OASIS6))
    write("tuxedo-samplesize.json",
          record_post(client, "/v1/samplesize", TUXEDO))

    write("tuxedo-sweep.json", record_post(
        client, "/v1/sweep", {"scenario": TUXEDO, "grid": TUXEDO_GRID}))
    write("oasis6-sweep.json", record_post(
        client, "/v1/sweep", {"scenario": OASIS6, "grid": OASIS6_GRID}))

    record_cli_sweep("tuxedo-sweep-cli.json", "tuxedo.json",
                     ["rho=0:0.72:0.048", "delta2=0.0049,0.0098,0.0147"])
    record_cli_sweep("oasis6-sweep-cli.json", "oasis6.json",
                     ["spearman_rho=0:0.9:0.06", "hr2=0.56,0.66,0.76"])

    # The bounds probes the store issues for the binary preset: control-arm
    # marginals and treatment-arm marginals (p - delta), both at rho = 0.
    write("tuxedo-bounds-control.json", record_post(
        client, "/v1/association/convert",
        {"p1": TUXEDO["p1"], "p2": TUXEDO["p2"], "rho": 0}))
    write("tuxedo-bounds-treatment.json", record_post(
        client, "/v1/association/convert",
        {"p1": TUXEDO["p1"] - TUXEDO["delta1"],
         "p2": TUXEDO["p2"] - TUXEDO["delta2"], "rho": 0}))

    infeasible = dict(TUXEDO, rho=0.9)
    write("infeasible-rho.json",
          record_post(client, "/v1/evaluate", infeasible))
    bad_alpha = dict(TUXEDO, alpha=0.7)
    write("evaluate-validation-error.json",
          record_post(client, "/v1/evaluate", bad_alpha))

    write("tuxedo-simulate.json", record_post(client, "/v1/simulate", {
        "scenario": TUXEDO, "endpoint": "composite",
        "n_total": 200, "n_replications": 50, "seed": 7,
    }))

    rng = np.random.default_rng(SEED)
    records = []
    recommendations = set()
    while len(records) < 20:
        scenario = (random_binary(rng) if len(records) % 2 == 0
                    else random_survival(rng))
        record = record_post(client, "/v1/evaluate", scenario)
        if record["status"] != 200:
            continue  # infeasible draw; try again
        records.append(record)
        recommendations.add(record["response"]["result"]["recommendation"])
    if recommendations != {"composite", "relevant"}:
        raise SystemExit(
            f"randomized set covers only {recommendations}; adjust ranges")
    write("random-evaluations.json", {"seed": SEED, "records": records})
    print(f"randomized recommendations: {sorted(recommendations)}")


if __name__ == "__main__":
    sys.exit(main())
