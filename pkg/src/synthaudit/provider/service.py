"""HTTP facade over a Provider.

Wire protocol, all JSON:
  POST /v1/sample   {"n": int, "seed": int|null}  -> {"records", "schema"}
  POST /v1/metrics  {"records": [[...]]}          -> {"flags", "scores"}
  GET  /v1/stats                                  -> {"sample_calls", "metric_calls"}

Schema violations come back as 400, malformed bodies as 422 (FastAPI's
validation), an exhausted call quota as 429.
"""
from __future__ import annotations

import socket

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from ..tabular.schema import CAT, Column, SchemaError, from_records
from .core import Provider, QuotaError

Value = str | float
ServeError = HTTPException


class SampleRequest(BaseModel):
    n: int = Field(ge=0)
    seed: int | None = None


class MetricsRequest(BaseModel):
    records: list[list[Value]]


def schema_payload(schema: tuple[Column, ...]) -> list[dict]:
    out = []
    for col in schema:
        d = {"name": col.name, "kind": col.kind}
        if col.kind == CAT:
            d["support"] = list(col.support)
        else:
            d["lo"] = col.lo
            d["hi"] = col.hi
        out.append(d)
    return out


def schema_from_payload(payload: list[dict]) -> tuple[Column, ...]:
    cols = []
    for d in payload:
        if d["kind"] == CAT:
            cols.append(Column(d["name"], CAT, support=tuple(d["support"])))
        else:
            cols.append(Column(d["name"], d["kind"], lo=d["lo"], hi=d["hi"]))
    return tuple(cols)


def build_app(provider: Provider) -> FastAPI:
    app = FastAPI(title="synthaudit provider")

    @app.post("/v1/sample")
    def sample(req: SampleRequest) -> dict:
        try:
            ds = provider.sample(req.n, req.seed)
        except QuotaError as e:
            raise HTTPException(status_code=429, detail=str(e))
        return {"records": ds.records(),
                "schema": schema_payload(provider.schema)}

    @app.post("/v1/metrics")
    def metrics(req: MetricsRequest) -> dict:
        try:
            ds = from_records(provider.schema, req.records)
            resp = provider.metrics(ds)
        except SchemaError as e:
            raise HTTPException(status_code=400, detail=str(e))
        except QuotaError as e:
            raise HTTPException(status_code=429, detail=str(e))
        return resp.to_dict()

    @app.get("/v1/stats")
    def stats() -> dict:
        return provider.stats()

    return app


def serve(provider: Provider, host: str = "127.0.0.1", port: int = 0,
          log_level: str = "warning"):
    """Run the HTTP facade, blocking. Binds first and prints the port so
    port 0 (pick any free port) is usable from scripts."""
    import uvicorn

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((host, port))
    bound = sock.getsockname()[1]
    print(f"provider listening on {host}:{bound}", flush=True)
    config = uvicorn.Config(build_app(provider), log_level=log_level)
    uvicorn.Server(config).run(sockets=[sock])
