"""Clients presenting one uniform surface over both access modes.

Attacks are written against this surface only: ``sample``, ``metrics``,
``stats`` and the (read-only) ``schema``. Whether the provider sits in
the same process or behind HTTP must be observationally equivalent.
"""
from __future__ import annotations

import httpx

from ..tabular.schema import Column, Dataset, from_records
from .core import MetricsResponse, Provider
from .service import schema_from_payload, schema_payload


class InProcessClient:
    def __init__(self, provider: Provider):
        self._provider = provider

    @property
    def schema(self) -> tuple[Column, ...]:
        return self._provider.schema

    def sample(self, n: int, seed: int | None = None) -> Dataset:
        return self._provider.sample(n, seed)

    def metrics(self, synth: Dataset) -> MetricsResponse:
        return self._provider.metrics(synth)

    def stats(self) -> dict[str, int]:
        return self._provider.stats()


class HttpClient:
    """Talks the /v1 wire protocol; raises on any non-2xx response.

    The record schema rides along with every sample response; it is cached
    after the first call so metrics submissions can be validated locally
    before they are sent.
    """

    def __init__(self, base_url: str, http: httpx.Client | None = None):
        self._http = http or httpx.Client(base_url=base_url, timeout=120.0)
        self._schema: tuple[Column, ...] | None = None

    @property
    def schema(self) -> tuple[Column, ...]:
        if self._schema is None:
            raise RuntimeError("schema unknown until the first sample call")
        return self._schema

    def sample(self, n: int, seed: int | None = None) -> Dataset:
        r = self._http.post("/v1/sample", json={"n": n, "seed": seed})
        r.raise_for_status()
        body = r.json()
        self._schema = schema_from_payload(body["schema"])
        return from_records(self._schema, [tuple(rec) for rec in body["records"]])

    def metrics(self, synth: Dataset) -> MetricsResponse:
        r = self._http.post("/v1/metrics", json={"records": synth.records()})
        r.raise_for_status()
        body = r.json()
        return MetricsResponse(flags=body["flags"], scores=body["scores"])

    def stats(self) -> dict[str, int]:
        r = self._http.get("/v1/stats")
        r.raise_for_status()
        return r.json()

    def close(self):
        self._http.close()
