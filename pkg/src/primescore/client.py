"""Thin HTTP client for the service.

Without a base URL the client mounts the application in-process over an ASGI
transport, so no server has to be running; with one it talks to a live
server. Both paths exercise the identical routes and schemas.
"""

from __future__ import annotations

import asyncio
from typing import Any

import httpx


class ServiceError(RuntimeError):
    """Non-success response; carries the HTTP status and detail payload."""

    def __init__(self, status_code: int, detail: Any):
        self.status_code = status_code
        self.detail = detail
        super().__init__(f"service returned {status_code}: {detail}")


class ServiceClient:
    """Synchronous client; in-process mode must not be used inside a running
    event loop (each call drives the ASGI app with its own loop)."""

    def __init__(self, base_url: str | None = None):
        self._remote: httpx.Client | None = None
        self._app = None
        if base_url is None:
            from .service.app import create_app

            self._app = create_app()
        else:
            self._remote = httpx.Client(base_url=base_url, timeout=None)

    def close(self) -> None:
        if self._remote is not None:
            self._remote.close()

    def __enter__(self) -> "ServiceClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _send(self, method: str, path: str, payload: dict | None) -> httpx.Response:
        if self._remote is not None:
            return self._remote.request(method, path, json=payload)

        async def go() -> httpx.Response:
            transport = httpx.ASGITransport(app=self._app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://primescore.local", timeout=None
            ) as client:
                return await client.request(method, path, json=payload)

        return asyncio.run(go())

    def _request(self, method: str, path: str, payload: dict | None = None) -> dict:
        try:
            resp = self._send(method, path, payload)
        except httpx.HTTPError as exc:
            raise ServiceError(0, f"transport failure: {exc}") from exc
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise ServiceError(resp.status_code, detail)
        return resp.json()

    def health(self) -> dict:
        return self._request("GET", "/health")

    def score(self, payload: dict) -> dict:
        return self._request("POST", "/score", payload)

    def filter(self, payload: dict) -> dict:
        return self._request("POST", "/filter", payload)

    def evaluate(self, payload: dict) -> dict:
        return self._request("POST", "/evaluate", payload)

    def synthesize(self, payload: dict) -> dict:
        return self._request("POST", "/synthesize", payload)

    def profile(self, payload: dict) -> dict:
        return self._request("POST", "/profile", payload)
