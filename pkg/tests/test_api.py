"""Tests for the HTTP API."""

import inspect

from fastapi.routing import APIRoute
from fastapi.testclient import TestClient

from app.main import app
from tests import golden

client = TestClient(app)


def _labels(labels) -> str:
    return "".join(f"{v} = {label.value}\n" for v, label in sorted(labels.items()))


class TestHealth:
    def test_health(self):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok", "service": "circuit-interlace"}


class TestRouting:
    def test_api_handlers_are_synchronous(self):
        routes = [r for r in app.routes if isinstance(r, APIRoute) and r.path.startswith("/api")]
        assert len(routes) == 5
        for route in routes:
            assert not inspect.iscoroutinefunction(route.endpoint), route.path


class TestEuler:
    def test_edge_list(self):
        response = client.post("/api/euler", json={"graph": "edge v v\nedge v v\n"})
        assert response.status_code == 200
        assert response.json()["dow"].startswith("dow C: v")

    def test_malformed(self):
        response = client.post("/api/euler", json={"graph": "nonsense\n"})
        assert response.status_code == 422


class TestMatrix:
    def test_standard_form(self):
        response = client.post(
            "/api/matrix",
            json={
                "euler": golden.EIGHT,
                "partition": _labels(golden.EIGHT_LABELS),
                "kind": "standard",
            },
        )
        assert response.status_code == 200
        body = response.json()
        assert body["rows"] == list("abcdefgh")
        assert body["entries"] == [list(row) for row in golden.EIGHT_STANDARD]

    def test_interlacement_needs_no_partition(self):
        response = client.post("/api/matrix", json={"euler": golden.LOOP, "kind": "interlacement"})
        assert response.status_code == 200
        assert response.json()["entries"] == [[0]]

    def test_partition_required(self):
        response = client.post("/api/matrix", json={"euler": golden.LOOP, "kind": "standard"})
        assert response.status_code == 422

    def test_unknown_kind(self):
        response = client.post("/api/matrix", json={"euler": golden.LOOP, "kind": "eigen"})
        assert response.status_code == 422


class TestVerify:
    def test_main(self):
        response = client.post(
            "/api/verify",
            json={"euler": golden.DOUBLED_TRIANGLE, "partition": "a = psi\nb = psi\nc = psi\n"},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["passed"] is True
        assert body["figures"]["nullity"] == 2

    def test_unknown_check(self):
        response = client.post(
            "/api/verify", json={"euler": golden.LOOP, "partition": "v = phi\n", "check": "magic"}
        )
        assert response.status_code == 422

    def test_detzero_rejects_psi(self):
        response = client.post(
            "/api/verify",
            json={"euler": golden.LOOP, "partition": "v = psi\n", "check": "detzero"},
        )
        assert response.status_code == 422


class TestCountAndTransform:
    def test_count(self):
        response = client.post("/api/count", json={"euler": golden.DOUBLED_TRIANGLE})
        assert response.status_code == 200
        body = response.json()
        assert body["det"] == body["brute"]

    def test_kappa(self):
        response = client.post("/api/transform", json={"euler": golden.K5, "kappa": "a"})
        assert response.status_code == 200
        assert len(response.json()["results"]) == 2

    def test_transpose_not_interlaced(self):
        response = client.post("/api/transform", json={"euler": golden.K5, "transpose": ["a", "e"]})
        assert response.status_code == 422

    def test_exactly_one_move(self):
        response = client.post("/api/transform", json={"euler": golden.K5})
        assert response.status_code == 422
