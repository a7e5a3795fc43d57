import pytest
from fastapi import status
from fastapi.testclient import TestClient

from app.core.config import Settings
from app.main import get_cors_origins


class TestRootEndpoint:
    """Tests for the root endpoint."""

    def test_root_returns_api_info(self, client: TestClient):
        """Test that root endpoint names the simulator and its entry points."""
        response = client.get("/")

        assert response.status_code == status.HTTP_200_OK
        data = response.json()
        assert data["message"] == "RC Array FIR Mapping Simulator"
        assert data["docs"] == "/docs"
        assert data["health"] == "/health"
        assert data["api"] == "/api/v1"


class TestHealthEndpoint:
    """Tests for the health check endpoint."""

    def test_health_returns_status_ok(self, client: TestClient):
        """Test that health endpoint returns status ok."""
        response = client.get("/health")

        assert response.status_code == status.HTTP_200_OK
        assert response.json()["status"] == "ok"
        assert "environment" in response.json()

    def test_health_returns_default_array(self, client: TestClient):
        """Test that health endpoint reports the default array and clock."""
        data = client.get("/health").json()

        assert data["default_array"] == "8x8"
        assert data["clock_mhz"] == "100"


class TestAPIDocumentation:
    """Tests for the generated OpenAPI schema."""

    @pytest.mark.parametrize(
        "path",
        [
            "/api/v1/plans",
            "/api/v1/simulations",
            "/api/v1/simulations/stream",
            "/api/v1/verifications",
            "/api/v1/perf/tables/{table_id}",
            "/api/v1/perf/fig6",
        ],
    )
    def test_paths_are_documented(self, client: TestClient, path: str):
        """Test that each v1 route appears in the schema."""
        schema = client.get("/openapi.json").json()

        assert path in schema["paths"]

    def test_request_models_are_documented(self, client: TestClient):
        """Test that the plan and simulation request models are published."""
        components = client.get("/openapi.json").json()["components"]["schemas"]

        assert {"PlanRequest", "SimulationRequest", "VerificationRequest"} <= set(components)

    def test_swagger_ui_available(self, client: TestClient):
        """Test that Swagger UI is served."""
        response = client.get("/docs")

        assert response.status_code == status.HTTP_200_OK
        assert "text/html" in response.headers["content-type"]


class TestCORS:
    """Tests for CORS configuration."""

    def test_cors_preflight_request(self, client: TestClient):
        """Test that a preflight for the plan endpoint is answered."""
        response = client.options(
            "/api/v1/plans",
            headers={
                "Origin": "http://localhost:3000",
                "Access-Control-Request-Method": "POST",
            },
        )

        assert response.status_code == status.HTTP_200_OK
        assert response.headers["access-control-allow-origin"] == "http://localhost:3000"

    def test_unknown_origin_gets_no_header(self, client: TestClient):
        """Test that origins outside CORS_ORIGINS are not echoed."""
        response = client.get("/", headers={"Origin": "http://example.invalid"})

        assert "access-control-allow-origin" not in response.headers

    def test_origins_come_from_settings(self):
        """Test that the default origin list is parsed from the setting."""
        expected = Settings(_env_file=None).CORS_ORIGINS.split(",")

        assert get_cors_origins() == expected


class TestNotFound:
    """Tests for 404 handling."""

    def test_unknown_api_version_returns_404(self, client: TestClient):
        """Test that unknown API version returns 404."""
        response = client.post("/api/v2/plans", json={})

        assert response.status_code == status.HTTP_404_NOT_FOUND
