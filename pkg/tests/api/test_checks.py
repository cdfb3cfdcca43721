from fastapi.testclient import TestClient

from qcoord.core.config import settings
from qcoord.schemas.reports import CheckCase, CheckReport


def test_check_central_success(client: TestClient):
    response = client.get(f"{settings.API_V1_STR}/checks/central", params={"n": 2})

    assert response.status_code == 200
    json_response = response.json()
    assert json_response["check"] == "central"
    assert json_response["schema"] == 1
    assert len(json_response["cases"]) == 4
    assert all(case["pass"] for case in json_response["cases"])


def test_check_failure_is_reported(client: TestClient, mocker):
    failing = CheckReport(
        check="central", n=2, cases=[CheckCase(input="[D, t[1,1]]", residual="t[1,1]", passed=False)]
    )
    mocker.patch("qcoord.services.computations.check_central", return_value=failing)

    response = client.get(f"{settings.API_V1_STR}/checks/central")

    assert response.status_code == 200
    assert response.json()["cases"][0]["pass"] is False


def test_check_unknown_name(client: TestClient):
    response = client.get(f"{settings.API_V1_STR}/checks/frobnicate")

    assert response.status_code == 422


def test_check_unsupported_variant(client: TestClient):
    response = client.get(
        f"{settings.API_V1_STR}/checks/frobenius", params={"variant": "sl", "ell": 3}
    )

    assert response.status_code == 400


def test_check_rate_limit(client: TestClient, mocker):
    mocker.patch(
        "qcoord.services.computations.check_central",
        return_value=CheckReport(check="central", n=2),
    )

    for _ in range(10):
        assert client.get(f"{settings.API_V1_STR}/checks/central").status_code == 200
    response = client.get(f"{settings.API_V1_STR}/checks/central")

    assert response.status_code == 429
    assert response.json()["detail"] == "Rate limit exceeded. Try again later."


def test_request_id_is_echoed(client: TestClient):
    response = client.get("/", headers={"X-Request-ID": "abc-123"})

    assert response.headers["X-Request-ID"] == "abc-123"
    assert "X-Process-Time" in response.headers
