"""
Tests for the HTTP surface using FastAPI's TestClient.
"""

import logging

from dotenv import load_dotenv
from fastapi.testclient import TestClient

from yangian_boundary.api import app

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s',
    handlers=[
        logging.StreamHandler()
    ]
)
logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()

client = TestClient(app)


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy"}


def test_verify_ybe():
    response = client.post("/verify/ybe", json={"algebra": "so:3"})
    logger.info(f"ybe response: {response.status_code}")
    assert response.status_code == 200
    body = response.json()
    assert body["passed"] is True
    assert body["schema"] == "yangian-boundary/1"


def test_verify_ybe_mutated():
    body = client.post("/verify/ybe", json={"algebra": "so:3", "mutate": True}).json()
    assert body["passed"] is False
    assert body["witness"] is not None


def test_verify_crossing():
    response = client.post("/verify/crossing", json={"algebra": "sp:2"})
    assert response.status_code == 200
    assert response.json()["passed"] is True


def test_verify_reflection_and_dual():
    body = client.post("/verify/reflection", json={"algebra": "so:4", "boundary": "D1:c=1/2"}).json()
    assert body["passed"] is True
    dual = {"algebra": "so:3", "boundary": '{"family": "I", "normalization": "physical"}', "dual": True}
    body = client.post("/verify/reflection", json=dual).json()
    assert body["identity"] == "dual-reflection"


def test_bad_algebra_is_400():
    response = client.post("/verify/ybe", json={"algebra": "gl:3"})
    logger.info(f"bad algebra: {response.json()}")
    assert response.status_code == 400


def test_inadmissible_family_is_400():
    response = client.post("/verify/reflection", json={"algebra": "so:5", "boundary": "D1:c=1/2"})
    assert response.status_code == 400


def test_invalid_body_is_422():
    response = client.post("/spectrum", json={"algebra": "so:3", "sites": 0})
    assert response.status_code == 422


def test_classify():
    body = client.post("/classify", json={"algebra": "so:4"}).json()
    assert body["kind"] == "classify-diagonal"
    assert "D1" in body["payload"]["families"]


def test_spectrum():
    body = client.post("/spectrum", json={"algebra": "so:3", "sites": 1, "lambdas": ["0.3+0.1i"]}).json()
    assert body["payload"]["dimension"] == 3
    assert body["passed"] is True


def test_bethe_vacuum():
    body = client.post("/bethe/solve", json={"algebra": "so:5", "sites": 2}).json()
    assert body["passed"] is True
    assert len(body["payload"]["states"]) == 1


def test_thermo_kernels():
    body = client.post("/thermo/kernels", json={"algebra": "so:5", "omega": 0.0}).json()
    assert body["payload"]["kernel"] == [[2.0, -2.0], [-2.0, 4.0]]


def test_scatter_bulk():
    body = client.post("/scatter/bulk", json={"series": "so", "n": 6, "lam": 0.4}).json()
    assert body["passed"] is True


def test_scatter_boundary_cross_check():
    request = {"series": "so", "n": 6, "family": "D1", "xi": {"xi": 1.5}, "lam": 0.4, "cross_check": True}
    body = client.post("/scatter/boundary", json=request).json()
    logger.info(f"cross check: {body['payload']['cross_check']}")
    assert body["passed"] is True
