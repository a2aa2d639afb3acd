"""
Tests for settings, run options, logging setup and report serialization.
"""

import json
import logging
import os

import pytest
from dotenv import load_dotenv
from pydantic import ValidationError

from yangian_boundary.config import RunConfig, Settings, load_settings
from yangian_boundary.logging_config import configure_logging
from yangian_boundary.reports import SCHEMA, CheckReport, ResultReport, SuiteReport, Timing, Witness, timed

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


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("YANGIAN_THREADS", "4")
    monkeypatch.setenv("YANGIAN_BAE_TOL", "1e-9")
    monkeypatch.setenv("YANGIAN_MEM_BUDGET_MB", "64")
    loaded = load_settings()
    logger.info(f"Loaded settings: {loaded}")
    assert loaded.threads == 4
    assert loaded.bae_tol == 1e-9
    assert loaded.mem_budget_mb == 64.0


def test_settings_rejects_bad_values(monkeypatch):
    monkeypatch.setenv("YANGIAN_THREADS", "0")
    with pytest.raises(ValueError):
        load_settings()
    with pytest.raises(ValidationError):
        Settings(bae_tol=-1.0)


def test_run_config():
    run = RunConfig(command="spectrum", mem_budget_mb=2.0, threads=2)
    assert run.mem_budget_bytes == 2 * 1024 * 1024
    assert run.output == "json"
    for bad in ({"tol": 0.0}, {"threads": 0}, {"output": "xml"}, {"mem_budget_mb": -1.0}):
        with pytest.raises(ValidationError):
            RunConfig(command="verify", **bad)


def test_configure_logging_writes_file(tmp_path):
    path = configure_logging(log_dir=str(tmp_path / "logs"), level="DEBUG")
    logging.getLogger("yangian_boundary.test").info("hello from the test")
    for handler in logging.getLogger().handlers:
        handler.flush()
    assert os.path.exists(path)
    with open(path, "r", encoding="utf-8") as f:
        assert "hello from the test" in f.read()


def test_stable_json_drops_timing():
    report = CheckReport(identity="yang-baxter", algebra="so:3", passed=False,
                         witness=Witness(row=1, col=2, value="u"), timing=Timing(elapsed_ms=12.5))
    stable = json.loads(report.to_json(stable=True))
    assert "timing" not in stable
    assert stable["schema"] == SCHEMA
    assert stable["witness"] == {"row": 1, "col": 2, "value": "u"}
    assert report.status == "fail"
    assert report.to_json(stable=True) == report.copy(update={"timing": Timing(elapsed_ms=1.0)}).to_json(stable=True)


def test_suite_and_result_reports():
    check = CheckReport(identity="reflection", algebra="so:4", passed=True)
    suite = SuiteReport(passed=True, checks=[check])
    data = suite.to_dict()
    assert data["kind"] == "selftest"
    assert data["checks"][0]["schema"] == SCHEMA
    result = ResultReport(kind="spectrum", payload={"dimension": 9})
    assert result.passed is True
    assert result.to_dict()["payload"] == {"dimension": 9}


def test_timed_records_elapsed():
    timing = Timing()
    with timed(timing):
        sum(range(1000))
    assert timing.elapsed_ms >= 0.0
