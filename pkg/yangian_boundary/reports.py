"""
Versioned report models shared by the command line and the HTTP surface.
"""

import json
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Optional

from pydantic import BaseModel, Field

SCHEMA = "yangian-boundary/1"


class Timing(BaseModel):
    elapsed_ms: float = 0.0


class Witness(BaseModel):
    """First nonzero residual entry, 1-based indices."""

    row: int
    col: int
    value: str


class _Report(BaseModel):
    schema_version: str = Field(SCHEMA, alias="schema")
    timing: Timing = Field(default_factory=Timing)

    class Config:
        allow_population_by_field_name = True

    def to_json(self, stable: bool = False, indent: Optional[int] = None) -> str:
        """JSON with sorted keys; stable=True drops timing so identical inputs give identical bytes."""
        exclude = {"timing"} if stable else None
        return self.json(by_alias=True, exclude=exclude, sort_keys=True, indent=indent)

    def to_dict(self) -> Dict[str, Any]:
        return json.loads(self.to_json())


class CheckReport(_Report):
    identity: str
    algebra: str
    passed: bool
    witness: Optional[Witness] = None
    details: Dict[str, Any] = Field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


class ResultReport(_Report):
    kind: str
    algebra: Optional[str] = None
    passed: bool = True
    payload: Dict[str, Any] = Field(default_factory=dict)


class SuiteReport(_Report):
    kind: str = "selftest"
    passed: bool
    checks: List[CheckReport] = Field(default_factory=list)


@contextmanager
def timed(report_timing: Timing) -> Iterator[Timing]:
    start = time.perf_counter()
    try:
        yield report_timing
    finally:
        report_timing.elapsed_ms = round((time.perf_counter() - start) * 1000.0, 3)
