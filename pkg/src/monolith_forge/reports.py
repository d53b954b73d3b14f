"""Structured check reports.

Every verification routine produces a CheckReport; CLI runs bundle them
into a RunReport.  Serialization is plain JSON with stable key order so
that identical runs (same seed, same flags) emit byte-identical
documents apart from the timestamp.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
UNSTABLE = "unstable"
INFO = "info"


@dataclass
class CheckReport:
    name: str
    status: str
    parameters: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    dimensions: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status in (PASS, INFO)

    def to_dict(self) -> dict:
        return {
            "check_name": self.name,
            "status": self.status,
            "parameters": self.parameters,
            "witnesses": self.witnesses,
            "dimensions": self.dimensions,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        return cls(
            name=d["check_name"],
            status=d["status"],
            parameters=d.get("parameters", {}),
            witnesses=d.get("witnesses", []),
            dimensions=d.get("dimensions", []),
            notes=d.get("notes", []),
        )


def overall_status(checks) -> str:
    statuses = {c.status for c in checks}
    if UNSTABLE in statuses:
        return UNSTABLE
    if FAIL in statuses:
        return FAIL
    return PASS


@dataclass
class RunReport:
    tool_version: str
    configuration: dict
    checks: list
    timestamp: str = ""

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())

    @property
    def overall(self) -> str:
        return overall_status(self.checks)

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "configuration": self.configuration,
            "overall": self.overall,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        d = json.loads(text)
        return cls(
            tool_version=d["tool_version"],
            configuration=d["configuration"],
            checks=[CheckReport.from_dict(c) for c in d["checks"]],
            timestamp=d["timestamp"],
        )

    def to_text(self) -> str:
        lines = [
            f"monolith-forge {self.tool_version}",
            f"configuration: {json.dumps(self.configuration)}",
            "",
        ]
        for c in self.checks:
            lines.append(f"[{c.status.upper():8s}] {c.name}")
            for note in c.notes:
                lines.append(f"           - {note}")
            if c.dimensions:
                lines.append(f"           dims: {c.dimensions}")
            for w in c.witnesses:
                lines.append(f"           witness: {w}")
        lines += ["", f"overall: {self.overall}"]
        return "\n".join(lines)
