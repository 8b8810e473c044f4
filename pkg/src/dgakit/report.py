"""Run reports and their serialization."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

SCHEMA_VERSION = 1
FORMATS = ("text", "json")


@dataclass
class RunReport:
    command: str
    inputs: list
    valid_through: int | None = None
    results: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    text: list = field(default_factory=list)  # human-readable lines
    timing: float | None = field(default=None, compare=False)

    def to_dict(self):
        d = asdict(self)
        d.pop("timing")
        d.pop("text")
        d["schema_version"] = SCHEMA_VERSION
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        version = d.pop("schema_version", None)
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {version}")
        return cls(**d)


def group_entry(n, factors, text, valid_through):
    return {"degree": n, "factors": list(factors), "text": text, "valid_through": valid_through}


def export(report: RunReport, fmt="text") -> bytes:
    """Deterministic serialization; json output carries ``schema_version`` and no timing."""
    if fmt == "json":
        return (json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt == "text":
        lines = list(report.text)
        if report.valid_through is not None:
            lines.append(f"valid through degree {report.valid_through}")
        for w in report.warnings:
            lines.append(f"warning: {w}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unsupported format {fmt}")


def parse_export(data: bytes) -> RunReport:
    d = json.loads(data.decode())
    d.setdefault("text", [])
    return RunReport.from_dict(d)
