"""Check entries and verification reports.

Every verification step in the package produces :class:`CheckEntry` values;
the pipeline collects them into a :class:`VerificationReport` that serializes
to canonical JSON (sorted keys, fixed float formatting via ``repr``) so that
identical runs produce byte-identical output.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

TOOL_VERSION = "0.1.0"

PASS = "pass"
FAIL = "fail"
FLAGGED = "flagged"
SKIPPED = "skipped"

_STATUSES = (PASS, FAIL, FLAGGED, SKIPPED)

# Claim label for checks that audit the artifact's own plumbing rather than
# a mathematical statement.
PLUMBING = "plumbing"


def jsonify(value):
    """Recursively coerce payload values to plain JSON types.

    numpy scalars and arrays sneak into payloads from the numeric layers;
    non-finite floats become strings so canonical serialization never fails.
    """
    if isinstance(value, dict):
        return {str(k): jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonify(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonify(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    return value


@dataclass
class CheckEntry:
    """One verification item: an id, what was checked, and the numbers."""

    id: str
    description: str
    claim: str  # the mathematical claim being audited, or "plumbing"
    status: str
    payload: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status not in _STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        self.payload = jsonify(self.payload)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "claim": self.claim,
            "status": self.status,
            "payload": self.payload,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckEntry":
        return cls(
            id=d["id"],
            description=d["description"],
            claim=d["claim"],
            status=d["status"],
            payload=d["payload"],
        )


def entry(
    id: str,
    description: str,
    claim: str,
    ok: bool,
    payload: dict | None = None,
    *,
    flag: bool = False,
) -> CheckEntry:
    """Build a pass/fail entry; ``flag=True`` downgrades a failure to flagged.

    Flagged is reserved for findings about the audited construction itself
    (degeneracies, errata) as opposed to violations of the artifact's own
    invariants.
    """
    if ok:
        status = PASS
    else:
        status = FLAGGED if flag else FAIL
    return CheckEntry(id, description, claim, status, payload or {})


def skipped(id: str, description: str, claim: str, reason: str) -> CheckEntry:
    return CheckEntry(id, description, claim, SKIPPED, {"reason": reason})


@dataclass
class VerificationReport:
    """Ordered collection of check entries plus the configuration echo."""

    version: str
    config: dict
    entries: list[CheckEntry] = field(default_factory=list)

    def extend(self, entries: list[CheckEntry]) -> None:
        self.entries.extend(entries)

    def add(self, e: CheckEntry) -> None:
        self.entries.append(e)

    @property
    def summary(self) -> dict:
        counts = {s: 0 for s in _STATUSES}
        for e in self.entries:
            counts[e.status] += 1
        counts["total"] = len(self.entries)
        return counts

    @property
    def has_failures(self) -> bool:
        return any(e.status == FAIL for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "entries": [e.to_dict() for e in self.entries],
            "summary": self.summary,
        }

    def to_json(self) -> str:
        """Canonical JSON: sorted keys, two-space indent, trailing newline."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        d = json.loads(text)
        report = cls(version=d["version"], config=d["config"])
        report.extend([CheckEntry.from_dict(e) for e in d["entries"]])
        return report

    def to_markdown(self) -> str:
        """Human-readable rendering; the JSON form is normative."""
        lines = [
            "# Verification report",
            "",
            f"version: {self.version}",
            "",
            "## Configuration",
            "",
        ]
        for k in sorted(self.config):
            lines.append(f"- `{k}` = `{self.config[k]}`")
        lines += ["", "## Checks", ""]
        lines.append("| status | id | description |")
        lines.append("|--------|----|-------------|")
        for e in self.entries:
            lines.append(f"| {e.status} | `{e.id}` | {e.description} |")
        s = self.summary
        lines += [
            "",
            "## Summary",
            "",
            f"{s['total']} checks: {s[PASS]} pass, {s[FAIL]} fail, "
            f"{s[FLAGGED]} flagged, {s[SKIPPED]} skipped.",
            "",
        ]
        return "\n".join(lines)
