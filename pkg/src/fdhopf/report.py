"""Verification reports: ordered check entries with exact witnesses."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from typing import Iterable, Iterator

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
_STATUSES = (PASS, FAIL, SKIPPED)


@dataclass
class CheckResult:
    check_id: str
    status: str
    reason: str = ""
    witness: dict | None = None
    table: dict | None = None

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def to_dict(self) -> dict:
        out = {"check-id": self.check_id, "status": self.status, "reason": self.reason, "witness": self.witness}
        if self.table is not None:
            out["table"] = self.table
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "CheckResult":
        return cls(d["check-id"], d["status"], d.get("reason", ""), d.get("witness"), d.get("table"))


@dataclass
class VerificationReport:
    entries: list[CheckResult] = field(default_factory=list)
    # computed values (dimensions, traces, operators) for programmatic callers; not serialized
    data: dict = field(default_factory=dict, compare=False, repr=False)

    def add(self, check_id: str, ok: bool, reason: str = "", witness: dict | None = None) -> CheckResult:
        entry = CheckResult(check_id, PASS if ok else FAIL, reason, None if ok else witness)
        self.entries.append(entry)
        return entry

    def skip(self, check_id: str, reason: str) -> CheckResult:
        entry = CheckResult(check_id, SKIPPED, reason)
        self.entries.append(entry)
        return entry

    def extend(self, other: "VerificationReport | Iterable[CheckResult]") -> "VerificationReport":
        if isinstance(other, VerificationReport):
            self.entries.extend(other.entries)
            self.data.update(other.data)
        else:
            self.entries.extend(other)
        return self

    def __iter__(self) -> Iterator[CheckResult]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, check_id: str) -> CheckResult:
        for e in self.entries:
            if e.check_id == check_id:
                return e
        raise KeyError(check_id)

    def status(self, check_id: str) -> str:
        return self.get(check_id).status

    @property
    def failures(self) -> list[CheckResult]:
        return [e for e in self.entries if e.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_list(self) -> list[dict]:
        return [e.to_dict() for e in self.entries]

    @classmethod
    def from_list(cls, items: list[dict]) -> "VerificationReport":
        return cls([CheckResult.from_dict(d) for d in items])

    def dumps(self) -> str:
        return json.dumps(self.to_list(), indent=2)

    def __str__(self) -> str:
        width = max((len(e.check_id) for e in self.entries), default=8)
        lines = []
        for e in self.entries:
            line = f"{e.check_id.ljust(width)}  {e.status.upper():7s} {e.reason}".rstrip()
            if e.witness:
                line += "  witness=" + json.dumps(e.witness, sort_keys=True)
            lines.append(line)
        return "\n".join(lines)
