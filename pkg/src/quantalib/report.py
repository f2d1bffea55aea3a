"""Structured predicate/verification reports consumed by the CLI.

Every failing report carries a machine-checkable counterexample that can be
replayed through the library API.  Serialization is deterministic; timings
are kept out of the default output so reports stay byte-identical across
runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Report:
    subject: str
    name: str
    verdict: str  # "pass" | "fail" | "unknown"
    witness: object = None
    counterexample: object = None
    elapsed: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def to_json(self, with_timing: bool = False) -> dict:
        out = {"subject": self.subject, "name": self.name, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if with_timing:
            out["elapsed_s"] = round(self.elapsed, 3)
        return out

    def to_text(self, with_timing: bool = False) -> str:
        mark = {"pass": "PASS", "fail": "FAIL", "unknown": "????"}[self.verdict]
        line = f"[{mark}] {self.subject}: {self.name}"
        if self.counterexample is not None:
            line += f"  counterexample={json.dumps(self.counterexample, sort_keys=True)}"
        elif self.witness is not None:
            line += f"  witness={json.dumps(self.witness, sort_keys=True)}"
        if with_timing:
            line += f"  ({self.elapsed:.3f}s)"
        return line


def from_predicate(subject: str, name: str, holds: bool, detail=None) -> Report:
    """Wrap a (bool, detail) predicate result; detail is a counterexample on
    failure and a witness on success."""
    if holds:
        return Report(subject, name, "pass", witness=detail)
    return Report(subject, name, "fail", counterexample=detail)


def render(reports: list[Report], fmt: str = "text", with_timing: bool = False) -> str:
    reports = sorted(reports, key=lambda r: (r.subject, r.name))
    if fmt == "json":
        return json.dumps([r.to_json(with_timing) for r in reports],
                          sort_keys=True, indent=2)
    return "\n".join(r.to_text(with_timing) for r in reports)
