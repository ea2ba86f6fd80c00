"""Check results and their text / structured renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

REPORT_VERSION = 1


@dataclass
class Check:
    name: str
    ok: bool
    details: list[str] = field(default_factory=list)
    witness: str | None = None
    time_ms: float | None = None


@dataclass
class Report:
    model: str
    kind: str
    command: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool, *details: str, witness: str | None = None) -> Check:
        c = Check(name, bool(ok), [d for d in details if d], witness)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def render_text(self, timings: bool = False) -> str:
        lines = [f"# coradical report v{REPORT_VERSION}", f"model: {self.model}", f"kind: {self.kind}", f"command: {self.command}"]
        for c in self.checks:
            t = f" ({c.time_ms:.1f} ms)" if timings and c.time_ms is not None else ""
            lines.append(f"check {c.name} {'PASS' if c.ok else 'FAIL'}{t}")
            for d in c.details:
                lines.append(f"  {d}")
            if c.witness is not None:
                lines.append(f"  witness: {c.witness}")
        npass = sum(c.ok for c in self.checks)
        lines.append(f"summary: {npass} passed, {len(self.checks) - npass} failed")
        return "\n".join(lines) + "\n"

    def to_dict(self, timings: bool = False) -> dict:
        checks = []
        for c in self.checks:
            d = {"name": c.name, "verdict": "pass" if c.ok else "fail", "details": c.details, "witness": c.witness}
            if timings:
                d["time_ms"] = c.time_ms
            checks.append(d)
        return {
            "version": REPORT_VERSION,
            "model": self.model,
            "kind": self.kind,
            "command": self.command,
            "checks": checks,
            "passed": sum(c.ok for c in self.checks),
            "failed": len(self.failed),
        }

    def render_structured(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
