"""Check records and run reports (JSON document plus CSV tables)."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

ASSERT = "assert"
EVIDENCE = "evidence"
INFORMATIONAL = "informational"


def _clean(x):
    """JSON-safe copy: numpy scalars to floats, non-finite floats to strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


@dataclass
class Check:
    name: str
    claim: str
    value: float
    tolerance: float | None
    passed: bool
    mode: str = ASSERT
    note: str = ""

    def line(self) -> str:
        tol = "" if self.tolerance is None else f" (tol {self.tolerance:.3g})"
        if self.mode == ASSERT:
            verdict = "PASS" if self.passed else "FAIL"
        elif self.mode == EVIDENCE:
            verdict = "NONZERO" if self.passed else "ZERO"
        else:
            verdict = "INFO"
        note = f"  {self.note}" if self.note else ""
        return f"[{verdict}] {self.name}: {self.value:.6g}{tol}{note}"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "claim": self.claim,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "mode": self.mode,
            "note": self.note,
        }


@dataclass
class Report:
    command: str
    config: dict
    checks: list[Check] = field(default_factory=list)
    tables: dict[str, list[dict]] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    wall_clock: float = 0.0

    @property
    def passed(self) -> bool:
        """Conjunction of the asserted checks; evidence and informational checks never fail a run."""
        return all(c.passed for c in self.checks if c.mode == ASSERT)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def to_dict(self) -> dict:
        return _clean(
            {
                "command": self.command,
                "status": "pass" if self.passed else "fail",
                "config": self.config,
                "checks": [c.to_dict() for c in self.checks],
                "summary": self.summary,
                "tables": self.tables,
                "wall_clock_seconds": self.wall_clock,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def lines(self) -> list[str]:
        out = [c.line() for c in self.checks]
        for key in sorted(self.summary):
            value = self.summary[key]
            out.append(f"{key}: {value:.10g}" if isinstance(value, float) else f"{key}: {value}")
        out.append(f"status: {'pass' if self.passed else 'fail'}")
        return out

    def write(self, path: str | Path, table_dir: str | Path | None = None) -> list[Path]:
        """Write the JSON report and one CSV per table; returns the files written."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        written = [path]
        tdir = Path(table_dir) if table_dir is not None else path.parent
        tdir.mkdir(parents=True, exist_ok=True)
        for name, rows in self.tables.items():
            if not rows:
                continue
            target = tdir / f"{path.stem}_{name}.csv"
            with target.open("w", newline="", encoding="utf-8") as fh:
                writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
                writer.writeheader()
                for row in rows:
                    writer.writerow(_clean(row))
            written.append(target)
        return written
