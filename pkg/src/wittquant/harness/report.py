"""Scenario and suite reports, serialized as JSON or markdown."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

SCHEMA_VERSION = "1.0"


@dataclass
class ScenarioReport:
    scenario: str
    params: dict[str, Any]
    verdict: str  # pass | fail | inconclusive
    cases: int
    failures: int
    witnesses: list[dict[str, Any]]
    elapsed_ms: float
    statement: str = ""
    polarity: str = "positive"
    notes: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        # insertion order is the serialized field order
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "params": self.params,
            "verdict": self.verdict,
            "cases": self.cases,
            "failures": self.failures,
            "witnesses": self.witnesses,
            "elapsed_ms": self.elapsed_ms,
            "statement": self.statement,
            "polarity": self.polarity,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ScenarioReport":
        return cls(**{k: v for k, v in d.items() if k != "schema_version"})

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


@dataclass
class SuiteReport:
    profile: str
    reports: list[ScenarioReport]
    elapsed_ms: float

    @property
    def verdict(self) -> str:
        return "pass" if all(r.passed for r in self.reports) else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "profile": self.profile,
            "verdict": self.verdict,
            "scenarios": [r.to_dict() for r in self.reports],
            "elapsed_ms": self.elapsed_ms,
        }


def _json(report) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _md_escape(text: str) -> str:
    return str(text).replace("|", "\\|").replace("\n", " ")


def _markdown(report) -> str:
    reports = report.reports if isinstance(report, SuiteReport) else [report]
    lines = []
    if isinstance(report, SuiteReport):
        lines += [f"# Suite `{report.profile}`: {report.verdict.upper()}", ""]
    else:
        lines += [f"# Scenario `{report.scenario}`: {report.verdict.upper()}", ""]
    lines += [
        "| scenario | statement verified | polarity | params | verdict | cases | failures |",
        "|---|---|---|---|---|---|---|",
    ]
    for r in reports:
        params = ", ".join(f"{k}={r.params[k]}" for k in ("p", "n", "r", "degree", "seed", "samples") if k in r.params)
        lines.append(
            f"| `{r.scenario}` | {_md_escape(r.statement)} | {r.polarity} | {params} | {r.verdict} | {r.cases} | {r.failures} |"
        )
    for r in reports:
        if not r.witnesses:
            continue
        lines += ["", f"## Witnesses for `{r.scenario}`", ""]
        for w in r.witnesses:
            lines.append(f"- **{w['role']}** via `{w['check']}`: {_md_escape(w.get('detail', ''))}")
            lines.append("")
            lines.append("```json")
            lines.append(json.dumps(w["inputs"], ensure_ascii=False))
            lines.append("```")
    lines.append("")
    return "\n".join(lines)


def emit_report(report, fmt: str = "json", out: str | Path | None = None) -> str:
    """Render ``report`` and write it to ``out`` when given (OSError if unwritable)."""
    if fmt == "json":
        text = _json(report)
    elif fmt == "markdown":
        text = _markdown(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text
