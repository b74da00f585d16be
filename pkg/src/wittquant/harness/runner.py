"""run_scenario / run_suite."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable

from .config import ConfigError, ScenarioConfig
from .report import ScenarioReport, SuiteReport
from .scenarios import REGISTRY, Context, Outcome, resolve

PROFILES: dict[str, list[dict]] = {
    "quick": [
        {"scenario": "phi-ring-hom", "n": 2},
        {"scenario": "phi-central", "n": 2},
        {"scenario": "phi-compat", "n": 2},
        {"scenario": "eq1", "n": 2},
        {"scenario": "deformation-vs-std-poisson", "n": 2},
        {"scenario": "center-structure", "n": 2},
        {"scenario": "center-shrink", "n": 2},
        {"scenario": "prop-center", "n": 2},
        {"scenario": "lemma-muh", "n": 2},
        {"scenario": "cartier", "n": 2},
        {"scenario": "lemma-frob", "n": 2},
        {"scenario": "remark-counterexample", "n": 2},
        {"scenario": "theorem-flat-ideal", "n": 2},
    ],
}
PROFILES["full"] = PROFILES["quick"] + [
    {"scenario": "phi-ring-hom", "n": 3},
    {"scenario": "phi-central", "n": 3},
    {"scenario": "phi-compat", "n": 3},
    {"scenario": "eq1", "n": 3},
    {"scenario": "center-structure", "n": 3, "degree": 30},
    {"scenario": "center-shrink", "n": 3, "degree": 30},
    {"scenario": "lemma-frob", "n": 3},
    {"scenario": "phi-ring-hom", "p": 5, "n": 2},
    {"scenario": "phi-central", "p": 5, "n": 2},
    {"scenario": "phi-compat", "p": 5, "n": 3, "samples": 30, "component_degree": 1},
    {"scenario": "eq1", "p": 5, "n": 3, "samples": 20, "component_degree": 1},
    {"scenario": "deformation-vs-std-poisson", "p": 5, "n": 2},
    {"scenario": "center-structure", "p": 5, "n": 2, "degree": 30},
    {"scenario": "center-shrink", "p": 5, "n": 2, "degree": 30},
    {"scenario": "cartier", "p": 5, "n": 2},
    {"scenario": "lemma-muh", "p": 5, "n": 2, "samples": 100},
    {"scenario": "lemma-frob", "p": 5, "n": 2},
    {"scenario": "remark-counterexample", "p": 5, "n": 2, "degree": 30},
    {"scenario": "theorem-flat-ideal", "p": 5, "n": 2, "samples": 5},
    {"scenario": "deformation-vs-std-poisson", "n": 2, "r": 2, "samples": 20},
]


def run_scenario(config: ScenarioConfig) -> ScenarioReport:
    cfg = resolve(config)
    sc = REGISTRY[cfg.scenario]
    ctx = Context.build(cfg)
    out = Outcome()
    t0 = time.perf_counter()
    sc.body(ctx, out)
    elapsed = round((time.perf_counter() - t0) * 1000, 1)
    if out.inconclusive:
        verdict = "inconclusive"
        out.notes["inconclusive"] = out.inconclusive
    else:
        verdict = "pass" if not out.failures else "fail"
    return ScenarioReport(
        scenario=cfg.scenario,
        params=cfg.to_dict(),
        verdict=verdict,
        cases=out.cases,
        failures=out.failed,
        witnesses=out.evidence + out.failures,
        elapsed_ms=elapsed,
        statement=sc.statement,
        polarity=sc.polarity,
        notes=out.notes,
    )


def _entries(profile: str, only: Iterable[str] | None) -> list[dict]:
    if profile not in PROFILES:
        raise ConfigError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}")
    entries = PROFILES[profile]
    if only is not None:
        only = set(only)
        unknown = only - set(REGISTRY)
        if unknown:
            raise ConfigError(f"unknown scenarios: {sorted(unknown)}")
        entries = [e for e in entries if e["scenario"] in only]
    if not entries:
        raise ConfigError("the suite has no scenarios to run")
    return entries


def run_suite(
    profile: str = "quick",
    *,
    only: Iterable[str] | None = None,
    overrides: dict | None = None,
    seed: int = 0,
    workers: int = 1,
) -> SuiteReport:
    """Run a profile; ``overrides`` (e.g. flipped signs) apply to every entry."""
    configs = [ScenarioConfig.from_dict({"seed": seed, **e, **(overrides or {})}) for e in _entries(profile, only)]
    t0 = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            reports = list(pool.map(run_scenario, configs))
    else:
        reports = [run_scenario(c) for c in configs]
    reports.sort(key=lambda r: (r.scenario, r.params["p"], r.params["n"], r.params["r"]))
    return SuiteReport(profile, reports, round((time.perf_counter() - t0) * 1000, 1))
