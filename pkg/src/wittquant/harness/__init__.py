"""Seeded verification scenarios, suites and reports."""

from .config import ConfigError, ScenarioConfig, load_config
from .report import SCHEMA_VERSION, ScenarioReport, SuiteReport, emit_report
from .runner import PROFILES, run_scenario, run_suite
from .scenarios import CHECKS, REGISTRY, replay

__all__ = [
    "CHECKS",
    "ConfigError",
    "PROFILES",
    "REGISTRY",
    "SCHEMA_VERSION",
    "ScenarioConfig",
    "ScenarioReport",
    "SuiteReport",
    "emit_report",
    "load_config",
    "replay",
    "run_scenario",
    "run_suite",
]
