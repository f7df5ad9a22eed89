"""Scenario registry, observable parser and report export."""

from .parser import format_observable, parse_observable
from .registry import (
    REGISTRY,
    ObservableCase,
    Row,
    Scenario,
    ScenarioReport,
    export_report,
    report_to_dict,
    report_to_json,
    run_scenario,
    scenario_names,
    scenario_observables,
)

__all__ = [
    "REGISTRY",
    "ObservableCase",
    "Row",
    "Scenario",
    "ScenarioReport",
    "export_report",
    "format_observable",
    "parse_observable",
    "report_to_dict",
    "report_to_json",
    "run_scenario",
    "scenario_names",
    "scenario_observables",
]
