"""Spec files, suites, report emission and the command line entry point."""

from .main import main
from .output import CSV_COLUMNS, emit_report
from .spec import SpaceSpec, SpecError, build_space, dump_spec, load_spec, parse_spec
from .suite import CheckEntry, SuiteConfig, SuiteError, load_suite, parse_suite, run_suite

__all__ = [
    "main", "CSV_COLUMNS", "emit_report", "SpaceSpec", "SpecError", "build_space", "dump_spec",
    "load_spec", "parse_spec", "CheckEntry", "SuiteConfig", "SuiteError", "load_suite",
    "parse_suite", "run_suite",
]
