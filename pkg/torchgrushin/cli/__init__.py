from ._config import (
    OUTPUT_DIR_VARIABLE,
    THREADS_VARIABLE,
    RunConfig,
    load_run_config,
)
from ._run import EXIT_FAIL, EXIT_OK, EXIT_USAGE, build_parser, main, run
from ._suites import (
    REFINEMENT_FACTORS,
    SUITES,
    SuiteOptions,
    compact_bump,
    run_suite,
    suite_names,
)
from ._symbol_specs import parse_symbol

__all__ = [
    "EXIT_FAIL",
    "EXIT_OK",
    "EXIT_USAGE",
    "OUTPUT_DIR_VARIABLE",
    "REFINEMENT_FACTORS",
    "RunConfig",
    "SUITES",
    "SuiteOptions",
    "THREADS_VARIABLE",
    "build_parser",
    "compact_bump",
    "load_run_config",
    "main",
    "parse_symbol",
    "run",
    "run_suite",
    "suite_names",
]
