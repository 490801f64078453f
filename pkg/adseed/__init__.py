from . import utils, core, functions, evaluation, nonadaptive, sosp, locallyadaptive, oracle, harness

__all__ = [
    "utils",
    "core",
    "functions",
    "evaluation",
    "nonadaptive",
    "sosp",
    "locallyadaptive",
    "oracle",
    "harness",
]
