"""Compositional finite abstractions for symbolic controller synthesis.

The heavy lifting lives in the compiled ``_core`` module; this wrapper adds
dict-returning conveniences around the JSON-reporting entry points.
"""

import json as _json

from ._core import (
    BudgetExceeded,
    Context,
    Expr,
    Predicate,
    Quantizer,
    SystemSpec,
    Variable,
    load_spec,
    make_bench_spec,
    parse_expr,
    run_monolithic_json,
    run_spec_json,
    spec_to_json,
    summarize_module,
    theorem2_harness,
    theorem3_harness,
)

__all__ = [
    "BudgetExceeded",
    "Context",
    "Expr",
    "Predicate",
    "Quantizer",
    "SystemSpec",
    "Variable",
    "load_spec",
    "make_bench_spec",
    "parse_expr",
    "run_monolithic",
    "run_monolithic_json",
    "run_spec",
    "run_spec_json",
    "spec_to_json",
    "summarize_module",
    "theorem2_harness",
    "theorem3_harness",
]


def run_spec(spec, **kwargs):
    """Run the compositional pipeline; returns the run report as a dict.

    Keyword arguments mirror the CLI: ``out_dir``, ``abstract_only``,
    ``check``, ``check_step``, ``synthesize`` ("safety" or "reach"),
    ``sets`` (list of ``(var, lo, hi)`` tuples) and ``budget`` (seconds).
    """
    return _json.loads(run_spec_json(spec, **kwargs))


def run_monolithic(spec, budget=None, out_dir=""):
    """Abstract the flat product in one traversal; returns the report dict."""
    return _json.loads(run_monolithic_json(spec, budget=budget, out_dir=out_dir))
