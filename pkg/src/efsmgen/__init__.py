"""Compile JSON-described extended finite state machines and generate feasible test suites."""

from importlib import resources

__version__ = "0.1.0"

from .core import (  # noqa: E402
    CompiledEfsm,
    CompiledTransition,
    InfoReport,
    StateConfiguration,
    StepResult,
    compile_model,
    def_use,
    evaluate,
    fire,
    initial_configuration,
    is_feasible,
    model_info,
    outgoing,
    simulate_path,
)
from .expr import ExprNode, NodeKind, StatementKind, identifiers, parse, render_tree, tokenize  # noqa: E402
from .generation import (  # noqa: E402
    CoverageCriterion,
    CoverageReport,
    GenerationOptions,
    TestCase,
    TestSuite,
    boundary_candidates,
    coverage_of,
    generate,
    step_inputs,
)
from .model import (  # noqa: E402
    Diagnostic,
    ModelDocument,
    TransitionSpec,
    VariableDomain,
    dump_document,
    load_document,
    load_file,
    validate_document,
)


def scp_model_path():
    """Path of the bundled Simple Connection Protocol model."""
    return resources.files(__name__) / "models" / "scp.json"


def load_scp() -> CompiledEfsm:
    return compile_model(load_document(scp_model_path().read_bytes()))


__all__ = [
    "CompiledEfsm",
    "CompiledTransition",
    "CoverageCriterion",
    "CoverageReport",
    "Diagnostic",
    "ExprNode",
    "GenerationOptions",
    "InfoReport",
    "ModelDocument",
    "NodeKind",
    "StateConfiguration",
    "StatementKind",
    "StepResult",
    "TestCase",
    "TestSuite",
    "TransitionSpec",
    "VariableDomain",
    "boundary_candidates",
    "compile_model",
    "coverage_of",
    "def_use",
    "dump_document",
    "evaluate",
    "fire",
    "generate",
    "identifiers",
    "initial_configuration",
    "is_feasible",
    "load_document",
    "load_file",
    "load_scp",
    "model_info",
    "outgoing",
    "parse",
    "render_tree",
    "scp_model_path",
    "simulate_path",
    "step_inputs",
    "tokenize",
    "validate_document",
]
