"""Energy-aware mutation testing for component architecture models."""

from ._core import (
    Model,
    check_equivalence,
    debug_listing,
    generate_mutants,
    parse_model,
    run_pipeline,
    serialize_model,
    simulate,
    validate,
)

__all__ = [
    "Model",
    "check_equivalence",
    "debug_listing",
    "generate_mutants",
    "parse_model",
    "run_pipeline",
    "serialize_model",
    "simulate",
    "validate",
]
