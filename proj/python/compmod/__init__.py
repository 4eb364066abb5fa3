"""Compositional modelling: model spaces, aDPCSPs and order-of-magnitude preferences."""

from ._compmod import (
    ADPCSP,
    CompmodError,
    KnowledgeBase,
    ModelSpace,
    attach_preferences,
    brute_force_solve,
    build_adcsp,
    compare_omps,
    compose,
    evaluate,
    extract_model,
    generate_model_space,
    load_kb,
    match,
    parse,
    parse_problem,
    render_infix,
    run,
    solve,
)

__all__ = [
    "ADPCSP",
    "CompmodError",
    "KnowledgeBase",
    "ModelSpace",
    "attach_preferences",
    "brute_force_solve",
    "build_adcsp",
    "compare_omps",
    "compose",
    "evaluate",
    "extract_model",
    "generate_model_space",
    "load_kb",
    "match",
    "parse",
    "parse_problem",
    "render_infix",
    "run",
    "solve",
]
