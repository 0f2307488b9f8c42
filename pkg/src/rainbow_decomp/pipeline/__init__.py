"""Exact solver, absorber demonstrations and the instrumented strategy rehearsal."""

from rainbow_decomp.pipeline.absorbers import (
    AbsorberDemo,
    build_absorber_demo,
    build_colour_absorber_demo,
    build_edge_absorber_demo,
)
from rainbow_decomp.pipeline.exact import DecompositionResult, exact_decompose, isomorphic_decompose
from rainbow_decomp.pipeline.experiments import (
    EXPERIMENT_KINDS,
    ExperimentRow,
    ExperimentTable,
    experiment_csv,
    run_experiment,
    write_experiment_csv,
)
from rainbow_decomp.pipeline.params import PipelineParams, build_params, load_params
from rainbow_decomp.pipeline.paths import PathDecomposition, approximate_path_decomposition
from rainbow_decomp.pipeline.strategy import StepReport, StrategyReport, run_strategy

__all__ = [
    "AbsorberDemo",
    "build_absorber_demo",
    "build_colour_absorber_demo",
    "build_edge_absorber_demo",
    "DecompositionResult",
    "exact_decompose",
    "isomorphic_decompose",
    "EXPERIMENT_KINDS",
    "ExperimentRow",
    "ExperimentTable",
    "experiment_csv",
    "run_experiment",
    "write_experiment_csv",
    "PipelineParams",
    "build_params",
    "load_params",
    "PathDecomposition",
    "approximate_path_decomposition",
    "StepReport",
    "StrategyReport",
    "run_strategy",
]
