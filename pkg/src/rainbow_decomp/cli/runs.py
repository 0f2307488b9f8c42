"""Long-running commands: the strategy rehearsal and seed-grid experiments."""

import argparse
import sys

from rainbow_decomp.cli.common import EXIT_OK, RunConfig, emit, parse_override
from rainbow_decomp.core.factorization import generate_circle_factorization
from rainbow_decomp.core.instance_io import load_instance
from rainbow_decomp.pipeline.experiments import EXPERIMENT_KINDS, experiment_csv, run_experiment, write_experiment_csv
from rainbow_decomp.pipeline.params import PipelineParams, build_params, load_params
from rainbow_decomp.pipeline.strategy import run_strategy
from rainbow_decomp.utils.errors import InvalidArgumentError
from rainbow_decomp.utils.logging import bind_component, bind_instance, get_logger

logger = get_logger(__name__)


def add_parsers(subparsers: argparse._SubParsersAction) -> None:
    p_strategy = subparsers.add_parser("strategy", help="Instrumented rehearsal of the ten-step strategy")
    p_strategy.add_argument("--n", type=int, required=True)
    p_strategy.add_argument("--instance", help="Instance JSON (circle factorization when omitted)")
    p_strategy.add_argument("--params", help="Parameter JSON (desk preset when omitted)")
    p_strategy.add_argument(
        "--set",
        dest="overrides",
        type=parse_override,
        action="append",
        metavar="NAME=VALUE",
        help="Override one parameter; repeatable",
    )
    p_strategy.add_argument("--seed", type=int, default=0)
    p_strategy.add_argument("--force", action="store_true", help="Run steps whose inputs failed")
    p_strategy.add_argument("--out")
    p_strategy.set_defaults(handler=cmd_strategy)

    p_exp = subparsers.add_parser("experiment", help="Seed grid of one component, exported as CSV")
    p_exp.add_argument("--kind", choices=list(EXPERIMENT_KINDS), required=True)
    p_exp.add_argument("--n", type=int, required=True)
    p_exp.add_argument("--seeds", type=int, default=10)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--workers", type=int, default=1)
    p_exp.add_argument("--out", help="CSV path (stdout when omitted)")
    p_exp.add_argument("--summary", help="Also write the aggregated summary JSON here")
    p_exp.set_defaults(handler=cmd_experiment)


def _params(config: RunConfig, n: int) -> PipelineParams:
    base = load_params(config.params, n) if config.params else PipelineParams.desk_preset(n)
    if not config.overrides:
        return base
    values = base.model_dump()
    unknown = sorted(set(config.overrides) - set(values))
    if unknown:
        raise InvalidArgumentError(
            message=f"Unknown parameters: {', '.join(unknown)}", details={"unknown": unknown}
        )
    values.update(config.overrides)
    for name in ("absorber_size", "cycle_length"):
        values[name] = int(values[name])
    return build_params(**values)


def cmd_strategy(config: RunConfig, args: argparse.Namespace) -> int:
    bind_component("strategy")
    if args.instance:
        bind_instance(args.instance)
        g = load_instance(args.instance)
    else:
        g = generate_circle_factorization(args.n)
    params = _params(config, args.n)
    report = run_strategy(g, params, seed=config.seed, force=args.force)
    emit(report.model_dump(), config.out)
    # Failed steps are data; the command itself succeeded.
    return EXIT_OK


def cmd_experiment(config: RunConfig, args: argparse.Namespace) -> int:
    bind_component("experiments")
    table = run_experiment(args.kind, args.n, args.seeds, seed=config.seed, workers=args.workers)
    if config.out:
        write_experiment_csv(table.rows, config.out)
        logger.info("Table written", path=config.out, rows=len(table.rows), operation="cmd_experiment")
    else:
        sys.stdout.write(experiment_csv(table.rows))
        sys.stdout.flush()
    if args.summary:
        emit(table.summary.model_dump(), args.summary)
    return EXIT_OK


__all__ = ["add_parsers", "cmd_strategy", "cmd_experiment"]
