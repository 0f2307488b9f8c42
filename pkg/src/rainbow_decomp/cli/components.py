"""Component commands: rmbg, nibble, tree and absorber-demo."""

import argparse

from rainbow_decomp.cli.common import EXIT_FAILED, EXIT_OK, RunConfig, emit, note, require
from rainbow_decomp.hypermatch.hypergraph import hypergraph_to_json, load_hypergraph, random_uniform_hypergraph
from rainbow_decomp.hypermatch.matching import report_for
from rainbow_decomp.pipeline.absorbers import build_absorber_demo
from rainbow_decomp.rmbg.graph import load_rmbg, rmbg_to_json
from rainbow_decomp.rmbg.robust import (
    ExhaustiveMode,
    SampledMode,
    is_robustly_matchable,
    regularize,
    search_rmbg,
)
from rainbow_decomp.trees.canonical import canonical_form
from rainbow_decomp.trees.gadgets import DEFAULT_ABSORBER_SIZE, DEFAULT_BINARY_DEPTH, build_T, build_T_delta3
from rainbow_decomp.trees.shape import tree_to_json
from rainbow_decomp.utils.logging import bind_component, bind_instance, get_logger

logger = get_logger(__name__)


def add_parsers(subparsers: argparse._SubParsersAction) -> None:
    p_rmbg = subparsers.add_parser("rmbg", help="Robustly matchable bipartite graphs")
    rmbg_actions = p_rmbg.add_subparsers(dest="action", required=True)

    p_search = rmbg_actions.add_parser("search", help="Search for a verified RMBG(3m, 2m, 2m)")
    p_search.add_argument("--m", type=int, required=True)
    p_search.add_argument("--max-degree", dest="max_degree", type=int, required=True)
    p_search.add_argument("--seed", type=int, default=0)
    p_search.add_argument("--budget", dest="attempts", type=int, help="Candidate attempts")
    p_search.add_argument("--out")
    p_search.set_defaults(handler=cmd_rmbg_search)

    p_check = rmbg_actions.add_parser("verify", help="Check robust matchability")
    p_check.add_argument("file", help="RMBG JSON")
    p_check.add_argument("--sampled", type=int, help="Check this many random Y′ instead of all")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.set_defaults(handler=cmd_rmbg_verify)

    p_reg = rmbg_actions.add_parser("regularize", help="Extend to a (4d, 3d)-regular RMBG")
    p_reg.add_argument("file", help="RMBG JSON")
    p_reg.add_argument("--d", type=int, required=True)
    p_reg.add_argument("--out")
    p_reg.set_defaults(handler=cmd_rmbg_regularize)

    p_nibble = subparsers.add_parser("nibble", help="Hypergraph matchings")
    nibble_actions = p_nibble.add_subparsers(dest="action", required=True)

    p_gen = nibble_actions.add_parser("gen", help="Random near-regular uniform hypergraph")
    p_gen.add_argument("--vertices", type=int, required=True)
    p_gen.add_argument("--uniformity", type=int, default=3)
    p_gen.add_argument("--degree", type=int, required=True)
    p_gen.add_argument("--max-codegree", dest="max_codegree", type=int, default=3)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out")
    p_gen.set_defaults(handler=cmd_nibble_gen)

    p_run = nibble_actions.add_parser("run", help="Nibble (or greedy) matching with coverage report")
    p_run.add_argument("--instance", required=True, help="Hypergraph JSON")
    p_run.add_argument("--bite", type=float, default=0.1)
    p_run.add_argument("--rounds", type=int, default=60)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--greedy", action="store_true", help="Greedy baseline instead of the nibble")
    p_run.add_argument("--out")
    p_run.set_defaults(handler=cmd_nibble_run)

    p_tree = subparsers.add_parser("tree", help="Target trees")
    tree_actions = p_tree.add_subparsers(dest="action", required=True)
    p_build = tree_actions.add_parser("build", help="Build T_{n;r,b}")
    p_build.add_argument("--n", type=int, required=True)
    p_build.add_argument("--r", type=int, required=True)
    p_build.add_argument("--b", type=int, required=True)
    p_build.add_argument("--absorber-size", dest="absorber_size", type=int, default=DEFAULT_ABSORBER_SIZE)
    p_build.add_argument("--delta3", action="store_true", help="Maximum-degree-3 variant")
    p_build.add_argument("--depth", type=int, default=DEFAULT_BINARY_DEPTH, help="Binary depth of the variant")
    p_build.add_argument("--out")
    p_build.set_defaults(handler=cmd_tree_build)

    p_demo = subparsers.add_parser("absorber-demo", help="Exhaustively checked toy absorbers")
    p_demo.add_argument("--kind", choices=["edge", "colour"], required=True)
    p_demo.add_argument("--scale", type=int, default=2, help="Matching size (edge) or s (colour)")
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.add_argument("--out")
    p_demo.set_defaults(handler=cmd_absorber_demo)


def cmd_rmbg_search(config: RunConfig, args: argparse.Namespace) -> int:
    bind_component("rmbg")
    h = search_rmbg(args.m, args.max_degree, config.seed, config.attempts)
    emit(rmbg_to_json(h), config.out)
    return EXIT_OK


def cmd_rmbg_verify(config: RunConfig, args: argparse.Namespace) -> int:
    bind_component("rmbg")
    bind_instance(args.file)
    h = load_rmbg(args.file)
    if args.sampled is not None:
        require(args.sampled > 0, "--sampled must be positive", sampled=args.sampled)
        mode = SampledMode(draws=args.sampled, seed=config.seed)
    else:
        mode = ExhaustiveMode()
    verdict = is_robustly_matchable(h, mode)
    emit(verdict.model_dump(), config.out)
    if verdict.status == "refuted":
        note(f"refuted: Y′ = {verdict.witness} leaves X unmatched")
        return EXIT_FAILED
    return EXIT_OK


def cmd_rmbg_regularize(config: RunConfig, args: argparse.Namespace) -> int:
    bind_component("rmbg")
    bind_instance(args.file)
    h = regularize(load_rmbg(args.file), args.d)
    emit(rmbg_to_json(h), config.out)
    return EXIT_OK


def cmd_nibble_gen(config: RunConfig, args: argparse.Namespace) -> int:
    bind_component("hypermatch")
    h = random_uniform_hypergraph(args.vertices, args.uniformity, args.degree, args.max_codegree, config.seed)
    emit(hypergraph_to_json(h), config.out)
    return EXIT_OK


def cmd_nibble_run(config: RunConfig, args: argparse.Namespace) -> int:
    bind_component("hypermatch")
    bind_instance(args.instance)
    h = load_hypergraph(args.instance)
    method = "greedy" if args.greedy else "nibble"
    report = report_for(h, method, args.bite, args.rounds, config.seed)
    logger.info(
        "Matching computed",
        method=method,
        coverage=round(report.coverage, 4),
        gamma_effective=round(report.gamma_effective, 4),
        operation="cmd_nibble_run",
    )
    emit(report.model_dump(), config.out)
    return EXIT_OK


def cmd_tree_build(config: RunConfig, args: argparse.Namespace) -> int:
    bind_component("trees")
    if args.delta3:
        t = build_T_delta3(args.n, args.r, args.b, depth=args.depth)
    else:
        t = build_T(args.n, args.r, args.b, absorber_size=args.absorber_size)
    logger.info(
        "Tree built",
        n=t.vertex_count,
        max_degree=t.max_degree(),
        canonical_form=canonical_form(t)[:32],
        operation="cmd_tree_build",
    )
    emit(tree_to_json(t), config.out)
    return EXIT_OK


def cmd_absorber_demo(config: RunConfig, args: argparse.Namespace) -> int:
    bind_component("absorbers")
    demo = build_absorber_demo(args.kind, args.scale, config.seed)
    emit(demo.model_dump(), config.out)
    if not demo.ok:
        note(f"absorber demo recorded {len(demo.failures)} failures")
        return EXIT_FAILED
    return EXIT_OK


__all__ = [
    "add_parsers",
    "cmd_rmbg_search",
    "cmd_rmbg_verify",
    "cmd_rmbg_regularize",
    "cmd_nibble_gen",
    "cmd_nibble_run",
    "cmd_tree_build",
    "cmd_absorber_demo",
]
