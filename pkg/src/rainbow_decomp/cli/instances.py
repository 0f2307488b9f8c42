"""Instance commands: gen, verify, decompose."""

import argparse

from rainbow_decomp.cli.common import EXIT_FAILED, EXIT_OK, RunConfig, emit, note, parse_budget
from rainbow_decomp.core.factorization import (
    factorization_signature,
    generate_circle_factorization,
    generate_random_factorization,
)
from rainbow_decomp.core.instance_io import (
    decomposition_to_json,
    instance_to_json,
    load_decomposition,
    load_instance,
)
from rainbow_decomp.core.predicates import verify_decomposition
from rainbow_decomp.pipeline.exact import exact_decompose, isomorphic_decompose
from rainbow_decomp.trees.canonical import canonical_form
from rainbow_decomp.trees.shape import TreeShape, load_tree
from rainbow_decomp.utils.logging import bind_instance, get_logger

logger = get_logger(__name__)


def add_parsers(subparsers: argparse._SubParsersAction) -> None:
    p_gen = subparsers.add_parser("gen", help="Generate a 1-factorized K_n instance")
    p_gen.add_argument("--n", type=int, required=True, help="Even number of vertices")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--method", choices=["circle", "random"], default="random")
    p_gen.add_argument("--out", help="Output path (stdout when omitted)")
    p_gen.set_defaults(handler=cmd_gen)

    p_verify = subparsers.add_parser("verify", help="Check an instance and optionally a decomposition of it")
    p_verify.add_argument("file", help="Instance JSON")
    p_verify.add_argument("--decomposition", help="Decomposition JSON to audit against the instance")
    p_verify.set_defaults(handler=cmd_verify)

    p_dec = subparsers.add_parser("decompose", help="Exact search for a rainbow spanning tree decomposition")
    p_dec.add_argument("--instance", required=True, help="Instance JSON")
    p_dec.add_argument("--isomorphic-to", dest="isomorphic_to", help="Tree JSON every part must match")
    p_dec.add_argument("--budget", type=parse_budget, help="Time budget, e.g. 60s")
    p_dec.add_argument("--seed", type=int, default=0)
    p_dec.add_argument("--out", help="Output path (stdout when omitted)")
    p_dec.set_defaults(handler=cmd_decompose)


def cmd_gen(config: RunConfig, args: argparse.Namespace) -> int:
    if args.method == "circle":
        g = generate_circle_factorization(args.n)
    else:
        g = generate_random_factorization(args.n, config.seed)
    logger.info("Instance generated", n=g.n, method=args.method, operation="cmd_gen")
    emit(instance_to_json(g), config.out)
    return EXIT_OK


def cmd_verify(config: RunConfig, args: argparse.Namespace) -> int:
    bind_instance(args.file)
    g = load_instance(args.file)
    payload = {
        "n": g.n,
        "factorization": "valid",
        "signature": [list(row) for row in factorization_signature(g)],
    }
    code = EXIT_OK
    if args.decomposition:
        audit = verify_decomposition(g, load_decomposition(args.decomposition))
        payload["decomposition"] = audit.model_dump()
        if not audit.valid:
            note(f"decomposition fails its audit: {'; '.join(audit.diagnostics)}")
            code = EXIT_FAILED
    emit(payload, config.out)
    return code


def cmd_decompose(config: RunConfig, args: argparse.Namespace) -> int:
    bind_instance(args.instance)
    g = load_instance(args.instance)
    if args.isomorphic_to:
        shape = load_tree(args.isomorphic_to)
        result = isomorphic_decompose(g, shape, time_budget=config.budget, seed=config.seed)
    else:
        result = exact_decompose(g, time_budget=config.budget, seed=config.seed)

    payload = {"status": result.status, "n": result.n, "nodes": result.nodes}
    if result.status == "found":
        payload["decomposition"] = decomposition_to_json(g.n, result.parts)
        payload["verification"] = verify_decomposition(g, result.parts).model_dump()
        payload["canonical_forms"] = sorted(
            {canonical_form(TreeShape.from_edge_set(part)) for part in result.parts}
        )
    emit(payload, config.out)
    if result.status == "refuted":
        note(f"refuted: complete search found no decomposition of K_{g.n} ({result.nodes} nodes)")
        return EXIT_FAILED
    return EXIT_OK


__all__ = ["add_parsers", "cmd_gen", "cmd_verify", "cmd_decompose"]
