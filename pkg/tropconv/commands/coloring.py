"""
coloring command

Minimum-cost proper k-coloring of a GraphFile, exactly or within (1+eps).
"""

import argparse
import logging

from tropconv.exceptions import UsageError
from tropconv.models.files import GraphFile, encode_value
from tropconv.models.params import as_params
from tropconv.services.coloring import APPROX, EXACT, kcoloring_cost, kcoloring_witness
from tropconv.services.setfunction import is_finite

# Configure logging
logger = logging.getLogger(__name__)


def handle(args: argparse.Namespace) -> int:
    graph = GraphFile.load(args.graph).to_graph()
    mode = APPROX if args.approx else EXACT
    if mode == APPROX and args.eps is None:
        raise UsageError("--approx needs --eps")
    if mode == APPROX and args.witness:
        raise UsageError("--witness is only available with --exact")
    eps = as_params(args.eps).epsilon if mode == APPROX else None

    value = kcoloring_cost(graph, args.k, mode=mode, eps=eps, bound=args.bound)
    print(encode_value(value) if is_finite(value) else "infeasible")
    print(f"mode={mode} eps={eps if eps is not None else '-'} vertices={graph.n} k={args.k}")
    logger.info(f"coloring mode={mode} eps={eps} k={args.k}: {value}")
    if args.witness and is_finite(value):
        colors = kcoloring_witness(graph, args.k, bound=args.bound)
        print("colors: " + " ".join(str(c) for c in colors))
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("coloring", help="Minimum-cost k-coloring")
    parser.add_argument("--graph", required=True, help="GraphFile path")
    parser.add_argument("-k", type=int, required=True, help="Number of colors")
    modes = parser.add_mutually_exclusive_group()
    modes.add_argument("--exact", action="store_true", help="Exact bounded min-sum chain (default)")
    modes.add_argument("--approx", action="store_true", help="(1+eps)-approximate chain")
    parser.add_argument("--eps", default=None)
    parser.add_argument("--bound", type=int, default=None, help="Cost bound M for exact mode")
    parser.add_argument("--witness", action="store_true", help="Print an optimal coloring")
    parser.set_defaults(handler=handle)
