"""
gen command

Seeded instance generation: `gen setfn`, `gen graph` and `gen dag`.
"""

import argparse
import logging

from tropconv.models.files import DagFile, GraphFile, SetFunctionFile
from tropconv.services.generators import random_dag, random_graph, random_set_function

# Configure logging
logger = logging.getLogger(__name__)


def handle_setfn(args: argparse.Namespace) -> int:
    fn, meta = random_set_function(args.n, args.dist, args.inf_frac, args.seed)
    SetFunctionFile.from_set_function(fn, meta).dump(args.out)
    print(f"setfn n={args.n} dist={args.dist} seed={args.seed} -> {args.out}")
    return 0


def handle_graph(args: argparse.Namespace) -> int:
    graph, meta = random_graph(args.n, args.k, args.edge_prob, args.cost_max,
                               args.negative, args.seed)
    GraphFile.from_graph(graph, meta).dump(args.out)
    print(f"graph n={args.n} k={args.k} edges={len(graph.edges())} seed={args.seed} -> {args.out}")
    return 0


def handle_dag(args: argparse.Namespace) -> int:
    dag, meta = random_dag(args.n, args.k, args.edge_prob, args.weight_max, args.seed)
    DagFile.from_dag(dag, meta).dump(args.out)
    print(f"dag n={args.n} k={args.k} edges={len(dag.edges)} seed={args.seed} -> {args.out}")
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("gen", help="Generate seeded instances")
    kinds = parser.add_subparsers(dest="kind", required=True)

    setfn = kinds.add_parser("setfn", help="Random set function")
    setfn.add_argument("--n", type=int, required=True)
    setfn.add_argument("--dist", default="uniform:1024",
                       help="uniform:M, powerlaw:M (log-uniform in [1, M]) or bimodal:M")
    setfn.add_argument("--inf-frac", type=float, default=0.0, help="Probability of an inf entry")
    setfn.add_argument("--seed", type=int, default=0)
    setfn.add_argument("--out", required=True)
    setfn.set_defaults(handler=handle_setfn)

    graph = kinds.add_parser("graph", help="Random graph with a cost table")
    graph.add_argument("--n", type=int, required=True)
    graph.add_argument("--k", type=int, required=True)
    graph.add_argument("--edge-prob", type=float, default=0.5)
    graph.add_argument("--cost-max", type=int, default=10)
    graph.add_argument("--negative", action="store_true", help="Draw costs from [-cost-max, cost-max]")
    graph.add_argument("--seed", type=int, default=0)
    graph.add_argument("--out", required=True)
    graph.set_defaults(handler=handle_graph)

    dag = kinds.add_parser("dag", help="Random colored DAG")
    dag.add_argument("--n", type=int, required=True)
    dag.add_argument("--k", type=int, required=True)
    dag.add_argument("--edge-prob", type=float, default=0.3)
    dag.add_argument("--weight-max", type=int, default=10)
    dag.add_argument("--seed", type=int, default=0)
    dag.add_argument("--out", required=True)
    dag.set_defaults(handler=handle_dag)
