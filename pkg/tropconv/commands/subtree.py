"""
subtree command

Maximum colorful subtree of a DagFile, exactly or within (1-eps).
"""

import argparse
import logging

from tropconv.models.files import DagFile, encode_value
from tropconv.models.params import as_params
from tropconv.services.subtree import max_colorful_subtree

# Configure logging
logger = logging.getLogger(__name__)


def handle(args: argparse.Namespace) -> int:
    dag = DagFile.load(args.dag).to_dag()
    eps = as_params(args.eps).epsilon if args.eps is not None else None
    value = max_colorful_subtree(dag, eps)
    mode = "exact" if eps is None else "approx"
    print(encode_value(value))
    print(f"mode={mode} eps={eps if eps is not None else '-'} vertices={dag.size} k={dag.k}")
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("subtree", help="Maximum colorful subtree")
    parser.add_argument("--dag", required=True, help="DagFile path")
    parser.add_argument("--eps", default=None, help="Accuracy; omit for the exact DP")
    parser.set_defaults(handler=handle)
