"""
info command

Status report: effective settings, algorithms and the semirings each one runs on.
"""

import argparse
import json
import logging

from tropconv import __version__
from tropconv.commands.convolve import supported_pairs
from tropconv.config import get_settings
from tropconv.services.setfunction import MAX_ORDER

# Configure logging
logger = logging.getLogger(__name__)


def status() -> dict:
    return {
        "service": "tropconv",
        "version": __version__,
        "settings": get_settings().model_dump(),
        "max_order": MAX_ORDER,
        "algorithms": supported_pairs(),
    }


def handle(args: argparse.Namespace) -> int:
    report = status()
    if args.json:
        print(json.dumps(report, indent=2))
        return 0
    print(f"tropconv {report['version']} (n <= {report['max_order']})")
    for key, value in report["settings"].items():
        print(f"  {key} = {value}")
    for algorithm, semirings in report["algorithms"].items():
        print(f"  {algorithm:<15} {', '.join(semirings)}")
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("info", help="Settings and supported algorithm/semiring pairs")
    parser.add_argument("--json", action="store_true", help="Machine-readable output")
    parser.set_defaults(handler=handle)
