"""
tropconv command-line application

Entry point with environment loading, logging set-up, command registration
and the mapping of errors to exit codes:

    0  success
    1  usage or domain error
    2  malformed input file
    3  verification failure (a guarantee was violated)
"""

import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from tropconv import __version__
from tropconv.commands import bench, coloring, convolve, gen, info, subtree, verify_equivalence
from tropconv.config import get_settings
from tropconv.exceptions import TropconvError

logger = logging.getLogger(__name__)

COMMANDS = (convolve, gen, coloring, subtree, verify_equivalence, bench, info)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tropconv", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"tropconv {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    # Load environment variables from .env file
    load_dotenv()
    try:
        settings = get_settings()
    except ValidationError as e:
        print(f"error: invalid environment settings: {e.errors()[0].get('msg')}", file=sys.stderr)
        return 1

    # Configure logging
    logging.basicConfig(level=settings.log_level,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags; usage errors are 1 here
        return 0 if e.code == 0 else 1

    try:
        return args.handler(args)
    except TropconvError as exc:
        where = f" (index {exc.index})" if getattr(exc, "index", None) is not None else ""
        logger.error(f"{type(exc).__name__}: {exc.message}{where}")
        if exc.detail:
            logger.debug(exc.detail)
        print(f"error: {exc.message}{where}", file=sys.stderr)
        return exc.exit_code
    except ValidationError as exc:
        logger.error(f"Validation error: {exc.errors()}")
        print(f"error: {exc.errors()[0].get('msg')}", file=sys.stderr)
        return 1
    except Exception as exc:
        logger.error(f"Unexpected error: {str(exc)}")
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
