"""
convolve command

Reads f and g, runs one algorithm over one semiring, writes h and prints a
one-line summary. With --verify the naive oracle is run as well and any
violated guarantee ends the command with exit code 3.
"""

import argparse
import logging
import time
from typing import Any, Callable, Dict, Optional, Tuple

from tropconv.exceptions import UsageError, VerificationError
from tropconv.models.files import SetFunctionFile
from tropconv.models.params import as_params
from tropconv.models.reports import VerificationReport
from tropconv.services.approx import (
    approx_maxsum,
    approx_minsum_simple,
    approx_minsum_strong,
    approx_minsum_weak,
)
from tropconv.services.lattice import (
    bounded_maxsum_convolution,
    bounded_minsum_convolution,
    fast_sumproduct_convolution,
    naive_convolution,
)
from tropconv.services.minmax import boolean_subset_convolution, minmax_convolution
from tropconv.services.setfunction import SEMIRINGS, SetFunction, get_semiring
from tropconv.services.verification import exact_report, ratio_report

# Configure logging
logger = logging.getLogger(__name__)

ALGORITHMS = ("naive", "fast", "bounded", "minmax-chunked",
              "approx-weak", "approx-simple", "approx-strong")
APPROXIMATE = ("approx-weak", "approx-simple", "approx-strong")


def _bound(f: SetFunction, g: SetFunction, bound: Optional[int]) -> int:
    if bound is not None:
        return bound
    largest = [v for v in (f.max_finite(), g.max_finite()) if v is not None]
    return int(max(largest, default=0))


def _dispatch(f: SetFunction, g: SetFunction, eps: Any,
              bound: Optional[int], chunk_size: Optional[int]) -> Dict[Tuple[str, str], Callable[[], SetFunction]]:
    """(algorithm, semiring) -> runner, for every supported pair."""
    table = {("naive", name): (lambda sr=sr: naive_convolution(f, g, sr)) for name, sr in SEMIRINGS.items()}
    table.update({
        ("fast", "sumprod"): lambda: fast_sumproduct_convolution(f, g),
        ("fast", "boolean"): lambda: boolean_subset_convolution(f, g),
        ("bounded", "minsum"): lambda: bounded_minsum_convolution(f, g, _bound(f, g, bound)),
        ("bounded", "maxsum"): lambda: bounded_maxsum_convolution(f, g, _bound(f, g, bound)),
        ("minmax-chunked", "minmax"): lambda: minmax_convolution(f, g, chunk_size=chunk_size),
        ("approx-weak", "minsum"): lambda: approx_minsum_weak(f, g, eps),
        ("approx-weak", "maxsum"): lambda: approx_maxsum(f, g, eps),
        ("approx-simple", "minsum"): lambda: approx_minsum_simple(f, g, eps),
        ("approx-strong", "minsum"): lambda: approx_minsum_strong(f, g, eps),
    })
    return table


def supported_pairs() -> Dict[str, list]:
    """algorithm -> semirings it runs on."""
    empty = SetFunction.delta(0)
    pairs: Dict[str, list] = {}
    for algorithm, semiring in _dispatch(empty, empty, None, None, None):
        pairs.setdefault(algorithm, []).append(semiring)
    return pairs


def convolve(f: SetFunction, g: SetFunction, semiring: str, algorithm: str, eps: Any = None,
             bound: Optional[int] = None, chunk_size: Optional[int] = None) -> SetFunction:
    """
    Run one supported (algorithm, semiring) pair.

    Raises:
        UsageError: For an unsupported pair or a missing --eps
    """
    get_semiring(semiring)
    runner = _dispatch(f, g, eps, bound, chunk_size).get((algorithm, semiring))
    if runner is None:
        raise UsageError(f"Algorithm '{algorithm}' does not support semiring '{semiring}'")
    if algorithm in APPROXIMATE and eps is None:
        raise UsageError(f"Algorithm '{algorithm}' needs --eps")
    return runner()


def verify(f: SetFunction, g: SetFunction, h: SetFunction, semiring: str,
           algorithm: str, eps: Any = None) -> VerificationReport:
    oracle = naive_convolution(f, g, get_semiring(semiring))
    if algorithm in APPROXIMATE:
        return ratio_report(algorithm, semiring, h, oracle, as_params(eps).epsilon,
                            maximize=semiring == "maxsum")
    return exact_report(algorithm, semiring, h, oracle)


def handle(args: argparse.Namespace) -> int:
    f = SetFunctionFile.load(args.in_f).to_set_function()
    g = SetFunctionFile.load(args.in_g).to_set_function()
    eps = as_params(args.eps).epsilon if args.eps is not None else None

    start = time.perf_counter()
    h = convolve(f, g, args.semiring, args.algo, eps, args.bound, args.chunk_size)
    seconds = time.perf_counter() - start
    SetFunctionFile.from_set_function(h).dump(args.out)
    finite = len(h.finite_values())
    print(f"{args.algo}/{args.semiring} n={h.n}: {finite} finite entries in {seconds:.3f}s -> {args.out}")

    if args.verify:
        report = verify(f, g, h, args.semiring, args.algo, eps)
        if report.exact:
            print(f"verify: exact match={report.passed}")
        else:
            print(f"verify: max ratio={report.max_ratio} min ratio={report.min_ratio} "
                  f"violations={len(report.violations)}")
        if not report.passed:
            raise VerificationError(
                f"{args.algo} violated its guarantee at {len(report.violations)} sets",
                detail=f"first sets: {report.violations[:16]}",
            )
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("convolve", help="Convolve two set functions",
                                   description=__doc__,
                                   formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--semiring", required=True, choices=sorted(SEMIRINGS))
    parser.add_argument("--algo", required=True, choices=ALGORITHMS)
    parser.add_argument("--eps", default=None, help="Accuracy as a decimal or p/q, parsed exactly")
    parser.add_argument("--in-f", required=True, help="SetFunctionFile for f")
    parser.add_argument("--in-g", required=True, help="SetFunctionFile for g")
    parser.add_argument("--out", required=True, help="Where to write h")
    parser.add_argument("--bound", type=int, default=None,
                        help="Value bound M for --algo bounded (default: largest finite input)")
    parser.add_argument("--chunk-size", type=int, default=None,
                        help="Chunk size for --algo minmax-chunked")
    parser.add_argument("--verify", action="store_true", help="Check the output against the naive oracle")
    parser.set_defaults(handler=handle)
