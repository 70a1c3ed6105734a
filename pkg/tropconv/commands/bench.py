"""
bench command

Runs a benchmark suite over a grid of n (and eps for the approx and
oracle-sweep suites), appends the rows to a CSV file and reports per-step
growth factors. An oracle sweep with failures exits with code 3.
"""

import argparse
import logging

from tropconv.exceptions import VerificationError
from tropconv.services.bench import (
    EXPECTED_GROWTH,
    SUITES,
    append_records,
    growth_ratios,
    parse_range,
    run_suite,
    slope_check,
)

# Configure logging
logger = logging.getLogger(__name__)


def handle(args: argparse.Namespace) -> int:
    ns = parse_range(args.n)
    epsilons = [e.strip() for e in args.eps.split(",")] if args.eps else None
    records = run_suite(args.suite, ns, epsilons, args.M, args.seed, args.instances)
    append_records(args.out, records)
    print(f"{len(records)} rows appended to {args.out}")

    for record in records:
        extra = f" ratio={record.max_ratio:.4f}" if record.max_ratio is not None else ""
        if record.instances is not None:
            extra += f" passed={record.passed}/{record.instances}"
        eps = f" eps={record.epsilon}" if record.epsilon else ""
        print(f"  {record.algorithm:<15} n={record.n:<3}{eps} {record.seconds:.4f}s{extra}")

    for algorithm in EXPECTED_GROWTH:
        ratios = growth_ratios(records, algorithm)
        if not ratios:
            continue
        ok = slope_check(records, algorithm)
        steps = " ".join(f"x{r:.2f}" for r in ratios.values())
        print(f"{algorithm}: {steps} (expected x{EXPECTED_GROWTH[algorithm]:.2f}, "
              f"{'within' if ok else 'outside'} tolerance)")

    failing = [r for r in records if r.failed]
    if failing:
        cells = ", ".join(f"{r.algorithm} n={r.n} eps={r.epsilon or '-'}" for r in failing)
        raise VerificationError(f"Oracle sweep failed in {len(failing)} cells", detail=cells)
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("bench", help="Time the engines and append CSV rows",
                                   description=__doc__,
                                   formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--suite", choices=SUITES, default="crossover")
    parser.add_argument("--n", default="8..14", help="Sizes as lo..hi or a comma list")
    parser.add_argument("--eps", default=None, help="Comma list of accuracies (approx and oracle-sweep suites)")
    parser.add_argument("--M", type=int, default=None, help="Value bound of the generated inputs")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--instances", type=int, default=None,
                        help="Seeded instances per cell (oracle-sweep; default 1000 exact, 300 approximate)")
    parser.add_argument("--out", default="bench.csv")
    parser.set_defaults(handler=handle)
