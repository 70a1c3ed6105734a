"""
Benchmark Runner

Times the engines over grids of n, epsilon and M and appends BenchRecord rows
to a CSV file. Three suites:

    crossover     naive min-sum, chunked min-max and fast sum-product per n
    approx        the approximate min-sum algorithms per (n, eps), with the
                  largest observed output / oracle ratio
    oracle-sweep  pass/fail counts of every engine against the naive oracle
                  per (algorithm, n, eps) over many seeded instances

Growth per unit n is compared with the expected factor (3 for naive,
2^(3/2) for chunked min-max, 2 for fast sum-product) within a relative
tolerance.
"""

import csv
import logging
import math
import time
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from tropconv.exceptions import ParseError, UsageError
from tropconv.models.params import parse_rational
from tropconv.models.reports import BENCH_SCHEMA_VERSION, BenchRecord, VerificationReport
from tropconv.services.approx import SOLVERS
from tropconv.services.covering import sum_to_max_covering
from tropconv.services.generators import random_set_function
from tropconv.services.lattice import (
    bounded_minsum_convolution,
    fast_sumproduct_convolution,
    naive_convolution,
)
from tropconv.services.minmax import minmax_convolution
from tropconv.services.setfunction import MIN_MAX, MIN_SUM, SUM_PRODUCT, SetFunction, is_finite
from tropconv.services.verification import exact_report, ratio_report

# Configure logging
logger = logging.getLogger(__name__)

CROSSOVER = "crossover"
APPROX = "approx"
ORACLE_SWEEP = "oracle-sweep"
SUITES = (CROSSOVER, APPROX, ORACLE_SWEEP)

EXACT_INSTANCES = 1000
APPROX_INSTANCES = 300

EXPECTED_GROWTH = {
    "naive": 3.0,
    "minmax-chunked": 2.0 ** 1.5,
    "fast": 2.0,
}
SLOPE_TOLERANCE = 0.25

FIELDS = list(BenchRecord.model_fields)


def parse_range(text: str) -> List[int]:
    """"8..16" -> [8, ..., 16]; "10" -> [10]; "4,6,8" -> [4, 6, 8]."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"Cannot parse range '{text}'")
    if not values:
        raise UsageError(f"Empty range '{text}'")
    return values


def _timed(fn: Callable[[], object]) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def run_crossover(ns: Iterable[int], bound: int = 1024, seed: int = 0) -> List[BenchRecord]:
    records = []
    for n in ns:
        f, _ = random_set_function(n, f"uniform:{bound}", seed=seed)
        g, _ = random_set_function(n, f"uniform:{bound}", seed=seed + 1)
        timings = {
            "naive": _timed(lambda: naive_convolution(f, g, MIN_SUM)),
            "minmax-chunked": _timed(lambda: minmax_convolution(f, g)),
            "fast": _timed(lambda: fast_sumproduct_convolution(f, g)),
        }
        for algorithm, seconds in timings.items():
            records.append(BenchRecord(suite=CROSSOVER, algorithm=algorithm, n=n, M=bound,
                                       seconds=seconds))
        logger.info(f"crossover n={n}: " + ", ".join(f"{a}={s:.4f}s" for a, s in timings.items()))
    return records


def run_approx(ns: Iterable[int], epsilons: Sequence[str], bound: int = 1 << 20,
               seed: int = 0) -> List[BenchRecord]:
    records = []
    for n in ns:
        f, _ = random_set_function(n, f"uniform:{bound}", seed=seed)
        g, _ = random_set_function(n, f"uniform:{bound}", seed=seed + 1)
        oracle = naive_convolution(f, g, MIN_SUM)
        for text in epsilons:
            eps = parse_rational(text)
            family = len(sum_to_max_covering(f, g, eps))
            for algorithm, solver in SOLVERS.items():
                start = time.perf_counter()
                out = solver(f, g, eps)
                seconds = time.perf_counter() - start
                report = ratio_report(algorithm, MIN_SUM.name, out, oracle, eps)
                records.append(BenchRecord(
                    suite=APPROX,
                    algorithm=algorithm,
                    n=n,
                    M=bound,
                    epsilon=str(eps),
                    seconds=seconds,
                    family_size=family if algorithm == "approx-simple" else None,
                    max_ratio=report.max_ratio,
                ))
                if not report.passed:
                    logger.warning(f"{algorithm} eps={eps} n={n}: {len(report.violations)} violations")
    return records


@dataclass
class _Tally:
    instances: int = 0
    passed: int = 0
    seconds: float = 0.0
    max_ratio: Optional[float] = None

    def add(self, run: Callable[[], SetFunction],
            judge: Callable[[SetFunction], VerificationReport]) -> None:
        start = time.perf_counter()
        out = run()
        self.seconds += time.perf_counter() - start
        report = judge(out)
        self.instances += 1
        self.passed += report.passed
        if report.max_ratio is not None:
            self.max_ratio = max(self.max_ratio or 0.0, report.max_ratio)


def run_oracle_sweep(ns: Iterable[int], epsilons: Sequence[str], bound: int = 64, seed: int = 0,
                     instances: Optional[int] = None) -> List[BenchRecord]:
    """
    Pass/fail counts of every engine against the naive oracle over seeded instances.

    Per n, the exact engines (bounded min-sum, chunked min-max, fast
    sum-product) see EXACT_INSTANCES instances and every approximate min-sum
    solver sees APPROX_INSTANCES instances per eps, unless `instances`
    overrides both. Instance i draws f and g from seeds seed + 2i and
    seed + 2i + 1 with 20% infinite entries.
    """
    exact_count = instances or EXACT_INSTANCES
    approx_count = instances or APPROX_INSTANCES
    accuracies = [parse_rational(text) for text in epsilons]
    dist = f"uniform:{bound}"
    records = []
    for n in ns:
        tallies: Dict[Tuple[str, str], _Tally] = defaultdict(_Tally)
        for i in range(max(exact_count, approx_count)):
            f, _ = random_set_function(n, dist, inf_frac=0.2, seed=seed + 2 * i)
            g, _ = random_set_function(n, dist, inf_frac=0.2, seed=seed + 2 * i + 1)
            minsum = naive_convolution(f, g, MIN_SUM)
            if i < exact_count:
                fa, ga = f.map(_finite_or_zero), g.map(_finite_or_zero)
                product = naive_convolution(fa, ga, SUM_PRODUCT)
                minmax = naive_convolution(f, g, MIN_MAX)
                tallies[("bounded", "")].add(
                    lambda: bounded_minsum_convolution(f, g, bound),
                    lambda out: exact_report("bounded", MIN_SUM.name, out, minsum))
                tallies[("minmax-chunked", "")].add(
                    lambda: minmax_convolution(f, g),
                    lambda out: exact_report("minmax-chunked", MIN_MAX.name, out, minmax))
                tallies[("fast", "")].add(
                    lambda: fast_sumproduct_convolution(fa, ga),
                    lambda out: exact_report("fast", SUM_PRODUCT.name, out, product))
            if i < approx_count:
                for eps in accuracies:
                    for algorithm, solver in SOLVERS.items():
                        tallies[(algorithm, str(eps))].add(
                            lambda: solver(f, g, eps),
                            lambda out: ratio_report(algorithm, MIN_SUM.name, out, minsum, eps))

        for (algorithm, eps), tally in tallies.items():
            failed = tally.instances - tally.passed
            records.append(BenchRecord(
                suite=ORACLE_SWEEP,
                algorithm=algorithm,
                n=n,
                M=bound,
                epsilon=eps,
                seconds=tally.seconds,
                max_ratio=tally.max_ratio,
                instances=tally.instances,
                passed=tally.passed,
                failed=failed,
            ))
            if failed:
                logger.warning(f"oracle sweep {algorithm} n={n} eps={eps or '-'}: {failed} failures")
        logger.info(f"oracle sweep n={n}: {len(tallies)} (algorithm, eps) cells checked")
    return records


def _finite_or_zero(value: Any) -> Any:
    return value if is_finite(value) else 0


def run_suite(suite: str, ns: Iterable[int], epsilons: Optional[Sequence[str]] = None,
              bound: Optional[int] = None, seed: int = 0,
              instances: Optional[int] = None) -> List[BenchRecord]:
    if suite == CROSSOVER:
        return run_crossover(ns, bound or 1024, seed)
    if suite == APPROX:
        return run_approx(ns, epsilons or ["1/2", "1/10"], bound or 1 << 20, seed)
    if suite == ORACLE_SWEEP:
        return run_oracle_sweep(ns, epsilons or ["1/2", "1/10"], bound or 64, seed, instances)
    raise UsageError(f"Unknown bench suite '{suite}', expected one of {SUITES}")


# CSV

def append_records(path: Union[str, Path], records: Sequence[BenchRecord]) -> None:
    """
    Append rows to a bench CSV, writing the header for a new file.

    Raises:
        ParseError: If the existing header does not match this schema version
    """
    path = Path(path)
    fresh = not path.exists() or path.stat().st_size == 0
    if not fresh:
        with path.open(newline="") as handle:
            header = next(csv.reader(handle), [])
        if header != FIELDS:
            raise ParseError(f"{path} has a different bench schema (expected version {BENCH_SCHEMA_VERSION})",
                             index=0, detail=",".join(header))
    with path.open("a", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=FIELDS)
        if fresh:
            writer.writeheader()
        for record in records:
            row = record.model_dump()
            writer.writerow({k: "" if v is None else v for k, v in row.items()})


def read_records(path: Union[str, Path]) -> List[BenchRecord]:
    rows = []
    with Path(path).open(newline="") as handle:
        for i, row in enumerate(csv.DictReader(handle)):
            try:
                rows.append(BenchRecord(**{k: v for k, v in row.items() if v != ""}))
            except ValueError as e:
                raise ParseError(f"Invalid bench row {i + 1}", index=i + 1, detail=str(e))
    return rows


# Growth

def growth_ratios(records: Iterable[BenchRecord], algorithm: str) -> Dict[int, float]:
    """n -> time(n) / time(n-1) over consecutive measured n (per-step factor)."""
    times = {r.n: r.seconds for r in records if r.algorithm == algorithm}
    ns = sorted(times)
    ratios = {}
    for prev, cur in zip(ns, ns[1:]):
        if times[prev] > 0:
            ratios[cur] = (times[cur] / times[prev]) ** (1 / (cur - prev))
    return ratios


def slope_check(records: Iterable[BenchRecord], algorithm: str,
                tolerance: float = SLOPE_TOLERANCE) -> Optional[bool]:
    """
    Whether the geometric-mean growth factor is within tolerance of the expected one.

    Returns None when fewer than two sizes were measured.
    """
    ratios = [r for r in growth_ratios(records, algorithm).values() if r > 0]
    if not ratios:
        return None
    mean = math.exp(sum(math.log(r) for r in ratios) / len(ratios))
    expected = EXPECTED_GROWTH[algorithm]
    ok = abs(mean - expected) <= tolerance * expected
    logger.info(f"{algorithm}: growth x{mean:.2f} per n (expected x{expected:.2f}, ok={ok})")
    return ok
