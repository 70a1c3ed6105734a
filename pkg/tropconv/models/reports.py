"""
Report Models

Pydantic models for the structured results the engines and commands emit:
min-max instrumentation, decoding-bound checks, oracle verification summaries and
benchmark rows.
"""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

BENCH_SCHEMA_VERSION = 2


class ChunkStats(BaseModel):
    """
    Instrumentation of one chunked min-max convolution.

    Attributes:
        chunk_size (int): Entries per chunk
        chunks_total (int): Chunks covering the finite prefix of the sorted list
        chunks_swept (int): Chunks actually processed before every feasible S resolved
        boolean_convolutions (int): Boolean subset convolutions run
        resolution_counts (List[int]): How often each S was finalized
        comparisons (List[int]): Local-scan candidate evaluations per S
    """

    chunk_size: int = 0
    chunks_total: int = 0
    chunks_swept: int = 0
    boolean_convolutions: int = 0
    resolution_counts: List[int] = Field(default_factory=list)
    comparisons: List[int] = Field(default_factory=list)

    @property
    def max_comparisons(self) -> int:
        return max(self.comparisons, default=0)


class DecodingBoundEntry(BaseModel):
    """Outcome of t^h(S) <= h'(S) <= t^(h(S)+1/2) at one set."""

    mask: int
    h: Optional[int] = Field(None, description="Exact min-max rank, None when infinite")
    h_prime: str = Field(..., description="Approximate min-sum value, as text")
    lower_ok: bool
    upper_ok: bool

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok


class DecodingBoundReport(BaseModel):
    base: int = Field(..., description="t = ceil(4(1+eps)^2)")
    epsilon: str
    entries: List[DecodingBoundEntry] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> List[DecodingBoundEntry]:
        return [e for e in self.entries if not e.passed]


class VerificationReport(BaseModel):
    """
    Comparison of one algorithm's output against the naive oracle.

    Attributes:
        algorithm (str): Algorithm identifier
        semiring (str): Semiring name
        n (int): Lattice order
        epsilon (Optional[str]): Accuracy parameter for approximate algorithms
        exact (bool): Whether exact equality was required
        max_ratio (Optional[float]): Largest output / oracle ratio over finite positive entries
        min_ratio (Optional[float]): Smallest such ratio
        violations (List[int]): Sets where the contract failed
    """

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "algorithm": "approx-strong", "semiring": "minsum", "n": 10,
            "epsilon": "1/10", "exact": False, "max_ratio": 1.04,
            "min_ratio": 1.0, "violations": [],
        }
    })

    algorithm: str
    semiring: str
    n: int
    epsilon: Optional[str] = None
    exact: bool = True
    max_ratio: Optional[float] = None
    min_ratio: Optional[float] = None
    violations: List[int] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


class BenchRecord(BaseModel):
    """One benchmark measurement; CSV columns follow field order."""

    schema_version: int = BENCH_SCHEMA_VERSION
    suite: str
    algorithm: str
    n: int
    M: int = Field(..., description="Largest finite input value")
    epsilon: str = ""
    seconds: float = Field(..., ge=0)
    family_size: Optional[int] = None
    max_ratio: Optional[float] = None
    instances: Optional[int] = Field(None, description="Seeded instances checked (oracle sweep)")
    passed: Optional[int] = None
    failed: Optional[int] = None
