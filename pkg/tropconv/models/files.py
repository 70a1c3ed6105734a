"""
File Models

Pydantic models for the on-disk JSON formats: set functions, graphs with
color costs, and colored DAGs. Loaders turn every malformed input into a
ParseError carrying the offending index when one is known.
"""

import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from tropconv.exceptions import ParseError
from tropconv.models.graphs import ColoredDag, Graph
from tropconv.services.numerics import ApproxFloat
from tropconv.services.setfunction import MAX_ORDER, SetFunction

# Configure logging
logger = logging.getLogger(__name__)

FileValue = Union[int, float, str]
M = TypeVar("M", bound=BaseModel)


def decode_value(raw: FileValue, index: int) -> Any:
    """File value -> extended value: int, exact Fraction, or +/- math.inf."""
    if isinstance(raw, bool):
        raise ParseError(f"Boolean is not a value at index {index}", index=index)
    if isinstance(raw, int):
        return raw
    if isinstance(raw, float):
        if math.isnan(raw):
            raise ParseError(f"NaN at index {index}", index=index)
        if math.isinf(raw):
            return raw
        frac = Fraction(repr(raw))
        return int(frac) if frac.denominator == 1 else frac
    text = raw.strip().lower()
    if text in ("inf", "+inf", "infinity"):
        return math.inf
    if text in ("-inf", "-infinity"):
        return -math.inf
    try:
        frac = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"Unparseable value {raw!r} at index {index}", index=index)
    return int(frac) if frac.denominator == 1 else frac


def encode_value(value: Any) -> FileValue:
    """Extended value -> file value; non-integral rationals become "p/q" strings."""
    if value == math.inf:
        return "inf"
    if value == -math.inf:
        return "-inf"
    if isinstance(value, ApproxFloat):
        value = value.to_fraction()
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return int(value)


def _load(model: Type[M], path: Union[str, Path]) -> M:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"Cannot read {path}", detail=str(e))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON", index=e.pos, detail=e.msg)
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = first.get("loc", ())
        index = next((p for p in reversed(loc) if isinstance(p, int)), None)
        raise ParseError(f"{path}: {first.get('msg')}", index=index, detail=str(e))


def _dump(model: BaseModel, path: Union[str, Path]) -> None:
    data = model.model_dump(exclude_none=True)
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


class SetFunctionFile(BaseModel):
    """
    Dense set function on disk.

    Attributes:
        n (int): Lattice order
        values (List[FileValue]): 2^n entries in bitmask order (empty set first)
        meta (Optional[Dict[str, Any]]): Generator provenance (seed, distribution)
    """

    model_config = ConfigDict(json_schema_extra={
        "example": {"n": 1, "values": [0, "inf"], "meta": {"seed": 7, "generator": "uniform:1024"}}
    })

    n: int = Field(..., ge=0, le=MAX_ORDER)
    values: List[FileValue]
    meta: Optional[Dict[str, Any]] = None

    @model_validator(mode="after")
    def validate_length(self) -> "SetFunctionFile":
        if len(self.values) != 1 << self.n:
            raise ValueError(f"Expected {1 << self.n} values for n={self.n}, got {len(self.values)}")
        return self

    @classmethod
    def from_set_function(cls, fn: SetFunction,
                          meta: Optional[Dict[str, Any]] = None) -> "SetFunctionFile":
        return cls(n=fn.n, values=[encode_value(v) for v in fn.values.tolist()], meta=meta)

    def to_set_function(self) -> SetFunction:
        return SetFunction(self.n, [decode_value(raw, i) for i, raw in enumerate(self.values)])

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SetFunctionFile":
        return _load(cls, path)

    def dump(self, path: Union[str, Path]) -> None:
        _dump(self, path)


class GraphFile(BaseModel):
    """
    Graph with color costs; vertices and edges are 1-based.

    Attributes:
        n (int): Vertex count
        k (int): Colors
        edges (List[Tuple[int, int]]): Pairs [u, v] with 1 <= u < v <= n
        costs (List[List[int]]): n rows of k integer costs
        meta (Optional[Dict[str, Any]]): Generator provenance
    """

    n: int = Field(..., ge=0)
    k: int = Field(..., ge=1)
    edges: List[Tuple[int, int]] = Field(default_factory=list)
    costs: List[List[int]]
    meta: Optional[Dict[str, Any]] = None

    @field_validator("edges")
    @classmethod
    def validate_edges(cls, v: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        if len(set(v)) != len(v):
            raise ValueError("Duplicate edges")
        return v

    @model_validator(mode="after")
    def validate_shape(self) -> "GraphFile":
        for u, v in self.edges:
            if not 1 <= u < v <= self.n:
                raise ValueError(f"Edge [{u}, {v}] must satisfy 1 <= u < v <= {self.n}")
        if len(self.costs) != self.n or any(len(row) != self.k for row in self.costs):
            raise ValueError(f"Cost table must be {self.n} x {self.k}")
        return self

    @classmethod
    def from_graph(cls, graph: Graph, meta: Optional[Dict[str, Any]] = None) -> "GraphFile":
        return cls(n=graph.n, k=graph.k, edges=[(u + 1, v + 1) for u, v in graph.edges()],
                   costs=graph.costs, meta=meta)

    def to_graph(self) -> Graph:
        try:
            return Graph.from_edges(self.n, self.k, [(u - 1, v - 1) for u, v in self.edges],
                                    self.costs)
        except ValidationError as e:
            raise ParseError("Invalid graph", detail=str(e))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "GraphFile":
        return _load(cls, path)

    def dump(self, path: Union[str, Path]) -> None:
        _dump(self, path)


class DagFile(BaseModel):
    """
    Colored DAG; vertices are 1-based and weights are numbers or "p/q" strings.

    Attributes:
        k (int): Colors
        colors (List[int]): Color of each vertex, in [1, k]
        edges (List[Tuple[int, int, FileValue]]): Triples [u, v, w]
        meta (Optional[Dict[str, Any]]): Generator provenance
    """

    k: int = Field(..., ge=1)
    colors: List[int]
    edges: List[Tuple[int, int, FileValue]] = Field(default_factory=list)
    meta: Optional[Dict[str, Any]] = None

    @classmethod
    def from_dag(cls, dag: ColoredDag, meta: Optional[Dict[str, Any]] = None) -> "DagFile":
        return cls(k=dag.k, colors=dag.colors,
                   edges=[(u + 1, v + 1, encode_value(w)) for u, v, w in dag.edges], meta=meta)

    def to_dag(self) -> ColoredDag:
        edges = []
        for i, (u, v, w) in enumerate(self.edges):
            weight = decode_value(w, i)
            if weight in (math.inf, -math.inf):
                raise ParseError(f"Edge weight at index {i} must be finite", index=i)
            edges.append((u - 1, v - 1, Fraction(weight)))
        try:
            return ColoredDag(k=self.k, colors=self.colors, edges=edges)
        except ValidationError as e:
            raise ParseError("Invalid DAG", detail=str(e))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "DagFile":
        return _load(cls, path)

    def dump(self, path: Union[str, Path]) -> None:
        _dump(self, path)
