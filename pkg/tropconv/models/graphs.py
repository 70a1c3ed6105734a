"""
Graph Models

Domain records for the application solvers: an undirected graph with a
vertex-by-color cost table, and a vertex-colored DAG with edge weights.
Vertices are 0-based here; file formats use 1-based numbering.
"""

from fractions import Fraction
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from tropconv.exceptions import DomainError

MAX_GRAPH_VERTICES = 22
MAX_COLORS = 20


class Graph(BaseModel):
    """
    Undirected simple graph with color costs.

    Attributes:
        n (int): Vertex count
        k (int): Number of colors in the cost table
        adjacency (List[int]): Neighbor bitmask per vertex
        costs (List[List[int]]): costs[v][i] = cost of giving vertex v color i+1
    """

    n: int = Field(..., ge=0, le=MAX_GRAPH_VERTICES)
    k: int = Field(..., ge=0)
    adjacency: List[int]
    costs: List[List[int]]

    @model_validator(mode="after")
    def validate_shape(self) -> "Graph":
        if len(self.adjacency) != self.n:
            raise ValueError(f"Expected {self.n} adjacency masks, got {len(self.adjacency)}")
        if len(self.costs) != self.n or any(len(row) != self.k for row in self.costs):
            raise ValueError(f"Cost table must be {self.n} x {self.k}")
        for v, adj in enumerate(self.adjacency):
            if adj >> self.n:
                raise ValueError(f"Vertex {v} has a neighbor outside the graph")
            if adj >> v & 1:
                raise ValueError(f"Vertex {v} has a self-loop")
            for u in range(self.n):
                if (adj >> u & 1) != (self.adjacency[u] >> v & 1):
                    raise ValueError(f"Adjacency is not symmetric at ({v}, {u})")
        return self

    @classmethod
    def from_edges(cls, n: int, k: int, edges: List[Tuple[int, int]],
                   costs: List[List[int]]) -> "Graph":
        """Build from 0-based edge pairs."""
        adjacency = [0] * n
        for u, v in edges:
            if u == v:
                raise DomainError(f"Self-loop at vertex {u}")
            adjacency[u] |= 1 << v
            adjacency[v] |= 1 << u
        return cls(n=n, k=k, adjacency=adjacency, costs=costs)

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n)
                if self.adjacency[u] >> v & 1]

    def max_abs_cost(self) -> int:
        return max((abs(c) for row in self.costs for c in row), default=0)


class ColoredDag(BaseModel):
    """
    Vertex-colored DAG with nonnegative edge weights.

    Attributes:
        k (int): Number of colors
        colors (List[int]): colors[v] in [1, k]
        edges (List[Tuple[int, int, Fraction]]): Directed (u, v, weight) triples
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: int = Field(..., ge=1, le=MAX_COLORS)
    colors: List[int]
    edges: List[Tuple[int, int, Fraction]] = Field(default_factory=list)

    @field_validator("edges", mode="before")
    @classmethod
    def coerce_weights(cls, v):
        return [(int(a), int(b), Fraction(w) if not isinstance(w, str) else Fraction(w.strip()))
                for a, b, w in v]

    @model_validator(mode="after")
    def validate_structure(self) -> "ColoredDag":
        for v, c in enumerate(self.colors):
            if not 1 <= c <= self.k:
                raise ValueError(f"Vertex {v} has color {c} outside [1, {self.k}]")
        seen = set()
        for u, v, w in self.edges:
            if not (0 <= u < len(self.colors) and 0 <= v < len(self.colors)):
                raise ValueError(f"Edge ({u}, {v}) references a missing vertex")
            if (u, v) in seen:
                raise ValueError(f"Duplicate edge ({u}, {v})")
            seen.add((u, v))
        return self

    @property
    def size(self) -> int:
        return len(self.colors)

    def require_nonnegative(self) -> None:
        for u, v, w in self.edges:
            if w < 0:
                raise DomainError(f"Edge ({u}, {v}) has negative weight {w}")

    def out_edges(self) -> Dict[int, List[Tuple[int, Fraction]]]:
        out: Dict[int, List[Tuple[int, Fraction]]] = {v: [] for v in range(self.size)}
        for u, v, w in self.edges:
            out[u].append((v, w))
        return out

    def topological_order(self) -> List[int]:
        """Kahn's algorithm; raises DomainError when a cycle exists."""
        indegree = [0] * self.size
        for _, v, _ in self.edges:
            indegree[v] += 1
        out = self.out_edges()
        queue = [v for v in range(self.size) if indegree[v] == 0]
        order: List[int] = []
        while queue:
            u = queue.pop()
            order.append(u)
            for v, _ in out[u]:
                indegree[v] -= 1
                if indegree[v] == 0:
                    queue.append(v)
        if len(order) != self.size:
            raise DomainError("The input graph contains a directed cycle")
        return order
