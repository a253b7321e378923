from functools import cached_property

from pydantic import BaseModel, ConfigDict, model_validator

from app.errors import GraphStructureError


class DirectedEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    tail: int
    head: int

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


class DirectedMultigraph(BaseModel):
    """Directed multigraph with integer nodes and string edge ids (loops allowed)."""

    model_config = ConfigDict(frozen=True)

    nodes: tuple[int, ...]
    edges: tuple[DirectedEdge, ...]

    @model_validator(mode="after")
    def check_endpoints(self) -> "DirectedMultigraph":
        known = set(self.nodes)
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise GraphStructureError("duplicate edge ids")
        for e in self.edges:
            if e.tail not in known or e.head not in known:
                raise GraphStructureError(f"edge {e.id} has an endpoint outside the graph")
        return self

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @cached_property
    def edge_by_id(self) -> dict[str, DirectedEdge]:
        return {e.id: e for e in self.edges}


class WalkStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    edge: str
    forward: bool


class DirectedWalk(BaseModel):
    """A closed walk recorded as edge traversals; may be empty."""

    model_config = ConfigDict(frozen=True)

    start: int | None = None
    steps: tuple[WalkStep, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.steps


class EdgeVector(BaseModel):
    """Integer coordinates on the edges of a directed graph, in edge order."""

    model_config = ConfigDict(frozen=True)

    edges: tuple[str, ...]
    coordinates: tuple[int, ...]

    @model_validator(mode="after")
    def check_length(self) -> "EdgeVector":
        if len(self.edges) != len(self.coordinates):
            raise GraphStructureError("edge vector length does not match its edge ids")
        return self

    def __getitem__(self, edge: str) -> int:
        return self.coordinates[self.edges.index(edge)]

    def dot(self, other: "EdgeVector") -> int:
        if self.edges != other.edges:
            raise GraphStructureError("edge vectors are indexed by different edges")
        return sum(a * b for a, b in zip(self.coordinates, other.coordinates))

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)
