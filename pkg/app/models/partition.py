from enum import Enum
from functools import cached_property

from pydantic import BaseModel, ConfigDict, model_validator

from app.errors import GraphStructureError
from app.models.cycles import DirectedEdge, DirectedMultigraph
from app.models.graph import FourRegularGraph

Pair = tuple[int, int]


class TransitionLabel(str, Enum):
    PHI = "phi"
    CHI = "chi"
    PSI = "psi"

    @property
    def symbol(self) -> str:
        return {"phi": "φ", "chi": "χ", "psi": "ψ"}[self.value]


class Transition(BaseModel):
    """Two single transitions pairing the four half-edges at ``vertex``."""

    model_config = ConfigDict(frozen=True)

    vertex: str
    pairs: tuple[Pair, Pair]

    @model_validator(mode="before")
    @classmethod
    def normalize_pairs(cls, data: dict) -> dict:
        if isinstance(data, dict) and "pairs" in data:
            first, second = (tuple(sorted(p)) for p in data["pairs"])
            data = {**data, "pairs": tuple(sorted((first, second)))}
        return data

    @model_validator(mode="after")
    def check_disjoint(self) -> "Transition":
        flat = [h for pair in self.pairs for h in pair]
        if len(set(flat)) != 4:
            raise GraphStructureError(
                f"transition at {self.vertex} must pair four distinct half-edges"
            )
        return self

    def partner(self, h: int) -> int:
        for a, b in self.pairs:
            if h == a:
                return b
            if h == b:
                return a
        raise GraphStructureError(f"half-edge {h} is not at vertex {self.vertex}")

    def pair_of(self, h: int) -> Pair:
        for pair in self.pairs:
            if h in pair:
                return pair
        raise GraphStructureError(f"half-edge {h} is not at vertex {self.vertex}")

    def __str__(self) -> str:
        (a, b), (c, d) = self.pairs
        return f"({a} {b})({c} {d})"


class CircuitPartition(BaseModel):
    """Circuits obtained by following one transition at every vertex.

    Each circuit is stored in the same leave/enter layout as an Euler
    system trace and starts by leaving on its least half-edge; circuits
    are ordered by that half-edge.
    """

    model_config = ConfigDict(frozen=True)

    graph: FourRegularGraph
    transitions: dict[str, Transition]
    circuits: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def check_cover(self) -> "CircuitPartition":
        if set(self.transitions) != set(self.graph.vertices):
            raise GraphStructureError("a partition needs one transition per vertex")
        used = sorted(h for circuit in self.circuits for h in circuit)
        if used != list(range(len(self.graph.half_edges))):
            raise GraphStructureError("circuits must use every edge exactly once")
        return self

    @property
    def size(self) -> int:
        return len(self.circuits)

    @cached_property
    def circuit_index(self) -> dict[int, int]:
        """Half-edge id to the index of the circuit containing it."""
        return {h: k for k, circuit in enumerate(self.circuits) for h in circuit}

    def assignment(self) -> tuple[tuple[str, Pair, Pair], ...]:
        """Hashable transition assignment, ordered by vertex id."""
        return tuple(
            (v, *self.transitions[v].pairs) for v in sorted(self.transitions)
        )


class TouchEdge(BaseModel):
    """The touch-graph edge of a vertex; ``tail`` holds the image of h1."""

    model_config = ConfigDict(frozen=True)

    vertex: str
    tail: int
    head: int
    tail_pair: Pair
    head_pair: Pair

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


class TouchGraph(BaseModel):
    model_config = ConfigDict(frozen=True)

    circuit_count: int
    edges: tuple[TouchEdge, ...]

    @cached_property
    def edge_by_vertex(self) -> dict[str, TouchEdge]:
        return {e.vertex: e for e in self.edges}

    def directed(self) -> DirectedMultigraph:
        return DirectedMultigraph(
            nodes=tuple(range(self.circuit_count)),
            edges=tuple(
                DirectedEdge(id=e.vertex, tail=e.tail, head=e.head) for e in self.edges
            ),
        )
