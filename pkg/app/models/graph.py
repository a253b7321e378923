from collections import Counter
from functools import cached_property
from typing import Literal

from pydantic import BaseModel, ConfigDict, model_validator

from app.errors import GraphStructureError

Sign = Literal["+", "-"]


class HalfEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    vertex: str
    mate: int


class FourRegularGraph(BaseModel):
    """A multigraph given by half-edges; loops and parallel edges allowed.

    Half-edge ids are dense (0..4n-1) and assigned in input order, so the two
    half-edges of the k-th edge read from a file are 2k and 2k+1.
    """

    model_config = ConfigDict(frozen=True)

    vertices: tuple[str, ...]
    half_edges: tuple[HalfEdge, ...]

    @model_validator(mode="after")
    def check_regular(self) -> "FourRegularGraph":
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphStructureError("duplicate vertex ids")
        if len(self.half_edges) != 4 * len(self.vertices):
            raise GraphStructureError(
                f"{len(self.half_edges)} half-edges for {len(self.vertices)} "
                "vertices; a 4-regular graph has exactly four per vertex"
            )
        n = len(self.half_edges)
        for i, h in enumerate(self.half_edges):
            if h.id != i:
                raise GraphStructureError(f"half-edge ids must be dense, got {h.id}")
            if not 0 <= h.mate < n or h.mate == h.id:
                raise GraphStructureError(f"dangling half-edge {h.id}")
            if self.half_edges[h.mate].mate != h.id:
                raise GraphStructureError(f"dangling half-edge {h.id}")
        degree = Counter(h.vertex for h in self.half_edges)
        for v in self.vertices:
            if degree[v] != 4:
                raise GraphStructureError(f"vertex {v} has degree {degree[v]}, not 4")
        if set(degree) - set(self.vertices):
            raise GraphStructureError("half-edge on an undeclared vertex")
        return self

    @cached_property
    def incidence(self) -> dict[str, tuple[int, ...]]:
        """The four half-edges at each vertex, in id order."""
        incident: dict[str, list[int]] = {v: [] for v in self.vertices}
        for h in self.half_edges:
            incident[h.vertex].append(h.id)
        return {v: tuple(hs) for v, hs in incident.items()}

    def vertex_of(self, h: int) -> str:
        return self.half_edges[h].vertex

    def mate(self, h: int) -> int:
        return self.half_edges[h].mate

    @property
    def sorted_vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self.vertices))

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (lower half-edge id, higher half-edge id), ordered by id."""
        return [(h.id, h.mate) for h in self.half_edges if h.id < h.mate]

    @property
    def edge_count(self) -> int:
        return len(self.half_edges) // 2


class SignedOccurrence(BaseModel):
    model_config = ConfigDict(frozen=True)

    vertex: str
    sign: Sign

    def __str__(self) -> str:
        return f"{self.vertex}{self.sign}"

    def flipped(self) -> "SignedOccurrence":
        return SignedOccurrence(vertex=self.vertex, sign="-" if self.sign == "+" else "+")


class SignedEulerSystem(BaseModel):
    """One signed Euler circuit per connected component.

    ``traces[k]`` lists the half-edges of component ``k`` in walking order,
    two per edge: ``traces[k][2*i]`` leaves occurrence ``i`` and
    ``traces[k][2*i + 1]`` enters occurrence ``i + 1``. The passage through
    occurrence ``i`` therefore enters on ``traces[k][2*i - 1]`` and leaves on
    ``traces[k][2*i]``.
    """

    model_config = ConfigDict(frozen=True)

    graph: FourRegularGraph
    components: tuple[tuple[SignedOccurrence, ...], ...]
    traces: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def check_circuits(self) -> "SignedEulerSystem":
        g = self.graph
        if len(self.components) != len(self.traces):
            raise GraphStructureError("one trace is required per component word")
        seen_vertices: set[str] = set()
        seen_edges: set[int] = set()
        for word, trace in zip(self.components, self.traces):
            if len(trace) != 2 * len(word) or not word:
                raise GraphStructureError("trace length must be twice the word length")
            signs: dict[str, list[str]] = {}
            for occ in word:
                signs.setdefault(occ.vertex, []).append(occ.sign)
            for v, s in signs.items():
                if sorted(s) != ["+", "-"]:
                    raise GraphStructureError(
                        f"vertex {v} must occur once as {v}+ and once as {v}-"
                    )
                if v in seen_vertices:
                    raise GraphStructureError(f"vertex {v} occurs in two components")
                seen_vertices.add(v)
            m = len(word)
            for i in range(m):
                out, inn = trace[2 * i], trace[2 * i + 1]
                if g.mate(out) != inn:
                    raise GraphStructureError(f"half-edges {out} and {inn} are not mates")
                if g.vertex_of(out) != word[i].vertex:
                    raise GraphStructureError(f"half-edge {out} is not at {word[i].vertex}")
                if g.vertex_of(inn) != word[(i + 1) % m].vertex:
                    raise GraphStructureError(f"half-edge {inn} is not at the next vertex")
                if min(out, inn) in seen_edges:
                    raise GraphStructureError("an edge is used twice")
                seen_edges.add(min(out, inn))
        if seen_vertices != set(g.vertices):
            raise GraphStructureError("the circuits do not visit every vertex")
        if len(seen_edges) != g.edge_count:
            raise GraphStructureError("the circuits do not use every edge")
        return self

    @cached_property
    def occurrence_index(self) -> dict[tuple[str, str], tuple[int, int]]:
        return {
            (occ.vertex, occ.sign): (k, i)
            for k, word in enumerate(self.components)
            for i, occ in enumerate(word)
        }

    def locate(self, v: str, sign: Sign) -> tuple[int, int]:
        """Return (component index, occurrence index) of ``v`` with ``sign``."""
        try:
            return self.occurrence_index[(v, sign)]
        except KeyError:
            raise GraphStructureError(f"vertex {v} is not in the graph") from None

    def component_of(self, v: str) -> int:
        return self.locate(v, "+")[0]

    def passage(self, k: int, i: int) -> tuple[int, int]:
        """(entering, leaving) half-edges of occurrence ``i`` of component ``k``."""
        trace = self.traces[k]
        return trace[2 * i - 1], trace[2 * i]

    def half_edge_names(self, v: str) -> tuple[int, int, int, int]:
        """h1..h4 at ``v``: the + passage is (h1 in, h2 out), the - passage (h3 in, h4 out)."""
        h1, h2 = self.passage(*self.locate(v, "+"))
        h3, h4 = self.passage(*self.locate(v, "-"))
        return h1, h2, h3, h4

    def words(self) -> list[str]:
        return [" ".join(str(o) for o in word) for word in self.components]

    def unsigned_words(self) -> list[str]:
        return [" ".join(o.vertex for o in word) for word in self.components]


class GraphDocument(BaseModel):
    """A parsed graph file: the graph, plus the Euler system when given as words."""

    model_config = ConfigDict(frozen=True)

    name: str
    graph: FourRegularGraph
    euler_system: SignedEulerSystem | None = None
    component_names: tuple[str, ...] = ()
