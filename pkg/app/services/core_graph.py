"""Half-edge multigraphs, double occurrence words and Euler systems.

Graph text is line oriented. Either every content line is
``dow <name>: tok tok ...`` (one closed walk per line, tokens ``a+``, ``a-``
or a bare ``a``) or every content line is ``edge <v> <w>``. Everything after
``#`` is a comment. Half-edge ids are assigned in input order: the k-th edge
read gets ids 2k and 2k + 1, the first one at the edge's starting vertex.
"""

import logging
import re
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from itertools import product
from pathlib import Path
from typing import TypeVar

import networkx as nx

from app.errors import GraphFormatError, GraphStructureError
from app.models.graph import (
    FourRegularGraph,
    GraphDocument,
    HalfEdge,
    Sign,
    SignedEulerSystem,
    SignedOccurrence,
)

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"^(?P<vertex>\S+?)(?P<sign>[+-])?$")
_DOW_LINE = re.compile(r"^dow\s+(?P<name>[^:\s]+)\s*:(?P<body>.*)$")

T = TypeVar("T")

# =============================================================================
# Parsing
# =============================================================================


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def parse_token(token: str, line: int | None = None) -> tuple[str, Sign | None]:
    match = _TOKEN.match(token)
    if match is None:
        raise GraphFormatError("expected <vertex>, <vertex>+ or <vertex>-", line, token)
    return match["vertex"], match["sign"]  # type: ignore[return-value]


def sign_word(
    tokens: Sequence[tuple[str, Sign | None]], line: int | None = None
) -> tuple[SignedOccurrence, ...]:
    """Complete the signs of a word; an unsigned pair gets + on its first occurrence."""
    positions: dict[str, list[int]] = {}
    for i, (vertex, _) in enumerate(tokens):
        positions.setdefault(vertex, []).append(i)
    signs: list[Sign] = ["+"] * len(tokens)
    for vertex, where in positions.items():
        if len(where) != 2:
            raise GraphStructureError(
                f"vertex {vertex} occurs {len(where)} times"
                + (f" on line {line}" if line is not None else "")
                + "; a double occurrence word needs exactly 2"
            )
        first, second = (tokens[i][1] for i in where)
        if first is None and second is None:
            first, second = "+", "-"
        elif first is None:
            first = "-" if second == "+" else "+"
        elif second is None:
            second = "-" if first == "+" else "+"
        if first == second:
            raise GraphFormatError(
                f"both occurrences of {vertex} carry the sign {first}", line, vertex + first
            )
        signs[where[0]], signs[where[1]] = first, second
    return tuple(SignedOccurrence(vertex=v, sign=s) for (v, _), s in zip(tokens, signs))


def _build_graph(
    vertices: list[str], edges: list[tuple[str, str]]
) -> FourRegularGraph:
    half_edges: list[HalfEdge] = []
    for k, (v, w) in enumerate(edges):
        half_edges.append(HalfEdge(id=2 * k, vertex=v, mate=2 * k + 1))
        half_edges.append(HalfEdge(id=2 * k + 1, vertex=w, mate=2 * k))
    return FourRegularGraph(vertices=tuple(vertices), half_edges=tuple(half_edges))


def parse_document(text: str, name: str = "C") -> GraphDocument:
    """Parse graph text; DOW input also yields its signed Euler system."""
    lines = list(_content_lines(text))
    if not lines:
        raise GraphFormatError("no graph content")
    kinds = {line.split(None, 1)[0] for _, line in lines}
    if kinds - {"dow", "edge"}:
        number, line = next(
            (n, text_line) for n, text_line in lines
            if text_line.split(None, 1)[0] not in ("dow", "edge")
        )
        raise GraphFormatError("expected a 'dow' or 'edge' line", number, line.split(None, 1)[0])
    if kinds == {"dow", "edge"}:
        number = next(n for n, text_line in lines if text_line.startswith("edge"))
        raise GraphFormatError("cannot mix 'dow' and 'edge' lines", number, "edge")

    vertices: list[str] = []
    seen: set[str] = set()

    def declare(v: str) -> None:
        if v not in seen:
            seen.add(v)
            vertices.append(v)

    if kinds == {"edge"}:
        edges: list[tuple[str, str]] = []
        for number, line in lines:
            parts = line.split()
            if len(parts) != 3:
                raise GraphFormatError("expected 'edge <v> <w>'", number, line)
            _, v, w = parts
            declare(v)
            declare(w)
            edges.append((v, w))
        graph = _build_graph(vertices, edges)
        logger.debug("parsed edge list: %d vertices, %d edges", len(vertices), len(edges))
        return GraphDocument(name=name, graph=graph)

    words: list[tuple[SignedOccurrence, ...]] = []
    names: list[str] = []
    for number, line in lines:
        match = _DOW_LINE.match(line)
        if match is None:
            raise GraphFormatError("expected 'dow <name>: tok tok ...'", number, line.split()[0])
        tokens = [parse_token(t, number) for t in match["body"].split()]
        if not tokens:
            raise GraphFormatError("empty word", number, match["name"])
        word = sign_word(tokens, number)
        for occ in word:
            declare(occ.vertex)
        words.append(word)
        names.append(match["name"])

    edges = []
    traces: list[tuple[int, ...]] = []
    for word in words:
        trace: list[int] = []
        for i, occ in enumerate(word):
            k = len(edges)
            edges.append((occ.vertex, word[(i + 1) % len(word)].vertex))
            trace.extend((2 * k, 2 * k + 1))
        traces.append(tuple(trace))
    graph = _build_graph(vertices, edges)
    euler, order = _canonical_system(graph, words, traces)
    logger.debug("parsed %d component word(s) on %d vertices", len(words), len(vertices))
    return GraphDocument(
        name=name,
        graph=graph,
        euler_system=euler,
        component_names=tuple(names[k] for k in order),
    )


def parse_graph(text: str) -> FourRegularGraph:
    return parse_document(text).graph


def read_text(path: Path | str) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise GraphFormatError(f"{path.name} is not UTF-8 text (byte {e.start})") from e


def load_document(path: Path | str) -> GraphDocument:
    path = Path(path)
    return parse_document(read_text(path), name=path.stem)


# =============================================================================
# Serialization
# =============================================================================


def serialize_euler_system(c: SignedEulerSystem, names: Sequence[str] | None = None) -> str:
    if names is None or len(names) != len(c.components):
        names = ["C"] if len(c.components) == 1 else [f"C{k + 1}" for k in range(len(c.components))]
    return "".join(f"dow {name}: {word}\n" for name, word in zip(names, c.words()))


def serialize_graph(g: FourRegularGraph) -> str:
    return "".join(f"edge {g.vertex_of(a)} {g.vertex_of(b)}\n" for a, b in g.edges())


def edge_multiset(g: FourRegularGraph) -> Counter[tuple[str, str]]:
    """Unordered endpoint pairs with multiplicity."""
    return Counter(
        tuple(sorted((g.vertex_of(a), g.vertex_of(b)))) for a, b in g.edges()  # type: ignore[misc]
    )


# =============================================================================
# Canonical forms
# =============================================================================


def _order_key(item: object) -> object:
    if isinstance(item, SignedOccurrence):
        return (item.vertex, item.sign)
    return item


def canonical_offset(word: Sequence[object]) -> int:
    """Offset of the lexicographically least rotation; ``+`` sorts before ``-``."""
    if not word:
        return 0
    keys = [_order_key(x) for x in word]
    n = len(keys)
    return min(range(n), key=lambda r: keys[r:] + keys[:r])


def canonical_rotation(word: Sequence[T]) -> tuple[T, ...]:
    r = canonical_offset(word)
    return tuple(word[r:]) + tuple(word[:r])


def _canonical_system(
    graph: FourRegularGraph,
    words: Sequence[Sequence[SignedOccurrence]],
    traces: Sequence[Sequence[int]],
) -> tuple[SignedEulerSystem, list[int]]:
    rotated = []
    for word, trace in zip(words, traces):
        r = canonical_offset(word)
        rotated.append(
            (tuple(word[r:]) + tuple(word[:r]), tuple(trace[2 * r :]) + tuple(trace[: 2 * r]))
        )
    order = sorted(range(len(rotated)), key=lambda k: min(o.vertex for o in rotated[k][0]))
    system = SignedEulerSystem(
        graph=graph,
        components=tuple(rotated[k][0] for k in order),
        traces=tuple(rotated[k][1] for k in order),
    )
    return system, order


def make_euler_system(
    graph: FourRegularGraph,
    words: Sequence[Sequence[SignedOccurrence]],
    traces: Sequence[Sequence[int]],
) -> SignedEulerSystem:
    """Build a validated Euler system in canonical rotation and component order."""
    return _canonical_system(graph, words, traces)[0]


def trail_key(c: SignedEulerSystem) -> tuple[tuple[int, ...], ...]:
    """Identity of the underlying unsigned Euler system at half-edge level.

    Words alone cannot tell apart circuits that use different parallel edges,
    so states are compared by their half-edge traces up to rotation.
    """
    keys = []
    for trace in c.traces:
        m = len(trace) // 2
        keys.append(min(trace[2 * r :] + trace[: 2 * r] for r in range(m)))
    return tuple(sorted(keys))


def strip_signs(c: SignedEulerSystem) -> tuple[tuple[str, ...], ...]:
    return tuple(canonical_rotation([o.vertex for o in word]) for word in c.components)


def edge_directions(c: SignedEulerSystem) -> frozenset[tuple[int, int]]:
    """Directed edges of ``c`` as (tail half-edge, head half-edge)."""
    return frozenset(
        (trace[2 * i], trace[2 * i + 1]) for trace in c.traces for i in range(len(trace) // 2)
    )


def flip_vertices(c: SignedEulerSystem, vertices: Iterable[str]) -> SignedEulerSystem:
    """Swap the + and - occurrences of every vertex in ``vertices``."""
    flip = set(vertices)
    unknown = flip - set(c.graph.vertices)
    if unknown:
        raise GraphStructureError(f"vertex {sorted(unknown)[0]} is not in the graph")
    words = [
        tuple(o.flipped() if o.vertex in flip else o for o in word) for word in c.components
    ]
    return make_euler_system(c.graph, words, c.traces)


def all_signings(c: SignedEulerSystem) -> Iterator[SignedEulerSystem]:
    """Every signing of ``c``, flipping subsets of the sorted vertex list."""
    order = c.graph.sorted_vertices
    for mask in product((False, True), repeat=len(order)):
        yield flip_vertices(c, (v for v, f in zip(order, mask) if f))


# =============================================================================
# Components and Euler systems
# =============================================================================


def to_networkx(g: FourRegularGraph) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    graph.add_nodes_from(g.vertices)
    for a, b in g.edges():
        graph.add_edge(g.vertex_of(a), g.vertex_of(b), key=a)
    return graph


def connected_components(g: FourRegularGraph) -> list[tuple[str, ...]]:
    """Vertex sets of the components, each sorted, ordered by least vertex id."""
    components = [tuple(sorted(c)) for c in nx.connected_components(to_networkx(g))]
    return sorted(components, key=lambda c: c[0])


def component_count(g: FourRegularGraph) -> int:
    return nx.number_connected_components(to_networkx(g))


def euler_system(g: FourRegularGraph) -> SignedEulerSystem:
    """One Euler circuit per component, built with Hierholzer's splice.

    Each step leaves on the least unused half-edge; the first emitted
    occurrence of every vertex is signed +.
    """
    incident = g.incidence
    used: set[int] = set()
    words: list[tuple[SignedOccurrence, ...]] = []
    traces: list[tuple[int, ...]] = []

    for component in connected_components(g):
        start = component[0]
        stack: list[tuple[str, tuple[int, int] | None]] = [(start, None)]
        popped: list[tuple[str, tuple[int, int] | None]] = []
        while stack:
            vertex, via = stack[-1]
            free = [h for h in incident[vertex] if min(h, g.mate(h)) not in used]
            if free:
                h = min(free)
                used.add(min(h, g.mate(h)))
                stack.append((g.vertex_of(g.mate(h)), (h, g.mate(h))))
            else:
                popped.append(stack.pop())
        popped.reverse()
        trace = tuple(h for _, via in popped[1:] for h in via)  # type: ignore[union-attr]
        vertices = [v for v, _ in popped[:-1]]
        seen: set[str] = set()
        word = []
        for v in vertices:
            word.append(SignedOccurrence(vertex=v, sign="-" if v in seen else "+"))
            seen.add(v)
        words.append(tuple(word))
        traces.append(trace)

    system = make_euler_system(g, words, traces)
    logger.debug("euler system: %s", system.words())
    return system


def realize_euler_system(
    g: FourRegularGraph, words: Sequence[Sequence[SignedOccurrence]]
) -> SignedEulerSystem:
    """Place double occurrence words onto the half-edges of ``g``.

    Depth-first with backtracking on an explicit stack, trying the least
    half-edge first. With parallel edges several placements can exist; the
    first one is returned.
    """
    incident = g.incidence
    if sum(len(w) for w in words) != g.edge_count:
        raise GraphStructureError("the words do not use every edge of the graph")
    flat = [(k, i) for k, w in enumerate(words) for i in range(len(w))]
    used: set[int] = set()
    chosen: list[tuple[int, int]] = []

    def candidates(step: int) -> Iterator[tuple[int, int]]:
        k, i = flat[step]
        word = words[k]
        here, there = word[i].vertex, word[(i + 1) % len(word)].vertex
        if here not in incident:
            raise GraphStructureError(f"vertex {here} is not in the graph")
        return iter([(h, g.mate(h)) for h in incident[here] if g.vertex_of(g.mate(h)) == there])

    # frames[d] holds the untried half-edges for step d; chosen[d] is the one in use
    frames = [candidates(0)] if flat else []
    while frames and len(chosen) < len(flat):
        if len(chosen) == len(frames):
            h, mate = chosen.pop()
            used.discard(min(h, mate))
        pick = next((pair for pair in frames[-1] if min(pair) not in used), None)
        if pick is None:
            frames.pop()
            continue
        used.add(min(pick))
        chosen.append(pick)
        if len(chosen) < len(flat):
            frames.append(candidates(len(chosen)))

    if len(chosen) < len(flat):
        raise GraphStructureError("the words do not describe an Euler system of this graph")
    traces: list[tuple[int, ...]] = []
    offset = 0
    for w in words:
        traces.append(tuple(h for pair in chosen[offset : offset + len(w)] for h in pair))
        offset += len(w)
    return make_euler_system(g, words, traces)



def realize_text(g: FourRegularGraph, text: str) -> SignedEulerSystem:
    """Realize the ``dow`` lines of ``text`` on ``g``."""
    words = []
    for number, line in _content_lines(text):
        match = _DOW_LINE.match(line)
        if match is None:
            raise GraphFormatError("expected 'dow <name>: tok tok ...'", number, line.split()[0])
        words.append(sign_word([parse_token(t, number) for t in match["body"].split()], number))
    return realize_euler_system(g, words)


def graph_signature(g: FourRegularGraph) -> str:
    return f"{len(g.vertices)} vertices, {g.edge_count} edges, {component_count(g)} component(s)"
