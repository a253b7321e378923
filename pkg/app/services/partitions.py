"""Transitions, circuit partitions, touch-graphs and the walk projection.

Half-edge naming at a vertex v follows the signed Euler system C: the +
passage enters on h1 and leaves on h2, the - passage enters on h3 and leaves
on h4. Relative to C a transition is labelled

    phi  {h1, h2} {h3, h4}   (follow C)
    chi  {h1, h4} {h2, h3}   (reroute consistently with C's orientation)
    psi  {h1, h3} {h2, h4}   (reroute inconsistently)

Partitions store pairings only; labels are always derived.
"""

import logging
import re
from collections.abc import Iterator, Mapping, Sequence
from itertools import product
from typing import Literal

import networkx as nx

from app.errors import GraphFormatError, GraphStructureError, InvariantViolation
from app.models.cycles import DirectedWalk, WalkStep
from app.models.graph import FourRegularGraph, SignedEulerSystem
from app.models.partition import CircuitPartition, TouchEdge, TouchGraph, Transition, TransitionLabel
from app.services.core_graph import connected_components, euler_system

logger = logging.getLogger(__name__)

LABEL_ORDER: tuple[TransitionLabel, ...] = (
    TransitionLabel.PHI,
    TransitionLabel.CHI,
    TransitionLabel.PSI,
)
ORIENTED_LABELS: tuple[TransitionLabel, ...] = (TransitionLabel.PHI, TransitionLabel.CHI)

PassageKind = Literal["a", "b", "c"]

_LABEL_LINE = re.compile(r"^(?P<vertex>\S+)\s*=\s*(?P<label>\S+)(?:\s*@\s*(?P<name>\S+))?$")
_RAW_LINE = re.compile(
    r"^(?P<vertex>\S+)\s*:\s*\(\s*(\d+)\s+(\d+)\s*\)\s*\(\s*(\d+)\s+(\d+)\s*\)$"
)
_LABEL_NAMES: dict[str, TransitionLabel] = {
    "phi": TransitionLabel.PHI,
    "φ": TransitionLabel.PHI,
    "chi": TransitionLabel.CHI,
    "χ": TransitionLabel.CHI,
    "psi": TransitionLabel.PSI,
    "ψ": TransitionLabel.PSI,
}

# =============================================================================
# Transitions and labels
# =============================================================================


def passage_half_edges(c: SignedEulerSystem, v: str) -> tuple[int, int, int, int]:
    """(h1, h2, h3, h4) at ``v`` with respect to the signing of ``c``."""
    return c.half_edge_names(v)


def transition_from_label(c: SignedEulerSystem, v: str, label: TransitionLabel) -> Transition:
    h1, h2, h3, h4 = passage_half_edges(c, v)
    if label is TransitionLabel.PHI:
        pairs = ((h1, h2), (h3, h4))
    elif label is TransitionLabel.CHI:
        pairs = ((h1, h4), (h2, h3))
    else:
        pairs = ((h1, h3), (h2, h4))
    return Transition(vertex=v, pairs=pairs)


def label_of(c: SignedEulerSystem, t: Transition) -> TransitionLabel:
    h1, h2, h3, h4 = passage_half_edges(c, t.vertex)
    if {h for pair in t.pairs for h in pair} != {h1, h2, h3, h4}:
        raise GraphStructureError(f"transition pairs are not incident on vertex {t.vertex}")
    partner = t.partner(h1)
    if partner == h2:
        return TransitionLabel.PHI
    if partner == h4:
        return TransitionLabel.CHI
    return TransitionLabel.PSI


def label_transitions(c: SignedEulerSystem, p: CircuitPartition) -> dict[str, TransitionLabel]:
    return {v: label_of(c, p.transitions[v]) for v in c.graph.sorted_vertices}


def orientation_consistent(c: SignedEulerSystem, p: CircuitPartition) -> bool:
    """True when ``p`` uses no psi transition with respect to ``c``."""
    return TransitionLabel.PSI not in label_transitions(c, p).values()


# =============================================================================
# Tracing
# =============================================================================


def trace_circuits(
    g: FourRegularGraph, transitions: Mapping[str, Transition]
) -> CircuitPartition:
    """Follow the transitions; each circuit starts by leaving on its least half-edge."""
    missing = set(g.vertices) - set(transitions)
    if missing:
        raise GraphStructureError(f"no transition at vertex {sorted(missing)[0]}")
    for v, t in transitions.items():
        if set(g.incidence.get(v, ())) != {h for pair in t.pairs for h in pair}:
            raise GraphStructureError(f"transition pairs are not incident on vertex {v}")

    visited: set[int] = set()
    circuits: list[tuple[int, ...]] = []
    for start in range(len(g.half_edges)):
        if start in visited:
            continue
        circuit: list[int] = []
        out = start
        while True:
            inn = g.mate(out)
            circuit.extend((out, inn))
            visited.update((out, inn))
            out = transitions[g.vertex_of(inn)].partner(inn)
            if out == start:
                break
        circuits.append(tuple(circuit))
    return CircuitPartition(graph=g, transitions=dict(transitions), circuits=tuple(circuits))


def partition_from_labels(
    c: SignedEulerSystem, labels: Mapping[str, TransitionLabel]
) -> CircuitPartition:
    transitions = {v: transition_from_label(c, v, labels[v]) for v in c.graph.vertices}
    return trace_circuits(c.graph, transitions)


def euler_partition(c: SignedEulerSystem) -> CircuitPartition:
    """The partition whose circuits are the circuits of ``c``."""
    return partition_from_labels(c, {v: TransitionLabel.PHI for v in c.graph.vertices})


def fundamental_partition(c: SignedEulerSystem, v: str) -> CircuitPartition:
    """Chi at ``v`` and phi elsewhere: the two fundamental circuits plus the rest of ``c``."""
    labels = {w: TransitionLabel.PHI for w in c.graph.vertices}
    labels[v] = TransitionLabel.CHI
    return partition_from_labels(c, labels)


def label_assignments(
    c: SignedEulerSystem, alphabet: Sequence[TransitionLabel] = LABEL_ORDER
) -> Iterator[dict[str, TransitionLabel]]:
    """Every labelling over ``alphabet``, lexicographic in sorted vertex order."""
    order = c.graph.sorted_vertices
    for labels in product(alphabet, repeat=len(order)):
        yield dict(zip(order, labels))


def enumerate_partitions(
    g: FourRegularGraph,
    c: SignedEulerSystem | None = None,
    alphabet: Sequence[TransitionLabel] = LABEL_ORDER,
) -> Iterator[CircuitPartition]:
    """All 3^|V| circuit partitions, in label order relative to ``c``.

    ``c`` defaults to ``euler_system(g)``. Restricting ``alphabet`` to phi and
    chi yields the orientation-consistent partitions.
    """
    reference = c if c is not None else euler_system(g)
    for labels in label_assignments(reference, alphabet):
        yield partition_from_labels(reference, labels)


# =============================================================================
# Touch-graphs
# =============================================================================


def touch_graph(p: CircuitPartition, c: SignedEulerSystem) -> TouchGraph:
    """Tch(P) with each e_v directed away from the circuit holding the image of h1."""
    edges = []
    for v in c.graph.sorted_vertices:
        h1 = passage_half_edges(c, v)[0]
        t = p.transitions[v]
        tail_pair = t.pair_of(h1)
        head_pair = next(pair for pair in t.pairs if pair != tail_pair)
        edges.append(
            TouchEdge(
                vertex=v,
                tail=p.circuit_index[h1],
                head=p.circuit_index[head_pair[0]],
                tail_pair=tail_pair,
                head_pair=head_pair,
            )
        )
    return TouchGraph(circuit_count=p.size, edges=tuple(edges))


def classify_passages(trace: Sequence[int], p: CircuitPartition) -> list[PassageKind]:
    """Classify each passage of a closed walk against ``p``.

    Passage ``i`` enters on ``trace[2i - 1]`` and leaves on ``trace[2i]``.
    ``c`` means ``p`` pairs the two half-edges, ``a`` that the passage
    crosses between two circuits and ``b`` that it returns to the same one.
    """
    g = p.graph
    kinds: list[PassageKind] = []
    for i in range(len(trace) // 2):
        entering, leaving = trace[2 * i - 1], trace[2 * i]
        t = p.transitions[g.vertex_of(leaving)]
        if t.partner(entering) == leaving:
            kinds.append("c")
        elif p.circuit_index[entering] == p.circuit_index[leaving]:
            kinds.append("b")
        else:
            kinds.append("a")
    return kinds


def project_walk(trace: Sequence[int], p: CircuitPartition, c: SignedEulerSystem) -> DirectedWalk:
    """Image of a closed walk in the touch-graph of ``p``.

    Every passage not paired by ``p`` becomes one traversal of e_x, forward
    when the walk arrives through the pair holding h1. The result is empty
    when every passage follows ``p``.
    """
    g = c.graph
    if len(trace) % 2 or any(g.mate(trace[2 * i]) != trace[2 * i + 1] for i in range(len(trace) // 2)):
        raise GraphStructureError("not a closed walk in the leave/enter layout")
    steps: list[WalkStep] = []
    start: int | None = None
    for i, kind in enumerate(classify_passages(trace, p)):
        if kind == "c":
            continue
        entering = trace[2 * i - 1]
        x = g.vertex_of(entering)
        h1 = passage_half_edges(c, x)[0]
        if start is None:
            start = p.circuit_index[entering]
        steps.append(WalkStep(edge=x, forward=entering in p.transitions[x].pair_of(h1)))
    return DirectedWalk(start=start, steps=tuple(steps))


def components_correspondence(
    g: FourRegularGraph, p: CircuitPartition, c: SignedEulerSystem
) -> list[tuple[tuple[str, ...], tuple[int, ...]]]:
    """Pair each component of ``g`` with the touch-graph component sharing its vertices.

    A touch-graph component corresponds to the graph component whose vertex
    set equals the set of touch-edges it contains.
    """
    tch = touch_graph(p, c)
    multigraph = nx.MultiGraph()
    multigraph.add_nodes_from(range(tch.circuit_count))
    for e in tch.edges:
        multigraph.add_edge(e.tail, e.head, key=e.vertex)
    by_edges: dict[tuple[str, ...], tuple[int, ...]] = {}
    for nodes in nx.connected_components(multigraph):
        edge_set = tuple(sorted(k for _, _, k in multigraph.edges(nodes, keys=True)))
        by_edges[edge_set] = tuple(sorted(nodes))
    pairs = []
    for component in connected_components(g):
        if component not in by_edges:
            raise InvariantViolation(
                f"no touch-graph component carries exactly the edges {component}"
            )
        pairs.append((component, by_edges.pop(component)))
    if by_edges:
        raise InvariantViolation("touch-graph has more components than the graph")
    return pairs


# =============================================================================
# Transition files
# =============================================================================


def parse_partition(
    text: str,
    graph: FourRegularGraph,
    c: SignedEulerSystem | None = None,
    euler_name: str | None = None,
) -> CircuitPartition:
    """Parse ``v = phi|chi|psi [@ name]`` and ``v : (h h)(h h)`` lines."""
    transitions: dict[str, Transition] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        vertex: str
        if (match := _LABEL_LINE.match(line)) is not None:
            vertex = match["vertex"]
            label = _LABEL_NAMES.get(match["label"].lower())
            if label is None:
                raise GraphFormatError("expected phi, chi or psi", number, match["label"])
            if c is None:
                raise GraphFormatError(
                    "labelled transitions need an Euler system", number, match["label"]
                )
            name = match["name"]
            if name is not None and euler_name is not None and name != euler_name:
                raise GraphFormatError(
                    f"labels refer to Euler system {name!r}, not {euler_name!r}", number, name
                )
            if vertex not in graph.incidence:
                raise GraphFormatError("unknown vertex", number, vertex)
            transition = transition_from_label(c, vertex, label)
        elif (match := _RAW_LINE.match(line)) is not None:
            vertex = match["vertex"]
            a, b, x, y = (int(match.group(k)) for k in range(2, 6))
            if vertex not in graph.incidence:
                raise GraphFormatError("unknown vertex", number, vertex)
            if {a, b, x, y} != set(graph.incidence[vertex]):
                raise GraphFormatError(
                    f"half-edges must be the four at {vertex}: {graph.incidence[vertex]}",
                    number,
                    line.split(":", 1)[1].strip(),
                )
            transition = Transition(vertex=vertex, pairs=((a, b), (x, y)))
        else:
            raise GraphFormatError(
                "expected 'v = phi|chi|psi' or 'v : (h h)(h h)'", number, line.split()[0]
            )
        if vertex in transitions:
            raise GraphFormatError("second transition for vertex", number, vertex)
        transitions[vertex] = transition
    for v in graph.sorted_vertices:
        if v not in transitions:
            raise GraphFormatError("no transition given for vertex", None, v)
    return trace_circuits(graph, transitions)


def serialize_partition(
    p: CircuitPartition, c: SignedEulerSystem | None = None, euler_name: str | None = None
) -> str:
    """Label lines when ``c`` is given, raw half-edge lines otherwise."""
    lines = []
    for v in p.graph.sorted_vertices:
        t = p.transitions[v]
        if c is None:
            lines.append(f"{v} : {t}")
        else:
            suffix = f" @ {euler_name}" if euler_name else ""
            lines.append(f"{v} = {label_of(c, t).value}{suffix}")
    return "\n".join(lines) + "\n"


def circuit_words(p: CircuitPartition) -> list[str]:
    """Vertex sequence of each circuit, one vertex per passage."""
    g = p.graph
    return [
        " ".join(g.vertex_of(circuit[2 * i]) for i in range(len(circuit) // 2))
        for circuit in p.circuits
    ]
