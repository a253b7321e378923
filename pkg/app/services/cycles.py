"""Cycle and cocycle spaces of directed multigraphs.

Edge vectors are indexed by the graph's edge order. The cycle basis is the
set of fundamental cycles of a breadth-first spanning forest: each root is
the least node of its component, neighbours are visited in increasing
order and, among parallel edges, the first in edge order joins the tree.
"""

from collections.abc import Iterable

import networkx as nx

from app.errors import GraphStructureError
from app.models.cycles import DirectedMultigraph, DirectedWalk, EdgeVector
from app.models.matrix import IntMatrix
from app.models.reports import CheckReport
from app.services.linalg import int_matmul, rat_rank

# =============================================================================
# Tallies
# =============================================================================


def walk_tally(walk: DirectedWalk, d: DirectedMultigraph) -> EdgeVector:
    """z_D(W): +1 per traversal along an edge's direction, -1 against it."""
    coordinates = dict.fromkeys(d.edge_ids, 0)
    current = walk.start
    for step in walk.steps:
        edge = d.edge_by_id.get(step.edge)
        if edge is None:
            raise GraphStructureError(f"walk uses unknown edge {step.edge}")
        origin, target = (edge.tail, edge.head) if step.forward else (edge.head, edge.tail)
        if current != origin:
            raise GraphStructureError(f"walk is not connected at edge {step.edge}")
        current = target
        coordinates[step.edge] += 1 if step.forward else -1
    if current != walk.start:
        raise GraphStructureError("walk is not closed")
    return EdgeVector(edges=d.edge_ids, coordinates=tuple(coordinates.values()))


def vertex_cocycle(v: int, d: DirectedMultigraph) -> EdgeVector:
    """u_D({v}): +1 on non-loop edges leaving v, -1 on those entering it."""
    if v not in d.nodes:
        raise GraphStructureError(f"node {v} is not in the graph")
    return set_cocycle([v], d)


def set_cocycle(nodes: Iterable[int], d: DirectedMultigraph) -> EdgeVector:
    """u_D(X): +1 on edges leaving X, -1 on edges entering X."""
    inside = set(nodes)
    coordinates = []
    for e in d.edges:
        coordinates.append(int(e.tail in inside) - int(e.head in inside))
    return EdgeVector(edges=d.edge_ids, coordinates=tuple(coordinates))


def orthogonality_check(walk: DirectedWalk, nodes: Iterable[int], d: DirectedMultigraph) -> bool:
    return walk_tally(walk, d).dot(set_cocycle(nodes, d)) == 0


# =============================================================================
# Bases
# =============================================================================


def _undirected(d: DirectedMultigraph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(d.nodes)
    graph.add_edges_from((e.tail, e.head) for e in d.edges if not e.is_loop)
    return graph


def component_count(d: DirectedMultigraph) -> int:
    return nx.number_connected_components(_undirected(d))


def spanning_forest(d: DirectedMultigraph) -> list[str]:
    """Edge ids of the breadth-first spanning forest."""
    graph = _undirected(d)
    first_edge: dict[frozenset[int], str] = {}
    for e in d.edges:
        if not e.is_loop:
            first_edge.setdefault(frozenset((e.tail, e.head)), e.id)
    tree: list[str] = []
    for component in sorted(nx.connected_components(graph), key=min):
        root = min(component)
        for a, b in nx.bfs_edges(graph, root, sort_neighbors=sorted):
            tree.append(first_edge[frozenset((a, b))])
    return tree


def cycle_basis(d: DirectedMultigraph) -> list[EdgeVector]:
    """One fundamental cycle per non-tree edge, in edge order.

    The cycle of edge e runs along e and returns from its head to its tail
    through the forest; e carries coordinate +1.
    """
    tree_ids = set(spanning_forest(d))
    forest = nx.Graph()
    forest.add_nodes_from(d.nodes)
    for edge_id in tree_ids:
        e = d.edge_by_id[edge_id]
        forest.add_edge(e.tail, e.head, id=edge_id)
    basis = []
    for e in d.edges:
        if e.id in tree_ids:
            continue
        coordinates = dict.fromkeys(d.edge_ids, 0)
        coordinates[e.id] = 1
        path = nx.shortest_path(forest, e.head, e.tail)
        for a, b in zip(path, path[1:]):
            tree_edge = d.edge_by_id[forest.edges[a, b]["id"]]
            coordinates[tree_edge.id] += 1 if (tree_edge.tail, tree_edge.head) == (a, b) else -1
        basis.append(EdgeVector(edges=d.edge_ids, coordinates=tuple(coordinates.values())))
    return basis


def cycle_matrix(d: DirectedMultigraph) -> IntMatrix:
    """Z_S: one row per fundamental cycle, columns are edges."""
    basis = cycle_basis(d)
    return IntMatrix(
        rows=tuple(f"z{i + 1}" for i in range(len(basis))),
        cols=d.edge_ids,
        entries=tuple(z.coordinates for z in basis),
    )


def cocycle_matrix(d: DirectedMultigraph) -> IntMatrix:
    """U_V(G): rows are edges, column v is the vertex cocycle of v."""
    columns = [set_cocycle([v], d).coordinates for v in d.nodes]
    entries = tuple(
        tuple(column[i] for column in columns) for i in range(len(d.edges))
    )
    return IntMatrix(rows=d.edge_ids, cols=tuple(str(v) for v in d.nodes), entries=entries)


# =============================================================================
# Verification harnesses
# =============================================================================


def verify_duality(d: DirectedMultigraph, subject: str = "") -> CheckReport:
    """Z_S . U = 0 and the dimension counts of both spaces."""
    report = CheckReport(name="duality", subject=subject)
    z = cycle_matrix(d)
    u = cocycle_matrix(d)
    c = component_count(d)
    n_nodes, n_edges = len(d.nodes), len(d.edges)
    product = int_matmul(z, u)
    report.record("Z.U = 0", product.values() <= {0})
    rank_u = rat_rank(u)
    rank_z = rat_rank(z)
    report.record("rank U = |V| - c", rank_u == n_nodes - c, f"{rank_u} vs {n_nodes - c}")
    report.record(
        "rank Z = |E| - |V| + c", rank_z == n_edges - n_nodes + c, f"{rank_z} vs {n_edges - n_nodes + c}"
    )
    report.figures.update({"nodes": n_nodes, "edges": n_edges, "components": c})
    return report
