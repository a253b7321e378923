"""Interlacement matrices of an Euler system and the standard form M0(C, P).

Every V(F)-indexed matrix has its rows and columns in sorted vertex order.
The standard form is built twice: entry by entry from the case table, and
by tracing the first fundamental circuit of each vertex through the
directed touch-graph. The two constructions must agree.
"""

import logging
from collections.abc import Mapping

from app.errors import GraphStructureError
from app.models.graph import SignedEulerSystem, SignedOccurrence
from app.models.matrix import BlockDecomposition, FundamentalCircuitPair, Gf2Matrix, IntMatrix
from app.models.partition import CircuitPartition, TransitionLabel
from app.services.core_graph import flip_vertices
from app.services.cycles import walk_tally
from app.services.partitions import label_transitions, project_walk, touch_graph

logger = logging.getLogger(__name__)

PHI, CHI, PSI = TransitionLabel.PHI, TransitionLabel.CHI, TransitionLabel.PSI

# =============================================================================
# Word helpers
# =============================================================================


def _positions(c: SignedEulerSystem, v: str) -> tuple[int, int, int]:
    """(component, index of v+, index of v-)."""
    k, plus = c.locate(v, "+")
    _, minus = c.locate(v, "-")
    return k, plus, minus


def interlaced(c: SignedEulerSystem, v: str, w: str) -> bool:
    """True when one circuit of ``c`` reads v ... w ... v ... w."""
    if v == w:
        return False
    k, v1, v2 = _positions(c, v)
    kw, w1, w2 = _positions(c, w)
    if k != kw:
        return False
    lo, hi = sorted((v1, v2))
    return (lo < w1 < hi) != (lo < w2 < hi)


def segment_after_minus(c: SignedEulerSystem, v: str) -> list[SignedOccurrence]:
    """Occurrences strictly between v- and v+, reading forward from v-."""
    k, plus, minus = _positions(c, v)
    word = c.components[k]
    m = len(word)
    return [word[(minus + j) % m] for j in range(1, (plus - minus) % m)]


def labels_by_class(
    labels: Mapping[str, TransitionLabel],
) -> tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]:
    """Sorted vertex ids with phi, chi and psi labels."""
    order = sorted(labels)
    return (
        tuple(v for v in order if labels[v] is PHI),
        tuple(v for v in order if labels[v] is CHI),
        tuple(v for v in order if labels[v] is PSI),
    )


# =============================================================================
# GF(2) matrices
# =============================================================================


def interlacement(c: SignedEulerSystem) -> Gf2Matrix:
    order = c.graph.sorted_vertices
    entries = [[int(interlaced(c, v, w)) for w in order] for v in order]
    return Gf2Matrix.from_lists(order, order, entries)


def reduced_interlacement(c: SignedEulerSystem, p: CircuitPartition) -> Gf2Matrix:
    """Delete phi rows and columns; put 1 on the diagonal at psi vertices."""
    labels = label_transitions(c, p)
    keep = tuple(v for v in c.graph.sorted_vertices if labels[v] is not PHI)
    entries = [
        [1 if v == w and labels[v] is PSI else int(interlaced(c, v, w)) for w in keep]
        for v in keep
    ]
    return Gf2Matrix.from_lists(keep, keep, entries)


def modified_interlacement(c: SignedEulerSystem, p: CircuitPartition) -> Gf2Matrix:
    """M(C, P): psi diagonals become 1; a phi column becomes the unit vector."""
    labels = label_transitions(c, p)
    order = c.graph.sorted_vertices
    entries = []
    for v in order:
        row = []
        for w in order:
            if labels[w] is PHI:
                row.append(int(v == w))
            elif v == w:
                row.append(int(labels[w] is PSI))
            else:
                row.append(int(interlaced(c, v, w)))
        entries.append(row)
    return Gf2Matrix.from_lists(order, order, entries)


# =============================================================================
# Integer matrices
# =============================================================================


def signed_interlacement(c: SignedEulerSystem) -> IntMatrix:
    """+1 when v+ w- v- w+ is the cyclic order, -1 for v+ w+ v- w-, else 0."""
    order = c.graph.sorted_vertices
    entries = []
    for v in order:
        k, plus, minus = _positions(c, v)
        m = len(c.components[k])
        span = (minus - plus) % m
        row = []
        for w in order:
            if not interlaced(c, v, w):
                row.append(0)
                continue
            _, w_plus, _ = _positions(c, w)
            # w+ inside the v+ ... v- stretch means v+ w+ v- w-
            row.append(-1 if (w_plus - plus) % m < span else 1)
        entries.append(row)
    return IntMatrix(rows=order, cols=order, entries=tuple(tuple(r) for r in entries))


def standard_form(c: SignedEulerSystem, p: CircuitPartition) -> IntMatrix:
    """M0(C, P) evaluated from the entry case table."""
    labels = label_transitions(c, p)
    order = c.graph.sorted_vertices
    index = {v: j for j, v in enumerate(order)}
    rows = []
    for v in order:
        row = [0] * len(order)
        row[index[v]] = 0 if labels[v] is CHI else 1
        for occ in segment_after_minus(c, v):
            w = occ.vertex
            if w == v or labels[w] is PHI:
                continue
            if labels[w] is CHI:
                row[index[w]] += 1 if occ.sign == "+" else -1
            else:
                row[index[w]] += 1
        rows.append(tuple(row))
    return IntMatrix(rows=order, cols=order, entries=tuple(rows))


def fundamental_circuits(c: SignedEulerSystem, v: str) -> FundamentalCircuitPair:
    """Split the circuit through ``v`` at its two passages.

    ``c1`` leaves v- on h4 and returns to v+ on h1; ``c2`` leaves v+ on h2
    and returns to v- on h3.
    """
    k, plus, minus = _positions(c, v)
    word, trace = c.components[k], c.traces[k]
    m = len(word)

    def run(start: int, stop: int) -> tuple[tuple[int, ...], tuple[str, ...]]:
        length = (stop - start) % m
        edges = [(start + j) % m for j in range(length)]
        return (
            tuple(h for i in edges for h in trace[2 * i : 2 * i + 2]),
            tuple(str(word[i]) for i in edges),
        )

    c1, c1_word = run(minus, plus)
    c2, c2_word = run(plus, minus)
    return FundamentalCircuitPair(vertex=v, c1=c1, c2=c2, c1_word=c1_word, c2_word=c2_word)


def standard_form_by_tracing(c: SignedEulerSystem, p: CircuitPartition) -> IntMatrix:
    """Row v is the signed edge tally of the image of C1(C, v) in the directed touch-graph."""
    digraph = touch_graph(p, c).directed()
    order = c.graph.sorted_vertices
    rows = []
    for v in order:
        walk = project_walk(fundamental_circuits(c, v).c1, p, c)
        tally = walk_tally(walk, digraph)
        rows.append(tuple(tally[w] for w in order))
    return IntMatrix(rows=order, cols=order, entries=tuple(rows))


# =============================================================================
# Sign flips and blocks
# =============================================================================


def flip_sign(c: SignedEulerSystem, v: str) -> SignedEulerSystem:
    """Interchange the + and - occurrences of ``v``."""
    if v not in c.graph.incidence:
        raise GraphStructureError(f"vertex {v} is not in the graph")
    return flip_vertices(c, [v])


def predict_flip(m: IntMatrix, labels: Mapping[str, TransitionLabel], v: str) -> IntMatrix:
    """Standard form after flipping ``v``, from the three-change rule.

    A chi column v is negated; in row v a chi entry is negated and a psi
    entry has 0 and 2 swapped.
    """
    entries = [list(row) for row in m.entries]
    j = m.cols.index(v)
    if labels[v] is CHI:
        for row in entries:
            row[j] = -row[j]
    i = m.rows.index(v)
    for col, w in enumerate(m.cols):
        if w == v:
            continue
        if labels[w] is CHI:
            entries[i][col] = -entries[i][col]
        elif labels[w] is PSI and entries[i][col] in (0, 2):
            entries[i][col] = 2 - entries[i][col]
    return IntMatrix(rows=m.rows, cols=m.cols, entries=tuple(tuple(r) for r in entries))


def _within(block: IntMatrix, allowed: set[int]) -> bool:
    return block.values() <= allowed


def submatrix_blocks(m: IntMatrix, labels: Mapping[str, TransitionLabel]) -> BlockDecomposition:
    """Split a standard form into phi/chi/psi blocks and check their shape claims.

    Rows and columns are ordered phi, chi, psi. The blocks are I, M1, M2 in
    the phi rows, M3, M4 in the chi rows and M5, M6 in the psi rows; the
    blocks below I must vanish.
    """
    phi, chi, psi = labels_by_class(labels)
    blocks = {
        "I": m.submatrix(phi, phi),
        "M1": m.submatrix(phi, chi),
        "M2": m.submatrix(phi, psi),
        "Z_chi": m.submatrix(chi, phi),
        "M3": m.submatrix(chi, chi),
        "M4": m.submatrix(chi, psi),
        "Z_psi": m.submatrix(psi, phi),
        "M5": m.submatrix(psi, chi),
        "M6": m.submatrix(psi, psi),
    }
    failures: list[str] = []
    n = len(phi)
    if blocks["I"].entries != tuple(tuple(int(i == j) for j in range(n)) for i in range(n)):
        failures.append("I is not an identity matrix")
    if not _within(blocks["Z_chi"], {0}) or not _within(blocks["Z_psi"], {0}):
        failures.append("entries below I are not zero")
    if not _within(blocks["M1"], {-1, 0, 1}):
        failures.append("M1 has an entry outside {-1, 0, 1}")
    if not _within(blocks["M2"], {0, 1, 2}):
        failures.append("M2 has an entry outside {0, 1, 2}")
    m3 = blocks["M3"]
    if not _within(m3, {-1, 0, 1}):
        failures.append("M3 has an entry outside {-1, 0, 1}")
    if any(m3.entries[i][j] != -m3.entries[j][i] for i in range(len(chi)) for j in range(len(chi))):
        failures.append("M3 is not skew-symmetric")
    m4, m5 = blocks["M4"], blocks["M5"]
    if not _within(m4, {0, 1, 2}):
        failures.append("M4 has an entry outside {0, 1, 2}")
    if not _within(m5, {-1, 0, 1}):
        failures.append("M5 has an entry outside {-1, 0, 1}")
    for i in range(len(chi)):
        for j in range(len(psi)):
            expected = {0} if m4.entries[i][j] in (0, 2) else {-1, 1}
            if m5.entries[j][i] not in expected:
                failures.append(f"M4/M5 symmetry fails at ({chi[i]}, {psi[j]})")
    m6 = blocks["M6"]
    for i in range(len(psi)):
        if m6.entries[i][i] != 1:
            failures.append(f"M6 diagonal at {psi[i]} is not 1")
        for j in range(len(psi)):
            if i != j and m6.entries[i][j] not in (0, 1, 2):
                failures.append(f"M6 entry ({psi[i]}, {psi[j]}) outside {{0, 1, 2}}")
            if (m6.entries[i][j] - m6.entries[j][i]) % 2:
                failures.append(f"M6 is not symmetric mod 2 at ({psi[i]}, {psi[j]})")
    return BlockDecomposition(phi=phi, chi=chi, psi=psi, blocks=blocks, failures=tuple(failures))


def oriented_blocks(c: SignedEulerSystem, p: CircuitPartition) -> tuple[IntMatrix, IntMatrix]:
    """(J, I_R(C, P)): the phi-by-chi and chi-by-chi submatrices of I_R(C)."""
    phi, chi, _ = labels_by_class(label_transitions(c, p))
    signed = signed_interlacement(c)
    return signed.submatrix(phi, chi), signed.submatrix(chi, chi)
