"""Worked examples with known matrices, shared by the test modules."""

from app.models.graph import SignedEulerSystem
from app.models.partition import CircuitPartition, TransitionLabel
from app.services.core_graph import parse_document, realize_text
from app.services.partitions import euler_partition, partition_from_labels

PHI, CHI, PSI = TransitionLabel.PHI, TransitionLabel.CHI, TransitionLabel.PSI

# ---------------------------------------------------------------------------
# Graph texts
# ---------------------------------------------------------------------------

LOOP = "dow C: v v\n"
DOUBLED_TRIANGLE = "dow C: a+ b- c+ a- b+ c-\n"
K5 = "dow C: a b d c a e c b e d\n"
K5_PRIME = "dow C: a b c d e c a d b e\n"
EIGHT = "dow C: e- a- b- f- e+ h- g- f+ a+ d- h+ c- b+ g+ c+ d+\n"
TWO_COMPONENTS = "dow A: a b a b\ndow B: c d c d\n"

# Signed versions of C = abdcaecbed
K5_FIRST_SIGNING = "dow C: a- b- d- c- a+ e- c+ b+ e+ d+\n"
K5_SECOND_SIGNING = "dow C: a- b+ d+ c- a+ e- c+ b- e+ d-\n"

# C' and C'' with their displayed signings
K5_C_PRIME_SIGNED = "dow C: a- b+ c- d+ e- c+ a+ d- b- e+\n"
K5_C_DOUBLE_PRIME_SIGNED = "dow C: a+ b- e- c- d- b+ c+ a- d+ e+\n"

# Transposition example
TRANSPOSITION_C = "dow C: a- e- c+ b+ d+ c- a+ b- e+ d-\n"
TRANSPOSITION_C_CD = "dow C: a- e- c+ a+ b- e+ d- c- b+ d+\n"

FIXTURE_GRAPHS = {
    "loop": LOOP,
    "doubled-triangle": DOUBLED_TRIANGLE,
    "k5": K5,
    "two-components": TWO_COMPONENTS,
}

# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

ALL_ONES_3 = ((1, 1, 1), (1, 1, 1), (1, 1, 1))

EIGHT_LABELS = {
    "a": PHI,
    "b": PSI,
    "c": PSI,
    "d": PSI,
    "e": CHI,
    "f": PSI,
    "g": CHI,
    "h": PSI,
}

EIGHT_STANDARD = (
    (1, 1, 0, 0, 1, 2, -1, 1),
    (0, 1, 1, 1, 1, 2, -1, 2),
    (0, 1, 1, 0, 0, 0, 1, 0),
    (0, 1, 2, 1, 0, 0, 1, 1),
    (0, 1, 0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 1, 1, -1, 1),
    (0, 1, 1, 1, 0, 1, 0, 1),
    (0, 0, 0, 1, 0, 1, -1, 1),
)

# Columns of the vertex-cocycle matrix of the directed touch-graph,
# in no particular circuit order.
EIGHT_COCYCLE_COLUMNS = (
    (0, 1, -1, 1, 1, -1, 0, 0),
    (0, -1, 0, 0, 0, 1, 1, 0),
    (0, 0, 1, 0, 0, 0, -1, -1),
    (0, 0, 0, -1, -1, 0, 0, 1),
)

K5_FIRST_STANDARD = (
    (1, 1, -1, -1, 0),
    (1, 1, 0, -1, 1),
    (1, 0, 0, 0, 1),
    (1, 1, 0, 0, 2),
    (0, 1, 1, 0, 1),
)
K5_FIRST_INVERSE = (
    (1, -1, 2, -1, 1),
    (1, -1, 0, 0, 1),
    (0, 0, 1, -1, 1),
    (1, -2, 1, 0, 1),
    (-1, 1, -1, 1, -1),
)
K5_SECOND_STANDARD = (
    (1, 1, -1, 1, 0),
    (1, 1, 0, -1, 1),
    (1, 0, 0, 0, 1),
    (1, 1, 0, 0, 0),
    (0, 1, 1, 0, 1),
)
# Three times the inverse
K5_SECOND_INVERSE_TIMES_3 = (
    (-1, -1, 2, 3, -1),
    (1, 1, -2, 0, 1),
    (-2, -2, 1, 3, 1),
    (1, -2, 1, 0, 1),
    (1, 1, 1, -3, 1),
)

K5_PRIME_TO_DOUBLE_PRIME = (
    (1, 1, 0, 1, -1),
    (0, 0, 0, 0, 1),
    (0, 0, 0, 1, -1),
    (0, 0, -1, 0, 1),
    (0, -1, 1, -1, 0),
)
K5_DOUBLE_PRIME_TO_PRIME = (
    (1, 0, 0, 1, 1),
    (0, 0, -1, -1, -1),
    (0, 1, 0, -1, 0),
    (0, 1, 1, 0, 0),
    (0, 1, 0, 0, 0),
)

TRANSPOSITION_STANDARD = (
    (1, 1, 0, 1, 1),
    (1, 1, 1, -1, 2),
    (2, 1, 0, -1, 2),
    (1, 1, 1, 0, 1),
    (1, 2, 0, 1, 1),
)
TRANSPOSITION_CD_STANDARD = (
    (1, 0, 0, 0, 1),
    (0, 1, 0, 0, 1),
    (1, 1, 1, 0, 1),
    (0, 1, 0, 1, 0),
    (1, 1, 0, 0, 1),
)

# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def system(text: str) -> SignedEulerSystem:
    c = parse_document(text).euler_system
    assert c is not None
    return c


def on_graph(c: SignedEulerSystem, text: str) -> SignedEulerSystem:
    """Realize another Euler system, given as words, on the graph of ``c``."""
    return realize_text(c.graph, text)


def as_partition(c: SignedEulerSystem, text: str) -> CircuitPartition:
    return euler_partition(on_graph(c, text))


def labelled(c: SignedEulerSystem, labels: dict[str, TransitionLabel]) -> CircuitPartition:
    return partition_from_labels(c, labels)


def uniform(c: SignedEulerSystem, label: TransitionLabel) -> CircuitPartition:
    return partition_from_labels(c, dict.fromkeys(c.graph.vertices, label))
