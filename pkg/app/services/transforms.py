"""Kappa-transforms, transpositions and their naturality checks.

Both rewrites act on one component word together with its half-edge
trace. A kappa-transform reverses one of the two closed trails between
the occurrences of v; the occurrences of v keep their positional signs and
every other occurrence keeps its sign. A transposition of an interlaced
pair reads the circuit as v+ T1 w+ T2 v- T3 w- T4 and returns
v+ T3 w- T2 v- T1 w+ T4, so every edge keeps its direction.
"""

import logging
import random
from collections import deque
from collections.abc import Callable, Iterator, Mapping, Sequence

from app.errors import InvariantViolation, NotInterlacedError, OrientationError
from app.models.graph import SignedEulerSystem, SignedOccurrence
from app.models.matrix import Gf2Matrix, IntMatrix
from app.models.partition import CircuitPartition, TransitionLabel
from app.models.reports import CheckReport, ReachabilityPath
from app.services.core_graph import edge_directions, make_euler_system, trail_key
from app.services.cycles import cycle_matrix
from app.services.linalg import (
    gf2_inverse,
    gf2_matmul,
    int_matmul,
    rat_det,
    rat_inverse,
    row_space_equal,
)
from app.services.matrices import (
    interlaced,
    modified_interlacement,
    signed_interlacement,
    standard_form,
)
from app.services.partitions import (
    euler_partition,
    label_transitions,
    orientation_consistent,
    touch_graph,
)

logger = logging.getLogger(__name__)

PHI, CHI, PSI = TransitionLabel.PHI, TransitionLabel.CHI, TransitionLabel.PSI

Edge = tuple[int, int]

# =============================================================================
# Rewrites
# =============================================================================


def _rotated(
    c: SignedEulerSystem, k: int, start: int
) -> tuple[list[SignedOccurrence], list[Edge]]:
    word, trace = c.components[k], c.traces[k]
    m = len(word)
    order = [(start + j) % m for j in range(m)]
    return [word[i] for i in order], [(trace[2 * i], trace[2 * i + 1]) for i in order]


def _replace(
    c: SignedEulerSystem, k: int, word: Sequence[SignedOccurrence], edges: Sequence[Edge]
) -> SignedEulerSystem:
    words = list(c.components)
    traces = list(c.traces)
    words[k] = tuple(word)
    traces[k] = tuple(h for edge in edges for h in edge)
    return make_euler_system(c.graph, words, traces)


def _reverse_from(c: SignedEulerSystem, k: int, start: int, stop: int) -> SignedEulerSystem:
    """Reverse the closed trail running from occurrence ``start`` to ``stop``."""
    m = len(c.components[k])
    q = (stop - start) % m
    word, edges = _rotated(c, k, start)
    new_word = [word[0], *reversed(word[1:q]), *word[q:]]
    new_edges = [(b, a) for a, b in reversed(edges[:q])] + edges[q:]
    return _replace(c, k, new_word, new_edges)


def kappa_transform(
    c: SignedEulerSystem, v: str
) -> tuple[SignedEulerSystem, SignedEulerSystem]:
    """Both kappa-transforms at ``v``: reverse C1(C, v), or reverse C2(C, v)."""
    k, plus = c.locate(v, "+")
    _, minus = c.locate(v, "-")
    return _reverse_from(c, k, minus, plus), _reverse_from(c, k, plus, minus)


def oriented_pair(c: SignedEulerSystem, v: str, w: str) -> tuple[str, str]:
    """Order ``v, w`` so that their circuit reads v+ ... w+ ... v- ... w-."""
    if not interlaced(c, v, w):
        raise NotInterlacedError(f"{v} and {w} are not interlaced")
    k, plus = c.locate(v, "+")
    _, minus = c.locate(v, "-")
    _, w_plus = c.locate(w, "+")
    m = len(c.components[k])
    if (w_plus - plus) % m < (minus - plus) % m:
        return v, w
    return w, v


def transposition(c: SignedEulerSystem, v: str, w: str) -> SignedEulerSystem:
    """C*(vw), signed v+ T3 w- T2 v- T1 w+ T4 from v+ T1 w+ T2 v- T3 w- T4."""
    first, second = oriented_pair(c, v, w)
    k, plus = c.locate(first, "+")
    m = len(c.components[k])
    a = (c.locate(second, "+")[1] - plus) % m
    b = (c.locate(first, "-")[1] - plus) % m
    d = (c.locate(second, "-")[1] - plus) % m
    word, edges = _rotated(c, k, plus)
    new_word = [
        word[0], *word[b + 1 : d], word[d], *word[a + 1 : b], word[b], *word[1:a], word[a], *word[d + 1 :]
    ]
    new_edges = edges[b:d] + edges[a:b] + edges[:a] + edges[d:]
    return _replace(c, k, new_word, new_edges)


def compose_kappas(c: SignedEulerSystem, vertices: Sequence[str]) -> Iterator[SignedEulerSystem]:
    """Every result of applying kappa-transforms at ``vertices`` in turn."""
    if not vertices:
        yield c
        return
    for nxt in kappa_transform(c, vertices[0]):
        yield from compose_kappas(nxt, vertices[1:])


# =============================================================================
# Label changes
# =============================================================================


def kappa_label_change(
    c: SignedEulerSystem, labels: Mapping[str, TransitionLabel], v: str
) -> dict[str, TransitionLabel]:
    """Labels relative to C*v: phi and psi swap at v, chi and psi swap at its interlaced vertices."""
    swap_v = {PHI: PSI, PSI: PHI, CHI: CHI}
    swap_w = {CHI: PSI, PSI: CHI, PHI: PHI}
    changed = {}
    for x, label in labels.items():
        if x == v:
            changed[x] = swap_v[label]
        elif interlaced(c, v, x):
            changed[x] = swap_w[label]
        else:
            changed[x] = label
    return changed


def transposition_label_change(
    labels: Mapping[str, TransitionLabel], v: str, w: str
) -> dict[str, TransitionLabel]:
    """Labels relative to C*(vw): phi and chi swap at v and at w."""
    swap = {PHI: CHI, CHI: PHI, PSI: PSI}
    return {x: swap[label] if x in (v, w) else label for x, label in labels.items()}


# =============================================================================
# Naturality
# =============================================================================


def _add_rows(m: Gf2Matrix, source: str, targets: Sequence[str]) -> Gf2Matrix:
    bits = list(m.bits)
    s = m.rows.index(source)
    for t in targets:
        bits[m.rows.index(t)] ^= bits[s]
    return m.model_copy(update={"bits": tuple(bits)})


def verify_kappa_naturality(
    c: SignedEulerSystem,
    v: str,
    p: CircuitPartition,
    others: Sequence[SignedEulerSystem] = (),
    subject: str = "",
) -> CheckReport:
    """GF(2) naturality of M(C, P) under kappa-transforms.

    For both C*v: the label changes, and M(C*v, P) equals M(C, P) with row v
    added to every row interlaced with v. For C' ranging over both C*v and
    ``others``: M(C', P) = M(C', C) M(C, P) and M(C, C') = M(C', C)^-1.
    """
    report = CheckReport(name="naturality", subject=subject)
    labels = label_transitions(c, p)
    base = modified_interlacement(c, p)
    partners = [x for x in c.graph.sorted_vertices if interlaced(c, v, x)]
    expected_rows = _add_rows(base, v, partners)
    c_as_partition = euler_partition(c)
    stars = kappa_transform(c, v)
    for i, star in enumerate(stars, start=1):
        report.record(
            f"labels after kappa {v}/{i}",
            label_transitions(star, p) == kappa_label_change(c, labels, v),
        )
        report.record(f"row additions at {v}/{i}", modified_interlacement(star, p) == expected_rows)
    for i, other in enumerate([*stars, *others], start=1):
        m_prime_c = modified_interlacement(other, c_as_partition)
        m_c_prime = modified_interlacement(c, euler_partition(other))
        report.record(
            f"M(C',P) = M(C',C).M(C,P) [{i}]",
            modified_interlacement(other, p) == gf2_matmul(m_prime_c, base),
        )
        report.record(f"M(C,C') = M(C',C)^-1 [{i}]", gf2_inverse(m_prime_c) == m_c_prime)
    return report


def verify_real_naturality(
    c: SignedEulerSystem, c_prime: SignedEulerSystem, p: CircuitPartition, subject: str = ""
) -> CheckReport:
    """Integer naturality of the standard form for two Euler systems."""
    report = CheckReport(name="real-naturality", subject=subject)
    m = standard_form(c, euler_partition(c_prime))
    det = rat_det(m)
    report.record("det M0(C,C') odd", det.numerator % 2 == 1, str(det))
    report.figures["det"] = str(det)
    if det == 0:
        return report
    adjugate = rat_inverse(m).scaled(det)
    integral = adjugate.is_integral()
    report.record("det . M0(C,C')^-1 integral", integral)
    if integral:
        report.record(
            "det . M0(C,C')^-1 reduces to M(C',C)",
            adjugate.to_int().mod2() == modified_interlacement(c_prime, euler_partition(c)),
        )
    product = int_matmul(standard_form(c_prime, euler_partition(c)), standard_form(c, p))
    report.record(
        "M0(C',C).M0(C,P) spans the cycle space",
        row_space_equal(product, cycle_matrix(touch_graph(p, c).directed())),
    )
    report.record(
        "M0(C',C).M0(C,P) reduces to M(C',P)",
        product.mod2() == modified_interlacement(c_prime, p),
    )
    return report


def verify_transposition_rows(
    c: SignedEulerSystem, v: str, w: str, p: CircuitPartition, subject: str = ""
) -> CheckReport:
    """Row operations taking M0(C, P) to M0(C*(vw), P) for psi-free P."""
    if not orientation_consistent(c, p):
        raise OrientationError("the partition uses a psi transition")
    first, second = oriented_pair(c, v, w)
    report = CheckReport(name="transposition", subject=subject)
    star = transposition(c, first, second)
    old = standard_form(c, p)
    new = standard_form(star, p)
    signed = signed_interlacement(c)
    rho_v, rho_w = old.row(first), old.row(second)
    report.record(f"rho_{first}(new) = rho_{second}(old)", new.row(first) == rho_w)
    report.record(f"rho_{second}(new) = -rho_{first}(old)", new.row(second) == tuple(-x for x in rho_v))
    for x in c.graph.sorted_vertices:
        if x in (first, second):
            continue
        a, b = signed.at(x, second), signed.at(x, first)
        expected = tuple(r + a * s - b * t for r, s, t in zip(old.row(x), rho_v, rho_w))
        report.record(f"rho_{x}", new.row(x) == expected)
    report.record(
        "labels",
        label_transitions(star, p)
        == transposition_label_change(label_transitions(c, p), first, second),
    )
    report.record("edge directions kept", edge_directions(star) == edge_directions(c))
    return report


def _delta(c_prime: SignedEulerSystem, corresponding: SignedEulerSystem) -> IntMatrix:
    order = c_prime.graph.sorted_vertices
    signs = [
        1 if c_prime.half_edge_names(x)[:2] == corresponding.half_edge_names(x)[:2] else -1
        for x in order
    ]
    n = len(order)
    return IntMatrix(
        rows=order,
        cols=order,
        entries=tuple(tuple(signs[i] if i == j else 0 for j in range(n)) for i in range(n)),
    )


def corresponding_signing(c: SignedEulerSystem, c_prime: SignedEulerSystem) -> SignedEulerSystem:
    """The signing of ``c_prime`` reached from ``c`` by signed transpositions."""
    path = reachability_states(c, c_prime, "transposition")
    return path[-1]


def verify_oriented_naturality(
    c: SignedEulerSystem,
    c_prime: SignedEulerSystem,
    p: CircuitPartition | None = None,
    subject: str = "",
) -> CheckReport:
    """Naturality of the standard form for Euler systems with the same edge directions."""
    if edge_directions(c) != edge_directions(c_prime):
        raise OrientationError("the Euler systems do not respect the same edge directions")
    report = CheckReport(name="oriented-naturality", subject=subject)
    c2 = corresponding_signing(c, c_prime)
    to_c = euler_partition(c)
    m_c_c2 = standard_form(c, euler_partition(c2))
    m_c2_c = standard_form(c2, to_c)
    inverse = rat_inverse(m_c_c2)
    report.record("M0(C'',C) = M0(C,C'')^-1", inverse.is_integral() and inverse.to_int() == m_c2_c)

    delta = _delta(c_prime, c2)
    m_c_cp = standard_form(c, euler_partition(c_prime))
    m_cp_c = standard_form(c_prime, to_c)
    inverse_cp = rat_inverse(m_c_cp)
    report.record(
        "M0(C',C) = D.M0(C,C')^-1.D",
        inverse_cp.is_integral()
        and int_matmul(int_matmul(delta, inverse_cp.to_int()), delta) == m_cp_c,
    )
    det = rat_det(m_c_cp)
    report.record("det M0(C,C') = 1", det == 1, str(det))

    if p is not None:
        if not orientation_consistent(c, p):
            raise OrientationError("the partition uses a psi transition")
        m_c_p = standard_form(c, p)
        report.record(
            "M0(C'',P) = M0(C'',C).M0(C,P)",
            standard_form(c2, p) == int_matmul(m_c2_c, m_c_p),
        )
        report.record(
            "M0(C',P) = M0(C',C).D.M0(C,P).D",
            standard_form(c_prime, p)
            == int_matmul(int_matmul(int_matmul(m_cp_c, delta), m_c_p), delta),
        )
    return report


# =============================================================================
# Reachability
# =============================================================================


def _kappa_moves(c: SignedEulerSystem) -> Iterator[tuple[tuple[str, ...], SignedEulerSystem]]:
    for v in c.graph.sorted_vertices:
        first, second = kappa_transform(c, v)
        yield (v, "1"), first
        yield (v, "2"), second


def _transposition_moves(
    c: SignedEulerSystem,
) -> Iterator[tuple[tuple[str, ...], SignedEulerSystem]]:
    order = c.graph.sorted_vertices
    for i, v in enumerate(order):
        for w in order[i + 1 :]:
            if interlaced(c, v, w):
                yield (v, w), transposition(c, v, w)


def _search(
    c: SignedEulerSystem,
    target: tuple,
    moves: Callable[[SignedEulerSystem], Iterator[tuple[tuple[str, ...], SignedEulerSystem]]],
) -> list[tuple[tuple[str, ...], SignedEulerSystem]]:
    start = trail_key(c)
    parents: dict[tuple, tuple[tuple | None, tuple[str, ...], SignedEulerSystem]] = {
        start: (None, (), c)
    }
    queue = deque([c])
    while queue:
        current = queue.popleft()
        key = trail_key(current)
        if key == target:
            break
        for move, nxt in moves(current):
            nxt_key = trail_key(nxt)
            if nxt_key not in parents:
                parents[nxt_key] = (key, move, nxt)
                queue.append(nxt)
    if target not in parents:
        raise InvariantViolation("target Euler system is unreachable")
    logger.debug("reachability search visited %d Euler systems", len(parents))
    path = []
    key: tuple | None = target
    while key is not None:
        parent, move, system = parents[key]
        path.append((move, system))
        key = parent
    path.reverse()
    return path


def reachability_states(
    c: SignedEulerSystem, c_prime: SignedEulerSystem, kind: str
) -> list[SignedEulerSystem]:
    moves = _transposition_moves if kind == "transposition" else _kappa_moves
    return [system for _, system in _search(c, trail_key(c_prime), moves)]


def kappa_reachability(
    c: SignedEulerSystem, c_prime: SignedEulerSystem, kind: str | None = None
) -> ReachabilityPath:
    """Breadth-first sequence of moves from ``c`` to ``c_prime``.

    Transpositions are used when both respect the same edge directions and
    ``kind`` is not given; otherwise kappa-transforms, each recorded as the
    vertex and which fundamental circuit was reversed.
    """
    if kind is None:
        kind = "transposition" if edge_directions(c) == edge_directions(c_prime) else "kappa"
    moves = _transposition_moves if kind == "transposition" else _kappa_moves
    path = _search(c, trail_key(c_prime), moves)
    return ReachabilityPath(
        kind=kind,
        moves=[move for move, _ in path[1:]],
        words=[" ".join(system.unsigned_words()) for _, system in path],
    )


def random_kappa_walk(
    c: SignedEulerSystem, steps: int, rng: random.Random
) -> list[SignedEulerSystem]:
    """A seeded walk of kappa-transforms; returns every system visited after ``c``."""
    visited = []
    current = c
    order = c.graph.sorted_vertices
    for _ in range(steps):
        v = rng.choice(order)
        current = kappa_transform(current, v)[rng.randrange(2)]
        visited.append(current)
    return visited
