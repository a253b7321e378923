"""Counting Euler systems with determinants, plus the per-partition harnesses and census sweeps.

For a signed Euler system C, P_S follows C at the vertices in S and takes
the chi transition elsewhere. P_S is an Euler system exactly when
det M0(C, P_S) = 1, so det(X + I_R(C)) is a multilinear polynomial whose
coefficients mark the subsets S with P_S an Euler system. At X = I it
counts the Euler systems respecting C's edge directions.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Mapping
from fractions import Fraction
from itertools import combinations

from app.config import get_settings
from app.errors import OrientationError, SweepLimitError
from app.models.graph import FourRegularGraph, SignedEulerSystem
from app.models.matrix import IntMatrix, RatMatrix
from app.models.partition import CircuitPartition, TransitionLabel
from app.models.reports import CensusReport, CheckReport
from app.services.core_graph import all_signings, component_count, euler_system
from app.services.cycles import cocycle_matrix, cycle_matrix
from app.services.linalg import (
    gf2_nullity,
    gf2_row_space_equal,
    int_det,
    int_matmul,
    rat_det,
    rat_nullity,
    row_space_equal,
)
from app.services.matrices import (
    modified_interlacement,
    oriented_blocks,
    reduced_interlacement,
    signed_interlacement,
    standard_form,
    standard_form_by_tracing,
)
from app.services.partitions import (
    ORIENTED_LABELS,
    label_assignments,
    orientation_consistent,
    partition_from_labels,
    touch_graph,
)
from app.services.pool import parallel_map

logger = logging.getLogger(__name__)

# =============================================================================
# Determinant counts
# =============================================================================


def _with_diagonal(m: IntMatrix, diagonal: Mapping[str, int]) -> IntMatrix:
    entries = tuple(
        tuple(x + diagonal[r] if r == col else x for col, x in zip(m.cols, row))
        for r, row in zip(m.rows, m.entries)
    )
    return IntMatrix(rows=m.rows, cols=m.cols, entries=entries)


def count_euler_det(c: SignedEulerSystem) -> int:
    """det(I + I_R(C)): Euler systems respecting the edge directions of ``c``."""
    signed = signed_interlacement(c)
    return int_det(_with_diagonal(signed, dict.fromkeys(signed.rows, 1)))


def subset_partition(c: SignedEulerSystem, s: Iterable[str]) -> CircuitPartition:
    """P_S: phi at the vertices of ``s``, chi at every other vertex."""
    chosen = set(s)
    labels = {
        v: TransitionLabel.PHI if v in chosen else TransitionLabel.CHI for v in c.graph.vertices
    }
    return partition_from_labels(c, labels)


def _check_cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise SweepLimitError(f"{what} over {n} vertices exceeds the cap of {cap}")


def count_euler_brute(c: SignedEulerSystem, max_vertices: int | None = None) -> int:
    """Number of subsets S with |P_S| = c(F), by enumerating all 2^|V| of them."""
    cap = max_vertices if max_vertices is not None else get_settings().brute_max_vertices
    _check_cap(len(c.graph.vertices), cap, "brute-force count")
    target = component_count(c.graph)
    count = 0
    for labels in label_assignments(c, ORIENTED_LABELS):
        if partition_from_labels(c, labels).size == target:
            count += 1
    logger.debug("brute-force count: %d Euler systems", count)
    return count


def indicator_polynomial(c: SignedEulerSystem, assignment: Mapping[str, Fraction | int]) -> Fraction:
    """det(X + I_R(C)) with X the diagonal matrix of ``assignment``."""
    signed = signed_interlacement(c)
    entries = tuple(
        tuple(
            Fraction(assignment[r]) + x if r == col else Fraction(x)
            for col, x in zip(signed.cols, row)
        )
        for r, row in zip(signed.rows, signed.entries)
    )
    return rat_det(RatMatrix(rows=signed.rows, cols=signed.cols, entries=entries))


def indicator_coefficients(c: SignedEulerSystem) -> dict[frozenset[str], Fraction]:
    """Coefficient of every monomial prod_{v in S} x_v, by Moebius inversion.

    Evaluating at the 0/1 vector of T gives the sum of the coefficients of
    the subsets of T; inverting that sum recovers each coefficient.
    """
    order = c.graph.sorted_vertices
    subsets = [frozenset(s) for k in range(len(order) + 1) for s in combinations(order, k)]
    values = {
        s: indicator_polynomial(c, {v: int(v in s) for v in order}) for s in subsets
    }
    coefficients = {}
    for s in subsets:
        total = Fraction(0)
        for k in range(len(s) + 1):
            for t in combinations(sorted(s), k):
                total += (-1) ** (len(s) - k) * values[frozenset(t)]
        coefficients[s] = total
    return coefficients


def verify_indicator(c: SignedEulerSystem, subject: str = "") -> CheckReport:
    """Each coefficient of det(X + I_R(C)) is det M0(C, P_S), which is 1 iff P_S is an Euler system."""
    report = CheckReport(name="indicator", subject=subject)
    target = component_count(c.graph)
    for s, coefficient in indicator_coefficients(c).items():
        p = subset_partition(c, s)
        det = int_det(standard_form(c, p))
        name = "".join(sorted(s)) or "{}"
        report.record(f"coefficient {name} = det M0(C,P_S)", coefficient == det, str(coefficient))
        report.record(f"coefficient {name} marks an Euler system", (det == 1) == (p.size == target))
    everything = indicator_polynomial(c, dict.fromkeys(c.graph.vertices, 1))
    report.record("value at X = I is the count", everything == count_euler_det(c), str(everything))
    return report


# =============================================================================
# Harnesses
# =============================================================================


def verify_main_theorem(c: SignedEulerSystem, p: CircuitPartition, subject: str = "") -> CheckReport:
    """Row space of M0(C, P) against the cycle space of the touch-graph.

    Checks both standard-form constructions agree, the rational row space
    is the cycle space, the mod-2 reduction is M(C, P) with the GF(2)
    cycle space as row space, M0 . U = 0, and both nullities equal
    |P| - c(F).
    """
    report = CheckReport(name="main", subject=subject)
    m = standard_form(c, p)
    report.record("table = tracing", m == standard_form_by_tracing(c, p))

    d = touch_graph(p, c).directed()
    z = cycle_matrix(d)
    report.record("row space = cycle space", row_space_equal(m, z))
    modified = modified_interlacement(c, p)
    report.record("M0 mod 2 = M(C,P)", m.mod2() == modified)
    report.record("GF(2) row space = cycle space", gf2_row_space_equal(modified, z.mod2()))
    report.record("M0.U = 0", int_matmul(m, cocycle_matrix(d)).values() <= {0})

    expected = p.size - component_count(c.graph)
    nullity = rat_nullity(m)
    gf2 = gf2_nullity(reduced_interlacement(c, p))
    report.record("rational nullity = |P| - c(F)", nullity == expected, f"{nullity} vs {expected}")
    report.record("GF(2) nullity = |P| - c(F)", gf2 == expected, f"{gf2} vs {expected}")
    report.figures.update({"P": p.size, "nullity": nullity, "rank": len(m.rows) - nullity})
    logger.debug("main theorem on %s: %s", subject, "pass" if report.passed else "FAIL")
    return report


def verify_detzero(c: SignedEulerSystem, p: CircuitPartition, subject: str = "") -> CheckReport:
    """|P| = c(F) iff det M0 = 1 iff det M0 != 0 iff det I_R(C,P) = 1 iff det I_R(C,P) != 0."""
    if not orientation_consistent(c, p):
        raise OrientationError("the partition uses a psi transition")
    report = CheckReport(name="detzero", subject=subject)
    is_euler = p.size == component_count(c.graph)
    det_standard = int_det(standard_form(c, p))
    _, chi_block = oriented_blocks(c, p)
    det_chi = int_det(chi_block)
    report.record("det M0 in {0, 1}", det_standard in (0, 1), str(det_standard))
    report.record("Euler system iff det M0 = 1", is_euler == (det_standard == 1))
    report.record("Euler system iff det M0 != 0", is_euler == (det_standard != 0))
    report.record("Euler system iff det I_R(C,P) = 1", is_euler == (det_chi == 1))
    report.record("Euler system iff det I_R(C,P) != 0", is_euler == (det_chi != 0))
    report.figures.update({"P": p.size, "det": det_standard})
    return report


def verify_nullity(c: SignedEulerSystem, p: CircuitPartition, subject: str = "") -> CheckReport:
    """GF(2) nullity of I(C, P) and rational nullity of M0(C, P) both equal |P| - c(F)."""
    report = CheckReport(name="nullity", subject=subject)
    expected = p.size - component_count(c.graph)
    gf2 = gf2_nullity(reduced_interlacement(c, p))
    rational = rat_nullity(standard_form(c, p))
    report.record("GF(2) nullity = |P| - c(F)", gf2 == expected, f"{gf2} vs {expected}")
    report.record("rational nullity = |P| - c(F)", rational == expected, f"{rational} vs {expected}")
    report.figures.update({"P": p.size, "nullity": gf2})
    return report


def verify_sign_invariance(c: SignedEulerSystem, subject: str = "") -> CheckReport:
    """det(I + I_R(C)) takes one value over every signing of ``c``."""
    report = CheckReport(name="sign-invariance", subject=subject)
    values = Counter(count_euler_det(signing) for signing in all_signings(c))
    report.record("one value over all signings", len(values) == 1, str(dict(values)))
    report.figures["signings"] = sum(values.values())
    return report


def verify_counts(c: SignedEulerSystem, max_vertices: int | None = None, subject: str = "") -> CheckReport:
    report = CheckReport(name="count", subject=subject)
    det = count_euler_det(c)
    brute = count_euler_brute(c, max_vertices)
    report.record("det(I + I_R(C)) = brute-force count", det == brute, f"{det} vs {brute}")
    report.figures.update({"det": det, "brute": brute})
    return report


# =============================================================================
# Census
# =============================================================================


def _census_item(item: tuple[SignedEulerSystem, dict[str, TransitionLabel], int]) -> tuple[int, bool]:
    c, labels, components = item
    p = partition_from_labels(c, labels)
    return p.size, gf2_nullity(reduced_interlacement(c, p)) == p.size - components


def partition_census(
    g: FourRegularGraph,
    c: SignedEulerSystem | None = None,
    max_vertices: int | None = None,
    workers: int | None = None,
) -> CensusReport:
    """Tabulate |P| over all 3^|V| partitions, checking the circuit-nullity formula for each."""
    cap = max_vertices if max_vertices is not None else get_settings().census_max_vertices
    _check_cap(len(g.vertices), cap, "census")
    reference = c if c is not None else euler_system(g)
    components = component_count(g)
    items = [(reference, labels, components) for labels in label_assignments(reference)]
    results = parallel_map(_census_item, items, workers)
    counts = Counter(size for size, _ in results)
    failures = sum(1 for _, ok in results if not ok)
    logger.info("census of %d partitions, %d nullity failures", len(results), failures)
    return CensusReport(
        vertices=len(g.vertices),
        components=components,
        total=len(results),
        counts=dict(sorted(counts.items())),
        nullity_failures=failures,
    )
