"""Exhaustive sweeps over circuit partitions.

Work items are plain ``(name, c, labels)`` tuples handed to module-level
harness functions. Results come back in item order whatever the worker count.
"""

import logging
from collections.abc import Callable, Sequence

from app.models.graph import SignedEulerSystem
from app.models.partition import CircuitPartition, TransitionLabel
from app.models.reports import CheckReport, SweepSummary
from app.services.counting import verify_detzero, verify_main_theorem, verify_nullity
from app.services.cycles import verify_duality
from app.services.partitions import (
    LABEL_ORDER,
    label_assignments,
    partition_from_labels,
    touch_graph,
)
from app.services.pool import parallel_map

logger = logging.getLogger(__name__)

Harness = Callable[[SignedEulerSystem, CircuitPartition, str], CheckReport]


def _touch_duality(c: SignedEulerSystem, p: CircuitPartition, subject: str) -> CheckReport:
    return verify_duality(touch_graph(p, c).directed(), subject)


_HARNESSES: dict[str, Harness] = {
    "main": verify_main_theorem,
    "nullity": verify_nullity,
    "detzero": verify_detzero,
    "duality": _touch_duality,
}


def harness_names() -> list[str]:
    return list(_HARNESSES)


def run_harness(name: str, c: SignedEulerSystem, p: CircuitPartition, subject: str = "") -> CheckReport:
    harness = _HARNESSES.get(name)
    if harness is None:
        raise KeyError(f"unknown harness {name!r}")
    return harness(c, p, subject)


def _label_subject(labels: dict[str, TransitionLabel]) -> str:
    return "".join(labels[v].symbol for v in sorted(labels))


def _sweep_item(item: tuple[str, SignedEulerSystem, dict[str, TransitionLabel]]) -> CheckReport:
    name, c, labels = item
    p = partition_from_labels(c, labels)
    return run_harness(name, c, p, _label_subject(labels))


def partition_sweep(
    name: str,
    c: SignedEulerSystem,
    alphabet: Sequence[TransitionLabel] = LABEL_ORDER,
    workers: int | None = None,
    keep: str = "failures",
) -> SweepSummary:
    """Run one harness on every labelling of ``c`` over ``alphabet``.

    ``keep`` selects which reports the summary carries: ``failures`` or
    ``all``.
    """
    items = [(name, c, labels) for labels in label_assignments(c, alphabet)]
    reports = parallel_map(_sweep_item, items, workers)
    failed = [r for r in reports if not r.passed]
    logger.info("%s sweep: %d/%d passed", name, len(reports) - len(failed), len(reports))
    return SweepSummary(
        name=name,
        total=len(reports),
        failed=len(failed),
        reports=reports if keep == "all" else failed,
    )
