"""Text and JSON renderings of matrices, reports and sweep tables.

Every renderer is deterministic: identical inputs give identical bytes.
GF(2) hex rows pack column j into bit j, so the first column is the lowest
bit of the last hex digit.
"""

import json
from fractions import Fraction
from typing import Any

from app.models.graph import SignedEulerSystem
from app.models.matrix import Gf2Matrix, IntMatrix, RatMatrix
from app.models.partition import CircuitPartition, TouchGraph
from app.models.reports import CensusReport, CheckReport, ReachabilityPath, SweepSummary

AnyMatrix = Gf2Matrix | IntMatrix | RatMatrix

# =============================================================================
# Matrices
# =============================================================================


def _cell(x: int | Fraction) -> int | str:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def matrix_entries(m: AnyMatrix) -> list[list[int | str]]:
    if isinstance(m, Gf2Matrix):
        return [list(row) for row in m.to_lists()]
    return [[_cell(x) for x in row] for row in m.entries]


def matrix_record(m: AnyMatrix) -> dict[str, Any]:
    """``{rows, cols, entries}``; rational entries that are not integers become ``"p/q"``."""
    return {"rows": list(m.rows), "cols": list(m.cols), "entries": matrix_entries(m)}


def matrix_tsv(m: AnyMatrix) -> str:
    lines = ["\t".join(["", *m.cols])]
    for label, row in zip(m.rows, matrix_entries(m)):
        lines.append("\t".join([label, *(str(x) for x in row)]))
    return "\n".join(lines) + "\n"


def gf2_hex(m: Gf2Matrix) -> str:
    width = max(1, (len(m.cols) + 3) // 4)
    return "".join(f"{label}\t{bits:0{width}x}\n" for label, bits in zip(m.rows, m.bits))


def dump_json(record: Any) -> str:
    return json.dumps(record, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# =============================================================================
# Circuits and touch-graphs
# =============================================================================


def partition_record(p: CircuitPartition) -> dict[str, Any]:
    g = p.graph
    return {
        "size": p.size,
        "circuits": [
            {
                "index": k,
                "vertices": [g.vertex_of(circuit[2 * i]) for i in range(len(circuit) // 2)],
                "half_edges": list(circuit),
            }
            for k, circuit in enumerate(p.circuits)
        ],
    }


def partition_text(p: CircuitPartition) -> str:
    lines = []
    for circuit in partition_record(p)["circuits"]:
        vertices = " ".join(circuit["vertices"])
        half_edges = " ".join(str(h) for h in circuit["half_edges"])
        lines.append(f"P{circuit['index']}\t{vertices}\t{half_edges}")
    return "\n".join(lines) + "\n"


def touch_record(t: TouchGraph) -> dict[str, Any]:
    return {
        "circuits": t.circuit_count,
        "edges": [
            {"vertex": e.vertex, "tail": e.tail, "head": e.head, "loop": e.is_loop}
            for e in t.edges
        ],
    }


def touch_text(t: TouchGraph) -> str:
    """One line per edge: vertex, tail circuit, head circuit and a direction flag."""
    lines = ["\t".join(("vertex", "tail", "head", "flag"))]
    for e in t.edges:
        flag = "loop" if e.is_loop else "->"
        lines.append(f"{e.vertex}\tP{e.tail}\tP{e.head}\t{flag}")
    return "\n".join(lines) + "\n"


def euler_record(c: SignedEulerSystem, names: list[str]) -> dict[str, Any]:
    return {
        "components": [
            {"name": name, "word": [str(occ) for occ in word]}
            for name, word in zip(names, c.components)
        ]
    }


# =============================================================================
# Reports
# =============================================================================


def report_text(report: CheckReport) -> str:
    lines = [f"# {report.name} {report.subject}".rstrip()]
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        detail = f"\t{check.detail}" if check.detail else ""
        lines.append(f"{status}\t{check.name}{detail}")
    for key in sorted(report.figures):
        lines.append(f"{key}\t{report.figures[key]}")
    return "\n".join(lines) + "\n"


def sweep_text(summary: SweepSummary) -> str:
    lines = [f"{summary.name}\t{summary.total - summary.failed}/{summary.total} passed"]
    for report in summary.reports:
        lines.append(report_text(report).rstrip("\n"))
    return "\n".join(lines) + "\n"


def sweep_table(summary: SweepSummary) -> str:
    """One row per partition under the pass count, then the checks of each failure.

    Figures a harness does not record print as ``-``.
    """
    lines = [f"{summary.name}\t{summary.total - summary.failed}/{summary.total} passed"]
    lines.append("partition\tstatus\tP\tnullity\trank")
    for report in summary.reports:
        status = "PASS" if report.passed else "FAIL"
        figures = [str(report.figures.get(key, "-")) for key in ("P", "nullity", "rank")]
        lines.append("\t".join([report.subject, status, *figures]))
    lines += [report_text(r).rstrip("\n") for r in summary.reports if not r.passed]
    return "\n".join(lines) + "\n"


def census_tsv(census: CensusReport) -> str:
    lines = ["|P|\tcount"]
    lines += [f"{size}\t{count}" for size, count in census.counts.items()]
    lines.append(f"total\t{census.total}")
    lines.append(f"nullity_failures\t{census.nullity_failures}")
    return "\n".join(lines) + "\n"


def path_text(path: ReachabilityPath) -> str:
    lines = [f"# {path.kind} moves: {len(path.moves)}"]
    lines.append(path.words[0])
    for move, word in zip(path.moves, path.words[1:]):
        lines.append(f"{' '.join(move)}\t{word}")
    return "\n".join(lines) + "\n"
