"""Command-line entry point: ``circuits <subcommand> ...``.

Exit codes: 0 on success or when every check passes, 1 when a verification
fails, 2 on unreadable or malformed input.
"""

import argparse
import logging
import random
import sys
from collections.abc import Sequence
from typing import Any

from app.config import get_settings
from app.errors import CircuitError, InvariantViolation
from app.models.graph import GraphDocument, SignedEulerSystem
from app.models.matrix import Gf2Matrix
from app.models.partition import CircuitPartition
from app.models.reports import CheckReport, SweepSummary
from app.services import formats
from app.services.core_graph import (
    euler_system,
    graph_signature,
    load_document,
    read_text,
    realize_text,
    serialize_euler_system,
    serialize_graph,
)
from app.services.counting import (
    count_euler_brute,
    count_euler_det,
    partition_census,
    verify_indicator,
    verify_sign_invariance,
)
from app.services.matrices import (
    interlacement,
    modified_interlacement,
    reduced_interlacement,
    signed_interlacement,
    standard_form,
    standard_form_by_tracing,
)
from app.services.partitions import (
    LABEL_ORDER,
    ORIENTED_LABELS,
    euler_partition,
    label_assignments,
    parse_partition,
    partition_from_labels,
    touch_graph,
)
from app.services.sweep import partition_sweep, run_harness
from app.services.transforms import (
    kappa_reachability,
    kappa_transform,
    random_kappa_walk,
    transposition,
    verify_kappa_naturality,
    verify_oriented_naturality,
    verify_real_naturality,
    verify_transposition_rows,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

# =============================================================================
# Input helpers
# =============================================================================


class Inputs:
    """The Euler system named by ``--euler`` and the partitions selected by the flags."""

    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args
        self.document: GraphDocument = load_document(args.euler)
        if self.document.euler_system is not None:
            self.c: SignedEulerSystem = self.document.euler_system
            self.names = list(self.document.component_names)
        else:
            self.c = euler_system(self.document.graph)
            self.names = []

    def read_system(self, path: str) -> SignedEulerSystem:
        return realize_text(self.c.graph, read_text(path))

    def partition(self) -> CircuitPartition | None:
        args = self.args
        if getattr(args, "partition", None):
            text = read_text(args.partition)
            return parse_partition(text, self.c.graph, self.c, euler_name=self.document.name)
        if getattr(args, "partition_dow", None):
            return euler_partition(self.read_system(args.partition_dow))
        return None

    def require_partition(self) -> CircuitPartition:
        p = self.partition()
        if p is None:
            raise CircuitError("this command needs --partition or --partition-dow")
        return p

    def partitions(self, oriented: bool = False) -> list[tuple[str, CircuitPartition]]:
        """The given partition, or every partition with ``--all-partitions``."""
        if getattr(self.args, "all_partitions", False):
            alphabet = ORIENTED_LABELS if oriented else LABEL_ORDER
            return [
                ("".join(labels[v].symbol for v in sorted(labels)), partition_from_labels(self.c, labels))
                for labels in label_assignments(self.c, alphabet)
            ]
        return [(self.document.name, self.require_partition())]


def _emit(args: argparse.Namespace, text: str, record: Any) -> None:
    sys.stdout.write(formats.dump_json(record) if args.json else text)


def _summarize(name: str, reports: list[CheckReport]) -> SweepSummary:
    failed = [r for r in reports if not r.passed]
    return SweepSummary(name=name, total=len(reports), failed=len(failed), reports=failed)


def _emit_reports(args: argparse.Namespace, reports: list[CheckReport], name: str) -> int:
    if len(reports) == 1:
        report = reports[0]
        _emit(args, formats.report_text(report), report.model_dump())
        return EXIT_OK if report.passed else EXIT_FAILED
    summary = _summarize(name, reports)
    _emit(args, formats.sweep_text(summary), summary.model_dump())
    return EXIT_OK if summary.passed else EXIT_FAILED


# =============================================================================
# Subcommands
# =============================================================================


def cmd_parse(args: argparse.Namespace) -> int:
    document = load_document(args.graph)
    logger.info("%s: %s", args.graph, graph_signature(document.graph))
    if document.euler_system is not None:
        text = serialize_euler_system(document.euler_system, list(document.component_names))
        record = formats.euler_record(document.euler_system, list(document.component_names))
    else:
        text = serialize_graph(document.graph)
        g = document.graph
        record = {"edges": [[g.vertex_of(a), g.vertex_of(b)] for a, b in g.edges()]}
    _emit(args, text, record)
    return EXIT_OK


def cmd_euler(args: argparse.Namespace) -> int:
    document = load_document(args.graph)
    c = euler_system(document.graph)
    names = [] if len(c.components) == 1 else [f"C{k + 1}" for k in range(len(c.components))]
    _emit(args, serialize_euler_system(c, names or None), formats.euler_record(c, names or ["C"]))
    return EXIT_OK


def cmd_trace(args: argparse.Namespace) -> int:
    inputs = Inputs(args)
    p = inputs.require_partition()
    _emit(args, formats.partition_text(p), formats.partition_record(p))
    return EXIT_OK


def cmd_touch(args: argparse.Namespace) -> int:
    inputs = Inputs(args)
    t = touch_graph(inputs.require_partition(), inputs.c)
    _emit(args, formats.touch_text(t), formats.touch_record(t))
    return EXIT_OK


def cmd_matrix(args: argparse.Namespace) -> int:
    inputs = Inputs(args)
    c = inputs.c
    kind = args.kind
    if kind == "interlacement":
        m = interlacement(c)
    elif kind == "signed":
        m = signed_interlacement(c)
    elif kind == "gf2":
        p = inputs.partition()
        m = interlacement(c) if p is None else modified_interlacement(c, p)
    else:
        p = inputs.require_partition()
        builders = {
            "reduced": reduced_interlacement,
            "modified": modified_interlacement,
            "standard": standard_form,
            "tracing": standard_form_by_tracing,
        }
        m = builders[kind](c, p)
    if args.hex:
        bits = m if isinstance(m, Gf2Matrix) else m.mod2()
        _emit(args, formats.gf2_hex(bits), formats.matrix_record(bits))
    else:
        _emit(args, formats.matrix_tsv(m), formats.matrix_record(m))
    return EXIT_OK


def _naturality_reports(inputs: Inputs, args: argparse.Namespace) -> list[CheckReport]:
    c = inputs.c
    vertices = [args.vertex] if args.vertex else list(c.graph.sorted_vertices)
    others: list[SignedEulerSystem] = []
    if args.other:
        others.append(inputs.read_system(args.other))
    if args.steps:
        others += random_kappa_walk(c, args.steps, random.Random(args.seed))
    reports = []
    for subject, p in inputs.partitions():
        for v in vertices:
            reports.append(verify_kappa_naturality(c, v, p, others, subject=f"{subject} at {v}"))
    return reports


def cmd_verify(args: argparse.Namespace) -> int:
    inputs = Inputs(args)
    c = inputs.c
    check = args.check
    if check in ("main", "duality", "nullity", "detzero"):
        oriented = check == "detzero"
        if args.all_partitions:
            alphabet = ORIENTED_LABELS if oriented else LABEL_ORDER
            summary = partition_sweep(check, c, alphabet, workers=args.workers, keep="all")
            _emit(args, formats.sweep_table(summary), summary.model_dump())
            return EXIT_OK if summary.passed else EXIT_FAILED
        reports = [run_harness(check, c, inputs.require_partition(), inputs.document.name)]
    elif check == "naturality":
        reports = _naturality_reports(inputs, args)
    elif check == "real":
        other = inputs.read_system(_required(args.other, "--other"))
        reports = [verify_real_naturality(c, other, p, s) for s, p in inputs.partitions()]
    elif check == "oriented":
        other = inputs.read_system(_required(args.other, "--other"))
        if args.all_partitions or args.partition or args.partition_dow:
            reports = [
                verify_oriented_naturality(c, other, p, s) for s, p in inputs.partitions(oriented=True)
            ]
        else:
            reports = [verify_oriented_naturality(c, other, None, inputs.document.name)]
    elif check == "transposition":
        v, w = _required(args.pair, "--pair")
        reports = [
            verify_transposition_rows(c, v, w, p, s) for s, p in inputs.partitions(oriented=True)
        ]
    elif check == "indicator":
        reports = [verify_indicator(c, inputs.document.name)]
    else:
        reports = [verify_sign_invariance(c, inputs.document.name)]
    return _emit_reports(args, reports, check)


def _required(value: Any, flag: str) -> Any:
    if not value:
        raise CircuitError(f"this check needs {flag}")
    return value


def cmd_count(args: argparse.Namespace) -> int:
    inputs = Inputs(args)
    c = inputs.c
    det = count_euler_det(c)
    cap = args.brute_max if args.brute_max is not None else get_settings().brute_max_vertices
    record: dict[str, Any] = {"det": det, "brute": None, "agree": None}
    if len(c.graph.vertices) <= cap:
        brute = count_euler_brute(c, cap)
        record.update(brute=brute, agree=brute == det)
    else:
        logger.warning("brute-force count skipped: %d vertices over the cap of %d", len(c.graph.vertices), cap)
    lines = [f"det\t{det}"]
    if record["brute"] is not None:
        lines.append(f"brute\t{record['brute']}")
    _emit(args, "\n".join(lines) + "\n", record)
    return EXIT_FAILED if record["agree"] is False else EXIT_OK


def cmd_census(args: argparse.Namespace) -> int:
    document = load_document(args.graph)
    census = partition_census(
        document.graph,
        document.euler_system,
        max_vertices=args.max_vertices,
        workers=args.workers,
    )
    _emit(args, formats.census_tsv(census), census.model_dump())
    return EXIT_OK if census.nullity_failures == 0 else EXIT_FAILED


def cmd_transform(args: argparse.Namespace) -> int:
    inputs = Inputs(args)
    c = inputs.c
    if args.kappa:
        results = kappa_transform(c, args.kappa)
        text = "".join(
            f"# reverse C{i}\n{serialize_euler_system(r, inputs.names or None)}"
            for i, r in enumerate(results, start=1)
        )
        record = [formats.euler_record(r, inputs.names or ["C"]) for r in results]
        _emit(args, text, record)
    elif args.transpose:
        result = transposition(c, *args.transpose)
        _emit(
            args,
            serialize_euler_system(result, inputs.names or None),
            formats.euler_record(result, inputs.names or ["C"]),
        )
    else:
        path = kappa_reachability(c, inputs.read_system(args.path))
        _emit(args, formats.path_text(path), path.model_dump())
    return EXIT_OK


# =============================================================================
# Parser
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured records instead of TSV")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("--workers", type=int, default=None, help="sweep worker processes")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized sweeps")

    euler = argparse.ArgumentParser(add_help=False)
    euler.add_argument("--euler", required=True, help="signed DOW file (or edge list)")

    partition = argparse.ArgumentParser(add_help=False)
    group = partition.add_mutually_exclusive_group()
    group.add_argument("--partition", help="transition file")
    group.add_argument("--partition-dow", help="Euler system file used as the partition")

    parser = argparse.ArgumentParser(prog="circuits", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and re-serialize a graph file")
    p.add_argument("graph")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("euler", parents=[common], help="construct an Euler system")
    p.add_argument("graph")
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("trace", parents=[common, euler, partition], help="circuits of a partition")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("touch", parents=[common, euler, partition], help="directed touch-graph")
    p.set_defaults(func=cmd_touch)

    p = sub.add_parser("matrix", parents=[common, euler, partition], help="emit a matrix")
    kinds = p.add_mutually_exclusive_group(required=True)
    for flag, kind in (
        ("--gf2", "gf2"),
        ("--standard", "standard"),
        ("--signed-interlacement", "signed"),
        ("--interlacement", "interlacement"),
        ("--reduced", "reduced"),
        ("--modified", "modified"),
        ("--tracing", "tracing"),
    ):
        kinds.add_argument(flag, dest="kind", action="store_const", const=kind)
    p.add_argument("--hex", action="store_true", help="hex-packed GF(2) rows")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("verify", parents=[common, euler, partition], help="run a verification")
    checks = p.add_mutually_exclusive_group(required=True)
    for check in (
        "main",
        "duality",
        "nullity",
        "naturality",
        "real",
        "oriented",
        "transposition",
        "detzero",
        "indicator",
        "signs",
    ):
        checks.add_argument(f"--{check}", dest="check", action="store_const", const=check)
    p.add_argument("--all-partitions", action="store_true")
    p.add_argument("--vertex", help="kappa vertex for --naturality")
    p.add_argument("--pair", nargs=2, metavar=("V", "W"), help="pair for --transposition")
    p.add_argument("--other", help="second Euler system file")
    p.add_argument("--steps", type=int, default=0, help="random kappa steps for --naturality")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", parents=[common, euler], help="count Euler systems")
    p.add_argument("--brute-max", type=int, default=None)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("census", parents=[common], help="circuit counts over all partitions")
    p.add_argument("graph")
    p.add_argument("--max-vertices", type=int, default=None)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("transform", parents=[common, euler], help="kappa, transposition, paths")
    moves = p.add_mutually_exclusive_group(required=True)
    moves.add_argument("--kappa", metavar="V")
    moves.add_argument("--transpose", nargs=2, metavar=("V", "W"))
    moves.add_argument("--path", metavar="TARGET")
    p.set_defaults(func=cmd_transform)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    level = logging.DEBUG if args.verbose else settings.log_level.upper()
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    if args.seed is None:
        args.seed = settings.seed
    try:
        return args.func(args)
    except InvariantViolation as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (CircuitError, OSError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
