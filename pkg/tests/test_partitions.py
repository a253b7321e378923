"""Tests for transition labels, circuit tracing and touch-graphs."""

import pytest

from app.errors import GraphFormatError, GraphStructureError
from app.models.partition import Transition, TransitionLabel
from app.services.matrices import interlaced
from app.services.partitions import (
    circuit_words,
    classify_passages,
    components_correspondence,
    enumerate_partitions,
    euler_partition,
    fundamental_partition,
    label_of,
    label_transitions,
    orientation_consistent,
    parse_partition,
    project_walk,
    serialize_partition,
    touch_graph,
    trace_circuits,
    transition_from_label,
)
from tests import golden
from tests.golden import CHI, PHI, PSI

# ---------------------------------------------------------------------------
# Labels
# ---------------------------------------------------------------------------


class TestLabels:
    def test_label_of_inverts_transition_from_label(self):
        c = golden.system(golden.K5)
        for v in c.graph.vertices:
            for label in TransitionLabel:
                assert label_of(c, transition_from_label(c, v, label)) is label

    def test_labels_of_euler_partition_are_phi(self):
        c = golden.system(golden.EIGHT)
        assert set(label_transitions(c, euler_partition(c)).values()) == {PHI}

    def test_label_round_trip_through_partition(self):
        c = golden.system(golden.EIGHT)
        p = golden.labelled(c, golden.EIGHT_LABELS)
        assert label_transitions(c, p) == golden.EIGHT_LABELS

    def test_foreign_transition_is_rejected(self):
        c = golden.system(golden.K5)
        with pytest.raises(GraphStructureError):
            label_of(c, Transition(vertex="a", pairs=((90, 91), (92, 93))))

    def test_symbols(self):
        assert [label.symbol for label in TransitionLabel] == ["φ", "χ", "ψ"]


class TestOrientationConsistency:
    def test_euler_partition_is_consistent(self):
        c = golden.system(golden.K5)
        assert orientation_consistent(c, euler_partition(c))

    def test_any_psi_breaks_consistency(self):
        c = golden.system(golden.K5)
        assert not orientation_consistent(c, golden.uniform(c, PSI))
        eight = golden.system(golden.EIGHT)
        assert not orientation_consistent(eight, golden.labelled(eight, golden.EIGHT_LABELS))

    def test_phi_chi_partitions_are_consistent(self):
        c = golden.system(golden.DOUBLED_TRIANGLE)
        partitions = list(enumerate_partitions(c.graph, c, alphabet=(PHI, CHI)))
        assert len(partitions) == 8
        assert all(orientation_consistent(c, p) for p in partitions)


# ---------------------------------------------------------------------------
# Tracing
# ---------------------------------------------------------------------------


class TestTracing:
    @pytest.mark.parametrize(
        "label, size",
        [(PHI, 1), (CHI, 2), (PSI, 1)],
    )
    def test_loop_partitions(self, label, size):
        c = golden.system(golden.LOOP)
        assert golden.uniform(c, label).size == size

    def test_euler_partition_retraces_the_word(self):
        c = golden.system(golden.K5)
        assert circuit_words(euler_partition(c)) == c.unsigned_words()

    def test_circuits_start_on_least_half_edge(self):
        c = golden.system(golden.EIGHT)
        p = golden.labelled(c, golden.EIGHT_LABELS)
        starts = [circuit[0] for circuit in p.circuits]
        assert starts == sorted(starts)
        assert all(circuit[0] == min(circuit) for circuit in p.circuits)

    def test_fundamental_partition_splits_the_circuit(self):
        c = golden.system(golden.K5)
        assert fundamental_partition(c, "a").size == 2

    def test_missing_transition(self):
        c = golden.system(golden.K5)
        transitions = euler_partition(c).transitions
        partial = {v: t for v, t in transitions.items() if v != "a"}
        with pytest.raises(GraphStructureError):
            trace_circuits(c.graph, partial)

    def test_enumeration_size(self):
        c = golden.system(golden.K5)
        partitions = list(enumerate_partitions(c.graph, c))
        assert len(partitions) == 3**5
        assert len({p.assignment() for p in partitions}) == 3**5

    def test_enumeration_defaults_to_found_euler_system(self):
        c = golden.system(golden.DOUBLED_TRIANGLE)
        assert sum(1 for _ in enumerate_partitions(c.graph)) == 27


# ---------------------------------------------------------------------------
# Touch-graphs
# ---------------------------------------------------------------------------


class TestTouchGraph:
    def test_euler_partition_touch_graph_is_all_loops(self):
        c = golden.system(golden.K5)
        tch = touch_graph(euler_partition(c), c)
        assert tch.circuit_count == 1
        assert all(e.is_loop for e in tch.edges)

    def test_fundamental_partition_non_loops_are_interlaced(self):
        c = golden.system(golden.K5)
        tch = touch_graph(fundamental_partition(c, "a"), c)
        non_loops = {e.vertex for e in tch.edges if not e.is_loop}
        expected = {"a"} | {w for w in c.graph.vertices if w != "a" and interlaced(c, "a", w)}
        assert non_loops == expected

    def test_tail_holds_h1(self):
        c = golden.system(golden.EIGHT)
        p = golden.labelled(c, golden.EIGHT_LABELS)
        tch = touch_graph(p, c)
        for e in tch.edges:
            h1 = c.half_edge_names(e.vertex)[0]
            assert h1 in e.tail_pair
            assert e.tail == p.circuit_index[h1]

    def test_eight_vertex_example_has_four_circuits(self):
        c = golden.system(golden.EIGHT)
        p = golden.labelled(c, golden.EIGHT_LABELS)
        d = touch_graph(p, c).directed()
        assert len(d.nodes) == 4
        assert len(d.edges) == 8

    def test_components_correspond(self):
        c = golden.system(golden.TWO_COMPONENTS)
        for p in enumerate_partitions(c.graph, c):
            pairs = components_correspondence(c.graph, p, c)
            assert [component for component, _ in pairs] == [("a", "b"), ("c", "d")]
            nodes = sorted(n for _, touch in pairs for n in touch)
            assert nodes == list(range(p.size))


class TestWalkProjection:
    def test_euler_trace_against_its_own_partition_is_empty(self):
        c = golden.system(golden.K5)
        p = euler_partition(c)
        trace = c.traces[0]
        assert set(classify_passages(trace, p)) == {"c"}
        assert project_walk(trace, p, c).steps == ()

    def test_euler_trace_against_fundamental_partition(self):
        c = golden.system(golden.K5)
        p = fundamental_partition(c, "a")
        kinds = classify_passages(c.traces[0], p)
        assert kinds.count("c") == 8
        walk = project_walk(c.traces[0], p, c)
        assert [step.edge for step in walk.steps] == ["a", "a"]

    def test_rejects_broken_walk(self):
        c = golden.system(golden.K5)
        with pytest.raises(GraphStructureError):
            project_walk(c.traces[0][:-1], euler_partition(c), c)


# ---------------------------------------------------------------------------
# Transition files
# ---------------------------------------------------------------------------


class TestPartitionFiles:
    def test_label_file_round_trip(self):
        c = golden.system(golden.EIGHT)
        p = golden.labelled(c, golden.EIGHT_LABELS)
        text = serialize_partition(p, c, "C")
        assert "a = phi @ C" in text
        again = parse_partition(text, c.graph, c, euler_name="C")
        assert again.assignment() == p.assignment()

    def test_raw_file_round_trip(self):
        c = golden.system(golden.K5)
        p = golden.uniform(c, CHI)
        again = parse_partition(serialize_partition(p), c.graph)
        assert again.assignment() == p.assignment()

    def test_wrong_euler_name(self):
        c = golden.system(golden.LOOP)
        with pytest.raises(GraphFormatError) as info:
            parse_partition("v = chi @ D\n", c.graph, c, euler_name="C")
        assert info.value.line == 1

    def test_unknown_label(self):
        c = golden.system(golden.LOOP)
        with pytest.raises(GraphFormatError):
            parse_partition("v = omega\n", c.graph, c)

    def test_labels_need_euler_system(self):
        c = golden.system(golden.LOOP)
        with pytest.raises(GraphFormatError):
            parse_partition("v = phi\n", c.graph)

    def test_missing_vertex(self):
        c = golden.system(golden.DOUBLED_TRIANGLE)
        with pytest.raises(GraphFormatError) as info:
            parse_partition("a = phi\nb = chi\n", c.graph, c)
        assert info.value.token == "c"

    def test_duplicate_vertex(self):
        c = golden.system(golden.LOOP)
        with pytest.raises(GraphFormatError) as info:
            parse_partition("v = phi\nv = chi\n", c.graph, c)
        assert info.value.line == 2

    def test_raw_line_with_foreign_half_edges(self):
        c = golden.system(golden.LOOP)
        with pytest.raises(GraphFormatError):
            parse_partition("v : (0 1)(2 9)\n", c.graph)
