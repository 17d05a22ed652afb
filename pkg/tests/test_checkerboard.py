import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimertree import checkerboard as cb
from dimertree import diagonals as dg
from dimertree.quiver import weight_report

from conftest import cycle_quiver, glued_dimer_tree


@pytest.fixture(scope="module")
def cp9(q9):
    return cb.build_checkerboard(q9)


@pytest.fixture(scope="module")
def cp7(q7):
    return cb.build_checkerboard(q7)


@pytest.fixture(scope="module")
def cp3(c3):
    return cb.build_checkerboard(c3)


def test_sizes_equal_total_weight(cp9, cp7, cp3):
    assert cp9.size == 14
    assert cp7.size == 12
    assert cp3.size == 6
    for n in range(3, 9):
        cp = cb.build_checkerboard(cycle_quiver(n))
        assert cp.size == 2 * n


def test_c3_lines_are_the_three_diameters(cp3):
    got = {v: (l.tail, l.head) for v, l in cp3.lines.items()}
    assert got == {1: (1, 4), 2: (5, 2), 3: (3, 6)}
    # pairwise crossing, matching the three arrows
    for u in (1, 2, 3):
        for v in (1, 2, 3):
            if u != v:
                assert dg.crosses(cp3.lines[u].diagonal(),
                                  cp3.lines[v].diagonal(), 3)


def test_q9_counts(cp9):
    assert len(cp9.lines) == 9
    assert len(cp9.crossings) == 12
    assert sum(1 for s in cp9.shaded if s.kind == "cycle") == 4
    assert sum(1 for s in cp9.shaded if s.kind == "boundary_arrow") == 9
    assert len(cp9.whites) == 9


def test_q7_counts(cp7):
    assert len(cp7.lines) == 7
    assert len(cp7.crossings) == 8
    assert sum(1 for s in cp7.shaded if s.kind == "cycle") == 2
    assert sum(1 for s in cp7.shaded if s.kind == "boundary_arrow") == 7


def test_validation_suite_passes_everywhere(q9, q7, c3, cp9, cp7, cp3):
    for q, cp in ((q9, cp9), (q7, cp7), (c3, cp3)):
        rep = cb.validate_checkerboard(cp, q)
        assert rep.ok, [(c.name, c.detail) for c in rep.failed()]
    for n in range(3, 9):
        q = cycle_quiver(n)
        rep = cb.validate_checkerboard(cb.build_checkerboard(q), q)
        assert rep.ok, [(c.name, c.detail) for c in rep.failed()]


def test_crossing_count_along_line_is_degree(cp9, q9):
    for v in q9.vertices:
        deg = len(q9.out_arrows[v]) + len(q9.in_arrows[v])
        assert len(cp9.lines[v].crossings) == deg


def test_rebuild_from_any_seed_is_identical(q9, q7):
    for q in (q9, q7):
        wr = weight_report(q)
        base = json.dumps(cb.polygon_to_dict(cb.build_checkerboard(q)),
                          sort_keys=True, default=str)
        for e in wr.entries:
            other = json.dumps(
                cb.polygon_to_dict(cb.build_checkerboard(q, seed_arrow=e.arrow)),
                sort_keys=True, default=str)
            assert other == base


def test_canonical_rotation_tail_of_least_vertex(cp9, cp7, cp3):
    for cp in (cp9, cp7, cp3):
        vmin = cp.q.sorted_vertices()[0]
        assert cp.lines[vmin].tail == 1


def test_white_regions_spell_cycle_paths(cp9, q9):
    wr = cp9.weights.by_arrow()
    for w in cp9.whites:
        # crossings appear as the starts of all segments after the first
        read = [s.start.key for s in w.segments if s.start.kind == "x"]
        assert tuple(read) == wr[w.arrow].cycle_path.arrows


def test_white_contacts_follow_weights(cp9):
    wr = cp9.weights.by_arrow()
    for w in cp9.whites:
        if wr[w.arrow].weight == 1:
            assert w.contact[0] == "vertex"
        else:
            assert w.contact[0] == "edge"


def test_merged_vertices_host_two_lines(cp9):
    hosts = cp9.vertex_lines()
    merged = {k: v for k, v in hosts.items() if len(v) == 2}
    # one merge per weight-one boundary arrow
    ones = sum(1 for e in cp9.weights.entries if e.weight == 1)
    assert len(merged) == ones == 4


def test_misoriented_line_fails_validation(q9):
    cp = cb.build_checkerboard(q9)
    line = cp.lines[3]
    line.tail, line.head = line.head, line.tail
    rep = cb.validate_checkerboard(cp, q9)
    assert not rep.ok
    assert any(c.name == "radical_lines_are_oriented_2_diagonals"
               for c in rep.failed())


def test_corrupted_crossing_order_caught_by_face_traversal(q9):
    cp = cb.build_checkerboard(q9)
    line = cp.lines[4]
    assert len(line.crossings) >= 3
    line.crossings[0], line.crossings[1] = line.crossings[1], line.crossings[0]
    rep = cb.validate_checkerboard(cp, q9)
    assert any(c.name == "faces_match_regions" for c in rep.failed())


def test_structured_roundtrip(q9, cp9):
    doc = json.loads(json.dumps(cb.polygon_to_dict(cp9)))
    cp2 = cb.polygon_from_dict(doc, q9)
    rep = cb.validate_checkerboard(cp2, q9)
    assert rep.ok
    assert cb.polygon_to_dict(cp2) == cb.polygon_to_dict(cp9)


def test_render_formats(cp3, cp9):
    svg = cb.render(cp9, "svg")
    assert svg.startswith("<svg") and "marker-end" in svg
    assert svg.count("<circle") == 14
    dot = cb.render(cp3, "dot")
    assert "graph checkerboard" in dot
    structured = cb.render(cp3, "structured")
    assert json.loads(structured)["size"] == 6
    with pytest.raises(cb.CheckerboardError):
        cb.render(cp3, "png")


def test_radical_line_of_unknown_vertex(cp3):
    with pytest.raises(cb.CheckerboardError):
        cp3.radical_line_of(99)


@settings(max_examples=20, deadline=None)
@given(st.tuples(
    st.lists(st.integers(min_value=3, max_value=6), min_size=1, max_size=4),
    st.lists(st.integers(min_value=0, max_value=10 ** 6), min_size=3, max_size=3),
))
def test_random_quivers_build_valid_polygons(spec):
    lengths, attach = spec
    q = glued_dimer_tree(lengths, attach)
    cp = cb.build_checkerboard(q)
    assert cp.size == weight_report(q).total_weight
    rep = cb.validate_checkerboard(cp, q)
    assert rep.ok, [(c.name, c.detail) for c in rep.failed()]
