import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimertree.quiver import (
    QuiverError,
    analyze_structure,
    build_potential,
    chordless_cycles,
    cycle_path,
    parse_quiver,
    validate_dimer_tree,
    weight_report,
)

from conftest import cycle_quiver, glued_dimer_tree, quiver_from_arrows


# -- parsing -------------------------------------------------------------------

def test_parse_q9_document(q9):
    assert q9.name == "q9"
    assert len(q9.vertices) == 9
    assert len(q9.arrows) == 12
    assert q9.arrow_by_id["1->2"].target == 2


def test_parse_preserves_arrow_order(q9):
    assert [a.id for a in q9.arrows][:4] == ["1->2", "2->3", "3->1", "3->4"]


def test_parse_object_arrows_and_ids():
    q = parse_quiver(json.dumps({
        "name": "t", "vertices": ["a", "b", "c"],
        "arrows": [{"id": "x", "source": "a", "target": "b"},
                   ["b", "c"], ["c", "a"]]}))
    assert q.arrow_by_id["x"].source == "a"
    assert "b->c" in q.arrow_by_id


@pytest.mark.parametrize("doc,fragment", [
    ("{not json", "malformed"),
    ('{"vertices": [1]}', "missing required field"),
    ('{"name": "l", "vertices": [1], "arrows": [[1, 1]]}', "loop"),
    ('{"name": "p", "vertices": [1, 2], "arrows": [[1, 2], [1, 2]]}', "parallel"),
    ('{"name": "t", "vertices": [1, 2], "arrows": [[1, 2], [2, 1]]}', "2-cycle"),
    ('{"name": "d", "vertices": [1, 2], "arrows": [[1, 3]]}', "unknown"),
])
def test_parse_errors(doc, fragment):
    with pytest.raises(QuiverError) as err:
        parse_quiver(doc)
    assert fragment in str(err.value)


def test_parse_disconnected_rejected():
    doc = {"name": "d", "vertices": [1, 2, 3, 4, 5, 6],
           "arrows": [[1, 2], [2, 3], [3, 1], [4, 5], [5, 6], [6, 4]]}
    with pytest.raises(QuiverError, match="connected"):
        parse_quiver(json.dumps(doc))


# -- chordless cycles ------------------------------------------------------------

def brute_force_chordless(q):
    """Independent oracle: filter the simple directed cycles of the quiver."""
    g = nx.DiGraph()
    g.add_nodes_from(q.vertices)
    g.add_edges_from((a.source, a.target) for a in q.arrows)
    found = set()
    for cyc in nx.simple_cycles(g):
        if len(cyc) < 3:
            continue
        vs = set(cyc)
        induced = [a for a in q.arrows if a.source in vs and a.target in vs]
        if len(induced) == len(cyc):
            i = cyc.index(min(cyc, key=lambda v: (str(type(v)), str(v))))
            found.add(tuple(cyc[i:] + cyc[:i]))
    return found


def as_vertex_cycles(cycles):
    out = set()
    for c in cycles:
        vs = list(c.vertices)
        i = vs.index(min(vs, key=lambda v: (str(type(v)), str(v))))
        out.add(tuple(vs[i:] + vs[:i]))
    return out


def test_q9_cycles_match_brute_force(q9):
    cycles = chordless_cycles(q9)
    assert len(cycles) == 4
    assert as_vertex_cycles(cycles) == brute_force_chordless(q9)
    assert {tuple(sorted(c.vertices)) for c in cycles} == {
        (1, 2, 3), (2, 3, 4, 5), (3, 4, 6, 7, 8), (4, 6, 9)}


def test_q7_cycles(q7):
    cycles = chordless_cycles(q7)
    assert {tuple(sorted(c.vertices)) for c in cycles} == {
        (1, 2, 3, 4, 5), (4, 5, 6, 7)}
    assert as_vertex_cycles(cycles) == brute_force_chordless(q7)


def test_q9_arrow_classification(q9):
    st_ = analyze_structure(q9)
    assert sorted(st_.interior_arrows) == ["2->3", "3->4", "4->6"]
    assert len(st_.boundary_arrows) == 9
    # dual graph: path of 4 cycle nodes plus 9 leaf branches
    assert len(st_.dual.trunk_edges) == 3
    assert len(st_.dual.leaf_branches) == 9
    assert st_.dual.is_tree()


def test_c3_structure(c3):
    st_ = analyze_structure(c3)
    assert len(st_.cycles) == 1
    assert len(st_.boundary_arrows) == 3
    assert len(st_.dual.leaf_branches) == 3
    assert st_.dual.is_tree()


# -- validation ------------------------------------------------------------------

def test_validate_fixtures_pass(q9, q7, c3):
    for q in (q9, q7, c3):
        assert validate_dimer_tree(q).ok


def test_validate_single_arrow_fails_cycle_cover():
    q = quiver_from_arrows([(1, 2)])
    rep = validate_dimer_tree(q)
    assert not rep.ok
    failed = {c.name for c in rep.failed()}
    assert "every_arrow_on_a_cycle" in failed


def test_validate_non_tree_dual_fails():
    # two hexagons sharing the two arrows 1->2 and 4->5
    q = quiver_from_arrows([(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1),
                            (2, 7), (7, 4), (5, 8), (8, 1)])
    rep = validate_dimer_tree(q)
    assert not rep.ok
    assert "dual_graph_is_tree" in {c.name for c in rep.failed()}


def test_arrow_in_three_cycles_reported():
    q = quiver_from_arrows([(1, 2), (2, 3), (3, 1), (2, 4), (4, 1), (2, 5), (5, 1)])
    st_ = analyze_structure(q)
    assert st_.classification["1->2"] == "overloaded"
    assert any("3 chordless cycles" in p for p in st_.problems)
    rep = validate_dimer_tree(q)
    assert not rep.ok
    assert "every_arrow_in_at_most_two_cycles" in {c.name for c in rep.failed()}


# -- potential -------------------------------------------------------------------

def test_potential_c3(c3):
    pot = build_potential(c3)
    assert len(pot.terms) == 1
    assert pot.terms[0][0] == 1


def test_potential_q7_signs(q7):
    pot = build_potential(q7)
    signs = {tuple(sorted(c.vertices)): s for s, c in pot.terms}
    assert signs[(1, 2, 3, 4, 5)] == 1    # base cycle under the tie-break
    assert signs[(4, 5, 6, 7)] == -1


def test_potential_q9_alternates_along_dual_path(q9):
    pot = build_potential(q9)
    signs = {tuple(sorted(c.vertices)): s for s, c in pot.terms}
    assert signs[(1, 2, 3)] == 1
    assert signs[(2, 3, 4, 5)] == -1
    assert signs[(3, 4, 6, 7, 8)] == 1
    assert signs[(4, 6, 9)] == -1
    assert tuple(sorted(pot.base_cycle.vertices)) == (1, 2, 3)


def test_potential_requires_valid_quiver():
    q = quiver_from_arrows([(1, 2)])
    with pytest.raises(QuiverError):
        build_potential(q)


# -- cycle paths and weights ------------------------------------------------------

PAPER_TABLE = {
    "1->2": ("1->2->3->4->6->9", 1),
    "3->1": ("3->1->2", 2),
    "8->3": ("8->3->4->5", 1),
    "7->8": ("7->8->3", 2),
    "6->7": ("6->7->8", 2),
    "6->9": ("6->9->4", 2),
    "9->4": ("9->4->6->7", 1),
    "4->5": ("4->5->2", 2),
    "5->2": ("5->2->3->1", 1),
}


def test_q9_cycle_paths_and_weights(q9):
    wr = weight_report(q9)
    got = {e.arrow: (e.cycle_path.pretty(q9), e.weight) for e in wr.entries}
    assert got == PAPER_TABLE
    assert wr.total_weight == 14
    assert wr.half == 7


def test_cycle_path_examples(q9, q7):
    st9 = analyze_structure(q9)
    cp = cycle_path(q9, st9, "1->2")
    assert cp.arrows == ("1->2", "2->3", "3->4", "4->6", "6->9")
    assert len(cp.cycles) == cp.length - 1
    assert len(set(id(c) for c in cp.cycles)) == len(cp.cycles)
    assert cycle_path(q9, st9, "3->1").arrows == ("3->1", "1->2")
    st7 = analyze_structure(q7)
    assert cycle_path(q7, st7, "1->4").arrows == ("1->4", "4->5", "5->6")


def test_cycle_path_rejects_interior(q9):
    st9 = analyze_structure(q9)
    with pytest.raises(QuiverError, match="not a boundary arrow"):
        cycle_path(q9, st9, "2->3")


def test_cocycle_recovers_cycle_path(q9):
    st9 = analyze_structure(q9)
    wr = weight_report(q9, st9)
    for e in wr.entries:
        last = e.cycle_path.arrows[-1]
        back = cycle_path(q9, st9, last, "cocycle")
        assert back.arrows == e.cycle_path.arrows


def test_cn_weights_all_two():
    for n in range(3, 9):
        q = cycle_quiver(n)
        wr = weight_report(q)
        assert all(e.weight == 2 and e.coweight == 2 for e in wr.entries)
        assert wr.total_weight == 2 * n


def test_q7_weights(q7):
    wr = weight_report(q7)
    by = {e.arrow: e.weight for e in wr.entries}
    # 4->5 is the interior arrow shared by both cycles, so it carries no weight
    assert by == {"2->1": 2, "1->4": 1, "5->3": 2, "3->2": 2,
                  "5->6": 2, "6->7": 2, "7->4": 1}
    assert wr.total_weight == 12


# -- randomized properties ---------------------------------------------------------

tree_spec = st.tuples(
    st.lists(st.integers(min_value=3, max_value=6), min_size=1, max_size=4),
    st.lists(st.integers(min_value=0, max_value=10 ** 6), min_size=3, max_size=3),
)


@settings(max_examples=40, deadline=None)
@given(tree_spec)
def test_random_dimer_trees_satisfy_invariants(spec):
    lengths, attach = spec
    q = glued_dimer_tree(lengths, attach)
    rep = validate_dimer_tree(q)
    assert rep.ok, [c.name for c in rep.failed()]
    wr = weight_report(q, rep.structure)
    assert wr.total_weight % 2 == 0
    assert sum(e.weight for e in wr.entries) == sum(e.coweight for e in wr.entries)
    # every vertex has exactly two incident boundary arrows
    boundary = set(rep.structure.boundary_arrows)
    for v in q.vertices:
        inc = [a for a in q.arrows
               if a.id in boundary and v in (a.source, a.target)]
        assert len(inc) == 2
    assert as_vertex_cycles(rep.structure.cycles) == brute_force_chordless(q)


@settings(max_examples=25, deadline=None)
@given(tree_spec)
def test_random_cocycle_duality(spec):
    lengths, attach = spec
    q = glued_dimer_tree(lengths, attach)
    st_ = analyze_structure(q)
    wr = weight_report(q, st_)
    for e in wr.entries:
        back = cycle_path(q, st_, e.cycle_path.arrows[-1], "cocycle")
        assert back.arrows == e.cycle_path.arrows
