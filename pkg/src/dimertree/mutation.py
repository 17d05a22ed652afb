"""Quiver-with-potential mutation and the reduction to a single cycle.

The engine provides mutation at a vertex (new composite arrows, reversed
arrows at the vertex, substitution in the potential, then elimination of
reducible 2-cycle terms), a small family of weight-checked local moves that
are derived or singular equivalences, and a driver that shrinks a dimer tree
quiver leaf cycle by leaf cycle until a single chordless cycle remains, with
the total weight preserved at every step.

Only the 2-cycle patterns produced by these moves are reduced: each member of
the 2-cycle may occur in at most one further potential term, linearly, and is
then substituted away.  Anything else is reported, never dropped.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .quiver import (
    Arrow,
    Quiver,
    QuiverError,
    analyze_structure,
    build_potential,
    cycle_path,
    leaf_cycles,
    validate_dimer_tree,
)


class MutationError(RuntimeError):
    pass


class ReductionError(RuntimeError):
    def __init__(self, message: str, trace: "ReductionTrace | None" = None):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class PotentialTerm:
    coeff: int
    word: tuple[str, ...]       # cyclic word of arrow ids

    def rotated_to_front(self, arrow_id: str) -> "PotentialTerm":
        i = self.word.index(arrow_id)
        return PotentialTerm(self.coeff, self.word[i:] + self.word[:i])


def _canonical_word(word: tuple[str, ...]) -> tuple[str, ...]:
    best = min(range(len(word)), key=lambda i: word[i:] + word[:i])
    return word[best:] + word[:best]


@dataclass
class QP:
    quiver: Quiver
    terms: list[PotentialTerm]
    names: dict[str, str] = field(default_factory=dict)

    def display(self, arrow_id: str) -> str:
        return self.names.get(arrow_id, arrow_id)

    def term_words(self) -> set[tuple[str, ...]]:
        return {_canonical_word(t.word) for t in self.terms}

    def copy(self) -> "QP":
        return QP(self.quiver, list(self.terms), dict(self.names))


def qp_from_quiver(q: Quiver) -> QP:
    """Canonical quiver-with-potential: signed sum of the chordless cycles."""
    report = validate_dimer_tree(q)
    if not report.ok:
        raise MutationError(
            "not a dimer tree quiver: failed "
            + ", ".join(c.name for c in report.failed()))
    pot = build_potential(q, report.structure)
    terms = [PotentialTerm(s, _canonical_word(c.arrows)) for s, c in pot.terms]
    return QP(q, terms)


def _fresh_arrow_id(qp: QP, base: str) -> str:
    used = set(qp.quiver.arrow_by_id) | set(qp.names)
    cand = base
    n = 1
    while cand in used:
        n += 1
        cand = f"{base}#{n}"
    return cand


def _fresh_vertex(qp: QP, base) -> str:
    cand = f"{base}'"
    while cand in set(qp.quiver.vertices):
        cand += "'"
    return cand


def _word_is_cyclic_path(q: Quiver, word: tuple[str, ...]) -> bool:
    for a, b in zip(word, word[1:] + word[:1]):
        if q.arrow_by_id[a].target != q.arrow_by_id[b].source:
            return False
    return True


# ---------------------------------------------------------------------------
# mutation at a vertex
# ---------------------------------------------------------------------------

def qp_mutate(qp: QP, k) -> QP:
    """Mutation at k: composite arrows for the paths through k, arrows at k
    reversed, potential substituted, then reducible 2-cycle terms eliminated."""
    q = qp.quiver
    if k not in set(q.vertices):
        raise MutationError(f"unknown vertex {k!r}")
    ins = [a for a in q.arrows if a.target == k]
    outs = [a for a in q.arrows if a.source == k]
    for a in ins:
        if q.arrow_between(k, a.source) is not None:
            raise MutationError(f"2-cycle through {k!r}; mutation undefined")

    composite: dict[tuple[str, str], str] = {}
    reverse: dict[str, str] = {}
    arrows: list[Arrow] = [a for a in q.arrows
                           if a.source != k and a.target != k]
    names = dict(qp.names)
    used = {a.id for a in q.arrows}

    def fresh(base: str) -> str:
        cand = base
        n = 1
        while cand in used:
            n += 1
            cand = f"{base}#{n}"
        used.add(cand)
        return cand

    for a in ins:
        for b in outs:
            cid = fresh(f"[{qp.display(a.id)}.{qp.display(b.id)}]")
            composite[(a.id, b.id)] = cid
            arrows.append(Arrow(cid, a.source, b.target))
            names[cid] = cid
    for a in ins + outs:
        rid = fresh(f"{qp.display(a.id)}~")
        reverse[a.id] = rid
        arrows.append(Arrow(rid, a.target, a.source))
        names[rid] = rid

    in_ids = {a.id for a in ins}
    out_ids = {a.id for a in outs}
    new_terms: list[PotentialTerm] = []
    for t in qp.terms:
        word = t.word
        if not any(aid in in_ids or aid in out_ids for aid in word):
            new_terms.append(t)
            continue
        # rotate so the word does not start at k, then substitute composites
        start = next((i for i, aid in enumerate(word)
                      if q.arrow_by_id[aid].source != k), None)
        if start is None:
            raise MutationError(f"potential term {word} never leaves {k!r}")
        word = word[start:] + word[:start]
        out: list[str] = []
        i = 0
        while i < len(word):
            aid = word[i]
            if aid in in_ids:
                nxt = word[(i + 1) % len(word)]
                if nxt not in out_ids:
                    raise MutationError(
                        f"term {word} enters {k!r} but does not leave")
                out.append(composite[(aid, nxt)])
                i += 2
            else:
                out.append(aid)
                i += 1
        new_terms.append(PotentialTerm(t.coeff, tuple(out)))
    for a in ins:
        for b in outs:
            new_terms.append(PotentialTerm(
                1, (composite[(a.id, b.id)], reverse[b.id], reverse[a.id])))

    out_q = Quiver([v for v in q.vertices], arrows, name=q.name)
    result = QP(out_q, new_terms, names)
    return _reduce_two_cycles(result)


def _reduce_two_cycles(qp: QP) -> QP:
    """Eliminate 2-cycle potential terms by the linear substitutions their
    cyclic derivatives dictate."""
    terms = list(qp.terms)
    arrows = {a.id: a for a in qp.quiver.arrows}
    while True:
        two = next((t for t in terms if len(t.word) == 2), None)
        if two is None:
            break
        x, y = two.word
        terms.remove(two)

        def occurrences(aid):
            occ = []
            for t in terms:
                cnt = t.word.count(aid)
                if cnt:
                    occ.append((t, cnt))
            return occ

        occ_x, occ_y = occurrences(x), occurrences(y)
        if any(c > 1 for _, c in occ_x) or len(occ_x) > 1 \
                or any(c > 1 for _, c in occ_y) or len(occ_y) > 1:
            raise MutationError(
                f"irreducible 2-cycle ({qp.display(x)}, {qp.display(y)}): "
                "member arrow occurs in more than one further term")
        new_term = None
        if occ_x and occ_y:
            tx = occ_x[0][0].rotated_to_front(x)
            ty = occ_y[0][0].rotated_to_front(y)
            coeff = -tx.coeff * ty.coeff * two.coeff
            word = tx.word[1:] + ty.word[1:]
            new_term = PotentialTerm(coeff, word)
            terms.remove(occ_x[0][0])
            terms.remove(occ_y[0][0])
        elif occ_x:
            terms.remove(occ_x[0][0])   # the other member vanishes
        elif occ_y:
            terms.remove(occ_y[0][0])
        del arrows[x]
        del arrows[y]
        if new_term is not None:
            terms.append(new_term)
    q = qp.quiver
    out_q = Quiver(q.vertices, [arrows[a.id] for a in q.arrows
                                if a.id in arrows], name=q.name)
    for t in terms:
        if not _word_is_cyclic_path(out_q, t.word):
            raise MutationError(f"potential term {t.word} is not a cycle")
    return QP(out_q, terms, dict(qp.names))


def normalize_signs(qp: QP) -> tuple[QP, list[str]]:
    """Renormalize term signs to the alternating tree-distance convention.
    Requires the term words to be exactly the chordless cycles."""
    structure = analyze_structure(qp.quiver)
    cycles = {_canonical_word(c.arrows): c for c in structure.cycles}
    if set(cycles) != qp.term_words():
        raise MutationError(
            "potential terms do not match the chordless cycles; "
            "cannot renormalize")
    pot = build_potential(qp.quiver, structure)
    want = {_canonical_word(c.arrows): s for s, c in pot.terms}
    flips = []
    new_terms = []
    for t in qp.terms:
        w = _canonical_word(t.word)
        if want[w] != t.coeff:
            flips.append("flip sign of cycle "
                         + "->".join(qp.display(a) for a in w))
        new_terms.append(PotentialTerm(want[w], w))
    return QP(qp.quiver, new_terms, dict(qp.names)), flips


# ---------------------------------------------------------------------------
# weight bookkeeping on possibly non-tree intermediates
# ---------------------------------------------------------------------------

def total_weight_lenient(q: Quiver) -> int:
    """Total weight from cycle paths; arrows outside all cycles (coextension
    sockets) are ignored."""
    structure = analyze_structure(q)
    total = 0
    for a in q.arrows:
        if structure.classification[a.id] == "boundary":
            cp = cycle_path(q, structure, a.id, "cycle")
            total += 1 if cp.length % 2 == 1 else 2
    return total


def _weights(q: Quiver):
    structure = analyze_structure(q)
    out = {}
    for a in q.arrows:
        if structure.classification[a.id] == "boundary":
            cp = cycle_path(q, structure, a.id, "cycle")
            ccp = cycle_path(q, structure, a.id, "cocycle")
            out[a.id] = (1 if cp.length % 2 == 1 else 2,
                         1 if ccp.length % 2 == 1 else 2)
    return structure, out


# ---------------------------------------------------------------------------
# moves
# ---------------------------------------------------------------------------

MOVE_KINDS = ("mutate_in_out", "mutate_out_out", "mutate_coextended",
              "triangle_slide", "remove_3cycle", "one_point_ext",
              "one_point_coext")

DERIVED = "derived"
SINGULAR = "singular"


@dataclass
class Move:
    kind: str
    site: dict
    equivalence: str
    weight_before: int
    weight_after: int
    dimer_tree_after: bool
    notes: list[str] = field(default_factory=list)


def apply_move(qp: QP, kind: str, site: dict) -> tuple[QP, Move]:
    """Apply a named move after checking its weight preconditions; the total
    weight is recomputed and asserted unchanged."""
    if kind not in MOVE_KINDS:
        raise MutationError(f"unknown move kind {kind!r}")
    before = total_weight_lenient(qp.quiver)
    notes: list[str] = []
    if kind == "mutate_in_out":
        out = _move_mutate_in_out(qp, site, notes)
        equivalence = DERIVED
    elif kind == "mutate_out_out":
        out = _move_mutate_out_out(qp, site, notes)
        equivalence = DERIVED
    elif kind == "mutate_coextended":
        out = _move_mutate_coextended(qp, site, notes)
        equivalence = DERIVED
    elif kind == "triangle_slide":
        out = _move_triangle_slide(qp, site, notes)
        equivalence = SINGULAR
    elif kind == "remove_3cycle":
        out = _move_remove_3cycle(qp, site, notes)
        equivalence = SINGULAR
    elif kind == "one_point_ext":
        out = _move_one_point(qp, site, notes, co=False)
        equivalence = SINGULAR
    else:
        out = _move_one_point(qp, site, notes, co=True)
        equivalence = SINGULAR
    after = total_weight_lenient(out.quiver)
    if after != before:
        raise MutationError(
            f"move {kind} at {site} changed the total weight {before}->{after}")
    claims_tree = kind not in ("one_point_ext", "one_point_coext")
    tree_ok = False
    if claims_tree:
        report = validate_dimer_tree(out.quiver)
        tree_ok = report.ok
        if not tree_ok:
            raise MutationError(
                f"move {kind} at {site} left an invalid quiver: failed "
                + ", ".join(c.name for c in report.failed()))
        out, flips = normalize_signs(out)
        notes.extend(flips)
    move = Move(kind, site, equivalence, before, after, tree_ok, notes)
    return out, move


def _boundary_weights_or_fail(qp: QP):
    return _weights(qp.quiver)


def _move_mutate_in_out(qp: QP, site: dict, notes: list[str]) -> QP:
    """Mutation at a two-valent vertex: the unique in-arrow has coweight 1 and
    the unique out-arrow has weight 2."""
    k = site["vertex"]
    q = qp.quiver
    ins = [a for a in q.arrows if a.target == k]
    outs = [a for a in q.arrows if a.source == k]
    if len(ins) != 1 or len(outs) != 1:
        raise MutationError(
            f"vertex {k!r} is not two-valent (in {len(ins)}, out {len(outs)})")
    structure, w = _weights(q)
    alpha, beta = ins[0], outs[0]
    for a in (alpha, beta):
        if a.id not in w:
            raise MutationError(f"arrow {qp.display(a.id)} is not boundary")
    if w[alpha.id][1] != 1:
        raise MutationError(
            f"coweight of {qp.display(alpha.id)} is {w[alpha.id][1]}, need 1")
    if w[beta.id][0] != 2:
        raise MutationError(
            f"weight of {qp.display(beta.id)} is {w[beta.id][0]}, need 2")
    return qp_mutate(qp, k)


def _move_mutate_out_out(qp: QP, site: dict, notes: list[str]) -> QP:
    """Mutation at a vertex with one in-arrow and two boundary out-arrows,
    where one out-cycle closes through a non-boundary path and the other
    continues into an all-boundary cycle."""
    k = site["vertex"]
    q = qp.quiver
    ins = [a for a in q.arrows if a.target == k]
    outs = [a for a in q.arrows if a.source == k]
    if len(ins) != 1 or len(outs) != 2:
        raise MutationError(
            f"vertex {k!r} has in {len(ins)}, out {len(outs)}; need 1 and 2")
    structure, w = _weights(q)
    gamma = ins[0]
    if not all(o.id in w for o in outs):
        raise MutationError(f"out-arrows at {k!r} must be boundary arrows")
    ok_assignment = False
    for alpha, beta in (outs, outs[::-1]):
        ca = [c for c in structure.cycles
              if gamma.id in c.arrows and alpha.id in c.arrows]
        cb = [c for c in structure.cycles
              if gamma.id in c.arrows and beta.id in c.arrows]
        if len(ca) != 1 or len(cb) != 1:
            continue
        # v completes gamma*alpha; it must not be a single boundary arrow
        va = [a for a in ca[0].arrows if a not in (gamma.id, alpha.id)]
        if len(va) == 1 and structure.classification[va[0]] == "boundary":
            continue
        # sigma follows beta in its cycle; sigma's other cycle is all boundary
        sigma = cb[0].successor_in(beta.id)
        osig = [c for c in structure.cycles
                if sigma in c.arrows and c is not cb[0]]
        if len(osig) != 1:
            continue
        rest = [a for a in osig[0].arrows if a != sigma]
        if not all(structure.classification[a] == "boundary" for a in rest):
            continue
        ok_assignment = True
        break
    if not ok_assignment:
        raise MutationError(
            f"pattern for the double-out mutation not found at {k!r}")
    return qp_mutate(qp, k)


def _move_mutate_coextended(qp: QP, site: dict, notes: list[str]) -> QP:
    """Mutation at a vertex that just received a coextension socket; the
    socket arrow extends every path, the reversed companion needs coweight 1."""
    k = site["vertex"]
    socket = site["socket"]
    q = qp.quiver
    ins = [a for a in q.arrows if a.target == k]
    outs = [a for a in q.arrows if a.source == k]
    if len(ins) != 1:
        raise MutationError(f"vertex {k!r} must have a single in-arrow")
    if socket not in {a.id for a in outs}:
        raise MutationError(f"socket {socket!r} does not leave {k!r}")
    structure = analyze_structure(q)
    if structure.classification[socket] != "none":
        raise MutationError(f"socket {socket!r} lies on a cycle")
    return qp_mutate(qp, k)


def _move_triangle_slide(qp: QP, site: dict, notes: list[str]) -> QP:
    """Relocate a boundary triangle across its neighbouring square: the local
    rewrite replacing the 3-cycle hanging at sigma by one hanging at the far
    side, on a fresh vertex.  Singular equivalence; the interior path u of the
    outer cycle may be empty."""
    q = qp.quiver
    rho = q.arrow_by_id[site["rho"]]
    sigma = q.arrow_by_id[site["sigma"]]
    alpha = q.arrow_by_id[site["alpha"]]
    beta = q.arrow_by_id[site["beta"]]
    gamma = q.arrow_by_id[site["gamma"]]
    v1, v2 = rho.source, rho.target
    v4 = sigma.target
    v3 = beta.target
    v5 = gamma.target
    if sigma.source != v2 or alpha.source != v3 or alpha.target != v2 \
            or beta.source != v4 or gamma.source != v4:
        raise MutationError("triangle-slide arrows do not close up")
    structure, w = _weights(q)
    for a in (alpha, beta, gamma):
        if structure.classification[a.id] != "boundary":
            raise MutationError(
                f"{qp.display(a.id)} must be a boundary arrow")
    for a in (rho, sigma):
        if structure.classification[a.id] != "interior":
            raise MutationError(
                f"{qp.display(a.id)} must be an interior arrow")
    tri = next((c for c in structure.cycles
                if set(c.arrows) == {sigma.id, beta.id, alpha.id}), None)
    if tri is None:
        raise MutationError("no triangle on sigma, beta, alpha")
    outer = next((c for c in structure.cycles
                  if rho.id in c.arrows and sigma.id in c.arrows
                  and gamma.id in c.arrows), None)
    if outer is None:
        raise MutationError("no outer cycle on rho, sigma, gamma")
    # path u completes the outer cycle after gamma and before rho
    word = outer.arrows
    i = word.index(gamma.id)
    rest = word[i + 1:] + word[:i + 1]
    j = rest.index(rho.id)
    u_ids = rest[:j]

    names = dict(qp.names)
    used = set(q.arrow_by_id) | set(names)

    def fresh(base):
        cand = base
        n = 1
        while cand in used:
            n += 1
            cand = f"{base}#{n}"
        used.add(cand)
        return cand

    v3p = _fresh_vertex(qp, v3)
    sigma_r = fresh(f"{qp.display(sigma.id)}~")
    eps = fresh(f"[{qp.display(sigma.id)}.{qp.display(v3p)}]")
    delta_r = fresh(f"{v3p}>{qp.display(beta.id)}~")
    gamma_r = fresh(f"{qp.display(gamma.id)}~")
    removed = {sigma.id, alpha.id, beta.id, gamma.id}
    arrows = [a for a in q.arrows if a.id not in removed]
    arrows.append(Arrow(sigma_r, v4, v2))
    arrows.append(Arrow(eps, v2, v3p))
    arrows.append(Arrow(delta_r, v3p, v4))
    arrows.append(Arrow(gamma_r, v5, v4))
    if not u_ids:
        # the outer cycle was a triangle: rho is consumed and gamma reversed
        # closes through the old rho cycle
        arrows = [a for a in arrows if a.id != rho.id]
    else:
        comp = fresh(f"[{qp.display(sigma.id)}.{qp.display(gamma.id)}]")
        arrows.append(Arrow(comp, v2, v5))
    vertices = [v for v in q.vertices if v != v3] + [v3p]
    out_q = Quiver(vertices, arrows, name=q.name)
    for nid in (sigma_r, eps, delta_r, gamma_r):
        names[nid] = nid
    out = QP(out_q, [], names)
    structure2 = analyze_structure(out_q)
    out.terms = [PotentialTerm(s, _canonical_word(c.arrows))
                 for s, c in build_potential(out_q, structure2).terms]
    notes.append(f"replaced vertex {v3!r} by {v3p!r}")
    site["new_vertex"] = v3p
    return out


def _move_remove_3cycle(qp: QP, site: dict, notes: list[str]) -> QP:
    """Delete a boundary triangle: its middle vertex and two boundary arrows
    go away when the coweight into it and the weight out of it are both 1."""
    q = qp.quiver
    alpha = q.arrow_by_id[site["alpha"]]
    beta = q.arrow_by_id[site["beta"]]
    if alpha.target != beta.source:
        raise MutationError("alpha and beta do not meet at a vertex")
    k = alpha.target
    closing = q.arrow_between(beta.target, alpha.source)
    if closing is None:
        raise MutationError("no closing arrow for the 3-cycle")
    structure, w = _weights(q)
    for a in (alpha, beta):
        if structure.classification[a.id] != "boundary":
            raise MutationError(f"{qp.display(a.id)} must be boundary")
    if w[alpha.id][1] != 1:
        raise MutationError(
            f"coweight of {qp.display(alpha.id)} is {w[alpha.id][1]}, need 1")
    if w[beta.id][0] != 1:
        raise MutationError(
            f"weight of {qp.display(beta.id)} is {w[beta.id][0]}, need 1")
    if len([c for c in structure.cycles
            if set(c.arrows) == {alpha.id, beta.id, closing.id}]) != 1:
        raise MutationError("alpha, beta do not bound a 3-cycle")
    arrows = [a for a in q.arrows if a.id not in (alpha.id, beta.id)]
    vertices = [v for v in q.vertices if v != k]
    out_q = Quiver(vertices, arrows, name=q.name)
    out = QP(out_q, [], dict(qp.names))
    structure2 = analyze_structure(out_q)
    out.terms = [PotentialTerm(s, _canonical_word(c.arrows))
                 for s, c in build_potential(out_q, structure2).terms]
    notes.append(f"removed vertex {k!r}")
    return out


def _move_one_point(qp: QP, site: dict, notes: list[str], co: bool) -> QP:
    """One-point (co)extension at a vertex: a fresh vertex with a single
    relation-free arrow; the potential is untouched."""
    v = site["vertex"]
    q = qp.quiver
    if v not in set(q.vertices):
        raise MutationError(f"unknown vertex {v!r}")
    vp = _fresh_vertex(qp, v)
    aid = f"{v}->{vp}" if co else f"{vp}->{v}"
    arrow = Arrow(aid, v, vp) if co else Arrow(aid, vp, v)
    out_q = Quiver(list(q.vertices) + [vp], list(q.arrows) + [arrow],
                   name=q.name)
    notes.append(f"new vertex {vp!r}, socket {aid}")
    site["new_vertex"] = vp
    site["socket"] = aid
    return QP(out_q, list(qp.terms), dict(qp.names))


# ---------------------------------------------------------------------------
# reduction driver
# ---------------------------------------------------------------------------

@dataclass
class TraceStep:
    move: Move
    quiver_after: dict


@dataclass
class ReductionTrace:
    initial: dict
    steps: list[TraceStep]
    final: dict
    final_cycle_length: int

    def to_dict(self) -> dict:
        return {
            "initial": self.initial,
            "steps": [{
                "move": s.move.kind,
                "site": {k: v for k, v in s.move.site.items()},
                "equivalence": s.move.equivalence,
                "total_weight_before": s.move.weight_before,
                "total_weight_after": s.move.weight_after,
                "dimer_tree_after": s.move.dimer_tree_after,
                "notes": s.move.notes,
                "quiver_after": s.quiver_after,
            } for s in self.steps],
            "final": self.final,
            "final_cycle_length": self.final_cycle_length,
        }


def _quiver_doc(q: Quiver) -> dict:
    return {
        "vertices": list(q.vertices),
        "arrows": [[a.id, a.source, a.target] for a in q.arrows],
    }


def _leaf_vseq(qp: QP):
    """Pick the working leaf cycle and list its vertices starting with the
    interior arrow's source."""
    structure = analyze_structure(qp.quiver)
    interior = set(structure.interior_arrows)
    leaves = leaf_cycles(structure)
    if not leaves:
        raise MutationError("no leaf cycle available")
    leaf = min(leaves, key=lambda c: c.key)
    if len(structure.cycles) == 1:
        return structure, leaf, list(leaf.vertices)
    gam = next(a for a in leaf.arrows if a in interior)
    i = leaf.arrows.index(gam)
    verts = list(leaf.vertices[i:]) + list(leaf.vertices[:i])
    return structure, leaf, verts


def reduce_to_cycle(q: Quiver, max_steps: int = 10000) -> ReductionTrace:
    """Shrink a dimer tree quiver to a single chordless cycle by derived and
    singular equivalences, recording every move and auditing the weight."""
    qp = qp_from_quiver(q)
    initial_doc = _quiver_doc(q)
    steps: list[TraceStep] = []
    trace = ReductionTrace(initial_doc, steps, initial_doc, 0)

    def do(kind, site):
        nonlocal qp
        if len(steps) >= max_steps:
            raise ReductionError("reduction exceeded the step budget", trace)
        try:
            qp, move = apply_move(qp, kind, site)
        except (MutationError, QuiverError) as exc:
            raise ReductionError(str(exc), trace) from exc
        steps.append(TraceStep(move, _quiver_doc(qp.quiver)))

    while True:
        structure = analyze_structure(qp.quiver)
        if len(structure.cycles) == 1:
            break
        _, leaf, vseq = _leaf_vseq(qp)
        # phase: process this leaf until the cycle count drops
        while True:
            structure, w = _weights(qp.quiver)
            m = len(vseq)
            v1, v2, v3 = vseq[0], vseq[1], vseq[2]
            gamma = qp.quiver.arrow_between(v1, v2)
            alpha = qp.quiver.arrow_between(v2, v3)
            if gamma is None or alpha is None:
                raise ReductionError(
                    f"leaf bookkeeping lost arrows at {vseq}", trace)
            if w.get(alpha.id, (0, 0))[1] == 2:
                # coextension socket, then mutation at v3 turns the coweight
                site = {"vertex": v3}
                do("one_point_coext", site)
                socket = site["socket"]
                do("mutate_coextended", {"vertex": v3, "socket": socket})
                if m >= 4:
                    for v in vseq[3:]:
                        do("mutate_out_out", {"vertex": v})
                    vseq = [vseq[-1], v2, site["new_vertex"], v3] + vseq[3:-1]
                else:
                    vseq = [v3, v2, site["new_vertex"]]
                structure, w = _weights(qp.quiver)
                alpha2 = qp.quiver.arrow_between(vseq[1], vseq[2])
                if alpha2 is None or w.get(alpha2.id, (0, 0))[1] != 1:
                    raise ReductionError(
                        "coweight still 2 after the coextension detour", trace)
                continue
            if m > 4:
                do("mutate_in_out", {"vertex": v3})
                site = _slide_site_after_mutation(qp, v1, v2, vseq[3])
                do("triangle_slide", site)
                for v in vseq[4:]:
                    do("mutate_out_out", {"vertex": v})
                vseq = [vseq[-1], v2, site["new_vertex"]] + vseq[3:-1]
                continue
            if m == 4:
                do("mutate_in_out", {"vertex": v3})
                site = _slide_site_after_mutation(qp, v1, v2, vseq[3])
                do("triangle_slide", site)
                vseq = [vseq[3], v2, site["new_vertex"]]
                continue
            # m == 3 endgame: delete or absorb the triangle
            beta = qp.quiver.arrow_between(v3, v1)
            if beta is None:
                raise ReductionError(f"no closing arrow at {vseq}", trace)
            if w.get(beta.id, (0, 0))[0] == 1:
                do("remove_3cycle", {"alpha": alpha.id, "beta": beta.id})
            else:
                do("mutate_in_out", {"vertex": v3})
            break

    structure = analyze_structure(qp.quiver)
    final_cycle = structure.cycles[0]
    trace.final = _quiver_doc(qp.quiver)
    trace.final_cycle_length = len(final_cycle)
    return trace


def _slide_site_after_mutation(qp: QP, v1, v2, v4) -> dict:
    """Locate the triangle-slide pattern created by the preceding mutation."""
    q = qp.quiver
    rho = q.arrow_between(v1, v2)
    sigma = q.arrow_between(v2, v4)
    if rho is None or sigma is None:
        raise MutationError("slide pattern: rho or sigma missing")
    structure = analyze_structure(q)
    tri = next((c for c in structure.cycles
                if sigma.id in c.arrows and len(c) == 3
                and rho.id not in c.arrows), None)
    if tri is None:
        raise MutationError("slide pattern: no triangle at sigma")
    beta = tri.successor_in(sigma.id)
    alpha = tri.successor_in(beta)
    outer = next((c for c in structure.cycles
                  if rho.id in c.arrows and sigma.id in c.arrows), None)
    if outer is None:
        raise MutationError("slide pattern: no outer cycle")
    gamma = outer.successor_in(sigma.id)
    return {"rho": rho.id, "sigma": sigma.id, "alpha": alpha,
            "beta": beta, "gamma": gamma}


def trace_to_json(trace: ReductionTrace) -> str:
    return json.dumps(trace.to_dict(), indent=2, default=str) + "\n"
