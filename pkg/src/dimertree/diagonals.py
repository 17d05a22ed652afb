"""The combinatorial category of 2-diagonals of an even polygon.

Polygon vertices are labelled 1..2N clockwise.  A 2-diagonal joins two
non-adjacent vertices of opposite parity and is oriented from its odd to its
even endpoint.  Pivots advance one endpoint two steps clockwise; the
clockwise rotation R shifts labels by one and re-reads the orientation.

Sides of an oriented diagonal: with clockwise-increasing labels, the right
side of tail->head is the counterclockwise boundary arc from the tail (the
clockwise arc from head back to tail).  A diagonal crosses another from right
to left when its tail sits on that right side.
"""
from __future__ import annotations

from dataclasses import dataclass


class DiagonalError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TwoDiagonal:
    tail: int   # odd label
    head: int   # even label

    def endpoints(self) -> frozenset[int]:
        return frozenset((self.tail, self.head))

    def __repr__(self) -> str:
        return f"({self.tail},{self.head})"


def _norm(x: int, size: int) -> int:
    return (x - 1) % size + 1


def _cw_dist(a: int, b: int, size: int) -> int:
    """Clockwise steps from a to b."""
    return (b - a) % size


def make_diagonal(a: int, b: int, n: int) -> TwoDiagonal:
    """Build a 2-diagonal of the 2n-gon from an unordered endpoint pair."""
    size = 2 * n
    a, b = _norm(a, size), _norm(b, size)
    if a == b:
        raise DiagonalError(f"degenerate diagonal at {a}")
    if (a - b) % 2 == 0:
        raise DiagonalError(f"endpoints {a},{b} have equal parity")
    if _cw_dist(a, b, size) == 1 or _cw_dist(b, a, size) == 1:
        raise DiagonalError(f"{a},{b} are neighbours on the boundary")
    tail, head = (a, b) if a % 2 == 1 else (b, a)
    return TwoDiagonal(tail, head)


def is_two_diagonal(a: int, b: int, n: int) -> bool:
    try:
        make_diagonal(a, b, n)
        return True
    except DiagonalError:
        return False


def enumerate_diagonals(n: int) -> list[TwoDiagonal]:
    if n < 3:
        raise DiagonalError(f"polygon size 2N with N={n} < 3")
    size = 2 * n
    out = []
    for a in range(1, size + 1, 2):
        for b in range(2, size + 1, 2):
            if is_two_diagonal(a, b, n):
                out.append(TwoDiagonal(a, b))
    return sorted(out)


def rotate(d: TwoDiagonal, k: int, n: int) -> TwoDiagonal:
    """Clockwise rotation R^k: both labels advance k; orientation re-read."""
    size = 2 * n
    a = _norm(d.tail + k, size)
    b = _norm(d.head + k, size)
    tail, head = (a, b) if a % 2 == 1 else (b, a)
    return TwoDiagonal(tail, head)


def pivot(d: TwoDiagonal, fix: str, n: int) -> TwoDiagonal | None:
    """2-pivot fixing one endpoint; the other advances two steps clockwise.
    Returns None when the result would touch the boundary."""
    size = 2 * n
    if fix == "tail":
        a, b = d.tail, _norm(d.head + 2, size)
    elif fix == "head":
        a, b = _norm(d.tail + 2, size), d.head
    else:
        raise DiagonalError(f"unknown endpoint {fix!r}")
    try:
        return make_diagonal(a, b, n)
    except DiagonalError:
        return None


def crossing(d1: TwoDiagonal, d2: TwoDiagonal, n: int) -> str | None:
    """None, 'right_to_left' or 'left_to_right': how d2 crosses d1."""
    size = 2 * n
    if d1 == d2:
        return None
    pts = {d1.tail, d1.head, d2.tail, d2.head}
    if len(pts) < 4:
        return None  # shared endpoint: no transversal crossing
    span = _cw_dist(d1.tail, d1.head, size)
    t = _cw_dist(d1.tail, d2.tail, size)
    h = _cw_dist(d1.tail, d2.head, size)
    if (t < span) == (h < span):
        return None  # both endpoints on one side
    # right side of d1 = counterclockwise arc from its tail
    return "left_to_right" if t < span else "right_to_left"


def crosses(d1: TwoDiagonal, d2: TwoDiagonal, n: int) -> bool:
    return crossing(d1, d2, n) is not None


# ---------------------------------------------------------------------------
# translation quiver with pivots, tau = R^-2, and mesh relations
# ---------------------------------------------------------------------------

@dataclass
class Mesh:
    """tau x -> (middle terms) -> x, with the polarization pairing arrows."""
    target: TwoDiagonal
    tau_target: TwoDiagonal
    middles: list[TwoDiagonal]


@dataclass
class TranslationQuiver:
    n: int
    nodes: list[TwoDiagonal]
    arrows: list[tuple[TwoDiagonal, TwoDiagonal]]
    tau: dict[TwoDiagonal, TwoDiagonal]
    sigma: dict[tuple[TwoDiagonal, TwoDiagonal], tuple[TwoDiagonal, TwoDiagonal]]
    meshes: list[Mesh]

    def arrows_into(self, x: TwoDiagonal) -> list[tuple[TwoDiagonal, TwoDiagonal]]:
        return [ar for ar in self.arrows if ar[1] == x]

    def arrows_out_of(self, x: TwoDiagonal) -> list[tuple[TwoDiagonal, TwoDiagonal]]:
        return [ar for ar in self.arrows if ar[0] == x]

    def tau_orbits(self) -> list[list[TwoDiagonal]]:
        seen: set[TwoDiagonal] = set()
        orbits = []
        for d in self.nodes:
            if d in seen:
                continue
            orbit = [d]
            seen.add(d)
            cur = self.tau[d]
            while cur not in seen:
                orbit.append(cur)
                seen.add(cur)
                cur = self.tau[cur]
            orbits.append(orbit)
        return orbits

    def check_translation_axiom(self) -> bool:
        into = {x: set() for x in self.nodes}
        outof = {x: set() for x in self.nodes}
        for s, t in self.arrows:
            into[t].add(s)
            outof[s].add(t)
        for x in self.nodes:
            tx = self.tau[x]
            if {y for y in into[x]} != {y for y in outof[tx]}:
                return False
        return True


def ar_quiver(n: int) -> TranslationQuiver:
    nodes = enumerate_diagonals(n)
    node_set = set(nodes)
    arrows = []
    for d in nodes:
        for fix in ("tail", "head"):
            e = pivot(d, fix, n)
            if e is not None:
                if e not in node_set:
                    raise DiagonalError(f"pivot left the diagonal set: {d} -> {e}")
                arrows.append((d, e))
    tau = {d: rotate(d, -2, n) for d in nodes}
    tau_inv = {v: k for k, v in tau.items()}
    arrow_set = set(arrows)
    sigma = {}
    meshes = []
    for x in nodes:
        tx = tau[x]
        middles = []
        for (y, x2) in arrows:
            if x2 != x:
                continue
            back = (tx, y)
            if back not in arrow_set:
                raise DiagonalError(
                    f"translation axiom fails: no arrow {tx} -> {y}")
            sigma[(y, x)] = back
            middles.append(y)
        meshes.append(Mesh(target=x, tau_target=tx, middles=sorted(middles)))
    return TranslationQuiver(n, nodes, sorted(arrows), tau, sigma, meshes)


def translation_quiver_dot(tq: TranslationQuiver) -> str:
    lines = ["digraph diagonals {"]
    for d in tq.nodes:
        lines.append(f'  "{d.tail},{d.head}" [label="({d.tail},{d.head})"];')
    for s, t in tq.arrows:
        lines.append(f'  "{s.tail},{s.head}" -> "{t.tail},{t.head}";')
    for x, tx in sorted(tq.tau.items()):
        lines.append(f'  "{x.tail},{x.head}" -> "{tx.tail},{tx.head}" '
                     "[style=dashed, arrowhead=empty, constraint=false];")
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# tagged-arc model of the punctured polygon and the bijection onto diagonals
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class BoundaryArc:
    """Arc (a, b) between boundary points of the punctured N-gon, running
    counterclockwise around the puncture; b may not be a or its successor."""
    a: int
    b: int


def enumerate_arcs(n: int) -> list[BoundaryArc]:
    if n < 3:
        raise DiagonalError(f"punctured polygon needs N >= 3, got {n}")
    out = []
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if a != b and (a + 1 - b) % n != 0:
                out.append(BoundaryArc(a, b))
    return sorted(out)


def arc_to_diagonal(arc: BoundaryArc, n: int) -> TwoDiagonal:
    """(a, b) maps to the diagonal from the minus copy of a to the plus copy
    of b.  Boundary labels 1+,1-,2+,2-,... run counterclockwise, so with
    clockwise numeric labels k+ is 2(1-k)+1 and k- is 2(1-k), normalized."""
    size = 2 * n
    minus_a = _norm(2 * (1 - arc.a) + 1, size)
    plus_b = _norm(2 * (1 - arc.b) + 2, size)
    return make_diagonal(minus_a, plus_b, n)


def diagonal_to_arc(d: TwoDiagonal, n: int) -> BoundaryArc:
    a = (-((d.tail - 1) // 2)) % n + 1
    b = (-((d.head - 2) // 2)) % n + 1
    arc = BoundaryArc(a, b)
    if arc_to_diagonal(arc, n) != d:
        raise DiagonalError(f"inverse mismatch for {d}")
    return arc


def arc_pivot(arc: BoundaryArc, fix: str, n: int) -> BoundaryArc | None:
    """Arc moves matching the diagonal pivots through the bijection: fixing
    the arc's first endpoint decrements b, fixing the second decrements a
    (mod N)."""
    if fix == "tail":
        cand = BoundaryArc(arc.a, (arc.b - 2) % n + 1)
    elif fix == "head":
        cand = BoundaryArc((arc.a - 2) % n + 1, arc.b)
    else:
        raise DiagonalError(f"unknown endpoint {fix!r}")
    if cand.a == cand.b or (cand.a + 1 - cand.b) % n == 0:
        return None
    return cand


@dataclass
class ArcBijectionReport:
    n: int
    arc_count: int
    diagonal_count: int
    bijective: bool
    pivot_equivariant: bool
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.bijective and self.pivot_equivariant


def arc_bijection_report(n: int) -> ArcBijectionReport:
    arcs = enumerate_arcs(n)
    diags = enumerate_diagonals(n)
    images = [arc_to_diagonal(a, n) for a in arcs]
    bijective = (len(set(images)) == len(arcs) == len(diags)
                 and set(images) == set(diags)
                 and all(diagonal_to_arc(d, n) in arcs for d in diags))
    equivariant = True
    detail = ""
    for arc in arcs:
        for fix in ("tail", "head"):
            moved = arc_pivot(arc, fix, n)
            expected = pivot(arc_to_diagonal(arc, n), fix, n)
            got = arc_to_diagonal(moved, n) if moved is not None else None
            if got != expected:
                equivariant = False
                detail = f"pivot mismatch at {arc} fix={fix}: {got} != {expected}"
                break
        if not equivariant:
            break
    return ArcBijectionReport(n, len(arcs), len(diags), bijective,
                              equivariant, detail)
