"""Reduction of lifted 1-sharblies to Voronoi-reduced ones.

Every choice the reducer makes has to be GL_2(O)-equivariant.  Reducing
points only depend on the normal form of the edge's lift, so they are
equivariant by construction.  The remaining choices (which top cone holds a
barycenter, which central point wins a tie, how interior edges are lifted)
are made after moving the whole triangle into a canonical frame: the frame
is ``gamma_i`` from the normal form of one of its three lifts, picked so that
the moved triangle has the smallest key.  A translate ``g * T`` lands in
exactly the same frame, so its subdivision is ``g`` applied to that of ``T``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .gl2 import Mat2, RayVector, Vec2, normal_form, proportional, ray_normalize
from .sharbly import (
    LiftedChain,
    LiftedSharbly1,
    Sharbly,
    SharblyChain,
    default_lift,
    is_lift,
    size,
)
from .voronoi import (
    FieldConeData,
    L,
    barycenter,
    containing_cone,
    get_cone_data,
    is_reduced_set,
)

__all__ = [
    "ReducerConfig",
    "ReductionTrace",
    "TraceNode",
    "ReductionError",
    "reducing_point",
    "inherited_lift",
    "central_point",
    "subdivide",
    "reduce_chain",
    "act",
]

log = logging.getLogger(__name__)


class ReductionError(RuntimeError):
    pass


def _size(x: Vec2, y: Vec2) -> int:
    return size((x, y))


def _reduced(vectors, data) -> bool:
    return is_reduced_set(vectors, data)


def _tie(v: RayVector) -> tuple:
    # tie-break among equally good candidates: the larger key wins
    return tuple(-c for c in v.key())


def _data(d: int, data):
    return data if data is not None else get_cone_data(d)


# ---------------------------------------------------------------------------
# reducing points


def reducing_point(x: Vec2, y: Vec2, M: Mat2, data: FieldConeData | None = None) -> RayVector:
    """Reducing point of the edge ``[x, y]`` chosen through the normal form of its lift ``M``."""
    x, y = ray_normalize(x), ray_normalize(y)
    if not is_lift(M, x, y):
        raise ValueError("M is not a lift of the edge")
    data = _data(x.d, data)
    if _reduced((x, y), data):
        raise ValueError("no reducing point needed")
    M0, gamma = normal_form(M)
    u0 = _reducing_point_normal(M0, data)
    return ray_normalize(gamma.inverse() @ u0)


@lru_cache(maxsize=65536)
def _reducing_point_normal(M0: Mat2, data: FieldConeData) -> RayVector:
    x0, y0 = (ray_normalize(c) for c in M0.cols())
    sigma = containing_cone(L(x0) + L(y0), data)
    cands = [u for u in sigma.generators if u != x0 and u != y0]
    if proportional(x0, y0):
        cands = [u for u in cands if proportional(u, x0)]
    if not cands:
        raise ReductionError("cone has no admissible vertex")
    return min(cands, key=lambda u: (_size(x0, u) + _size(u, y0), _tie(u)))


def inherited_lift(M: Mat2, keep: int, u: Vec2) -> Mat2:
    """``M`` with column ``keep`` (1 or 2) kept and the other column replaced by ``u``."""
    if keep == 1:
        return Mat2.from_columns(M.col(0), u)
    if keep == 2:
        return Mat2.from_columns(u, M.col(1))
    raise ValueError("keep must be 1 or 2")


def _keep_index(M: Mat2, v: RayVector) -> int:
    a, b = M.cols()
    if ray_normalize(a) == v:
        return 1
    if ray_normalize(b) == v:
        return 2
    raise ValueError(f"no column of {M} lies on the ray of {v}")


# ---------------------------------------------------------------------------
# central points


def central_point(
    tri: LiftedSharbly1,
    mode: str,
    u1: RayVector | None = None,
    data: FieldConeData | None = None,
) -> RayVector:
    """Central point for case III.2 (``mode="III"``, needs ``u1``) or case IV.

    The choice is made in ``tri``'s canonical frame, so it is equivariant.
    """
    data = _data(tri.d, data)
    g, framed = _frame(tri)
    u1f = None if u1 is None else ray_normalize(g @ u1)
    w = _central_point_framed(framed, mode, u1f, data)
    return ray_normalize(g.inverse() @ w)


def _central_point_framed(tri: LiftedSharbly1, mode: str, u1, data) -> RayVector:
    v1, v2, v3 = tri.verts
    if mode == "III":
        if u1 is None:
            raise ValueError("case III needs the reducing point u1")
        pts = (v1, v2, v3, u1)
    elif mode == "IV":
        pts = (v1, v2, v3)
    else:
        raise ValueError(f"unknown central point mode {mode!r}")
    top, _ = data.locate(barycenter(pts))
    cands = [w for w in top.generators if w not in tri.verts]
    if not cands:
        raise ReductionError("top cone has no admissible central point")

    def score(w):
        if mode == "III":
            return sum(_reduced((x, w), data) for x in pts)
        edges = sum(_reduced((x, w), data) for x in (v1, v2, v3))
        tris = sum(_reduced(t, data) for t in ((v1, v2, w), (v2, v3, w), (v3, v1, w)))
        return edges + tris

    return min(cands, key=lambda w: (-score(w), _tie(w)))


# ---------------------------------------------------------------------------
# subdivision


def _frame(tri: LiftedSharbly1) -> tuple[Mat2, LiftedSharbly1]:
    best = None
    for M in tri.lifts:
        _, g = normal_form(M)
        moved = tri.act(g)
        k = moved.key()
        if best is None or k < best[0]:
            best = (k, g, moved)
    return best[1], best[2]


@dataclass
class Subdivision:
    case: str
    points: dict[str, RayVector]
    children: list[LiftedSharbly1]
    degenerate: list[tuple[RayVector, ...]] = dc_field(default_factory=list)


def _reduced_flags(tri: LiftedSharbly1, data) -> list[bool]:
    return [_reduced(e, data) for e in tri.edge_pairs()]


def subdivide(tri: LiftedSharbly1, data: FieldConeData | None = None) -> Subdivision:
    """Replace a non-reduced, nondegenerate triangle by the children of its case.

    Children keep the parent's orientation.  Degenerate children are listed
    in ``degenerate`` and left out of ``children``.
    """
    data = _data(tri.d, data)
    if tri.is_degenerate() or _reduced(tri.verts, data):
        raise ValueError("nothing to subdivide")
    g, framed = _frame(tri)
    sub = _subdivide_framed(framed, data)
    ginv = g.inverse()
    return Subdivision(
        sub.case,
        {k: ray_normalize(ginv @ v) for k, v in sub.points.items()},
        [c.act(ginv) for c in sub.children],
        [tuple(ray_normalize(ginv @ v) for v in t) for t in sub.degenerate],
    )


@lru_cache(maxsize=65536)
def _subdivide_framed(tri: LiftedSharbly1, data: FieldConeData) -> Subdivision:
    flags = _reduced_flags(tri, data)
    bad = 3 - sum(flags)
    if bad == 3:
        return _case_I(tri, data)
    if bad == 2:
        # put the one reduced edge opposite v2
        r = {1: 0, 2: 1, 0: 2}[flags.index(True)]
        return _case_II(tri.rotate(r), data)
    if bad == 1:
        # put the one non-reduced edge opposite v1
        return _case_III(tri.rotate(flags.index(False)), data)
    return _case_IV(tri, data)


class _Builder:
    """Collects children and the lifts of their edges."""

    def __init__(self, data):
        self.data = data
        self.lifts: dict[frozenset, Mat2] = {}
        self.children: list[LiftedSharbly1] = []
        self.degenerate: list[tuple[RayVector, ...]] = []

    def exterior(self, x, y, M):
        self.lifts[frozenset((x, y))] = M

    def split(self, x, y, M, u):
        """Exterior edge ``[x, y]`` with lift ``M`` split at ``u``; returns ``u``."""
        self.exterior(x, u, inherited_lift(M, _keep_index(M, x), u))
        self.exterior(u, y, inherited_lift(M, _keep_index(M, y), u))

    def tri(self, a, b, c):
        verts = (a, b, c)
        _, s = Sharbly.from_vectors(verts)
        if s.is_degenerate():
            self.degenerate.append(verts)
            return
        lifts = []
        for x, y in ((b, c), (c, a), (a, b)):
            key = frozenset((x, y))
            if key not in self.lifts:
                self.lifts[key] = default_lift(*sorted((x, y)))
            lifts.append(self.lifts[key])
        self.children.append(LiftedSharbly1(verts, lifts, check=False))

    def done(self, case, points) -> Subdivision:
        return Subdivision(case, points, self.children, self.degenerate)


def _rp(x, y, M, data) -> RayVector:
    M0, gamma = normal_form(M)
    return ray_normalize(gamma.inverse() @ _reducing_point_normal(M0, data))


def _case_I(tri, data) -> Subdivision:
    v1, v2, v3 = tri.verts
    M1, M2, M3 = tri.lifts
    u1 = _rp(v2, v3, M1, data)
    u2 = _rp(v3, v1, M2, data)
    u3 = _rp(v1, v2, M3, data)
    b = _Builder(data)
    b.split(v2, v3, M1, u1)
    b.split(v3, v1, M2, u2)
    b.split(v1, v2, M3, u3)
    b.tri(v1, u3, u2)
    b.tri(u3, v2, u1)
    b.tri(u2, u1, v3)
    b.tri(u1, u2, u3)
    return b.done("I", {"u1": u1, "u2": u2, "u3": u3})


def _case_II(tri, data) -> Subdivision:
    # edge [v3, v1] is the reduced one
    v1, v2, v3 = tri.verts
    M1, M2, M3 = tri.lifts
    u1 = _rp(v2, v3, M1, data)
    u3 = _rp(v1, v2, M3, data)
    b = _Builder(data)
    b.split(v2, v3, M1, u1)
    b.split(v1, v2, M3, u3)
    b.exterior(v3, v1, M2)
    if _size(v1, u1) <= _size(u3, v3):
        b.tri(v1, u3, u1)
        b.tri(u3, v2, u1)
        b.tri(v1, u1, v3)
    else:
        b.tri(v1, u3, v3)
        b.tri(u3, v2, u1)
        b.tri(u3, u1, v3)
    return b.done("II", {"u1": u1, "u3": u3})


def _case_III(tri, data) -> Subdivision:
    # edge [v2, v3] is the non-reduced one
    v1, v2, v3 = tri.verts
    M1, M2, M3 = tri.lifts
    u1 = _rp(v2, v3, M1, data)
    b = _Builder(data)
    b.split(v2, v3, M1, u1)
    b.exterior(v3, v1, M2)
    b.exterior(v1, v2, M3)
    if not _reduced((v2, u1), data) or not _reduced((u1, v3), data) or proportional(v1, v2):
        b.tri(v1, v2, u1)
        b.tri(v1, u1, v3)
        return b.done("III.1", {"u1": u1})
    w = _central_point_framed(tri, "III", u1, data)
    b.tri(v1, v2, w)
    b.tri(w, v2, u1)
    b.tri(w, u1, v3)
    b.tri(w, v3, v1)
    return b.done("III.2", {"u1": u1, "w": w})


def _case_IV(tri, data) -> Subdivision:
    v1, v2, v3 = tri.verts
    M1, M2, M3 = tri.lifts
    w = _central_point_framed(tri, "IV", None, data)
    b = _Builder(data)
    b.exterior(v2, v3, M1)
    b.exterior(v3, v1, M2)
    b.exterior(v1, v2, M3)
    b.tri(v1, v2, w)
    b.tri(w, v2, v3)
    b.tri(w, v3, v1)
    return b.done("IV", {"w": w})


# ---------------------------------------------------------------------------
# driver


@dataclass
class ReducerConfig:
    max_passes: int = 64
    trace_enabled: bool = True

    def __post_init__(self):
        if self.max_passes < 1:
            raise ValueError("max_passes must be at least 1")


@dataclass
class TraceNode:
    input: LiftedSharbly1
    coeff: int
    case: str = ""
    points: dict[str, RayVector] = dc_field(default_factory=dict)
    children: list[TraceNode] = dc_field(default_factory=list)
    degenerate: list[tuple[RayVector, ...]] = dc_field(default_factory=list)

    def leaves(self):
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_json(self) -> dict:
        return {
            "input": self.input.to_json(),
            "coeff": self.coeff,
            "case": self.case,
            "chosen_points": {k: v.to_json() for k, v in sorted(self.points.items())},
            "degenerate_children": [[v.to_json() for v in t] for t in self.degenerate],
            "children": [c.to_json() for c in self.children],
        }


@dataclass
class ReductionTrace:
    roots: list[TraceNode]
    passes: int = 0
    # edge-size tables per pass: pass index -> list of size triples of the new terms
    size_tables: list[list[list[int]]] = dc_field(default_factory=list)
    output: LiftedChain | None = None

    def nodes(self):
        for r in self.roots:
            yield from r.walk()

    def case_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for n in self.nodes():
            out[n.case] = out.get(n.case, 0) + 1
        return out

    def to_json(self) -> dict:
        return {
            "passes": self.passes,
            "size_tables": self.size_tables,
            "roots": [r.to_json() for r in self.roots],
        }


def reduce_chain(
    xi: LiftedChain,
    cfg: ReducerConfig | None = None,
    data: FieldConeData | None = None,
) -> tuple[SharblyChain, ReductionTrace]:
    """Subdivide until every term is Voronoi reduced; returns the reduced chain and the trace.

    The reduced lifted terms are available as ``trace.output`` (a :class:`LiftedChain`).
    """
    cfg = cfg or ReducerConfig()
    data = _data(xi.d, data)
    roots = [TraceNode(tri, c) for c, tri in xi]
    trace = ReductionTrace(roots)
    frontier = list(roots)
    out = LiftedChain(xi.d)
    while frontier:
        todo = []
        for node in frontier:
            tri = node.input
            if tri.is_degenerate():
                node.case = "degenerate"
            elif _reduced(tri.verts, data):
                node.case = "reduced"
                out.append(node.coeff, tri)
            else:
                todo.append(node)
        if not todo:
            break
        if trace.passes >= cfg.max_passes:
            raise ReductionError("reduction did not terminate within configured passes")
        trace.passes += 1
        frontier = []
        table = []
        for node in todo:
            sub = subdivide(node.input, data)
            node.case = sub.case
            node.points = sub.points
            node.degenerate = sub.degenerate
            node.children = [TraceNode(c, node.coeff) for c in sub.children]
            frontier.extend(node.children)
            table.extend(c.sizes() for c in sub.children)
        trace.size_tables.append(table)
        log.debug("pass %d: %d subdivisions, %d new terms", trace.passes, len(todo), len(frontier))
    trace.output = out
    if not cfg.trace_enabled:
        trace.roots = []
    return out.plain(), trace


def act(g: Mat2, xi):
    """Translate a chain (lifted or plain) by ``g``; ``g`` must be invertible."""
    if g.det().is_zero():
        raise ValueError("singular matrix cannot act on chains")
    return xi.act(g)
