"""Chains of sharblies.

A k-sharbly is stored with its spanning vectors as ray representatives,
sorted by the fixed order on :class:`RayVector`; the sign of the sorting
permutation lives in the chain coefficient.  Degenerate sharblies (all
vectors on one F-line, or a ray repeated) are zero in the complex and are
never stored in a chain.
"""

from __future__ import annotations

from collections import defaultdict

from .gl2 import Mat2, RayVector, Vec2, det2, normal_form, ray_normalize

__all__ = [
    "Sharbly",
    "SharblyChain",
    "LiftedSharbly1",
    "LiftedChain",
    "boundary",
    "size",
    "gamma_key",
    "is_voronoi_reduced",
    "default_lift",
]


def _perm_sign(keys: list) -> int:
    """Sign of the permutation sorting ``keys``; 0 if two keys are equal."""
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    for i, j in zip(order, order[1:]):
        if keys[i] == keys[j]:
            return 0
    sign = 1
    seen = [False] * len(order)
    for start in range(len(order)):
        if seen[start]:
            continue
        j, length = start, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class Sharbly:
    """``[v_1, ..., v_{k+2}]`` with sorted ray-representative vertices."""

    __slots__ = ("verts", "_hash")

    def __init__(self, verts: tuple[RayVector, ...]):
        self.verts = verts
        self._hash = None

    @classmethod
    def from_vectors(cls, vectors) -> tuple[int, Sharbly]:
        """Canonical sharbly and the sign relating it to ``[vectors]`` as given.

        The sign is 0 when two vectors share a ray.
        """
        rays = [ray_normalize(v) for v in vectors]
        sign = _perm_sign([r.key() for r in rays])
        return sign, cls(tuple(sorted(rays)))

    @property
    def k(self) -> int:
        return len(self.verts) - 2

    @property
    def d(self) -> int:
        return self.verts[0].d

    def has_repeats(self) -> bool:
        return len(set(self.verts)) < len(self.verts)

    def is_degenerate(self) -> bool:
        if self.has_repeats():
            return True
        first = self.verts[0]
        return all(det2(first, v).is_zero() for v in self.verts[1:])

    def edges(self) -> list[Sharbly]:
        n = len(self.verts)
        return [Sharbly((self.verts[i], self.verts[j])) for i in range(n) for j in range(i + 1, n)]

    def act(self, g: Mat2) -> tuple[int, Sharbly]:
        return Sharbly.from_vectors([g @ v for v in self.verts])

    def __eq__(self, other):
        if not isinstance(other, Sharbly):
            return NotImplemented
        return self.verts == other.verts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.verts)
        return self._hash

    def __lt__(self, other: Sharbly) -> bool:
        return self.key() < other.key()

    def key(self) -> tuple:
        return tuple(v.key() for v in self.verts)

    def __repr__(self):
        return "[" + ", ".join(f"({v.x1}, {v.x2})" for v in self.verts) + "]"

    def to_json(self) -> list:
        return [v.to_json() for v in self.verts]


class SharblyChain:
    """Finite Z-linear combination of canonical, nondegenerate sharblies."""

    def __init__(self, d: int = 2):
        self.d = d
        self.terms: dict[Sharbly, int] = {}

    @classmethod
    def from_terms(cls, terms, d: int = 2) -> SharblyChain:
        """Build from ``(coeff, vectors)`` pairs."""
        chain = cls(d)
        for coeff, vectors in terms:
            chain.add(vectors, coeff)
        return chain

    def add(self, vectors, coeff: int = 1) -> None:
        sign, s = Sharbly.from_vectors(vectors)
        self.add_sharbly(s, sign * coeff)

    def add_sharbly(self, s: Sharbly, coeff: int) -> None:
        if not coeff or s.is_degenerate():
            return
        c = self.terms.get(s, 0) + coeff
        if c:
            self.terms[s] = c
        else:
            del self.terms[s]

    def items(self):
        return sorted(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.items())

    def __eq__(self, other):
        if not isinstance(other, SharblyChain):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: SharblyChain) -> SharblyChain:
        out = self.copy()
        for s, c in other.terms.items():
            out.add_sharbly(s, c)
        return out

    def __neg__(self) -> SharblyChain:
        out = SharblyChain(self.d)
        out.terms = {s: -c for s, c in self.terms.items()}
        return out

    def __sub__(self, other: SharblyChain) -> SharblyChain:
        return self + (-other)

    def copy(self) -> SharblyChain:
        out = SharblyChain(self.d)
        out.terms = dict(self.terms)
        return out

    def act(self, g: Mat2) -> SharblyChain:
        out = SharblyChain(self.d)
        for s, c in self.terms.items():
            sign, t = s.act(g)
            out.add_sharbly(t, sign * c)
        return out

    def __repr__(self):
        parts = [f"{c:+d}*{s!r}" for s, c in self.items()]
        return "SharblyChain(" + " ".join(parts) + ")"

    def to_json(self) -> dict:
        return {
            "field": self.d,
            "terms": [{"coeff": c, "verts": s.to_json()} for s, c in self.items()],
        }


def boundary(chain: SharblyChain) -> SharblyChain:
    """``d[v_1..v_n] = sum_i (-1)^i [v_1..^v_i..v_n]`` (i counted from 1)."""
    out = SharblyChain(chain.d)
    for s, c in chain.terms.items():
        n = len(s.verts)
        if n < 2:
            continue
        for i in range(n):
            face = s.verts[:i] + s.verts[i + 1:]
            # faces of a sorted tuple stay sorted
            out.add_sharbly(Sharbly(face), c if i % 2 else -c)
    return out


def size(edge) -> int:
    """``|Norm(det(v | w))|`` for the spanning vectors of a 0-sharbly."""
    v, w = edge.verts if isinstance(edge, Sharbly) else (ray_normalize(x) for x in edge)
    n = abs(det2(v, w).norm())
    if n.denominator != 1:
        raise ValueError("size needs integral spanning vectors")
    return int(n)


def gamma_key(edge) -> tuple[Mat2, int]:
    """``(key, sign)`` classifying a nondegenerate 0-sharbly modulo GL_2(O).

    ``key`` is the normal form with the smallest key among the presentations
    of the edge (both column orders, and the sign of one column, since
    ``diag(-1, -1)`` already acts).  ``sign`` is the orientation of the given
    edge relative to the presentation realizing ``key``; it is 0 when the
    class is equivalent to its own reverse, in which case it is 2-torsion.
    """
    if not isinstance(edge, Sharbly):
        sign, edge = Sharbly.from_vectors(edge)
    else:
        sign = 1
    if edge.is_degenerate():
        raise ValueError("degenerate edge has no class key")
    v, w = edge.verts
    found: dict[Mat2, set] = {}
    for orient, (a, b) in ((1, (v, w)), (-1, (w, v))):
        for s in (1, -1):
            M0, _ = normal_form(Mat2.from_columns(a, b.scale(s)))
            found.setdefault(M0, set()).add(orient)
    key = min(found, key=Mat2.key)
    orients = found[key]
    if len(orients) == 2:
        return key, 0
    return key, sign * orients.pop()


def is_voronoi_reduced(s: Sharbly, data=None) -> bool:
    from .voronoi import is_reduced_set

    if s.is_degenerate():
        return True
    return is_reduced_set(s.verts, data)


# ---------------------------------------------------------------------------
# lifted 1-sharblies


def default_lift(x: Vec2, y: Vec2) -> Mat2:
    """Lift whose columns are the spanning vectors in the given order."""
    return Mat2.from_columns(ray_normalize(x), ray_normalize(y))


class LiftedSharbly1:
    """Triangle ``[v1, v2, v3]`` with lifts ``M1, M2, M3``; ``Mi`` lifts the
    edge opposite ``vi``, so the edges are ``[v2, v3]``, ``[v3, v1]``,
    ``[v1, v2]``."""

    __slots__ = ("verts", "lifts")

    def __init__(self, verts, lifts=None, check: bool = True):
        self.verts: tuple[RayVector, ...] = tuple(ray_normalize(v) for v in verts)
        if len(self.verts) != 3:
            raise ValueError("a 1-sharbly has three vertices")
        if lifts is None:
            lifts = [default_lift(x, y) for x, y in self.edge_pairs()]
        self.lifts: tuple[Mat2, ...] = tuple(lifts)
        if len(self.lifts) != 3:
            raise ValueError("a lifted 1-sharbly needs three lifts")
        if check:
            for (x, y), M in zip(self.edge_pairs(), self.lifts):
                if not is_lift(M, x, y):
                    raise ValueError(f"matrix {M} is not a lift of the edge [{x}, {y}]")

    @property
    def d(self) -> int:
        return self.verts[0].d

    def edge_pairs(self) -> list[tuple[RayVector, RayVector]]:
        v1, v2, v3 = self.verts
        return [(v2, v3), (v3, v1), (v1, v2)]

    def sharbly(self) -> tuple[int, Sharbly]:
        return Sharbly.from_vectors(self.verts)

    def is_degenerate(self) -> bool:
        return self.sharbly()[1].is_degenerate()

    def sizes(self) -> list[int]:
        return [size(e) for e in self.edge_pairs()]

    def act(self, g: Mat2) -> LiftedSharbly1:
        return LiftedSharbly1([g @ v for v in self.verts], [g @ M for M in self.lifts], check=False)

    def rotate(self, r: int) -> LiftedSharbly1:
        """Cyclic relabelling ``(v1, v2, v3) -> (v_{1+r}, v_{2+r}, v_{3+r})``; same orientation."""
        r %= 3
        return LiftedSharbly1(self.verts[r:] + self.verts[:r], self.lifts[r:] + self.lifts[:r], check=False)

    def key(self) -> tuple:
        return tuple(v.key() for v in self.verts) + tuple(M.key() for M in self.lifts)

    def __eq__(self, other):
        if not isinstance(other, LiftedSharbly1):
            return NotImplemented
        return self.verts == other.verts and self.lifts == other.lifts

    def __hash__(self):
        return hash((self.verts, self.lifts))

    def __repr__(self):
        return "Lifted[" + ", ".join(f"({v.x1}, {v.x2})" for v in self.verts) + "]"

    def to_json(self) -> dict:
        return {"verts": [v.to_json() for v in self.verts], "lifts": [M.to_json() for M in self.lifts]}


def is_lift(M: Mat2, x: Vec2, y: Vec2) -> bool:
    """``{R(A1), R(A2)} == {R(x), R(y)}`` for the columns ``A1, A2`` of ``M``."""
    a, b = M.cols()
    if a.is_zero() or b.is_zero():
        return False
    return {ray_normalize(a), ray_normalize(b)} == {ray_normalize(x), ray_normalize(y)}


class LiftedChain:
    """Integer combination of lifted 1-sharblies, kept as an ordered term list
    (the same triangle may carry different lifts in different terms)."""

    def __init__(self, d: int = 2, terms=None):
        self.d = d
        self.terms: list[tuple[int, LiftedSharbly1]] = list(terms or [])

    def append(self, coeff: int, tri: LiftedSharbly1) -> None:
        if coeff:
            self.terms.append((coeff, tri))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def plain(self) -> SharblyChain:
        out = SharblyChain(self.d)
        for c, tri in self.terms:
            sign, s = tri.sharbly()
            out.add_sharbly(s, sign * c)
        return out

    def act(self, g: Mat2) -> LiftedChain:
        return LiftedChain(self.d, [(c, t.act(g)) for c, t in self.terms])

    def to_json(self) -> dict:
        return {
            "field": self.d,
            "terms": [{"coeff": c, **t.to_json()} for c, t in self.terms],
        }


def exterior_classes(chain: LiftedChain) -> dict:
    """Signed multiset of ``gamma_key`` classes of the boundary edges."""
    acc: dict = defaultdict(int)
    b = boundary(chain.plain())
    for s, c in b.terms.items():
        k, sign = gamma_key(s)
        if sign:
            acc[k] += sign * c
    return {k: v for k, v in acc.items() if v}
