"""Cone geometry of pairs of binary forms over F.

Points of V x V with F-rational coordinates are symmetric matrices over F
(:class:`SymPair`).  The Voronoi fan is described by shipped top cones; all
other cones are found by walking from a shipped cone to its neighbours.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path

from . import _linalg as la
from .gl2 import Mat2, RayVector, Vec2, proportional, ray_normalize
from .qfield import FieldElem, field

__all__ = [
    "SymPair",
    "VoronoiCone",
    "TopCone",
    "FieldConeData",
    "L",
    "pairing",
    "min_vectors",
    "containing_cone",
    "is_reduced_set",
    "load_cone_data",
    "cone_data",
]


class SymPair:
    """Symmetric matrix ``[[a, c], [c, b]]`` over F, read as the pair of its two real embeddings."""

    __slots__ = ("a", "b", "c", "_hash")

    def __init__(self, a: FieldElem, b: FieldElem, c: FieldElem):
        self.a, self.b, self.c = a, b, c
        self._hash = None

    @property
    def d(self) -> int:
        return self.a.d

    @classmethod
    def of(cls, a, b, c, d: int = 2) -> SymPair:
        F = field(d)
        conv = lambda x: x if isinstance(x, FieldElem) else F(x)
        return cls(conv(a), conv(b), conv(c))

    @classmethod
    def identity(cls, d: int = 2) -> SymPair:
        return cls.of(1, 1, 0, d)

    def __add__(self, other: SymPair) -> SymPair:
        return SymPair(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: SymPair) -> SymPair:
        return SymPair(self.a - other.a, self.b - other.b, self.c - other.c)

    def scale(self, t) -> SymPair:
        return SymPair(self.a * t, self.b * t, self.c * t)

    def det(self) -> FieldElem:
        return self.a * self.b - self.c * self.c

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero() and self.c.is_zero()

    def is_positive_definite(self) -> bool:
        return self.a.is_totally_positive() and self.det().is_totally_positive()

    def is_positive_semidefinite(self) -> bool:
        dt = self.det()
        if dt.sign(1) < 0 or dt.sign(2) < 0:
            return False
        for which in (1, 2):
            if self.a.sign(which) < 0 or self.b.sign(which) < 0:
                return False
        return True

    def in_lattice(self) -> bool:
        return self.a.is_integral() and self.b.is_integral() and self.c.is_integral()

    def value(self, v: Vec2) -> FieldElem:
        """The F-valued form ``v^T A v``."""
        return self.a * v.x1 * v.x1 + 2 * self.c * v.x1 * v.x2 + self.b * v.x2 * v.x2

    def act(self, g: Mat2) -> SymPair:
        """``g A g^T``, the left action on points."""
        # rows of g A
        r1a = g.a * self.a + g.b * self.c
        r1c = g.a * self.c + g.b * self.b
        r2a = g.c * self.a + g.d * self.c
        r2c = g.c * self.c + g.d * self.b
        return SymPair(r1a * g.a + r1c * g.b, r2a * g.c + r2c * g.d, r1a * g.c + r1c * g.d)

    def coords(self) -> tuple[Fraction, ...]:
        """Rational coordinates in the 6-dimensional Q-space of symmetric matrices."""
        return (self.a.a, self.a.b, self.b.a, self.b.b, self.c.a, self.c.b)

    def functional(self) -> tuple[Fraction, ...]:
        """Coefficients ``n`` with ``pairing(self, X) == n . X.coords()``."""
        d = self.d
        return (
            2 * self.a.a,
            2 * d * self.a.b,
            2 * self.b.a,
            2 * d * self.b.b,
            4 * self.c.a,
            4 * d * self.c.b,
        )

    @classmethod
    def from_functional(cls, n, d: int) -> SymPair:
        F = field(d)
        n = [Fraction(x) for x in n]
        return cls(F(n[0] / 2, n[1] / (2 * d)), F(n[2] / 2, n[3] / (2 * d)), F(n[4] / 4, n[5] / (4 * d)))

    def __eq__(self, other):
        if not isinstance(other, SymPair):
            return NotImplemented
        return (self.a, self.b, self.c) == (other.a, other.b, other.c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.a, self.b, self.c))
        return self._hash

    def __repr__(self):
        return f"SymPair(a={self.a}, b={self.b}, c={self.c})"

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json(), "c": self.c.to_json()}

    @classmethod
    def from_json(cls, obj, d: int) -> SymPair:
        return cls(*(FieldElem.from_json(obj[k], d) for k in ("a", "b", "c")))


def L(v: Vec2) -> SymPair:
    """The rank-one point ``v v^T``."""
    if v.is_zero():
        raise ValueError("L is undefined at the zero vector")
    return SymPair(v.x1 * v.x1, v.x2 * v.x2, v.x1 * v.x2)


def pairing(phi: SymPair, A: SymPair) -> Fraction:
    """``Tr_{F/Q}(a_phi a_A + 2 c_phi c_A + b_phi b_A)``."""
    return la.dot(phi.functional(), A.coords())


def barycenter(vectors) -> SymPair:
    it = iter(vectors)
    total = L(next(it))
    for v in it:
        total = total + L(v)
    return total


# ---------------------------------------------------------------------------
# minimal vectors


def gram_matrix(phi: SymPair) -> list[list[Fraction]]:
    """Gram matrix of ``x -> pairing(phi, L(v(x)))`` on the Z-basis
    ``e1, w e1, e2, w e2`` of O^2 (``w = sqrt d``)."""
    F = field(phi.d)
    one, w, zero = F.one, F.w, F.zero
    basis = [Vec2(one, zero), Vec2(w, zero), Vec2(zero, one), Vec2(zero, w)]

    def bil(u, v):
        val = phi.a * u.x1 * v.x1 + phi.c * (u.x1 * v.x2 + u.x2 * v.x1) + phi.b * u.x2 * v.x2
        return val.trace()

    return [[bil(u, v) for v in basis] for u in basis]


def _ldl(G):
    n = len(G)
    D = [Fraction(0)] * n
    U = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        D[i] = G[i][i] - sum(U[k][i] ** 2 * D[k] for k in range(i))
        if D[i] <= 0:
            raise ValueError("minimal vectors require a definite form")
        U[i][i] = Fraction(1)
        for j in range(i + 1, n):
            U[i][j] = (G[i][j] - sum(U[k][i] * U[k][j] * D[k] for k in range(i))) / D[i]
    return D, U


def short_vectors(G, bound: Fraction):
    """All integer ``x != 0`` (one per ``±`` pair) with ``x^T G x <= bound``,
    as ``(value, x)`` pairs.

    Fincke-Pohst enumeration; floats only widen the search interval, every
    accepted point is checked exactly.
    """
    D, U = _ldl(G)
    n = len(G)
    bound = Fraction(bound)
    found = []
    x = [0] * n

    def rec(i, remaining):
        if i < 0:
            if any(x):
                found.append((bound - remaining, tuple(x)))
            return
        c = sum((U[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        r = math.sqrt(float(remaining / D[i]))
        cf = float(c)
        lo = math.floor(-cf - r) - 1
        hi = math.ceil(-cf + r) + 1
        for xi in range(lo, hi + 1):
            t = xi + c
            rest = remaining - D[i] * t * t
            if rest < 0:
                continue
            x[i] = xi
            rec(i - 1, rest)
        x[i] = 0

    rec(n - 1, bound)
    out = []
    for val, xs in found:
        lead = next(v for v in xs if v)
        if lead > 0:
            out.append((val, xs))
    return out


def _vec_from_coords(xs, d: int) -> Vec2:
    F = field(d)
    return Vec2(F(xs[0], xs[1]), F(xs[2], xs[3]))


def min_vectors(phi: SymPair) -> tuple[Fraction, list[RayVector]]:
    """Minimum of ``pairing(phi, L(v))`` over nonzero ``v`` in O^2 and the
    primitive vectors attaining it (sign-fixed, sorted)."""
    if not phi.is_positive_definite():
        raise ValueError("minimal vectors require a definite form")
    G = gram_matrix(phi)
    m0 = min(G[i][i] for i in range(4))
    vecs = short_vectors(G, m0)
    m = min(val for val, _ in vecs)
    S = set()
    for val, xs in vecs:
        if val == m:
            v = _vec_from_coords(xs, phi.d)
            r = ray_normalize(v)
            if r == v or r == -v:
                S.add(r)
    return m, sorted(S)


# ---------------------------------------------------------------------------
# cones


def _rank_of(vectors) -> int:
    return la.rank([list(L(g).coords()) for g in vectors])


class VoronoiCone:
    """Cone spanned by ``L(g)`` for the given generators.

    ``facet_normals`` are exact rational functionals on the 6-dimensional
    space of symmetric matrices over F (``n . X.coords() >= 0`` on the cone),
    computed lazily by brute force over generator subsets.
    """

    def __init__(self, generators, dim: int | None = None):
        gens = sorted(set(ray_normalize(g) for g in generators))
        if not gens:
            raise ValueError("a cone needs at least one generator")
        self.generators: list[RayVector] = gens
        self.dim = _rank_of(gens) if dim is None else dim

    @property
    def d(self) -> int:
        return self.generators[0].d

    def __len__(self):
        return len(self.generators)

    def __contains__(self, v) -> bool:
        return ray_normalize(v) in self._genset

    @cached_property
    def _genset(self) -> frozenset:
        return frozenset(self.generators)

    def __eq__(self, other):
        if not isinstance(other, VoronoiCone):
            return NotImplemented
        return self.generators == other.generators

    def __hash__(self):
        return hash(tuple(self.generators))

    def __repr__(self):
        return f"VoronoiCone(dim={self.dim}, generators={self.generators})"

    @cached_property
    def _coords(self):
        return [L(g).coords() for g in self.generators]

    @cached_property
    def facets(self) -> list[tuple[tuple[Fraction, ...], frozenset]]:
        """``(normal, indices of generators on the facet)`` for every facet."""
        return enumerate_facets(self._coords, self.dim)

    @property
    def facet_normals(self) -> list[tuple[Fraction, ...]]:
        return [n for n, _ in self.facets]

    def contains_point(self, p: SymPair) -> bool:
        """Exact membership of ``p`` (assumed to lie in the linear span when dim < 6)."""
        x = p.coords()
        if self.dim < 6:
            if la.rank(self._coords + [list(x)]) != self.dim:
                return False
        if self.dim == 1:
            g = self._coords[0]
            i = next(i for i, v in enumerate(g) if v)
            return x[i] / g[i] >= 0
        return all(la.dot(n, x) >= 0 for n in self.facet_normals)

    def to_json(self) -> dict:
        return {"dim": self.dim, "generators": [g.to_json() for g in self.generators]}


def enumerate_facets(coords, dim: int):
    """Facets of the cone over the rational vectors ``coords`` (rank ``dim``).

    Every (dim-1)-subset of rank dim-1 whose hyperplane leaves all vectors on
    one side contributes a facet; facets are deduplicated by their vertex sets.
    """
    n = len(coords)
    if dim <= 1:
        return []
    rows_all = [list(c) for c in coords]
    seen = {}
    for subset in itertools.combinations(range(n), dim - 1):
        sub = [rows_all[i] for i in subset]
        if la.rank(sub) != dim - 1:
            continue
        normal = None
        for cand in la.nullspace(sub, len(rows_all[0])):
            vals = [la.dot(cand, r) for r in rows_all]
            if any(vals):
                normal, values = cand, vals
                break
        if normal is None:
            continue
        if all(v >= 0 for v in values):
            pass
        elif all(v <= 0 for v in values):
            normal = [-v for v in normal]
            values = [-v for v in values]
        else:
            continue
        on = frozenset(i for i, v in enumerate(values) if v == 0)
        if on not in seen:
            seen[on] = tuple(normal)
    return [(normal, on) for on, normal in sorted(seen.items(), key=lambda kv: sorted(kv[0]))]


# ---------------------------------------------------------------------------
# shipped top cones and the neighbour walk


@dataclass
class TopCone:
    """A representative top cone with its perfect form (minimum 1, attained
    exactly on the generators) and, per facet, the neighbouring cone as
    ``(index of representative, gamma)``: the neighbour is ``gamma * rep``."""

    name: str
    cone: VoronoiCone
    perfect_form: SymPair
    neighbours: list[tuple[int, Mat2]] = dc_field(default_factory=list)

    @property
    def generators(self) -> list[RayVector]:
        return self.cone.generators

    @cached_property
    def facet_functionals(self):
        return [n for n, _ in self.cone.facets]

    @cached_property
    def form_functional(self):
        return self.perfect_form.functional()


class ConeLocationError(RuntimeError):
    pass


class FieldConeData:
    """Top-cone representatives for one field plus the machinery to locate points."""

    max_walk = 10_000

    def __init__(self, d: int, cones: list[tuple[str, list[Vec2]]]):
        self.d = d
        self.field = field(d)
        self.top_cones: list[TopCone] = []
        for name, gens in cones:
            cone = VoronoiCone(gens)
            if cone.dim != 6:
                raise ValueError(f"top cone {name} has rank {cone.dim}, expected 6")
            phi = perfect_form(cone.generators)
            m, S = min_vectors(phi)
            if m != 1 or S != cone.generators:
                raise ValueError(f"generators of {name} are not the minimal vectors of a perfect form")
            self.top_cones.append(TopCone(name, cone, phi))
        for tc in self.top_cones:
            tc.neighbours = [self._neighbour(tc, normal, on) for normal, on in tc.cone.facets]

    # -- construction ---------------------------------------------------------

    def _neighbour(self, tc: TopCone, normal, on) -> tuple[int, Mat2]:
        phi = tc.perfect_form
        N = SymPair.from_functional(normal, self.d)
        facet_set = {tc.generators[i] for i in on}
        t = Fraction(1)
        while True:
            psi = phi + N.scale(t)
            if not psi.is_positive_definite():
                t /= 2
                continue
            G = gram_matrix(psi)
            below = short_vectors(G, Fraction(1))
            low = [(val, xs) for val, xs in below if val < 1]
            if low:
                ratios = []
                for _, xs in low:
                    v = _vec_from_coords(xs, self.d)
                    x = L(v)
                    ratios.append((pairing(phi, x) - 1) / -pairing(N, x))
                t = min(ratios)
                continue
            ones = {ray_normalize(_vec_from_coords(xs, self.d)) for val, xs in below if val == 1}
            if ones != facet_set:
                break
            t *= 2
        target = sorted(ones)
        for j, other in enumerate(self.top_cones):
            gamma = match_cone(other.generators, target)
            if gamma is not None:
                return j, gamma
        raise ValueError(f"neighbour of {tc.name} across a facet is not equivalent to any shipped cone")

    # -- point location -------------------------------------------------------

    def locate(self, p: SymPair) -> tuple[VoronoiCone, list[RayVector]]:
        """Top cone containing a positive definite ``p`` and the generators of
        the minimal face containing it."""
        if not p.is_positive_definite():
            raise ValueError("locate needs a positive definite point")
        j = 0
        gamma = Mat2.identity(self.d)
        gamma_inv = gamma
        for _ in range(self.max_walk):
            tc = self.top_cones[j]
            q = p.act(gamma_inv)
            x = q.coords()
            vals = [la.dot(n, x) for n in tc.facet_functionals]
            if all(v >= 0 for v in vals):
                break
            best = None
            for f, v in enumerate(vals):
                if v >= 0:
                    continue
                k, delta = tc.neighbours[f]
                dinv = _inverse_unimodular(delta)
                obj = la.dot(self.top_cones[k].form_functional, q.act(dinv).coords())
                if best is None or obj < best[0]:
                    best = (obj, k, delta, dinv)
            _, j, delta, dinv = best
            gamma = gamma @ delta
            gamma_inv = dinv @ gamma_inv
        else:
            raise ConeLocationError("cone location did not stabilize")
        tight = [tc.cone.facets[f][1] for f, v in enumerate(vals) if v == 0]
        idx = range(len(tc.generators))
        face = [i for i in idx if all(i in on for on in tight)]
        top = [ray_normalize(gamma @ g) for g in tc.generators]
        return VoronoiCone(top, 6), sorted(top[i] for i in face)


def containing_cone(p: SymPair, data: FieldConeData | None = None) -> VoronoiCone:
    """The minimal cone of the Voronoi fan containing the nonzero semidefinite point ``p``."""
    if p.is_zero():
        raise ValueError("the zero point lies in every cone")
    if not p.is_positive_semidefinite():
        raise ValueError("point is not positive semidefinite")
    if data is None:
        data = get_cone_data(p.d)
    if p.is_positive_definite():
        # locate() has checked every facet inequality of the top cone exactly;
        # what is left is that p lies in the span of the tight face
        _, face = data.locate(p)
        cone = VoronoiCone(face)
        if la.rank(cone._coords + [list(p.coords())]) != cone.dim:
            raise ConeLocationError("located face does not contain the point")
        return cone
    # exact by construction: p = s * L(g1) + t * L(g2) with s, t >= 0
    return _boundary_cone(p)


def _boundary_cone(p: SymPair) -> VoronoiCone:
    # A singular semidefinite point is lam * w w^T for a primitive w.  The
    # vertices of the boundary component through L(w) are L(eps^k w), which
    # lie on the curve eps^(2k) L(w); consecutive ones bound the cones.
    F = field(p.d)
    col = Vec2(p.a, p.c) if not p.a.is_zero() else Vec2(p.c, p.b)
    w = ray_normalize(col)
    lam = p.a / (w.x1 * w.x1) if not w.x1.is_zero() else p.b / (w.x2 * w.x2)
    if not lam.is_totally_positive() or L(w).scale(lam) != p:
        raise ValueError("point is not positive semidefinite")
    e2 = F.eps * F.eps
    # lam lies in the closed cone spanned by eps^(2k) and eps^(2k+2) iff
    # lam * eps^(-2k) = s + t * eps^2 with s, t >= 0
    k = round(math.log(lam.embed(1) / lam.embed(2)) / (4 * F.log_eps))
    for _ in range(256):
        mu = lam * F.unit(-2 * k)
        t = mu.b / e2.b
        s = mu.a - t * e2.a
        if t < 0:
            k -= 1
        elif s < 0:
            k += 1
        elif t == 0:
            return VoronoiCone([w.scale(F.unit(k))], 1)
        elif s == 0:
            return VoronoiCone([w.scale(F.unit(k + 1))], 1)
        else:
            return VoronoiCone([w.scale(F.unit(k)), w.scale(F.unit(k + 1))], 2)
    raise ConeLocationError("cone location did not stabilize")


def is_reduced_set(vectors, data: FieldConeData | None = None) -> bool:
    """Whether the rays of ``vectors`` are among the vertices of one Voronoi cone."""
    rays = frozenset(ray_normalize(v) for v in vectors)
    if not rays:
        raise ValueError("empty vector set")
    if len(rays) == 1:
        return True
    return _is_reduced_rays(rays, data if data is not None else get_cone_data(next(iter(rays)).d))


@lru_cache(maxsize=65536)
def _is_reduced_rays(rays: frozenset, data: FieldConeData) -> bool:
    cone = containing_cone(barycenter(sorted(rays)), data)
    return all(r in cone for r in rays)


def _inverse_unimodular(g: Mat2) -> Mat2:
    return g.inverse()


def perfect_form(generators) -> SymPair:
    """The form taking value 1 at every ``L(g)``; requires the ``L(g)`` to span."""
    rows = [list(L(g).coords()) for g in generators]
    red, piv = la.rref([r + [Fraction(1)] for r in rows])
    if 6 in piv or len(piv) != 6:
        raise ValueError("generators do not determine a unique form")
    n = [Fraction(0)] * 6
    for row, pc in zip(red, piv):
        n[pc] = row[-1]
    return SymPair.from_functional(n, generators[0].d)


def match_cone(source, target) -> Mat2 | None:
    """``gamma`` in GL_2(O) with ``gamma * source == target`` as ray sets, if any."""
    source = list(source)
    target_set = set(target)
    if len(source) != len(target_set):
        return None
    a = source[0]
    b = next(g for g in source[1:] if not proportional(a, g))
    base_inv = Mat2.from_columns(a, b).inverse()
    for ta in target:
        for tb in target:
            if proportional(ta, tb):
                continue
            for sa in (1, -1):
                for sb in (1, -1):
                    img = Mat2.from_columns(ta.scale(sa), tb.scale(sb))
                    g = img @ base_inv
                    if not g.is_unimodular():
                        continue
                    if {ray_normalize(g @ s) for s in source} == target_set:
                        return g
    return None


def load_cone_data(path) -> FieldConeData:
    """Read a cone data file ``{"d": .., "top_cones": [{"name", "generators"}]}``."""
    if isinstance(path, (str, Path)):
        with open(path) as fh:
            raw = json.load(fh)
    else:
        raw = json.load(path)
    return _from_raw(raw)


def _from_raw(raw) -> FieldConeData:
    d = int(raw["d"])
    cones = []
    for entry in raw["top_cones"]:
        gens = [Vec2.from_json(g, d) for g in entry["generators"]]
        cones.append((entry["name"], gens))
    return FieldConeData(d, cones)


@lru_cache(maxsize=None)
def cone_data(d: int = 2) -> FieldConeData:
    """Shipped cone data (only Q(sqrt 2) is shipped)."""
    name = f"cones_d{d}.json"
    try:
        text = resources.files("vreduce").joinpath("data").joinpath(name).read_text()
    except FileNotFoundError:
        raise ValueError(f"no shipped cone data for d={d}; supply a cone data file") from None
    return _from_raw(json.loads(text))


_registered: dict[int, FieldConeData] = {}


def register_cone_data(data: FieldConeData) -> None:
    """Make user-supplied cone data the default for its field."""
    _registered[data.d] = data


def get_cone_data(d: int) -> FieldConeData:
    if d in _registered:
        return _registered[d]
    return cone_data(d)
