"""Vectors and 2x2 matrices over F, primitive ray representatives, and the
GL_2(O) normal form used to make every choice of the reducer equivariant.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .qfield import (
    FieldElem,
    canonical_associate,
    field,
    mod_translate,
    nearest_integer,
)

__all__ = [
    "Vec2",
    "RayVector",
    "Mat2",
    "content",
    "ray_normalize",
    "normal_form",
    "is_normal_form",
    "elementary",
]


class Vec2:
    """Column vector ``(x1, x2)`` in F^2."""

    __slots__ = ("x1", "x2", "_hash")

    def __init__(self, x1: FieldElem, x2: FieldElem):
        if x1.d != x2.d:
            raise ValueError("coordinates from different fields")
        self.x1 = x1
        self.x2 = x2
        self._hash = None

    @property
    def d(self) -> int:
        return self.x1.d

    @classmethod
    def of(cls, x1, x2, d: int = 2) -> Vec2:
        F = field(d)
        x1 = x1 if isinstance(x1, FieldElem) else F(x1)
        x2 = x2 if isinstance(x2, FieldElem) else F(x2)
        return cls(x1, x2)

    def is_zero(self) -> bool:
        return self.x1.is_zero() and self.x2.is_zero()

    def is_integral(self) -> bool:
        return self.x1.is_integral() and self.x2.is_integral()

    def __iter__(self):
        yield self.x1
        yield self.x2

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x1 + other.x1, self.x2 + other.x2)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x1 - other.x1, self.x2 - other.x2)

    def __neg__(self) -> Vec2:
        return Vec2(-self.x1, -self.x2)

    def scale(self, c) -> Vec2:
        return Vec2(self.x1 * c, self.x2 * c)

    def __eq__(self, other):
        if not isinstance(other, Vec2):
            return NotImplemented
        return self.x1 == other.x1 and self.x2 == other.x2

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.x1, self.x2))
        return self._hash

    def key(self) -> tuple:
        """Rational 4-tuple ``(a1, b1, a2, b2)``; the fixed total order on vectors."""
        return (self.x1.a, self.x1.b, self.x2.a, self.x2.b)

    def __lt__(self, other: Vec2) -> bool:
        return self.key() < other.key()

    def __repr__(self):
        return f"({self.x1}, {self.x2})"

    def to_json(self) -> list:
        return [self.x1.to_json(), self.x2.to_json()]

    @classmethod
    def from_json(cls, obj, d: int) -> Vec2:
        if not (isinstance(obj, (list, tuple)) and len(obj) == 2):
            raise ValueError(f"vector must have two coordinates, got {obj!r}")
        return cls(FieldElem.from_json(obj[0], d), FieldElem.from_json(obj[1], d))


def det2(u: Vec2, v: Vec2) -> FieldElem:
    return u.x1 * v.x2 - u.x2 * v.x1


class RayVector(Vec2):
    """Primitive vector of O^2 whose first nonzero coordinate is positive under
    the first embedding.  Build these with :func:`ray_normalize`."""

    __slots__ = ()

    def __repr__(self):
        return f"Ray({self.x1}, {self.x2})"


class Mat2:
    """2x2 matrix ``[[a, b], [c, d]]`` over F; columns are ``(a, c)`` and ``(b, d)``."""

    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem):
        self.a, self.b, self.c, self.d = a, b, c, d
        self._hash = None

    @property
    def field_d(self) -> int:
        return self.a.d

    @classmethod
    def of(cls, rows, d: int = 2) -> Mat2:
        F = field(d)
        (a, b), (c, e) = rows
        conv = lambda x: x if isinstance(x, FieldElem) else F(x)
        return cls(conv(a), conv(b), conv(c), conv(e))

    @classmethod
    def identity(cls, d: int = 2) -> Mat2:
        return cls.of([[1, 0], [0, 1]], d)

    @classmethod
    def from_columns(cls, u: Vec2, v: Vec2) -> Mat2:
        return cls(u.x1, v.x1, u.x2, v.x2)

    def col(self, j: int) -> Vec2:
        return Vec2(self.a, self.c) if j == 0 else Vec2(self.b, self.d)

    def cols(self) -> tuple[Vec2, Vec2]:
        return self.col(0), self.col(1)

    def entries(self) -> tuple[FieldElem, ...]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> FieldElem:
        return self.a * self.d - self.b * self.c

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries())

    def is_integral(self) -> bool:
        return all(x.is_integral() for x in self.entries())

    def is_unimodular(self) -> bool:
        """Membership in GL_2(O)."""
        if not self.is_integral():
            return False
        dt = self.det()
        return dt.is_integral() and abs(dt.norm()) == 1

    def transpose(self) -> Mat2:
        return Mat2(self.a, self.c, self.b, self.d)

    def inverse(self) -> Mat2:
        dt = self.det()
        if dt.is_zero():
            raise ZeroDivisionError("singular matrix")
        inv = dt.inverse()
        return Mat2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def __matmul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        if isinstance(other, Vec2):
            return Vec2(self.a * other.x1 + self.b * other.x2, self.c * other.x1 + self.d * other.x2)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries())
        return self._hash

    def key(self) -> tuple:
        return tuple(c for x in self.entries() for c in x.key())

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"

    def to_json(self) -> list:
        return [[self.a.to_json(), self.b.to_json()], [self.c.to_json(), self.d.to_json()]]

    @classmethod
    def from_json(cls, obj, d: int) -> Mat2:
        try:
            (a, b), (c, e) = obj
        except (TypeError, ValueError):
            raise ValueError(f"matrix must be [[e11, e12], [e21, e22]], got {obj!r}") from None
        conv = lambda x: FieldElem.from_json(x, d)
        return cls(conv(a), conv(b), conv(c), conv(e))


def elementary(kind: str, x=None, d: int = 2) -> Mat2:
    """Generators of GL_2(O): ``"shear"`` [[1,x],[0,1]], ``"swap"``, ``"diag"`` diag(x,1)."""
    F = field(d)
    if kind == "shear":
        return Mat2(F.one, x, F.zero, F.one)
    if kind == "swap":
        return Mat2(F.zero, F.one, F.one, F.zero)
    if kind == "diag":
        return Mat2(x, F.zero, F.zero, F.one)
    raise ValueError(kind)


# ---------------------------------------------------------------------------
# content and ray normalisation


def gcd(x: FieldElem, y: FieldElem) -> FieldElem:
    """A generator of the ideal ``(x, y)`` of O, by the Euclidean algorithm."""
    while not y.is_zero():
        q = nearest_integer(x / y)
        r = x - q * y
        if abs(r.norm()) >= abs(y.norm()):
            raise ArithmeticError("Euclidean gcd stalled; field is not norm-Euclidean for this input")
        x, y = y, r
    return x


def content(v: Vec2) -> FieldElem:
    """Canonical generator of the content ideal of an integral vector."""
    if v.is_zero():
        raise ValueError("zero vector has no ray")
    n1 = int(abs(v.x1.norm()))
    n2 = int(abs(v.x2.norm()))
    if math.gcd(n1, n2) == 1:
        return field(v.d).one
    g = gcd(v.x1, v.x2)
    return canonical_associate(g)[0]


def _sign_fix(v: Vec2) -> RayVector:
    lead = v.x1 if not v.x1.is_zero() else v.x2
    if lead.sign(1) < 0:
        return RayVector(-v.x1, -v.x2)
    return RayVector(v.x1, v.x2)


def ray_normalize(v: Vec2) -> RayVector:
    """Primitive, sign-fixed representative of the ray of ``v``.

    Denominators are cleared by a positive integer and the content is divided
    out by its canonical associate.  When the content is a rational or
    rational multiple of sqrt(d), as it is for every vector that lies on the
    ray of a primitive vector, the ray is preserved exactly.
    """
    if isinstance(v, RayVector):
        return v
    if v.is_zero():
        raise ValueError("zero vector has no ray")
    n = v.x1.denominator() * v.x2.denominator()
    if n != 1:
        n = Fraction(n)
        v = Vec2(v.x1 * n, v.x2 * n)
    g = content(v)
    if g != 1:
        gi = g.inverse()
        v = Vec2(v.x1 * gi, v.x2 * gi)
    return _sign_fix(v)


def same_ray(u: Vec2, v: Vec2) -> bool:
    return ray_normalize(u) == ray_normalize(v)


def proportional(u: Vec2, v: Vec2) -> bool:
    """True when ``u`` and ``v`` span the same F-line (or one of them is zero)."""
    return det2(u, v).is_zero()


# ---------------------------------------------------------------------------
# normal form


def _descend(M: Mat2, gamma: Mat2, column: int, steps: list) -> tuple[Mat2, Mat2]:
    # clear the lower entry of `column` by Euclidean steps that shrink |N|
    F = field(M.field_d)
    while True:
        top, low = (M.a, M.c) if column == 0 else (M.b, M.d)
        if low.is_zero():
            return M, gamma
        alpha = nearest_integer(top / low)
        E = Mat2(F.zero, F.one, F.one, -alpha)
        M2 = E @ M
        new_low = M2.c if column == 0 else M2.d
        if abs(new_low.norm()) >= abs(low.norm()):
            raise ArithmeticError("Euclidean descent stalled; field is not norm-Euclidean for this input")
        M, gamma = M2, E @ gamma
        steps.append(alpha)


def _normal_form(M: Mat2) -> tuple[Mat2, Mat2, int]:
    if M.is_zero():
        raise ValueError("zero matrix has no normal form")
    F = field(M.field_d)
    gamma = Mat2.identity(F.d)
    steps: list = []
    first_col_zero = M.a.is_zero() and M.c.is_zero()
    M, gamma = _descend(M, gamma, 1 if first_col_zero else 0, steps)
    if first_col_zero:
        y, u = canonical_associate(M.b)
        D = Mat2(u, F.zero, F.zero, F.one)
        return D @ M, D @ gamma, len(steps)
    y, u = canonical_associate(M.a)
    D = Mat2(u, F.zero, F.zero, F.one)
    M, gamma = D @ M, D @ gamma
    if M.d.is_zero():
        return M, gamma, len(steps)
    y, u = canonical_associate(M.d)
    D = Mat2(F.one, F.zero, F.zero, u)
    M, gamma = D @ M, D @ gamma
    r = mod_translate(M.b, M.d)
    q = (M.b - r) / M.d
    S = Mat2(F.one, -q, F.zero, F.one)
    return S @ M, S @ gamma, len(steps)


def normal_form(M: Mat2) -> tuple[Mat2, Mat2]:
    """Unique representative ``M0`` of ``GL_2(O) * M`` and ``gamma`` with ``gamma @ M == M0``."""
    M0, gamma, _ = _normal_form(M)
    return M0, gamma


def normal_form_steps(M: Mat2) -> int:
    return _normal_form(M)[2]


def _in_unit_domain(x: FieldElem) -> bool:
    return not x.is_zero() and canonical_associate(x)[0] == x


def is_normal_form(M: Mat2) -> bool:
    if not M.c.is_zero() or M.is_zero():
        return False
    if M.a.is_zero():
        return M.d.is_zero() and _in_unit_domain(M.b)
    if not _in_unit_domain(M.a):
        return False
    if M.d.is_zero():
        return True
    return _in_unit_domain(M.d) and mod_translate(M.b, M.d) == M.b
