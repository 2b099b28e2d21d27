"""Exact arithmetic in a real quadratic field F = Q(sqrt d) and its order O = Z[sqrt d].

Elements are stored as a pair of rationals ``(a, b)`` standing for
``a + b*sqrt(d)``.  Nothing in this module touches floating point except the
starting guess in :func:`canonical_associate`, which is always confirmed by an
exact local search.

Only squarefree ``d >= 2`` with ``d % 4 in (2, 3)`` are accepted, so that the
ring of integers is exactly ``Z[sqrt d]``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache, total_ordering
from numbers import Rational

__all__ = [
    "FieldElem",
    "QuadraticField",
    "field",
    "norm_abs",
    "embedding_sign",
    "canonical_associate",
    "nearest_integer",
    "mod_translate",
    "parse_elem",
]


def _sign(q) -> int:
    return (q > 0) - (q < 0)


def _is_squarefree(n: int) -> bool:
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


@total_ordering
class FieldElem:
    """``a + b*sqrt(d)`` with rational ``a``, ``b``.

    Ordering (``<``) compares the images under the first embedding, where
    ``sqrt(d)`` is the positive root.
    """

    __slots__ = ("a", "b", "d", "_hash")

    def __init__(self, a=0, b=0, d: int = 2):
        self.a = a if type(a) is Fraction else Fraction(a)
        self.b = b if type(b) is Fraction else Fraction(b)
        self.d = d
        self._hash = None

    # -- construction helpers -------------------------------------------------

    def _coerce(self, other) -> FieldElem:
        if isinstance(other, FieldElem):
            if other.d != self.d:
                raise ValueError(f"elements of Q(sqrt {self.d}) and Q(sqrt {other.d}) do not mix")
            return other
        if isinstance(other, (int, Rational)):
            return FieldElem(other, 0, self.d)
        return NotImplemented

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.b:
            return FieldElem(self.a * o.a, self.b * o.a, self.d)
        if not self.b:
            return FieldElem(self.a * o.a, self.a * o.b, self.d)
        return FieldElem(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        return FieldElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.b:
            if not o.a:
                raise ZeroDivisionError("division by zero in Q(sqrt d)")
            return FieldElem(self.a / o.a, self.b / o.a, self.d)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = FieldElem(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure ------------------------------------------------------------

    def conj(self) -> FieldElem:
        return FieldElem(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Signed norm ``a^2 - d b^2``."""
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_rational(self) -> bool:
        return not self.b

    def sign(self, which: int = 1) -> int:
        """Exact sign of the image under embedding ``which`` (1 or 2)."""
        a = _sign(self.a)
        b = _sign(self.b) if which == 1 else -_sign(self.b)
        if not b:
            return a
        if not a or a == b:
            return b
        # opposite signs: the larger square wins
        aa, bb = self.a * self.a, self.d * self.b * self.b
        if aa > bb:
            return a
        if aa < bb:
            return b
        return 0

    def is_totally_positive(self) -> bool:
        return self.sign(1) > 0 and self.sign(2) > 0

    def embed(self, which: int = 1) -> float:
        """Floating-point image; for display and starting guesses only."""
        r = math.sqrt(self.d)
        return float(self.a) + (r if which == 1 else -r) * float(self.b)

    def denominator(self) -> int:
        """Least positive integer ``n`` with ``n*self`` in ``Z[sqrt d]``."""
        return math.lcm(self.a.denominator, self.b.denominator)

    # -- comparisons and hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Rational)):
            return not self.b and self.a == other
        return NotImplemented

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign(1) < 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.a, self.b, self.d)) if self.b else hash(self.a)
        return self._hash

    def key(self) -> tuple:
        """Coordinate tuple ``(a, b)``, used for lexicographic tie-breaks."""
        return (self.a, self.b)

    # -- text forms -----------------------------------------------------------

    def __str__(self):
        if not self.b:
            return str(self.a)
        if self.b == 1:
            tail = "w"
        elif self.b == -1:
            tail = "-w"
        else:
            tail = f"{self.b}*w"
        if not self.a:
            return tail
        if tail.startswith("-"):
            return f"{self.a}{tail}"
        return f"{self.a}+{tail}"

    def __repr__(self):
        return f"FieldElem({self.a}, {self.b}, d={self.d})"

    def to_json(self) -> list[str]:
        return [str(self.a), str(self.b)]

    @classmethod
    def from_json(cls, obj, d: int) -> FieldElem:
        if isinstance(obj, (int, str)) and not isinstance(obj, bool):
            return parse_elem(str(obj), d)
        if not (isinstance(obj, (list, tuple)) and len(obj) == 2):
            raise ValueError(f"field element must be a pair of rationals, got {obj!r}")
        try:
            return cls(Fraction(str(obj[0])), Fraction(str(obj[1])), d)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational in field element {obj!r}: {exc}") from None


class ParseError(ValueError):
    """Malformed field element text.  ``column`` is 1-based."""

    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column}: {text!r}")
        self.text = text
        self.column = column


_RAT = r"\d+(?:/\d+)?"
_TERM = re.compile(rf"\s*([+-]?)\s*({_RAT})?\s*(\*?\s*w)?\s*")


def parse_elem(text: str, d: int = 2) -> FieldElem:
    """Parse ``"p/q+r/s*w"`` style text (``w`` is sqrt d).

    Accepted shapes include ``"3"``, ``"-1/2"``, ``"w"``, ``"-2*w"``,
    ``"3-2*w"`` and ``"1/2+1/3*w"``.
    """
    a = Fraction(0)
    b = Fraction(0)
    pos = 0
    n = len(text)
    seen = False
    while pos < n:
        if not text[pos:].strip():
            break
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ParseError("unexpected character", text, pos + 1)
        if seen and not m.group(1):
            raise ParseError("expected '+' or '-'", text, m.start(2 if m.group(2) else 3) + 1)
        sign = -1 if m.group(1) == "-" else 1
        try:
            coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        except ZeroDivisionError:
            raise ParseError("zero denominator", text, m.start(2) + 1) from None
        if m.group(3):
            b += sign * coeff
        else:
            a += sign * coeff
        seen = True
        pos = m.end()
    if not seen:
        raise ParseError("empty field element", text, 1)
    return FieldElem(a, b, d)


class QuadraticField:
    """Q(sqrt d) with a fixed fundamental unit ``eps`` (``eps > 1`` under the first embedding)."""

    def __init__(self, d: int):
        if not isinstance(d, int) or d < 2 or not _is_squarefree(d) or d % 4 not in (2, 3):
            raise ValueError(f"unsupported field Q(sqrt {d}): need squarefree d >= 2 with d = 2, 3 mod 4")
        self.d = d
        self.eps = self._fundamental_unit()
        self.eps_inv = self.eps.inverse()
        self.log_eps = math.log(self.eps.embed(1))

    def __repr__(self):
        return f"QuadraticField({self.d})"

    def __call__(self, a=0, b=0) -> FieldElem:
        return FieldElem(a, b, self.d)

    @property
    def one(self) -> FieldElem:
        return FieldElem(1, 0, self.d)

    @property
    def zero(self) -> FieldElem:
        return FieldElem(0, 0, self.d)

    @property
    def w(self) -> FieldElem:
        return FieldElem(0, 1, self.d)

    def _fundamental_unit(self) -> FieldElem:
        d = self.d
        b = 1
        while True:
            for s in (-1, 1):
                t = d * b * b + s
                a = math.isqrt(t)
                if a > 0 and a * a == t:
                    return FieldElem(a, b, d)
            b += 1

    def unit(self, k: int) -> FieldElem:
        return _unit_power(self.d, k)

    def units(self, kmax: int):
        """All units ``±eps^k`` with ``|k| <= kmax``."""
        for k in range(-kmax, kmax + 1):
            u = self.unit(k)
            yield u
            yield -u

    def is_unit(self, x: FieldElem) -> bool:
        return x.is_integral() and abs(x.norm()) == 1


@lru_cache(maxsize=None)
def field(d: int) -> QuadraticField:
    return QuadraticField(d)


@lru_cache(maxsize=4096)
def _unit_power(d: int, k: int) -> FieldElem:
    return field(d).eps ** k


# ---------------------------------------------------------------------------
# operations


def norm_abs(x: FieldElem) -> Fraction:
    """``|Norm_{F/Q}(x)| = |a^2 - d b^2|``."""
    return abs(x.norm())


def embedding_sign(x: FieldElem, which: int) -> int:
    if which not in (1, 2):
        raise ValueError("embedding index must be 1 or 2")
    return x.sign(which)


def _spread(y: FieldElem) -> FieldElem:
    # element whose first embedding is |iota_1(y)| + |iota_2(y)|
    s1 = y.sign(1)
    s2 = y.sign(2)
    return s1 * y + s2 * y.conj()


def _log_abs(x: FieldElem) -> tuple[float, float]:
    """``log|iota_1 x|``, ``log|iota_2 x|`` computed without cancellation."""
    r = math.sqrt(x.d)
    u = float(x.a) + r * float(x.b)
    v = float(x.a) - r * float(x.b)
    ln = math.log(abs(float(x.norm())))
    if abs(u) >= abs(v):
        lu = math.log(abs(u))
        return lu, ln - lu
    lv = math.log(abs(v))
    return ln - lv, lv


def canonical_associate(x: FieldElem) -> tuple[FieldElem, FieldElem]:
    """Representative of the unit orbit of ``x``.

    Returns ``(y, u)`` with ``y = u*x``, ``u`` a unit, ``iota_1(y) > 0``, and
    ``iota_1(y) + |iota_2(y)|`` minimal over the orbit; a tie goes to the
    larger ``iota_1(y)``.
    """
    if x.is_zero():
        raise ValueError("zero has no associate representative")
    F = field(x.d)
    l1, l2 = _log_abs(x)
    k = round((l2 - l1) / (2 * F.log_eps))

    def cost(j):
        return _spread(F.unit(j) * x)

    here = cost(k)
    while True:
        left = cost(k - 1)
        if left < here:
            k, here = k - 1, left
            continue
        right = cost(k + 1)
        if right <= here:
            # on equality the step up increases iota_1, as the tie rule wants
            k, here = k + 1, right
            continue
        break
    u = F.unit(k)
    y = u * x
    if y.sign(1) < 0:
        u, y = -u, -y
    return y, u


def _floor_half(q: Fraction) -> int:
    return math.floor(q + Fraction(1, 2))


def nearest_integer(x: FieldElem) -> FieldElem:
    """An element ``alpha`` of ``Z[sqrt d]`` close to ``x``.

    Searches the 5x5 coordinate box around the coordinate-wise rounding of
    ``x`` and minimises ``|N(x - alpha)|``; ties go to the smaller Euclidean
    distance ``iota_1^2 + iota_2^2`` and then to the lexicographically smallest
    coordinates of ``alpha``.
    """
    d = x.d
    den = math.lcm(x.a.denominator, x.b.denominator)
    A = x.a.numerator * (den // x.a.denominator)
    B = x.b.numerator * (den // x.b.denominator)
    a0 = (2 * A + den) // (2 * den)
    b0 = (2 * B + den) // (2 * den)
    best = None
    best_key = None
    # keys are scaled by den^2, which keeps everything in integers
    for p in range(a0 - 2, a0 + 3):
        da = A - p * den
        da2 = da * da
        for q in range(b0 - 2, b0 + 3):
            db = B - q * den
            db2 = d * db * db
            key = (abs(da2 - db2), da2 + db2, p, q)
            if best_key is None or key < best_key:
                best_key = key
                best = (p, q)
    return FieldElem(best[0], best[1], d)


def mod_translate(b: FieldElem, t: FieldElem) -> FieldElem:
    """Representative of ``b`` modulo ``t*O`` with ``r/t`` in ``[0,1) x [0,1)`` coordinates."""
    if t.is_zero():
        raise ValueError("cannot reduce modulo zero")
    q = b / t
    alpha = FieldElem(math.floor(q.a), math.floor(q.b), b.d)
    return b - t * alpha


def floor_element(x: FieldElem) -> FieldElem:
    """Coordinate-wise floor, an element of ``Z[sqrt d]``."""
    return FieldElem(math.floor(x.a), math.floor(x.b), x.d)
