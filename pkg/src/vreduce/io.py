"""JSON encodings of chains, points and matrices.

Rationals are strings, so nothing is lost in transit.  A field element is
either the pair ``["p/q", "r/s"]`` or the text form ``"p/q+r/s*w"``.
"""

from __future__ import annotations

import json
import sys

from .gl2 import Mat2, Vec2
from .qfield import FieldElem, ParseError
from .sharbly import LiftedChain, LiftedSharbly1, SharblyChain
from .voronoi import SymPair

__all__ = [
    "InputError",
    "read_json",
    "dump_json",
    "parse_chain",
    "parse_lifted_chain",
    "parse_matrix",
    "parse_point",
    "parse_vectors",
]


class InputError(ValueError):
    """Malformed or inconsistent input; ``where`` names the offending place."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def read_json(path: str):
    """Load JSON from a file path, or from stdin when ``path == "-"``."""
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from None
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None


def dump_json(obj, pretty: bool = True) -> str:
    if pretty:
        return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False) + "\n"


def _locate_text(text: str | None, snippet: str, column: int) -> str:
    # best-effort source position of a bad string literal
    if not text:
        return ""
    needle = json.dumps(snippet)
    pos = text.find(needle)
    if pos < 0:
        return ""
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1 + column
    return f"line {line}, column {col}"


class _Reader:
    def __init__(self, d: int, text: str | None = None):
        self.d = d
        self.text = text

    def elem(self, obj, where: str) -> FieldElem:
        try:
            return FieldElem.from_json(obj, self.d)
        except ParseError as exc:
            pos = _locate_text(self.text, exc.text, exc.column)
            raise InputError(str(exc), f"{where} ({pos})" if pos else where) from None
        except ValueError as exc:
            raise InputError(str(exc), where) from None

    def vec(self, obj, where: str) -> Vec2:
        if not (isinstance(obj, list) and len(obj) == 2):
            raise InputError("a vector is a list of two field elements", where)
        v = Vec2(self.elem(obj[0], where + "[0]"), self.elem(obj[1], where + "[1]"))
        if v.is_zero():
            raise InputError("zero vector has no ray", where)
        if not v.is_integral():
            raise InputError("spanning vectors must have coordinates in O", where)
        return v

    def mat(self, obj, where: str) -> Mat2:
        if not (isinstance(obj, list) and len(obj) == 2 and all(isinstance(r, list) and len(r) == 2 for r in obj)):
            raise InputError("a matrix is [[e11, e12], [e21, e22]]", where)
        (a, b), (c, e) = obj
        return Mat2(
            self.elem(a, where + "[0][0]"),
            self.elem(b, where + "[0][1]"),
            self.elem(c, where + "[1][0]"),
            self.elem(e, where + "[1][1]"),
        )


def _field_of(obj, d: int | None) -> int:
    if isinstance(obj, dict) and "field" in obj:
        fd = obj["field"]
        if not isinstance(fd, int) or isinstance(fd, bool):
            raise InputError("field must be an integer", "field")
        if d is not None and fd != d:
            raise InputError(f"input is over Q(sqrt {fd}) but --field {d} was requested", "field")
        return fd
    return 2 if d is None else d


def _terms(obj):
    if not isinstance(obj, dict) or not isinstance(obj.get("terms"), list):
        raise InputError('a chain is {"field": d, "terms": [...]}')
    for i, term in enumerate(obj["terms"]):
        where = f"terms[{i}]"
        if not isinstance(term, dict):
            raise InputError("a term is an object", where)
        coeff = term.get("coeff", 1)
        if not isinstance(coeff, int) or isinstance(coeff, bool):
            raise InputError("coeff must be an integer", where + ".coeff")
        verts = term.get("verts")
        if not isinstance(verts, list) or len(verts) < 2:
            raise InputError("verts must list at least two vectors", where + ".verts")
        yield i, where, coeff, verts, term.get("lifts")


def parse_chain(obj, d: int | None = None, text: str | None = None) -> SharblyChain:
    """A plain chain (lifts, if present, are ignored)."""
    d = _field_of(obj, d)
    r = _Reader(d, text)
    chain = SharblyChain(d)
    for i, where, coeff, verts, _ in _terms(obj):
        vs = [r.vec(v, f"{where}.verts[{j}]") for j, v in enumerate(verts)]
        chain.add(vs, coeff)
    return chain


def parse_lifted_chain(obj, d: int | None = None, default_lifts: bool = False, text: str | None = None) -> LiftedChain:
    """A chain of lifted 1-sharblies; terms without lifts need ``default_lifts``."""
    d = _field_of(obj, d)
    r = _Reader(d, text)
    chain = LiftedChain(d)
    for i, where, coeff, verts, lifts in _terms(obj):
        if len(verts) != 3:
            raise InputError("a 1-sharbly has three vertices", where + ".verts")
        vs = [r.vec(v, f"{where}.verts[{j}]") for j, v in enumerate(verts)]
        if lifts is None:
            if not default_lifts:
                raise InputError("term has no lifts (use --default-lifts)", where)
            Ms = None
        else:
            if not (isinstance(lifts, list) and len(lifts) == 3):
                raise InputError("lifts must list three matrices", where + ".lifts")
            Ms = [r.mat(M, f"{where}.lifts[{j}]") for j, M in enumerate(lifts)]
        try:
            chain.append(coeff, LiftedSharbly1(vs, Ms))
        except ValueError as exc:
            raise InputError(str(exc), where) from None
    return chain


def parse_matrix(obj, d: int = 2, text: str | None = None) -> Mat2:
    if isinstance(obj, dict):
        d = _field_of(obj, d)
        obj = obj.get("matrix")
    return _Reader(d, text).mat(obj, "matrix")


def parse_point(obj, d: int | None = None, text: str | None = None) -> SymPair:
    """``{"point": {"a", "b", "c"}}`` or ``{"vectors": [...]}`` (their barycenter)."""
    from .voronoi import barycenter

    d = _field_of(obj, d)
    r = _Reader(d, text)
    if isinstance(obj, dict) and isinstance(obj.get("point"), dict):
        pt = obj["point"]
        try:
            return SymPair(*(r.elem(pt[k], f"point.{k}") for k in ("a", "b", "c")))
        except KeyError as exc:
            raise InputError(f"missing entry {exc}", "point") from None
    if isinstance(obj, dict) and isinstance(obj.get("vectors"), list) and obj["vectors"]:
        return barycenter(parse_vectors(obj, d, text))
    raise InputError('expected {"point": {"a", "b", "c"}} or {"vectors": [...]}')


def parse_vectors(obj, d: int | None = None, text: str | None = None) -> list[Vec2]:
    """``{"vectors": [...]}``, ``{"verts": [...]}`` or a chain with one term."""
    d = _field_of(obj, d)
    r = _Reader(d, text)
    if isinstance(obj, dict) and "terms" in obj:
        terms = list(_terms(obj))
        if len(terms) != 1:
            raise InputError("expected a chain with exactly one term", "terms")
        obj = {"verts": terms[0][3]}
    key = "vectors" if "vectors" in obj else "verts"
    vs = obj.get(key)
    if not isinstance(vs, list) or not vs:
        raise InputError("expected a nonempty list of vectors", key)
    return [r.vec(v, f"{key}[{j}]") for j, v in enumerate(vs)]
