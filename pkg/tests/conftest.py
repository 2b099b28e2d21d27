import random

import pytest
from hypothesis import settings

from vreduce.gl2 import Mat2, Vec2, elementary
from vreduce.qfield import field
from vreduce.sharbly import LiftedChain, LiftedSharbly1

settings.register_profile("vreduce", derandomize=True, deadline=None, database=None)
settings.load_profile("vreduce")

F = field(2)


def V(a, b, c, e):
    """The vector (a + b*w, c + e*w) with w = sqrt 2."""
    return Vec2(F(a, b), F(c, e))


def cols(*pairs):
    """Vectors from (top, bottom) coordinate pairs, as printed column by column."""
    return [Vec2(F(*top), F(*bot)) for top, bot in pairs]


# the worked example: columns of T
T_VERTS = [V(3, 1, 0, 1), V(4, 4, -1, 5), V(-4, 3, -5, -3)]

# the 1-sharbly spanned by the three reducing points of T's edges
S4 = cols(((0, 0), (-1, -1)), ((1, 0), (0, 0)), ((-1, -1), (0, -1)))
Q4 = cols(((1, -1), (3, 2)), ((0, 0), (-1, -1)), ((-4, 3), (-5, -3)))

PRINTED_OUTPUT = {
    "N1": cols(((1, -1), (3, 2)), ((0, 0), (-1, -1)), ((0, 0), (-3, -2))),
    "N2": cols(((0, 0), (-1, -1)), ((-4, 3), (-5, -3)), ((0, 0), (-3, -2))),
    "N3": cols(((-4, 3), (-5, -3)), ((1, -1), (3, 2)), ((0, 0), (-3, -2))),
    "O3": cols(((-1, -1), (-1, 0)), ((-1, -1), (0, -1)), ((1, 0), (0, 0))),
    "O4": cols(((-1, -1), (-1, 0)), ((1, 0), (0, 0)), ((3, 1), (0, 1))),
    "P1": cols(((3, 2), (2, 1)), ((4, 4), (-1, 5)), ((1, 0), (2, -2))),
    "P2": cols(((3, 2), (2, 1)), ((1, 0), (2, -2)), ((0, 0), (-1, -1))),
    "P3": cols(((3, 2), (2, 1)), ((0, 0), (-1, -1)), ((-1, -1), (0, -1))),
    "P4": cols(((3, 2), (2, 1)), ((-1, -1), (0, -1)), ((4, 4), (-1, 5))),
    "Q3": cols(((1, -1), (3, 2)), ((1, 0), (0, 0)), ((0, 0), (-1, -1))),
    # printed with the same matrices as N1, N2, N3
    "R1": cols(((1, -1), (3, 2)), ((0, 0), (-1, -1)), ((0, 0), (-3, -2))),
    "R2": cols(((0, 0), (-1, -1)), ((-4, 3), (-5, -3)), ((0, 0), (-3, -2))),
    "R3": cols(((-4, 3), (-5, -3)), ((1, -1), (3, 2)), ((0, 0), (-3, -2))),
}


def random_gamma(rng: random.Random, steps: int = 6) -> Mat2:
    """A random element of GL_2(O) as a product of elementary matrices."""
    g = Mat2.identity(2)
    for _ in range(rng.randint(1, steps)):
        kind = rng.choice(["shear", "swap", "diag"])
        if kind == "shear":
            x = F(rng.randint(-3, 3), rng.randint(-3, 3))
        elif kind == "diag":
            x = F.unit(rng.randint(-3, 3)) * rng.choice([1, -1])
        else:
            x = None
        g = elementary(kind, x, 2) @ g
    return g


@pytest.fixture
def T():
    return LiftedSharbly1(T_VERTS)


@pytest.fixture
def T_chain():
    return LiftedChain(2, [(1, LiftedSharbly1(T_VERTS))])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(k for k in results if not k.startswith("7.")):
        ok, detail = results[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}")
