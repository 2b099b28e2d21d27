"""Acceptance suite: one test per criterion, one summary line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the PASS/FAIL lines are
printed in the terminal summary.  Two targets are known to fail and are left
failing on purpose (see the messages of the failing tests).
"""

import random
import time
from collections import Counter

import pytest

from conftest import PRINTED_OUTPUT, Q4, S4, T_VERTS, V, random_gamma
from oracles import box_min_vectors, det_size
from vreduce import reducer, voronoi
from vreduce.gl2 import Mat2, normal_form, ray_normalize
from vreduce.qfield import field
from vreduce.reducer import act, reduce_chain, reducing_point, subdivide
from vreduce.sharbly import (
    LiftedChain,
    LiftedSharbly1,
    Sharbly,
    SharblyChain,
    boundary,
    is_voronoi_reduced,
    size,
)
from vreduce.voronoi import (
    L,
    SymPair,
    barycenter,
    cone_data,
    containing_cone,
    is_reduced_set,
    min_vectors,
)

F = field(2)
RESULTS: dict[str, tuple[bool, str]] = {}


def record(key: str, ok: bool, detail: str) -> None:
    RESULTS[key] = (ok, detail)
    print(f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}")


def clear_caches():
    reducer._subdivide_framed.cache_clear()
    reducer._reducing_point_normal.cache_clear()
    voronoi._is_reduced_rays.cache_clear()


def coords(v):
    return ((int(v.x1.a), int(v.x1.b)), (int(v.x2.a), int(v.x2.b)))


def random_vector(rng, r=4):
    while True:
        v = V(*(rng.randint(-r, r) for _ in range(4)))
        if not v.is_zero():
            return v


def random_triangle(rng):
    while True:
        vs = [random_vector(rng) for _ in range(3)]
        tri = LiftedSharbly1(vs)
        if not tri.is_degenerate():
            return tri


def chain_of(tri):
    return LiftedChain(2, [(1, tri)])


@pytest.fixture(scope="module")
def T_reduction():
    cone_data(2)
    clear_caches()
    start = time.perf_counter()
    out, trace = reduce_chain(chain_of(LiftedSharbly1(T_VERTS)))
    return out, trace, time.perf_counter() - start


# ---------------------------------------------------------------------------


class TestCriterion1:
    """Edge sizes of the worked example against a determinant oracle."""

    def test_sizes(self):
        v1, v2, v3 = T_VERTS
        oracle = det_size(coords(v2), coords(v3))
        sizes = LiftedSharbly1(T_VERTS).sizes()
        # the printed vector reads 5299 for the first edge; expanding the
        # determinant of columns 2 and 3 gives -78 - 9*sqrt2, of norm 5922
        ok = sorted(sizes) == sorted([oracle, 529, 199]) and oracle == 5922
        ok = ok and det_size(coords(v1), coords(v3)) == 529 and det_size(coords(v1), coords(v2)) == 199
        record("1", ok, f"sizes {sizes}, oracle for columns 2,3 = {oracle} (printed 5299)")
        assert ok


class TestCriterion2:
    """The first pass is case I with the printed child sizes."""

    def test_first_pass(self):
        cone_data(2)
        clear_caches()
        start = time.perf_counter()
        sub = subdivide(LiftedSharbly1(T_VERTS))
        elapsed = time.perf_counter() - start
        got = Counter(tuple(sorted(c.sizes())) for c in sub.children)
        want = Counter([(2, 2, 8), (1, 1, 16), (1, 2, 7), (1, 1, 2)])
        ok = sub.case == "I" and got == want and elapsed < 10
        record("2", ok, f"case {sub.case}, child sizes {sorted(got)}, {elapsed:.2f}s")
        assert ok


class TestCriterion3:
    """The three reducing points of T are the columns of S4."""

    def test_reducing_points(self):
        T = LiftedSharbly1(T_VERTS)
        pts = {reducing_point(x, y, M) for (x, y), M in zip(T.edge_pairs(), T.lifts)}
        gold = pts == {ray_normalize(v) for v in S4}
        middle = LiftedSharbly1(sorted(pts))
        fallback = sorted(middle.sizes()) == [1, 1, 2]
        ok = gold or fallback
        record("3", ok, f"gold target {'met' if gold else 'missed'}; middle triangle sizes {sorted(middle.sizes())}")
        assert ok


class TestCriterion4:
    """Termination and shape of the full reduction of T."""

    def test_termination_and_shape(self, T_reduction):
        out, trace, elapsed = T_reduction
        counts = trace.case_counts()
        all_reduced = all(is_voronoi_reduced(s) for s, _ in out.items())
        ok = trace.passes <= 8 and all_reduced and counts.get("IV", 0) >= 2
        record(
            "4",
            ok,
            f"{trace.passes} passes, {len(out)} output terms, all reduced: {all_reduced}, "
            f"case IV fired {counts.get('IV', 0)} times ({elapsed:.1f}s)",
        )
        assert ok

    def test_gold_target_printed_output(self, T_reduction):
        out, _, _ = T_reduction
        printed = SharblyChain(2)
        for vs in PRINTED_OUTPUT.values():
            printed.add(vs, 1)
        matched = sum(1 for name, vs in PRINTED_OUTPUT.items() if Sharbly.from_vectors(vs)[1] in out.terms)
        ok = len(out) == 13 and out == printed
        record(
            "4-gold",
            ok,
            f"{len(out)} terms against 13 printed; {matched} of the printed terms occur in the output "
            "(central-point ties are broken differently, and R1..R3 are printed equal to N1..N3)",
        )
        assert ok, "gold target: output differs from the printed 13-term list"


class TestCriterion5:
    """Shipped cone data against minimal vectors, and the 3-cone representatives."""

    def test_min_vectors_at_barycenters(self):
        start = time.perf_counter()
        details = []
        ok = True
        for tc in cone_data(2).top_cones:
            _, S = min_vectors(barycenter(tc.generators))
            same = S == tc.generators
            ok = ok and same
            details.append(f"{tc.name}: {len(S)} minimal vectors, {'equal' if same else 'not equal'} to the generators")
        elapsed = time.perf_counter() - start
        record("5a", ok, "; ".join(details) + f" ({elapsed:.1f}s)")
        # The sum of the L(g) is a point inside the cone, and its minimal
        # vectors (as a form) are not the cone's vertices; the perfect form is
        # the object with that property, and it is checked at load time.
        assert ok, "barycenter minimal vectors differ from the shipped generators"

    def test_three_cone_representatives(self):
        start = time.perf_counter()
        e1, e2 = V(1, 0, 0, 0), V(0, 0, 1, 0)
        ebar = F(1, -1)
        extras = [[e1 - e2], [e1.scale(ebar)], [(e1 - e2).scale(ebar)],
                  [V(1, 0, 0, -1), V(0, -1, 1, 0)], [e1 + e2.scale(ebar)]]
        ok = all(is_reduced_set([e1, e2] + U) for U in extras)
        perfect = all(min_vectors(tc.perfect_form) == (1, tc.generators) for tc in cone_data(2).top_cones)
        elapsed = time.perf_counter() - start
        ok = ok and perfect and elapsed < 60
        record("5b", ok, f"five 3-cone representatives reduced, perfect forms recover A0/A1: {perfect} ({elapsed:.1f}s)")
        assert ok


class TestCriterion6:
    """Reducedness facts about the worked example."""

    def test_separations(self):
        facts = []
        ok = True
        for name, vs in (("S4", S4), ("Q4", Q4)):
            tri = LiftedSharbly1(vs)
            edges = all(is_reduced_set(e) for e in tri.edge_pairs())
            whole = is_reduced_set(vs)
            ok = ok and edges and not whole
            facts.append(f"{name} edges reduced={edges}, reduced={whole}")
        cones = set()
        for name, vs in PRINTED_OUTPUT.items():
            c = containing_cone(barycenter(vs))
            if set(c.generators) == {ray_normalize(v) for v in vs}:
                cones.add(name)
        ok = ok and cones == {"P3", "P4", "R1", "N1"}
        facts.append(f"cones: {sorted(cones)}")
        for name in ("O3", "O4"):
            vs = PRINTED_OUTPUT[name]
            c = containing_cone(barycenter(vs))
            rays = {ray_normalize(v) for v in vs}
            sub = c.dim == 3 and len(c.generators) == 4 and rays < set(c.generators)
            ok = ok and sub
            facts.append(f"{name} in a 4-vertex 3-cone: {sub}")
        record("6", ok, "; ".join(facts))
        assert ok


class TestCriterion7:
    """Property suites, 200 seeded cases each."""

    N = 200

    def test_normal_form_uniqueness(self):
        rng = random.Random(701)
        bad = 0
        for _ in range(self.N):
            M = Mat2(*(F(rng.randint(-9, 9), rng.randint(-9, 9)) for _ in range(4)))
            if M.is_zero():
                M = Mat2.identity(2)
            M0, g = normal_form(M)
            bad += normal_form(random_gamma(rng) @ M)[0] != M0 or g @ M != M0
        RESULTS["7.normal-form"] = (bad == 0, f"{bad} failures")
        assert bad == 0

    def test_size_invariance(self):
        rng = random.Random(702)
        bad = 0
        for _ in range(self.N):
            x, y = random_vector(rng, 9), random_vector(rng, 9)
            g = random_gamma(rng)
            bad += size((g @ x, g @ y)) != size((x, y))
        RESULTS["7.size"] = (bad == 0, f"{bad} failures")
        assert bad == 0

    def test_reducing_point_equivariance(self):
        rng = random.Random(703)
        bad = done = 0
        while done < self.N:
            x, y = random_vector(rng), random_vector(rng)
            if is_reduced_set((x, y)):
                continue
            M = Mat2.from_columns(x, y)
            g = random_gamma(rng)
            u = reducing_point(x, y, M)
            bad += reducing_point(g @ x, g @ y, g @ M) != ray_normalize(g @ u)
            done += 1
        RESULTS["7.reducing-point"] = (bad == 0, f"{bad} failures")
        assert bad == 0

    def test_boundary_conservation(self):
        rng = random.Random(704)
        bad = done = 0
        while done < self.N:
            tri = random_triangle(rng)
            if is_voronoi_reduced(tri.sharbly()[1]):
                continue
            sub = subdivide(tri)
            expected = SharblyChain(2)
            for (x, y), M in zip(tri.edge_pairs(), tri.lifts):
                if is_reduced_set((x, y)):
                    expected.add([x, y], -1)
                else:
                    u = reducing_point(x, y, M)
                    expected.add([x, u], -1)
                    expected.add([u, y], -1)
            got = boundary(LiftedChain(2, [(1, c) for c in sub.children]).plain())
            bad += got != expected
            done += 1
        RESULTS["7.boundary"] = (bad == 0, f"{bad} failures")
        assert bad == 0

    def test_boundary_squared(self):
        rng = random.Random(705)
        bad = 0
        for _ in range(self.N):
            c = SharblyChain(2)
            for _ in range(rng.randint(1, 4)):
                c.add([random_vector(rng) for _ in range(4)], rng.randint(-3, 3))
            bad += len(boundary(boundary(c))) != 0
        RESULTS["7.boundary-squared"] = (bad == 0, f"{bad} failures")
        assert bad == 0

    def test_min_vectors_oracle(self):
        rng = random.Random(706)
        bad = 0
        for _ in range(self.N):
            phi = SymPair(F.one, F.one, F.zero).scale(rng.randint(1, 3))
            for _ in range(rng.randint(0, 3)):
                phi = phi + L(random_vector(rng, 2))
            m, S = min_vectors(phi)
            pairs = tuple((x.a, x.b) for x in (phi.a, phi.b, phi.c))
            bm, found = box_min_vectors(pairs)
            oracle = sorted({ray_normalize(V(*x)) for x in found})
            bad += (m, S) != (bm, oracle)
        RESULTS["7.min-vectors"] = (bad == 0, f"{bad} failures")
        assert bad == 0

    def test_summary(self):
        keys = ["7.normal-form", "7.size", "7.reducing-point", "7.boundary", "7.boundary-squared", "7.min-vectors"]
        missing = [k for k in keys if k not in RESULTS]
        failed = [k for k in keys if k in RESULTS and not RESULTS[k][0]]
        ok = not missing and not failed
        record("7", ok, f"6 suites x {self.N} cases; failed: {failed or 'none'}; not run: {missing or 'none'}")
        assert ok


class TestCriterion8:
    """reduce(g T) == g reduce(T) for 20 random g."""

    def test_pipeline_equivariance(self, T_reduction):
        out, _, _ = T_reduction
        xi = chain_of(LiftedSharbly1(T_VERTS))
        rng = random.Random(801)
        start = time.perf_counter()
        bad = 0
        for _ in range(20):
            g = random_gamma(rng)
            out_g, _ = reduce_chain(act(g, xi))
            bad += out_g != out.act(g)
        elapsed = time.perf_counter() - start
        ok = bad == 0 and elapsed < 600
        record("8", ok, f"{20 - bad}/20 translates agree ({elapsed:.1f}s)")
        assert ok
