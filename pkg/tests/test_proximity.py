import random
from fractions import Fraction

import pytest

from geomink.gaussian import build
from geomink.kernel import Vec3, dot
from geomink.minkowski import minkowski
from geomink.proximity import (
    INSIDE,
    ON_BOUNDARY,
    OUTSIDE,
    PointOutside,
    classify_point,
    collide,
    directional_penetration,
    separation_sq,
)
from geomink.shapes import box, cube, random_polytope


def sum_cube():
    """[-1,1]^3 as the Minkowski sum of two half-size cubes."""
    h = build(cube(Fraction(1, 2)))
    return minkowski(h, h)


class TestClassifyPoint:
    def test_cube_examples(self):
        M = sum_cube()
        assert classify_point(M, Vec3(0, 0, 0)).classification == INSIDE
        w = classify_point(M, Vec3(1, 0, 0))
        assert w.classification == ON_BOUNDARY
        assert w.facet_normal.canonical() == Vec3(1, 0, 0).canonical()
        assert classify_point(M, Vec3(2, 0, 0)).classification == OUTSIDE

    def test_agrees_with_brute_force(self):
        rng = random.Random(13)
        m = random_polytope(10, 5)
        g = build(m)
        planes = [(m.facet_normal(i), m.facet_offset(i)) for i in range(len(m.facets))]
        for _ in range(300):
            s = Vec3(
                Fraction(rng.randint(-40, 40), 4),
                Fraction(rng.randint(-40, 40), 4),
                Fraction(rng.randint(-40, 40), 4),
            )
            sides = [dot(n, s) - b for n, b in planes]
            if all(x < 0 for x in sides):
                want = INSIDE
            elif all(x <= 0 for x in sides):
                want = ON_BOUNDARY
            else:
                want = OUTSIDE
            assert classify_point(g, s).classification == want

    def test_hint_never_changes_answer(self):
        rng = random.Random(29)
        m = random_polytope(10, 6)
        g = build(m)
        hints = [None]
        for _ in range(100):
            s = Vec3(rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(-9, 9))
            base = classify_point(g, s, None)
            again = classify_point(g, s, hints[-1])
            assert base.classification == again.classification
            hints.append(again.hint)


class TestCollide:
    def test_grazing_and_offsets(self):
        P = build(box(0, 0, 0, 1, 1, 1))
        Q = build(box(0, 0, 0, 1, 1, 1))
        hit, wit, M = collide(P, Q, Vec3(0, 0, 0), Vec3(1, 0, 0))
        assert hit and wit.classification == ON_BOUNDARY
        eps = Fraction(1, 10**6)
        hit2, wit2, _ = collide(P, Q, Vec3(0, 0, 0), Vec3(1 + eps, 0, 0), cache=M)
        assert not hit2 and wit2.classification == OUTSIDE
        hit3, wit3, _ = collide(P, Q, Vec3(0, 0, 0), Vec3(1 - eps, 0, 0), cache=M)
        assert hit3 and wit3.classification == INSIDE

    def test_far_and_zero_offsets(self):
        P = build(box(0, 0, 0, 1, 1, 1))
        hit, wit, M = collide(P, P, Vec3(0, 0, 0), Vec3(3, 0, 0))
        assert not hit
        hit, wit, _ = collide(P, P, Vec3(0, 0, 0), Vec3(0, 0, 0), cache=M)
        assert hit and wit.classification == INSIDE

    def test_symmetry(self):
        A = build(random_polytope(8, 91))
        B = build(random_polytope(8, 92))
        rng = random.Random(7)
        for _ in range(10):
            u = Vec3(rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(-6, 6))
            w = Vec3(rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(-6, 6))
            h1, _, _ = collide(A, B, u, w)
            h2, _, _ = collide(B, A, w, u)
            assert h1 == h2


class TestSeparation:
    def test_cube_examples(self):
        M = sum_cube()
        assert separation_sq(M, Vec3(3, 0, 0)) == 4
        assert separation_sq(M, Vec3(3, 3, 0)) == 8  # closest point (1,1,0)
        assert separation_sq(M, Vec3(0, 0, 0)) == 0

    def test_vertex_closest(self):
        M = sum_cube()
        assert separation_sq(M, Vec3(3, 3, 3)) == 12

    def test_against_sampled_oracle(self):
        m = random_polytope(8, 55)
        g = build(m)
        rng = random.Random(3)
        for _ in range(20):
            s = Vec3(rng.randint(-20, 20), rng.randint(-20, 20), rng.randint(-20, 20))
            d2 = separation_sq(g, s)
            # no vertex is closer than the reported distance
            assert all((s - v).norm_sq() >= d2 for v in m.vertices)
            # and no sampled hull point beats it
            # combinations of combinations of vertices; none beats it
            for _ in range(40):
                ws = [rng.randint(0, 5) for _ in m.vertices]
                tot = sum(ws) or 1
                p = Vec3(0, 0, 0)
                for wgt, v in zip(ws, m.vertices):
                    p = p + v.scale(Fraction(wgt, tot))
                assert (s - p).norm_sq() >= d2


class TestDirectionalPenetration:
    def test_cube_examples(self):
        M = sum_cube()
        a, exit_pt = directional_penetration(M, Vec3(0, 0, 0), Vec3(1, 0, 0))
        assert a == 1 and exit_pt == Vec3(1, 0, 0)
        a, exit_pt = directional_penetration(M, Vec3(0, 0, 0), Vec3(1, 1, 0))
        assert a == 1 and exit_pt == Vec3(1, 1, 0)
        a, _ = directional_penetration(M, Vec3(1, 0, 0), Vec3(1, 0, 0))
        assert a == 0

    def test_exit_point_on_boundary(self):
        m = random_polytope(9, 77)
        g = build(m)
        planes = [(m.facet_normal(i), m.facet_offset(i)) for i in range(len(m.facets))]
        rng = random.Random(9)
        inner = Vec3(0, 0, 0)
        for v in m.vertices:
            inner = inner + v.scale(Fraction(1, len(m.vertices)))
        for _ in range(25):
            r = Vec3(rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(-5, 5))
            if r.is_zero():
                continue
            a, x = directional_penetration(g, inner, r)
            assert any(dot(n, x) == b for n, b in planes)
            assert all(dot(n, x) <= b for n, b in planes)

    def test_outside_point_rejected(self):
        M = sum_cube()
        with pytest.raises(PointOutside):
            directional_penetration(M, Vec3(5, 0, 0), Vec3(1, 0, 0))


def test_simulation_trace():
    from geomink.proximity import PlacementQuery, trace
    from geomink.shapes import box
    from geomink.gaussian import build

    P = build(box(0, 0, 0, 1, 1, 1))
    frames = [
        PlacementQuery(Vec3(0, 0, 0), Vec3(t, 0, 0))
        for t in (0, Fraction(1, 2), 1, 2)
    ]
    lines = trace(P, P, frames)
    assert lines == [
        "frame 0 inside",
        "frame 1 inside",
        "frame 2 on_boundary",
        "frame 3 outside",
    ]
