import math
import random
from fractions import Fraction

import pytest

from geomink.kernel import (
    Sign,
    Vec3,
    ZeroNormal,
    ccw_strictly_before,
    cross,
    dot_sign,
    format_rat,
    rat,
    side_of_origin_plane,
)


def test_dot_sign_examples():
    assert dot_sign(Vec3(1, 0, 0), Vec3(0, 1, 0)) == Sign.ZERO
    assert dot_sign(Vec3(1, 2, 3), Vec3(1, 2, 3)) == Sign.POSITIVE
    # 1 + 1 - 1 = 1
    assert dot_sign(Vec3(1, 1, -1), Vec3(1, 1, 1)) == Sign.POSITIVE


def test_cross_examples():
    assert cross(Vec3(1, 0, 0), Vec3(0, 1, 0)) == Vec3(0, 0, 1)
    assert cross(Vec3(2, 0, 0), Vec3(4, 0, 0)) == Vec3(0, 0, 0)
    assert cross(Vec3(1, 1, -1), Vec3(1, 1, 1)) == Vec3(2, -2, 0)


def test_side_of_origin_plane_examples():
    assert side_of_origin_plane(Vec3(0, 0, 1), Vec3(3, -2, 5)) == Sign.POSITIVE
    assert side_of_origin_plane(Vec3(0, 0, 1), Vec3(3, -2, 0)) == Sign.ZERO
    assert side_of_origin_plane(Vec3(2, -2, 0), Vec3(1, 1, 7)) == Sign.ZERO
    with pytest.raises(ZeroNormal):
        side_of_origin_plane(Vec3(0, 0, 0), Vec3(1, 1, 1))


def test_ccw_strictly_before_examples():
    # From the u-comparison geometry: d-hat is reached strictly before p2-hat.
    assert ccw_strictly_before((1, 1), (-1, 0), (1, -1)) is True
    # Probe coincident with start is never strictly before.
    assert ccw_strictly_before((1, 0), (1, 0), (0, 1)) is False
    # CCW from +y reaches -x before +x.
    assert ccw_strictly_before((0, 1), (1, 0), (-1, 0)) is False


def test_cross_antisymmetry_and_orthogonality():
    rng = random.Random(7)
    for _ in range(200):
        u = Vec3(*(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)))
        v = Vec3(*(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)))
        assert cross(u, v) == -cross(v, u)
        c = cross(u, v)
        assert dot_sign(c, u) == Sign.ZERO
        assert dot_sign(c, v) == Sign.ZERO


def test_side_of_origin_plane_scale_invariance():
    rng = random.Random(11)
    for _ in range(100):
        n = Vec3(rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(1, 5))
        p = Vec3(rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(-5, 5))
        s = side_of_origin_plane(n, p)
        k1 = Fraction(rng.randint(1, 20), rng.randint(1, 20))
        k2 = Fraction(rng.randint(1, 20), rng.randint(1, 20))
        assert side_of_origin_plane(n.scale(k1), p.scale(k2)) == s


def test_ccw_strictly_before_against_atan2():
    rng = random.Random(3)
    checked = 0
    while checked < 1000:
        pts = []
        for _ in range(3):
            x = Fraction(rng.randint(-20, 20), rng.randint(1, 7))
            y = Fraction(rng.randint(-20, 20), rng.randint(1, 7))
            if x == 0 and y == 0:
                break
            pts.append((x, y))
        if len(pts) < 3:
            continue
        s, p, t = pts

        def ang_from_start(v):
            a = math.atan2(float(v[1]), float(v[0])) - math.atan2(
                float(s[1]), float(s[0])
            )
            return a % (2 * math.pi)

        ap, at = ang_from_start(p), ang_from_start(t)
        # Only judge well-separated angles with the float oracle.
        if min(ap, at, abs(ap - at), 2 * math.pi - ap, 2 * math.pi - at) < 1e-6:
            continue
        assert ccw_strictly_before(s, p, t) == (ap < at)
        checked += 1


def test_rat_parsing_and_formatting():
    assert rat("3/4") == Fraction(3, 4)
    assert rat("-7") == Fraction(-7)
    assert rat(5) == Fraction(5)
    assert format_rat(Fraction(3, 4)) == "3/4"
    assert format_rat(Fraction(-8, 2)) == "-4"
