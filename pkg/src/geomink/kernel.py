"""Exact rational scalars, 3-vectors, and the core sign predicates.

Every geometric decision in this package reduces to a handful of exact
sign computations on rational numbers.  No routine here ever computes a
square root or touches floating point; directions are kept as
unnormalized vectors throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]


class ZeroVector(ValueError):
    """A direction-consuming operation received the zero vector."""


class ZeroNormal(ValueError):
    """A plane predicate received a zero normal."""


class Sign(IntEnum):
    """Three-valued sign; doubles as SMALLER/EQUAL/LARGER for comparisons."""

    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


SMALLER = Sign.NEGATIVE
EQUAL = Sign.ZERO
LARGER = Sign.POSITIVE


def sign(x: Rational) -> Sign:
    if x > 0:
        return Sign.POSITIVE
    if x < 0:
        return Sign.NEGATIVE
    return Sign.ZERO


def rat(x: RationalLike) -> Fraction:
    """Coerce ints, strings like "3/4", or Fractions to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not a rational value: {x!r}")


def format_rat(x: Fraction) -> str:
    """Canonical "p/q" (or bare "p") literal used by all file formats."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Vec3:
    """Immutable exact 3-vector over the rationals."""

    x: Fraction
    y: Fraction
    z: Fraction

    def __init__(self, x: RationalLike, y: RationalLike, z: RationalLike):
        object.__setattr__(self, "x", rat(x))
        object.__setattr__(self, "y", rat(y))
        object.__setattr__(self, "z", rat(z))

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def scale(self, k: RationalLike) -> "Vec3":
        k = rat(k)
        return Vec3(self.x * k, self.y * k, self.z * k)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0

    def norm_sq(self) -> Fraction:
        return self.x * self.x + self.y * self.y + self.z * self.z

    def as_tuple(self) -> tuple:
        return (self.x, self.y, self.z)

    def canonical(self) -> tuple:
        """Scale-invariant key: two vectors get the same key iff one is a
        positive rational multiple of the other.  Antipodes differ."""
        if self.is_zero():
            return (0, 0, 0)
        nums = (self.x, self.y, self.z)
        from math import gcd

        g = 0
        lcm = 1
        for c in nums:
            lcm = lcm * c.denominator // gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in nums]
        for c in ints:
            g = gcd(g, abs(c))
        return tuple(c // g for c in ints)

    def __repr__(self) -> str:
        return f"({format_rat(self.x)}, {format_rat(self.y)}, {format_rat(self.z)})"


ZERO3 = Vec3(0, 0, 0)


def vec(x: RationalLike, y: RationalLike, z: RationalLike) -> Vec3:
    return Vec3(x, y, z)


def dot(u: Vec3, v: Vec3) -> Fraction:
    return u.x * v.x + u.y * v.y + u.z * v.z


def dot_sign(u: Vec3, v: Vec3) -> Sign:
    """Sign of the exact inner product."""
    return sign(dot(u, v))


def cross(u: Vec3, v: Vec3) -> Vec3:
    """Exact cross product; zero iff the inputs are parallel."""
    return Vec3(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )


def triple(a: Vec3, b: Vec3, c: Vec3) -> Fraction:
    """Determinant det[a b c] = <a, b x c>."""
    return dot(a, cross(b, c))


def side_of_origin_plane(normal: Vec3, p: Vec3) -> Sign:
    """Side of the plane through the origin with the given normal.

    POSITIVE means p lies on the side the normal points into.
    """
    if normal.is_zero():
        raise ZeroNormal("plane normal must be nonzero")
    return sign(dot(normal, p))


def parallel_same_direction(u: Vec3, v: Vec3) -> bool:
    """True iff v is a positive multiple of u (both nonzero)."""
    return cross(u, v).is_zero() and dot_sign(u, v) == Sign.POSITIVE


# -- planar (2D) helpers for azimuthal comparisons -------------------------


def cross2(ax: Fraction, ay: Fraction, bx: Fraction, by: Fraction) -> Fraction:
    return ax * by - ay * bx


def ccw_strictly_before(start: tuple, probe: tuple, target: tuple) -> bool:
    """Rotating counterclockwise from `start`, is `probe`'s ray reached
    strictly before `target`'s ray?

    All three are nonzero planar vectors given as (x, y) pairs of
    rationals.  Conventions: a probe codirectional with `start` is never
    strictly before anything, and a probe codirectional with `target`
    ties toward "not before".
    """
    sx, sy = start
    px, py = probe
    tx, ty = target
    if (sx == 0 and sy == 0) or (px == 0 and py == 0) or (tx == 0 and ty == 0):
        raise ZeroVector("ccw_strictly_before requires nonzero planar vectors")

    def angle_class(vx, vy):
        # CCW angle from `start`: 0 codirectional, 1 in (0,pi), 2 exactly
        # pi, 3 in (pi, 2*pi).
        c = cross2(sx, sy, vx, vy)
        if c > 0:
            return 1
        if c < 0:
            return 3
        return 0 if sx * vx + sy * vy > 0 else 2

    kp = angle_class(px, py)
    kt = angle_class(tx, ty)
    if kp == 0:
        return False  # probe codirectional with start: not strictly before
    if kp != kt:
        return kp < kt
    # Same open half-turn: the relative angle is below pi, so a single
    # orientation test decides; codirectional probe/target gives 0 (ties
    # break toward "not before").
    return cross2(px, py, tx, ty) > 0
