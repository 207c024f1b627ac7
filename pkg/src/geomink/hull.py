"""Exact incremental 3D convex hull, used as the independent oracle for
Minkowski sums and as a mesh utility.

Internally the hull is kept simplicial; coplanar triangles are merged
into maximal facets at the end so facet counts compare directly against
Gaussian-map results.  All predicates are exact rational signs.
"""

from __future__ import annotations

import random
from math import gcd
from typing import Dict, Iterable, List, Tuple

from .gaussian import Mesh
from .kernel import Rational, Vec3, cross, dot, triple


class DegenerateInput(ValueError):
    """Input points do not affinely span 3-space."""


def _orient(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> Rational:
    return triple(b - a, c - a, d - a)


def plane_key(normal: Vec3, offset: Rational) -> tuple:
    """Canonical key of an oriented plane <n,x> = b, invariant under
    positive scaling."""
    nums = (normal.x, normal.y, normal.z, offset)
    lcm = 1
    for q in nums:
        lcm = lcm * q.denominator // gcd(lcm, q.denominator)
    ints = [int(q * lcm) for q in nums]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    return tuple(c // g for c in ints)


class _Tri:
    __slots__ = ("a", "b", "c", "normal", "offset", "alive")

    def __init__(self, a: int, b: int, c: int, pts: List[Vec3]):
        self.a, self.b, self.c = a, b, c
        self.normal = cross(pts[b] - pts[a], pts[c] - pts[a])
        self.offset = dot(self.normal, pts[a])
        self.alive = True

    def edges(self) -> List[Tuple[int, int]]:
        return [(self.a, self.b), (self.b, self.c), (self.c, self.a)]


def convex_hull_3(points: Iterable[Vec3], seed: int = 20111) -> Mesh:
    """Exact convex hull; output vertices are exactly the extreme points
    and coplanar facets are merged into maximal planar facets."""
    pts: List[Vec3] = []
    seen = set()
    for p in points:
        k = p.as_tuple()
        if k not in seen:
            seen.add(k)
            pts.append(p)
    if len(pts) < 4:
        raise DegenerateInput("need at least 4 distinct points")

    # Seed simplex: four affinely independent points.
    i0 = 0
    i1 = next((i for i in range(len(pts)) if pts[i] != pts[i0]), None)
    i2 = next(
        (
            i
            for i in range(len(pts))
            if i not in (i0, i1)
            and not cross(pts[i1] - pts[i0], pts[i] - pts[i0]).is_zero()
        ),
        None,
    )
    if i2 is None:
        raise DegenerateInput("points are collinear")
    i3 = next(
        (
            i
            for i in range(len(pts))
            if i not in (i0, i1, i2) and _orient(pts[i0], pts[i1], pts[i2], pts[i]) != 0
        ),
        None,
    )
    if i3 is None:
        raise DegenerateInput("points are coplanar")
    if _orient(pts[i0], pts[i1], pts[i2], pts[i3]) > 0:
        i1, i2 = i2, i1

    tris: List[_Tri] = [
        _Tri(i0, i1, i2, pts),
        _Tri(i0, i2, i3, pts),
        _Tri(i2, i1, i3, pts),
        _Tri(i1, i0, i3, pts),
    ]

    order = [i for i in range(len(pts)) if i not in (i0, i1, i2, i3)]
    random.Random(seed).shuffle(order)

    for pi in order:
        p = pts[pi]
        visible = [t for t in tris if t.alive and dot(t.normal, p) > t.offset]
        if not visible:
            continue
        for t in visible:
            t.alive = False
        neighbor: Dict[Tuple[int, int], _Tri] = {}
        for t in tris:
            if t.alive:
                for e in t.edges():
                    neighbor[e] = t
        horizon = []
        for t in visible:
            for (a, b) in t.edges():
                if (b, a) in neighbor:
                    horizon.append((a, b))
        for (a, b) in horizon:
            tris.append(_Tri(a, b, pi, pts))
        tris = [t for t in tris if t.alive]

    # Merge coplanar triangles into maximal facets.
    groups: Dict[tuple, List[_Tri]] = {}
    for t in tris:
        groups.setdefault(plane_key(t.normal, t.offset), []).append(t)

    facets: List[List[int]] = []
    used: set = set()
    for group in groups.values():
        edge_count: Dict[Tuple[int, int], int] = {}
        for t in group:
            for (a, b) in t.edges():
                edge_count[(a, b)] = edge_count.get((a, b), 0) + 1
        boundary = {a: b for (a, b), cnt in edge_count.items() if cnt == 1 and (b, a) not in edge_count}
        start = next(iter(boundary))
        cycle = [start]
        cur = boundary[start]
        while cur != start:
            cycle.append(cur)
            cur = boundary[cur]
        # Prune collinear boundary vertices (non-extreme points).
        changed = True
        while changed and len(cycle) > 3:
            changed = False
            for k in range(len(cycle)):
                a = pts[cycle[k - 1]]
                b = pts[cycle[k]]
                c = pts[cycle[(k + 1) % len(cycle)]]
                if cross(b - a, c - b).is_zero():
                    del cycle[k]
                    changed = True
                    break
        facets.append(cycle)
        used.update(cycle)

    remap = {}
    verts = []
    for f in facets:
        for vi in f:
            if vi not in remap:
                remap[vi] = len(verts)
                verts.append(pts[vi])
    mesh = Mesh(verts, [[remap[v] for v in f] for f in facets])
    mesh.validate()
    return mesh


def pairwise_sums(m1: Mesh, m2: Mesh) -> List[Vec3]:
    """All vertex sums {v + w}."""
    return [v + w for v in m1.vertices for w in m2.vertices]


def meshes_equivalent(a: Mesh, b: Mesh) -> bool:
    """Same vertex sets and the same facet supporting planes (up to
    positive scaling of normals)."""
    va = {v.as_tuple() for v in a.vertices}
    vb = {v.as_tuple() for v in b.vertices}
    if va != vb:
        return False
    pa = {plane_key(a.facet_normal(i), a.facet_offset(i)) for i in range(len(a.facets))}
    pb = {plane_key(b.facet_normal(i), b.facet_offset(i)) for i in range(len(b.facets))}
    return pa == pb
