"""Gaussian maps of convex polytopes as decorated spherical arrangements.

The map of a polytope P assigns to every boundary point its outward
support-plane normals: facets become arrangement vertices (their exact
unnormalized normal directions), edges become geodesic arcs, and every
arrangement face carries the primal vertex it maps back to.  Overlaying
two such maps yields the map of the Minkowski sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .arrangement import SphereArrangement, new_arrangement
from .kernel import Rational, Vec3, cross, dot
from .spherical import classify, make_arc


class InvalidMesh(ValueError):
    pass


class InvalidGaussianMap(ValueError):
    pass


@dataclass
class Mesh:
    """A convex polyhedral mesh: exact vertices plus counterclockwise
    (viewed from outside) facet index cycles."""

    vertices: List[Vec3]
    facets: List[List[int]]

    def edge_count(self) -> int:
        return sum(len(f) for f in self.facets) // 2

    def facet_normal(self, i: int) -> Vec3:
        """Outward normal, computed exactly from the first non-collinear
        corner of the facet."""
        cyc = self.facets[i]
        n = len(cyc)
        for k in range(n):
            a = self.vertices[cyc[k]]
            b = self.vertices[cyc[(k + 1) % n]]
            c = self.vertices[cyc[(k + 2) % n]]
            nrm = cross(b - a, c - b)
            if not nrm.is_zero():
                return nrm
        raise InvalidMesh(f"facet {i} is collinear")

    def facet_offset(self, i: int) -> Rational:
        n = self.facet_normal(i)
        return dot(n, self.vertices[self.facets[i][0]])

    def validate(self) -> None:
        """Raise InvalidMesh unless this is a closed convex 2-manifold
        with planar, strictly convex, consistently oriented facets."""
        if len(self.vertices) < 4:
            raise InvalidMesh("need at least 4 vertices")
        if len(self.facets) < 4:
            raise InvalidMesh("need at least 4 facets")
        seen = {}
        for fi, cyc in enumerate(self.facets):
            if len(cyc) < 3 or len(set(cyc)) != len(cyc):
                raise InvalidMesh(f"facet {fi} has a bad vertex cycle")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if (a, b) in seen:
                    raise InvalidMesh(f"directed edge {(a, b)} appears twice")
                seen[(a, b)] = fi
        for (a, b), fi in seen.items():
            if (b, a) not in seen:
                raise InvalidMesh(f"edge {(a, b)} of facet {fi} has no twin")
        if len(self.vertices) - len(seen) // 2 + len(self.facets) != 2:
            raise InvalidMesh("Euler characteristic is not 2")
        for fi, cyc in enumerate(self.facets):
            n = self.facet_normal(fi)
            b0 = dot(n, self.vertices[cyc[0]])
            for vi in cyc:
                if dot(n, self.vertices[vi]) != b0:
                    raise InvalidMesh(f"facet {fi} is not planar")
            m = len(cyc)
            for k in range(m):
                a = self.vertices[cyc[k]]
                b = self.vertices[cyc[(k + 1) % m]]
                c = self.vertices[cyc[(k + 2) % m]]
                turn = dot(cross(b - a, c - b), n)
                if turn <= 0:
                    raise InvalidMesh(
                        f"facet {fi} is not a strictly convex CCW polygon"
                    )
            for vi, v in enumerate(self.vertices):
                s = dot(n, v) - b0
                if s > 0:
                    raise InvalidMesh(
                        f"vertex {vi} lies outside facet {fi}: not convex "
                        "or facets are misoriented"
                    )
                if s == 0 and vi not in cyc:
                    raise InvalidMesh(
                        f"vertex {vi} is coplanar with facet {fi} but not on it"
                    )
        for (a, b), fi in seen.items():
            fj = seen[(b, a)]
            ni, nj = self.facet_normal(fi), self.facet_normal(fj)
            if cross(ni, nj).is_zero() and dot(ni, nj) > 0:
                raise InvalidMesh(
                    f"facets {fi} and {fj} are coplanar; merge them first"
                )

    def translated(self, t: Vec3) -> "Mesh":
        return Mesh([v + t for v in self.vertices], [list(f) for f in self.facets])

    def negated(self) -> "Mesh":
        """Central reflection through the origin (facet cycles reversed)."""
        return Mesh([-v for v in self.vertices], [list(reversed(f)) for f in self.facets])


@dataclass
class GaussianMap:
    arrangement: SphereArrangement

    def counts(self) -> Tuple[int, int, int]:
        """(V, HE, F) of the underlying arrangement."""
        return self.arrangement.counts()

    def primal_vertices(self) -> List[Vec3]:
        out = []
        seen = set()
        for f in self.arrangement.faces:
            v = f.payload
            key = v.as_tuple()
            if key not in seen:
                seen.add(key)
                out.append(v)
        return out

    def support(self, d: Vec3) -> Tuple[Rational, Vec3]:
        """Support value max <d, v> over primal vertices and one maximizer."""
        if d.is_zero():
            from .kernel import ZeroVector

            raise ZeroVector("support direction must be nonzero")
        best = None
        arg = None
        for f in self.arrangement.faces:
            v = f.payload
            val = dot(d, v)
            if best is None or val > best:
                best, arg = val, v
        return best, arg


# -- construction -------------------------------------------------------------


class _HEVertex:
    __slots__ = ("index", "halfedge", "processed")

    def __init__(self, index: int):
        self.index = index
        self.halfedge: Optional["_HEEdge"] = None  # one outgoing halfedge
        self.processed = False


class _HEEdge:
    __slots__ = ("src", "dst", "twin", "nxt", "facet", "processed")

    def __init__(self, src: int, dst: int, facet: int):
        self.src = src
        self.dst = dst
        self.twin: "_HEEdge" = None  # type: ignore
        self.nxt: "_HEEdge" = None  # type: ignore
        self.facet = facet
        self.processed = False


def _halfedge_structure(mesh: Mesh):
    verts = [_HEVertex(i) for i in range(len(mesh.vertices))]
    edges: Dict[Tuple[int, int], _HEEdge] = {}
    for fi, cyc in enumerate(mesh.facets):
        m = len(cyc)
        ring = [_HEEdge(cyc[k], cyc[(k + 1) % m], fi) for k in range(m)]
        for k, e in enumerate(ring):
            e.nxt = ring[(k + 1) % m]
            edges[(e.src, e.dst)] = e
            verts[e.src].halfedge = e
    for (a, b), e in edges.items():
        e.twin = edges[(b, a)]
    return verts, edges


def build(mesh: Mesh) -> GaussianMap:
    """Construct the decorated Gaussian map of a valid convex mesh."""
    mesh.validate()
    verts, _edges = _halfedge_structure(mesh)
    normals = [mesh.facet_normal(i) for i in range(len(mesh.facets))]

    arr = new_arrangement()
    facet_handle: List[Optional[object]] = [None] * len(mesh.facets)

    stack = [verts[0]]
    while stack:
        v = stack.pop()
        if v.processed:
            continue
        v.processed = True
        e0 = v.halfedge
        e = e0
        while True:
            if not e.processed:
                f1 = e.facet
                around = e.twin.nxt  # next halfedge in the cycle around v
                f2 = around.facet  # the facet on the other side of e
                n1, n2 = normals[f1], normals[f2]
                for piece in make_arc(n1, n2):
                    arr.insert_disjoint_arc(piece)
                facet_handle[f1] = arr.find_vertex(classify(n1))
                facet_handle[f2] = arr.find_vertex(classify(n2))
                e.processed = True
                e.twin.processed = True
            w = verts[e.dst]
            if not w.processed:
                stack.append(w)
            e = e.twin.nxt
            if e is e0:
                break

    # Decorate: each arrangement face is the set of directions whose
    # extremal point is one primal vertex; the sum of the incident facet
    # normals lies strictly inside that face.
    for v in verts:
        probe = Vec3(0, 0, 0)
        e = v.halfedge
        while True:
            probe = probe + normals[e.facet]
            e = e.twin.nxt
            if e is v.halfedge:
                break
        cell = arr.locate(classify(probe))
        if cell.kind != "face":  # pragma: no cover - guarded by mesh validity
            raise InvalidGaussianMap(
                f"normal-cone probe of vertex {v.index} hit a {cell.kind}"
            )
        cell.ref.payload = mesh.vertices[v.index]

    g = GaussianMap(arr)
    _check_decoration(g, mesh)
    return g


def _check_decoration(g: GaussianMap, mesh: Mesh) -> None:
    if len(g.arrangement.faces) != len(mesh.vertices):
        raise InvalidGaussianMap(
            f"face count {len(g.arrangement.faces)} != vertex count "
            f"{len(mesh.vertices)}"
        )
    payloads = {f.payload.as_tuple() for f in g.arrangement.faces}
    if len(payloads) != len(mesh.vertices):
        raise InvalidGaussianMap("face decoration is not a bijection")


def reflect(g: GaussianMap) -> GaussianMap:
    """The Gaussian map of the reflection of the primal polytope through
    the origin: directions negated, incidences reversed, payloads negated."""
    return build(primal_mesh(g).negated())


def _is_split_artifact(arr: SphereArrangement, v) -> bool:
    """A degree-2 vertex created only to split an arc at the parameter-
    space boundary: both incident arcs lie on one great circle."""
    from .spherical import BoundaryClass

    if v.degree != 2:
        return False
    if v.point.boundary_class is BoundaryClass.INTERIOR:
        return False
    n1 = v.out[0].arc.normal
    n2 = v.out[1].arc.normal
    return cross(n1, n2).is_zero()


def primal_mesh(g: GaussianMap) -> Mesh:
    """Invert the map: face payloads become vertices, arrangement vertices
    (fused across identification splits) become facets."""
    arr = g.arrangement
    coords: List[Vec3] = []
    index: Dict[tuple, int] = {}
    for f in arr.faces:
        v = f.payload
        if v is None:
            raise InvalidGaussianMap("undecorated face")
        key = v.as_tuple()
        if key not in index:
            index[key] = len(coords)
            coords.append(v)

    facets: List[List[int]] = []
    for w in arr.vertices:
        if _is_split_artifact(arr, w):
            continue
        k = w.degree
        cycle = []
        for i in range(k):
            corner_face = w.out[(i + 1) % k].twin.face
            cycle.append(index[corner_face.payload.as_tuple()])
        facets.append(cycle)
    m = Mesh(coords, facets)
    m.validate()
    return m
