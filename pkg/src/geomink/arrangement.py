"""DCEL arrangements of geodesic arcs on the sphere.

The DCEL is intrinsic to the sphere: vertices at the poles or on the
identification curve are ordinary vertices (recorded in a topology
registry), and the circular order of edges around any vertex is the
exact 3D tangent order.  Faces own one or more boundary cycles (CCBs)
plus isolated vertices, and a user payload slot; payloads should be
immutable values since face splits share them.

Aggregate construction splits all input arcs at their exact pairwise
intersections and inserts the interior-disjoint pieces one by one; the
result is the same subdivision a sweep would produce, independent of
insertion order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .kernel import Vec3, cross, dot, sign
from .spherical import (
    BoundaryClass,
    DirPoint,
    GeodesicArc,
    arc_between,
    as_point,
    classify,
    intersect,
    is_mergeable,
    point_on_arc,
    strictly_inside_arc,
)


class AnchorMismatch(ValueError):
    pass


class ArcNotDisjoint(ValueError):
    pass


class InvalidArc(ValueError):
    pass


LEFT = "left"
RIGHT = "right"


class Vertex:
    __slots__ = ("point", "out", "isolated_face", "payload", "id")

    def __init__(self, point: DirPoint, vid: int):
        self.point = point
        self.out: List["Halfedge"] = []  # outgoing halfedges in CCW order
        self.isolated_face: Optional["Face"] = None
        self.payload: Any = None
        self.id = vid

    @property
    def degree(self) -> int:
        return len(self.out)

    @property
    def is_isolated(self) -> bool:
        return self.isolated_face is not None

    def __repr__(self) -> str:
        return f"V{self.id}{self.point.dir!r}"


class Halfedge:
    __slots__ = ("source", "twin", "nxt", "prv", "face", "arc", "payload", "id")

    def __init__(self, source: Vertex, arc: GeodesicArc, hid: int):
        self.source = source
        self.arc = arc  # directed with this halfedge
        self.twin: "Halfedge" = None  # type: ignore
        self.nxt: "Halfedge" = None  # type: ignore
        self.prv: "Halfedge" = None  # type: ignore
        self.face: "Face" = None  # type: ignore
        self.payload: Any = None
        self.id = hid

    @property
    def target(self) -> Vertex:
        return self.twin.source

    def tangent(self) -> Vec3:
        """Departure direction at the source."""
        return cross(self.arc.normal, self.source.point.dir)

    def cycle(self) -> List["Halfedge"]:
        out = [self]
        e = self.nxt
        while e is not self:
            out.append(e)
            e = e.nxt
        return out

    def __repr__(self) -> str:
        return f"H{self.id}({self.source.id}->{self.target.id})"


class Face:
    __slots__ = ("ccbs", "isolated", "payload", "id")

    def __init__(self, fid: int):
        self.ccbs: List[Halfedge] = []  # one representative halfedge per CCB
        self.isolated: Set[Vertex] = set()
        self.payload: Any = None
        self.id = fid

    def __repr__(self) -> str:
        return f"F{self.id}"


@dataclass
class Cell:
    """Tagged reference to an arrangement feature."""

    kind: str  # "vertex" | "edge" | "face"
    ref: Any

    @property
    def payload(self):
        return self.ref.payload


def _ccw_strictly_before3(axis: Vec3, start: Vec3, probe: Vec3, target: Vec3) -> bool:
    """In the tangent plane with outward axis, is probe reached strictly
    before target when rotating CCW from start?"""

    def angle_class(v: Vec3) -> int:
        c = dot(axis, cross(start, v))
        if c > 0:
            return 1
        if c < 0:
            return 3
        return 0 if dot(start, v) > 0 else 2

    kp, kt = angle_class(probe), angle_class(target)
    if kp == 0:
        return False
    if kp != kt:
        return kp < kt
    return dot(axis, cross(probe, target)) > 0


class SphereArrangement:
    def __init__(self):
        self._next_id = itertools.count()
        self.vertices: List[Vertex] = []
        self.halfedges: List[Halfedge] = []
        self.faces: List[Face] = []
        self._vertex_map: Dict[tuple, Vertex] = {}
        f0 = Face(next(self._next_id))
        self.faces.append(f0)
        self._initial_face = f0
        # Topology registry: contraction-point and identification vertices.
        self.pole_vertices: Dict[str, Vertex] = {}
        self.identification_vertices: List[Vertex] = []

    # -- basic queries ------------------------------------------------------

    def counts(self) -> Tuple[int, int, int]:
        """(V, HE, F)."""
        return (len(self.vertices), len(self.halfedges), len(self.faces))

    def edges(self) -> List[Halfedge]:
        """One halfedge per undirected edge (the lower-id one)."""
        return [h for h in self.halfedges if h.id < h.twin.id]

    def find_vertex(self, p) -> Optional[Vertex]:
        return self._vertex_map.get(as_point(p).dir.canonical())

    def initial_face(self) -> Face:
        return self._initial_face

    # -- vertex bookkeeping --------------------------------------------------

    def _register_boundary_vertex(self, v: Vertex) -> None:
        bc = v.point.boundary_class
        if bc is BoundaryClass.NORTH_POLE:
            self.pole_vertices["north"] = v
        elif bc is BoundaryClass.SOUTH_POLE:
            self.pole_vertices["south"] = v
        elif bc is BoundaryClass.ON_IDENTIFICATION:
            self.identification_vertices.append(v)

    def _new_vertex(self, p: DirPoint) -> Vertex:
        v = Vertex(p, next(self._next_id))
        self.vertices.append(v)
        self._vertex_map[p.dir.canonical()] = v
        self._register_boundary_vertex(v)
        return v

    def _drop_vertex(self, v: Vertex) -> None:
        self.vertices.remove(v)
        del self._vertex_map[v.point.dir.canonical()]
        bc = v.point.boundary_class
        if bc is BoundaryClass.NORTH_POLE:
            self.pole_vertices.pop("north", None)
        elif bc is BoundaryClass.SOUTH_POLE:
            self.pole_vertices.pop("south", None)
        elif bc is BoundaryClass.ON_IDENTIFICATION:
            self.identification_vertices.remove(v)

    def insert_isolated_vertex(self, p, face: Optional[Face] = None) -> Vertex:
        q = as_point(p)
        if q.dir.canonical() in self._vertex_map:
            raise ArcNotDisjoint(f"vertex at {q} already exists")
        if face is None:
            cell = self.locate(q)
            if cell.kind != "face":
                raise ArcNotDisjoint(f"{q} lies on an existing feature")
            face = cell.ref
        v = self._new_vertex(q)
        v.isolated_face = face
        face.isolated.add(v)
        return v

    def remove_isolated_vertex(self, v: Vertex) -> None:
        if not v.is_isolated:
            raise ValueError("vertex is not isolated")
        v.isolated_face.isolated.discard(v)
        v.isolated_face = None
        self._drop_vertex(v)

    # -- angular order around a vertex ---------------------------------------

    def _insert_position(self, v: Vertex, tau: Vec3) -> int:
        """Index i such that tau fits CCW-between v.out[i] and v.out[i+1]."""
        k = len(v.out)
        if k == 0:
            return 0
        axis = v.point.dir
        tangents = [h.tangent() for h in v.out]
        for i, t in enumerate(tangents):
            if dot(axis, cross(t, tau)) == 0 and dot(t, tau) > 0:
                raise ArcNotDisjoint(
                    f"new arc overlaps an existing edge at vertex {v}"
                )
        if k == 1:
            return 0
        for i in range(k):
            a = tangents[i]
            b = tangents[(i + 1) % k]
            # tau strictly inside the CCW gap (a, b)?
            if _ccw_strictly_before3(axis, a, tau, b):
                return i
        raise AssertionError("no angular gap admits the new edge")

    # -- edge insertion -------------------------------------------------------

    def _make_pair(self, arc: GeodesicArc, v1: Vertex, v2: Vertex) -> Halfedge:
        h = Halfedge(v1, arc, next(self._next_id))
        g = Halfedge(v2, arc.reversed(), next(self._next_id))
        h.twin = g
        g.twin = h
        self.halfedges.extend((h, g))
        return h

    def _splice_at(self, v: Vertex, h_out: Halfedge, g_in: Halfedge) -> Optional[Face]:
        """Wire the new outgoing h_out / incoming g_in at vertex v.

        Returns the face of the surrounding gap (None when v was bare)."""
        if v.is_isolated:
            f = v.isolated_face
            f.isolated.discard(v)
            v.isolated_face = None
            g_in.nxt = h_out
            h_out.prv = g_in
            v.out.append(h_out)
            return f
        if not v.out:
            g_in.nxt = h_out
            h_out.prv = g_in
            v.out.append(h_out)
            return None
        pos = self._insert_position(v, h_out.tangent())
        # The face corner spanning the CCW gap (out[pos], out[pos+1]) turns
        # from the incoming twin(out[pos+1]) to the outgoing out[pos].
        t_in = v.out[(pos + 1) % len(v.out)].twin
        b = t_in.nxt
        t_in.nxt = h_out
        h_out.prv = t_in
        g_in.nxt = b
        b.prv = g_in
        v.out.insert(pos + 1, h_out)
        return t_in.face

    def insert_disjoint_arc(
        self,
        arc: GeodesicArc,
        v1: Optional[Vertex] = None,
        v2: Optional[Vertex] = None,
        face: Optional[Face] = None,
    ) -> Halfedge:
        """Insert an arc whose interior is disjoint from all existing
        features.  Anchors are checked against the endpoints and resolved
        automatically when omitted."""
        src, tgt = arc.source, arc.target
        if v1 is not None and v1.point != src:
            raise AnchorMismatch("v1 does not match the arc source")
        if v2 is not None and v2.point != tgt:
            raise AnchorMismatch("v2 does not match the arc target")
        if v1 is None:
            v1 = self.find_vertex(src)
        if v2 is None:
            v2 = self.find_vertex(tgt)

        if v1 is None and v2 is None:
            if face is None:
                cell = self.locate(arc.interior_point())
                if cell.kind != "face":
                    raise ArcNotDisjoint("arc interior touches an existing feature")
                face = cell.ref
            w1 = self._new_vertex(src)
            w2 = self._new_vertex(tgt)
            h = self._make_pair(arc, w1, w2)
            g = h.twin
            h.nxt = g
            g.nxt = h
            h.prv = g
            g.prv = h
            h.face = g.face = face
            face.ccbs.append(h)
            w1.out.append(h)
            w2.out.append(g)
            return h

        if v1 is not None and v2 is None:
            w2 = self._new_vertex(tgt)
            h = self._make_pair(arc, v1, w2)
            g = h.twin
            h.nxt = g
            g.prv = h
            w2.out.append(g)
            f = self._splice_at(v1, h, g)
            if f is None:
                raise AnchorMismatch("anchor vertex has no incident face")
            h.face = g.face = f
            if v1.degree == 1:
                f.ccbs.append(h)  # fresh component (vertex was bare)
            return h

        if v1 is None and v2 is not None:
            return self.insert_disjoint_arc(arc.reversed(), v2, None, face).twin

        # Both endpoints exist.
        h = self._make_pair(arc, v1, v2)
        g = h.twin
        was_isolated1, was_isolated2 = v1.is_isolated, v2.is_isolated
        bare1 = was_isolated1 or not v1.out
        bare2 = was_isolated2 or not v2.out
        f1 = self._splice_at(v1, h, g)
        f2 = self._splice_at(v2, g, h)
        f = f1 if f1 is not None else f2
        if f is None:
            raise AnchorMismatch("cannot determine the containing face")
        if f1 is not None and f2 is not None and f1 is not f2:
            raise ArcNotDisjoint("arc endpoints see different faces")

        if bare1 and bare2:
            h.face = g.face = f
            f.ccbs.append(h)
            return h

        orbit = h.cycle()
        if g in orbit:
            # No face split: the edge extended a component or merged two
            # CCBs of f into one.
            for e in orbit:
                e.face = f
            reps = [r for r in f.ccbs if r not in orbit]
            reps.append(h)
            f.ccbs = reps
            return h

        # Both endpoints were on the same CCB: the face splits.
        cycle_h = orbit
        cycle_g = g.cycle()
        f_new = Face(next(self._next_id))
        self.faces.append(f_new)
        f_new.payload = f.payload
        orbit_set = set(cycle_h) | set(cycle_g)
        other_reps = [r for r in f.ccbs if r not in orbit_set]
        for e in cycle_h:
            e.face = f
        for e in cycle_g:
            e.face = f_new
        f.ccbs = [h]
        f_new.ccbs = [g]
        for rep in other_reps:
            target = f_new if self.side_of_cycle(rep.source.point, cycle_g) == LEFT else f
            target.ccbs.append(rep)
            if target is f_new:
                for e in rep.cycle():
                    e.face = f_new
        moved = []
        for w in f.isolated:
            if self.side_of_cycle(w.point, cycle_g) == LEFT:
                moved.append(w)
        for w in moved:
            f.isolated.discard(w)
            f_new.isolated.add(w)
            w.isolated_face = f_new
        return h

    # -- edge removal and edge merging ----------------------------------------

    def remove_edge(self, h: Halfedge, keep_isolated: bool = True) -> None:
        """Delete the edge (h, twin).  Merges the two incident faces when
        they differ; a bridge split leaves both cycles on the same face.
        Endpoints left bare become isolated vertices (or are deleted)."""
        g = h.twin
        f1, f2 = h.face, g.face

        # Survivor wiring: bypass h at its source and target.
        a1 = h.prv  # arrives at h.source
        b1 = g.nxt  # leaves h.source
        a2 = g.prv  # arrives at h.target
        b2 = h.nxt  # leaves h.target
        v1, v2 = h.source, h.target
        v1.out.remove(h)
        v2.out.remove(g)

        survivors = []
        if a1 is not g:  # source keeps other edges
            a1.nxt = b1
            b1.prv = a1
            survivors.append(b1)
        if a2 is not h:  # target keeps other edges
            a2.nxt = b2
            b2.prv = a2
            survivors.append(b2)

        keep = f1
        drop = f2 if f2 is not f1 else None

        self.halfedges.remove(h)
        self.halfedges.remove(g)

        cycles: List[List[Halfedge]] = []
        seen: Set[Halfedge] = set()
        for s in survivors:
            if s in seen:
                continue
            cyc = s.cycle()
            seen.update(cyc)
            cycles.append(cyc)
        for cyc in cycles:
            for e in cyc:
                e.face = keep

        # Rebuild the kept face's CCB list.
        reps = [r for r in f1.ccbs if r not in (h, g) and r not in seen]
        if drop is not None:
            reps.extend(r for r in drop.ccbs if r not in (h, g) and r not in seen)
            for rep in reps:
                for e in rep.cycle():
                    e.face = keep
        reps.extend(cyc[0] for cyc in cycles)
        keep.ccbs = reps
        if drop is not None:
            for w in drop.isolated:
                w.isolated_face = keep
                keep.isolated.add(w)
            drop.isolated.clear()
            self.faces.remove(drop)

        for v in (v1, v2):
            if not v.out:
                if keep_isolated:
                    v.isolated_face = keep
                    keep.isolated.add(v)
                else:
                    self._drop_vertex(v)

    def merge_edges_at(self, v: Vertex) -> Halfedge:
        """Fuse the two edges at a degree-2 vertex into one (the arcs must
        be mergeable); returns the merged halfedge."""
        if v.degree != 2 or v.is_isolated:
            raise ValueError("vertex must have exactly two incident edges")
        h1, h2 = v.out  # v->a and v->b
        p1 = h1.twin  # a->v
        p2 = h2  # v->b
        if not is_mergeable(p1.arc, p2.arc):
            raise ValueError("incident arcs are not mergeable")
        from .spherical import merge as _merge_arcs

        arc_f = _merge_arcs(p1.arc, p2.arc)
        a_v, b_v = p1.source, p2.target
        H = Halfedge(a_v, arc_f, next(self._next_id))
        G = Halfedge(b_v, arc_f.reversed(), next(self._next_id))
        H.twin, G.twin = G, H
        q1 = h2.twin  # b->v
        q2 = h1  # v->a
        # p1.prv is q2 exactly when a has degree one (the walk turns
        # around there); same for the other three chain neighbors.
        H.prv = p1.prv if p1.prv is not q2 else G
        H.nxt = p2.nxt if p2.nxt is not q1 else G
        G.prv = q1.prv if q1.prv is not p2 else H
        G.nxt = q2.nxt if q2.nxt is not p1 else H
        H.prv.nxt = H
        H.nxt.prv = H
        G.prv.nxt = G
        G.nxt.prv = G
        H.face = p1.face
        G.face = q1.face
        H.payload = p1.payload
        G.payload = q1.payload
        a_v.out[a_v.out.index(p1)] = H
        b_v.out[b_v.out.index(q1)] = G
        for f in {p1.face, q1.face}:
            f.ccbs = [
                (H if r in (p1, p2) else (G if r in (q1, q2) else r)) for r in f.ccbs
            ]
            dedup = []
            for r in f.ccbs:
                if r not in dedup:
                    dedup.append(r)
            f.ccbs = dedup
        for e in (p1, p2, q1, q2):
            self.halfedges.remove(e)
        self.halfedges.extend((H, G))
        self._drop_vertex(v)
        return H

    def set_edge_payload(self, h: Halfedge, value: Any) -> None:
        h.payload = value
        h.twin.payload = value

    # -- point location -------------------------------------------------------

    def side_of_cycle(self, q: DirPoint, cycle: Sequence[Halfedge]) -> str:
        """Which side of a boundary cycle q lies on; LEFT is the side the
        cycle's face lies on.  q must not lie on the cycle."""
        cyc = list(cycle)
        in_cycle = set(cyc)
        targets = [h for h in cyc if h.twin not in in_cycle]
        if not targets:
            return LEFT  # antenna-only cycle: its left region is everything
        res = self._side_direct(q, cyc, targets)
        if res is not None:
            return res
        # q is coplanar with every usable target edge: route the probe
        # through a generic intermediate point.
        verts = {h.source.point for h in cyc}
        for m_dir in self._generic_directions():
            if cross(q.dir, m_dir).is_zero():
                continue
            m = classify(m_dir)
            if any(cross(m_dir, h.arc.normal).is_zero() for h in cyc):
                continue
            if m in verts:
                continue
            leg = arc_between(q, m)
            if any(point_on_arc(w, leg, closed=False) for w in verts):
                continue
            if any(cross(leg.normal, h.arc.normal).is_zero() for h in cyc):
                continue
            side_m = self._side_direct(m, cyc, targets)
            if side_m is None:  # pragma: no cover - m was checked generic
                continue
            crossings = 0
            for h in cyc:
                r = intersect(leg, h.arc)
                for p in r.points:
                    if strictly_inside_arc(p.dir, leg) and strictly_inside_arc(
                        p.dir, h.arc
                    ):
                        crossings += 1
            if crossings % 2 == 1:
                side_m = LEFT if side_m == RIGHT else RIGHT
            return side_m
        raise RuntimeError("side_of_cycle failed to find a generic probe")

    def _side_direct(
        self, q: DirPoint, cyc: List[Halfedge], targets: List[Halfedge]
    ) -> Optional[str]:
        verts = {h.source.point for h in cyc}
        for target_edge in targets:
            e0 = target_edge.arc
            if dot(e0.normal, q.dir) == 0:
                continue  # every probe to this edge would be coplanar
            lam = self._probe_lambdas()
            for _ in range(24):
                l = next(lam)
                t_dir = e0.source.dir + e0.target.dir.scale(l)
                t = classify(t_dir)
                if cross(q.dir, t.dir).is_zero():
                    continue
                g = arc_between(q, t)
                ok = True
                for w in verts:
                    if point_on_arc(w, g, closed=False) and w != t:
                        ok = False
                        break
                if ok:
                    for h in cyc:
                        if cross(g.normal, h.arc.normal).is_zero():
                            r = intersect(g, h.arc)
                            if r.overlap is not None or any(
                                p != t and p != q for p in r.points
                            ):
                                ok = False
                                break
                if not ok:
                    continue
                crossings = 0
                for h in cyc:
                    if h is target_edge:
                        continue
                    r = intersect(g, h.arc)
                    for p in r.points:
                        if strictly_inside_arc(p.dir, g) and strictly_inside_arc(
                            p.dir, h.arc
                        ):
                            crossings += 1
                r = intersect(g, target_edge.arc)
                for p in r.points:
                    if p != t and strictly_inside_arc(p.dir, g) and strictly_inside_arc(
                        p.dir, target_edge.arc
                    ):
                        crossings += 1
                arrival = sign(dot(target_edge.arc.normal, cross(t.dir, g.normal)))
                assert arrival != 0
                from_left = arrival > 0
                if crossings % 2 == 1:
                    from_left = not from_left
                return LEFT if from_left else RIGHT
        return None

    @staticmethod
    def _probe_lambdas():
        yield Fraction(1)
        k = 2
        while True:
            yield Fraction(1, k)
            yield Fraction(k)
            yield Fraction(2 * k - 1, 2)
            k += 1

    @staticmethod
    def _generic_directions():
        import random as _random

        rng = _random.Random(0x5EED)
        fixed = [
            Vec3(3, 5, 7), Vec3(-7, 3, 5), Vec3(5, -7, 3), Vec3(2, 9, -11),
        ]
        for v in fixed:
            yield v
        while True:
            yield Vec3(
                Fraction(rng.randint(-97, 97), rng.randint(1, 13)),
                Fraction(rng.randint(-97, 97), rng.randint(1, 13)),
                Fraction(rng.randint(-97, 97), rng.randint(1, 13)),
            )

    def locate(self, p) -> Cell:
        """Naive point location: scan vertices, edges, then faces."""
        q = as_point(p)
        v = self.find_vertex(q)
        if v is not None:
            return Cell("vertex", v)
        for h in self.edges():
            if point_on_arc(q, h.arc):
                return Cell("edge", h)
        for f in self.faces:
            if all(self.side_of_cycle(q, rep.cycle()) == LEFT for rep in f.ccbs):
                return Cell("face", f)
        raise RuntimeError("locate found no containing cell")  # pragma: no cover

    def interior_point(self, face: Face) -> DirPoint:
        """An exact rational direction strictly inside the face."""
        if not face.ccbs:
            for cand in (
                Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 2, 3),
                Vec3(-1, 3, -2), Vec3(5, -4, 1),
            ):
                q = classify(cand)
                if all(w.point != q for w in face.isolated):
                    return q
            raise RuntimeError("no free direction found")  # pragma: no cover
        rep = None
        for r in face.ccbs:
            cyc = r.cycle()
            for h in cyc:
                if h.twin.face is not face:
                    rep = h
                    break
            if rep is not None:
                break
        if rep is None:
            rep = face.ccbs[0]
        m = rep.arc.interior_point()
        n = rep.arc.normal
        k = Fraction(1)
        for _ in range(128):
            q_dir = m.dir.scale(k) + n
            if not q_dir.is_zero():
                q = classify(q_dir)
                if self._strictly_inside(q, face):
                    return q
            k *= 4
        raise RuntimeError("interior point search failed")  # pragma: no cover

    def _strictly_inside(self, q: DirPoint, face: Face) -> bool:
        if q.dir.canonical() in self._vertex_map:
            return False
        for rep in face.ccbs:
            for h in rep.cycle():
                if point_on_arc(q, h.arc):
                    return False
        return all(self.side_of_cycle(q, rep.cycle()) == LEFT for rep in face.ccbs)

    # -- validation ------------------------------------------------------------

    def validate(self, geometry: bool = True) -> List[str]:
        """Check DCEL integrity, Euler's formula, and (optionally) the
        geometric consistency of the stored arcs.  Returns the list of
        violations; empty means the arrangement is sound."""
        errs: List[str] = []
        live = set(id(h) for h in self.halfedges)
        for h in self.halfedges:
            for link in (h.twin, h.nxt, h.prv):
                if id(link) not in live:
                    errs.append(f"{h}: dangling link to a removed halfedge")
            if h.twin.twin is not h or h.twin is h:
                errs.append(f"{h}: broken twin involution")
            if h.nxt.prv is not h or h.prv.nxt is not h:
                errs.append(f"{h}: next/prev not inverse")
            if h.nxt.source is not h.target:
                errs.append(f"{h}: next does not start at target")
            if h.face is not h.nxt.face:
                errs.append(f"{h}: face differs along CCB")
            if h not in h.source.out:
                errs.append(f"{h}: missing from source vertex ring")
        seen: Set[int] = set()
        for f in self.faces:
            for rep in f.ccbs:
                if rep.face is not f:
                    errs.append(f"{f}: CCB rep {rep} points to another face")
                    continue
                for e in rep.cycle():
                    if e.face is not f:
                        errs.append(f"{f}: cycle member {e} has wrong face")
                    if e.id in seen:
                        errs.append(f"{e}: appears in two CCBs")
                    seen.add(e.id)
            for w in f.isolated:
                if w.isolated_face is not f:
                    errs.append(f"{w}: isolated face link broken")
        for h in self.halfedges:
            if h.id not in seen:
                errs.append(f"{h}: not reachable from any face CCB")
        # Euler: V - E + F = 1 + C with isolated vertices their own components.
        parent = {v.id: v.id for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for h in self.halfedges:
            a, b = find(h.source.id), find(h.target.id)
            if a != b:
                parent[a] = b
        comps = len({find(v.id) for v in self.vertices})
        V = len(self.vertices)
        E = len(self.halfedges) // 2
        F = len(self.faces)
        if V - E + F != 1 + comps:
            errs.append(f"Euler failure: V={V} E={E} F={F} C={comps}")
        if geometry:
            for h in self.halfedges:
                if h.arc.source != h.source.point or h.arc.target != h.target.point:
                    errs.append(f"{h}: arc endpoints disagree with vertices")
                if dot(h.arc.normal, h.source.point.dir) != 0:
                    errs.append(f"{h}: source not on arc plane")
            for v in self.vertices:
                bc = v.point.boundary_class
                if bc is BoundaryClass.ON_IDENTIFICATION and v not in self.identification_vertices:
                    errs.append(f"{v}: missing from identification registry")
                if bc is BoundaryClass.NORTH_POLE and self.pole_vertices.get("north") is not v:
                    errs.append(f"{v}: missing from pole registry")
                if bc is BoundaryClass.SOUTH_POLE and self.pole_vertices.get("south") is not v:
                    errs.append(f"{v}: missing from pole registry")
                axis = v.point.dir
                k = v.degree
                for i in range(k):
                    a = v.out[i].tangent()
                    b = v.out[(i + 1) % k].tangent()
                    c = v.out[(i + 2) % k].tangent() if k > 2 else None
                    if k > 2 and not _ccw_strictly_before3(axis, a, b, c):
                        errs.append(f"{v}: vertex ring not CCW-sorted")
                        break
        return errs


def new_arrangement() -> SphereArrangement:
    return SphereArrangement()


# -- aggregate construction ---------------------------------------------------


def _boundary_split(arc: GeodesicArc) -> List[GeodesicArc]:
    """Split an arbitrary (<pi) arc at interior pole or identification
    crossings, like make_arc does for fresh arcs."""
    from .spherical import make_arc

    pieces = make_arc(arc.source, arc.target)
    return pieces


def _order_along(arc: GeodesicArc, pts: List[DirPoint]) -> List[DirPoint]:
    import functools

    n = arc.normal

    def cmp(a: DirPoint, b: DirPoint) -> int:
        if a == b:
            return 0
        return -1 if dot(cross(a.dir, b.dir), n) > 0 else 1

    return sorted(pts, key=functools.cmp_to_key(cmp))


def _split_all(
    tagged_arcs: List[Tuple[GeodesicArc, Any]],
    cross_only: bool = False,
    extra_points: Sequence[Tuple[DirPoint, Any]] = (),
) -> List[Tuple[GeodesicArc, List[Any]]]:
    """Split arcs at all pairwise intersections (and at the given extra
    points).  Returns interior-disjoint sub-arcs, each with the list of
    tags of the input arcs it belongs to.  With cross_only, arcs sharing
    a tag group key (tag[0]) are assumed interior-disjoint already."""
    cuts: List[Set[tuple]] = [set() for _ in tagged_arcs]
    for i in range(len(tagged_arcs)):
        ai = tagged_arcs[i][0]
        for j in range(i + 1, len(tagged_arcs)):
            if cross_only and tagged_arcs[i][1][0] == tagged_arcs[j][1][0]:
                continue
            aj = tagged_arcs[j][0]
            r = intersect(ai, aj)
            if r.overlap is not None:
                for p in (r.overlap.source, r.overlap.target):
                    cuts[i].add(p.dir.canonical())
                    cuts[j].add(p.dir.canonical())
            for p in r.points:
                cuts[i].add(p.dir.canonical())
                cuts[j].add(p.dir.canonical())
    for p, _tag in extra_points:
        for i, (a, _t) in enumerate(tagged_arcs):
            if point_on_arc(p, a, closed=False):
                cuts[i].add(p.dir.canonical())

    pieces: Dict[frozenset, Tuple[GeodesicArc, List[Any]]] = {}
    for i, (a, tag) in enumerate(tagged_arcs):
        pts = [classify(Vec3(*k)) for k in cuts[i]]
        pts = [p for p in pts if p != a.source and p != a.target]
        pts = [p for p in pts if point_on_arc(p, a, closed=False)]
        chain = [a.source] + _order_along(a, pts) + [a.target]
        for s, t in zip(chain, chain[1:]):
            key = frozenset((s.dir.canonical(), t.dir.canonical()))
            if key in pieces:
                pieces[key][1].append(tag)
            else:
                pieces[key] = (arc_between(s, t), [tag])
    return list(pieces.values())


def sweep_build(arcs: Iterable[GeodesicArc]) -> SphereArrangement:
    """Build the arrangement induced by a set of (possibly intersecting,
    possibly overlapping) geodesic arcs."""
    prepared: List[Tuple[GeodesicArc, Any]] = []
    for idx, a in enumerate(arcs):
        if not isinstance(a, GeodesicArc):
            raise InvalidArc(f"not a geodesic arc: {a!r}")
        for piece in _boundary_split(a):
            prepared.append((piece, (idx,)))
    arr = new_arrangement()
    for sub, _tags in _split_all(prepared):
        arr.insert_disjoint_arc(sub)
    return arr


# -- overlay -------------------------------------------------------------------


@dataclass
class OverlayCallbacks:
    """The ten payload-merge functions of a map overlay, one per
    provenance case.  Each receives the payloads of the two inducing
    features (first the left operand's, then the right's) and returns
    the payload of the new feature."""

    vertex_vertex: Callable[[Any, Any], Any] = lambda a, b: None
    vertex_edge: Callable[[Any, Any], Any] = lambda a, b: None
    edge_vertex: Callable[[Any, Any], Any] = lambda a, b: None
    vertex_face: Callable[[Any, Any], Any] = lambda a, b: None
    face_vertex: Callable[[Any, Any], Any] = lambda a, b: None
    edge_edge: Callable[[Any, Any], Any] = lambda a, b: None
    edge_overlap: Callable[[Any, Any], Any] = lambda a, b: None
    edge_face: Callable[[Any, Any], Any] = lambda a, b: None
    face_edge: Callable[[Any, Any], Any] = lambda a, b: None
    face_face: Callable[[Any, Any], Any] = lambda a, b: None


def overlay(
    a: SphereArrangement, b: SphereArrangement, cb: OverlayCallbacks
) -> SphereArrangement:
    """Overlay two arrangements; every output cell's payload is produced
    by exactly one callback named after its provenance case."""
    tagged: List[Tuple[GeodesicArc, Any]] = []
    for side, arr in (("a", a), ("b", b)):
        for h in arr.edges():
            tagged.append((h.arc, (side, h)))
    iso_points: List[Tuple[DirPoint, Any]] = []
    for side, arr in (("a", a), ("b", b)):
        for v in arr.vertices:
            if v.is_isolated:
                iso_points.append((v.point, (side, v)))

    out = new_arrangement()
    sub_tags: Dict[int, List[Any]] = {}
    for sub, tags in _split_all(tagged, cross_only=True, extra_points=iso_points):
        h = out.insert_disjoint_arc(sub)
        sub_tags[min(h.id, h.twin.id)] = tags

    # Isolated source vertices that are not on any output feature.
    for p, tag in iso_points:
        if out.find_vertex(p) is None:
            out.insert_isolated_vertex(p)

    # --- provenance of output edges -------------------------------------
    edge_prov: Dict[int, Dict[str, Any]] = {}
    for h in out.edges():
        tags = sub_tags.get(min(h.id, h.twin.id), [])
        prov: Dict[str, Any] = {}
        for side, src_h in tags:
            # Orient the source halfedge along h.
            aligned = src_h if dot(src_h.arc.normal, h.arc.normal) > 0 else src_h.twin
            prov[side] = aligned
        edge_prov[min(h.id, h.twin.id)] = prov

    # --- provenance of output faces --------------------------------------
    face_prov: Dict[int, Dict[str, Face]] = {f.id: {} for f in out.faces}
    for f in out.faces:
        for rep in f.ccbs:
            for h in rep.cycle():
                prov = edge_prov[min(h.id, h.twin.id)]
                for side in ("a", "b"):
                    if side in prov and side not in face_prov[f.id]:
                        src = prov[side]
                        aligned = src if _same_direction(src, h) else src.twin
                        face_prov[f.id][side] = aligned.face
    # Flood remaining sides across edges of the other color, then locate.
    for side, arr in (("a", a), ("b", b)):
        pending = [f for f in out.faces if side not in face_prov[f.id]]
        changed = True
        while changed and pending:
            changed = False
            still = []
            for f in pending:
                resolved = None
                for rep in f.ccbs:
                    for h in rep.cycle():
                        # Crossing an edge of the other color stays inside
                        # the same source face of this side.
                        if side in edge_prov[min(h.id, h.twin.id)]:
                            continue
                        nb = h.twin.face
                        if side in face_prov[nb.id]:
                            resolved = face_prov[nb.id][side]
                            break
                    if resolved is not None:
                        break
                if resolved is not None:
                    face_prov[f.id][side] = resolved
                    changed = True
                else:
                    still.append(f)
            pending = still
        for f in pending:
            probe = out.interior_point(f)
            cell = arr.locate(probe)
            assert cell.kind == "face"
            face_prov[f.id][side] = cell.ref

    # --- provenance of output vertices ------------------------------------
    def vertex_side_prov(v: Vertex, side: str, arr: SphereArrangement):
        sv = arr.find_vertex(v.point)
        if sv is not None:
            return ("vertex", sv)
        for h in v.out:
            prov = edge_prov[min(h.id, h.twin.id)]
            if side in prov:
                return ("edge", prov[side])
        # Interior to a face of that side: inherit from an incident cell.
        if v.out:
            f = v.out[0].face
            return ("face", face_prov[f.id][side])
        f = v.isolated_face
        return ("face", face_prov[f.id][side])

    # --- apply the ten callbacks ------------------------------------------
    for v in out.vertices:
        ka, ra = vertex_side_prov(v, "a", a)
        kb, rb = vertex_side_prov(v, "b", b)
        pa = ra.payload
        pb = rb.payload
        if ka == "vertex" and kb == "vertex":
            v.payload = cb.vertex_vertex(pa, pb)
        elif ka == "vertex" and kb == "edge":
            v.payload = cb.vertex_edge(pa, pb)
        elif ka == "edge" and kb == "vertex":
            v.payload = cb.edge_vertex(pa, pb)
        elif ka == "vertex" and kb == "face":
            v.payload = cb.vertex_face(pa, pb)
        elif ka == "face" and kb == "vertex":
            v.payload = cb.face_vertex(pa, pb)
        elif ka == "edge" and kb == "edge":
            v.payload = cb.edge_edge(pa, pb)
        else:  # pragma: no cover - an output vertex always has a feature side
            raise AssertionError("vertex with face/face provenance")

    for h in out.edges():
        prov = edge_prov[min(h.id, h.twin.id)]
        if "a" in prov and "b" in prov:
            val = cb.edge_overlap(prov["a"].payload, prov["b"].payload)
        elif "a" in prov:
            fb = face_prov[h.face.id]["b"]
            val = cb.edge_face(prov["a"].payload, fb.payload)
        else:
            fa = face_prov[h.face.id]["a"]
            val = cb.face_edge(fa.payload, prov["b"].payload)
        out.set_edge_payload(h, val)

    for f in out.faces:
        fa, fb = face_prov[f.id]["a"], face_prov[f.id]["b"]
        f.payload = cb.face_face(fa.payload, fb.payload)
    return out


def _same_direction(src: Halfedge, h: Halfedge) -> bool:
    """Do a source halfedge and an output sub-halfedge run the same way?"""
    return dot(src.arc.normal, h.arc.normal) > 0


# -- debug dump ------------------------------------------------------------------


def dumps(arr: SphereArrangement) -> str:
    """Round-trippable text dump: vertices, edges, face CCB index lists."""
    from .kernel import format_rat

    vid = {v: i for i, v in enumerate(arr.vertices)}
    lines = [f"spherical-arrangement {len(arr.vertices)} {len(arr.edges())} {len(arr.faces)}"]
    for v in arr.vertices:
        d = v.point.dir
        iso = " isolated" if v.is_isolated else ""
        lines.append(
            f"v {format_rat(d.x)} {format_rat(d.y)} {format_rat(d.z)}{iso}"
        )
    eid = {}
    for i, h in enumerate(arr.edges()):
        eid[min(h.id, h.twin.id)] = i
        n = h.arc.normal
        lines.append(
            f"e {vid[h.source]} {vid[h.target]} "
            f"{format_rat(n.x)} {format_rat(n.y)} {format_rat(n.z)}"
        )
    for f in arr.faces:
        cycles = []
        for rep in f.ccbs:
            cycles.append(",".join(str(vid[h.source]) for h in rep.cycle()))
        iso = ",".join(str(vid[w]) for w in sorted(f.isolated, key=lambda v: vid[v]))
        lines.append(f"f ccbs={';'.join(cycles)} isolated={iso}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> SphereArrangement:
    """Rebuild an arrangement from its dump (payloads are not carried)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    nv, ne = int(head[1]), int(head[2])
    dirs: List[Vec3] = []
    isolated: List[bool] = []
    for ln in lines[1 : 1 + nv]:
        parts = ln.split()
        dirs.append(Vec3(parts[1], parts[2], parts[3]))
        isolated.append(ln.endswith(" isolated"))
    arr = new_arrangement()
    for ln in lines[1 + nv : 1 + nv + ne]:
        parts = ln.split()
        s, t = int(parts[1]), int(parts[2])
        arr.insert_disjoint_arc(arc_between(dirs[s], dirs[t]))
    for d, iso in zip(dirs, isolated):
        if iso:
            arr.insert_isolated_vertex(d)
    return arr
