"""Collision, separation-distance, and directional-penetration queries
against a precomputed Minkowski sum M = P (+) (-Q).

Translates of P and Q intersect exactly when the query point s = w - u
lies in M; the classification walks the Gaussian map of M toward the
facet stabbed by the ray from an interior point through s, reusing the
previous answer as a hint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .gaussian import GaussianMap, primal_mesh, reflect
from .kernel import Rational, Vec3, cross, dot
from .minkowski import minkowski, primal_facets

INSIDE = "inside"
ON_BOUNDARY = "on_boundary"
OUTSIDE = "outside"


class PointOutside(ValueError):
    pass


@dataclass(frozen=True)
class PlacementQuery:
    """Translations of the two bodies; the derived configuration-space
    query point is their exact difference."""

    u: Vec3
    w: Vec3

    @property
    def s(self) -> Vec3:
        return self.w - self.u


@dataclass
class Witness:
    """Classification plus the facet certifying it: OUTSIDE means the
    query point violates the witness facet's supporting halfspace."""

    classification: str
    facet_normal: Vec3
    facet_offset: Rational
    hint: object  # arrangement vertex handle, reusable across queries


class _FacetIndex:
    """Facet planes of a Gaussian map, addressable by arrangement vertex."""

    def __init__(self, g: GaussianMap):
        self.g = g
        self.facets = primal_facets(g)
        self.plane = {}
        for w in self.facets:
            n = w.point.dir
            b = dot(n, w.out[0].face.payload)
            self.plane[w.id] = (n, b)

    def neighbors(self, w):
        out = []
        for h in w.out:
            e, t = h, h.target
            while t.id not in self.plane and t.degree == 2:
                # hop over identification-split artifact vertices
                e = t.out[0] if t.out[0] is not e.twin else t.out[1]
                t = e.target
            if t.id in self.plane:
                out.append(t)
        return out


def _facet_index(g: GaussianMap) -> _FacetIndex:
    idx = getattr(g, "_facet_index", None)
    if idx is None:
        idx = _FacetIndex(g)
        object.__setattr__(g, "_facet_index", idx)
    return idx


def _interior_centroid(g: GaussianMap) -> Vec3:
    pts = g.primal_vertices()
    acc = Vec3(0, 0, 0)
    for p in pts:
        acc = acc + p
    return acc.scale(Fraction(1, len(pts)))


def _exit_parameter(plane, c: Vec3, d: Vec3) -> Optional[Rational]:
    n, b = plane
    den = dot(n, d)
    if den <= 0:
        return None
    return (b - dot(n, c)) / den


def classify_point(M: GaussianMap, s: Vec3, hint=None) -> Witness:
    """Exact classification of s against the primal polytope of M.

    Walks the Gaussian map from the hint (or the best-matching facet
    normal) toward the facet stabbed by the ray from the interior point
    through s; a final scan certifies the stabbed facet, so hints can
    never change the answer."""
    idx = _facet_index(M)
    c = _interior_centroid(M)
    d = s - c
    if d.is_zero():
        w0 = idx.facets[0]
        n, b = idx.plane[w0.id]
        return Witness(INSIDE, n, b, w0)

    def t_of(w):
        return _exit_parameter(idx.plane[w.id], c, d)

    if hint is not None and getattr(hint, "id", None) in idx.plane:
        cur = hint
    else:
        cur = max(idx.facets, key=lambda w: _dot_score(w.point.dir, d))
    cur_t = t_of(cur)
    visited = {cur.id}
    improved = True
    while improved:
        improved = False
        for nb in idx.neighbors(cur):
            if nb.id in visited:
                continue
            nt = t_of(nb)
            if nt is not None and (cur_t is None or nt < cur_t):
                cur, cur_t = nb, nt
                visited.add(nb.id)
                improved = True
                break
    best, best_t = cur, cur_t
    # Verify global optimality; scan everything if the local walk stalled.
    for w in idx.facets:
        t = t_of(w)
        if t is not None and (best_t is None or t < best_t):
            best, best_t = w, t
    n, b = idx.plane[best.id]
    side = dot(n, s) - b
    if side < 0:
        cls = INSIDE
    elif side == 0:
        cls = ON_BOUNDARY
    else:
        cls = OUTSIDE
    return Witness(cls, n, b, best)


def _dot_score(n: Vec3, d: Vec3):
    # scale-free ordering of <n/|n|, d>: compare sign and squared ratio
    v = dot(n, d)
    return (1 if v > 0 else (-1 if v < 0 else 0), v * v / n.norm_sq() * (1 if v > 0 else -1))


def collide(
    P: GaussianMap,
    Q: GaussianMap,
    u: Vec3,
    w: Vec3,
    cache: Optional[GaussianMap] = None,
    hint=None,
) -> Tuple[bool, Witness, GaussianMap]:
    """Do P translated by u and Q translated by w intersect (closed-set
    convention: grazing contact counts, reported distinctly through the
    witness)?  Returns (collides, witness, M) so M can be reused."""
    M = cache if cache is not None else minkowski(P, reflect(Q))
    s = w - u
    wit = classify_point(M, s, hint)
    return wit.classification in (INSIDE, ON_BOUNDARY), wit, M


def trace(
    P: GaussianMap, Q: GaussianMap, placements
) -> List[str]:
    """Simulation trace: one classification record per frame, reusing the
    Minkowski sum and the witness hint across frames."""
    M = minkowski(P, reflect(Q))
    lines = []
    hint = None
    for frame, query in enumerate(placements):
        wit = classify_point(M, query.s, hint)
        hint = wit.hint
        lines.append(f"frame {frame} {wit.classification}")
    return lines


def separation_sq(M: GaussianMap, s: Vec3) -> Rational:
    """Exact squared distance from s to the primal polytope of M (zero
    when s is inside or on the boundary)."""
    mesh = primal_mesh(M)
    inside = True
    for i in range(len(mesh.facets)):
        n, b = mesh.facet_normal(i), mesh.facet_offset(i)
        if dot(n, s) > b:
            inside = False
            break
    if inside:
        return Fraction(0)
    best = None
    for v in mesh.vertices:
        d2 = (s - v).norm_sq()
        if best is None or d2 < best:
            best = d2
    seen = set()
    for cyc in mesh.facets:
        for a_i, b_i in zip(cyc, cyc[1:] + cyc[:1]):
            if (b_i, a_i) in seen:
                continue
            seen.add((a_i, b_i))
            a, b = mesh.vertices[a_i], mesh.vertices[b_i]
            e = b - a
            t = dot(s - a, e) / e.norm_sq()
            if 0 < t < 1:
                q = a + e.scale(t)
                d2 = (s - q).norm_sq()
                if d2 < best:
                    best = d2
    for i, cyc in enumerate(mesh.facets):
        n, bo = mesh.facet_normal(i), mesh.facet_offset(i)
        h = dot(n, s) - bo
        q = s - n.scale(h / n.norm_sq())
        ok = True
        m = len(cyc)
        for k in range(m):
            a = mesh.vertices[cyc[k]]
            b = mesh.vertices[cyc[(k + 1) % m]]
            if dot(cross(b - a, q - a), n) < 0:
                ok = False
                break
        if ok:
            d2 = h * h / n.norm_sq()
            if d2 < best:
                best = d2
    return best


def directional_penetration(
    M: GaussianMap, s: Vec3, r: Vec3
) -> Tuple[Rational, Vec3]:
    """Exact exit parameter: the smallest alpha >= 0 with s + alpha*r on
    the boundary of M's primal polytope, plus the exit point."""
    if r.is_zero():
        from .kernel import ZeroVector

        raise ZeroVector("penetration direction must be nonzero")
    idx = _facet_index(M)
    alpha = None
    for w in idx.facets:
        n, b = idx.plane[w.id]
        if dot(n, s) > b:
            raise PointOutside(f"{s} is outside the polytope")
        t = _exit_parameter((n, b), s, r)
        if t is not None and (alpha is None or t < alpha):
            alpha = t
    assert alpha is not None  # bounded polytope: the ray must exit
    return alpha, s + r.scale(alpha)
