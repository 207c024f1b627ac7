"""Exact Minkowski sums of convex polytopes by overlaying their Gaussian
maps.

The overlay identifies every pair of features with parallel supporting
planes; a face of the result is decorated with the sum of the primal
vertices of the two inducing faces, so the output is again a decorated
Gaussian map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .arrangement import OverlayCallbacks, overlay
from .gaussian import GaussianMap


class DegenerateCoincidence(ValueError):
    """Overlay vertices coincide; crossing counts are only lower bounds."""


_SUM_CALLBACKS = OverlayCallbacks(
    vertex_vertex=lambda a, b: ("vv", a, b),
    vertex_edge=lambda a, b: ("ve", a),
    edge_vertex=lambda a, b: ("ev", b),
    vertex_face=lambda a, b: ("vf", a),
    face_vertex=lambda a, b: ("fv", b),
    edge_edge=lambda a, b: ("xx",),
    edge_overlap=lambda a, b: None,
    edge_face=lambda a, b: None,
    face_edge=lambda a, b: None,
    face_face=lambda a, b: a + b,
)


def minkowski(g1: GaussianMap, g2: GaussianMap) -> GaussianMap:
    """Gaussian map of the Minkowski sum: overlay with primal vertices
    added face by face.  Vertices keep provenance tags; edges carry no
    payload."""
    arr = overlay(g1.arrangement, g2.arrangement, _SUM_CALLBACKS)
    return GaussianMap(arr)


def minkowski_many(gs: Sequence[GaussianMap]) -> GaussianMap:
    """Left-to-right fold of pairwise sums."""
    if len(gs) < 2:
        raise ValueError("need at least two summands")
    acc = gs[0]
    for g in gs[1:]:
        acc = minkowski(acc, g)
    return acc


@dataclass
class SumStats:
    """Feature bookkeeping of a Minkowski-sum overlay."""

    summand_facets: Tuple[int, ...]
    sum_facets: int
    sum_edges: int
    sum_vertices: int
    crossings: int  # v_x: intersections of edges of the two maps

    def degree_identity_holds(self, input_edges: Sequence[int]) -> bool:
        return 2 * sum(input_edges) + 4 * self.crossings == 2 * self.sum_edges


def stats(g_out: GaussianMap, inputs: Sequence[GaussianMap]) -> SumStats:
    """Derive the crossing count v_x = V_out - sum(V_in) and check the
    vertex-degree identity; raises DegenerateCoincidence when overlay
    vertices coincide (the count is then only a lower bound)."""
    for v in g_out.arrangement.vertices:
        tag = v.payload
        if isinstance(tag, tuple) and tag and tag[0] in ("vv", "ve", "ev"):
            raise DegenerateCoincidence(
                f"coincident overlay features at {v.point}: {tag[0]}"
            )
    V_out, HE_out, F_out = g_out.counts()
    v_in = sum(g.counts()[0] for g in inputs)
    e_in = [g.counts()[1] // 2 for g in inputs]
    v_x = V_out - v_in
    st = SumStats(
        summand_facets=tuple(len(primal_facets(g)) for g in inputs),
        sum_facets=len(primal_facets(g_out)),
        sum_edges=HE_out // 2,
        sum_vertices=V_out,
        crossings=v_x,
    )
    if not st.degree_identity_holds(e_in):
        raise DegenerateCoincidence(
            f"degree identity failed: inputs e={e_in}, v_x={v_x}, "
            f"e_out={st.sum_edges}"
        )
    return st


def primal_facets(g: GaussianMap) -> List:
    """The real (fused) facet-vertices of a Gaussian map."""
    from .gaussian import _is_split_artifact

    return [
        w
        for w in g.arrangement.vertices
        if not _is_split_artifact(g.arrangement, w)
    ]


def facet_count(g: GaussianMap) -> int:
    return len(primal_facets(g))
