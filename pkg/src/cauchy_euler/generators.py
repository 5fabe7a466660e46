"""Random inputs for property tests and the acceptance corpus."""

from __future__ import annotations

import numpy as np

from .complex_core import Complex2
from .planar_rep import PlanarPolygon


def random_disk(n_points: int, rng, shape="round", aspect=1.0) -> PlanarPolygon:
    """Delaunay triangulation of random points; its hull is the boundary.

    ``shape="strip"`` samples an ``aspect`` x 1 rectangle; ``shape="convex"``
    puts every point on a circle (no interior vertex until a seed is inset).
    """
    from scipy.spatial import Delaunay

    if shape == "round":
        r = np.sqrt(rng.random(n_points))
        a = rng.random(n_points) * 2 * np.pi
        pts = np.c_[r * np.cos(a), r * np.sin(a)]
    elif shape == "square":
        pts = rng.random((n_points, 2))
    elif shape == "strip":
        pts = rng.random((n_points, 2)) * np.array([aspect, 1.0])
    elif shape == "convex":
        a = np.sort(rng.random(n_points)) * 2 * np.pi
        pts = np.c_[np.cos(a), np.sin(a)]
    else:
        raise ValueError(f"unknown shape {shape!r}")
    # number points by angle around the centre so that ids are spatially coherent
    order = np.lexsort((np.hypot(pts[:, 0], pts[:, 1]), np.arctan2(pts[:, 1] - pts[:, 1].mean(), pts[:, 0] - pts[:, 0].mean())))
    pts = pts[order]
    tri = Delaunay(pts)
    emb = {i: (float(x), float(y)) for i, (x, y) in enumerate(pts)}
    tris = [tuple(int(v) for v in s) for s in tri.simplices]
    used = sorted({v for t in tris for v in t})
    c = Complex2.from_triangles(tris, {v: emb[v] for v in used}, vertices=used)
    return PlanarPolygon(c, name=f"random-{shape}-{n_points}")


def disk_with_triangles(n_triangles: int, rng, shape="round") -> PlanarPolygon:
    """A random disk with roughly ``n_triangles`` triangles (about 2 per point)."""
    return random_disk(max(4, n_triangles // 2 + 2), rng, shape)


def random_grid_disk(rows: int, cols: int, rng, jitter=0.25) -> PlanarPolygon:
    """A jittered rows x cols grid, each cell cut by a random diagonal."""
    vid = lambda i, j: j * (cols + 1) + i  # noqa: E731
    emb = {}
    for j in range(rows + 1):
        for i in range(cols + 1):
            dx, dy = (rng.random(2) - 0.5) * 2 * jitter
            on_x = i in (0, cols)
            on_y = j in (0, rows)
            emb[vid(i, j)] = (float(i + (0 if on_x else dx)), float(j + (0 if on_y else dy)))
    tris = []
    for j in range(rows):
        for i in range(cols):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            if rng.random() < 0.5:
                tris += [(a, b, c), (a, c, d)]
            else:
                tris += [(a, b, d), (b, c, d)]
    c = Complex2.from_triangles(tris, emb)
    return PlanarPolygon(c, name=f"random-grid-{rows}x{cols}")


def random_curve_trace(c: Complex2, rng, max_events=8, vertex_prob=0.25):
    """A random transversal trace that meets each triangle, vertex and edge at most once.

    Points are vertices (with probability ``vertex_prob``) or interior
    points of edges, with parameters in [0.15, 0.85].
    """
    from .complex_core import tri_edges
    from .refinement import CurveEvent, CurveTrace, EdgePoint, VertexPoint

    et = c.edge_triangles()
    vt = c.vertex_triangles()
    used = set()

    def pick(t):
        vs = [v for v in t if ("v", v) not in used]
        es = [e for e in tri_edges(t) if ("e", e) not in used]
        if vs and (not es or rng.random() < vertex_prob):
            v = vs[int(rng.integers(len(vs)))]
            used.add(("v", v))
            return VertexPoint(v)
        if not es:
            return None
        e = es[int(rng.integers(len(es)))]
        used.add(("e", e))
        return EdgePoint(e[0], e[1], float(rng.uniform(0.15, 0.85)))

    t = c.triangles[int(rng.integers(len(c.triangles)))]
    entry = pick(t)
    seen, events = set(), []
    for _ in range(max_events):
        seen.add(t)
        exit_ = pick(t)
        if exit_ is None:
            break
        events.append(CurveEvent(t, entry, exit_))
        around = et[exit_.edge] if isinstance(exit_, EdgePoint) else vt[exit_.v]
        nxt = [u for u in around if u not in seen]
        if not nxt:
            break
        t = nxt[int(rng.integers(len(nxt)))]
        entry = exit_
    return CurveTrace(events)


def random_split(c: Complex2, rng):
    """One random chi-preserving cut of a random triangle of ``c``.

    Half the time the cut joins points on two edges, otherwise a corner
    and a point on the opposite edge.  Returns the new complex.
    """
    from .complex_core import tri_edges
    from .refinement import EdgePoint, VertexPoint, split_triangle

    t = c.triangles[int(rng.integers(len(c.triangles)))]
    edges = tri_edges(t)
    s = lambda: float(rng.uniform(0.15, 0.85))  # noqa: E731
    if rng.random() < 0.5:
        i, j = rng.choice(3, size=2, replace=False)
        cut = (EdgePoint(*edges[i], s()), EdgePoint(*edges[j], s()))
    else:
        e = edges[int(rng.integers(3))]
        apex = next(v for v in t if v not in e)
        cut = (VertexPoint(apex), EdgePoint(*e, s()))
    return split_triangle(c, t, cut)
