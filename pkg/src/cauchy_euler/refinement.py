"""Subdivisions that keep n0 - n1 + n2 fixed, and cutting along a path.

* :func:`split_triangle` cuts one triangle by a segment and splits the
  neighbours whose edges received a new vertex.
* :func:`subdivide_along_curve` makes a curve trace simplicial.
* :func:`cut_open` duplicates a path so that it becomes boundary;
  :func:`reglue` undoes it.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

from . import geometry
from .complex_core import Complex2, edge_key, opposite_vertex, tri_edges, tri_key
from .errors import DegenerateCut, EdgeOnBoundary, NonTransversalTrace


@dataclass(frozen=True)
class VertexPoint:
    v: int


@dataclass(frozen=True)
class EdgePoint:
    """The point (1-s)*u + s*v on edge uv, with 0 < s < 1."""

    u: int
    v: int
    s: float

    @property
    def edge(self):
        return edge_key(self.u, self.v)

    def key(self):
        """Canonical (edge, parameter from the smaller endpoint)."""
        if self.u <= self.v:
            return (self.u, self.v, self.s)
        return (self.v, self.u, 1 - self.s)


def _locus_key(p):
    return ("v", p.v) if isinstance(p, VertexPoint) else ("e",) + p.key()


def _point_coords(c, p):
    if isinstance(p, VertexPoint):
        return c.embedding[p.v]
    return geometry.lerp(c.embedding[p.u], c.embedding[p.v], p.s)


# ---------------------------------------------------------------------------
# single triangle split by a segment


def _check_edge_point(t, p):
    if p.edge not in tri_edges(t):
        raise DegenerateCut(f"{p} is not on an edge of {t}")
    if not 0 < p.s < 1:
        raise DegenerateCut(f"{p} coincides with an endpoint of its edge")


def _split_edge_neighbors(c, e, x, skip, rm, add):
    """Fan every other triangle on edge e from new vertex x."""
    a, b = e
    for u in c.edge_triangles().get(e, ()):
        if u == skip:
            continue
        d = opposite_vertex(u, e)
        rm.append(u)
        add += [(a, x, d), (x, b, d)]


def split_triangle_detailed(c: Complex2, t, cut):
    """Like :func:`split_triangle` but also returns the new vertex ids."""
    t = tri_key(*t)
    if t not in c.triangle_set:
        raise DegenerateCut(f"{t} is not a triangle of the complex")
    p, q = cut
    if isinstance(p, VertexPoint) and isinstance(q, EdgePoint):
        p, q = q, p
    nid = c.max_vertex() + 1
    coords = {}
    rm, add = [t], []
    if isinstance(p, EdgePoint) and isinstance(q, EdgePoint):
        _check_edge_point(t, p)
        _check_edge_point(t, q)
        if p.edge == q.edge:
            raise DegenerateCut("both cut endpoints lie on the same edge")
        c_common = (set(p.edge) & set(q.edge)).pop()
        x, y = nid, nid + 1
        a = p.edge[0] if p.edge[1] == c_common else p.edge[1]
        b = q.edge[0] if q.edge[1] == c_common else q.edge[1]
        add.append((x, y, c_common))
        # quad a, b, y, x split from its lowest-id corner
        if a < b:
            add += [(a, b, y), (a, y, x)]
        else:
            add += [(a, b, x), (b, y, x)]
        _split_edge_neighbors(c, p.edge, x, t, rm, add)
        _split_edge_neighbors(c, q.edge, y, t, rm, add)
        new = [x, y]
        if c.embedding is not None:
            coords = {x: _point_coords(c, p), y: _point_coords(c, q)}
        removed_edges = [p.edge, q.edge]
    elif isinstance(p, EdgePoint) and isinstance(q, VertexPoint):
        _check_edge_point(t, p)
        a = q.v
        if a not in t or a in p.edge:
            raise DegenerateCut("vertex endpoint must be the corner opposite the edge point")
        x = nid
        b, cc = p.edge
        add += [(a, b, x), (a, x, cc)]
        _split_edge_neighbors(c, p.edge, x, t, rm, add)
        new = [x]
        if c.embedding is not None:
            coords = {x: _point_coords(c, p)}
        removed_edges = [p.edge]
    else:
        raise DegenerateCut("a cut between two corners is an existing edge")
    out = c.replace(rm, add, coords, remove_edges=removed_edges)
    return out, new


def split_triangle(c: Complex2, t, cut) -> Complex2:
    """Cut t along a segment; the cut becomes an edge and chi is unchanged."""
    return split_triangle_detailed(c, t, cut)[0]


def split_edge(c: Complex2, e, s=0.5):
    """Split edge e at parameter s, fanning every incident triangle.

    Equivalent to a vertex-to-opposite-edge :func:`split_triangle` applied
    to the first incident triangle.
    """
    e = edge_key(*e)
    ts = c.edge_triangles().get(e)
    if not ts:
        raise DegenerateCut(f"edge {e} has no triangle")
    t = ts[0]
    return split_triangle_detailed(c, t, (EdgePoint(e[0], e[1], s), VertexPoint(opposite_vertex(t, e))))


def inset_triangle(c: Complex2, t):
    """Place a smaller triangle inside t, joined to t by three split quads.

    Adds 3 vertices, 9 edges and 6 triangles.  Returns (complex, inner).
    """
    t = tri_key(*t)
    if t not in c.triangle_set:
        raise DegenerateCut(f"{t} is not a triangle of the complex")
    base = c.max_vertex() + 1
    inner = {v: base + i for i, v in enumerate(t)}
    add = [tuple(inner[v] for v in t)]
    for a, b in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
        pa, pb = inner[a], inner[b]
        add += [(a, b, pb), (a, pb, pa)]
    coords = None
    if c.embedding is not None:
        pts = [c.embedding[v] for v in t]
        cen = tuple(sum(x) / 3 for x in zip(*pts))
        coords = {inner[v]: geometry.lerp(cen, c.embedding[v], 0.5) for v in t}
    return c.replace([t], add, coords), tuple(inner[v] for v in t)


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class CurveEvent:
    triangle: tuple
    entry: object
    exit: object


@dataclass
class CurveTrace:
    events: list = field(default_factory=list)
    closed: bool = False


# local (dn0, dn1, dn2) of each case when the triangle is taken on its own
CASE_TABLE = {
    "V-opposite-edge": (1, 2, 1),
    "V-adjacent-edge": (2, 5, 3),
    "V-vertex": (1, 3, 2),
    "E-other-edge": (2, 4, 2),
    "E-same-edge": (3, 7, 4),
    "E-adjacent-vertex": (2, 5, 3),
    "E-opposite-vertex": (1, 2, 1),
}


def classify_event(t, entry, exit_):
    """Name of the case-table entry for a single crossing of triangle t."""
    ev, xv = isinstance(entry, VertexPoint), isinstance(exit_, VertexPoint)
    if ev and xv:
        return "V-vertex"
    if ev or xv:
        vp, ep = (entry, exit_) if ev else (exit_, entry)
        rel = "opposite" if vp.v not in ep.edge else "adjacent"
        return f"V-{rel}-edge" if ev else f"E-{rel}-vertex"
    return "E-same-edge" if entry.edge == exit_.edge else "E-other-edge"


def _validate_trace(c, curve):
    tris = c.triangle_set
    evs = curve.events
    for i, ev in enumerate(evs):
        t = tri_key(*ev.triangle)
        if t not in tris:
            raise NonTransversalTrace(f"event {i}: {t} is not a triangle")
        for p in (ev.entry, ev.exit):
            if isinstance(p, VertexPoint):
                if p.v not in t:
                    raise NonTransversalTrace(f"event {i}: vertex {p.v} not in {t}")
            elif isinstance(p, EdgePoint):
                if p.edge not in tri_edges(t):
                    raise NonTransversalTrace(f"event {i}: {p} not on an edge of {t}")
                if not 0 < p.s < 1:
                    raise NonTransversalTrace(f"event {i}: edge parameter {p.s} not interior")
            else:
                raise NonTransversalTrace(f"event {i}: curve endpoint inside a triangle")
        if _locus_key(ev.entry) == _locus_key(ev.exit):
            raise NonTransversalTrace(f"event {i}: enters and exits at the same point")
    for i in range(len(evs) - 1):
        if _locus_key(evs[i].exit) != _locus_key(evs[i + 1].entry):
            raise NonTransversalTrace(f"events {i} and {i + 1} do not share a point")
    if curve.closed and evs and _locus_key(evs[-1].exit) != _locus_key(evs[0].entry):
        raise NonTransversalTrace("closed trace does not return to its start")


def subdivide_along_curve(c: Complex2, curve: CurveTrace):
    """Return (refined complex, list of edges realizing the curve)."""
    if not curve.events:
        return c, []
    _validate_trace(c, curve)
    nid = c.max_vertex() + 1
    point_id = {}
    for ev in curve.events:
        for p in (ev.entry, ev.exit):
            if isinstance(p, EdgePoint):
                point_id.setdefault(p.key(), None)
    for k in sorted(point_id):
        point_id[k] = nid
        nid += 1

    def vid(p):
        return p.v if isinstance(p, VertexPoint) else point_id[p.key()]

    chords = defaultdict(list)
    for i, ev in enumerate(curve.events):
        chords[tri_key(*ev.triangle)].append((i, ev))
    on_edge = defaultdict(list)
    for (u, v, s), x in point_id.items():
        on_edge[(u, v)].append((s, x))
    touched = set(chords)
    et = c.edge_triangles()
    for e in on_edge:
        touched.update(et.get(e, ()))

    emb = c.embedding
    coords = {}
    if emb is not None:
        for (u, v, s), x in point_id.items():
            coords[x] = geometry.lerp(emb[u], emb[v], s)
    add = []
    path_of_event = {}
    counter = [nid]

    def fresh():
        counter[0] += 1
        return counter[0] - 1

    for t in sorted(touched):
        pts = {e: sorted(on_edge.get(e, ())) for e in tri_edges(t)}
        evs = chords.get(t, [])
        ends = {vid(evs[0][1].entry), vid(evs[0][1].exit)} if len(evs) == 1 else set()
        if len(evs) == 1 and all({x for _, x in pts[e]} <= ends for e in pts):
            i, ev = evs[0]
            tris, path, fc = _event_case(t, ev, vid, fresh, c, coords)
            add += tris
            path_of_event[i] = path
            coords.update(fc)
        else:
            tris, paths, fc = _general_split(t, pts, [(i, vid(ev.entry), vid(ev.exit), ev) for i, ev in evs],
                                             c, coords, fresh)
            add += tris
            path_of_event.update(paths)
            coords.update(fc)
    removed_edges = list(on_edge)
    out = c.replace(sorted(touched), add, coords if emb is not None else None, remove_edges=removed_edges)
    path = []
    for i in range(len(curve.events)):
        seq = path_of_event[i]
        path += [edge_key(a, b) for a, b in zip(seq, seq[1:])]
    return out, path


def _bulge(c, coords, p, q, apex, frac=1 / 3):
    if c.embedding is None:
        return None
    P = {**c.embedding, **coords}
    return tuple((P[p][k] + P[q][k] + P[apex][k]) * frac for k in range(len(P[p])))


def _event_case(t, ev, vid, fresh, c, coords):
    """Explicit subdivision of a triangle crossed once."""
    case = classify_event(t, ev.entry, ev.exit)
    en, ex = vid(ev.entry), vid(ev.exit)
    fc = {}
    if case in ("V-opposite-edge", "E-opposite-vertex"):
        vp, ep = (ev.entry, ev.exit) if case.startswith("V") else (ev.exit, ev.entry)
        a, d = vp.v, vid(ep)
        b, cc = ep.edge
        return [(a, b, d), (a, d, cc)], [en, ex], fc
    if case in ("V-adjacent-edge", "E-adjacent-vertex"):
        vp, ep = (ev.entry, ev.exit) if case.startswith("V") else (ev.exit, ev.entry)
        a, e = vp.v, vid(ep)
        cc = ep.edge[0] if ep.edge[1] == a else ep.edge[1]
        b = opposite_vertex(t, ep.edge)
        f = fresh()
        pos = _bulge(c, coords, a, e, b)
        if pos is not None:
            fc[f] = pos
        path = [en, f, ex]
        return [(a, b, f), (b, f, e), (b, e, cc), (a, f, e)], path, fc
    if case == "V-vertex":
        a, cc = ev.entry.v, ev.exit.v
        b = opposite_vertex(t, (a, cc))
        f = fresh()
        pos = _bulge(c, coords, a, cc, b)
        if pos is not None:
            fc[f] = pos
        return [(a, b, f), (b, f, cc), (a, f, cc)], [en, f, ex], fc
    if case == "E-other-edge":
        d, e = en, ex
        common = (set(ev.entry.edge) & set(ev.exit.edge)).pop()
        a = common
        cc = ev.entry.edge[0] if ev.entry.edge[1] == a else ev.entry.edge[1]
        b = ev.exit.edge[0] if ev.exit.edge[1] == a else ev.exit.edge[1]
        tris = [(a, d, e)]
        # quad d, cc, b, e split from its lowest-id corner
        if min(cc, b) == cc:
            tris += [(cc, e, d), (cc, e, b)]
        else:
            tris += [(d, cc, b), (b, e, d)]
        return tris, [en, ex], fc
    # E-same-edge: both points on edge (a, cc); order them along the edge
    a, cc = ev.entry.edge
    b = opposite_vertex(t, (a, cc))
    s1, s2 = ev.entry.key()[2], ev.exit.key()[2]
    d, e = (en, ex) if s1 < s2 else (ex, en)
    f = fresh()
    pos = _bulge(c, coords, d, e, b)
    if pos is not None:
        fc[f] = pos
    tris = [(a, b, d), (b, d, f), (b, f, e), (b, e, cc), (d, f, e)]
    return tris, [en, f, ex], fc


def _general_split(t, pts, chords, c, coords, fresh):
    """Triangulate triangle t given the points on its sides and its chords.

    Works in the triangle's own coordinates (the real embedding when there
    is one, a reference triangle otherwise) by tracing the faces of the
    planar graph and ear-clipping each face.
    """
    if c.embedding is not None and c.embedding_dim() == 2:
        P = {v: tuple(float(x) for x in c.embedding[v]) for v in t}
    else:
        P = {t[0]: (0.0, 0.0), t[1]: (1.0, 0.0), t[2]: (0.0, 1.0)}
    lines = defaultdict(set)   # vertex -> ids of triangle sides it lies on
    for e in tri_edges(t):
        lines[e[0]].add(e)
        lines[e[1]].add(e)
        for s, x in pts[e]:
            P[x] = geometry.lerp(P[e[0]], P[e[1]], s)
            lines[x].add(e)
    adj = defaultdict(set)
    for e in tri_edges(t):
        seq = [e[0]] + [x for _, x in pts[e]] + [e[1]]
        for a, b in zip(seq, seq[1:]):
            adj[a].add(b)
            adj[b].add(a)
    segs = []
    paths = {}
    fc = {}
    for i, en, ex, ev in chords:
        if lines[en] & lines[ex]:
            # chord along a side: route it through an interior vertex
            f = fresh()
            side = (lines[en] & lines[ex]).pop()
            apex = opposite_vertex(t, side)
            mid = geometry.lerp(P[en], P[ex], 0.5)
            lam = 0.3
            while True:
                cand = geometry.lerp(mid, P[apex], lam)
                if not any(geometry.segments_intersect(P[en], cand, P[a], P[b]) or
                           geometry.segments_intersect(cand, P[ex], P[a], P[b])
                           for a, b in segs if not ({a, b} & {en, ex})):
                    break
                lam /= 2
                if lam < 1e-6:
                    raise NonTransversalTrace(f"cannot route curve through {t}")
            P[f] = cand
            segs += [(en, f), (f, ex)]
            adj[en].add(f), adj[f].add(en), adj[f].add(ex), adj[ex].add(f)
            paths[i] = [en, f, ex]
            if c.embedding is not None:
                fc[f] = _unproject(c, t, P, cand)
        else:
            segs.append((en, ex))
            adj[en].add(ex), adj[ex].add(en)
            paths[i] = [en, ex]
    tris = []
    for face in _faces(adj, P):
        tris += _ear_clip(face, P)
    return tris, paths, fc


def _unproject(c, t, P, pt):
    """Coordinates for a point given in the 2D frame of t (3D-aware)."""
    if c.embedding_dim() == 2:
        return pt
    a, b, cc = (P[v] for v in t)
    det = (b[0] - a[0]) * (cc[1] - a[1]) - (cc[0] - a[0]) * (b[1] - a[1])
    l1 = ((pt[0] - a[0]) * (cc[1] - a[1]) - (cc[0] - a[0]) * (pt[1] - a[1])) / det
    l2 = ((b[0] - a[0]) * (pt[1] - a[1]) - (pt[0] - a[0]) * (b[1] - a[1])) / det
    A, B, C = (c.embedding[v] for v in t)
    return tuple(A[k] + l1 * (B[k] - A[k]) + l2 * (C[k] - A[k]) for k in range(len(A)))


def _faces(adj, P):
    """Bounded faces of a connected plane graph, as CCW vertex cycles."""
    order = {}
    for v, nbrs in adj.items():
        order[v] = sorted(nbrs, key=lambda w: math.atan2(P[w][1] - P[v][1], P[w][0] - P[v][0]))
    used = set()
    faces = []
    for u in adj:
        for v in adj[u]:
            if (u, v) in used:
                continue
            face = []
            a, b = u, v
            while (a, b) not in used:
                used.add((a, b))
                face.append(a)
                nb = order[b]
                k = nb.index(a)
                a, b = b, nb[(k - 1) % len(nb)]
            area = sum(P[face[i]][0] * P[face[(i + 1) % len(face)]][1]
                       - P[face[(i + 1) % len(face)]][0] * P[face[i]][1] for i in range(len(face)))
            if area > 0:
                faces.append(face)
    return faces


def _ear_clip(poly, P):
    poly = list(poly)
    out = []
    guard = 0
    while len(poly) > 3:
        guard += 1
        if guard > 10 * len(P) + 100:
            raise NonTransversalTrace("failed to triangulate a face")
        n = len(poly)
        done = False
        # prefer the ear at the lowest id for determinism
        for k in sorted(range(n), key=lambda i: poly[i]):
            a, b, cc = poly[k - 1], poly[k], poly[(k + 1) % n]
            if geometry.orient(P[a], P[b], P[cc]) <= 0:
                continue
            if any(geometry.point_in_triangle(P[x], P[a], P[b], P[cc], strict=False)
                   for x in poly if x not in (a, b, cc)):
                continue
            out.append((a, b, cc))
            poly.pop(k)
            done = True
            break
        if not done:
            raise NonTransversalTrace("face has no ear")
    out.append(tuple(poly))
    return out


# ---------------------------------------------------------------------------
# cutting


@dataclass
class CutResult:
    complex: Complex2
    origin: dict
    duplicated_vertices: int
    duplicated_edges: int


def path_from_walk(walk):
    return [edge_key(a, b) for a, b in zip(walk, walk[1:])]


def cut_open(c: Complex2, path) -> CutResult:
    """Duplicate the path edges (and the vertices they separate)."""
    cut = sorted({edge_key(*e) for e in path})
    et = c.edge_triangles()
    for e in cut:
        if e not in c.edge_set or len(et.get(e, ())) != 2:
            raise EdgeOnBoundary(e)
    cutset = set(cut)
    cut_vertices = sorted({v for e in cut for v in e})
    vt = c.vertex_triangles()
    nid = c.max_vertex() + 1
    copy_of = {}   # (vertex, triangle) -> new id
    origin = {v: v for v in c.vertices}
    dup_v = 0
    for v in cut_vertices:
        tris = vt.get(v, [])
        parent = {t: t for t in tris}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for e in {e for t in tris for e in tri_edges(t) if v in e}:
            if e in cutset:
                continue
            ts = [u for u in et[e]]
            for u in ts[1:]:
                ru, r0 = find(u), find(ts[0])
                if ru != r0:
                    parent[max(ru, r0)] = min(ru, r0)
        groups = defaultdict(list)
        for t in tris:
            groups[find(t)].append(t)
        for k, root in enumerate(sorted(groups, key=lambda r: min(groups[r]))):
            ident = v if k == 0 else nid
            if k > 0:
                origin[nid] = v
                nid += 1
                dup_v += 1
            for t in groups[root]:
                copy_of[(v, t)] = ident
    tris = [tuple(copy_of.get((v, t), v) for v in t) for t in c.triangles]
    loose_edges = [e for e in c.edges if not et.get(e)]
    out = Complex2.from_triangles(tris, None, vertices=c.vertices, edges=loose_edges)
    dup_e = 0
    for e in cut:
        t1, t2 = et[e]
        if {copy_of.get((v, t1), v) for v in e} != {copy_of.get((v, t2), v) for v in e}:
            dup_e += 1
    n_old, n_new = c.counts(), out.counts()
    if (n_new.n0 - n_old.n0, n_new.n1 - n_old.n1, n_new.n2 - n_old.n2) != (dup_v, dup_e, 0):
        raise AssertionError("cut bookkeeping mismatch")
    if n_new.chi != n_old.chi + dup_v - dup_e:
        raise AssertionError("cut changed chi unexpectedly")
    return CutResult(out, origin, dup_v, dup_e)


def cut_along(c: Complex2, path) -> Complex2:
    return cut_open(c, path).complex


def reglue(res: CutResult) -> Complex2:
    """Identify every copy with its original vertex again."""
    o = res.origin
    c = res.complex
    tris = [tri_key(*(o[v] for v in t)) for t in c.triangles]
    edges = [edge_key(o[u], o[v]) for u, v in c.edges]
    return Complex2.from_triangles(tris, None, vertices={o[v] for v in c.vertices}, edges=edges)
