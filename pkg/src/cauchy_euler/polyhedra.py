"""Convex polyhedra: validation, Descartes' angle sum, Schlegel projection.

The projection keeps polygonal faces in a :class:`PolygonalDisk`;
:func:`triangulate_faces` turns it into a :class:`PlanarPolygon`.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .complex_core import Complex2, CountVector, ValidationReport, _check_planar_embedding, edge_key
from .errors import DegenerateAngle, NonSimpleFace, ProjectionOverlap
from .planar_rep import IdentificationScheme, PlanarPolygon

EPS = 1e-9


@dataclass
class ConvexPolyhedron:
    vertices: dict
    faces: list

    def __post_init__(self):
        self.vertices = {int(k): tuple(float(x) for x in v) for k, v in self.vertices.items()}
        self.faces = [tuple(int(x) for x in f) for f in self.faces]

    def edges(self):
        es = set()
        for f in self.faces:
            for i in range(len(f)):
                es.add(edge_key(f[i], f[(i + 1) % len(f)]))
        return sorted(es)

    def counts(self):
        return CountVector(len(self.vertices), len(self.edges()), len(self.faces))

    def euler_characteristic(self):
        return self.counts().chi

    def point(self, v):
        return np.array(self.vertices[v])

    def face_plane(self, i):
        """Unit normal (Newell) and centroid of face i."""
        f = self.faces[i]
        pts = [self.point(v) for v in f]
        n = np.zeros(3)
        for k in range(len(pts)):
            a, b = pts[k], pts[(k + 1) % len(pts)]
            n += np.array([(a[1] - b[1]) * (a[2] + b[2]),
                           (a[2] - b[2]) * (a[0] + b[0]),
                           (a[0] - b[0]) * (a[1] + b[1])])
        norm = np.linalg.norm(n)
        return (n / norm if norm > 0 else n), np.mean(pts, axis=0)

    def diameter(self):
        pts = np.array(list(self.vertices.values()))
        d = pts[:, None, :] - pts[None, :, :]
        return float(np.sqrt((d ** 2).sum(-1)).max())

    def affine(self, matrix, shift=(0.0, 0.0, 0.0)):
        m = np.asarray(matrix, dtype=float)
        verts = {v: tuple(m @ np.array(p) + np.asarray(shift)) for v, p in self.vertices.items()}
        faces = list(self.faces)
        if np.linalg.det(m) < 0:
            faces = [tuple(reversed(f)) for f in faces]
        return ConvexPolyhedron(verts, faces)


def validate_convex(p: ConvexPolyhedron, eps=EPS) -> ValidationReport:
    rep = ValidationReport()
    directed = defaultdict(int)
    for i, f in enumerate(p.faces):
        if len(f) < 3:
            rep.add("short-face", (i,), "face with fewer than 3 vertices")
            continue
        if len(set(f)) != len(f):
            rep.add("repeated-vertex", (i,), "face repeats a vertex")
        for v in f:
            if v not in p.vertices:
                rep.add("missing-vertex", (v,), f"used by face {i}")
        for k in range(len(f)):
            directed[(f[k], f[(k + 1) % len(f)])] += 1
    if not rep.ok:
        return rep
    und = defaultdict(list)
    for (a, b), k in directed.items():
        und[edge_key(a, b)].append(((a, b), k))
    for e in sorted(und):
        uses = sum(k for _, k in und[e])
        if uses != 2:
            rep.add("edge-incidence", e, f"edge in {uses} faces")
        elif len(und[e]) != 2:
            rep.add("edge-incidence", e, "both faces traverse the edge the same way")
    deg = defaultdict(set)
    for a, b in und:
        deg[a].add(b)
        deg[b].add(a)
    for v in sorted(p.vertices):
        if len(deg[v]) < 3:
            rep.add("vertex-degree", (v,), f"vertex on {len(deg[v])} edges")
    # faces around a vertex must form a single cycle
    for v in sorted(p.vertices):
        around = [i for i, f in enumerate(p.faces) if v in f]
        adj = defaultdict(set)
        for i in around:
            for j in around:
                if i < j:
                    fi, fj = p.faces[i], p.faces[j]
                    ei = {edge_key(fi[k], fi[(k + 1) % len(fi)]) for k in range(len(fi))}
                    ej = {edge_key(fj[k], fj[(k + 1) % len(fj)]) for k in range(len(fj))}
                    if any(v in e for e in ei & ej):
                        adj[i].add(j)
                        adj[j].add(i)
        if around:
            seen, stack = {around[0]}, [around[0]]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) != len(around):
                rep.add("vertex-incidence", (v,), "faces around the vertex do not form one cycle")
    for i, f in enumerate(p.faces):
        n, c = p.face_plane(i)
        if not np.any(n):
            rep.add("degenerate-face", (i,), "zero normal")
            continue
        for v in f:
            if abs(float(n @ (p.point(v) - c))) > 1e-7 * max(1.0, p.diameter()):
                rep.add("non-planar-face", (i,), f"vertex {v} off the face plane")
                break
        d = [float(n @ (p.point(v) - c)) for v in p.vertices]
        if max(d) > eps and min(d) < -eps:
            bad = [v for v, x in zip(p.vertices, d) if x > eps]
            rep.add("convexity", (i,), f"vertices {bad} beyond the face plane")
        elif max(d) > eps:
            rep.add("orientation", (i,), "face normal points inward")
    return rep


def face_angles(p: ConvexPolyhedron, i):
    f = p.faces[i]
    out = []
    for k in range(len(f)):
        a, b, c = p.point(f[k - 1]), p.point(f[k]), p.point(f[(k + 1) % len(f)])
        u, w = a - b, c - b
        nu, nw = np.linalg.norm(u), np.linalg.norm(w)
        if nu == 0 or nw == 0 or np.linalg.norm(np.cross(u, w)) <= 1e-12 * nu * nw:
            raise DegenerateAngle(f"face {i}: vertices {f[k - 1]},{f[k]},{f[(k + 1) % len(f)]} collinear")
        out.append(math.acos(max(-1.0, min(1.0, float(u @ w) / (nu * nw)))))
    return out


def descartes_angle_sum(p: ConvexPolyhedron):
    """(total face angle in right angles, 4*(n0-2), |difference|)."""
    total = math.fsum(a for i in range(len(p.faces)) for a in face_angles(p, i)) / (math.pi / 2)
    expected = 4 * (len(p.vertices) - 2)
    return total, expected, abs(total - expected)


# ---------------------------------------------------------------------------
# projection


@dataclass
class PolygonalDisk:
    """Planar straight-line drawing: outer cycle plus polygonal inner faces."""

    embedding: dict
    faces: list
    outer: list
    meta: dict = field(default_factory=dict)

    def edges(self):
        es = set()
        for f in self.faces + [self.outer]:
            for k in range(len(f)):
                es.add(edge_key(f[k], f[(k + 1) % len(f)]))
        return sorted(es)

    def counts(self):
        return CountVector(len(self.embedding), len(self.edges()), len(self.faces))


def schlegel_projection(p: ConvexPolyhedron, removed_face: int, retries=10) -> PolygonalDisk:
    """Central projection onto the removed face's plane.

    The viewpoint starts at twice the diameter above the face centroid; if
    edges cross it is moved closer (halving the height), since too distant a
    viewpoint lets faces adjacent to the removed one fold over.
    """
    n, c0 = p.face_plane(removed_face)
    others = [float(n @ (p.point(v) - c0)) for v in p.vertices]
    if max(others) > 1e-9:
        n = -n
    f0 = p.faces[removed_face]
    u1 = p.point(f0[1]) - p.point(f0[0])
    u1 = u1 - (u1 @ n) * n
    u1 /= np.linalg.norm(u1)
    u2 = np.cross(n, u1)
    h = 2 * p.diameter()
    last = None
    for _ in range(retries + 1):
        eye = c0 + h * n
        emb = {}
        for v in sorted(p.vertices):
            x = p.point(v)
            t = -h / float(n @ (x - eye))
            q = eye + t * (x - eye) - c0
            emb[v] = (float(q @ u1), float(q @ u2))
        faces = [f for i, f in enumerate(p.faces) if i != removed_face]
        disk = PolygonalDisk(emb, faces, list(f0), {"height": h})
        bad = _drawing_overlaps(disk)
        if not bad:
            return disk
        last = bad
        h /= 2
    raise ProjectionOverlap(f"projected edges cross: {last}")


def _drawing_overlaps(d: PolygonalDisk):
    c = Complex2(d.embedding.keys(), d.edges(), (), d.embedding)
    rep = ValidationReport()
    _check_planar_embedding(c, rep)
    if rep.violations:
        return str(rep.violations[0])
    outer = [d.embedding[v] for v in d.outer]
    area = geometry.signed_area(outer)
    for v, pt in d.embedding.items():
        if v in d.outer:
            continue
        for k in range(len(outer)):
            s = geometry.orient(outer[k], outer[(k + 1) % len(outer)], pt)
            if s == 0 or (s > 0) != (area > 0):
                return f"vertex {v} not inside the outer face"
    return None


def _fan_ok(face, P):
    f = list(face)
    k = f.index(min(f))
    f = f[k:] + f[:k]
    sign = 1 if geometry.signed_area([P[v] for v in f]) > 0 else -1
    tris = [(f[0], f[i], f[i + 1]) for i in range(1, len(f) - 1)]
    for t in tris:
        if geometry.orient(*(P[v] for v in t)) != sign:
            return None
    return tris


def _ear_clip_face(face, P):
    poly = list(face)
    if geometry.signed_area([P[v] for v in poly]) < 0:
        poly.reverse()
    out = []
    while len(poly) > 3:
        n = len(poly)
        for k in sorted(range(n), key=lambda i: poly[i]):
            a, b, c = poly[k - 1], poly[k], poly[(k + 1) % n]
            if geometry.orient(P[a], P[b], P[c]) <= 0:
                continue
            if any(geometry.point_in_triangle(P[x], P[a], P[b], P[c], strict=False)
                   for x in poly if x not in (a, b, c)):
                continue
            out.append((a, b, c))
            poly.pop(k)
            break
        else:
            raise NonSimpleFace(f"face {face} has no ear")
    out.append(tuple(poly))
    return out


def _check_simple(face, P):
    if len(set(face)) != len(face):
        raise NonSimpleFace(f"face {face} repeats a vertex")
    n = len(face)
    for i in range(n):
        a, b = P[face[i]], P[face[(i + 1) % n]]
        for j in range(i + 2, n):
            if (j + 1) % n == i:
                continue
            c, d = P[face[j]], P[face[(j + 1) % n]]
            if geometry.segments_intersect(a, b, c, d):
                raise NonSimpleFace(f"face {face} self-intersects")


def triangulate_faces(k) -> PlanarPolygon:
    """Fan each face from its lowest id (ear clipping when the fan is bad)."""
    if isinstance(k, PlanarPolygon):
        return k
    P = k.embedding
    tris = []
    for face in k.faces:
        _check_simple(face, P)
        fan = _fan_ok(face, P)
        tris += fan if fan is not None else _ear_clip_face(face, P)
    c = Complex2.from_triangles(tris, P, vertices=P.keys())
    return PlanarPolygon(c, IdentificationScheme(), "schlegel")


# ---------------------------------------------------------------------------
# solids

PHI = (1 + 5 ** 0.5) / 2


def _hull_faces(pts):
    """Outward-oriented triangular faces of a point set in convex position."""
    from scipy.spatial import ConvexHull

    arr = np.array(pts, dtype=float)
    hull = ConvexHull(arr)
    cen = arr.mean(axis=0)
    faces = []
    for s in hull.simplices:
        a, b, c = arr[s]
        if np.cross(b - a, c - a) @ (a - cen) < 0:
            s = [s[0], s[2], s[1]]
        faces.append(tuple(int(x) for x in s))
    return faces


def solid(name: str) -> ConvexPolyhedron:
    if name == "tetrahedron":
        v = {0: (1, 1, 1), 1: (1, -1, -1), 2: (-1, 1, -1), 3: (-1, -1, 1)}
        return ConvexPolyhedron(v, [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)])
    if name == "cube":
        v = {i: ((i >> 0) & 1, (i >> 1) & 1, (i >> 2) & 1) for i in range(8)}
        faces = [(0, 2, 3, 1), (4, 5, 7, 6), (0, 1, 5, 4), (2, 6, 7, 3), (0, 4, 6, 2), (1, 3, 7, 5)]
        return ConvexPolyhedron(v, faces)
    if name == "octahedron":
        v = {0: (1, 0, 0), 1: (-1, 0, 0), 2: (0, 1, 0), 3: (0, -1, 0), 4: (0, 0, 1), 5: (0, 0, -1)}
        faces = [(0, 2, 4), (2, 1, 4), (1, 3, 4), (3, 0, 4), (2, 0, 5), (1, 2, 5), (3, 1, 5), (0, 3, 5)]
        return ConvexPolyhedron(v, faces)
    if name == "icosahedron":
        pts = []
        for a in (-1, 1):
            for b in (-PHI, PHI):
                pts += [(0, a, b), (a, b, 0), (b, 0, a)]
        return ConvexPolyhedron(dict(enumerate(pts)), _hull_faces(pts))
    if name == "prism":
        v = {0: (0, 0, 0), 1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1), 4: (1, 0, 1), 5: (0, 1, 1)}
        faces = [(0, 2, 1), (3, 4, 5), (0, 1, 4, 3), (1, 2, 5, 4), (2, 0, 3, 5)]
        return ConvexPolyhedron(v, faces)
    if name == "cube_with_pyramid":
        return cube_with_pyramid()
    raise ValueError(f"unknown solid {name!r}")


SOLIDS = ["tetrahedron", "cube", "octahedron", "icosahedron", "prism", "cube_with_pyramid"]

# vertex names of the 9-vertex solid used in the Cauchy walkthrough
PYRAMID_NAMES = {0: "A", 1: "B", 2: "C", 3: "D", 4: "E", 5: "F", 6: "G", 7: "H", 8: "J"}


def cube_with_pyramid() -> ConvexPolyhedron:
    """Unit cube with a low pyramid on its x=1 face: 9 vertices, 9 faces."""
    A, B, C, D, E, F, G, H, J = range(9)
    v = {A: (0, 0, 0), B: (1, 0, 0), C: (0, 1, 0), D: (1, 1, 0),
         E: (0, 0, 1), F: (1, 0, 1), G: (0, 1, 1), H: (1, 1, 1), J: (1.3, 0.5, 0.5)}
    faces = [(E, F, H, G), (A, C, D, B), (A, B, F, E), (C, G, H, D), (A, E, G, C),
             (B, D, J), (D, H, J), (H, F, J), (F, B, J)]
    return ConvexPolyhedron(v, faces)


def perturbed(p: ConvexPolyhedron, rng, scale=0.05, tries=50) -> ConvexPolyhedron:
    """A random convex polyhedron with the same face structure.

    Triangular-faced solids get independent vertex jitter; others get a
    random invertible affine map (which keeps faces planar).
    """
    simplicial = all(len(f) == 3 for f in p.faces)
    for _ in range(tries):
        if simplicial:
            verts = {v: tuple(np.array(x) + rng.normal(0, scale, 3)) for v, x in p.vertices.items()}
            q = ConvexPolyhedron(verts, p.faces)
        else:
            m = np.eye(3) + rng.normal(0, 0.3, (3, 3))
            if abs(np.linalg.det(m)) < 0.2:
                continue
            q = p.affine(m, rng.normal(0, 1, 3))
        if validate_convex(q).ok:
            return q
    raise RuntimeError("could not perturb within convexity")
