"""Triangulated polygons with boundary identifications and their quotients.

A :class:`PlanarPolygon` is a triangulated disk in the plane together with an
:class:`IdentificationScheme` that glues pairs of boundary edges (and, when
needed, extra pairs of boundary vertices, as for the pinched torus).  The
quotient complex is what the catalog surfaces are.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass, field

from .complex_core import (Complex2, ValidationReport, boundary_cycles, edge_key,
                           euler_characteristic, tri_key, validate)
from .errors import InadmissibleScheme, NonManifoldBoundary, ResolutionTooSmall


@dataclass(frozen=True)
class EdgePair:
    """Glue directed boundary edge ``a`` onto ``b``.

    Aligned means a[0]~b[0] and a[1]~b[1]; reversed swaps the ends of ``b``.
    """

    a: tuple
    b: tuple
    reversed: bool = False

    def vertex_matches(self):
        b0, b1 = (self.b[1], self.b[0]) if self.reversed else self.b
        return [(self.a[0], b0), (self.a[1], b1)]


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent
        p.setdefault(x, x)
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if rx < ry:
                self.parent[ry] = rx
            else:
                self.parent[rx] = ry


@dataclass(frozen=True)
class IdentificationScheme:
    pairs: tuple = ()
    vertex_pairs: tuple = ()

    def vertex_classes(self, vertices):
        """Map every vertex to the smallest id of its class."""
        uf = _UnionFind()
        for v in vertices:
            uf.find(v)
        for p in self.pairs:
            for x, y in p.vertex_matches():
                uf.union(x, y)
        for x, y in self.vertex_pairs:
            uf.union(x, y)
        return {v: uf.find(v) for v in vertices}

    def is_empty(self):
        return not self.pairs and not self.vertex_pairs


@dataclass
class PlanarPolygon:
    complex: Complex2
    scheme: IdentificationScheme = field(default_factory=IdentificationScheme)
    name: str = ""

    def boundary_cycle(self):
        """The single boundary cycle, counter-clockwise when embedded."""
        cyc = boundary_cycles(self.complex)[0]
        emb = self.complex.embedding
        if emb and len(next(iter(emb.values()))) >= 2:
            area = 0.0
            for i in range(len(cyc)):
                x1, y1 = emb[cyc[i]][:2]
                x2, y2 = emb[cyc[(i + 1) % len(cyc)]][:2]
                area += float(x1) * float(y2) - float(x2) * float(y1)
            if area < 0:
                cyc = [cyc[0]] + cyc[:0:-1]
        return cyc

    def boundary_edge_set(self):
        return set(self.complex.boundary_edges())

    def boundary_vertices(self):
        return {v for e in self.complex.boundary_edges() for v in e}

    def interior_vertices(self):
        b = self.boundary_vertices()
        return [v for v in self.complex.vertices if v not in b]

    def vertex_classes(self):
        return self.scheme.vertex_classes(self.complex.vertices)

    def with_complex(self, c):
        return PlanarPolygon(c, self.scheme, self.name)


def disk_report(k: PlanarPolygon) -> ValidationReport:
    """Checks that the underlying complex is a triangulated disk."""
    c = k.complex
    rep = validate(c)
    if not c.triangles:
        rep.add("not-a-disk", (), "no triangles")
        return rep
    if not c.is_connected():
        rep.add("not-a-disk", (), "disconnected")
    et = c.edge_triangles()
    for e in c.edges:
        if len(et.get(e, ())) > 2:
            rep.add("not-a-disk", e, "edge in more than two triangles")
        if not et.get(e):
            rep.add("not-a-disk", e, "edge with no triangle")
    try:
        cycles = boundary_cycles(c)
    except NonManifoldBoundary as exc:
        rep.add("not-a-disk", (exc.vertex,), "pinched boundary")
        return rep
    if len(cycles) != 1:
        rep.add("not-a-disk", (), f"{len(cycles)} boundary cycles")
    if euler_characteristic(c) != 1:
        rep.add("not-a-disk", (), f"chi = {euler_characteristic(c)}")
    return rep


def quotient_raw(k: PlanarPolygon) -> Complex2:
    """The quotient without admissibility checks (duplicates are kept)."""
    c = k.complex
    cls = k.vertex_classes()
    skip = set()
    for p in k.scheme.pairs:
        skip.add(edge_key(*p.b))
    edges = [tuple(sorted((cls[u], cls[v]))) for (u, v) in c.edges if (u, v) not in skip]
    tris = [tuple(sorted(cls[x] for x in t)) for t in c.triangles]
    verts = sorted(set(cls.values()))
    emb = c.embedding if k.scheme.is_empty() else None
    return Complex2(verts, edges, tris, emb)


def _scheme_structure(k: PlanarPolygon, rep: ValidationReport):
    bnd = k.boundary_edge_set()
    used = defaultdict(int)
    for p in k.scheme.pairs:
        for e in (p.a, p.b):
            ek = edge_key(*e)
            if ek not in bnd:
                rep.add("not-boundary-edge", ek, "identified edge is not on the boundary")
            used[ek] += 1
        if edge_key(*p.a) == edge_key(*p.b):
            rep.add("self-paired-edge", edge_key(*p.a))
    for e, n in used.items():
        if n > 1:
            rep.add("edge-paired-twice", e)
    bv = k.boundary_vertices()
    for x, y in k.scheme.vertex_pairs:
        for v in (x, y):
            if v not in bv:
                rep.add("not-boundary-vertex", (v,))


def validate_scheme(k: PlanarPolygon) -> ValidationReport:
    """Admissibility: the quotient must be a genuine simplicial complex."""
    rep = disk_report(k)
    _scheme_structure(k, rep)
    if not rep.ok:
        return rep
    q = quotient_raw(k)
    qrep = validate(q, geometric=False)
    for v in qrep.violations:
        if v.kind == "degenerate-simplex" and len(v.simplex) == 2:
            rep.add("loop", v.simplex, "edge collapses to a single vertex")
        elif v.kind == "degenerate-simplex":
            rep.add("degenerate-triangle", v.simplex, "two corners of a triangle identified")
        elif v.kind == "duplicate-simplex" and len(v.simplex) == 3:
            rep.add("duplicate-triangle", v.simplex, v.detail)
        elif v.kind == "duplicate-simplex":
            rep.add("duplicate-edge", v.simplex, v.detail)
        else:
            rep.violations.append(v)
    et = defaultdict(int)
    for t in set(q.raw_triangles):
        if len(set(t)) == 3:
            for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
                et[e] += 1
    for e in sorted(et):
        if et[e] > 2:
            rep.add("edge-in-3-triangles", e, f"{et[e]} triangles")
    return rep


def build_quotient(k: PlanarPolygon) -> Complex2:
    rep = validate_scheme(k)
    if not rep.ok:
        v = rep.violations[0]
        raise InadmissibleScheme(v.kind, str(v))
    q = quotient_raw(k)
    return Complex2.from_triangles(q.triangles, q.embedding, vertices=q.vertices, edges=q.edges)


def boundary_complex(k: PlanarPolygon) -> Complex2:
    """K0 after identification: the glued boundary graph."""
    cls = k.vertex_classes()
    bnd = k.complex.boundary_edges()
    skip = {edge_key(*p.b) for p in k.scheme.pairs}
    edges = [tuple(sorted((cls[u], cls[v]))) for (u, v) in bnd if (u, v) not in skip]
    verts = sorted({cls[v] for e in bnd for v in e})
    return Complex2(verts, edges, ())


def boundary_chi(k: PlanarPolygon) -> int:
    b = boundary_complex(k)
    rep = validate(b, geometric=False)
    if not rep.ok:
        raise InadmissibleScheme("boundary", str(rep.violations[0]))
    return len(b.vertices) - len(b.edges)


# ---------------------------------------------------------------------------
# catalog

SURFACE_CHI = {
    "sphere_square": 2,
    "sphere_bigon": 2,
    "sphere_meridians": 2,
    "torus": 0,
    "projective_plane": 1,
    "klein_bottle": 0,
    "pinched_torus": 1,
}


def expected_chi(name):
    g = _genus_of(name)
    if g is not None:
        return 2 - 2 * g
    return SURFACE_CHI[name]


def _genus_of(name):
    m = re.fullmatch(r"genus_(\d+)", name)
    return int(m.group(1)) if m else None


def surface_names():
    return ["sphere_square", "sphere_bigon", "torus", "genus_2", "genus_3",
            "projective_plane", "klein_bottle", "pinched_torus"]


def surface(name: str, resolution: int) -> PlanarPolygon:
    """Planar representation of a catalog surface at the given resolution."""
    if resolution < 3:
        raise ResolutionTooSmall("each identified arc needs at least 3 edges")
    r = resolution
    if name == "torus":
        k = _grid_surface(r, "torus")
    elif name == "klein_bottle":
        k = _grid_surface(r, "klein")
    elif name == "projective_plane":
        k = _grid_surface(r, "projective")
    elif name == "sphere_square":
        k = word_polygon([("a", 1), ("a", -1), ("b", 1), ("b", -1)], r)
    elif name == "sphere_bigon":
        k = word_polygon([("a", 1), ("a", -1)], r)
    elif name == "sphere_meridians":
        k = word_polygon([("g1", 1), ("g2", -1), ("g2", 1), ("g3", -1), ("g3", 1), ("g1", -1)], r)
    elif name == "pinched_torus":
        k = word_polygon([("a", 1), ("a", -1)], r, pinch=True)
    else:
        g = _genus_of(name)
        if g is None or g < 1:
            raise ValueError(f"unknown surface {name!r}")
        if g == 1:
            return surface("torus", r)
        word = []
        for i in range(1, g + 1):
            word += [(f"a{i}", 1), (f"b{i}", 1), (f"a{i}", -1), (f"b{i}", -1)]
        k = word_polygon(word, r)
    k.name = name
    return k


def _grid_surface(r, kind):
    vid = lambda i, j: j * (r + 1) + i  # noqa: E731
    emb = {vid(i, j): (i, j) for i in range(r + 1) for j in range(r + 1)}
    tris = []
    # corner cells flipped for the projective plane, see notes in the README
    flipped = {(r - 1, 0), (0, r - 1)} if kind == "projective" else set()
    for j in range(r):
        for i in range(r):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            if (i, j) in flipped:
                tris += [(a, b, d), (b, c, d)]
            else:
                tris += [(a, b, c), (a, c, d)]
    pairs = []
    for i in range(r):
        bottom = (vid(i, 0), vid(i + 1, 0))
        if kind == "projective":
            top = (vid(r - i, r), vid(r - i - 1, r))
        else:
            top = (vid(i, r), vid(i + 1, r))
        pairs.append(EdgePair(bottom, top))
    for j in range(r):
        left = (vid(0, j), vid(0, j + 1))
        if kind == "torus":
            right = (vid(r, j), vid(r, j + 1))
        else:
            right = (vid(r, r - j), vid(r, r - j - 1))
        pairs.append(EdgePair(left, right))
    c = Complex2.from_triangles(tris, emb)
    return PlanarPolygon(c, IdentificationScheme(tuple(pairs)))


def word_polygon(word, r, pinch=False):
    """Regular polygon whose sides read ``word``, each side cut into r edges.

    Interior: one ring of vertices parallel to the boundary and a central fan,
    so that the only identifications happen on the outer ring.
    """
    sides = len(word)
    n = sides * r
    b = list(range(n))
    ring = list(range(n, 2 * n))
    center = 2 * n
    emb = {}
    for m in range(n):
        ang = 2 * math.pi * m / n
        emb[b[m]] = (math.cos(ang), math.sin(ang))
        emb[ring[m]] = (0.6 * math.cos(ang), 0.6 * math.sin(ang))
    emb[center] = (0.0, 0.0)
    tris = []
    for m in range(n):
        m1 = (m + 1) % n
        tris.append((b[m], b[m1], ring[m]))
        tris.append((b[m1], ring[m1], ring[m]))
        tris.append((center, ring[m], ring[m1]))
    arrows = defaultdict(list)
    for s, (letter, sign) in enumerate(word):
        pts = [b[(s * r + k) % n] for k in range(r + 1)]
        arrows[letter].append(pts if sign > 0 else pts[::-1])
    pairs = []
    for letter in sorted(arrows, key=lambda x: [w[0] for w in word].index(x)):
        p1, p2 = arrows[letter]
        for k in range(r):
            pairs.append(EdgePair((p1[k], p1[k + 1]), (p2[k], p2[k + 1])))
    vpairs = ()
    if pinch:
        first = arrows[word[0][0]][0]
        vpairs = ((first[0], first[-1]),)
    c = Complex2.from_triangles(tris, emb)
    return PlanarPolygon(c, IdentificationScheme(tuple(pairs), vpairs))


def disk_polygon(c: Complex2, name="") -> PlanarPolygon:
    """A plain triangulated disk viewed as a polygon with no identifications."""
    return PlanarPolygon(c, IdentificationScheme(), name)


def relabel_polygon(k: PlanarPolygon, mapping) -> PlanarPolygon:
    c = k.complex
    tris = [tri_key(*(mapping[v] for v in t)) for t in c.triangles]
    emb = {mapping[v]: p for v, p in c.embedding.items()} if c.embedding else None
    pairs = tuple(EdgePair(tuple(mapping[v] for v in p.a), tuple(mapping[v] for v in p.b), p.reversed)
                  for p in k.scheme.pairs)
    vp = tuple((mapping[x], mapping[y]) for x, y in k.scheme.vertex_pairs)
    return PlanarPolygon(Complex2.from_triangles(tris, emb), IdentificationScheme(pairs, vp), k.name)
