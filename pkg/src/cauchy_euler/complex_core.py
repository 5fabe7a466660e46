"""Abstract 2-dimensional simplicial complexes.

Simplices are sorted vertex-id tuples.  A :class:`Complex2` keeps exactly the
simplices it was built from (so that :func:`validate` can report missing
faces or duplicates); :meth:`Complex2.from_triangles` builds the closure.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from . import geometry
from .errors import NonManifoldBoundary, NotClosedSurface, OddDefect


def edge_key(u, v):
    return (u, v) if u <= v else (v, u)


def tri_key(a, b, c):
    return tuple(sorted((a, b, c)))


def tri_edges(t):
    a, b, c = t
    return (edge_key(a, b), edge_key(a, c), edge_key(b, c))


def opposite_vertex(t, e):
    for v in t:
        if v not in e:
            return v
    raise ValueError(f"{e} is not an edge of {t}")


@dataclass(frozen=True, order=True)
class Simplex:
    """A simplex given by its (canonically sorted) vertex ids."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(sorted(self.vertices))
        if len(set(vs)) != len(vs):
            raise ValueError(f"repeated vertex in simplex {vs}")
        if not 1 <= len(vs) <= 3:
            raise ValueError("only simplices of dimension 0, 1, 2 are supported")
        object.__setattr__(self, "vertices", vs)

    @classmethod
    def of(cls, *vs):
        return cls(tuple(vs))

    @property
    def dimension(self):
        return len(self.vertices) - 1

    def faces(self):
        vs = self.vertices
        if len(vs) == 1:
            return []
        return [Simplex(tuple(x for j, x in enumerate(vs) if j != i)) for i in range(len(vs))]


@dataclass(frozen=True)
class CountVector:
    n0: int
    n1: int
    n2: int

    @property
    def chi(self):
        return self.n0 - self.n1 + self.n2

    def __sub__(self, other):
        return (self.n0 - other.n0, self.n1 - other.n1, self.n2 - other.n2)

    def as_tuple(self):
        return (self.n0, self.n1, self.n2)


@dataclass(frozen=True)
class Violation:
    kind: str
    simplex: tuple
    detail: str = ""

    def __str__(self):
        s = f"{self.kind} {self.simplex}"
        return f"{s}: {self.detail}" if self.detail else s


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def kinds(self):
        return {v.kind for v in self.violations}

    def add(self, kind, simplex, detail=""):
        self.violations.append(Violation(kind, tuple(simplex), detail))

    def __bool__(self):
        return self.ok

    def lines(self):
        if self.ok:
            out = ["valid"]
        else:
            out = [f"violation {v}" for v in self.violations]
        out += [f"note {n}" for n in self.notes]
        return out


class Complex2:
    """Vertices, edges and triangles with an optional coordinate table.

    Treated as an immutable value: adjacency tables are computed lazily and
    cached.  ``edges`` and ``triangles`` are sorted tuples of sorted tuples.
    """

    def __init__(self, vertices=(), edges=(), triangles=(), embedding=None):
        self.raw_edges = tuple(tuple(sorted(e)) for e in edges)
        self.raw_triangles = tuple(tuple(sorted(t)) for t in triangles)
        self.vertices = tuple(sorted(set(vertices)))
        self.edges = tuple(sorted(set(self.raw_edges)))
        self.triangles = tuple(sorted(set(self.raw_triangles)))
        self.embedding = dict(embedding) if embedding else None
        self._cache = {}

    @classmethod
    def from_triangles(cls, triangles, embedding=None, vertices=(), edges=()):
        tris = [tri_key(*t) for t in triangles]
        es = {edge_key(*e) for e in edges}
        vs = set(vertices)
        for t in tris:
            es.update(tri_edges(t))
        for e in es:
            vs.update(e)
        return cls(vs, es, tris, embedding)

    @classmethod
    def from_sorted_triangles(cls, triangles, embedding=None, vertices=()):
        """Closure of triangles already given as sorted, distinct tuples."""
        tris = list(triangles)
        es = set()
        for a, b, c in tris:
            es.add((a, b))
            es.add((a, c))
            es.add((b, c))
        vs = set(vertices)
        for e in es:
            vs.update(e)
        self = cls.__new__(cls)
        self.raw_edges = tuple(es)
        self.raw_triangles = tuple(tris)
        self.vertices = tuple(sorted(vs))
        self.edges = tuple(sorted(es))
        self.triangles = tuple(sorted(tris))
        self.embedding = dict(embedding) if embedding else None
        self._cache = {}
        return self

    # -- basic tables -------------------------------------------------

    @property
    def vertex_set(self):
        if "vset" not in self._cache:
            self._cache["vset"] = frozenset(self.vertices)
        return self._cache["vset"]

    @property
    def edge_set(self):
        if "eset" not in self._cache:
            self._cache["eset"] = frozenset(self.edges)
        return self._cache["eset"]

    @property
    def triangle_set(self):
        if "tset" not in self._cache:
            self._cache["tset"] = frozenset(self.triangles)
        return self._cache["tset"]

    def edge_triangles(self):
        """Map edge -> list of incident triangles (ascending)."""
        if "et" not in self._cache:
            et = defaultdict(list)
            for t in self.triangles:
                for e in tri_edges(t):
                    et[e].append(t)
            self._cache["et"] = dict(et)
        return self._cache["et"]

    def vertex_triangles(self):
        if "vt" not in self._cache:
            vt = defaultdict(list)
            for t in self.triangles:
                for v in t:
                    vt[v].append(t)
            self._cache["vt"] = dict(vt)
        return self._cache["vt"]

    def neighbors(self):
        if "nb" not in self._cache:
            nb = {v: set() for v in self.vertices}
            for u, v in self.edges:
                nb.setdefault(u, set()).add(v)
                nb.setdefault(v, set()).add(u)
            self._cache["nb"] = nb
        return self._cache["nb"]

    def boundary_edges(self):
        et = self.edge_triangles()
        return [e for e in self.edges if len(et.get(e, ())) == 1]

    def is_closed_surface(self):
        et = self.edge_triangles()
        return bool(self.triangles) and all(len(et.get(e, ())) == 2 for e in self.edges)

    def counts(self):
        return CountVector(len(self.vertices), len(self.edges), len(self.triangles))

    def components(self):
        """Connected components of the 1-skeleton (isolated vertices included)."""
        nb = self.neighbors()
        seen, comps = set(), []
        for s in self.vertices:
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in nb[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self):
        return len(self.components()) <= 1

    def coords(self, v):
        return self.embedding[v]

    def embedding_dim(self):
        if not self.embedding:
            return 0
        return len(next(iter(self.embedding.values())))

    def max_vertex(self):
        return self.vertices[-1] if self.vertices else -1

    def replace(self, remove_triangles=(), add_triangles=(), new_coords=None,
                remove_edges=(), add_edges=()):
        """A new closed complex with some triangles (and their edges) swapped."""
        rt = set(remove_triangles)
        tris = [t for t in self.triangles if t not in rt] + [tri_key(*t) for t in add_triangles]
        re_ = set(remove_edges)
        es = [e for e in self.edges if e not in re_] + [edge_key(*e) for e in add_edges]
        emb = None
        if self.embedding is not None:
            emb = dict(self.embedding)
            if new_coords:
                emb.update(new_coords)
        return Complex2.from_triangles(tris, emb, vertices=self.vertices, edges=es)

    def __eq__(self, other):
        if not isinstance(other, Complex2):
            return NotImplemented
        return (self.vertices == other.vertices and self.edges == other.edges
                and self.triangles == other.triangles)

    def __hash__(self):
        return hash((self.vertices, self.edges, self.triangles))

    def __repr__(self):
        c = self.counts()
        return f"Complex2(n0={c.n0}, n1={c.n1}, n2={c.n2})"


def counts(c: Complex2) -> CountVector:
    return c.counts()


def euler_characteristic(c: Complex2) -> int:
    n = c.counts()
    return n.n0 - n.n1 + n.n2


def validate(c: Complex2, geometric=True) -> ValidationReport:
    """Check closure, duplicates, degeneracy, and (2D) embedded intersections."""
    rep = ValidationReport()
    for e, k in Counter(c.raw_edges).items():
        if k > 1:
            rep.add("duplicate-simplex", e, f"edge listed {k} times")
    for t, k in Counter(c.raw_triangles).items():
        if k > 1:
            rep.add("duplicate-simplex", t, f"triangle listed {k} times")
    vset, eset = c.vertex_set, c.edge_set
    for e in c.edges:
        if e[0] == e[1]:
            rep.add("degenerate-simplex", e, "edge with equal endpoints")
        for v in e:
            if v not in vset:
                rep.add("missing-face", (v,), f"vertex of edge {e}")
    for t in c.triangles:
        if len(set(t)) < 3:
            rep.add("degenerate-simplex", t, "triangle with a repeated vertex")
            continue
        for e in tri_edges(t):
            if e not in eset:
                rep.add("missing-face", e, f"edge of triangle {t}")
    if len(c.components()) > 1:
        rep.notes.append(f"disconnected: {len(c.components())} components")
    if c.embedding is not None:
        missing = [v for v in c.vertices if v not in c.embedding]
        for v in missing:
            rep.add("missing-coordinates", (v,))
        if geometric and not missing and rep.ok and c.embedding_dim() == 2:
            _check_planar_embedding(c, rep)
    return rep


def _bbox(pts):
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return min(xs), min(ys), max(xs), max(ys)


def _grid_pairs(items, boxes, cell):
    """Candidate pairs of items whose boxes share a grid cell."""
    buckets = defaultdict(list)
    for i, (x0, y0, x1, y1) in enumerate(boxes):
        for gx in range(int(x0 // cell), int(x1 // cell) + 1):
            for gy in range(int(y0 // cell), int(y1 // cell) + 1):
                buckets[(gx, gy)].append(i)
    seen = set()
    for members in buckets.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                p = (members[a], members[b])
                if p not in seen:
                    seen.add(p)
                    yield items[p[0]], items[p[1]]


def _check_planar_embedding(c, rep):
    P = c.embedding
    pts = [P[v] for v in c.vertices]
    if not pts:
        return
    x0, y0, x1, y1 = _bbox(pts)
    span = max(float(x1 - x0), float(y1 - y0), 1e-12)
    n = max(len(c.edges), 1)
    cell = span / max(1.0, n ** 0.5)
    seen_pts = {}
    for v in c.vertices:
        key = tuple(round(float(x), 9) for x in P[v])
        if key in seen_pts:
            rep.add("embedded-intersection", (seen_pts[key], v), "coincident vertices")
        seen_pts[key] = v
    eboxes = [_bbox((P[e[0]], P[e[1]])) for e in c.edges]
    for e, f in _grid_pairs(list(c.edges), eboxes, cell):
        shared = set(e) & set(f)
        a, b, cc, d = P[e[0]], P[e[1]], P[f[0]], P[f[1]]
        if not shared:
            if geometry.segments_intersect(a, b, cc, d):
                rep.add("embedded-intersection", e + f, "edges cross")
        elif len(shared) == 1:
            s = shared.pop()
            u = e[0] if e[1] == s else e[1]
            w = f[0] if f[1] == s else f[1]
            ps, pu, pw = P[s], P[u], P[w]
            if geometry.orient(ps, pu, pw) == 0:
                ax, ay = pu[0] - ps[0], pu[1] - ps[1]
                bx, by = pw[0] - ps[0], pw[1] - ps[1]
                if ax * bx + ay * by > 0:
                    rep.add("embedded-intersection", e + f, "edges overlap")
    # vertices strictly inside foreign triangles, and degenerate triangles
    tboxes = [_bbox([P[v] for v in t]) for t in c.triangles]
    vbuckets = defaultdict(list)
    for v in c.vertices:
        p = P[v]
        vbuckets[(int(p[0] // cell), int(p[1] // cell))].append(v)
    for t, (bx0, by0, bx1, by1) in zip(c.triangles, tboxes):
        a, b, cc = (P[v] for v in t)
        if geometry.orient(a, b, cc) == 0:
            rep.add("embedded-intersection", t, "flat triangle")
            continue
        for gx in range(int(bx0 // cell), int(bx1 // cell) + 1):
            for gy in range(int(by0 // cell), int(by1 // cell) + 1):
                for v in vbuckets.get((gx, gy), ()):
                    if v in t:
                        continue
                    if geometry.point_in_triangle(P[v], a, b, cc, strict=True):
                        rep.add("embedded-intersection", t + (v,), "vertex inside triangle")


def boundary_cycles(c: Complex2) -> list:
    """Boundary edges partitioned into cycles, each starting at its smallest id."""
    adj = defaultdict(list)
    for u, v in c.boundary_edges():
        adj[u].append(v)
        adj[v].append(u)
    for v in sorted(adj):
        if len(adj[v]) != 2:
            raise NonManifoldBoundary(v)
    seen = set()
    cycles = []
    for s in sorted(adj):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        prev, cur = s, min(adj[s])
        while cur != s:
            cyc.append(cur)
            seen.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        cycles.append(cyc)
    return cycles


def link_components(c: Complex2, v) -> list:
    """Components of the link of ``v``: each a (path or cycle, is_cycle) pair."""
    lk = defaultdict(list)
    for t in c.vertex_triangles().get(v, ()):
        a, b = (x for x in t if x != v)
        lk[a].append(b)
        lk[b].append(a)
    seen, out = set(), []
    ends = sorted(x for x in lk if len(lk[x]) == 1)
    starts = ends + sorted(lk)
    for s in starts:
        if s in seen:
            continue
        path = [s]
        seen.add(s)
        prev, cur = None, s
        while True:
            nxt = [w for w in lk[cur] if w != prev and w not in seen]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            path.append(cur)
            seen.add(cur)
        closed = len(path) > 2 and path[0] in lk[path[-1]] and all(len(lk[x]) == 2 for x in path)
        out.append((path, closed))
    return out


def link_cycle(c: Complex2, v):
    """Cyclically ordered link of an interior manifold vertex, else None."""
    comps = link_components(c, v)
    if len(comps) == 1 and comps[0][1]:
        return comps[0][0]
    return None


def singular_vertices(c: Complex2) -> list:
    """Vertices whose link is neither a single cycle nor a single path."""
    out = []
    vt = c.vertex_triangles()
    for v in c.vertices:
        deg = defaultdict(int)
        for t in vt.get(v, ()):
            for x in t:
                if x != v:
                    deg[x] += 1
        comps = link_components(c, v)
        if len(comps) != 1 or any(k > 2 for k in deg.values()):
            out.append(v)
    return out


def compute_genus(c: Complex2, orientable: bool) -> int:
    if not c.is_closed_surface() or not c.is_connected():
        raise NotClosedSurface("genus needs a closed connected surface")
    defect = 2 - euler_characteristic(c)
    if orientable:
        if defect % 2:
            raise OddDefect(f"2 - chi = {defect} is odd for an orientable surface")
        return defect // 2
    return defect


def disjoint_union(complexes: Iterable[Complex2]) -> Complex2:
    """Relabel and place side by side (used by tests and generators)."""
    tris, verts, emb, off = [], [], {}, 0
    for c in complexes:
        m = {v: v + off for v in c.vertices}
        verts += list(m.values())
        tris += [tuple(m[x] for x in t) for t in c.triangles]
        if c.embedding:
            emb.update({m[v]: p for v, p in c.embedding.items()})
        off += c.max_vertex() + 1
    return Complex2.from_triangles(tris, emb or None, vertices=verts)
