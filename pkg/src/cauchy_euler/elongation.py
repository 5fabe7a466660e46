"""Constructive proof that chi(K) = chi(K0) + 1 for a triangulated polygon K.

Vertex ranks play the part of heights over the polygon: the seed triangle
is at height 0, interior vertices get the distinct heights 1..n, and the
boundary sits at n+1.  Slicing every triangle at the integer heights gives
a subdivision K'' whose level sets B_0, ..., B_{n+1} are nested cycles.
The hole is then grown from the seed one strip (the triangles between B_i
and B_{i+1}) at a time using only operations I and II, until the bare
boundary K0 is left.
"""

from __future__ import annotations

import gc
import heapq
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field

from . import geometry
from .cauchy_reduction import (LAX, STRICT, HoleState, Illegal, ReductionTrace, ReplayResult,
                               apply_removal, classify_removal, parse_trace, replay)
from .complex_core import Complex2, edge_key, link_cycle, tri_edges, tri_key
from .errors import IllegalRemoval, ProofFailure, SeedOnBoundary, StripHasInteriorVertex
from .planar_rep import PlanarPolygon, boundary_chi, build_quotient
from .refinement import inset_triangle, split_edge


@dataclass
class LevelAssignment:
    rank: dict
    seed: tuple
    mode: str
    n: int
    epsilon: float | None = None

    def level(self, v):
        return self.rank[v]


@dataclass
class Defect:
    level: int
    kind: str
    vertices: tuple = ()

    def __str__(self):
        return f"level {self.level}: {self.kind} at {list(self.vertices)}"


@dataclass
class LevelCurves:
    """Vertices and edges of K'' at each level."""

    vertices: dict
    edges: dict

    def levels(self):
        return sorted(self.vertices)

    def cycle(self, i):
        """B_i as a vertex cycle (assumes it is one)."""
        adj = defaultdict(list)
        for a, b in self.edges[i]:
            adj[a].append(b)
            adj[b].append(a)
        start = min(self.vertices[i])
        out, prev, cur = [start], None, start
        while True:
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:
                break
            nxt = min(nxt) if prev is None else nxt[0]
            if nxt == start:
                break
            out.append(nxt)
            prev, cur = cur, nxt
        return out


# ---------------------------------------------------------------------------
# preparation


def _polygon(k):
    if isinstance(k, PlanarPolygon):
        return k
    return PlanarPolygon(k)


def split_chords(k: PlanarPolygon) -> PlanarPolygon:
    """Split every interior edge whose two ends are on the boundary."""
    c = k.complex
    while True:
        bnd = {v for e in c.boundary_edges() for v in e}
        bedges = set(c.boundary_edges())
        chords = [e for e in c.edges if e[0] in bnd and e[1] in bnd and e not in bedges]
        if not chords:
            return k.with_complex(c)
        c, _ = split_edge(c, chords[0])


def _centroid(c, vs):
    pts = [c.embedding[v] for v in vs]
    return tuple(sum(float(p[i]) for p in pts) / len(pts) for i in range(2))


def choose_seed(k: PlanarPolygon):
    """Interior triangle closest to the vertex centroid (lowest id without coordinates).

    Returns (polygon, seed); the polygon differs from ``k`` only when no
    interior triangle exists and one is inset into a triangle.
    """
    c = k.complex
    bnd = k.boundary_vertices()
    inner = [t for t in c.triangles if not (set(t) & bnd)]
    pool = inner or list(c.triangles)
    if c.embedding is not None:
        cen = _centroid(c, c.vertices)

        def dist(t):
            p = _centroid(c, t)
            return ((p[0] - cen[0]) ** 2 + (p[1] - cen[1]) ** 2, t)

        best = min(pool, key=dist)
    else:
        best = pool[0]
    if inner:
        return k, best
    c2, seed = inset_triangle(c, best)
    return k.with_complex(c2), tri_key(*seed)


def _holds_point(c, t, p):
    a, b, d = (c.embedding[v] for v in t)
    return geometry.point_in_triangle(p, a, b, d, strict=False)


def _split_parameter(c, e, target):
    """Parameter of the point of edge e closest to target, kept off the ends."""
    a, b = c.embedding[e[0]], c.embedding[e[1]]
    dx, dy = float(b[0]) - float(a[0]), float(b[1]) - float(a[1])
    length = math.hypot(dx, dy)
    s = ((target[0] - float(a[0])) * dx + (target[1] - float(a[1])) * dy) / (length * length)
    # a fixed distance from the end, so nearby clamped points keep their order
    m = min(1e-3, 0.25 * length) / length
    return min(max(s, m), 1.0 - m)


def euclidean_preparation(k: PlanarPolygon):
    """Seed first, then chords split at their points nearest the seed centroid.

    Splitting nearest first means the first split inside any triangle lies
    on the edge closest to the seed, and every later split point in that
    triangle is joined to it.  Each new interior vertex then has a strictly
    closer interior neighbour.  Returns (polygon, seed).
    """
    c = k.complex
    bnd = k.boundary_vertices()
    cen = _centroid(c, c.vertices)
    inner = [t for t in c.triangles if not (set(t) & bnd)]
    pool = inner or list(c.triangles)
    holding = [t for t in pool if _holds_point(c, t, cen)]
    if holding:
        seed = holding[0]
    else:
        seed = min(pool, key=lambda t: (math.dist(_centroid(c, t), cen), t))
    if not inner:
        c, seed = inset_triangle(c, seed)
        seed = tri_key(*seed)
    target = _centroid(c, seed)
    bedges = set(c.boundary_edges())
    chords = [e for e in c.edges if e[0] in bnd and e[1] in bnd and e not in bedges]

    def key(e):
        s = _split_parameter(c, e, target)
        a, b = c.embedding[e[0]], c.embedding[e[1]]
        p = tuple(float(a[i]) + s * (float(b[i]) - float(a[i])) for i in range(2))
        return math.dist(p, target), e

    for e in sorted(chords, key=key):
        c, _ = split_edge(c, e, _split_parameter(c, e, target))
    return k.with_complex(c), seed


def _bfs_distance(c, sources, allowed=None):
    nb = c.neighbors()
    dist = {v: 0 for v in sources}
    q = deque(sources)
    while q:
        v = q.popleft()
        for w in nb[v]:
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def _regular(link, ranked):
    """Ranked link vertices form one nonempty proper arc."""
    flags = [w in ranked for w in link]
    changes = sum(1 for i in range(len(flags)) if flags[i] != flags[i - 1])
    return changes == 2


def assign_levels(k, seed, mode="combinatorial") -> LevelAssignment:
    """Ranks: seed vertices 0, interior vertices 1..n, boundary n+1.

    Combinatorial mode orders interior vertices by (edge distance from the
    seed, id), taking at each step the first vertex whose already-ranked
    neighbours form a single arc of its link; this is the requested order
    whenever that order has the property, and it keeps every sublevel set
    a disk.  Euclidean mode ranks by distance to the seed centroid.
    """
    k = _polygon(k)
    c = k.complex
    seed = tri_key(*seed)
    if seed not in c.triangle_set:
        raise SeedOnBoundary(f"{seed} is not a triangle")
    bnd = k.boundary_vertices()
    if set(seed) & bnd:
        raise SeedOnBoundary(f"seed {seed} touches the boundary")
    interior = [v for v in c.vertices if v not in bnd and v not in seed]
    n = len(interior)
    rank = {v: 0 for v in seed}
    eps = None
    if mode == "combinatorial":
        # paths through the boundary would be shortcuts past rank n+1
        dist = _bfs_distance(c, seed, set(interior))
        far = len(c.vertices) + 1
        for v in interior:
            dist.setdefault(v, far)
        nb = c.neighbors()
        links = {}
        heap = []
        for v in interior:
            if any(w in rank for w in nb[v]):
                heapq.heappush(heap, (dist[v], v))
        inner = set(interior)
        nxt = 1
        while heap:
            d, v = heapq.heappop(heap)
            if v in rank:
                continue
            if v not in links:
                links[v] = link_cycle(c, v)
                if links[v] is None:
                    raise ProofFailure(f"vertex {v} is not an interior manifold vertex")
            if not _regular(links[v], rank):
                continue
            rank[v] = nxt
            nxt += 1
            for w in nb[v]:
                if w in inner and w not in rank:
                    heapq.heappush(heap, (dist[w], w))
        if nxt != n + 1:
            left = sorted(set(interior) - set(rank))
            raise ProofFailure(f"no regular ranking extends past rank {nxt - 1}; unranked {left[:10]}")
    elif mode == "euclidean":
        if c.embedding is None:
            raise ProofFailure("euclidean ranking needs coordinates")
        cen = _centroid(c, seed)
        d = {v: math.dist(cen, [float(x) for x in c.embedding[v][:2]]) for v in interior}
        vals = sorted(set(d.values()))
        gaps = [b - a for a, b in zip(vals, vals[1:]) if b > a]
        eps = 2.0 ** -30 * (min(gaps) if gaps else 1.0)
        seen = defaultdict(int)
        pert = {}
        for v in sorted(interior):
            pert[v] = d[v] + seen[d[v]] * eps
            seen[d[v]] += 1
        for i, v in enumerate(sorted(interior, key=lambda v: (pert[v], v)), 1):
            rank[v] = i
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for v in c.vertices:
        if v in bnd:
            rank[v] = n + 1
    return LevelAssignment(rank, seed, mode, n, eps)


# ---------------------------------------------------------------------------
# level subdivision


def build_level_subdivision(k, levels: LevelAssignment):
    """Slice every triangle at the integer levels.

    Each edge gets one vertex per integer level strictly between its end
    ranks (shared by both incident triangles); each triangle is cut into
    slabs between consecutive levels, and four-sided slabs are split by
    the diagonal from their lowest-id corner.  Returns (K'', level map,
    LevelCurves).
    """
    k = _polygon(k)
    c = k.complex
    f = levels.rank
    emb = c.embedding
    nid = c.max_vertex() + 1
    lev = dict(f)
    coords = dict(emb) if emb is not None else None
    cross = {}
    for e in c.edges:
        a, b = e
        lo, hi = (a, b) if f[a] <= f[b] else (b, a)
        for L in range(f[lo] + 1, f[hi]):
            cross[(e, L)] = nid
            lev[nid] = L
            if coords is not None:
                s = (L - f[lo]) / (f[hi] - f[lo])
                coords[nid] = geometry.lerp(emb[lo], emb[hi], s)
            nid += 1

    def point(e, L):
        a, b = e
        if f[a] == L:
            return a
        if f[b] == L:
            return b
        return cross[(e, L)]

    tris = []
    for t in c.triangles:
        fs = [f[v] for v in t]
        lo, hi = min(fs), max(fs)
        if lo == hi:
            tris.append(t)
            continue
        ring = [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
        for L in range(lo, hi):
            poly = []
            for u, w in ring:
                # points on u->w with level in [L, L+1], in walking order
                fu, fw = f[u], f[w]
                if L <= fu <= L + 1:
                    poly.append(u)
                if fu == fw:
                    continue
                lo_e, hi_e = (fu, fw) if fu < fw else (fw, fu)
                for m in ((L, L + 1) if fw > fu else (L + 1, L)):
                    if lo_e < m < hi_e:
                        poly.append(cross[(edge_key(u, w), m)])
            if len(poly) == 3:
                tris.append(tuple(sorted(poly)))
            elif len(poly) == 4:
                j = poly.index(min(poly))
                q = poly[j:] + poly[:j]
                tris += [tuple(sorted(q[:3])), tuple(sorted((q[0], q[2], q[3])))]
            else:
                raise ProofFailure(f"slab of {t} at level {L} has {len(poly)} corners")
    kc = Complex2.from_sorted_triangles(tris, coords, vertices=list(c.vertices) + list(range(c.max_vertex() + 1, nid)))
    cv = defaultdict(set)
    ce = defaultdict(set)
    for v in kc.vertices:
        cv[lev[v]].add(v)
    for a, b in kc.edges:
        if lev[a] == lev[b]:
            ce[lev[a]].add((a, b))
    curves = LevelCurves({i: cv[i] for i in sorted(cv)}, {i: ce[i] for i in sorted(cv)})
    return k.with_complex(kc), lev, curves


def verify_level_curves(kpp, curves: LevelCurves):
    """None when every B_i is a single simple cycle, else the first Defect."""
    for i in curves.levels():
        vs = curves.vertices[i]
        adj = defaultdict(set)
        for a, b in curves.edges[i]:
            adj[a].add(b)
            adj[b].add(a)
        multi = sorted(v for v in vs if len(adj[v]) > 2 or len(adj[v]) == 1)
        if multi:
            return Defect(i, "multiple-point", tuple(multi))
        lonely = sorted(v for v in vs if not adj[v])
        start = min(vs)
        seen, stack = {start}, [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if lonely or len(seen) != len(vs):
            return Defect(i, "disconnected", tuple(lonely or sorted(set(vs) - seen)[:10]))
    return None


# ---------------------------------------------------------------------------
# strips


def _strip_triangles(kc, lev):
    strips = defaultdict(list)
    for t in kc.triangles:
        ls = sorted(lev[v] for v in t)
        if ls[0] == ls[2]:
            continue
        if ls[2] - ls[0] != 1:
            raise StripHasInteriorVertex(f"triangle {t} spans levels {ls}")
        strips[ls[0]].append(t)
    return strips


def _strip_order(tris, lev, i):
    """Removal order of one strip: a cyclic walk across the rungs."""
    for t in tris:
        if any(lev[v] not in (i, i + 1) for v in t):
            raise StripHasInteriorVertex(f"triangle {t} has a vertex off levels {i}, {i + 1}")
    by_rung = defaultdict(list)
    kind = {}
    for t in tris:
        low = [v for v in t if lev[v] == i]
        kind[t] = "A" if len(low) == 2 else "B"
        for e in tri_edges(t):
            if lev[e[0]] != lev[e[1]]:
                by_rung[e].append(t)
    for e, ts in by_rung.items():
        if len(ts) != 2:
            raise ProofFailure(f"strip {i}: rung {e} lies on {len(ts)} strip triangles")
    start = min(t for t in tris if kind[t] == "A")
    rungs = sorted(e for e in tri_edges(start) if lev[e[0]] != lev[e[1]])
    # walk ahead through the rung at the larger low vertex
    ahead = max(rungs, key=lambda e: e[0] if lev[e[0]] == i else e[1])
    order, prev, cur, via = [start], None, start, ahead
    while True:
        nxt = [u for u in by_rung[via] if u != cur][0]
        if nxt == start:
            break
        order.append(nxt)
        back = via
        via = [e for e in tri_edges(nxt) if lev[e[0]] != lev[e[1]] and e != back][0]
        cur = nxt
        if len(order) > len(tris):
            break
    if len(order) != len(tris):
        raise ProofFailure(f"strip {i} is not a single annulus")
    behind = 0
    while kind[order[-1 - behind]] == "A":
        behind += 1
    if behind == 1:
        order[-2], order[-1] = order[-1], order[-2]
    elif behind > 1:
        order = order[-behind:] + order[:-behind]
    return order, kind


def strip_schedule(kpp, curves: LevelCurves, i, lev=None):
    """Ordered (triangle, op) pairs for the strip between B_i and B_{i+1}.

    The ops are those the strict classifier gives when the strips below
    are already removed.
    """
    kc = kpp.complex if hasattr(kpp, "complex") else kpp
    if lev is None:
        lev = {v: j for j, vs in curves.vertices.items() for v in vs}
    strips = _strip_triangles(kc, lev)
    s = HoleState(kc, "theorem")
    seed = next(t for t in kc.triangles if len({lev[v] for v in t}) == 1 and lev[t[0]] == 0)
    s.remove_seed(seed)
    for j in range(i):
        order, _ = _strip_order(strips[j], lev, j)
        for t in order:
            apply_removal(s, t, STRICT, False)
    order, _ = _strip_order(strips[i], lev, i)
    out = []
    for t in order:
        _, st = apply_removal(s, t, STRICT, False)
        out.append((t, st.op))
    return out


# ---------------------------------------------------------------------------
# theorem


@dataclass
class TheoremCertificate:
    trace: ReductionTrace
    chi_K: int
    chi_K0: int
    mode: str
    epsilon: float | None
    levels: LevelAssignment
    subdivision: PlanarPolygon
    recount: int
    checks: dict = field(default_factory=dict)

    def header(self):
        return f"chi_K={self.chi_K} chi_K0={self.chi_K0} mode={self.mode}"

    def text(self):
        lines = [self.header()]
        lines += self.trace.lines()
        return "\n".join(lines) + "\n"


def _quotient_chi(k: PlanarPolygon):
    q = build_quotient(k)
    return len(q.vertices) - len(q.edges) + len(q.triangles)


def _final_quotient_chi(k: PlanarPolygon, final_edges, final_verts):
    cls = k.vertex_classes()
    skip = {edge_key(*p.b) for p in k.scheme.pairs}
    es = {edge_key(cls[a], cls[b]) for a, b in final_edges if (a, b) not in skip}
    vs = {cls[v] for v in final_verts}
    return len(vs) - len(es)


def theorem_subdivision(k, mode="combinatorial", seed=None):
    """(levels, K'', level map, curves) exactly as :func:`prove_theorem` builds them."""
    k = _polygon(k)
    if mode == "euclidean" and seed is None and k.complex.embedding is not None:
        prep, seed = euclidean_preparation(k)
    else:
        prep = split_chords(k)
        if seed is None:
            prep, seed = choose_seed(prep)
    try:
        levels = assign_levels(prep, seed, mode)
    except SeedOnBoundary as exc:
        raise ProofFailure(str(exc), exc) from exc
    kpp, lev, curves = build_level_subdivision(prep, levels)
    return levels, kpp, lev, curves


def prove_theorem(k, mode="combinatorial", seed=None) -> TheoremCertificate:
    """Seed removal and all strips, each step checked by the strict classifier.

    Raises ProofFailure on a level-curve defect or an illegal step.
    """
    # the subdivision allocates many small tuples; cyclic gc only slows it down
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        return _prove(k, mode, seed)
    finally:
        if was_enabled:
            gc.enable()


def _prove(k, mode, seed):
    k = _polygon(k)
    chi_K = _quotient_chi(k)
    chi_K0 = boundary_chi(k)
    levels, kpp, lev, curves = theorem_subdivision(k, mode, seed)
    kc = kpp.complex
    defect = verify_level_curves(kpp, curves)
    if defect is not None:
        raise ProofFailure(f"level curve defect: {defect}", defect)
    s = HoleState(kc, "theorem")
    initial = s.counts()
    s.remove_seed(levels.seed)
    trace = ReductionTrace([], initial, initial, None, "theorem", STRICT, False, levels.seed)
    strips = _strip_triangles(kc, lev)
    for i in range(levels.n + 1):
        order, _ = _strip_order(strips.get(i, []), lev, i)
        for t in order:
            try:
                _, st = apply_removal(s, t, STRICT, False)
            except IllegalRemoval as exc:
                raise ProofFailure(f"strip {i}: {t} {exc}", exc.illegal) from exc
            trace.steps.append(st)
    trace.final = s.counts()
    trace.terminal = s.live_complex()
    if levels.epsilon is not None:
        trace.headers["epsilon"] = repr(levels.epsilon)

    checks = {}
    k0 = Complex2(sorted(k.boundary_vertices()), k.complex.boundary_edges(), ())
    checks["terminal is K0"] = trace.terminal == k0
    checks["ops I/II only"] = trace.op_kinds() <= {"I", "II"}
    checks["every step keeps chi"] = all(d[0] - d[1] + d[2] == 0 for d in (st.delta for st in trace.steps))
    checks["subdivision keeps chi"] = kc.counts().chi == k.complex.counts().chi
    dchi = sum(st.delta[0] - st.delta[1] + st.delta[2] for st in trace.steps) - 1
    final_q = _final_quotient_chi(k, trace.terminal.edges, trace.terminal.vertices)
    recount = final_q - dchi
    checks["final is chi_K0"] = final_q == chi_K0
    checks["recount"] = recount == chi_K
    checks["chi_K = chi_K0 + 1"] = chi_K == chi_K0 + 1
    cert = TheoremCertificate(trace, chi_K, chi_K0, mode, levels.epsilon, levels, kpp, recount, checks)
    bad = [name for name, ok in checks.items() if not ok]
    if bad:
        raise ProofFailure("certificate check failed: " + ", ".join(bad), cert)
    return cert


def replay_certificate(text, k):
    """Rebuild K'' from ``k`` and the recorded mode, then replay every step.

    The recorded chi values and epsilon must also match a fresh computation.
    """
    headers, _steps, _failed = parse_trace(text)
    if "mode" not in headers:
        return ReplayResult(False, 0, "not a certificate: no mode= header")
    k = _polygon(k)
    chi_K, chi_K0 = _quotient_chi(k), boundary_chi(k)
    for key, val in (("chi_K", chi_K), ("chi_K0", chi_K0)):
        if headers.get(key) != str(val):
            return ReplayResult(False, 0, f"recorded {key}={headers.get(key)}, computed {val}")
    try:
        levels, kpp, _lev, _curves = theorem_subdivision(k, headers["mode"])
    except ProofFailure as exc:
        return ReplayResult(False, 0, f"cannot rebuild the subdivision: {exc}")
    eps = repr(levels.epsilon) if levels.epsilon is not None else None
    if headers.get("epsilon") != eps:
        return ReplayResult(False, 0, f"recorded epsilon={headers.get('epsilon')}, computed {eps}")
    return replay(text, kpp)
