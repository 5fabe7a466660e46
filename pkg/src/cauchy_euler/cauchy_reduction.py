"""Growing a hole in a triangulated disk, one triangle at a time.

Three removal operations keep n0 - n1 + n2 unchanged:

    I    one edge of the triangle is on the hole      (0, -1, -1)
    II   two hole edges meet at a free vertex         (-1, -2, -1)
    III  three hole edges, two free vertices          (-2, -3, -1)

A vertex of a triangle is *free* when nothing else that is still alive
touches it.  Two conventions for where the hole starts are supported: in
``cauchy`` mode the outer face is already removed (the disk came from a
polyhedron with one face taken out) and reduction ends at a single
triangle; in ``theorem`` mode a seed triangle is removed first and
reduction ends at the bare boundary cycle.
"""

from __future__ import annotations

import random
from collections import defaultdict, deque
from dataclasses import dataclass, field

from .complex_core import Complex2, CountVector, edge_key, tri_edges, tri_key
from .errors import IllegalRemoval, NotAdjacentToHole
from .orientation import edge_components

DELTAS = {"I": (0, -1, -1), "II": (-1, -2, -1), "III": (-2, -3, -1)}
SEED_DELTA = (0, 0, -1)

LAX, STRICT = "lax", "strict"


@dataclass(frozen=True)
class Illegal:
    """A removal that no operation covers."""

    pattern: str
    reason: str
    delta: tuple

    def __str__(self):
        return f"{self.pattern}: {self.reason}"

    @property
    def chi_change(self):
        return self.delta[0] - self.delta[1] + self.delta[2]

    @property
    def removed_chi(self):
        """Alternating sum of the simplices the step would take away."""
        return -self.chi_change


@dataclass(frozen=True)
class RemovalStep:
    triangle: tuple
    op: str
    vertices: tuple
    edges: tuple
    delta: tuple
    label: str | None = None

    def line(self, i):
        d0, d1, d2 = self.delta
        tri = ",".join(map(str, self.triangle))
        return f"step={i} op={self.op} tri={tri} dn0={d0} dn1={d1} dn2={d2}"


class HoleState:
    """Live part of a disk while triangles are removed.

    Edge and vertex incidence counts are kept so that classifying a
    triangle costs time proportional to the degrees of its vertices.
    """

    def __init__(self, c: Complex2, mode="cauchy"):
        if mode not in ("cauchy", "theorem"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.original = c
        et = c.edge_triangles()
        self._orig = {e: len(et.get(e, ())) for e in c.edges}
        self.tris = set(c.triangles)
        self.edges = set(c.edges)
        self.verts = set(c.vertices)
        # hole sides per edge: removed incident triangles, plus the outer face in cauchy mode
        self._hole = {e: (1 if mode == "cauchy" and k == 1 else 0) for e, k in self._orig.items()}
        self._v_edges = defaultdict(set)
        for e in c.edges:
            self._v_edges[e[0]].add(e)
            self._v_edges[e[1]].add(e)
        self._v_tris = defaultdict(set)
        for t in c.triangles:
            for v in t:
                self._v_tris[v].add(t)
        self.removed = 0
        self.seed = None

    # -- queries
    def counts(self):
        return CountVector(len(self.verts), len(self.edges), len(self.tris))

    def hole_sides(self, e):
        return self._hole[edge_key(*e)]

    def on_hole(self, e):
        return self._hole[edge_key(*e)] > 0

    def vertex_on_hole(self, v):
        hole = self._hole
        return any(hole[e] > 0 for e in self._v_edges[v])

    def is_free(self, v, t):
        vt = self._v_tris[v]
        if len(vt) != 1 or t not in vt:
            return False
        ve = self._v_edges[v]
        return len(ve) <= 2 and all(x in t for e in ve for x in e)

    def frontier(self, t):
        """Live triangles sharing a vertex with ``t``."""
        out = set()
        for v in t:
            out |= self._v_tris[v]
        out.discard(t)
        return out

    def hole_edges(self):
        return sorted(e for e in self.edges if self.on_hole(e))

    def hole_cycles(self):
        """Hole boundary as vertex cycles (None if it is not a union of simple cycles)."""
        adj = defaultdict(list)
        for a, b in self.hole_edges():
            adj[a].append(b)
            adj[b].append(a)
        if any(len(n) != 2 for n in adj.values()):
            return None
        seen, cycles = set(), []
        for s in sorted(adj):
            if s in seen:
                continue
            cyc, prev, cur = [s], None, s
            seen.add(s)
            while True:
                nxt = min(adj[cur]) if prev is None else [x for x in adj[cur] if x != prev][0]
                if nxt == s:
                    break
                cyc.append(nxt)
                seen.add(nxt)
                prev, cur = cur, nxt
            cycles.append(cyc)
        return cycles

    def live_complex(self):
        emb = self.original.embedding
        sub = {v: emb[v] for v in self.verts if v in emb} if emb else None
        return Complex2(self.verts, self.edges, self.tris, sub)

    def done(self):
        if self.mode == "cauchy":
            return len(self.tris) == 1
        return not self.tris

    # -- mutation
    def remove_seed(self, t):
        t = tri_key(*t)
        if t not in self.tris:
            raise IllegalRemoval(Illegal("missing", f"{t} is not a live triangle", (0, 0, 0)))
        before = self.counts()
        self._drop(t, (), ())
        self.seed = t
        return RemovalStep(t, "seed", (), (), tuple(self.counts() - before))

    def _drop(self, t, edges, verts):
        self.tris.discard(t)
        for e in _edges(t):
            self._hole[e] += 1
        for v in t:
            self._v_tris[v].discard(t)
        for e in edges:
            self.edges.discard(e)
            self._v_edges[e[0]].discard(e)
            self._v_edges[e[1]].discard(e)
        for v in verts:
            self.verts.discard(v)
        self.removed += 1

    def disconnects(self, t):
        """Whether the live triangles other than ``t`` fall apart (edge adjacency)."""
        rest = self.tris - {t}
        if not rest:
            return False
        start = min(rest)
        seen, queue = {start}, deque([start])
        while queue:
            u = queue.popleft()
            for e in tri_edges(u):
                for w in self._v_tris[e[0]] & self._v_tris[e[1]]:
                    if w != t and w not in seen:
                        seen.add(w)
                        queue.append(w)
        return len(seen) != len(rest)


def _edges(t):
    a, b, c = t
    return ((a, b), (a, c), (b, c))


def classify_removal(s: HoleState, t, rules=LAX, allow_op3=True):
    """Operation kind ("I", "II", "III") or an :class:`Illegal`.

    With ``rules="strict"`` op I also requires the vertex opposite the hole
    edge to be off the hole, which keeps the hole boundary a simple cycle.
    """
    return _classify(s, tri_key(*t), rules, allow_op3)[0]


def _classify(s, t, rules, allow_op3):
    """(kind or Illegal, hole edges, vertices the op removes)."""
    if t not in s.tris:
        raise NotAdjacentToHole(f"{t} is not a live triangle")
    hole = [e for e in _edges(t) if s._hole[e] > 0]
    k = len(hole)
    if k == 0:
        raise NotAdjacentToHole(f"{t} shares no edge with the hole")
    if k == 1:
        (a, b), = hole
        opp = t[0] if t[0] != a and t[0] != b else (t[1] if t[1] != a and t[1] != b else t[2])
        if rules == STRICT and s.vertex_on_hole(opp):
            free = [v for v in t if s.is_free(v, t)]
            return Illegal("NonSimpleBoundary", f"vertex {opp} opposite the hole edge is already on the hole",
                           (-len(free), -1, -1)), hole, ()
        return "I", hole, ()
    if k == 2:
        e, f = hole
        common = e[0] if e[0] in f else e[1]
        if s.is_free(common, t):
            return "II", hole, (common,)
        if s.disconnects(t):
            return Illegal("Lima-a", "removal disconnects the remaining triangles", (0, -2, -1)), hole, ()
        return Illegal("Lima-a", f"common vertex {common} lies on other live simplices", (0, -2, -1)), hole, ()
    free = tuple(v for v in t if s.is_free(v, t))
    delta = (-len(free), -3, -1)
    if len(free) == 2:
        if not allow_op3:
            return Illegal("op III disabled", "three hole edges with two free vertices", delta), hole, ()
        return "III", hole, free
    pattern = {0: "Lima-b", 1: "Lima-c", 3: "isolated"}[len(free)]
    reason = {0: "all three edges on the hole and no free vertex",
              1: "all three edges on the hole and only one free vertex",
              3: "triangle is all that is left of its component"}[len(free)]
    return Illegal(pattern, reason, delta), hole, ()


def apply_removal(s: HoleState, t, rules=LAX, allow_op3=True, label=None):
    t = tri_key(*t)
    kind, hole, verts = _classify(s, t, rules, allow_op3)
    if isinstance(kind, Illegal):
        raise IllegalRemoval(kind)
    n0, n1, n2 = len(s.verts), len(s.edges), len(s.tris)
    s._drop(t, hole, verts)
    delta = (len(s.verts) - n0, len(s.edges) - n1, len(s.tris) - n2)
    if delta != DELTAS[kind]:
        raise AssertionError(f"{kind} removal of {t} changed counts by {delta}")
    return s, RemovalStep(t, kind, tuple(sorted(verts)), tuple(hole), delta, label)


# ---------------------------------------------------------------------------
# traces


@dataclass
class ReductionTrace:
    steps: list
    initial: CountVector
    final: CountVector
    terminal: Complex2
    reduction: str = "cauchy"
    rules: str = LAX
    allow_op3: bool = False
    seed: tuple | None = None
    headers: dict = field(default_factory=dict)

    ok = True

    def delta_sum(self):
        tot = [0, 0, 0]
        for st in self.steps:
            for i in range(3):
                tot[i] += st.delta[i]
        if self.seed is not None:
            tot[2] += SEED_DELTA[2]
        return tuple(tot)

    def op_kinds(self):
        return {st.op for st in self.steps}

    def header_lines(self):
        out = [f"{k}={v}" for k, v in self.headers.items()]
        out.append(f"reduction={self.reduction} rules={self.rules} op3={'yes' if self.allow_op3 else 'no'}")
        out.append("initial=" + ",".join(map(str, self.initial.as_tuple())))
        if self.seed is not None:
            out.append("seed=" + ",".join(map(str, self.seed)))
        return out

    def lines(self):
        out = self.header_lines()
        out += [st.line(i) for i, st in enumerate(self.steps, 1)]
        out.append("final=" + ",".join(map(str, self.final.as_tuple())))
        return out

    def text(self):
        return "\n".join(self.lines()) + "\n"


@dataclass
class Failure:
    """First illegal step of a reduction, with the trace up to it."""

    step: int
    triangle: tuple
    illegal: Illegal
    trace: ReductionTrace
    label: str | None = None

    ok = False

    def line(self):
        tri = ",".join(map(str, self.triangle))
        lab = f" label={self.label}" if self.label is not None else ""
        d = self.illegal.delta
        return (f"failed step={self.step} tri={tri}{lab} pattern={self.illegal.pattern.replace(' ', '_')}"
                f" dn0={d[0]} dn1={d[1]} dn2={d[2]} removed_chi={self.illegal.removed_chi}"
                f" reason={self.illegal.reason}")

    def text(self):
        lines = self.trace.header_lines()
        lines += [st.line(i) for i, st in enumerate(self.trace.steps, 1)]
        lines.append(self.line())
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# strategies


@dataclass
class ExplicitOrder:
    """Remove triangles in a given order; items are triangles or (label, triangle)."""

    order: list
    allow_op3: bool = False
    rules: str = LAX

    def items(self):
        for it in self.order:
            if len(it) == 2 and not isinstance(it[0], int):
                yield it[0], tri_key(*it[1])
            else:
                yield None, tri_key(*it)


@dataclass
class GreedyKirk:
    """Prefer op II, then op I (then III if enabled).

    Ties go to the earliest triangle of ``priority`` and then to the lowest
    triangle (sorted vertex triple).
    """

    allow_op3: bool = False
    rules: str = LAX
    preference: tuple = ("II", "I", "III")
    priority: tuple = ()

    def tie_key(self):
        pos = {tri_key(*t): i for i, t in enumerate(self.priority)}
        return lambda t: (pos.get(t, len(pos)), t)


@dataclass
class RandomLegal:
    """Uniform choice among legal removals; used for property testing."""

    rng: random.Random
    allow_op3: bool = True
    rules: str = LAX


@dataclass
class Pyramid:
    """The constructive schedule from level curves (see :mod:`elongation`)."""

    mode: str = "combinatorial"


def _new_trace(s, strategy, reduction="cauchy"):
    return ReductionTrace([], s.counts(), s.counts(), None, reduction,
                          getattr(strategy, "rules", LAX), getattr(strategy, "allow_op3", False))


def _finish(trace, s):
    trace.final = s.counts()
    trace.terminal = s.live_complex()
    return trace


def _candidates(s):
    out = set()
    for e in s.edges:
        if s.on_hole(e):
            out |= s._v_tris[e[0]] & s._v_tris[e[1]]
    return out


def reduce(k, strategy):
    """Run a strategy on a triangulated polygon (``PlanarPolygon`` or ``Complex2``).

    Returns a :class:`ReductionTrace` on success and a :class:`Failure` at
    the first illegal step otherwise.
    """
    if isinstance(strategy, Pyramid):
        from .elongation import prove_theorem

        return prove_theorem(k, mode=strategy.mode).trace
    c = k.complex if hasattr(k, "complex") else k
    s = HoleState(c, "cauchy")
    trace = _new_trace(s, strategy)
    if isinstance(strategy, ExplicitOrder):
        for i, (label, t) in enumerate(strategy.items(), 1):
            if s.done():
                return Failure(i, t, Illegal("past-end", "only one triangle was left", (0, 0, 0)), _finish(trace, s), label)
            if t not in s.tris:
                return Failure(i, t, Illegal("missing", "triangle is not live", (0, 0, 0)), _finish(trace, s), label)
            if not any(s.on_hole(e) for e in tri_edges(t)):
                return Failure(i, t, Illegal("not-adjacent", "triangle shares no edge with the hole", (0, 0, 0)),
                               _finish(trace, s), label)
            kind = classify_removal(s, t, strategy.rules, strategy.allow_op3)
            if isinstance(kind, Illegal):
                return Failure(i, t, kind, _finish(trace, s), label)
            _, st = apply_removal(s, t, strategy.rules, strategy.allow_op3, label)
            trace.steps.append(st)
        _finish(trace, s)
        if not s.done():
            return Failure(len(trace.steps) + 1, (), Illegal("incomplete", f"{len(s.tris)} triangles left", (0, 0, 0)),
                           trace)
        return trace
    if isinstance(strategy, (GreedyKirk, RandomLegal)):
        step = 0
        while not s.done():
            step += 1
            cands = sorted(_candidates(s))
            kinds = {t: classify_removal(s, t, strategy.rules, strategy.allow_op3) for t in cands}
            legal = [t for t in cands if not isinstance(kinds[t], Illegal)]
            if not legal:
                t = cands[0]
                illegal = kinds[t]
                pieces = len(edge_components(s.live_complex()))
                if pieces > 1:
                    illegal = Illegal("Disconnects", f"remaining triangles form {pieces} separate pieces", illegal.delta)
                return Failure(step, t, illegal, _finish(trace, s))
            if isinstance(strategy, RandomLegal):
                t = strategy.rng.choice(legal)
            else:
                rank = {op: i for i, op in enumerate(strategy.preference)}
                tie = strategy.tie_key()
                t = min(legal, key=lambda x: (rank[kinds[x]], tie(x)))
            _, st = apply_removal(s, t, strategy.rules, strategy.allow_op3)
            trace.steps.append(st)
        return _finish(trace, s)
    raise TypeError(f"unknown strategy {strategy!r}")


def kirk_counterexample(k, limit=100000):
    """A run obeying "op II whenever possible" (ops I/II only) that gets stuck.

    Depth-first over the choices the rule leaves open, memoized on the set
    of live triangles.  Returns the removal sequence or None.
    """
    import copy

    c = k.complex if hasattr(k, "complex") else k
    dead = set()

    def walk(s, path):
        key = frozenset(s.tris)
        if key in dead or len(dead) > limit:
            return None
        if s.done():
            dead.add(key)
            return None
        kinds = {t: classify_removal(s, t, LAX, False) for t in sorted(_candidates(s))}
        moves = [t for t, x in kinds.items() if x == "II"] or [t for t, x in kinds.items() if x == "I"]
        if not moves:
            return path
        for t in moves:
            s2 = copy.deepcopy(s)
            apply_removal(s2, t, LAX, False)
            found = walk(s2, path + [t])
            if found is not None:
                return found
        dead.add(key)
        return None

    return walk(HoleState(c, "cauchy"), [])


# ---------------------------------------------------------------------------
# replay


@dataclass
class ReplayResult:
    ok: bool
    steps: int
    message: str = ""


def parse_trace(text):
    """Headers, step tuples ``(op, tri, delta)`` and the failure line if any."""
    headers, steps, failed = {}, [], None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        fields = dict(tok.split("=", 1) for tok in line.split() if "=" in tok)
        if line.startswith("step="):
            tri = tuple(int(x) for x in fields["tri"].split(","))
            d = (int(fields["dn0"]), int(fields["dn1"]), int(fields["dn2"]))
            steps.append((fields["op"], tri, d))
        elif line.startswith("failed "):
            failed = fields
        else:
            headers.update(fields)
    return headers, steps, failed


def replay(text, k) -> ReplayResult:
    """Re-apply a serialized trace and check every recorded delta."""
    headers, steps, failed = parse_trace(text)
    c = k.complex if hasattr(k, "complex") else k
    reduction = headers.get("reduction", "cauchy")
    rules = headers.get("rules", LAX)
    op3 = headers.get("op3", "no") == "yes"
    s = HoleState(c, reduction)
    init = ",".join(map(str, s.counts().as_tuple()))
    if "initial" in headers and headers["initial"] != init:
        return ReplayResult(False, 0, f"initial counts {init} differ from recorded {headers['initial']}")
    if "seed" in headers:
        seed = tuple(int(x) for x in headers["seed"].split(","))
        try:
            s.remove_seed(seed)
        except IllegalRemoval as exc:
            return ReplayResult(False, 0, f"seed: {exc}")
    for i, (op, tri, d) in enumerate(steps, 1):
        tri = tri_key(*tri)
        try:
            kind = classify_removal(s, tri, rules, op3)
        except NotAdjacentToHole as exc:
            return ReplayResult(False, i, f"step {i}: {exc}")
        if isinstance(kind, Illegal):
            return ReplayResult(False, i, f"step {i}: {kind}")
        if kind != op:
            return ReplayResult(False, i, f"step {i}: recorded op {op}, found {kind}")
        _, st = apply_removal(s, tri, rules, op3)
        if st.delta != d:
            return ReplayResult(False, i, f"step {i}: recorded delta {d}, found {st.delta}")
    if failed is not None:
        return _replay_failure(s, failed, rules, op3, len(steps))
    fin = ",".join(map(str, s.counts().as_tuple()))
    if "final" in headers and headers["final"] != fin:
        return ReplayResult(False, len(steps), f"final counts {fin} differ from recorded {headers['final']}")
    return ReplayResult(True, len(steps), "ok")


_ORDER_PATTERNS = ("past-end", "missing", "not-adjacent", "incomplete")


def _replay_failure(s, failed, rules, op3, n):
    """The recorded failing step must still be illegal, for the recorded reason."""
    pattern = failed.get("pattern", "")
    if pattern in _ORDER_PATTERNS:
        return ReplayResult(True, n, f"failure {pattern} is an order-file condition")
    tri = tri_key(*(int(x) for x in failed["tri"].split(",")))
    try:
        kind = classify_removal(s, tri, rules, op3)
    except NotAdjacentToHole as exc:
        return ReplayResult(False, n, f"failed step: {exc}")
    if not isinstance(kind, Illegal):
        return ReplayResult(False, n, f"recorded failure at {tri} is a legal op {kind}")
    d = tuple(int(failed[f"dn{i}"]) for i in range(3))
    if pattern != "Disconnects" and pattern != kind.pattern.replace(" ", "_"):
        return ReplayResult(False, n, f"recorded pattern {pattern}, found {kind.pattern}")
    if d != kind.delta:
        return ReplayResult(False, n, f"recorded would-be delta {d}, found {kind.delta}")
    return ReplayResult(True, n, f"failure reproduced: {kind}")
