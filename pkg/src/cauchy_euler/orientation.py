"""Oriented triangles, induced boundary orientation and orientability.

An orientation is stored as one bit: 0 for the class of the sorted vertex
order, 1 for the opposite class.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .complex_core import Complex2, edge_key, tri_edges
from .errors import NonPseudomanifold, NotSharedFace


def _parity(order):
    """Parity of the permutation taking sorted(order) to order."""
    p = list(order)
    inv = 0
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                inv += 1
    return inv % 2


@dataclass(frozen=True)
class SignedEdge:
    edge: tuple
    sign: int

    def __str__(self):
        return f"{'+' if self.sign > 0 else '-'}[{self.edge[0]},{self.edge[1]}]"


@dataclass(frozen=True)
class OrientedTriangle:
    triangle: tuple
    parity: int = 0

    @classmethod
    def from_order(cls, order):
        order = tuple(order)
        if len(set(order)) != 3:
            raise ValueError(f"not a triangle: {order}")
        return cls(tuple(sorted(order)), _parity(order))

    def order(self):
        a, b, c = self.triangle
        return (a, b, c) if self.parity == 0 else (a, c, b)

    def __neg__(self):
        return OrientedTriangle(self.triangle, 1 - self.parity)

    def __str__(self):
        return "[" + ",".join(map(str, self.order())) + "]"


def _signed(u, v, coeff):
    return SignedEdge(edge_key(u, v), coeff if u < v else -coeff)


def induced_boundary(t: OrientedTriangle) -> list:
    """+[a1,a2] - [a0,a2] + [a0,a1] for the class representative [a0,a1,a2]."""
    a0, a1, a2 = t.order()
    return [_signed(a1, a2, 1), _signed(a0, a2, -1), _signed(a0, a1, 1)]


def edge_sign(t: OrientedTriangle, e) -> int:
    e = edge_key(*e)
    for se in induced_boundary(t):
        if se.edge == e:
            return se.sign
    raise NotSharedFace(f"{e} is not a face of {t.triangle}")


def compatible(t1: OrientedTriangle, t2: OrientedTriangle, shared) -> bool:
    shared = edge_key(*shared)
    if t1.triangle == t2.triangle:
        raise NotSharedFace("a triangle does not share a face with itself")
    if not (set(shared) <= set(t1.triangle) and set(shared) <= set(t2.triangle)):
        raise NotSharedFace(f"{shared} is not a common face of {t1.triangle} and {t2.triangle}")
    return edge_sign(t1, shared) != edge_sign(t2, shared)


def propagate(t1: OrientedTriangle, shared, t2) -> OrientedTriangle:
    """The orientation of triangle ``t2`` compatible with ``t1`` across ``shared``."""
    cand = OrientedTriangle(tuple(sorted(t2)), 0)
    return cand if compatible(t1, cand, shared) else -cand


@dataclass
class OrientabilityResult:
    orientable: bool
    assignment: dict | None = None
    witness: tuple | None = None
    conflict_edge: tuple | None = None

    def chains(self):
        return self.witness


def _check_pseudomanifold(c):
    et = c.edge_triangles()
    for e in c.edges:
        if len(et.get(e, ())) > 2:
            raise NonPseudomanifold(e)
    return et


def check_orientable(c: Complex2) -> OrientabilityResult:
    """Breadth-first propagation from the lowest triangle of each component.

    On failure the witness is a pair of chains from the root triangle to a
    common terminal triangle whose propagated orientations disagree.
    """
    et = _check_pseudomanifold(c)
    assign = {}
    parent = {}
    for root in c.triangles:
        if root in assign:
            continue
        assign[root] = OrientedTriangle(root, 0)
        parent[root] = None
        queue = deque([root])
        while queue:
            t = queue.popleft()
            for e in sorted(tri_edges(t)):
                for u in et[e]:
                    if u == t:
                        continue
                    want = propagate(assign[t], e, u)
                    if u not in assign:
                        assign[u] = want
                        parent[u] = (t, e)
                        queue.append(u)
                    elif assign[u] != want:
                        alpha = _chain(u, assign, parent)
                        beta = _chain(t, assign, parent) + [want]
                        return OrientabilityResult(False, None, (alpha, beta), e)
    return OrientabilityResult(True, assign)


def _chain(t, assign, parent):
    out = []
    while t is not None:
        out.append(assign[t])
        p = parent[t]
        t = p[0] if p else None
    return out[::-1]


def verify_witness(witness) -> bool:
    """Both chains start at the same oriented triangle, are compatible step by
    step, and end on the same triangle with opposite orientations."""
    alpha, beta = witness
    if not alpha or not beta or alpha[0] != beta[0]:
        return False
    for chain in (alpha, beta):
        for x, y in zip(chain, chain[1:]):
            shared = set(x.triangle) & set(y.triangle)
            if len(shared) != 2 or not compatible(x, y, tuple(shared)):
                return False
    return alpha[-1].triangle == beta[-1].triangle and alpha[-1] == -beta[-1]


def verify_assignment(c: Complex2, assign) -> bool:
    et = c.edge_triangles()
    for e, ts in et.items():
        if len(ts) == 2 and not compatible(assign[ts[0]], assign[ts[1]], e):
            return False
    return True


def edge_components(c: Complex2) -> list:
    """Triangles grouped by edge adjacency."""
    et = c.edge_triangles()
    seen, comps = set(), []
    for root in c.triangles:
        if root in seen:
            continue
        comp, queue = [], deque([root])
        seen.add(root)
        while queue:
            t = queue.popleft()
            comp.append(t)
            for e in tri_edges(t):
                for u in et[e]:
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
        comps.append(sorted(comp))
    return comps


def orientability_by_component(c: Complex2) -> list:
    """One result per edge-adjacency component (used for singular surfaces)."""
    out = []
    for comp in edge_components(c):
        sub = Complex2.from_triangles(comp)
        out.append((comp, check_orientable(sub)))
    return out
