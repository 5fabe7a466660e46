import random

import pytest

from cauchy_euler.cauchy_reduction import (DELTAS, LAX, STRICT, ExplicitOrder, Failure, GreedyKirk,
                                           HoleState, Illegal, Pyramid, RandomLegal, apply_removal,
                                           classify_removal, kirk_counterexample, parse_trace, reduce,
                                           replay)
from cauchy_euler.complex_core import Complex2
from cauchy_euler.errors import IllegalRemoval, NotAdjacentToHole
from cauchy_euler.planar_rep import PlanarPolygon, surface

from conftest import load, order

FAN = [(0, 1, 4), (1, 2, 4), (2, 3, 4), (0, 3, 4)]


@pytest.fixture
def fan():
    return Complex2.from_triangles(FAN)


def test_outer_edge_gives_op_one(fan):
    s = HoleState(fan)
    assert classify_removal(s, (0, 1, 4)) == "I"
    _, st = apply_removal(s, (0, 1, 4))
    assert st.delta == DELTAS["I"] == (0, -1, -1)


def test_two_hole_edges_with_free_corner_give_op_two(fan):
    s = HoleState(fan)
    apply_removal(s, (0, 1, 4))
    assert classify_removal(s, (1, 2, 4)) == "II"
    _, st = apply_removal(s, (1, 2, 4))
    assert st.delta == (-1, -2, -1)
    assert st.vertices == (1,)


def test_interior_triangle_is_not_adjacent():
    c = surface("torus", 3).complex
    s = HoleState(c)
    et = c.edge_triangles()
    inner = next(t for t in c.triangles if all(len(et[e]) == 2 for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2]))))
    with pytest.raises(NotAdjacentToHole):
        classify_removal(s, inner)


def test_strict_rules_reject_a_pinching_op_one():
    # 3x3 grid of vertices, cells cut by the 1-3 / 2-4 ... diagonals
    c = Complex2.from_triangles([(0, 1, 3), (1, 3, 4), (1, 2, 4), (2, 4, 5),
                                 (3, 4, 6), (4, 6, 7), (4, 5, 7), (5, 7, 8)])
    s = HoleState(c)
    apply_removal(s, (1, 2, 4), STRICT)
    assert classify_removal(s, (1, 3, 4), LAX) == "I"
    out = classify_removal(s, (1, 3, 4), STRICT)
    assert isinstance(out, Illegal) and out.pattern == "NonSimpleBoundary"


def test_illegal_removal_raises(fan):
    s = HoleState(fan)
    apply_removal(s, (0, 1, 4))
    apply_removal(s, (2, 3, 4))
    with pytest.raises(IllegalRemoval) as exc:
        apply_removal(s, (1, 2, 4), STRICT, allow_op3=False)
    assert exc.value.illegal.pattern == "op III disabled"
    _, st = apply_removal(s, (1, 2, 4), STRICT, allow_op3=True)
    assert st.delta == DELTAS["III"] == (-2, -3, -1)


def test_lakatos_order_fails_at_ten():
    res = reduce(load("lakatos.sc2"), ExplicitOrder(order("lakatos_order.txt")))
    assert isinstance(res, Failure)
    assert res.label == "10"
    assert res.illegal.pattern == "Lima-a"
    assert "disconnect" in res.illegal.reason


def test_lakatos_amended_order_succeeds_with_op_three():
    k = load("lakatos.sc2")
    res = reduce(k, ExplicitOrder(order("lakatos_amended_order.txt"), allow_op3=True))
    assert res.ok
    assert [st.op for st in res.steps][-2:] == ["II", "III"]
    eleven = k.complex.raw_triangles[10]
    assert res.terminal.triangles == (eleven,)
    assert res.terminal.counts().chi == 1


def test_lakatos_amended_order_needs_op_three():
    res = reduce(load("lakatos.sc2"), ExplicitOrder(order("lakatos_amended_order.txt")))
    assert not res.ok
    assert res.illegal.pattern == "op III disabled"


def test_kirk_order_fails_at_step_ten():
    res = reduce(load("kirk.sc2"), ExplicitOrder(order("kirk_order.txt")))
    assert not res.ok
    assert res.step == 10
    assert res.illegal.delta == (-1, -3, -1)
    assert res.illegal.removed_chi == -1
    assert res.illegal.chi_change == 1


def test_greedy_kirk_gets_stuck_on_the_recorded_priority():
    k = load("kirk.sc2")
    pri = tuple(order("kirk_greedy_priority.txt"))
    res = reduce(k, GreedyKirk(priority=pri))
    assert not res.ok
    assert res.illegal.pattern == "Disconnects"


def test_kirk_counterexample_search_finds_a_stuck_run():
    run = kirk_counterexample(load("kirk.sc2"))
    assert run is not None
    res = reduce(load("kirk.sc2"), GreedyKirk(priority=tuple(run)))
    assert not res.ok


def test_successful_trace_identities():
    k = load("kirk.sc2")
    res = reduce(k, GreedyKirk())
    assert res.ok
    assert all(st.delta[0] - st.delta[1] + st.delta[2] == 0 for st in res.steps)
    assert res.terminal.counts().as_tuple() == (3, 3, 1)


def test_explicit_order_past_the_end(fan):
    res = reduce(PlanarPolygon(fan), ExplicitOrder(FAN))
    assert not res.ok and res.illegal.pattern == "past-end"


def test_random_legal_deltas():
    rng = random.Random(5)
    for _ in range(20):
        res = reduce(load("kirk.sc2"), RandomLegal(rng))
        for st in (res.steps if res.ok else res.trace.steps):
            assert st.delta == DELTAS[st.op]


def test_pyramid_strategy_returns_theorem_trace():
    tr = reduce(surface("torus", 3), Pyramid())
    assert tr.reduction == "theorem"
    assert tr.op_kinds() <= {"I", "II"}


def test_trace_roundtrip_and_replay():
    k = load("lakatos.sc2")
    res = reduce(k, ExplicitOrder(order("lakatos_amended_order.txt"), allow_op3=True))
    text = res.text()
    headers, steps, failed = parse_trace(text)
    assert failed is None and len(steps) == len(res.steps)
    assert headers["reduction"] == "cauchy"
    assert replay(text, k).ok
    bad = text.replace("dn1=-3", "dn1=-2", 1)
    assert not replay(bad, k).ok


def test_failure_replay():
    k = load("kirk.sc2")
    res = reduce(k, ExplicitOrder(order("kirk_order.txt")))
    rep = replay(res.text(), k)
    assert rep.ok and rep.steps == 9
    forged = res.text().replace("pattern=Lima-c", "pattern=Lima-b")
    assert not replay(forged, k).ok


def test_step_line_format(fan):
    s = HoleState(fan)
    _, st = apply_removal(s, (4, 1, 0))
    assert st.line(1) == "step=1 op=I tri=0,1,4 dn0=0 dn1=-1 dn2=-1"
