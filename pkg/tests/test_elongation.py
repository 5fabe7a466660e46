import math

import numpy as np
import pytest

from cauchy_euler import geometry
from cauchy_euler.complex_core import Complex2
from cauchy_euler.elongation import (assign_levels, build_level_subdivision, choose_seed,
                                     euclidean_preparation, prove_theorem, replay_certificate,
                                     split_chords, strip_schedule, theorem_subdivision,
                                     verify_level_curves)
from cauchy_euler.errors import ProofFailure, SeedOnBoundary
from cauchy_euler.generators import disk_with_triangles, random_disk
from cauchy_euler.planar_rep import boundary_chi, disk_polygon, surface, surface_names

from conftest import load

SEED = (0, 1, 2)


def _slice(k, seed, mode="combinatorial"):
    lv = assign_levels(k, seed, mode)
    kpp, lev, curves = build_level_subdivision(k, lv)
    return lv, kpp, lev, curves


def test_seeded_hexagon_ranks():
    k = load("seeded_hexagon.sc2")
    lv = assign_levels(k, SEED)
    assert [lv.rank[v] for v in SEED] == [0, 0, 0]
    assert lv.rank[3] == 1 and lv.rank[4] == 2
    assert {lv.rank[v] for v in range(5, 11)} == {3}
    assert lv.n == 2


def test_seeded_hexagon_euclidean_ranks_agree():
    lv = assign_levels(load("seeded_hexagon.sc2"), SEED, "euclidean")
    assert (lv.rank[3], lv.rank[4]) == (1, 2)


def test_seeded_hexagon_level_curves():
    k = load("seeded_hexagon.sc2")
    lv, kpp, lev, curves = _slice(k, SEED)
    assert verify_level_curves(kpp, curves) is None
    assert kpp.complex.counts().chi == k.complex.counts().chi
    assert sorted(curves.cycle(0)) == list(SEED)
    # B_1 passes through y1, B_2 through y2, B_3 is the outer hexagon
    assert 3 in curves.vertices[1] and 4 in curves.vertices[2]
    assert set(curves.vertices[3]) == set(range(5, 11))


def test_seed_only_interior_sends_boundary_to_one():
    emb = {0: (-1, -0.5), 1: (1, -0.5), 2: (0, 1), 3: (0, -4), 4: (4, 3), 5: (-4, 3)}
    c = Complex2.from_triangles([SEED, (0, 1, 3), (1, 2, 4), (0, 2, 5), (1, 3, 4), (2, 4, 5), (0, 3, 5)], emb)
    lv = assign_levels(disk_polygon(c), SEED)
    assert lv.n == 0
    assert all(lv.rank[v] == 1 for v in (3, 4, 5))


def test_seed_on_boundary_rejected(triangle):
    with pytest.raises(SeedOnBoundary):
        assign_levels(disk_polygon(triangle), (0, 1, 2))


def test_euclidean_ranks_are_strict_on_200_triangle_disk():
    k = disk_with_triangles(200, np.random.default_rng(11))
    k, seed = choose_seed(split_chords(k))
    lv = assign_levels(k, seed, "euclidean")
    bnd = k.boundary_vertices()
    interior = [v for v in k.complex.vertices if v not in bnd and v not in seed]
    ranks = sorted(lv.rank[v] for v in interior)
    assert ranks == list(range(1, len(interior) + 1))
    cen = [sum(float(k.complex.embedding[v][i]) for v in seed) / 3 for i in range(2)]
    by_rank = sorted(interior, key=lv.rank.get)
    d = [math.dist(cen, k.complex.embedding[v]) for v in by_rank]
    assert all(a <= b for a, b in zip(d, d[1:]))


def test_crossing_count_is_rank_gap():
    rng = np.random.default_rng(4)
    k, seed = choose_seed(split_chords(random_disk(30, rng)))
    lv, kpp, _, _ = _slice(k, seed)
    emb = kpp.complex.embedding
    new = [v for v in kpp.complex.vertices if v not in k.complex.vertices]
    gaps = set()
    for a, b in k.complex.edges:
        lo, hi = sorted((lv.rank[a], lv.rank[b]))
        pa, pb = k.complex.embedding[a], k.complex.embedding[b]
        on = [v for v in new if geometry.orient(pa, pb, emb[v], 1e-9) == 0 and geometry.on_segment(emb[v], pa, pb)]
        assert len(on) == max(hi - lo - 1, 0)
        gaps.add(hi - lo)
    assert 3 in gaps  # e.g. ranks 1 and 4: two crossings


def test_subdivision_keeps_chi_and_levels_disjoint():
    rng = np.random.default_rng(8)
    for _ in range(20):
        k, seed = choose_seed(split_chords(random_disk(int(rng.integers(5, 40)), rng)))
        lv, kpp, lev, curves = _slice(k, seed)
        assert kpp.complex.counts().chi == k.complex.counts().chi
        owners = [i for i, vs in curves.vertices.items() for _ in vs]
        assert len(owners) == len(kpp.complex.vertices)


def test_b0_is_the_seed_cycle():
    rng = np.random.default_rng(2)
    for _ in range(10):
        levels, kpp, _, curves = theorem_subdivision(random_disk(int(rng.integers(6, 30)), rng))
        assert len(curves.cycle(0)) == 3
        assert set(curves.cycle(0)) == set(levels.seed)


# ids: seed 0 1 2, inner p q r v = 3 4 5 6, corners 7..10
ADV_COORDS = {0: (-0.3, -0.3), 1: (0.4, 0), 2: (-0.3, 0.3), 3: (1.9, 1.2), 4: (1.9, -1.2), 5: (3, 0),
              6: (2, 0), 7: (-5, -5), 8: (5, -5), 9: (5, 5), 10: (-5, 5)}
ADV_TRIS = [(6, 3, 4), (6, 4, 5), (6, 5, 3), (0, 1, 2), (1, 4, 3), (1, 3, 2), (0, 4, 1), (5, 8, 9),
            (3, 5, 9), (4, 8, 5), (4, 7, 8), (0, 7, 4), (0, 10, 7), (0, 2, 10), (2, 3, 10), (3, 9, 10)]


@pytest.fixture
def adversarial():
    return disk_polygon(Complex2.from_triangles(ADV_TRIS, ADV_COORDS))


def test_adversarial_vertex_disconnects_euclidean_level(adversarial):
    lv, kpp, _, curves = _slice(adversarial, SEED, "euclidean")
    # v is nearer the seed than its neighbours p, q, r but meets none of B_1's other points
    assert lv.rank[6] < min(lv.rank[3], lv.rank[4], lv.rank[5])
    d = verify_level_curves(kpp, curves)
    assert d is not None and d.kind == "disconnected" and 6 in d.vertices
    with pytest.raises(ProofFailure):
        prove_theorem(adversarial, "euclidean", seed=SEED)


def test_adversarial_disk_is_fine_combinatorially(adversarial):
    cert = prove_theorem(adversarial, "combinatorial", seed=SEED)
    assert (cert.chi_K, cert.chi_K0) == (1, 0)


def _ring(beta, tris):
    emb = {0: (-1, -0.5), 1: (1, -0.5), 2: (0, 1)}
    emb.update(beta)
    k = disk_polygon(Complex2.from_triangles([SEED] + tris, emb))
    _, kpp, lev, curves = _slice(k, SEED)
    return strip_schedule(kpp, curves, 0, lev)


def test_strip_ending_case_a():
    sched = _ring({3: (0, -4), 4: (4, 3), 5: (-4, 3)},
                  [(0, 1, 3), (1, 2, 4), (0, 2, 5), (1, 3, 4), (2, 4, 5), (0, 3, 5)])
    assert sched[0][1] == "I"
    assert sched[-2:] == [((0, 2, 5), "II"), ((0, 3, 5), "II")]
    assert len(sched) == 6


def test_strip_ending_case_b():
    sched = _ring({3: (-4, -4), 4: (4, -1), 5: (0, 5)},
                  [(0, 1, 3), (1, 2, 4), (0, 2, 3), (1, 3, 4), (2, 4, 5), (2, 3, 5)])
    assert sched[0][1] == "I"
    assert sched[-2:] == [((0, 2, 3), "II"), ((2, 3, 5), "II")]
    assert len(sched) == 6


def test_schedule_covers_each_strip_with_ops_one_and_two():
    rng = np.random.default_rng(6)
    k, seed = choose_seed(split_chords(random_disk(25, rng)))
    lv, kpp, lev, curves = _slice(k, seed)
    assert verify_level_curves(kpp, curves) is None
    for i in range(lv.n + 1):
        strip = [t for t in kpp.complex.triangles if min(lev[v] for v in t) == i < max(lev[v] for v in t)]
        sched = strip_schedule(kpp, curves, i, lev)
        assert sorted(t for t, _ in sched) == sorted(strip)
        assert sched[0][1] == "I"
        assert {op for _, op in sched} <= {"I", "II"}


@pytest.mark.parametrize("name,chi_K0,chi", [("sphere_square", 1, 2), ("torus", -1, 0), ("pinched_torus", 0, 1)])
def test_prove_catalog_examples(name, chi_K0, chi):
    k = surface(name, 4)
    cert = prove_theorem(k)
    assert cert.chi_K0 == chi_K0
    assert cert.chi_K == chi
    assert all(cert.checks.values())
    assert cert.trace.op_kinds() <= {"I", "II"}


@pytest.mark.parametrize("name", surface_names())
def test_prove_every_catalog_surface(name):
    for r in (3, 4):
        k = surface(name, r)
        cert = prove_theorem(k)
        assert cert.chi_K == cert.chi_K0 + 1
        assert cert.chi_K0 == boundary_chi(k)


def test_certificate_replays():
    k = surface("torus", 3)
    text = prove_theorem(k).text()
    assert text.splitlines()[0] == "chi_K=0 chi_K0=-1 mode=combinatorial"
    res = replay_certificate(text, k)
    assert res.ok, res.message


def test_tampered_certificate_rejected():
    k = surface("torus", 3)
    lines = prove_theorem(k).text().splitlines()
    i = next(j for j, ln in enumerate(lines) if " op=II" in ln)
    lines[i] = lines[i].replace(" op=II", " op=I")
    assert not replay_certificate("\n".join(lines) + "\n", k).ok


def test_certificate_with_wrong_chi_rejected():
    k = surface("torus", 3)
    text = prove_theorem(k).text().replace("chi_K=0", "chi_K=1", 1)
    res = replay_certificate(text, k)
    assert not res.ok and "chi_K" in res.message


def test_euclidean_certificate_records_epsilon():
    k = random_disk(12, np.random.default_rng(3), "convex")
    cert = prove_theorem(k, "euclidean")
    assert "epsilon=" in cert.text()
    assert replay_certificate(cert.text(), k).ok


def seed_touches_boundary(k, seed):
    return bool(set(seed) & k.boundary_vertices())


def test_convex_position_euclidean_curves_are_simple():
    rng = np.random.default_rng(12)
    for _ in range(100):
        k = random_disk(int(rng.integers(4, 25)), rng, "convex")
        prep, seed = euclidean_preparation(k)
        assert not seed_touches_boundary(prep, seed)
        _, kpp, _, curves = theorem_subdivision(k, "euclidean")
        assert verify_level_curves(kpp, curves) is None
