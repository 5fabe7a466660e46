import numpy as np
import pytest

from cauchy_euler.complex_core import boundary_cycles, euler_characteristic, validate
from cauchy_euler.errors import NonSimpleFace
from cauchy_euler.polyhedra import (SOLIDS, ConvexPolyhedron, PolygonalDisk, descartes_angle_sum,
                                    perturbed, schlegel_projection, solid, triangulate_faces,
                                    validate_convex)


@pytest.mark.parametrize("name", SOLIDS)
def test_solids_are_convex_with_chi_two(name):
    p = solid(name)
    assert validate_convex(p).ok
    assert p.euler_characteristic() == 2


def test_pushed_in_vertex_breaks_convexity():
    p = solid("cube")
    verts = dict(p.vertices)
    verts[7] = (0.5, 0.5, 0.5)
    rep = validate_convex(ConvexPolyhedron(verts, p.faces))
    assert not rep.ok
    assert rep.kinds() & {"convexity", "non-planar-face"}


def test_two_tetrahedra_sharing_a_vertex():
    t = solid("tetrahedron")
    verts = dict(t.vertices)
    faces = list(t.faces)
    shift = {0: 0, 1: 4, 2: 5, 3: 6}
    for v in (1, 2, 3):
        verts[shift[v]] = tuple(np.array(t.vertices[v]) * -1 + np.array((2, 2, 2)))
    faces += [tuple(shift[v] for v in f) for f in t.faces]
    rep = validate_convex(ConvexPolyhedron(verts, faces))
    assert "vertex-incidence" in rep.kinds()


@pytest.mark.parametrize("name,total", [("tetrahedron", 8), ("cube", 24), ("octahedron", 16),
                                        ("icosahedron", 40), ("prism", 16), ("cube_with_pyramid", 28)])
def test_descartes(name, total):
    got, expected, defect = descartes_angle_sum(solid(name))
    assert expected == total
    assert defect < 1e-9
    assert round(got) == total


def test_descartes_on_perturbed_solids():
    rng = np.random.default_rng(7)
    for name in SOLIDS:
        for _ in range(3):
            q = perturbed(solid(name), rng)
            assert validate_convex(q).ok
            assert descartes_angle_sum(q)[2] < 1e-6


def test_cube_projection_counts():
    d = schlegel_projection(solid("cube"), 1)
    assert d.counts().as_tuple() == (8, 12, 5)
    assert len(d.outer) == 4


def test_tetrahedron_projection():
    d = schlegel_projection(solid("tetrahedron"), 0)
    inner = set(d.embedding) - set(d.outer)
    assert len(inner) == 1
    assert len(d.faces) == 3


def test_pyramid_solid_projection():
    d = schlegel_projection(solid("cube_with_pyramid"), 0)
    assert len(d.embedding) == 9
    assert sorted(d.outer) == [4, 5, 6, 7]


@pytest.mark.parametrize("name", SOLIDS)
def test_every_face_projects(name):
    p = solid(name)
    for i in range(len(p.faces)):
        k = triangulate_faces(schlegel_projection(p, i))
        assert validate(k.complex).ok
        assert euler_characteristic(k.complex) == 1
        assert len(boundary_cycles(k.complex)) == 1


def test_cube_triangulation_counts():
    k = triangulate_faces(schlegel_projection(solid("cube"), 1))
    assert k.complex.counts().as_tuple() == (8, 17, 10)


def test_triangulation_keeps_alternating_sum():
    d = schlegel_projection(solid("cube_with_pyramid"), 0)
    k = triangulate_faces(d)
    assert d.counts().chi == k.complex.counts().chi == 1


def test_triangulated_input_is_unchanged():
    k = triangulate_faces(schlegel_projection(solid("octahedron"), 0))
    assert triangulate_faces(k) is k


def test_non_convex_face_triangulates():
    emb = {0: (0, 0), 1: (4, 0), 2: (4, 4), 3: (2, 1), 4: (0, 4)}
    d = PolygonalDisk(emb, [(0, 1, 2, 3, 4)], [0, 4, 3, 2, 1])
    k = triangulate_faces(d)
    assert len(k.complex.triangles) == 3
    assert validate(k.complex).ok


def test_self_crossing_face():
    emb = {0: (0, 0), 1: (2, 2), 2: (2, 0), 3: (0, 2)}
    d = PolygonalDisk(emb, [(0, 1, 2, 3)], [0, 3, 2, 1])
    with pytest.raises(NonSimpleFace):
        triangulate_faces(d)
