import pytest

from cauchy_euler.complex_core import Complex2, euler_characteristic, singular_vertices, validate
from cauchy_euler.errors import InadmissibleScheme, ResolutionTooSmall
from cauchy_euler.orientation import check_orientable
from cauchy_euler.planar_rep import (EdgePair, IdentificationScheme, PlanarPolygon, boundary_chi,
                                     build_quotient, expected_chi, surface, surface_names,
                                     validate_scheme)


def _poly(tris, emb, pairs):
    return PlanarPolygon(Complex2.from_triangles(tris, emb), IdentificationScheme(tuple(pairs)))


# cone with apex B: three triangles fanned from B, the two outer spokes glued
def cone_good():
    A, C, D, A2, B = 0, 1, 2, 3, 4
    emb = {A: (0, 1), C: (0.9, 1.5), D: (1.8, 2), A2: (2.7, 2.5), B: (2, 0)}
    return _poly([(A, C, B), (C, D, B), (D, A2, B)], emb, [EdgePair((B, A), (B, A2))])


def cone_loop():
    B, A, A2 = 0, 1, 2
    return _poly([(B, A, A2)], {B: (1, 0), A: (0, 1), A2: (1, 2)}, [EdgePair((B, A), (B, A2))])


def cone_duplicate():
    B, A, C, A2 = 0, 1, 2, 3
    emb = {B: (1, 0), A: (0, 1.5), C: (1, 2), A2: (2.2, 2.5)}
    return _poly([(B, A, C), (B, C, A2)], emb, [EdgePair((B, A), (B, A2))])


def test_cone_with_three_triangles_is_admissible():
    k = cone_good()
    assert validate_scheme(k).ok
    q = build_quotient(k)
    assert q.counts().as_tuple() == (4, 6, 3)


def test_cone_drawing_with_collapsed_edge():
    rep = validate_scheme(cone_loop())
    assert "loop" in rep.kinds()
    with pytest.raises(InadmissibleScheme):
        build_quotient(cone_loop())


def test_cone_drawing_with_one_triangle_twice():
    assert "duplicate-triangle" in validate_scheme(cone_duplicate()).kinds()


def test_identifying_an_interior_edge_is_rejected():
    k = surface("torus", 3)
    inner = next(e for e in k.complex.edges if e not in k.boundary_edge_set())
    bad = PlanarPolygon(k.complex, IdentificationScheme(k.scheme.pairs[:-1] + (EdgePair(inner, k.scheme.pairs[-1].b),)))
    assert "not-boundary-edge" in validate_scheme(bad).kinds()


def test_torus_quotient_counts():
    q = build_quotient(surface("torus", 3))
    assert q.counts().as_tuple() == (9, 27, 18)
    assert validate(q).ok


def test_empty_scheme_is_the_disk():
    k = surface("torus", 3)
    d = PlanarPolygon(k.complex)
    assert euler_characteristic(build_quotient(d)) == 1
    assert boundary_chi(d) == 0


@pytest.mark.parametrize("name", surface_names() + ["sphere_meridians"])
@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_catalog_chi(name, r):
    k = surface(name, r)
    assert validate_scheme(k).ok
    assert euler_characteristic(build_quotient(k)) == expected_chi(name)


@pytest.mark.parametrize("name,chi0", [("sphere_meridians", 1), ("sphere_square", 1), ("torus", -1),
                                       ("projective_plane", 0), ("pinched_torus", 0)])
def test_boundary_chi(name, chi0):
    assert boundary_chi(surface(name, 3)) == chi0


def test_orientability_of_catalog():
    assert check_orientable(build_quotient(surface("torus", 3))).orientable
    assert not check_orientable(build_quotient(surface("klein_bottle", 3))).orientable


def test_pinched_torus_singular_vertex():
    q = build_quotient(surface("pinched_torus", 3))
    assert euler_characteristic(q) == 1
    assert len(singular_vertices(q)) == 1


def test_resolution_too_small():
    with pytest.raises(ResolutionTooSmall):
        surface("torus", 2)


def test_unknown_surface():
    with pytest.raises(ValueError):
        surface("pretzel", 3)
