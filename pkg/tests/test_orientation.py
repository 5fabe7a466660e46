import pytest

from cauchy_euler.errors import NonPseudomanifold, NotSharedFace
from cauchy_euler.complex_core import Complex2
from cauchy_euler.orientation import (OrientedTriangle, SignedEdge, check_orientable, compatible,
                                      induced_boundary, orientability_by_component, propagate,
                                      verify_assignment, verify_witness)
from cauchy_euler.planar_rep import build_quotient, surface

A0, A1, A2, B0 = 0, 1, 2, 3


def OT(*vs):
    return OrientedTriangle.from_order(vs)


def test_induced_boundary_signs():
    assert induced_boundary(OT(A0, A1, A2)) == [SignedEdge((A1, A2), 1), SignedEdge((A0, A2), -1),
                                                SignedEdge((A0, A1), 1)]


def test_opposite_class_flips_every_sign():
    fwd = {s.edge: s.sign for s in induced_boundary(OT(A0, A1, A2))}
    rev = {s.edge: s.sign for s in induced_boundary(OT(A0, A2, A1))}
    assert all(rev[e] == -fwd[e] for e in fwd)


def test_even_permutation_is_the_same_class():
    assert OT(A2, A0, A1) == OT(A0, A1, A2)
    assert induced_boundary(OT(A2, A0, A1)) == induced_boundary(OT(A0, A1, A2))


def test_compatibility_across_a_shared_edge():
    assert compatible(OT(A0, A1, A2), OT(B0, A2, A1), (A1, A2))
    assert not compatible(OT(A0, A1, A2), OT(B0, A1, A2), (A1, A2))


def test_triangle_with_itself_is_an_error():
    with pytest.raises(NotSharedFace):
        compatible(OT(A0, A1, A2), OT(A0, A1, A2), (A1, A2))


def test_propagate_gives_a_compatible_neighbour():
    t = OT(A0, A1, A2)
    u = propagate(t, (A1, A2), (A1, A2, B0))
    assert compatible(t, u, (A1, A2))


@pytest.mark.parametrize("name", ["sphere_square", "torus", "genus_2", "genus_3"])
def test_orientable_catalog(name):
    q = build_quotient(surface(name, 3))
    res = check_orientable(q)
    assert res.orientable
    assert len(res.assignment) == len(q.triangles)
    assert verify_assignment(q, res.assignment)


@pytest.mark.parametrize("name", ["projective_plane", "klein_bottle"])
def test_non_orientable_witness(name):
    res = check_orientable(build_quotient(surface(name, 3)))
    assert not res.orientable
    alpha, beta = res.witness
    assert verify_witness(res.witness)
    assert alpha[0] == beta[0]
    assert alpha[-1] == -beta[-1]


def test_tampered_witness_fails():
    alpha, beta = check_orientable(build_quotient(surface("projective_plane", 3))).witness
    assert not verify_witness((alpha, beta[:-1] + [-beta[-1]]))


def test_three_triangles_on_an_edge():
    c = Complex2.from_triangles([(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    with pytest.raises(NonPseudomanifold):
        check_orientable(c)


def test_pinched_torus_is_orientable_piecewise():
    q = build_quotient(surface("pinched_torus", 3))
    parts = orientability_by_component(q)
    assert parts and all(res.orientable for _, res in parts)
