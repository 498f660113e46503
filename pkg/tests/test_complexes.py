import math
import random
from itertools import combinations

import pytest

from dhomotopy.complexes import (Cover, SimplicialComplex, boundary_complex, cone, derived_star_cover,
                                 disjoint_union, euler_characteristic, find_isomorphism, is_isomorphic,
                                 iterated_subdivision, nerve_of_cover, prism_complex, standard_complex,
                                 star_cover_of_subdivision, subdivide, vertex_star_cover)
from dhomotopy.corpus import complex_corpus, random_complex, random_cover, three_arc_cover, two_arc_cover

from oracles import brute_nerve, brute_subdivision


def downward_closed(K):
    return all(f in K for s in K.simplices() for r in range(1, len(s)) for f in combinations(s, r))


# standard_complex

def test_standard_complex_point():
    K = standard_complex(0)
    assert K.vertices == (0,) and len(K) == 1


@pytest.mark.parametrize("p", range(6))
def test_standard_complex_counts_binomial(p):
    # DERIVED: all nonempty subsets of p+1 vertices
    K = standard_complex(p)
    assert K.f_vector == tuple(math.comb(p + 1, d + 1) for d in range(p + 1))
    assert len(K) == 2 ** (p + 1) - 1


def test_standard_complex_examples():
    assert standard_complex(2).f_vector == (3, 3, 1)
    assert standard_complex(3).f_vector == (4, 6, 4, 1)
    assert euler_characteristic(standard_complex(3)) == 1


def test_standard_complex_rejects_negative():
    with pytest.raises(ValueError):
        standard_complex(-1)


def test_closure_and_vertex_order():
    K = SimplicialComplex([("b", "a", "c")])
    assert K.vertices == ("a", "b", "c")
    assert ("c", "a") in K and ("a", "c") in K.simplices(1)
    assert downward_closed(K)
    with pytest.raises(ValueError):
        SimplicialComplex([(0, 1)], vertices=[0])


def test_orient_sign():
    K = standard_complex(2)
    assert K.orient((2, 0, 1)) == ((0, 1, 2), 1)
    assert K.orient((1, 0, 2)) == ((0, 1, 2), -1)


def test_union_keeps_sorted_order():
    A = SimplicialComplex([(0, 2)])
    B = SimplicialComplex([(1, 2)])
    assert A.union(B).vertices == (0, 1, 2)


# subdivide

def test_subdivide_examples():
    assert subdivide(standard_complex(0)) == SimplicialComplex([((0,),)])
    assert subdivide(standard_complex(1)).f_vector == (3, 2)
    S = subdivide(standard_complex(2))
    assert S.f_vector == (7, 12, 6) and euler_characteristic(S) == 1


def test_subdivide_vertex_order_dimension_major():
    S = subdivide(standard_complex(2))
    assert S.vertices == ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2))


@pytest.mark.parametrize("name", ["Delta(2)", "Delta(3)", "dDelta(3)", "RP2", "torus"])
def test_subdivide_matches_brute_force(name):
    # DERIVED: every chain of faces, found by testing all subsets of simplices
    K = complex_corpus()[name]
    verts, chains = brute_subdivision(K)
    S = subdivide(K)
    assert {frozenset(v) for v in S.vertices} == verts
    assert {frozenset(frozenset(v) for v in s) for s in S.simplices()} == chains


@pytest.mark.parametrize("name", sorted(complex_corpus()))
def test_subdivide_invariants(name):
    K = complex_corpus()[name]
    S = subdivide(K)
    assert euler_characteristic(S) == euler_characteristic(K)
    assert S.f_vector[K.dim] == K.f_vector[K.dim] * math.factorial(K.dim + 1)
    assert downward_closed(S)


# cone

def test_cone_examples():
    assert cone(SimplicialComplex()).f_vector == (1,)
    two = SimplicialComplex([(0,), (1,)])
    assert cone(two).f_vector == (3, 2)
    C = cone(boundary_complex(2))
    assert C.f_vector == (4, 6, 3) and euler_characteristic(C) == 1


def test_cone_apex_fresh():
    K = SimplicialComplex([("*",)])
    assert "**" in cone(K).vertices
    with pytest.raises(ValueError):
        cone(K, apex="*")


# prism

def test_prism_p0():
    P = prism_complex(0, 1)
    assert is_isomorphic(P.complex, standard_complex(1))


@pytest.mark.parametrize("p,k,fv", [(1, 1, (5, 7, 3)), (1, 2, (10, 18, 9))])
def test_prism_f_vectors(p, k, fv):
    P = prism_complex(p, k)
    assert P.complex.f_vector == fv
    assert is_isomorphic(P.top, standard_complex(p))
    assert is_isomorphic(P.bottom, iterated_subdivision(standard_complex(p), k))
    assert euler_characteristic(P.complex) == 1


def test_prism_12_bottom_has_five_vertices():
    assert len(prism_complex(1, 2).bottom.vertices) == 5


@pytest.mark.parametrize("p,k", [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (3, 1)])
def test_prism_general(p, k):
    P = prism_complex(p, k)
    assert euler_characteristic(P.complex) == 1
    assert P.top.is_subcomplex_of(P.complex) and P.bottom.is_subcomplex_of(P.complex)
    assert is_isomorphic(P.bottom, iterated_subdivision(standard_complex(p), k))
    assert P.complex.dim == p + 1


# covers and nerves

def test_nerve_examples():
    D = standard_complex(2)
    assert nerve_of_cover(Cover(D, {"U": D})).f_vector == (1,)
    two = Cover(standard_complex(2), {"a": [(0, 1)], "b": [(1, 2)]})
    assert nerve_of_cover(two).f_vector == (2, 1)
    assert is_isomorphic(nerve_of_cover(three_arc_cover()), boundary_complex(2))


def test_nerve_drops_empty_parts():
    D = standard_complex(1)
    cov = Cover(D, [("a", D), ("empty", [])])
    assert nerve_of_cover(cov).vertices == ("a",)


@pytest.mark.parametrize("seed", range(10))
def test_nerve_matches_brute_force(seed):
    rng = random.Random(seed)
    K = random_complex(rng)
    cov = random_cover(rng, K)
    N = nerve_of_cover(cov)
    assert {frozenset(s) for s in N.simplices()} == brute_nerve(cov)


def test_cover_validation():
    K = standard_complex(1)
    with pytest.raises(ValueError):
        Cover(K, {"a": [(0, 2)]})
    with pytest.raises(ValueError):
        Cover(K, [("a", [(0,)]), ("a", [(1,)])])
    cov = Cover(K, {"a": [(0,)], "b": [(1,)]})
    assert not cov.is_covering and cov.uncovered_simplices() == [(0, 1)]
    assert two_arc_cover().is_covering


def test_star_cover_examples():
    assert len(star_cover_of_subdivision(0)) == 1
    assert len(star_cover_of_subdivision(1)) == 3
    assert len(star_cover_of_subdivision(2)) == 7


@pytest.mark.parametrize("p", range(4))
def test_star_cover_nerve_is_subdivision(p):
    cov = star_cover_of_subdivision(p)
    assert cov.is_covering
    assert is_isomorphic(nerve_of_cover(cov), subdivide(standard_complex(p)))


def test_derived_star_cover_nerve_is_K():
    K = boundary_complex(3)
    assert is_isomorphic(nerve_of_cover(derived_star_cover(K)), K)


def test_vertex_star_cover_covers():
    for K in complex_corpus().values():
        assert vertex_star_cover(K).is_covering


def test_isomorphism_helpers():
    K = standard_complex(2).relabel(fn=lambda v: "xyz"[v])
    m = find_isomorphism(standard_complex(2), K)
    assert m is not None and set(m.values()) == {"x", "y", "z"}
    assert not is_isomorphic(standard_complex(2), boundary_complex(2))


def test_disjoint_union_euler():
    K = disjoint_union(boundary_complex(3), standard_complex(1))
    assert euler_characteristic(K) == 3
