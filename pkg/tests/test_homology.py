import random

import pytest

from dhomotopy.complexes import (SimplicialComplex, boundary_complex, cone, disjoint_union, standard_complex,
                                 subdivide)
from dhomotopy.corpus import (circle, complex_corpus, hawaiian_stage, klein_bottle, projective_plane,
                              random_complex, random_posets, random_splitting, random_subcomplex, torus)
from dhomotopy.homology import (ChainMap, Homology, HomologyGroup, IntegerChainComplex, cellular_chain_complex,
                                chain_complex, direct_sum, format_homology, homology, identity_map,
                                induced_on_homology, is_isomorphism, label_map, last_vertex_map, mayer_vietoris,
                                pair_long_exact_sequence, sd_chain_map)
from dhomotopy.sset import from_ordered_complex, nerve_category, sphere_model, standard_simplex
from dhomotopy.verify import is_identity_on, same_groups

from oracles import as_pairs, sympy_homology

Z = HomologyGroup(1)
O = HomologyGroup()


# chain complexes

def test_chain_complex_point():
    C = chain_complex(standard_complex(0))
    assert C.ranks == (1,)
    assert C.is_differential()


def test_chain_complex_edge_boundary():
    C = chain_complex(standard_complex(1))
    # d[01] = [1] - [0]
    assert C.boundary(1, {C.index(1, (0, 1)): 1}) == {C.index(0, (1,)): 1, C.index(0, (0,)): -1}


def test_relative_chain_complex_ranks():
    C = chain_complex(standard_complex(1), boundary_complex(1))
    assert C.ranks == (0, 1)


def test_relative_requires_subcomplex():
    with pytest.raises(ValueError):
        chain_complex(standard_complex(1), SimplicialComplex([(0, 5)]))


@pytest.mark.parametrize("seed", range(100))
def test_boundary_squares_to_zero(seed):
    K = random_complex(random.Random(seed))
    assert chain_complex(K).is_differential()


def test_non_differential_rejected():
    with pytest.raises(ValueError):
        IntegerChainComplex([[0], [0], [0]], [[{}], [{0: 1}], [{0: 1}]])


# homology against sympy

def test_homology_examples():
    assert homology(standard_complex(0)) == [Z]
    assert homology(boundary_complex(3)) == [Z, O, Z]
    assert homology(projective_plane()) == [Z, HomologyGroup(0, (2,)), O]


@pytest.mark.parametrize("name", sorted(complex_corpus()))
def test_corpus_homology_matches_sympy(name):
    K = complex_corpus()[name]
    C = chain_complex(K)
    assert as_pairs(homology(C)) == sympy_homology(C)


def test_known_surfaces():
    assert homology(torus()) == [Z, HomologyGroup(2), Z]
    assert homology(klein_bottle()) == [Z, HomologyGroup(1, (2,)), O]


@pytest.mark.parametrize("seed", range(30))
def test_random_homology_matches_sympy(seed):
    rng = random.Random(seed)
    K = random_complex(rng)
    L = random_subcomplex(rng, K)
    for C in (chain_complex(K), chain_complex(K, L)):
        assert as_pairs(homology(C)) == sympy_homology(C)


@pytest.mark.parametrize("seed", range(10))
def test_bulk_and_plain_reductions_agree(seed):
    rng = random.Random(seed)
    K = subdivide(random_complex(rng, n_vertices=7))
    C = chain_complex(K)
    Hb, Hp = Homology(C, bulk=True), Homology(C, bulk=False)
    assert Hb.groups() == Hp.groups()
    for n in range(C.top + 1):
        gens = Hb.generators(n)
        for k, z in enumerate(gens):
            assert C.boundary(n, z) == {}
            coords = Hb.coordinates(n, z)
            assert coords == [1 if i == k else 0 for i in range(len(gens))]


def test_bulk_reduction_on_rp2_subdivision():
    C = chain_complex(subdivide(projective_plane()))
    assert Homology(C, bulk=True).groups() == [Z, HomologyGroup(0, (2,)), O]


def test_generators_and_coordinates_torsion():
    C = chain_complex(projective_plane())
    H = Homology(C)
    (z,) = H.generators(1)
    assert C.boundary(1, z) == {}
    assert H.coordinates(1, z) == [1]
    two_z = {i: 2 * v for i, v in z.items()}
    assert H.coordinates(1, two_z)[0] % 2 == 0


def test_homology_group_validation():
    with pytest.raises(ValueError):
        HomologyGroup(0, (4, 2))
    assert direct_sum(HomologyGroup(0, (2,)), HomologyGroup(0, (3,))) == HomologyGroup(0, (6,))
    assert str(HomologyGroup(2, (2, 4))) == "Z^2 + Z/2 + Z/4"


def test_format_homology():
    assert format_homology(homology(boundary_complex(3))) == ["H_0 = Z", "H_2 = Z"]


def test_additivity():
    a, b = projective_plane(), boundary_complex(2)
    H = homology(disjoint_union(a, b))
    Ha, Hb = homology(a), homology(b)
    n = max(len(Ha), len(Hb))
    Ha, Hb = Ha + [O] * (n - len(Ha)), Hb + [O] * (n - len(Hb))
    assert same_groups(H, [direct_sum(x, y) for x, y in zip(Ha, Hb)])


def test_homology_of_cone_is_point():
    assert same_groups(homology(cone(torus())), [Z])


# induced maps

def test_identity_induces_identity():
    C = chain_complex(torus())
    mats = induced_on_homology(identity_map(C))
    H = homology(C)
    assert all(is_identity_on(mats[n], H[n]) for n in range(3))


def test_inclusion_boundary_into_simplex():
    CL, CK = chain_complex(boundary_complex(2)), chain_complex(standard_complex(2))
    mats = induced_on_homology(label_map(CL, CK))
    assert mats[1] == []                       # H_1 : Z -> 0
    assert mats[0] == [[1]]


def test_chain_map_must_commute():
    C = chain_complex(standard_complex(1))
    with pytest.raises(ValueError):
        ChainMap(C, C, [[{0: 1}, {1: 1}], [{}]])     # kills the edge but not its boundary
    ChainMap(C, C, [[{0: 1}, {0: 1}], [{}]])        # the constant map is fine


def test_is_isomorphism_torsion():
    g = HomologyGroup(0, (3,))
    assert is_isomorphism([[2]], g, g)
    assert not is_isomorphism([[3]], g, g)


# exact sequences

def test_les_trivial_pair():
    K = torus()
    assert pair_long_exact_sequence(K, K).exact


@pytest.mark.parametrize("p", [2, 3])
def test_les_simplex_boundary(p):
    rep = pair_long_exact_sequence(standard_complex(p), boundary_complex(p))
    assert rep.exact
    node = next(n for n in rep.nodes if n.name == "H(K,L)" and n.degree == p)
    assert node.group == Z
    # connecting map H_p(K,L) -> H_{p-1}(L) is an isomorphism Z -> Z
    i = rep.nodes.index(node)
    assert rep.maps[i] in ([[1]], [[-1]])


def test_les_edge_in_triangle():
    assert pair_long_exact_sequence(standard_complex(2), SimplicialComplex([(0, 1)])).exact


def test_les_detects_wrong_map():
    from dhomotopy.homology import check_exact_at
    # Z --2--> Z --0--> 0 is not exact at the middle
    assert not check_exact_at([[2]], [], (0,), (0,), ())
    assert check_exact_at([[1]], [], (0,), (0,), ())


def test_mv_disjoint_is_additivity():
    K1, K2 = standard_complex(1), SimplicialComplex([(5, 6)])
    rep = mayer_vietoris(K1, K2)
    assert rep.exact


def test_mv_circle_from_arcs():
    K = circle(6)
    K1 = K.subcomplex([(0, 1), (1, 2), (2, 3)])
    K2 = K.subcomplex([(3, 4), (4, 5), (0, 5)])
    rep = mayer_vietoris(K1, K2)
    assert rep.exact
    assert [n.group for n in rep.nodes if n.name == "H(K)"] == [Z, Z]


def test_mv_torus_from_cylinders():
    T = torus()
    tris = T.simplices(2)
    K1 = T.subcomplex(tris[:7])
    K2 = T.subcomplex(tris[7:])
    rep = mayer_vietoris(K1, K2)
    assert rep.exact
    assert [n.group for n in rep.nodes if n.name == "H(K)"] == [Z, HomologyGroup(2), Z]


@pytest.mark.parametrize("seed", range(25))
def test_random_exact_sequences(seed):
    rng = random.Random(1000 + seed)
    K = random_complex(rng)
    assert pair_long_exact_sequence(K, random_subcomplex(rng, K)).exact
    assert mayer_vietoris(*random_splitting(rng, K)).exact


# cellular chains

def test_cellular_point():
    X = standard_simplex(0)
    assert cellular_chain_complex(X).ranks == chain_complex(X).ranks


def test_cellular_delta2():
    X = standard_simplex(2)
    C = cellular_chain_complex(X)
    assert C.ranks == (3, 3, 1)
    assert same_groups(homology(C), homology(chain_complex(X)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cellular_sphere_model(n):
    C = cellular_chain_complex(sphere_model(n))
    assert all(not C.column(d, j) for d in range(1, C.top + 1) for j in range(C.ranks[d]))
    assert homology(C) == [Z] + [O] * (n - 1) + [Z]


@pytest.mark.parametrize("k,n", [(1, 1), (3, 2), (10, 3)])
def test_hawaiian_stage(k, n):
    assert homology(chain_complex(hawaiian_stage(k, n)))[n] == HomologyGroup(k)


@pytest.mark.parametrize("name", sorted(complex_corpus()))
def test_cellular_equals_simplicial(name):
    X = from_ordered_complex(complex_corpus()[name])
    assert same_groups(homology(cellular_chain_complex(X)), homology(chain_complex(X)))


def test_cellular_random_nerves():
    for C in random_posets(10, seed=3):
        X = nerve_category(C)
        assert same_groups(homology(cellular_chain_complex(X)), homology(chain_complex(X)))


# subdivision chain maps

def test_sd_vertex():
    f = sd_chain_map(standard_complex(0))
    assert f.image(0, 0) == {0: 1}


def test_sd_edge():
    K = standard_complex(1)
    S = subdivide(K)
    f = sd_chain_map(K, S)
    CS = f.target
    img = {CS.basis(1)[i]: v for i, v in f.image(1, 0).items()}
    # Sd[01] = [{01},{1}] - [{01},{0}], written in sd order (barycenter last)
    assert img == {((1,), (0, 1)): -1, ((0,), (0, 1)): 1}


def test_sd_triangle_has_six_terms():
    K = standard_complex(2)
    f = sd_chain_map(K)
    img = f.image(2, 0)
    assert len(img) == 6 and set(map(abs, img.values())) == {1}


def test_last_vertex_on_edge():
    K = standard_complex(1)
    g = last_vertex_map(K)
    CS, CK = g.source, g.target
    images = {CS.basis(0)[j]: {CK.basis(0)[i]: v for i, v in g.image(0, j).items()} for j in range(3)}
    assert images == {((0,),): {(0,): 1}, ((1,),): {(1,): 1}, ((0, 1),): {(1,): 1}}


def test_last_vertex_on_point_is_identity():
    g = last_vertex_map(standard_complex(0))
    assert g.image(0, 0) == {0: 1}


@pytest.mark.parametrize("K", [boundary_complex(2), boundary_complex(3), projective_plane(), torus()],
                         ids=["dD2", "dD3", "RP2", "torus"])
def test_last_vertex_after_sd_is_identity_on_homology(K):
    S = subdivide(K)
    f, g = sd_chain_map(K, S), last_vertex_map(K, S)
    assert f.commutes() and g.commutes()
    mats = induced_on_homology(g.compose(f))
    H = homology(K)
    assert all(is_identity_on(mats[n], H[n]) for n in range(len(H)))
