import random

import pytest

from dhomotopy.complexes import (Cover, SimplicialComplex, boundary_complex, nerve_of_cover, standard_complex,
                                 subdivide, vertex_star_cover)
from dhomotopy.corpus import complex_corpus, random_complex, random_cover, three_arc_cover, two_arc_cover
from dhomotopy.hocolim import (blowup_total_complex, bru_chain_complex, bru_isomorphism, cover_diagram,
                               projection_to_base, ru_category, verify_segal)
from dhomotopy.homology import HomologyGroup, chain_complex, homology, induced_on_homology
from dhomotopy.verify import is_identity_on, same_groups

from oracles import as_pairs, naive_blowup, normalize_blowup, sympy_homology

Z = HomologyGroup(1)
O = HomologyGroup()


def one_part(K):
    return Cover(K, {"U": K})


def overlap_cover():
    K = standard_complex(2)
    return Cover(K, {"a": [(0, 1, 2)], "b": [(1, 2)]})


def non_identity_arrows(cat):
    ids = set(cat.identities.values())
    return [f for f in cat.arrows if f not in ids]


# R_U

def test_ru_one_part_is_terminal():
    cat = ru_category(one_part(standard_complex(2)))
    assert len(cat.objects) == 1 and not non_identity_arrows(cat)


def test_ru_two_parts():
    cat = ru_category(overlap_cover())
    assert len(cat.objects) == 3 and len(non_identity_arrows(cat)) == 2


def test_ru_three_arcs():
    cat = ru_category(three_arc_cover())
    assert len(cat.objects) == 6 and len(non_identity_arrows(cat)) == 6


def test_cover_diagram_invariants():
    rng = random.Random(4)
    for _ in range(10):
        K = random_complex(rng)
        D = cover_diagram(random_cover(rng, K))
        for s in D.objects:
            assert len(D.parts[s]) > 0
            for t in D.objects:
                if set(s) >= set(t):
                    assert D.parts[s].is_subcomplex_of(D.parts[t])
        for ch in D.chains():
            assert all(set(a) > set(b) for a, b in zip(ch, ch[1:]))


# B R_U

def test_bru_examples():
    C = bru_chain_complex(one_part(standard_complex(1)))
    assert C.ranks == (1,)
    C = bru_chain_complex(overlap_cover())
    assert C.ranks == (3, 2) and same_groups(homology(C), [Z])
    assert homology(bru_chain_complex(three_arc_cover())) == [Z, Z]


@pytest.mark.parametrize("seed", range(10))
def test_bru_isomorphic_to_sd_nerve(seed):
    rng = random.Random(seed)
    cov = random_cover(rng, random_complex(rng))
    iso = bru_isomorphism(cov)
    assert iso.ok
    assert iso.source.ranks == chain_complex(subdivide(nerve_of_cover(cov))).ranks


# blowup

@pytest.mark.parametrize("seed", range(15))
def test_blowup_matches_naive_construction(seed):
    # DERIVED: label-by-label assembly of d_h + (-1)^p d_v
    rng = random.Random(100 + seed)
    cov = random_cover(rng, random_complex(rng))
    B = blowup_total_complex(cov)
    got = normalize_blowup(B.total)
    want = naive_blowup(cov)
    for n in set(got) | set(want):
        assert got.get(n, {}) == want.get(n, {})


@pytest.mark.parametrize("seed", range(15))
def test_bicomplex_identities(seed):
    rng = random.Random(200 + seed)
    cov = random_cover(rng, random_complex(rng))
    assert all(blowup_total_complex(cov).check_bicomplex().values())


def test_blowup_one_part_is_base():
    K = boundary_complex(3)
    B = blowup_total_complex(one_part(K))
    C = chain_complex(K)
    assert B.total.ranks == C.ranks
    assert homology(B.total) == homology(C)
    for n in range(1, C.top + 1):
        for j in range(C.ranks[n]):
            got = {B.total.basis(n - 1)[i][1]: v for i, v in B.total.column(n, j).items()}
            want = {C.basis(n - 1)[i]: v for i, v in C.column(n, j).items()}
            assert B.total.basis(n)[j][1] == C.basis(n)[j] and got == want


def test_blowup_two_arcs():
    assert homology(blowup_total_complex(two_arc_cover()).total) == [Z, Z]


def test_blowup_vertex_star_of_triangle():
    cov = vertex_star_cover(standard_complex(2))
    assert len(cov) == 3
    assert same_groups(homology(blowup_total_complex(cov).total), [Z, O, O])


def test_blowup_bidegree():
    B = blowup_total_complex(two_arc_cover())
    for n in range(B.total.top + 1):
        for lab in B.total.basis(n):
            p, q = B.bidegree(lab)
            assert p + q == n


@pytest.mark.parametrize("seed", range(10))
def test_blowup_homology_matches_sympy(seed):
    rng = random.Random(300 + seed)
    cov = random_cover(rng, random_complex(rng, n_vertices=6))
    C = blowup_total_complex(cov).total
    assert as_pairs(homology(C)) == sympy_homology(C)


def test_non_covering_rejected():
    cov = Cover(standard_complex(1), {"a": [(0,)], "b": [(1,)]})
    with pytest.raises(ValueError):
        blowup_total_complex(cov)


@pytest.mark.parametrize("seed", range(5))
def test_total_homology_invariant_under_permuting_parts(seed):
    rng = random.Random(400 + seed)
    K = random_complex(rng)
    cov = random_cover(rng, K)
    names = list(cov.names)
    rng.shuffle(names)
    permuted = Cover(K, [(f"V{i}", cov.part(n)) for i, n in enumerate(names)])
    assert homology(blowup_total_complex(cov).total) == homology(blowup_total_complex(permuted).total)


# projection

def test_projection_one_part_is_identity():
    K = standard_complex(2)
    pr = projection_to_base(one_part(K))
    for n, m in enumerate(pr.maps):
        assert m == {j: {j: 1} for j in range(pr.source.ranks[n])}


def test_projection_two_arcs_identity_on_homology():
    pr = projection_to_base(two_arc_cover())
    mats = induced_on_homology(pr)
    H = homology(pr.target)
    assert all(m in ([[1]], [[-1]]) for m in mats)
    assert all(is_identity_on(mats[n], H[n]) or mats[n] == [[-1]] for n in range(2))


def test_projection_kills_higher_chains():
    cov = vertex_star_cover(boundary_complex(2))
    B = blowup_total_complex(cov)
    pr = projection_to_base(B)
    for n, m in enumerate(pr.maps):
        for j in m:
            assert len(B.total.basis(n)[j][0]) == 1


def test_projection_star_cover_iso():
    assert verify_segal(vertex_star_cover(standard_complex(2))).passed


# verify_segal

def test_segal_one_part():
    rep = verify_segal(one_part(boundary_complex(2)))
    assert rep.passed and rep.source_groups == rep.target_groups


@pytest.mark.parametrize("name", sorted(complex_corpus()))
def test_segal_vertex_star_covers(name):
    assert verify_segal(vertex_star_cover(complex_corpus()[name])).passed


@pytest.mark.parametrize("cov", [two_arc_cover(), three_arc_cover()], ids=["two", "three"])
def test_segal_arc_covers(cov):
    rep = verify_segal(cov)
    assert rep.passed
    assert [str(g) for g in rep.target_groups] == ["Z", "Z"]
    assert all("PASS" in line for line in rep.lines())


def test_segal_rejects_non_covering():
    K = boundary_complex(2)
    with pytest.raises(ValueError):
        verify_segal(Cover(K, {"a": [(0, 1)], "b": [(1, 2)]}))
