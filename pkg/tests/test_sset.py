from itertools import combinations, product

import pytest

from dhomotopy.complexes import Cover, boundary_complex, is_isomorphic, standard_complex, subdivide
from dhomotopy.corpus import random_posets, two_arc_cover
from dhomotopy.hocolim import ru_category
from dhomotopy.sset import (FiniteSimplicialSet, SSimplex, degenerate_words, from_ordered_complex, horn_fillers,
                            nerve_category, normalize_word, poset_category, skeletal_filtration, sphere_model,
                            standard_simplex, terminal_category, wedge_of_spheres)


def chain_poset(n):
    return poset_category(list(range(n)), lambda a, b: a <= b)


# degeneracy words

def test_normalize_word_normal_form():
    # s_i s_j = s_{j+1} s_i for i <= j
    assert normalize_word((0, 0)) == (1, 0)
    assert normalize_word((1, 0)) == (1, 0)
    assert normalize_word((0, 1)) == (2, 0)
    w = normalize_word((0, 2, 1))
    assert list(w) == sorted(w, reverse=True) and len(set(w)) == len(w)


@pytest.mark.parametrize("n,m", [(0, 2), (1, 3), (2, 4)])
def test_degenerate_words_count(n, m):
    # DERIVED: surjections [m] -> [n] correspond to (m-n)-subsets of {0..m-1}
    from math import comb
    assert len(degenerate_words(n, m)) == comb(m, m - n)


# from_ordered_complex

def test_from_ordered_complex_examples():
    assert from_ordered_complex(standard_complex(0)).counts() == (1,)
    assert from_ordered_complex(standard_complex(2)).counts() == (3, 3, 1)
    assert sum(from_ordered_complex(boundary_complex(2)).counts()) == 6


@pytest.mark.parametrize("p", range(4))
def test_standard_simplex_identities(p):
    assert standard_simplex(p).check_identities()


def test_identity_violation_rejected():
    with pytest.raises(ValueError):
        # d_0 d_1 must equal d_0 d_0: faces of the edges disagree
        FiniteSimplicialSet({"a": 0, "b": 0, "e": 1, "f": 1, "g": 1, "t": 2},
                            {"e": ["b", "a"], "f": ["a", "a"], "g": ["b", "b"],
                             "t": [SSimplex("e"), SSimplex("g"), SSimplex("f")]})


def test_face_of_degenerate():
    X = standard_simplex(1)
    x = SSimplex((0, 1), (0,))          # s_0 of the edge, a 2-simplex
    assert X.face(x, 0) == SSimplex((0, 1))
    assert X.face(x, 1) == SSimplex((0, 1))
    assert X.face(x, 2) == SSimplex((0,), (0,))


# nerves

def test_nerve_terminal():
    assert nerve_category(terminal_category()).counts() == (1,)


def test_nerve_of_0_lt_1():
    N = nerve_category(chain_poset(2))
    assert N.counts() == (2, 1)


def test_nerve_ru_two_parts_is_sd_delta1():
    # PAPER: the nerve of R_U is sd of the nerve of the cover; two parts give sd Delta(1)
    cov = Cover(standard_complex(2), {"a": [(0, 1)], "b": [(1, 2)]})
    N = nerve_category(ru_category(cov))
    assert N.counts() == (3, 2)


@pytest.mark.parametrize("n", range(1, 5))
def test_nerve_of_chain_is_simplex(n):
    # DERIVED: N of 0 < 1 < ... < n-1 has the nondegenerate simplices of Delta[n-1]
    N = nerve_category(chain_poset(n))
    assert N.counts() == standard_simplex(n - 1).counts()
    assert N.check_identities()


def test_nerve_of_face_poset_counts_chains():
    # nondegenerate n-simplices of N(face poset of sigma) = strict n-chains = n-simplices of sd sigma
    K = standard_complex(2)
    faces = list(K.simplices())
    P = poset_category(faces, lambda a, b: set(a) <= set(b))
    assert nerve_category(P).counts() == subdivide(K).f_vector


@pytest.mark.parametrize("seed", range(5))
def test_nerve_random_posets_identities(seed):
    for C in random_posets(3, seed):
        assert nerve_category(C).check_identities(3)


# skeletal filtration

def test_filtration_counts():
    assert skeletal_filtration(standard_simplex(2)).counts() == (3, 3, 1)
    assert skeletal_filtration(sphere_model(3)).counts() == (1, 0, 0, 1)
    assert skeletal_filtration(nerve_category(chain_poset(3))).counts() == (3, 3, 1)


def test_filtration_attaching_faces():
    F = skeletal_filtration(standard_simplex(2))
    assert F.attaching[(0, 1, 2)] == (SSimplex((1, 2)), SSimplex((0, 2)), SSimplex((0, 1)))


def test_wedge_counts():
    assert wedge_of_spheres(4, 2).counts() == (1, 0, 4)
    assert wedge_of_spheres(2, 1).check_identities()


def test_skeleton_and_subset():
    X = standard_simplex(2)
    assert X.skeleton(1).counts() == (3, 3)
    assert X.is_simplicial_subset(X.skeleton(1))


# horn fillers

def test_horn_in_point_gives_degenerate_filler():
    X = standard_simplex(0)
    v = SSimplex((0,), (0,))
    fills = horn_fillers(X, 2, 1, {0: v, 2: v})
    assert fills == [SSimplex((0,), (1, 0))]


def test_inner_horn_in_nerve_unique():
    C = chain_poset(3)
    N = nerve_category(C)
    fills = horn_fillers(N, 2, 1, {0: SSimplex(("arr", (1, 2))), 2: SSimplex(("arr", (0, 1)))})
    assert fills == [SSimplex(("arr", (0, 1), (1, 2)))]


def test_horn_in_hollow_triangle_has_no_filler():
    X = from_ordered_complex(boundary_complex(2))
    assert horn_fillers(X, 2, 1, {0: (1, 2), 2: (0, 1)}) == []


def test_incompatible_horn_rejected():
    X = from_ordered_complex(boundary_complex(2))
    with pytest.raises(ValueError, match="incompatible horn"):
        horn_fillers(X, 2, 1, {0: (1, 2), 2: (0, 2)})


def _all_horns(X, p, k):
    """Every compatible assignment of (p-1)-simplices to the faces i != k."""
    want = [i for i in range(p + 1) if i != k]
    for ys in product(X.simplices(p - 1), repeat=p):
        horn = dict(zip(want, ys))
        if all(X.face(horn[j], i) == X.face(horn[i], j - 1) for i, j in combinations(want, 2)):
            yield horn


@pytest.mark.parametrize("seed", range(4))
def test_inner_horns_fill_uniquely_in_random_nerves(seed):
    # DERIVED: nerves of categories fill inner horns uniquely (p <= 3)
    for C in random_posets(2, seed, size=(3, 4)):
        N = nerve_category(C)
        for p in (2, 3):
            for k in range(1, p):
                for horn in _all_horns(N, p, k):
                    assert len(horn_fillers(N, p, k, horn)) == 1


def test_outer_horn_can_fail_in_nerve():
    # Lambda^2_0 with d_1 = 0->2 and d_2 = 0->1 needs an arrow 1->2, absent in the poset 0<1, 0<2
    C = poset_category([0, 1, 2], lambda a, b: a == b or a == 0)
    N = nerve_category(C)
    assert horn_fillers(N, 2, 0, {1: SSimplex(("arr", (0, 2))), 2: SSimplex(("arr", (0, 1)))}) == []


def test_horn_arguments_checked():
    X = standard_simplex(1)
    with pytest.raises(ValueError):
        horn_fillers(X, 1, 2, {0: (0,)})
    with pytest.raises(ValueError):
        horn_fillers(X, 2, 1, {0: (0, 1)})


def test_category_axioms_checked():
    from dhomotopy.sset import SmallCategory
    with pytest.raises(ValueError):
        SmallCategory(["x"], {"f": ("x", "y")}, {"x": "f"}, {})
