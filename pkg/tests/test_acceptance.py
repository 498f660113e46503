"""Acceptance criteria 1-10, each timed against its budget.

Every criterion prints one ``PASS``/``FAIL`` line; the lines are repeated in
the pytest terminal summary. Run directly (``python3 tests/test_acceptance.py``)
to get just the ten lines.
"""

import math
import random
import sys
import time

import pytest

from dhomotopy.complexes import (boundary_complex, euler_characteristic, is_isomorphic, iterated_subdivision,
                                 prism_complex, standard_complex, subdivide, vertex_star_cover)
from dhomotopy.corpus import (complex_corpus, hawaiian_stage, klein_bottle, projective_plane, random_complex,
                              random_cover, random_posets, random_splitting, random_subcomplex, three_arc_cover,
                              torus, two_arc_cover)
from dhomotopy.hocolim import bru_isomorphism, verify_segal
from dhomotopy.homology import (HomologyGroup, cellular_chain_complex, chain_complex, homology,
                                induced_on_homology, last_vertex_map, mayer_vietoris, pair_long_exact_sequence,
                                sd_chain_map)
from dhomotopy.sset import from_ordered_complex, nerve_category
from dhomotopy.verify import is_identity_on, same_groups, suite_smooth

Z = HomologyGroup(1)
O = HomologyGroup()

RESULTS = {}


def c1():
    homology(standard_complex(0))            # warm-up: first call pays for imports and caches
    t = time.perf_counter()
    H = homology(standard_complex(0))
    dt = time.perf_counter() - t
    return H == [Z], f"H(point) = {[str(g) for g in H]}", dt


def c2():
    bad = []
    for p in range(1, 7):
        H = homology(chain_complex(standard_complex(p), boundary_complex(p)))
        if H != [O] * p + [Z]:
            bad.append((p, [str(g) for g in H]))
    return not bad, f"p = 1..6, mismatches {bad}", None


def c3():
    items = {}
    for n in range(5):
        items[f"Delta[{n}]"] = standard_complex(n)
    for n in range(1, 5):
        items[f"dDelta[{n}]"] = boundary_complex(n)
    items.update({"RP2": projective_plane(), "torus": torus(), "klein": klein_bottle()})
    spaces = [(k, from_ordered_complex(K)) for k, K in items.items()]
    spaces += [(f"poset{i}", nerve_category(C)) for i, C in enumerate(random_posets(10, seed=0))]
    bad = [k for k, X in spaces if not same_groups(homology(chain_complex(X)), homology(cellular_chain_complex(X)))]
    return not bad, f"{len(spaces)} spaces, mismatches {bad}", None


def c4():
    bad = []
    for name, K in complex_corpus().items():
        S = subdivide(K)
        sd, lv = sd_chain_map(K, S), last_vertex_map(K, S)
        H = homology(K)
        mats = induced_on_homology(lv.compose(sd))
        d = K.dim
        ok = (sd.commutes() and all(is_identity_on(mats[n], H[n]) for n in range(len(H)))
              and euler_characteristic(S) == euler_characteristic(K)
              and S.f_vector[d] == K.f_vector[d] * math.factorial(d + 1))
        if not ok:
            bad.append(name)
    return not bad, f"{len(complex_corpus())} complexes, failures {bad}", None


def c5():
    les = mv = 0
    for seed in range(25):
        rng = random.Random(seed)
        K = random_complex(rng, n_vertices=8)
        les += pair_long_exact_sequence(K, random_subcomplex(rng, K)).exact
        mv += mayer_vietoris(*random_splitting(rng, K)).exact
    return les == mv == 25, f"LES exact {les}/25, MV exact {mv}/25", None


def c6():
    covers = [(f"stars({n})", vertex_star_cover(K)) for n, K in complex_corpus().items()]
    covers += [("two arcs", two_arc_cover()), ("three arcs", three_arc_cover())]
    bad = [n for n, cov in covers if not verify_segal(cov).passed]
    return not bad, f"{len(covers)} covers, failures {bad}", None


def c7():
    ok = 0
    for seed in range(10):
        rng = random.Random(seed)
        ok += bru_isomorphism(random_cover(rng, random_complex(rng))).ok
    return ok == 10, f"basis isomorphism on {ok}/10 random covers", None


def c8():
    bad = []
    for k in range(1, 11):
        for n in range(1, 4):
            H = homology(chain_complex(hawaiian_stage(k, n)))
            if H != [Z] + [O] * (n - 1) + [HomologyGroup(k)]:
                bad.append((k, n))
    return not bad, f"k <= 10, n <= 3, failures {bad}", None


def c9():
    R = suite_smooth(seed=0, samples=1000)
    failed = [c.name for c in R.checks if c.status != "pass"]
    fd = max(max(c.measured) if isinstance(c.measured, list) else c.measured
             for c in R.checks if c.name.startswith("fd"))
    eq = next(c.measured for c in R.checks if "equivariance" in c.name)
    rt = next(c.measured for c in R.checks if "round trip" in c.name)
    return not failed, (f"{len(R.checks)} checks, failed {failed}; round trip {rt:.1e}, "
                        f"equivariance {eq['max_error']:.1e}, worst fd mismatch {fd:.1e}"), None


def c10():
    out = []
    for (p, k), fv in {(1, 1): (5, 7, 3), (1, 2): (10, 18, 9)}.items():
        P = prism_complex(p, k)
        out.append(P.complex.f_vector == fv and is_isomorphic(P.top, standard_complex(p))
                   and is_isomorphic(P.bottom, iterated_subdivision(standard_complex(p), k)))
    return all(out), f"prism(1,1) {prism_complex(1, 1).complex.f_vector}, prism(1,2) " \
                     f"{prism_complex(1, 2).complex.f_vector}", None


CRITERIA = [
    (1, "dimension axiom", c1, 0.010),
    (2, "relative spheres", c2, 1.0),
    (3, "cellular comparison", c3, 5.0),
    (4, "subdivision", c4, 5.0),
    (5, "exactness suites", c5, 10.0),
    (6, "Segal desk-scale", c6, 10.0),
    (7, "B R_U identity", c7, None),
    (8, "Hawaiian finite stages", c8, None),
    (9, "numerics", c9, 30.0),
    (10, "prism complexes", c10, None),
]


def evaluate(num, name, fn, budget):
    t = time.perf_counter()
    ok, detail, measured = fn()
    dt = time.perf_counter() - t if measured is None else measured
    in_time = budget is None or dt < budget
    limit = "no limit" if budget is None else f"limit {budget:g} s"
    status = "PASS" if ok and in_time else "FAIL"
    line = f"{status} criterion {num:2d} ({name}): {detail}; {dt:.3f} s ({limit})"
    RESULTS[num] = line
    return ok, in_time, line


@pytest.mark.parametrize("num,name,fn,budget", CRITERIA, ids=[f"c{c[0]}" for c in CRITERIA])
def test_criterion(num, name, fn, budget):
    ok, in_time, line = evaluate(num, name, fn, budget)
    print(line)
    assert ok, line
    assert in_time, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, _, line in results:
        print(line)
    sys.exit(0 if all(a and b for a, b, _ in results) else 1)
