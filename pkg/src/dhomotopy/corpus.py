"""Fixture complexes, simplicial sets and covers used by tests, demos and the CLI."""

from __future__ import annotations

import random
from itertools import combinations

from .complexes import Cover, SimplicialComplex, boundary_complex, standard_complex
from .sset import FiniteSimplicialSet, SmallCategory, poset_category, wedge_of_spheres


def projective_plane() -> SimplicialComplex:
    """The 6-vertex real projective plane."""
    tris = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
            (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    return SimplicialComplex(tris)


def torus() -> SimplicialComplex:
    """The 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return SimplicialComplex(tris)


def _grid_surface(n: int, flip: bool) -> SimplicialComplex:
    def v(i, j):
        j %= n
        if i == n:
            i, j = 0, ((-j) % n if flip else j)
        return i * n + j

    tris = []
    for i in range(n):
        for j in range(n):
            a, b, c, d = v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1)
            tris.append((a, b, d))
            tris.append((a, c, d))
    return SimplicialComplex(tris)


def klein_bottle(n: int = 3) -> SimplicialComplex:
    """Klein bottle from an n x n grid of squares with one pair of sides glued flipped."""
    return _grid_surface(n, flip=True)


def circle(n: int = 6) -> SimplicialComplex:
    return SimplicialComplex([(i, (i + 1) % n) for i in range(n)])


def two_arc_cover(n: int = 6) -> Cover:
    """Two arcs, each covering half of an n-cycle; they meet in two vertices."""
    K = circle(n)
    h = n // 2
    a = [(i, (i + 1) % n) for i in range(h)]
    b = [(i, (i + 1) % n) for i in range(h, n)]
    return Cover(K, [("a", K.subcomplex(a)), ("b", K.subcomplex(b))])


def three_arc_cover(n: int = 6) -> Cover:
    """Three arcs of an n-cycle meeting pairwise in single vertices, never all three."""
    K = circle(n)
    t = n // 3
    parts = []
    for k, name in enumerate("abc"):
        end = n if k == 2 else (k + 1) * t
        parts.append((name, K.subcomplex([(i, (i + 1) % n) for i in range(k * t, end)])))
    return Cover(K, parts)


def surfaces() -> dict:
    return {"RP2": projective_plane(), "torus": torus(), "klein": klein_bottle()}


def simplex_corpus(max_n: int = 4) -> dict:
    out = {}
    for n in range(max_n + 1):
        out[f"Delta({n})"] = standard_complex(n)
    for n in range(1, max_n + 1):
        out[f"dDelta({n})"] = boundary_complex(n)
    return out


def complex_corpus(max_n: int = 4) -> dict:
    out = simplex_corpus(max_n)
    out.update(surfaces())
    return out


def random_poset(rng: random.Random, n: int, density: float = 0.4) -> SmallCategory:
    """Random partial order on 0..n-1 refining the natural order, transitively closed."""
    rel = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < density}
    for k in range(n):
        for a in range(n):
            for b in range(n):
                if (a, k) in rel and (k, b) in rel:
                    rel.add((a, b))
    return poset_category(list(range(n)), lambda a, b: a == b or (a, b) in rel)


def random_posets(count: int = 10, seed: int = 0, size: tuple = (3, 6)) -> list:
    rng = random.Random(seed)
    return [random_poset(rng, rng.randint(*size)) for _ in range(count)]


def random_complex(rng: random.Random, n_vertices: int = 8, n_max: int = 10, max_dim: int = 3) -> SimplicialComplex:
    """Closure of a few random simplices on at most ``n_vertices`` vertices."""
    nv = rng.randint(2, n_vertices)
    gens = []
    for _ in range(rng.randint(1, n_max)):
        d = rng.randint(0, min(max_dim, nv - 1))
        gens.append(tuple(sorted(rng.sample(range(nv), d + 1))))
    return SimplicialComplex(gens)


def random_subcomplex(rng: random.Random, K: SimplicialComplex, keep: float = 0.5) -> SimplicialComplex:
    maxi = K.maximal_simplices()
    chosen = [s for s in maxi if rng.random() < keep]
    faces = [f for s in maxi if s not in chosen for f in combinations(s, max(1, len(s) - 1)) if rng.random() < keep / 2]
    return K.subcomplex(chosen + faces) if (chosen or faces) else SimplicialComplex()


def random_splitting(rng: random.Random, K: SimplicialComplex) -> tuple:
    """Two subcomplexes whose union is K, made from a random split of the maximal simplices."""
    maxi = list(K.maximal_simplices())
    one, two = [], []
    for s in maxi:
        r = rng.random()
        if r < 0.4:
            one.append(s)
        elif r < 0.8:
            two.append(s)
        else:
            one.append(s)
            two.append(s)
    if not one:
        one.append(maxi[0])
    if not two:
        two.append(maxi[-1])
    return K.subcomplex(one), K.subcomplex(two)


def random_cover(rng: random.Random, K: SimplicialComplex, max_parts: int = 5) -> Cover:
    """A covering family of at most ``max_parts`` subcomplexes of K."""
    maxi = list(K.maximal_simplices())
    k = rng.randint(1, min(max_parts, len(maxi)))
    buckets = [[] for _ in range(k)]
    for i, s in enumerate(maxi):
        buckets[i % k if i < k else rng.randrange(k)].append(s)
        if rng.random() < 0.3:
            buckets[rng.randrange(k)].append(s)
    return Cover(K, [(f"U{i}", K.subcomplex(b)) for i, b in enumerate(buckets)])


def hawaiian_stage(k: int, n: int) -> FiniteSimplicialSet:
    """Finite stage of the n-dimensional Hawaiian earring: k n-spheres sharing a point."""
    return wedge_of_spheres(k, n)


def fixture_files() -> dict:
    """File name -> text of every shipped fixture, in the CLI's input formats."""
    from . import formats as fm

    def stem(name):
        return name.replace("(", "").replace(")", "").lower()

    out = {"point.txt": fm.write_complex(standard_complex(0), "a single vertex")}
    for name, K in complex_corpus().items():
        out[f"{stem(name)}.txt"] = fm.write_complex(K, name)
    for k in (1, 2, 3, 10):
        for n in (1, 2, 3):
            out[f"hawaiian_{k}x{n}.txt"] = fm.write_sset(hawaiian_stage(k, n), f"wedge of {k} {n}-spheres")
    out["circle_two_arcs.cover"] = fm.write_cover(two_arc_cover(), "6-cycle covered by two arcs")
    out["circle_three_arcs.cover"] = fm.write_cover(three_arc_cover(), "6-cycle covered by three arcs")
    return out
