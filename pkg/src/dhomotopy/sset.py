"""Finite simplicial sets, small categories and their nerves.

A simplex is a generator (nondegenerate simplex) together with a degeneracy
word kept in normal form s_{i1} ... s_{ir}, i1 > ... > ir. Face maps are
evaluated by pushing d_i through the word with the simplicial identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from .complexes import SimplicialComplex, vertex_key


class SSimplex(NamedTuple):
    gen: Hashable
    word: tuple = ()

    @property
    def degenerate(self) -> bool:
        return bool(self.word)

    def __str__(self):
        pre = "".join(f"s{i}" for i in self.word)
        return f"{pre}.{self.gen}" if pre else str(self.gen)


def normalize_word(word: Iterable[int]) -> tuple:
    """Rewrite a degeneracy word (leftmost applied last) into strictly descending form."""
    w = list(word)
    changed = True
    while changed:
        changed = False
        for k in range(len(w) - 1):
            a, b = w[k], w[k + 1]
            if a <= b:
                # s_a s_b = s_{b+1} s_a for a <= b
                w[k], w[k + 1] = b + 1, a
                changed = True
    return tuple(w)


def degenerate_words(n: int, m: int) -> list:
    """All normal-form words taking an n-simplex to dimension m (r-subsets of 0..m-1)."""
    r = m - n
    if r < 0:
        return []
    return [tuple(sorted(c, reverse=True)) for c in combinations(range(m), r)]


class FiniteSimplicialSet:
    """Nondegenerate generators with their faces.

    ``dims`` maps generator id to dimension (insertion order is the generator
    order). ``faces`` maps each generator of dimension n >= 1 to its n+1 faces.
    The simplicial identities d_i d_j = d_{j-1} d_i are checked on construction.
    """

    def __init__(self, dims: Mapping[Hashable, int], faces: Mapping[Hashable, Sequence], check: bool = True):
        self.dims = dict(dims)
        self._faces: dict = {}
        for g, n in self.dims.items():
            if n < 0:
                raise ValueError(f"generator {g!r} has negative dimension")
            fs = tuple(SSimplex(*f) if not isinstance(f, SSimplex) else f for f in faces.get(g, ()))
            if n == 0:
                if fs:
                    raise ValueError(f"0-dimensional generator {g!r} cannot have faces")
            elif len(fs) != n + 1:
                raise ValueError(f"generator {g!r} of dimension {n} needs {n + 1} faces, got {len(fs)}")
            for f in fs:
                if f.gen not in self.dims:
                    raise ValueError(f"face {f} of {g!r} refers to an unknown generator")
                if normalize_word(f.word) != tuple(f.word):
                    raise ValueError(f"face {f} of {g!r} is not in normal form")
                if self.simplex_dim(f) != n - 1:
                    raise ValueError(f"face {f} of {g!r} has dimension {self.simplex_dim(f)}, expected {n - 1}")
            self._faces[g] = fs
        self.dim = max(self.dims.values(), default=-1)
        if check:
            bad = self.identity_violations()
            if bad:
                g, i, j = bad[0]
                raise ValueError(f"simplicial identity d_{i} d_{j} = d_{j - 1} d_{i} fails on {g!r}")

    # -- simplex calculus --------------------------------------------------
    def simplex_dim(self, x: SSimplex) -> int:
        return self.dims[x.gen] + len(x.word)

    def generator_faces(self, g) -> tuple:
        return self._faces[g]

    def face(self, x: SSimplex, i: int) -> SSimplex:
        m = self.simplex_dim(x)
        if m == 0 or not 0 <= i <= m:
            raise ValueError(f"face index {i} out of range for a {m}-simplex")
        emitted = []
        word = list(x.word)
        for pos, j in enumerate(word):
            if i < j:
                emitted.append(j - 1)
            elif i == j or i == j + 1:
                return SSimplex(x.gen, normalize_word(emitted + word[pos + 1:]))
            else:
                emitted.append(j)
                i -= 1
        f = self._faces[x.gen][i]
        return SSimplex(f.gen, normalize_word(emitted + list(f.word)))

    def degeneracy(self, x: SSimplex, j: int) -> SSimplex:
        m = self.simplex_dim(x)
        if not 0 <= j <= m:
            raise ValueError(f"degeneracy index {j} out of range for a {m}-simplex")
        return SSimplex(x.gen, normalize_word((j,) + tuple(x.word)))

    def faces_of(self, x: SSimplex) -> tuple:
        return tuple(self.face(x, i) for i in range(self.simplex_dim(x) + 1))

    def identity_violations(self) -> list:
        bad = []
        for g, n in self.dims.items():
            if n < 2:
                continue
            x = SSimplex(g)
            for j in range(1, n + 1):
                for i in range(j):
                    if self.face(self.face(x, j), i) != self.face(self.face(x, i), j - 1):
                        bad.append((g, i, j))
        return bad

    def check_identities(self, max_dim: int | None = None) -> bool:
        """Exhaustive check of all simplicial identities on simplices up to ``max_dim``."""
        top = self.dim + 1 if max_dim is None else max_dim
        for m in range(top + 1):
            for x in self.simplices(m):
                for j in range(m + 1):
                    y = self.degeneracy(x, j)
                    for i in range(m + 2):
                        fi = self.face(y, i)
                        if i < j:
                            ok = fi == self.degeneracy(self.face(x, i), j - 1) if m > 0 else False
                        elif i in (j, j + 1):
                            ok = fi == x
                        else:
                            ok = fi == self.degeneracy(self.face(x, i - 1), j) if m > 0 else False
                        if not ok:
                            return False
                if m >= 2:
                    for j in range(1, m + 1):
                        for i in range(j):
                            if self.face(self.face(x, j), i) != self.face(self.face(x, i), j - 1):
                                return False
        return True

    # -- enumeration --------------------------------------------------------
    def generators(self, n: int | None = None) -> list:
        if n is None:
            return list(self.dims)
        return [g for g, d in self.dims.items() if d == n]

    def counts(self) -> tuple:
        """Number of nondegenerate simplices in each dimension 0..dim."""
        return tuple(len(self.generators(n)) for n in range(self.dim + 1))

    def simplices(self, m: int) -> list:
        """All m-simplices, degenerate ones included, in a fixed order."""
        out = []
        for g, n in self.dims.items():
            for w in degenerate_words(n, m):
                out.append(SSimplex(g, w))
        return out

    def is_simplicial_subset(self, sub: "FiniteSimplicialSet") -> bool:
        for g, n in sub.dims.items():
            if self.dims.get(g) != n:
                return False
            if n and tuple(sub.generator_faces(g)) != tuple(self.generator_faces(g)):
                return False
        return True

    def subset(self, gens: Iterable) -> "FiniteSimplicialSet":
        """Smallest simplicial subset containing ``gens``."""
        keep = set()
        stack = list(gens)
        while stack:
            g = stack.pop()
            if g in keep:
                continue
            keep.add(g)
            stack.extend(f.gen for f in self._faces[g])
        return FiniteSimplicialSet({g: n for g, n in self.dims.items() if g in keep},
                                   {g: self._faces[g] for g in keep}, check=False)

    def skeleton(self, n: int) -> "FiniteSimplicialSet":
        return self.subset(g for g, d in self.dims.items() if d <= n)

    def __repr__(self):
        return f"FiniteSimplicialSet(counts={self.counts()})"

    def __eq__(self, other):
        if not isinstance(other, FiniteSimplicialSet):
            return NotImplemented
        return self.dims == other.dims and self._faces == other._faces


# -- constructions -------------------------------------------------------------

def from_ordered_complex(K: SimplicialComplex) -> FiniteSimplicialSet:
    """One generator per simplex of K; faces by vertex deletion in K's order."""
    dims, faces = {}, {}
    for s in K.simplices():
        dims[s] = len(s) - 1
        if len(s) > 1:
            faces[s] = [SSimplex(s[:i] + s[i + 1:]) for i in range(len(s))]
    return FiniteSimplicialSet(dims, faces, check=False)


def standard_simplex(n: int) -> FiniteSimplicialSet:
    from .complexes import standard_complex
    return from_ordered_complex(standard_complex(n))


def sphere_model(n: int) -> FiniteSimplicialSet:
    """Delta[n]/boundary: one vertex ``v`` and one n-cell ``e`` with collapsed faces."""
    return wedge_of_spheres(1, n)


def wedge_of_spheres(k: int, n: int) -> FiniteSimplicialSet:
    """Wedge of k copies of the n-sphere model, sharing the base vertex ``v``."""
    if n < 1:
        raise ValueError("sphere dimension must be >= 1")
    dims = {"v": 0}
    faces = {}
    collapsed = SSimplex("v", tuple(range(n - 2, -1, -1)))
    for i in range(1, k + 1):
        dims[f"e{i}"] = n
        faces[f"e{i}"] = [collapsed] * (n + 1)
    return FiniteSimplicialSet(dims, faces)


@dataclass
class SkeletalFiltration:
    """Cells by dimension and the attaching data (faces) of each cell."""

    cells: list
    attaching: dict = field(default_factory=dict)

    def counts(self) -> tuple:
        return tuple(len(c) for c in self.cells)


def skeletal_filtration(X: FiniteSimplicialSet) -> SkeletalFiltration:
    cells = [X.generators(n) for n in range(X.dim + 1)]
    attaching = {g: X.generator_faces(g) for g in X.dims if X.dims[g] > 0}
    return SkeletalFiltration(cells, attaching)


def horn_fillers(X: FiniteSimplicialSet, p: int, k: int, horn) -> list:
    """All p-simplices of X whose faces d_i agree with ``horn`` for i != k.

    ``horn`` maps i -> simplex for each i in 0..p except k (a sequence with
    ``None`` at position k is accepted too).
    """
    if p < 1 or not 0 <= k <= p:
        raise ValueError(f"need p >= 1 and 0 <= k <= p, got p={p}, k={k}")
    if not isinstance(horn, Mapping):
        horn = {i: y for i, y in enumerate(horn) if i != k}
    want = sorted(i for i in range(p + 1) if i != k)
    if sorted(horn) != want:
        raise ValueError(f"horn must assign faces {want}, got {sorted(horn)}")
    ys = {}
    for i in want:
        y = horn[i]
        if not isinstance(y, SSimplex):
            y = SSimplex(y) if y in X.dims else SSimplex(*y)
        if y.gen not in X.dims or X.simplex_dim(y) != p - 1:
            raise ValueError(f"horn face {i} is not a {p - 1}-simplex of X")
        ys[i] = y
    if p >= 2:
        for i, j in combinations(want, 2):
            if X.face(ys[j], i) != X.face(ys[i], j - 1):
                raise ValueError(f"incompatible horn: d_{i} y_{j} != d_{j - 1} y_{i}")
    out = []
    for x in X.simplices(p):
        if all(X.face(x, i) == ys[i] for i in want):
            out.append(x)
    return out


# -- small categories ----------------------------------------------------------

class SmallCategory:
    """A finite category given by arrows and a composition table.

    ``arrows`` maps arrow name to (source, target). ``identities`` maps each
    object to its identity arrow. ``compose`` maps (g, f) to g o f for every
    composable pair of non-identity arrows; identity composites are implied.
    """

    def __init__(self, objects: Sequence, arrows: Mapping, identities: Mapping, compose: Mapping, check: bool = True):
        self.objects = tuple(objects)
        self.arrows = dict(arrows)
        self.identities = dict(identities)
        self._comp = dict(compose)
        for x in self.objects:
            e = self.identities.get(x)
            if e is None or self.arrows.get(e) != (x, x):
                raise ValueError(f"object {x!r} lacks a valid identity arrow")
        self._ids = set(self.identities.values())
        for f, (a, b) in self.arrows.items():
            if a not in self.identities or b not in self.identities:
                raise ValueError(f"arrow {f!r} has an unknown endpoint")
        self._out: dict = {x: [] for x in self.objects}
        for f, (a, b) in self.arrows.items():
            self._out[a].append(f)
        if check:
            self.check_axioms()

    def source(self, f):
        return self.arrows[f][0]

    def target(self, f):
        return self.arrows[f][1]

    def is_identity(self, f) -> bool:
        return f in self._ids

    def compose(self, g, f):
        """g o f (f first)."""
        if self.target(f) != self.source(g):
            raise ValueError(f"{g!r} o {f!r} is not composable")
        if self.is_identity(f):
            return g
        if self.is_identity(g):
            return f
        try:
            return self._comp[(g, f)]
        except KeyError:
            raise ValueError(f"composite {g!r} o {f!r} missing from table") from None

    def arrows_from(self, x) -> list:
        return self._out[x]

    def non_identity_arrows(self) -> list:
        return [f for f in self.arrows if f not in self._ids]

    def check_axioms(self):
        for f in self.arrows:
            for g in self._out[self.target(f)]:
                h = self.compose(g, f)
                if h not in self.arrows or self.arrows[h] != (self.source(f), self.target(g)):
                    raise ValueError(f"composite {g!r} o {f!r} = {h!r} has wrong endpoints")
        for f in self.arrows:
            for g in self._out[self.target(f)]:
                for h in self._out[self.target(g)]:
                    if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f):
                        raise ValueError(f"associativity fails on ({h!r}, {g!r}, {f!r})")

    def __repr__(self):
        return f"SmallCategory(objects={len(self.objects)}, arrows={len(self.arrows)})"


def poset_category(elements: Sequence, leq) -> SmallCategory:
    """Category of a finite poset; arrow (a, b) exists iff leq(a, b)."""
    elements = list(elements)
    arrows, ids, comp = {}, {}, {}
    for a in elements:
        for b in elements:
            if leq(a, b):
                arrows[(a, b)] = (a, b)
        ids[a] = (a, a)
    for (a, b) in arrows:
        for c in elements:
            if (b, c) in arrows and a != b and b != c:
                comp[((b, c), (a, b))] = (a, c)
    return SmallCategory(elements, arrows, ids, comp, check=False)


def terminal_category() -> SmallCategory:
    return SmallCategory(["*"], {"id": ("*", "*")}, {"*": "id"}, {})


def _chain_simplex(C: SmallCategory, start, chain: Sequence) -> SSimplex:
    """Normal-form simplex of the nerve for a chain that may contain identities."""
    ids = [j for j, f in enumerate(chain) if C.is_identity(f)]
    rest = tuple(f for f in chain if not C.is_identity(f))
    gen = ("arr",) + rest if rest else ("obj", start)
    return SSimplex(gen, tuple(reversed(ids)))


def nerve_category(C: SmallCategory, max_dim: int | None = None) -> FiniteSimplicialSet:
    """Normalized nerve: generators are chains of composable non-identity arrows.

    Generator ids are ``("obj", x)`` for objects and ``("arr", f1, ..., fn)``
    for chains x0 -f1-> x1 -> ... -fn-> xn.
    """
    dims, faces = {}, {}
    for x in C.objects:
        dims[("obj", x)] = 0
    layer = [(f,) for f in C.non_identity_arrows()]
    n = 1
    while layer and (max_dim is None or n <= max_dim):
        nxt = []
        for chain in layer:
            g = ("arr",) + chain
            dims[g] = n
            fs = []
            for i in range(n + 1):
                if n == 1:
                    obj = C.target(chain[0]) if i == 0 else C.source(chain[0])
                    fs.append(SSimplex(("obj", obj)))
                    continue
                if i == 0:
                    sub, start = chain[1:], C.target(chain[0])
                elif i == n:
                    sub, start = chain[:-1], C.source(chain[0])
                else:
                    sub = chain[:i - 1] + (C.compose(chain[i], chain[i - 1]),) + chain[i + 1:]
                    start = C.source(chain[0])
                fs.append(_chain_simplex(C, start, sub))
            faces[g] = fs
            for f in C.arrows_from(C.target(chain[-1])):
                if not C.is_identity(f):
                    nxt.append(chain + (f,))
        layer = nxt
        n += 1
    return FiniteSimplicialSet(dims, faces, check=False)


def chain_objects(C: SmallCategory, gen) -> tuple:
    """Objects x0, ..., xn visited by a nerve generator."""
    if gen[0] == "obj":
        return (gen[1],)
    chain = gen[1:]
    return (C.source(chain[0]),) + tuple(C.target(f) for f in chain)


def sorted_objects(objs: Iterable) -> list:
    return sorted(objs, key=vertex_key)
