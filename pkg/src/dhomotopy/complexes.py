"""Abstract simplicial complexes and the constructions applied to them.

Vertices are opaque hashable identifiers carrying a total order fixed when the
complex is built. Simplices are stored as tuples listed in that order, so every
orientation sign downstream is determined by the vertex order alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx
from networkx.algorithms import isomorphism

Vertex = Hashable
Simplex = tuple


def vertex_key(v):
    """Default sort key: numbers, then strings, then tuples (recursively)."""
    if isinstance(v, bool):
        return (0, int(v))
    if isinstance(v, (int, float)):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, len(v), tuple(vertex_key(x) for x in v))
    if isinstance(v, frozenset):
        return (3, len(v), tuple(sorted(vertex_key(x) for x in v)))
    return (4, repr(v))


def _is_sorted(vs) -> bool:
    keys = [vertex_key(v) for v in vs]
    try:
        return all(x <= y for x, y in zip(keys, keys[1:]))
    except TypeError:
        return False


class SimplicialComplex:
    """A finite simplicial complex, closed under faces on construction.

    ``simplices`` may list only the maximal simplices. ``vertices`` fixes the
    vertex order and may add isolated vertices; by default the vertices are
    sorted with :func:`vertex_key`.
    """

    def __init__(self, simplices: Iterable[Iterable[Vertex]] = (), vertices: Iterable[Vertex] | None = None):
        gens = [tuple(s) for s in simplices]
        seen = {v for s in gens for v in s}
        if vertices is None:
            order = sorted(seen, key=vertex_key)
        else:
            order = list(dict.fromkeys(vertices))
            missing = seen.difference(order)
            if missing:
                raise ValueError(f"simplex vertices missing from vertex list: {sorted(missing, key=vertex_key)}")
        self._vertices = tuple(order)
        self._pos = {v: i for i, v in enumerate(order)}

        closed = set((v,) for v in order)
        for s in gens:
            if not s:
                continue
            s = self._canon(s)
            if s in closed:
                continue
            for r in range(1, len(s) + 1):
                closed.update(combinations(s, r))
        self._simplices = frozenset(closed)
        dim = max((len(s) for s in closed), default=0) - 1
        by_dim: list[list[tuple]] = [[] for _ in range(dim + 1)]
        for s in closed:
            by_dim[len(s) - 1].append(s)
        pos = self._pos
        for lst in by_dim:
            lst.sort(key=lambda s: tuple(pos[v] for v in s))
        self._by_dim = [tuple(lst) for lst in by_dim]

    def _canon(self, s) -> tuple:
        pos = self._pos
        t = tuple(sorted(set(s), key=pos.__getitem__))
        return t

    # -- basic accessors -------------------------------------------------
    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def simplices(self, d: int | None = None) -> tuple:
        """Simplices of dimension ``d`` (all simplices, dimension-major, if None)."""
        if d is None:
            return tuple(s for lst in self._by_dim for s in lst)
        if d < 0 or d > self.dim:
            return ()
        return self._by_dim[d]

    @property
    def f_vector(self) -> tuple:
        return tuple(len(lst) for lst in self._by_dim)

    def __len__(self):
        return len(self._simplices)

    def __contains__(self, s) -> bool:
        try:
            return self.canonical(s) in self._simplices
        except KeyError:
            return False

    def canonical(self, s) -> tuple:
        """Order the vertices of ``s`` by this complex's vertex order."""
        return self._canon(s)

    def position(self, v) -> int:
        return self._pos[v]

    def orient(self, seq) -> tuple[tuple, int]:
        """Canonical tuple for an ordered vertex sequence and the permutation sign."""
        pos = [self._pos[v] for v in seq]
        sign = 1
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                if pos[i] > pos[j]:
                    sign = -sign
                elif pos[i] == pos[j]:
                    return (), 0
        return tuple(sorted(seq, key=self._pos.__getitem__)), sign

    def is_empty(self) -> bool:
        return not self._vertices

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._vertices == other._vertices and self._simplices == other._simplices

    def __hash__(self):
        return hash((self._vertices, self._simplices))

    def __repr__(self):
        return f"SimplicialComplex(f_vector={self.f_vector}, n_vertices={len(self._vertices)})"

    # -- derived complexes ------------------------------------------------
    def maximal_simplices(self) -> tuple:
        out = []
        for d, lst in enumerate(self._by_dim):
            for s in lst:
                if d == self.dim:
                    out.append(s)
                    continue
                ss = set(s)
                if not any(ss.issubset(t) for t in self._by_dim[d + 1]):
                    out.append(s)
        return tuple(out)

    def subcomplex(self, simplices: Iterable[Iterable[Vertex]]) -> "SimplicialComplex":
        """Closure of ``simplices`` inside this complex, keeping the vertex order."""
        gens = [self.canonical(s) for s in simplices]
        for s in gens:
            if s not in self._simplices:
                raise ValueError(f"{s} is not a simplex of the complex")
        used = {v for s in gens for v in s}
        return SimplicialComplex(gens, vertices=[v for v in self._vertices if v in used])

    def skeleton(self, d: int) -> "SimplicialComplex":
        return SimplicialComplex([s for k in range(min(d, self.dim) + 1) for s in self._by_dim[k]],
                                 vertices=self._vertices if d >= 0 else ())

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return all(s in other for s in self._simplices)

    def closed_star(self, v) -> "SimplicialComplex":
        """All simplices containing ``v`` together with their faces."""
        return self.subcomplex(s for s in self.simplices() if v in s)

    def union(self, other: "SimplicialComplex") -> "SimplicialComplex":
        """Vertex order: this complex's, then new vertices; sorted when both inputs are."""
        order = list(self._vertices) + [v for v in other._vertices if v not in self._pos]
        if _is_sorted(self._vertices) and _is_sorted(other._vertices):
            order.sort(key=vertex_key)
        return SimplicialComplex(list(self._simplices) + list(other._simplices), vertices=order)

    def intersection(self, other: "SimplicialComplex") -> "SimplicialComplex":
        common = [s for s in self._simplices if s in other]
        used = {v for s in common for v in s}
        return SimplicialComplex(common, vertices=[v for v in self._vertices if v in used])

    def relabel(self, mapping: Mapping | None = None, fn=None) -> "SimplicialComplex":
        f = fn if fn is not None else mapping.__getitem__
        return SimplicialComplex([[f(v) for v in s] for s in self.maximal_simplices()],
                                 vertices=[f(v) for v in self._vertices])


# -- constructors -------------------------------------------------------------

def standard_complex(p: int) -> SimplicialComplex:
    """The full simplex Delta(p) on vertices 0..p."""
    if p < 0:
        raise ValueError("dimension must be nonnegative")
    return SimplicialComplex([tuple(range(p + 1))])


def boundary_complex(p: int) -> SimplicialComplex:
    """The boundary of Delta(p): every proper nonempty subset of {0..p}."""
    if p < 1:
        raise ValueError("boundary needs p >= 1")
    return SimplicialComplex(combinations(range(p + 1), p), vertices=range(p + 1))


def euler_characteristic(K: SimplicialComplex) -> int:
    return sum((-1) ** d * n for d, n in enumerate(K.f_vector)) if not K.is_empty() else 0


def subdivide(K: SimplicialComplex) -> SimplicialComplex:
    """Barycentric subdivision.

    Vertices are the simplices of ``K`` ordered by (dimension, positions of
    their vertices); simplices are strict chains of faces, listed bottom-up.
    """
    pos = K.position
    verts = sorted(K.simplices(), key=lambda s: (len(s), tuple(pos(v) for v in s)))
    memo: dict[tuple, list[tuple]] = {}

    def chains_below(s):
        # chains whose top element is s, listed bottom-up
        if s in memo:
            return memo[s]
        out = [(s,)]
        for r in range(1, len(s)):
            for t in combinations(s, r):
                out.extend(c + (s,) for c in chains_below(t))
        memo[s] = out
        return out

    tops = []
    for s in K.maximal_simplices():
        tops.extend(chains_below(s))
    maximal = [c for c in tops if len(c) == len(c[-1])]
    return SimplicialComplex(maximal, vertices=verts)


def iterated_subdivision(K: SimplicialComplex, k: int) -> SimplicialComplex:
    for _ in range(k):
        K = subdivide(K)
    return K


_APEX = "*"


def cone(K: SimplicialComplex, apex: Vertex = None) -> SimplicialComplex:
    """Join ``K`` with one new vertex, placed last in the vertex order."""
    if apex is None:
        apex = _APEX
        while apex in K.vertices:
            apex = apex + "*"
    elif apex in K.vertices:
        raise ValueError(f"apex {apex!r} already a vertex")
    gens = [s + (apex,) for s in K.maximal_simplices()] or [(apex,)]
    return SimplicialComplex(gens, vertices=list(K.vertices) + [apex])


def disjoint_union(*complexes: SimplicialComplex) -> SimplicialComplex:
    """Vertices become pairs (index of summand, original vertex)."""
    gens, verts = [], []
    for i, K in enumerate(complexes):
        verts.extend((i, v) for v in K.vertices)
        gens.extend(tuple((i, v) for v in s) for s in K.maximal_simplices())
    return SimplicialComplex(gens, vertices=verts)


@dataclass(frozen=True)
class PrismComplex:
    """A triangulated prism with its two tagged end subcomplexes.

    ``top`` is a copy of Delta(p) (level 0) and ``bottom`` a copy of
    sd^k Delta(p) (level k). Vertex labels are ``(level, vertex)``.
    """

    complex: SimplicialComplex
    top: SimplicialComplex
    bottom: SimplicialComplex
    p: int
    k: int


def _prism_layer(M: SimplicialComplex, level: int) -> list[tuple]:
    """Simplices of the prism over M joining level-1 copy of M to level sd M.

    Each simplex sigma of M contributes the cone, with apex its barycenter at
    ``level``, over sigma on top together with the layers over its facets.
    """
    built: dict[tuple, SimplicialComplex] = {}
    for sigma in M.simplices():
        top_face = tuple((level - 1, v) for v in sigma)
        base = SimplicialComplex([top_face])
        for tau in combinations(sigma, len(sigma) - 1):
            if tau:
                base = base.union(built[tau])
        built[sigma] = cone(base, apex=(level, sigma))
    out = []
    for sigma in M.maximal_simplices():
        out.extend(built[sigma].maximal_simplices())
    return out


def prism_complex(p: int, k: int) -> PrismComplex:
    """The prism (Delta(p) x I)^(k) with Delta(p) on top and sd^k Delta(p) below.

    For k >= 1 each layer is the iterated cone construction; for k = 0 the
    standard staircase triangulation of Delta(p) x Delta(1) is returned.
    """
    if p < 0 or k < 0:
        raise ValueError("p and k must be nonnegative")
    D = standard_complex(p)
    if k == 0:
        lv = [(0, v) for v in D.vertices] + [(1, v) for v in D.vertices]
        gens = []
        for j in range(p + 1):
            gens.append(tuple((0, v) for v in range(j + 1)) + tuple((1, v) for v in range(j, p + 1)))
        K = SimplicialComplex(gens, vertices=lv)
        top = K.subcomplex([tuple((0, v) for v in D.vertices)])
        bottom = K.subcomplex([tuple((1, v) for v in D.vertices)])
        return PrismComplex(K, top, bottom, p, k)
    layers = [D]
    for _ in range(k):
        layers.append(subdivide(layers[-1]))
    gens, verts = [], []
    for level, M in enumerate(layers):
        verts.extend((level, v) for v in M.vertices)
    for level in range(1, k + 1):
        gens.extend(_prism_layer(layers[level - 1], level))
    K = SimplicialComplex(gens, vertices=verts)
    top = K.subcomplex(tuple((0, v) for v in s) for s in D.maximal_simplices())
    bottom = K.subcomplex(tuple((k, v) for v in s) for s in layers[k].maximal_simplices())
    return PrismComplex(K, top, bottom, p, k)


# -- covers ---------------------------------------------------------------------

class Cover:
    """An indexed family of subcomplexes of a base complex.

    Parts must be subcomplexes of ``base``; whether they cover every simplex
    is reported by :attr:`is_covering` rather than enforced, since some
    operations accept arbitrary families.
    """

    def __init__(self, base: SimplicialComplex, parts: Mapping[Hashable, Iterable] | Sequence[tuple]):
        items = list(parts.items()) if isinstance(parts, Mapping) else list(parts)
        self.base = base
        names, cplx = [], {}
        for name, part in items:
            if name in cplx:
                raise ValueError(f"duplicate part name {name!r}")
            simplices = part.simplices() if isinstance(part, SimplicialComplex) else part
            simplices = list(simplices)
            bad = [s for s in simplices if tuple(s) and s not in base]
            if bad:
                raise ValueError(f"part {name!r} has simplices outside the base: {bad[:3]}")
            names.append(name)
            cplx[name] = base.subcomplex(simplices) if simplices else SimplicialComplex()
        self.names = tuple(names)
        self._parts = cplx
        self._cache: dict[tuple, SimplicialComplex] = {}

    def part(self, name) -> SimplicialComplex:
        return self._parts[name]

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def intersection(self, names: Iterable) -> SimplicialComplex:
        """U_sigma: the common subcomplex of the named parts."""
        key = tuple(sorted(set(names), key=self.names.index))
        if key in self._cache:
            return self._cache[key]
        if not key:
            raise ValueError("empty index set")
        sets = [set(self._parts[n].simplices()) for n in key]
        common = set.intersection(*sets)
        used = {v for s in common for v in s}
        out = SimplicialComplex(common, vertices=[v for v in self.base.vertices if v in used])
        self._cache[key] = out
        return out

    def uncovered_simplices(self) -> list:
        covered = set()
        for n in self.names:
            covered.update(self._parts[n].simplices())
        return [s for s in self.base.simplices() if s not in covered]

    @property
    def is_covering(self) -> bool:
        return not self.uncovered_simplices()

    def relabel_parts(self, mapping: Mapping) -> "Cover":
        return Cover(self.base, [(mapping[n], self._parts[n]) for n in self.names])

    def __repr__(self):
        return f"Cover(parts={len(self.names)}, base={self.base!r})"


def nerve_of_cover(cover: Cover) -> SimplicialComplex:
    """Nerve on the part names; parts with empty subcomplex are dropped."""
    live = [n for n in cover.names if not cover.part(n).is_empty()]
    groups = set()
    for v in cover.base.vertices:
        members = tuple(n for n in live if (v,) in cover.part(n))
        if members:
            groups.add(members)
    return SimplicialComplex(groups, vertices=live)


def vertex_star_cover(K: SimplicialComplex) -> Cover:
    """Closed star of every vertex of K, as a cover of K."""
    return Cover(K, [(v, K.closed_star(v)) for v in K.vertices])


def derived_star_cover(K: SimplicialComplex) -> Cover:
    """Cover of sd K by the closed stars of the original vertices.

    Part ``v`` is the closed star of the vertex ``(v,)`` in sd K. These parts
    meet exactly when their vertices span a simplex of K, so the nerve is K.
    """
    S = subdivide(K)
    return Cover(S, [(v, S.closed_star((v,))) for v in K.vertices])


def star_cover_of_subdivision(p: int) -> Cover:
    """Closed-subcomplex model of the stars of the barycenters of Delta(p).

    The parts are indexed by the faces of Delta(p) (vertices of sd Delta(p))
    and live in sd^2 Delta(p), a subdivision of sd Delta(p); part ``I`` is the
    closed star of the vertex I. The nerve of this cover is sd Delta(p).
    """
    return derived_star_cover(subdivide(standard_complex(p)))


# -- isomorphism ------------------------------------------------------------------

def _incidence_graph(K: SimplicialComplex) -> nx.Graph:
    G = nx.Graph()
    for v in K.vertices:
        G.add_node(("v", v), kind=0)
    for s in K.maximal_simplices():
        G.add_node(("s", s), kind=len(s))
        for v in s:
            G.add_edge(("v", v), ("s", s))
    return G


def find_isomorphism(K: SimplicialComplex, L: SimplicialComplex) -> dict | None:
    """A vertex bijection K -> L carrying simplices onto simplices, or None."""
    if K.f_vector != L.f_vector or len(K.vertices) != len(L.vertices):
        return None
    GK, GL = _incidence_graph(K), _incidence_graph(L)
    gm = isomorphism.GraphMatcher(GK, GL, node_match=lambda a, b: a["kind"] == b["kind"])
    for m in gm.isomorphisms_iter():
        return {a[1]: b[1] for a, b in m.items() if a[0] == "v"}
    return None


def is_isomorphic(K: SimplicialComplex, L: SimplicialComplex) -> bool:
    return find_isomorphism(K, L) is not None
