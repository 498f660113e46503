"""Integer chain complexes, exact homology, induced maps and exact sequences.

Homology is computed in two stages. First the complex is shrunk by
eliminating pairs (a, b) where the boundary of a hits b with coefficient +-1;
this is a chain homotopy equivalence and we keep the data needed to move
cycles back and forth. The small residual complex then goes through a dense
Smith normal form, which fixes the generator basis and the coordinate map.
Both stages are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import intlinalg as il
from .complexes import SimplicialComplex, subdivide
from .sset import FiniteSimplicialSet, SSimplex

Vec = dict  # sparse integer vector: basis index -> coefficient


def _axpy(y: dict, a: int, x: dict):
    """y += a * x in place on sparse vectors."""
    if not a:
        return y
    for i, v in x.items():
        nv = y.get(i, 0) + a * v
        if nv:
            y[i] = nv
        else:
            y.pop(i, None)
    return y


class IntegerChainComplex:
    """Finitely generated free chain complex concentrated in degrees 0..top.

    ``bases[n]`` lists basis labels in degree n. Boundaries are given either
    as ``columns[n][j]``, the boundary of the j-th degree-n basis element as a
    sparse dict over the degree n-1 basis, or as compressed sparse columns
    ``csc[n] = (indptr, indices, data)`` for big complexes. Each form is
    derived from the other on demand. A basis may be any sequence, so large
    complexes can compute labels lazily.
    """

    def __init__(self, bases: Sequence[Sequence], columns: Sequence[Sequence[dict]] | None = None,
                 check: bool = True, csc: Sequence | None = None):
        self.bases = [b if not isinstance(b, (list, tuple)) else tuple(b) for b in bases]
        while len(self.bases) > 1 and not len(self.bases[-1]):
            self.bases.pop()
        if not self.bases:
            self.bases = [()]
        top = len(self.bases)
        self._index = [None] * top
        self._cols = None
        self._csc = [None] * top
        if columns is None and csc is None:
            columns = []
        if columns is not None:
            self._cols = []
            for n in range(top):
                cols = list(columns[n]) if n < len(columns) else [{} for _ in range(len(self.bases[n]))]
                if len(cols) != len(self.bases[n]):
                    raise ValueError(f"degree {n}: {len(cols)} boundary columns for {len(self.bases[n])} basis elements")
                if not check:
                    # trusted internal input: sparse dicts without zero entries
                    self._cols.append(cols)
                    continue
                clean = []
                for col in cols:
                    c = {int(i): int(v) for i, v in col.items() if v}
                    if n == 0 and c:
                        raise ValueError("degree 0 elements must have zero boundary")
                    if c and (min(c) < 0 or max(c) >= len(self.bases[n - 1])):
                        raise ValueError(f"degree {n}: boundary refers to a missing basis element")
                    clean.append(c)
                self._cols.append(clean)
        else:
            for n in range(1, top):
                indptr, indices, data = (np.asarray(a, dtype=np.int64) for a in csc[n])
                if len(indptr) != len(self.bases[n]) + 1:
                    raise ValueError(f"degree {n}: {len(indptr) - 1} boundary columns for {len(self.bases[n])} basis elements")
                if check and len(indices) and (indices.min() < 0 or indices.max() >= len(self.bases[n - 1])):
                    raise ValueError(f"degree {n}: boundary refers to a missing basis element")
                self._csc[n] = (indptr, indices, data)
        if check and not self.is_differential():
            raise ValueError("boundary does not square to zero")

    @property
    def top(self) -> int:
        return len(self.bases) - 1

    @property
    def ranks(self) -> tuple:
        return tuple(len(b) for b in self.bases)

    @property
    def columns(self) -> list:
        if self._cols is None:
            cols = [[{} for _ in range(len(self.bases[0]))]]
            for n in range(1, self.top + 1):
                indptr, indices, data = self._csc[n]
                ind, dat = indices.tolist(), data.tolist()
                ptr = indptr.tolist()
                cols.append([dict(zip(ind[ptr[j]:ptr[j + 1]], dat[ptr[j]:ptr[j + 1]]))
                             for j in range(len(ptr) - 1)])
            self._cols = cols
        return self._cols

    def csc(self, n: int) -> tuple:
        """Boundary of degree n as (indptr, indices, data) int64 arrays, rows sorted per column."""
        if self._csc[n] is None:
            cols = self._cols[n] if n >= 1 else [{} for _ in range(len(self.bases[0]))]
            lens = [len(c) for c in cols]
            indptr = np.zeros(len(cols) + 1, dtype=np.int64)
            np.cumsum(lens, out=indptr[1:])
            items = [kv for c in cols for kv in sorted(c.items())]
            indices = np.array([i for i, _ in items], dtype=np.int64)
            data = np.array([v for _, v in items], dtype=np.int64)
            self._csc[n] = (indptr, indices, data)
        return self._csc[n]

    def sparse(self, n: int):
        """Degree-n boundary as a scipy CSC matrix."""
        from scipy.sparse import csc_matrix
        indptr, indices, data = self.csc(n)
        return csc_matrix((data, indices, indptr), shape=(len(self.basis(n - 1)), len(self.basis(n))))

    def basis(self, n: int):
        return self.bases[n] if 0 <= n <= self.top else ()

    def _labels(self, n):
        if self._index[n] is None:
            self._index[n] = {lab: i for i, lab in enumerate(self.bases[n])}
        return self._index[n]

    def index(self, n: int, label) -> int:
        return self._labels(n)[label]

    def has_label(self, n: int, label) -> bool:
        return 0 <= n <= self.top and label in self._labels(n)

    def column(self, n: int, j: int) -> dict:
        if n <= 0 or n > self.top:
            return {}
        if self._cols is not None:
            return self._cols[n][j]
        indptr, indices, data = self._csc[n]
        s, e = indptr[j], indptr[j + 1]
        return dict(zip(indices[s:e].tolist(), data[s:e].tolist()))

    def boundary(self, n: int, x: dict) -> dict:
        out: dict = {}
        if n <= 0 or n > self.top:
            return out
        for j, a in x.items():
            _axpy(out, a, self.column(n, j))
        return out

    def matrix(self, n: int) -> np.ndarray:
        """Dense boundary matrix of degree n (rows: degree n-1) with Python-int entries."""
        rows = len(self.basis(n - 1))
        cols = len(self.basis(n))
        M = np.zeros((rows, cols), dtype=object)
        M[:, :] = 0
        if 0 < n <= self.top:
            for j, col in enumerate(self.columns[n]):
                for i, v in col.items():
                    M[i, j] = v
        return M

    def dense(self, n: int) -> list:
        rows = len(self.basis(n - 1))
        out = il.zeros(rows, len(self.basis(n)))
        if 0 < n <= self.top:
            for j, col in enumerate(self.columns[n]):
                for i, v in col.items():
                    out[i][j] = v
        return out

    def is_differential(self) -> bool:
        if self._cols is None:
            # int64 products are exact here: entries and column lengths are small
            for n in range(2, self.top + 1):
                P = self.sparse(n - 1) @ self.sparse(n)
                P.eliminate_zeros()
                if P.nnz:
                    return False
            return True
        for n in range(2, self.top + 1):
            for col in self._cols[n]:
                if self.boundary(n - 1, col):
                    return False
        return True

    def __repr__(self):
        return f"IntegerChainComplex(ranks={self.ranks})"


@dataclass(frozen=True)
class HomologyGroup:
    """Z^rank + Z/t1 + ... with t1 | t2 | ... and every ti > 1."""

    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        if any(x <= 1 for x in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not a divisibility chain of integers > 1")
        object.__setattr__(self, "torsion", t)

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def orders(self) -> tuple:
        """Order of each coordinate: torsion first, then 0 for free coordinates."""
        return self.torsion + (0,) * self.rank

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


def direct_sum(*groups: HomologyGroup) -> HomologyGroup:
    """Direct sum, with the torsion re-normalized into invariant factors."""
    rank = sum(g.rank for g in groups)
    ts = [d for g in groups for d in g.torsion]
    if not ts:
        return HomologyGroup(rank)
    diag = il.invariant_factors([[d if i == j else 0 for j in range(len(ts))] for i, d in enumerate(ts)])
    return HomologyGroup(rank, tuple(d for d in diag if d > 1))


BULK_MIN = 20000   # total rank from which free pairs are first collapsed in bulk
_NEVER = np.iinfo(np.int64).max


class _Reduction:
    """Unit-pivot elimination with the transport maps to and from the residue.

    Big complexes first go through rounds of simultaneous free-face collapses
    done with numpy: a cell b with exactly one live coface a, hit with
    coefficient +-1, is removed together with a. Such a collapse never changes
    another column, so the backward transport ignores it and the forward one
    only needs the boundary of a as it was at that moment, which the kill
    times of the cells record. What is left goes through the general sparse
    elimination below.
    """

    def __init__(self, C: IntegerChainComplex, bulk: bool | None = None):
        top = C.top
        self.top = top
        self.complex = C
        if bulk is None:
            bulk = sum(C.ranks) >= BULK_MIN
        # batches[n]: collapses of degree-n cells against degree n-1 cells, as (a, b, u, time) arrays
        self.batches = [[] for _ in range(top + 1)]
        self._bmaps = {}
        self.kill = None
        cols = []
        if bulk and top >= 1:
            alive = self._collapse(C)
            for n in range(top + 1):
                live = np.flatnonzero(alive[n]).tolist()
                if n == 0:
                    cols.append({j: {} for j in live})
                    continue
                indptr, indices, data = C.csc(n)
                am = alive[n - 1]
                d = {}
                for j in live:
                    s, e = indptr[j], indptr[j + 1]
                    idx = indices[s:e]
                    keep = am[idx]
                    d[j] = dict(zip(idx[keep].tolist(), data[s:e][keep].tolist()))
                cols.append(d)
        else:
            for n in range(top + 1):
                cols.append({j: dict(c) for j, c in enumerate(C.columns[n])})
        self.cols = cols
        # rows[n][i]: degree n+1 columns whose boundary involves i
        rows = [{i: set() for i in cols[n]} for n in range(top + 1)]
        for n in range(1, top + 1):
            r = rows[n - 1]
            for j, col in cols[n].items():
                for i in col:
                    r[i].add(j)
        self.rows = rows
        # steps[n]: eliminations of a degree-n cell against a degree n-1 cell, in order
        self.steps = [[] for _ in range(top + 1)]
        changed = True
        while changed:
            changed = False
            for n in range(top, 0, -1):
                cols_n, rows_m = cols[n], rows[n - 1]
                for a in list(cols_n):
                    col = cols_n.get(a)
                    if not col:
                        continue
                    best = None
                    for b, v in col.items():
                        if v == 1 or v == -1:
                            k = len(rows_m[b])
                            if best is None or k < best[0] or (k == best[0] and b < best[1]):
                                best = (k, b)
                                if k == 1:
                                    break
                    if best is not None:
                        self._eliminate(n, a, best[1])
                        changed = True
        self.alive = [sorted(cols[n]) for n in range(top + 1)]
        self.pos = [{x: k for k, x in enumerate(al)} for al in self.alive]

    def _collapse(self, C):
        top = self.top
        alive = [np.ones(len(C.basis(n)), dtype=bool) for n in range(top + 1)]
        kill = [np.full(len(C.basis(n)), _NEVER, dtype=np.int64) for n in range(top + 1)]
        ent = [None]
        for n in range(1, top + 1):
            indptr, indices, data = C.csc(n)
            colidx = np.repeat(np.arange(len(indptr) - 1, dtype=np.int64), np.diff(indptr))
            ent.append((indices, colidx, data))
        t = 0
        progress = True
        while progress:
            progress = False
            for n in range(top, 0, -1):
                r, c, v = ent[n]
                live = alive[n][c] & alive[n - 1][r]
                if not live.all():
                    r, c, v = r[live], c[live], v[live]
                    ent[n] = (r, c, v)
                if not len(r):
                    continue
                cnt = np.bincount(r, minlength=len(alive[n - 1]))
                sel = (cnt[r] == 1) & ((v == 1) | (v == -1))
                if not sel.any():
                    continue
                b, a, u = r[sel], c[sel], v[sel]
                order = np.lexsort((b, a))
                b, a, u = b[order], a[order], u[order]
                first = np.ones(len(a), dtype=bool)
                first[1:] = a[1:] != a[:-1]
                b, a, u = b[first], a[first], u[first]
                t += 1
                alive[n][a] = False
                alive[n - 1][b] = False
                kill[n][a] = t
                kill[n - 1][b] = t
                self.batches[n].append((a, b, u, t))
                progress = True
        self.kill = kill
        return alive

    def _eliminate(self, n, a, b):
        cols_n, rows_m = self.cols[n], self.rows[n - 1]
        da = cols_n.pop(a)
        u = da[b]
        cb = None
        if len(rows_m[b]) > 1:
            cb = {c: cols_n[c][b] for c in rows_m[b] if c != a}
            for c, lam in cb.items():
                colc = cols_n[c]
                f = lam * u
                for i, v in da.items():
                    nv = colc.get(i, 0) - f * v
                    if nv:
                        colc[i] = nv
                        rows_m[i].add(c)
                    else:
                        del colc[i]
                        rows_m[i].discard(c)
        for i in da:
            rows_m[i].discard(a)
        if n + 1 <= self.top:
            up = self.cols[n + 1]
            for e in self.rows[n][a]:
                del up[e][a]
        self.rows[n].pop(a)
        lower = self.cols[n - 1]
        if n >= 2:
            rr = self.rows[n - 2]
            for i in lower[b]:
                rr[i].discard(b)
        del lower[b]
        del rows_m[b]
        self.steps[n].append((a, b, u, da, cb))

    def _bmap(self, n, k):
        key = (n, k)
        if key not in self._bmaps:
            a, b, u, t = self.batches[n][k]
            self._bmaps[key] = dict(zip(b.tolist(), zip(a.tolist(), u.tolist())))
        return self._bmaps[key]

    def forward(self, n: int, x: dict) -> dict:
        """Transport a chain of the original complex to the residue (degree n)."""
        x = dict(x)
        # rewrites from degree n+1 eliminations only read coordinates that are
        # never dropped, so they can all run before the degree-n drops
        if self.kill is not None:
            if n + 1 <= self.top:
                indptr, indices, data = self.complex.csc(n + 1)
                kn = self.kill[n]
                for k, (_, _, _, t) in enumerate(self.batches[n + 1]):
                    bm = self._bmap(n + 1, k)
                    for b in [b for b in x if b in bm]:
                        xb = x.get(b, 0)
                        if not xb:
                            continue
                        a, u = bm[b]
                        s, e = indptr[a], indptr[a + 1]
                        idx = indices[s:e]
                        keep = kn[idx] >= t
                        _axpy(x, -xb * u, dict(zip(idx[keep].tolist(), data[s:e][keep].tolist())))
            if 0 <= n <= self.top:
                kn = self.kill[n]
                x = {i: v for i, v in x.items() if kn[i] == _NEVER}
        if n + 1 <= self.top:
            for a, b, u, da, cb in self.steps[n + 1]:
                xb = x.get(b, 0)
                if xb:
                    _axpy(x, -xb * u, da)
        if 1 <= n <= self.top:
            for a, b, u, da, cb in self.steps[n]:
                x.pop(a, None)
        return x

    def backward(self, n: int, y: dict) -> dict:
        """Transport a residual chain back to the original complex (degree n).

        Bulk collapses are free, so they leave residual chains untouched.
        """
        y = dict(y)
        if 1 <= n <= self.top:
            for a, b, u, da, cb in reversed(self.steps[n]):
                if cb:
                    s = sum(y.get(c, 0) * v for c, v in cb.items())
                    if s:
                        y[a] = y.get(a, 0) - u * s
        return y

    def residual_matrix(self, n: int) -> list:
        rows = len(self.alive[n - 1]) if n >= 1 else 0
        out = il.zeros(rows, len(self.alive[n]))
        if n >= 1:
            prow = self.pos[n - 1]
            for k, j in enumerate(self.alive[n]):
                for i, v in self.cols[n][j].items():
                    out[prow[i]][k] = v
        return out


@dataclass
class _DegreeData:
    group: HomologyGroup
    rank_in: int            # rank of the incoming boundary (from degree n)
    Vinv: list              # from SNF of d_n on the residue
    P: list                 # from SNF of the image in kernel coordinates
    invariants: list        # all invariant factors of the image, ones included
    gens: list              # dense residual columns of generators, torsion first
    dim: int


class Homology:
    """Homology of an IntegerChainComplex with explicit generators and coordinates."""

    def __init__(self, C: IntegerChainComplex, bulk: bool | None = None):
        self.complex = C
        self._red = _Reduction(C, bulk)
        self._deg: dict = {}

    def _data(self, n: int) -> _DegreeData:
        if n in self._deg:
            return self._deg[n]
        red = self._red
        if not 0 <= n <= red.top:
            d = _DegreeData(HomologyGroup(), 0, [], [], [], [], 0)
            self._deg[n] = d
            return d
        m = len(red.alive[n])
        A = red.residual_matrix(n) if n >= 1 else []
        snf = il.smith_normal_form(A, len(A), m)
        r = snf.rank
        k = m - r
        if n + 1 <= red.top:
            B = red.residual_matrix(n + 1)
            VB = il.matmul(snf.Vinv, B, m, len(B[0]) if B else len(red.alive[n + 1]))
            Bk = VB[r:]
            ncol = len(red.alive[n + 1])
        else:
            Bk, ncol = il.zeros(k, 0), 0
        snf2 = il.smith_normal_form(Bk, k, ncol)
        diag = snf2.diag
        K = [[snf.V[i][j] for j in range(r, m)] for i in range(m)]  # m x k
        KP = il.matmul(K, snf2.Uinv, k, k) if k else il.zeros(m, 0)
        keep = [i for i in range(k) if i >= len(diag) or diag[i] != 1]
        gens = [[KP[row][i] for row in range(m)] for i in keep]
        torsion = tuple(d for d in diag if d != 1)
        group = HomologyGroup(k - len(diag), torsion)
        d = _DegreeData(group, r, snf.Vinv, snf2.U, diag, gens, m)
        self._deg[n] = d
        return d

    def group(self, n: int) -> HomologyGroup:
        return self._data(n).group

    def groups(self) -> list:
        return [self.group(n) for n in range(self.complex.top + 1)]

    def generators(self, n: int) -> list:
        """Cycles (sparse dicts over the degree-n basis) representing the generators."""
        d = self._data(n)
        red = self._red
        out = []
        for g in d.gens:
            y = {red.alive[n][i]: v for i, v in enumerate(g) if v}
            out.append(red.backward(n, y))
        return out

    def coordinates(self, n: int, z: dict) -> list:
        """Coordinates of the class of cycle z, torsion entries reduced mod their order."""
        d = self._data(n)
        if not d.group.orders:
            return []
        red = self._red
        x = red.forward(n, z)
        pos = red.pos[n]
        vec = [0] * d.dim
        for i, v in x.items():
            vec[pos[i]] = v
        t = il.matvec(d.Vinv, vec)
        if any(t[: d.rank_in]):
            raise ValueError(f"vector is not a cycle in degree {n}")
        c = il.matvec(d.P, t[d.rank_in:])
        out = []
        for i, v in enumerate(c):
            if i < len(d.invariants):
                q = d.invariants[i]
                if q == 1:
                    continue
                out.append(v % q)
            else:
                out.append(v)
        return out


def homology(C) -> list:
    """Graded homology groups in degrees 0..top."""
    if not isinstance(C, IntegerChainComplex):
        C = chain_complex(C)
    return Homology(C).groups()


# -- chain complexes of complexes and simplicial sets ----------------------------

def chain_complex(X, L=None) -> IntegerChainComplex:
    """Normalized chains of X (or of the pair (X, L)).

    X is a SimplicialComplex or FiniteSimplicialSet; L, when given, must be a
    subcomplex (resp. simplicial subset) of X.
    """
    if isinstance(X, SimplicialComplex):
        if L is not None:
            if not isinstance(L, SimplicialComplex) or not L.is_subcomplex_of(X):
                raise ValueError("L is not a subcomplex of K")
            skip = set(X.canonical(s) for s in L.simplices())
        else:
            skip = set()
        bases = [[s for s in X.simplices(n) if s not in skip] for n in range(X.dim + 1)] or [[]]
        idx = [{s: i for i, s in enumerate(b)} for b in bases]
        columns = [[{} for _ in bases[0]]]
        for n in range(1, len(bases)):
            cols = []
            for s in bases[n]:
                col = {}
                for i in range(len(s)):
                    f = s[:i] + s[i + 1:]
                    j = idx[n - 1].get(f)
                    if j is not None:
                        col[j] = col.get(j, 0) + (-1) ** i
                cols.append(col)
            columns.append(cols)
        return IntegerChainComplex(bases, columns, check=False)
    if isinstance(X, FiniteSimplicialSet):
        if L is not None:
            if not isinstance(L, FiniteSimplicialSet) or not X.is_simplicial_subset(L):
                raise ValueError("L is not a simplicial subset of X")
            skip = set(L.dims)
        else:
            skip = set()
        bases = [[g for g in X.generators(n) if g not in skip] for n in range(X.dim + 1)] or [[]]
        idx = [{g: i for i, g in enumerate(b)} for b in bases]
        columns = [[{} for _ in bases[0]]]
        for n in range(1, len(bases)):
            cols = []
            for g in bases[n]:
                col = {}
                for i, f in enumerate(X.generator_faces(g)):
                    if f.word:
                        continue
                    j = idx[n - 1].get(f.gen)
                    if j is not None:
                        v = col.get(j, 0) + (-1) ** i
                        if v:
                            col[j] = v
                        else:
                            col.pop(j)
                cols.append(col)
            columns.append(cols)
        return IntegerChainComplex(bases, columns, check=False)
    raise TypeError(f"cannot build chains of {type(X).__name__}")


# -- chain maps -------------------------------------------------------------------

class ChainMap:
    """Degreewise integer maps commuting with the boundaries.

    ``maps[n]`` sends the index j of a degree-n source basis element to its
    image, a sparse dict over the degree-n target basis; indices with zero
    image may be left out. A list with one dict per basis element is also
    accepted.
    """

    def __init__(self, source: IntegerChainComplex, target: IntegerChainComplex, maps, check: bool = True):
        self.source = source
        self.target = target
        self.maps = []
        for n in range(source.top + 1):
            m = maps[n] if n < len(maps) else {}
            nsrc = len(source.basis(n))
            if isinstance(m, dict):
                items = m.items()
                if m and (min(m) < 0 or max(m) >= nsrc):
                    raise ValueError(f"degree {n}: map refers to a missing source basis element")
            else:
                m = list(m)
                if len(m) != nsrc:
                    raise ValueError(f"degree {n}: map has {len(m)} columns, source has {nsrc}")
                items = enumerate(m)
            ntgt = len(target.basis(n))
            out = {}
            for j, c in items:
                c = {i: v for i, v in c.items() if v}
                if not c:
                    continue
                if min(c) < 0 or max(c) >= ntgt:
                    raise ValueError(f"degree {n}: image outside the target basis")
                out[j] = c
            self.maps.append(out)
        if check and not self.commutes():
            raise ValueError("map does not commute with the boundaries")

    @classmethod
    def from_labels(cls, source, target, fn: Callable, drop_missing: bool = False, check: bool = True):
        """Build from fn(n, label) -> {target label: coefficient}."""
        maps = []
        for n in range(source.top + 1):
            cols = {}
            for j, lab in enumerate(source.basis(n)):
                col = {}
                for t, v in fn(n, lab).items():
                    if not target.has_label(n, t):
                        if drop_missing:
                            continue
                        raise ValueError(f"{t!r} is not a degree-{n} basis element of the target")
                    i = target.index(n, t)
                    col[i] = col.get(i, 0) + v
                if col:
                    cols[j] = col
            maps.append(cols)
        return cls(source, target, maps, check=check)

    def image(self, n: int, j: int) -> dict:
        if 0 <= n < len(self.maps):
            return self.maps[n].get(j, {})
        return {}

    def apply(self, n: int, x: dict) -> dict:
        out: dict = {}
        if 0 <= n < len(self.maps):
            m = self.maps[n]
            for j, a in x.items():
                c = m.get(j)
                if c:
                    _axpy(out, a, c)
        return out

    def commutes(self) -> bool:
        for n in range(1, self.source.top + 1):
            for j in range(len(self.source.basis(n))):
                lhs = self.target.boundary(n, self.image(n, j))
                rhs = self.apply(n - 1, self.source.column(n, j))
                if lhs != rhs:
                    return False
        return True

    def compose(self, first: "ChainMap") -> "ChainMap":
        """self o first."""
        maps = [{j: self.apply(n, c) for j, c in first.maps[n].items()} for n in range(first.source.top + 1)]
        return ChainMap(first.source, self.target, maps, check=False)

    def matrix(self, n: int) -> np.ndarray:
        M = np.zeros((len(self.target.basis(n)), len(self.source.basis(n))), dtype=object)
        M[:, :] = 0
        if n < len(self.maps):
            for j, col in self.maps[n].items():
                for i, v in col.items():
                    M[i, j] = v
        return M


def identity_map(C: IntegerChainComplex) -> ChainMap:
    return ChainMap(C, C, [[{j: 1} for j in range(len(C.basis(n)))] for n in range(C.top + 1)], check=False)


def label_map(source, target, mapping: Callable = None, drop_missing: bool = False) -> ChainMap:
    """Map sending each labelled basis element to the same (or mapped) label."""
    f = mapping or (lambda lab: lab)
    return ChainMap.from_labels(source, target, lambda n, lab: {f(lab): 1}, drop_missing=drop_missing)


def _homology_of(C, cache):
    if cache is not None and id(C) in cache:
        return cache[id(C)]
    H = Homology(C)
    if cache is not None:
        cache[id(C)] = H
    return H


def induced_on_homology(f: ChainMap, Hs: Homology | None = None, Ht: Homology | None = None) -> list:
    """Per-degree integer matrices (as nested lists) of H_n(f) in the SNF generator bases."""
    Hs = Hs or Homology(f.source)
    Ht = Ht or Homology(f.target)
    out = []
    for n in range(f.source.top + 1):
        gens = Hs.generators(n)
        tgt = Ht.group(n) if n <= f.target.top else HomologyGroup()
        cols = []
        for z in gens:
            img = f.apply(n, z)
            cols.append(Ht.coordinates(n, img) if tgt.orders else [])
        rows = len(tgt.orders)
        out.append([[cols[j][i] for j in range(len(cols))] for i in range(rows)])
    return out


def is_isomorphism(M: list, src: HomologyGroup, tgt: HomologyGroup) -> bool:
    """Whether the matrix M of a homomorphism src -> tgt is bijective."""
    if src != tgt:
        return False
    t = len(src.torsion)
    n = len(src.orders)
    if n == 0:
        return True
    # torsion must land in torsion, so the free block alone decides the free quotient
    free = [row[t:] for row in M[t:]]
    if src.rank:
        if il.invariant_factors(free, src.rank, src.rank) != [1] * src.rank:
            return False
    if t:
        tors = [row[:t] for row in M[:t]]
        aug = [tors[i] + [src.torsion[i] if k == i else 0 for k in range(t)] for i in range(t)]
        if il.invariant_factors(aug, t, 2 * t) != [1] * t:
            return False
    return True


# -- exact sequences --------------------------------------------------------------

def _lift_lattice(cols: list, orders: tuple) -> list:
    """Generators (as row vectors) of the preimage in Z^m of the subgroup spanned by cols."""
    m = len(orders)
    vecs = [list(c) for c in cols]
    for i, d in enumerate(orders):
        if d:
            vecs.append([d if k == i else 0 for k in range(m)])
    return vecs


def _kernel_lattice(M: list, src: tuple, tgt: tuple) -> list:
    """Preimage in Z^m of the kernel of M between groups with coordinate orders src, tgt."""
    m = len(src)
    if m == 0:
        return []
    if not tgt:
        return [[1 if k == i else 0 for k in range(m)] for i in range(m)]
    # x in Z^m with M x in the relation lattice of the target: kernel of [M | -D]
    tors = [i for i, d in enumerate(tgt) if d]
    aug = [list(M[i]) + [(-tgt[i] if i == k else 0) for k in tors] for i in range(len(tgt))]
    vecs = [v[:m] for v in il.kernel_basis(aug, m + len(tors))]
    for i, d in enumerate(src):
        if d:
            vecs.append([d if k == i else 0 for k in range(m)])
    return vecs


def check_exact_at(f: list, g: list, o1: tuple, o2: tuple, o3: tuple) -> bool:
    """im(f) == ker(g) at the middle group, compared exactly as lattices.

    Groups are described by their coordinate orders (0 for a free coordinate,
    d for a Z/d coordinate); f and g are integer matrices in those coordinates.
    """
    m = len(o2)
    if m == 0:
        return True
    cols = [[f[i][j] for i in range(m)] for j in range(len(o1))]
    return il.same_lattice(_lift_lattice(cols, o2), _kernel_lattice(g, o2, o3), m)


def _zero(rows: int, cols: int) -> list:
    return [[0] * cols for _ in range(rows)]


def _mat(mats: list, n: int, rows: int, cols: int) -> list:
    if 0 <= n < len(mats) and len(mats[n]) == rows and (rows == 0 or len(mats[n][0]) == cols):
        return mats[n]
    return _zero(rows, cols)


@dataclass
class SequenceNode:
    name: str
    degree: int
    group: HomologyGroup
    orders: tuple = ()
    exact: bool | None = None


@dataclass
class SequenceReport:
    """A long exact sequence, its maps and the exactness verdict at each node."""

    nodes: list
    maps: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return all(n.exact for n in self.nodes)

    def lines(self) -> list:
        out = []
        for n in self.nodes:
            status = "exact" if n.exact else "NOT exact"
            out.append(f"{n.name}_{n.degree} = {n.group}  [{status}]")
        return out


def _node(name, degree, group, orders=None):
    return SequenceNode(name, degree, group, group.orders if orders is None else orders)


def _check_sequence(nodes: list, maps: list):
    """nodes[i] -> nodes[i+1] via maps[i]; marks exactness at each node."""
    for i, node in enumerate(nodes):
        o2 = node.orders
        if i == 0:
            o1, f = (), _zero(len(o2), 0)
        else:
            o1, f = nodes[i - 1].orders, maps[i - 1]
        if i == len(nodes) - 1:
            o3, g = (), []
        else:
            o3, g = nodes[i + 1].orders, maps[i]
        node.exact = check_exact_at(f, g, o1, o2, o3)


def _connecting(zs, lift, bound, H, n):
    """Coordinates in H_{n-1} of the boundaries of lifted relative cycles."""
    rows = len(H.group(n - 1).orders)
    cols = []
    for z in zs:
        b = bound(lift(z))
        cols.append(H.coordinates(n - 1, b) if rows else [])
    return [[cols[j][i] for j in range(len(cols))] for i in range(rows)]


def pair_long_exact_sequence(K: SimplicialComplex, L: SimplicialComplex) -> SequenceReport:
    """... -> H_p(L) -> H_p(K) -> H_p(K,L) -> H_{p-1}(L) -> ... -> H_0(K,L) -> 0."""
    L = K.subcomplex(L.simplices()) if not L.is_empty() else L   # use K's vertex order
    CL, CK, CKL = chain_complex(L), chain_complex(K), chain_complex(K, L)
    HL, HK, HKL = Homology(CL), Homology(CK), Homology(CKL)
    iL = induced_on_homology(label_map(CL, CK), HL, HK)
    jK = induced_on_homology(label_map(CK, CKL, drop_missing=True), HK, HKL)
    nodes, maps = [], []
    for p in range(CK.top, -1, -1):
        gL, gK, gR = HL.group(p), HK.group(p), HKL.group(p)
        nodes += [_node("H(L)", p, gL), _node("H(K)", p, gK), _node("H(K,L)", p, gR)]
        maps += [_mat(iL, p, len(gK.orders), len(gL.orders)), _mat(jK, p, len(gR.orders), len(gK.orders))]
        if p >= 1:
            def lift(z, p=p):
                return {CK.index(p, CKL.basis(p)[j]): v for j, v in z.items()}

            def bound(x, p=p):
                return {CL.index(p - 1, CK.basis(p - 1)[i]): v for i, v in CK.boundary(p, x).items()}

            maps.append(_connecting(HKL.generators(p), lift, bound, HL, p))
    _check_sequence(nodes, maps)
    return SequenceReport(nodes, maps)


def mayer_vietoris(K1: SimplicialComplex, K2: SimplicialComplex) -> SequenceReport:
    """... -> H_n(A) -> H_n(K1)+H_n(K2) -> H_n(K) -> H_{n-1}(A) -> ... with A = K1 cap K2.

    Maps: x -> (i1 x, i2 x), then (y1, y2) -> j1 y1 - j2 y2. The connecting map
    splits a cycle z of K as z1 + z2 with z1 on K1 and takes the class of dz1.
    """
    K = K1.union(K2)
    K1, K2 = K.subcomplex(K1.simplices()), K.subcomplex(K2.simplices())   # one vertex order throughout
    A = K1.intersection(K2)
    CA, C1, C2, CK = chain_complex(A), chain_complex(K1), chain_complex(K2), chain_complex(K)
    HA, H1, H2, HK = Homology(CA), Homology(C1), Homology(C2), Homology(CK)
    i1 = induced_on_homology(label_map(CA, C1), HA, H1)
    i2 = induced_on_homology(label_map(CA, C2), HA, H2)
    j1 = induced_on_homology(label_map(C1, CK), H1, HK)
    j2 = induced_on_homology(label_map(C2, CK), H2, HK)
    nodes, maps = [], []
    for n in range(CK.top, -1, -1):
        GA, G1, G2, GK = HA.group(n), H1.group(n), H2.group(n), HK.group(n)
        a, r1, r2, k = len(GA.orders), len(G1.orders), len(G2.orders), len(GK.orders)
        alpha = _mat(i1, n, r1, a) + _mat(i2, n, r2, a)
        m1, m2 = _mat(j1, n, k, r1), _mat(j2, n, k, r2)
        beta = [list(m1[i]) + [-x for x in m2[i]] for i in range(k)]
        nodes += [_node("H(A)", n, GA), _node("H(K1)+H(K2)", n, direct_sum(G1, G2), G1.orders + G2.orders),
                  _node("H(K)", n, GK)]
        maps += [alpha, beta]
        if n >= 1:
            def lift(z, n=n):
                out = {}
                for j, v in z.items():
                    s = CK.basis(n)[j]
                    if C1.has_label(n, s):
                        out[C1.index(n, s)] = v
                return out

            def bound(x, n=n):
                return {CA.index(n - 1, C1.basis(n - 1)[i]): v for i, v in C1.boundary(n, x).items()}

            maps.append(_connecting(HK.generators(n), lift, bound, HA, n))
    _check_sequence(nodes, maps)
    return SequenceReport(nodes, maps)


# -- cellular chains ---------------------------------------------------------------

def cellular_chain_complex(X: FiniteSimplicialSet) -> IntegerChainComplex:
    """C_n = H_n(X^n, X^{n-1}), boundary the connecting map of the triple.

    The differential is computed as the composite
    H_n(X^n, X^{n-1}) -> H_{n-1}(X^{n-1}) -> H_{n-1}(X^{n-1}, X^{n-2}).
    """
    top = X.dim
    skel = [X.skeleton(n) for n in range(top + 1)]
    empty = FiniteSimplicialSet({}, {})
    rel = []
    for n in range(top + 1):
        lower = skel[n - 1] if n >= 1 else empty
        C = chain_complex(skel[n], lower if n >= 1 else None)
        rel.append((C, Homology(C)))
    bases, columns = [], []
    for n in range(top + 1):
        C, H = rel[n]
        gens = H.generators(n)
        # generators of H_n(X^n, X^{n-1}) are in bijection with the n-cells
        bases.append([C.basis(n)[next(iter(z))] if len(z) == 1 else tuple(sorted(z.items())) for z in gens])
        if n == 0:
            columns.append([{} for _ in gens])
            continue
        full = chain_complex(skel[n])
        Cm, Hm = rel[n - 1]
        cols = []
        for z in gens:
            lifted = {full.index(n, C.basis(n)[j]): v for j, v in z.items()}
            bd = full.boundary(n, lifted)
            proj = {}
            for i, v in bd.items():
                lab = full.basis(n - 1)[i]
                if Cm.has_label(n - 1, lab):
                    proj[Cm.index(n - 1, lab)] = v
            coords = Hm.coordinates(n - 1, proj) if Hm.group(n - 1).orders else []
            cols.append({i: v for i, v in enumerate(coords) if v})
        columns.append(cols)
    return IntegerChainComplex(bases, columns)


# -- subdivision ---------------------------------------------------------------------

def sd_chain_map(K: SimplicialComplex, SK: SimplicialComplex | None = None) -> ChainMap:
    """Sd: C(K) -> C(sd K), Sd(v) = [v], Sd(s) = b_s . Sd(ds).

    The barycenter is prepended to each simplex of Sd(ds) and the result is
    reordered into sd K's vertex order with the permutation sign.
    """
    SK = SK or subdivide(K)
    memo: dict = {}

    def sd(s):
        if s in memo:
            return memo[s]
        if len(s) == 1:
            out = {(s,): 1}
        else:
            out = {}
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                for t, v in sd(face).items():
                    simplex, sign = SK.orient((s,) + t)
                    key = simplex
                    nv = out.get(key, 0) + (-1) ** i * v * sign
                    if nv:
                        out[key] = nv
                    else:
                        out.pop(key, None)
        memo[s] = out
        return out

    CK, CS = chain_complex(K), chain_complex(SK)
    return ChainMap.from_labels(CK, CS, lambda n, s: sd(s))


def last_vertex_map(K: SimplicialComplex, SK: SimplicialComplex | None = None) -> ChainMap:
    """C(sd K) -> C(K) induced by sending a vertex s of sd K to max(s) in K's order."""
    SK = SK or subdivide(K)
    CK, CS = chain_complex(K), chain_complex(SK)

    def lv(n, chain):
        img = tuple(c[-1] for c in chain)
        if len(set(img)) < len(img):
            return {}
        simplex, sign = K.orient(img)
        return {simplex: sign}

    return ChainMap.from_labels(CS, CK, lv)


# -- reports ---------------------------------------------------------------------------

def format_homology(groups: Sequence[HomologyGroup]) -> list:
    """Text lines `H_n = ...` for the nonzero degrees (`H_* = 0` if none)."""
    lines = [f"H_{n} = {g}" for n, g in enumerate(groups) if not g.is_zero]
    return lines or ["H_* = 0"]


def homology_to_dict(groups: Sequence[HomologyGroup]) -> list:
    return [dict(degree=n, **g.to_dict()) for n, g in enumerate(groups)]
