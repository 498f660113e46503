"""The category R_U of a cover, its nerve, and the blowup model of B X_U.

The blowup is the bicomplex whose (p, q) part is the direct sum, over strict
chains sigma_p > ... > sigma_0 of index sets, of the q-chains of U_{sigma_p}.
Its total complex maps to the chains of the base by the p = 0 inclusion, and
for a covering family that map is a homology isomorphism.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .complexes import Cover, SimplicialComplex, nerve_of_cover, subdivide
from .homology import (ChainMap, Homology, IntegerChainComplex, chain_complex, induced_on_homology,
                       is_isomorphism, _axpy)
from .sset import SmallCategory, nerve_category, poset_category


@dataclass
class CoverDiagram:
    """Index sets with nonempty intersection, ordered by reverse inclusion."""

    cover: Cover
    objects: tuple
    parts: dict

    def chains(self) -> list:
        """Strict chains (sigma_p, ..., sigma_0), biggest set first."""
        objs = sorted(self.objects, key=len)
        below = {s: [t for t in objs if len(t) < len(s) and set(t) < set(s)] for s in objs}
        memo = {}

        def down(s):
            if s in memo:
                return memo[s]
            out = [(s,)]
            for t in below[s]:
                out.extend((s,) + c for c in down(t))
            memo[s] = out
            return out

        out = []
        for s in objs:
            out.extend(down(s))
        return out


def cover_diagram(cover: Cover) -> CoverDiagram:
    N = nerve_of_cover(cover)
    objects = N.simplices()
    return CoverDiagram(cover, objects, {s: cover.intersection(s) for s in objects})


def ru_category(cover: Cover) -> SmallCategory:
    """Objects: index sets with U_sigma nonempty; one arrow sigma -> tau per sigma >= tau."""
    objects = nerve_of_cover(cover).simplices()
    return poset_category(objects, lambda a, b: set(a) >= set(b))


def bru_chain_complex(cover: Cover) -> IntegerChainComplex:
    """Normalized chains of the nerve of R_U."""
    return chain_complex(nerve_category(ru_category(cover)))


@dataclass
class BasisIsomorphism:
    """Signed basis bijection between two chain complexes, checked against the boundaries."""

    source: IntegerChainComplex
    target: IntegerChainComplex
    images: list            # per degree: list of (target index, sign)
    bijective: bool
    commutes: bool

    @property
    def ok(self) -> bool:
        return self.bijective and self.commutes


def bru_isomorphism(cover: Cover) -> BasisIsomorphism:
    """Match N R_U with sd N U: a chain sigma_0 > ... > sigma_n goes to the reversed chain.

    The reversal carries the sign (-1)^(n(n+1)/2), which makes the bijection a
    chain map.
    """
    cat = ru_category(cover)
    src = chain_complex(nerve_category(cat))
    SN = subdivide(nerve_of_cover(cover))
    tgt = chain_complex(SN)
    images, bij = [], True
    for n in range(src.top + 1):
        sign = -1 if (n * (n + 1) // 2) % 2 else 1
        imgs = []
        for g in src.basis(n):
            objs = (g[1],) if g[0] == "obj" else (cat.source(g[1]),) + tuple(cat.target(f) for f in g[1:])
            lab = tuple(reversed(objs))
            if not tgt.has_label(n, lab):
                bij = False
                imgs.append((None, 0))
                continue
            imgs.append((tgt.index(n, lab), sign))
        hit = {i for i, _ in imgs}
        if len(hit) != len(tgt.basis(n)) or None in hit:
            bij = False
        images.append(imgs)
    if src.top != tgt.top:
        bij = False
    commutes = bij
    if bij:
        P = ChainMap(src, tgt, [[{i: s} for i, s in imgs] for imgs in images], check=False)
        commutes = P.commutes()
    return BasisIsomorphism(src, tgt, images, bij, commutes)


@dataclass
class BlowupComplex:
    """Total complex of the cover bicomplex together with its bigrading.

    Basis labels are pairs (chain, simplex): chain = (sigma_p, ..., sigma_0)
    with sigma_p the biggest index set, simplex a q-simplex of U_{sigma_p}.
    """

    diagram: CoverDiagram
    total: IntegerChainComplex
    p0_cells: list = field(default_factory=list)   # per q: (first index, labels of the p = 0 cells)

    def bidegree(self, label) -> tuple:
        chain, s = label
        return len(chain) - 1, len(s) - 1

    def differentials(self, n: int) -> tuple:
        """Horizontal and vertical parts of the degree-n total boundary, column by column."""
        hcols, vcols = [], []
        for j, lab in enumerate(self.total.basis(n)):
            p = len(lab[0]) - 1
            col = self.total.columns[n][j]
            h, v = {}, {}
            for i, x in col.items():
                if len(self.total.basis(n - 1)[i][0]) - 1 == p:
                    v[i] = x
                else:
                    h[i] = x
            hcols.append(h)
            vcols.append(v)
        return hcols, vcols

    def check_bicomplex(self) -> dict:
        """Exact checks d_h^2 = 0, d_v^2 = 0 and d_h d_v + d_v d_h = 0."""
        parts = [([], [])] + [self.differentials(n) for n in range(1, self.total.top + 1)]

        def apply(which, n, x):
            out = {}
            if n >= 1:
                for j, a in x.items():
                    _axpy(out, a, parts[n][which][j])
            return out

        hh = vv = mixed = True
        for n in range(2, self.total.top + 1):
            for j in range(len(self.total.basis(n))):
                h = parts[n][0][j]
                v = parts[n][1][j]
                if apply(0, n - 1, h):
                    hh = False
                if apply(1, n - 1, v):
                    vv = False
                m = apply(0, n - 1, v)
                _axpy(m, 1, apply(1, n - 1, h))
                if m:
                    mixed = False
        return {"dh_squared_zero": hh, "dv_squared_zero": vv, "anticommute": mixed,
                "total_squared_zero": self.total.is_differential()}


def _require_covering(cover: Cover):
    missing = cover.uncovered_simplices()
    if missing:
        raise ValueError(f"family does not cover the base; e.g. simplex {missing[0]} lies in no part")


class _BlowupBasis:
    """Lazy labels of one degree of the blowup: index -> (chain, simplex)."""

    def __init__(self, blocks: list, chain_label, simplices):
        # blocks: (start, p, q, level offsets of cells per chain)
        self.blocks = blocks
        self.starts = [b[0] for b in blocks]
        self.size = blocks[-1][0] + int(blocks[-1][3][-1]) if blocks else 0
        self._chain = chain_label
        self._simp = simplices

    def __len__(self):
        return self.size

    def __getitem__(self, j):
        if isinstance(j, slice):
            return [self[i] for i in range(*j.indices(self.size))]
        if j < 0:
            j += self.size
        if not 0 <= j < self.size:
            raise IndexError(j)
        start, p, q, cum, heads, first = self.blocks[bisect_right(self.starts, j) - 1]
        r = j - start
        ch = int(np.searchsorted(cum, r, side="right")) - 1
        return self._chain(first + ch), self._simp[int(heads[ch])][q][r - int(cum[ch])]

    def __iter__(self):
        for j in range(self.size):
            yield self[j]


def blowup_total_complex(cover: Cover) -> BlowupComplex:
    """Bicomplex with d_h the nerve alternating sum and d_v = (-1)^p times the boundary of U.

    Horizontal faces: d_i deletes sigma_{p-i} from the chain; deleting the
    biggest set re-reads the coefficient simplex in the larger U. The total
    differential is d_h + d_v. In each degree the basis runs through p, then
    the chains of length p + 1, then the simplices of U_{sigma_p}.
    """
    _require_covering(cover)
    diag = cover_diagram(cover)
    objs = list(diag.objects)
    nobj = len(objs)
    K = cover.base
    sets = [frozenset(o) for o in objs]

    # strict supersets among the index sets, as a CSR adjacency
    above = [[j for j in range(nobj) if sets[i] < sets[j]] for i in range(nobj)]
    aptr = np.zeros(nobj + 1, dtype=np.int64)
    np.cumsum([len(a) for a in above], out=aptr[1:])
    aidx = np.array([j for a in above for j in a], dtype=np.int64)

    # chains level by level: level p + 1 extends a level-p chain r by some s above head(r).
    # faces(s + r) = [r] + [s + f for f in faces(r)], with s + () = (s,)
    heads = [np.arange(nobj, dtype=np.int64)]
    rests = [np.full(nobj, -1, dtype=np.int64)]
    faces = [np.zeros((nobj, 0), dtype=np.int64)]
    first = [0]
    total_chains = nobj
    while True:
        H, F = heads[-1], faces[-1]
        cnt = aptr[H + 1] - aptr[H]
        m = int(cnt.sum())
        if not m:
            break
        p = len(heads) - 1
        rep = np.repeat(np.arange(len(H), dtype=np.int64), cnt)
        pos = np.arange(m, dtype=np.int64) - np.repeat(np.cumsum(cnt) - cnt, cnt) + np.repeat(aptr[H], cnt)
        S = aidx[pos]
        NF = np.empty((m, p + 2), dtype=np.int64)
        NF[:, 0] = first[p] + rep
        if p == 0:
            NF[:, 1] = S
        else:
            # look up the level-p chain (s, f) for each face f of r
            keys = heads[p] * (total_chains + 1) + (rests[p] + 1)
            order = np.argsort(keys)
            q = S[:, None] * (total_chains + 1) + (F[rep] + 1)
            NF[:, 1:] = first[p] + order[np.searchsorted(keys, q, sorter=order)]
        heads.append(S)
        rests.append(first[p] + rep)
        faces.append(NF)
        first.append(total_chains)
        total_chains += m
    levels = len(heads)

    # simplices of each U_sigma by dimension, in base numbering
    dimK = K.dim
    base_idx = [{x: i for i, x in enumerate(K.simplices(q))} for q in range(dimK + 1)]
    nbase = [len(b) for b in base_idx]
    simp = []
    sizes_q = np.zeros((dimK + 1, nobj), dtype=np.int64)
    POS = [np.full((nobj, nbase[q]), -1, dtype=np.int64) for q in range(dimK + 1)]
    GID = [[None] * nobj for _ in range(dimK + 1)]
    for o, ob in enumerate(objs):
        U = diag.parts[ob]
        by_q = [U.simplices(q) for q in range(dimK + 1)]
        simp.append(by_q)
        for q, lst in enumerate(by_q):
            g = np.array([base_idx[q][x] for x in lst], dtype=np.int64)
            GID[q][o] = g
            sizes_q[q, o] = len(g)
            POS[q][o, g] = np.arange(len(g))
    gstart = np.zeros((dimK + 1, nobj + 1), dtype=np.int64)
    np.cumsum(sizes_q, axis=1, out=gstart[:, 1:])
    gflat = [np.concatenate(GID[q]) if nobj else np.zeros(0, dtype=np.int64) for q in range(dimK + 1)]
    # base faces: BF[q][g, t] = base index of the face of g without its t-th vertex
    BF = [None]
    for q in range(1, dimK + 1):
        BF.append(np.array([[base_idx[q - 1][x[:t] + x[t + 1:]] for t in range(q + 1)]
                            for x in K.simplices(q)], dtype=np.int64).reshape(-1, q + 1))

    top = levels - 1 + dimK
    # cells of bidegree (p, q): chains of level p times q-simplices of the head
    ncell = np.zeros((levels, dimK + 1), dtype=np.int64)
    cum = {}
    for p in range(levels):
        for q in range(dimK + 1):
            sz = sizes_q[q][heads[p]]
            c = np.zeros(len(sz) + 1, dtype=np.int64)
            np.cumsum(sz, out=c[1:])
            cum[p, q] = c
            ncell[p, q] = c[-1]
    start = {}
    for n in range(top + 1):
        acc = 0
        for p in range(levels):
            q = n - p
            if 0 <= q <= dimK:
                start[p, q] = acc
                acc += int(ncell[p, q])

    def cells(p, q):
        c = cum[p, q]
        total = int(c[-1])
        ch = np.repeat(np.arange(len(c) - 1, dtype=np.int64), np.diff(c))
        k = np.arange(total, dtype=np.int64) - c[ch]
        return ch, k

    trip = [[] for _ in range(top + 1)]
    for p in range(levels):
        vsign = -1 if p % 2 else 1
        for q in range(dimK + 1):
            if not ncell[p, q]:
                continue
            n = p + q
            ch, k = cells(p, q)
            col = start[p, q] + np.arange(len(ch), dtype=np.int64)
            o = heads[p][ch]
            g = gflat[q][gstart[q][o] + k]
            if p:
                F = faces[p][ch] - first[p - 1]
                f0 = F[:, 0]
                row = start[p - 1, q] + cum[p - 1, q][f0] + POS[q][heads[p - 1][f0], g]
                trip[n].append((row, col, np.ones(len(ch), dtype=np.int64)))
                for i in range(1, p + 1):
                    fi = F[:, i]
                    row = start[p - 1, q] + cum[p - 1, q][fi] + k
                    trip[n].append((row, col, np.full(len(ch), -1 if i % 2 else 1, dtype=np.int64)))
            if q:
                base = start[p, q - 1] + cum[p, q - 1][ch]
                for t in range(q + 1):
                    row = base + POS[q - 1][o, BF[q][g, t]]
                    trip[n].append((row, col, np.full(len(ch), vsign * (-1 if t % 2 else 1), dtype=np.int64)))

    csc = [None]
    for n in range(1, top + 1):
        ncol = sum(int(ncell[p, n - p]) for p in range(levels) if 0 <= n - p <= dimK)
        if trip[n]:
            rows = np.concatenate([t[0] for t in trip[n]])
            cols = np.concatenate([t[1] for t in trip[n]])
            vals = np.concatenate([t[2] for t in trip[n]])
        else:
            rows = cols = vals = np.zeros(0, dtype=np.int64)
        order = np.lexsort((rows, cols))
        indptr = np.zeros(ncol + 1, dtype=np.int64)
        np.cumsum(np.bincount(cols, minlength=ncol), out=indptr[1:])
        csc.append((indptr, rows[order], vals[order]))

    chain_cache = {}

    def chain_label(c):
        if c not in chain_cache:
            p = int(np.searchsorted(first, c, side="right")) - 1
            r = int(rests[p][c - first[p]])
            chain_cache[c] = (objs[int(heads[p][c - first[p]])],) + (chain_label(r) if r >= 0 else ())
        return chain_cache[c]

    bases = []
    for n in range(top + 1):
        blocks = []
        for p in range(levels):
            q = n - p
            if 0 <= q <= dimK and ncell[p, q]:
                blocks.append((start[p, q], p, q, cum[p, q], heads[p], first[p]))
        bases.append(_BlowupBasis(blocks, chain_label, simp) if blocks else ())
    total = IntegerChainComplex(bases, csc=csc, check=False)
    p0 = [(start[0, q], [(objs[o], x) for o in range(nobj) for x in simp[o][q]]) for q in range(dimK + 1)]
    return BlowupComplex(diag, total, p0)


def projection_to_base(blowup: BlowupComplex | Cover, base_chains: IntegerChainComplex | None = None,
                       check: bool = True) -> ChainMap:
    """The p = 0 summands include into the chains of the base; everything else goes to 0."""
    if isinstance(blowup, Cover):
        blowup = blowup_total_complex(blowup)
    base = blowup.diagram.cover.base
    C = base_chains or chain_complex(base)
    maps = []
    for q, (s0, labels) in enumerate(blowup.p0_cells):
        maps.append({s0 + k: {C.index(q, x): 1} for k, (_, x) in enumerate(labels)})
    return ChainMap(blowup.total, C, maps, check=check)


@dataclass
class SegalReport:
    """Per-degree groups of the blowup and the base, the induced matrices and the verdict."""

    source_groups: list
    target_groups: list
    matrices: list
    iso: list
    sizes: tuple = ()

    @property
    def passed(self) -> bool:
        return all(self.iso)

    def lines(self) -> list:
        out = []
        for n, (a, b, m, ok) in enumerate(zip(self.source_groups, self.target_groups, self.matrices, self.iso)):
            out.append(f"degree {n}: H(blowup) = {a}, H(base) = {b}, H(pr) = {m}  {'PASS' if ok else 'FAIL'}")
        return out


def verify_segal(cover: Cover) -> SegalReport:
    """Check that the projection from the blowup induces an isomorphism in every degree."""
    B = blowup_total_complex(cover)
    C = chain_complex(cover.base)
    pr = projection_to_base(B, C, check=False)
    Hs, Ht = Homology(B.total), Homology(C)
    top = max(B.total.top, C.top)
    mats = induced_on_homology(pr, Hs, Ht)
    src = [Hs.group(n) for n in range(top + 1)]
    tgt = [Ht.group(n) for n in range(top + 1)]
    while len(mats) < top + 1:
        n = len(mats)
        mats.append([[0] * len(src[n].orders) for _ in tgt[n].orders])
    iso = [is_isomorphism(mats[n], src[n], tgt[n]) for n in range(top + 1)]
    return SegalReport(src, tgt, mats, iso, B.total.ranks)
