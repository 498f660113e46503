"""Exact integer linear algebra on dense matrices of Python ints.

Matrices are lists of row lists. Everything here is arbitrary precision; no
floating point or modular arithmetic is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

Matrix = list


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def as_matrix(a, m: int | None = None, n: int | None = None) -> Matrix:
    """Copy anything row-iterable (numpy arrays included) into a list of int rows."""
    rows = [[int(x) for x in row] for row in a]
    if m is not None and not rows:
        rows = zeros(m, n or 0)
    return rows


def shape(A: Matrix, ncols: int | None = None) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else (ncols or 0))


def matmul(A: Matrix, B: Matrix, inner: int | None = None, ncols: int | None = None) -> Matrix:
    m = len(A)
    k = len(B) if inner is None else inner
    n = len(B[0]) if B else (ncols or 0)
    out = zeros(m, n)
    for i in range(m):
        Ai = A[i]
        Oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(n):
                    if Bt[j]:
                        Oi[j] += a * Bt[j]
    return out


def matvec(A: Matrix, x) -> list:
    return [sum(a * b for a, b in zip(row, x) if a and b) for row in A]


def transpose(A: Matrix, ncols: int | None = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def is_zero(A: Matrix) -> bool:
    return all(not x for row in A for x in row)


@dataclass
class SmithForm:
    """U @ A @ V = D with U, V unimodular; ``diag`` lists the nonzero invariant factors."""

    diag: list
    U: Matrix
    Uinv: Matrix
    V: Matrix
    Vinv: Matrix
    shape: tuple

    @property
    def rank(self) -> int:
        return len(self.diag)


def smith_normal_form(A, nrows: int | None = None, ncols: int | None = None, transforms: bool = True) -> SmithForm:
    """Smith normal form with transformation matrices.

    Pivoting is deterministic: smallest nonzero absolute value in the active
    block, ties broken by lowest row then lowest column. The pivot column is
    cleared (row operations) before the pivot row (column operations).
    """
    A = [list(r) for r in A]
    m = len(A) if nrows is None else nrows
    n = (len(A[0]) if A else 0) if ncols is None else ncols
    if not A:
        A = zeros(m, n)
    U = identity(m) if transforms else None
    Uinv = identity(m) if transforms else None
    V = identity(n) if transforms else None
    Vinv = identity(n) if transforms else None

    def swap_rows(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        if transforms:
            U[i], U[j] = U[j], U[i]
            for row in Uinv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in A:
            row[i], row[j] = row[j], row[i]
        if transforms:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        Ad, As = A[dst], A[src]
        for j in range(n):
            if As[j]:
                Ad[j] += q * As[j]
        if transforms:
            Ud, Us = U[dst], U[src]
            for j in range(m):
                if Us[j]:
                    Ud[j] += q * Us[j]
            for row in Uinv:
                if row[dst]:
                    row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if transforms:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
            Vd, Vs = Vinv[dst], Vinv[src]
            for j in range(n):
                if Vd[j]:
                    Vs[j] -= q * Vd[j]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        if transforms:
            U[i] = [-x for x in U[i]]
            for row in Uinv:
                row[i] = -row[i]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                x = Ai[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = A[i][t]
                if x:
                    add_row(i, t, -(x // p))
                    if A[i][t]:
                        dirty = True
            if not dirty:
                for j in range(t + 1, n):
                    x = A[t][j]
                    if x:
                        add_col(j, t, -(x // p))
                        if A[t][j]:
                            dirty = True
            if dirty:
                best = None
                for i in range(t, m):
                    for j in (range(t, n) if i == t else (t,)):
                        x = A[i][j]
                        if x and (best is None or abs(x) < best[0]):
                            best = (abs(x), i, j)
                _, pi, pj = best
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            bad = None
            for i in range(t + 1, m):
                Ai = A[i]
                for j in range(t + 1, n):
                    if Ai[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
            # the new row t has entries not divisible by p; move the smallest back to the pivot
            best = None
            for j in range(t, n):
                x = A[t][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), j)
            if best[0] < abs(p):
                swap_cols(t, best[1])
        if A[t][t] < 0:
            negate_row(t)
        diag.append(A[t][t])
        t += 1
    return SmithForm(diag, U, Uinv, V, Vinv, (m, n))


def invariant_factors(A, nrows=None, ncols=None) -> list:
    return smith_normal_form(A, nrows, ncols, transforms=False).diag


def rank(A, nrows=None, ncols=None) -> int:
    return len(invariant_factors(A, nrows, ncols))


def kernel_basis(A, ncols: int) -> Matrix:
    """Columns spanning the integer kernel of A, returned as a list of vectors."""
    snf = smith_normal_form(A, len(A), ncols)
    r = snf.rank
    return [[snf.V[i][j] for i in range(ncols)] for j in range(r, ncols)]


def hermite_rows(vectors, n: int) -> list:
    """Canonical (row-style) Hermite normal form of the lattice spanned by ``vectors``.

    Returns the nonzero rows as tuples; two lattices are equal iff their HNFs are.
    """
    rows = [list(v) for v in vectors if any(v)]
    out = []
    col = 0
    while rows and col < n:
        live = [r for r in rows if r[col]]
        dead = [r for r in rows if not r[col]]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                if r2[col]:
                    nxt.append(r2)
                elif any(r2):
                    dead.append(r2)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append(piv)
        rows = dead
        col += 1
    # reduce entries above pivots into [0, pivot)
    pivcols = []
    for r in out:
        pivcols.append(next(j for j, x in enumerate(r) if x))
    for k in range(len(out)):
        c = pivcols[k]
        p = out[k][c]
        for i in range(k):
            q = out[i][c] // p
            if q:
                out[i] = [a - q * b for a, b in zip(out[i], out[k])]
    return [tuple(r) for r in out]


def same_lattice(A, B, n: int) -> bool:
    return hermite_rows(A, n) == hermite_rows(B, n)
