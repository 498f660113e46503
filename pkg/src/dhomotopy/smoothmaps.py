"""Numerical evaluation of the smoothing maps on standard simplices.

Points of a simplex are barycentric coordinate tuples. Everything here is plain
double precision; the identities the constructions are supposed to satisfy
are checked numerically by the verification suite.

The smooth step used throughout is the usual quotient of exp(-1/t) bumps, so
every cutoff is flat to infinite order at both ends of its transition band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence

import numpy as np

from .complexes import SimplicialComplex

SUM_TOL = 1e-12
NEG_TOL = 1e-15


# -- points ---------------------------------------------------------------------

@dataclass(frozen=True)
class BaryPoint:
    """Barycentric coordinates of a point in a closed simplex.

    ``vertices`` names the simplex the coordinates refer to; None means the
    standard simplex with vertices 0..p.
    """

    coords: tuple
    vertices: tuple | None = None

    def __post_init__(self):
        c = tuple(float(x) for x in self.coords)
        if not c:
            raise ValueError("a point needs at least one coordinate")
        if any(math.isnan(x) for x in c):
            raise ValueError("NaN coordinate")
        if min(c) < -NEG_TOL:
            raise ValueError(f"negative barycentric coordinate {min(c)!r}")
        if abs(math.fsum(c) - 1.0) > SUM_TOL:
            raise ValueError(f"coordinates sum to {math.fsum(c)!r}, not 1")
        object.__setattr__(self, "coords", tuple(0.0 if x < 0 else x for x in c))
        if self.vertices is not None:
            v = tuple(self.vertices)
            if len(v) != len(c):
                raise ValueError("one vertex label per coordinate expected")
            object.__setattr__(self, "vertices", v)

    @property
    def p(self) -> int:
        return len(self.coords) - 1

    @property
    def labels(self) -> tuple:
        return self.vertices if self.vertices is not None else tuple(range(len(self.coords)))

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return len(self.coords)

    def array(self) -> np.ndarray:
        return np.array(self.coords)

    def carrier(self) -> "BaryPoint":
        """The same point in the smallest closed face containing it."""
        keep = [i for i, x in enumerate(self.coords) if x > 0]
        lab = self.labels
        return BaryPoint(tuple(self.coords[i] for i in keep), tuple(lab[i] for i in keep))

    def on(self, vertices: Sequence) -> "BaryPoint":
        """Coordinates with respect to a larger (or reordered) vertex list."""
        val = dict(zip(self.labels, self.coords))
        missing = set(val).difference(vertices)
        if any(val[v] > 0 for v in missing):
            raise ValueError(f"point is not in the simplex {tuple(vertices)}")
        return BaryPoint(tuple(val.get(v, 0.0) for v in vertices), tuple(vertices))

    def distance(self, other) -> float:
        """Max-norm distance of coordinate vectors."""
        b = other.coords if isinstance(other, BaryPoint) else tuple(other)
        return max(abs(x - y) for x, y in zip(self.coords, b))


def _coords(x) -> tuple:
    if isinstance(x, BaryPoint):
        return x.coords
    return BaryPoint(tuple(x)).coords


def vertex(p: int, i: int) -> BaryPoint:
    return BaryPoint(tuple(1.0 if j == i else 0.0 for j in range(p + 1)))


def barycenter(p: int, face: Sequence[int] | None = None) -> BaryPoint:
    face = range(p + 1) if face is None else face
    w = 1.0 / len(face)
    return BaryPoint(tuple(w if j in face else 0.0 for j in range(p + 1)))


def coface(p: int, i: int, x) -> BaryPoint:
    """d^i: insert a zero coordinate at slot i (Delta^{p-1} -> Delta^p)."""
    c = _coords(x)
    if len(c) != p:
        raise ValueError(f"expected a point of Delta^{p - 1}")
    return BaryPoint(c[:i] + (0.0,) + c[i:])


def permute(perm: Sequence[int], x) -> BaryPoint:
    """Action of a permutation of the vertices: vertex i goes to perm[i]."""
    c = _coords(x)
    out = [0.0] * len(c)
    for i, v in enumerate(c):
        out[perm[i]] = v
    return BaryPoint(tuple(out))


def sample_simplex(rng: np.random.Generator, p: int, n: int) -> np.ndarray:
    """n uniform random points of Delta^p (rows)."""
    if p == 0:
        return np.ones((n, 1))
    x = rng.dirichlet(np.ones(p + 1), size=n)
    return x / x.sum(axis=1, keepdims=True)


# -- charts ---------------------------------------------------------------------

def phi_chart(p: int, i: int, x, t: float) -> BaryPoint:
    """(1 - t) * vertex i + t * d^i(x) for x in Delta^{p-1} and 0 <= t < 1."""
    if not 0 <= i <= p:
        raise ValueError(f"vertex index {i} out of range for Delta^{p}")
    if not 0 <= t < 1:
        raise ValueError(f"chart parameter t = {t} must lie in [0, 1)")
    d = coface(p, i, x).coords
    out = tuple(t * v for v in d)
    return BaryPoint(out[:i] + (out[i] + (1 - t),) + out[i + 1:])


def _index_set(p: int, I) -> tuple:
    I = tuple(sorted(set(I)))
    if not I or I[0] < 0 or I[-1] > p:
        raise ValueError(f"index set {I} is not a nonempty subset of 0..{p}")
    return I


def phi_I(p: int, I, x) -> tuple:
    """Chart of U_I = {x_i > 0 for i in I} onto (open Delta^k) x Delta^{p-k}_0.

    Returns (y, z): y = the I-coordinates rescaled to sum 1, z = (their sum,
    the remaining coordinates in increasing index order).
    """
    I = _index_set(p, I)
    c = _coords(x)
    if len(c) != p + 1:
        raise ValueError(f"expected a point of Delta^{p}")
    bad = [i for i in I if not c[i] > 0]
    if bad:
        raise ValueError(f"point is not in U_{set(I)}: coordinate {bad[0]} vanishes")
    S = math.fsum(c[i] for i in I)
    J = [j for j in range(p + 1) if j not in I]
    y = BaryPoint(tuple(c[i] / S for i in I))
    z = BaryPoint((1.0 - math.fsum(c[j] for j in J),) + tuple(c[j] for j in J))
    return y, z


def phi_I_inverse(p: int, I, y, z) -> BaryPoint:
    I = _index_set(p, I)
    y, z = _coords(y), _coords(z)
    if len(y) != len(I) or len(z) != p + 2 - len(I):
        raise ValueError("chart coordinates do not match the index set")
    if not z[0] > 0 or min(y) <= 0:
        raise ValueError("chart coordinates outside (open Delta^k) x Delta^{p-k}_0")
    J = [j for j in range(p + 1) if j not in I]
    out = [0.0] * (p + 1)
    for i, v in zip(I, y):
        out[i] = v * z[0]
    for j, v in zip(J, z[1:]):
        out[j] = v
    return BaryPoint(tuple(out))


# -- cutoffs --------------------------------------------------------------------

def _bump(u: float) -> float:
    return math.exp(-1.0 / u) if u > 0 else 0.0


def smooth_step(u: float) -> float:
    """0 for u <= 0, 1 for u >= 1, smooth and increasing in between."""
    if u <= 0:
        return 0.0
    if u >= 1:
        return 1.0
    a, b = _bump(u), _bump(1.0 - u)
    return a / (a + b)


@dataclass(frozen=True)
class CutoffParams:
    """Cutoff lambda with lambda(t) = 0 for t <= eps/2 and t for t >= eps."""

    epsilon: float

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")


def cutoff_lambda(params: CutoffParams | float, t: float) -> float:
    eps = params.epsilon if isinstance(params, CutoffParams) else float(params)
    if t <= eps / 2:
        return 0.0
    if t >= eps:
        return t
    return t * smooth_step((t - eps / 2) / (eps / 2))


def homotopy_Lambda(params: CutoffParams | float, t: float, s: float) -> float:
    """Linear homotopy from lambda (s = 0) to the identity (s = 1)."""
    if s == 1:
        return t
    return (1 - s) * cutoff_lambda(params, t) + s * t


@dataclass(frozen=True)
class SmoothingParams:
    """Constants of the smoothing maps psi^p_k.

    phi^k is the product over i of smooth steps in y_i that vanish for
    y_i <= a_k and equal 1 for y_i >= b_k, with b_k = eps0 / ratio**k and
    a_k = b_k / 2. Its support is {y_i >= a_k for all i}, so m_k = a_k and
    eps_k = a_k / 2. The default ratio keeps the open sets of the earlier
    stages together with the interior of phi^k = 1 a cover of Delta^k.
    """

    eps0: float = 0.25
    ratio: float = 20.0

    def __post_init__(self):
        if not 0 < self.eps0 < 0.5:
            raise ValueError(f"eps0 must lie in (0, 1/2), got {self.eps0}")
        if self.ratio <= 1:
            raise ValueError("ratio must exceed 1")

    def b(self, k: int) -> float:
        return self.eps0 / self.ratio ** k

    def a(self, k: int) -> float:
        return self.b(k) / 2

    def m(self, k: int) -> float:
        return self.a(k)

    def eps(self, k: int) -> float:
        return self.eps0 if k == 0 else self.m(k) / 2

    def phi(self, k: int, y) -> float:
        """phi^k on Delta^k: symmetric, 0 near the boundary; phi^0 = 1."""
        if k == 0:
            return 1.0
        a, b = self.a(k), self.b(k)
        out = 1.0
        for v in _coords(y) if not isinstance(y, np.ndarray) else y:
            out *= smooth_step((v - a) / (b - a))
            if out == 0.0:
                return 0.0
        return out


DEFAULT = SmoothingParams()


# -- smoothing maps -------------------------------------------------------------

def _top_set(c: tuple, k: int):
    """Indices of the k+1 largest coordinates if they beat all others strictly, else None."""
    order = sorted(range(len(c)), key=lambda i: -c[i])
    if k + 1 < len(c) and not c[order[k]] > c[order[k + 1]]:
        return None
    return sorted(order[: k + 1])


def _psi(p: int, k: int, x, s: float, params: SmoothingParams) -> BaryPoint:
    c = _coords(x)
    if len(c) != p + 1:
        raise ValueError(f"expected a point of Delta^{p}")
    if k >= p or s == 1:
        return BaryPoint(c)
    I = _top_set(c, k)
    if I is None:
        return BaryPoint(c)           # ties lie outside every V_I
    inside = set(I)
    t = math.fsum(c[j] for j in range(p + 1) if j not in inside)
    eps = params.eps(k)
    if t == 0 or t >= eps:
        return BaryPoint(c)
    S = math.fsum(c[i] for i in I)
    f = params.phi(k, tuple(c[i] / S for i in I))
    if f == 0:
        return BaryPoint(c)
    lam = cutoff_lambda(eps, t)
    t2 = t - f * (1 - s) * (t - lam)
    if t2 == t:
        return BaryPoint(c)
    up = (1.0 - t2) / S
    down = t2 / t
    return BaryPoint(tuple(v * up if i in inside else v * down for i, v in enumerate(c)))


def psi_p_k(p: int, k: int, x, params: SmoothingParams = DEFAULT) -> BaryPoint:
    """psi^p_k: on V_I with |I| = k+1 it pulls the complementary coordinates toward the face I."""
    return _psi(p, k, x, 0.0, params)


def h_p_k(p: int, k: int, x, s: float, params: SmoothingParams = DEFAULT) -> BaryPoint:
    """Homotopy from psi^p_k (s = 0) to the identity (s = 1)."""
    if not 0 <= s <= 1:
        raise ValueError(f"homotopy parameter s = {s} must lie in [0, 1]")
    return _psi(p, k, x, s, params)


def psi_p(p: int, x, params: SmoothingParams = DEFAULT) -> BaryPoint:
    """psi^p = psi^p_0 o psi^p_1 o ... o psi^p_{p-1}."""
    out = BaryPoint(_coords(x))
    for k in range(p - 1, -1, -1):
        out = psi_p_k(p, k, out, params)
    return out


def psi_polyhedron(K: SimplicialComplex, location: tuple, params: SmoothingParams = DEFAULT) -> tuple:
    """Evaluate psi_K at a point given as (closed simplex, barycentric coordinates).

    Returns (face, coordinates) for the smallest face containing the image.
    """
    sigma, x = location
    sigma = tuple(sigma)
    if sigma not in K:
        raise ValueError(f"{sigma} is not a simplex of K")
    canon = K.canonical(sigma)
    pt = x if isinstance(x, BaryPoint) else BaryPoint(tuple(x))
    if pt.vertices is None:
        pt = BaryPoint(pt.coords, sigma)
    pt = pt.on(canon)
    img = BaryPoint(psi_p(len(canon) - 1, pt, params).coords, canon).carrier()
    return img.vertices, img


# -- partitions of unity and barycentric maps -----------------------------------

@dataclass
class PartitionOfUnity:
    """Functions indexed by ``index`` together with their declared supports.

    ``supports[a](x)`` says whether x lies in the open set carrying the
    function; the function must vanish outside it.
    """

    index: tuple
    functions: Mapping
    supports: Mapping
    sampler: Callable | None = None   # sampler(rng, n) -> list of domain points

    def values(self, x) -> dict:
        return {a: float(self.functions[a](x)) for a in self.index}

    def check(self, points) -> dict:
        """Worst sum error, worst negative value and worst value outside the support."""
        sum_err = neg = outside = 0.0
        for x in points:
            vals = self.values(x)
            sum_err = max(sum_err, abs(math.fsum(vals.values()) - 1.0))
            for a, v in vals.items():
                neg = max(neg, -v)
                if not self.supports[a](x):
                    outside = max(outside, abs(v))
        return {"sum_error": sum_err, "negative": neg, "outside_support": outside}


def barycentric_map(partition: PartitionOfUnity, x, cover: Mapping | None = None) -> BaryPoint:
    """The point sum_a phi_a(x) * a of the nerve, in its smallest closed simplex.

    ``cover[a](x)`` tests membership in the cover member a; when given, every
    index with phi_a(x) > 0 must contain x.
    """
    vals = partition.values(x)
    pos = [a for a in partition.index if vals[a] > 0]
    if cover is not None:
        for a in pos:
            if not cover[a](x):
                raise ValueError(f"partition is not subordinate to the cover: phi_{a} > 0 outside U_{a}")
    if not pos:
        raise ValueError("partition vanishes identically at this point")
    tot = math.fsum(vals[a] for a in pos)
    if abs(tot - 1.0) > SUM_TOL:
        raise ValueError(f"partition values sum to {tot}, not 1")
    return BaryPoint(tuple(vals[a] for a in pos), tuple(pos))


def interval_partition(a: float = 0.3, b: float = 0.7, smooth: bool = False) -> tuple:
    """Two-part partition of [0, 1] for the cover U0 = [0, b), U1 = (a, 1].

    phi_0 is 1 up to a and 0 from b on, linear (hat profile) or smooth in
    between. Returns (partition, cover).
    """
    if not 0 < a < b < 1:
        raise ValueError("need 0 < a < b < 1")

    def f0(x):
        u = (x - a) / (b - a)
        return 1.0 - (smooth_step(u) if smooth else min(1.0, max(0.0, u)))

    funcs = {0: f0, 1: lambda x: 1.0 - f0(x)}
    cover = {0: lambda x: 0 <= x < b, 1: lambda x: a < x <= 1}
    part = PartitionOfUnity((0, 1), funcs, cover, lambda rng, n: list(rng.uniform(0, 1, n)))
    return part, cover


def linear_homotopy(K: SimplicialComplex, f: Callable, g: Callable, x, t: float) -> BaryPoint:
    """(1 - t) f(x) + t g(x), where f and g return points of |K| as BaryPoints."""
    if not 0 <= t <= 1:
        raise ValueError(f"homotopy parameter t = {t} must lie in [0, 1]")
    a, b = f(x), g(x)
    ca, cb = a.carrier(), b.carrier()
    verts = set(ca.vertices) | set(cb.vertices)
    union = K.canonical(tuple(verts)) if verts <= set(K.vertices) else None
    if union is None or union not in K:
        raise ValueError(f"f(x) and g(x) lie in no common closed simplex: carriers {ca.vertices} and {cb.vertices}")
    pa, pb = a.on(union).coords, b.on(union).coords
    out = tuple((1 - t) * u + t * v for u, v in zip(pa, pb))
    return BaryPoint(out, union)


# -- the star partition on Delta^p ----------------------------------------------

STAR_MAX_DIM = 3
_STAR_DELTA = 0.25      # ratio margin: x_j <= (1 - delta/2) x_i on the support
_STAR_FLOOR = 0.1       # coordinates of I stay above floor/2 on the support


def _ratio_factor(u: float) -> float:
    return smooth_step((u - _STAR_DELTA / 2) / (_STAR_DELTA / 2))


def _floor_factor(v: float) -> float:
    return smooth_step((v - _STAR_FLOOR / 2) / (_STAR_FLOOR / 2))


def _star_weight(I: tuple, c: tuple) -> float:
    w = 1.0
    for i in I:
        w *= _floor_factor(c[i])
        if w == 0.0:
            return 0.0
    inside = set(I)
    for i in I:
        for j in range(len(c)):
            if j not in inside:
                w *= _ratio_factor(1.0 - c[j] / c[i])
                if w == 0.0:
                    return 0.0
    return w


def in_open_star(I: tuple, x) -> bool:
    """Whether x lies in the open star of the barycenter b_I in sd Delta^p."""
    c = _coords(x)
    inside = set(I)
    if len(inside) == len(c):
        return min(c) > 0
    lo = min(c[i] for i in I)
    hi = max(c[j] for j in range(len(c)) if j not in inside)
    return lo > hi


def star_partition(p: int) -> PartitionOfUnity:
    """Partition of unity on Delta^p subordinate to the open stars of the barycenters of its faces.

    The weight of a face I is a product of smooth steps: every coordinate in I
    stays away from 0 and every outside coordinate stays a fixed ratio below
    each inside one. Normalising the weights gives the partition; the weight
    of the whole simplex is taken as 1 minus the rest. The weights are
    symmetric in the coordinates and restrict on a facet to the weights of
    the facet, so the same holds for the partition. Some weight is positive at
    every point for p <= 3, which bounds the supported dimension.
    """
    if p < 0:
        raise ValueError("dimension must be nonnegative")
    if p > STAR_MAX_DIM:
        raise ValueError(f"star_partition is only constructed for p <= {STAR_MAX_DIM}")
    faces = tuple(I for r in range(1, p + 2) for I in combinations(range(p + 1), r))
    full = faces[-1]
    cache: dict = {}

    def weights(x):
        c = _coords(x)
        key = c
        if key not in cache:
            if len(cache) > 4096:
                cache.clear()
            w = {I: _star_weight(I, c) for I in faces}
            tot = math.fsum(w.values())
            rho = {I: w[I] / tot for I in faces if I != full}
            rho[full] = 1.0 - math.fsum(rho.values()) if w[full] > 0 else 0.0
            if rho[full] < 0:
                rho[full] = 0.0
            cache[key] = rho
        return cache[key]

    funcs = {I: (lambda x, I=I: weights(x)[I]) for I in faces}
    supports = {I: (lambda x, I=I: in_open_star(I, x)) for I in faces}
    return PartitionOfUnity(faces, funcs, supports,
                            lambda rng, n: [BaryPoint(tuple(r)) for r in sample_simplex(rng, p, n)])


# -- finite differences -----------------------------------------------------------

@dataclass
class FDReport:
    t0: float
    h: float
    left: list           # per order 1..max_order: derivative vectors from the left
    right: list
    mismatch: list       # per order: max |left - right|

    def worst(self, order: int) -> float:
        return max(self.mismatch[:order]) if order else 0.0


def _fit_weights(npts: int, degree: int) -> list:
    """Exact least-squares weights: row e gives the coefficient of m^e fitted to samples at m = 0..npts-1."""
    V = [[Fraction(m) ** e for e in range(degree + 1)] for m in range(npts)]
    n = degree + 1
    # solve (V^T V) X = V^T by Gauss-Jordan over the rationals
    A = [[sum(V[m][a] * V[m][b] for m in range(npts)) for b in range(n)] + [V[m][a] for m in range(npts)]
         for a in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [v - f * w for v, w in zip(A[r], A[c])]
    return [row[n:] for row in A]


def fd_smoothness_check(curve: Callable, t0: float, max_order: int = 3, h: float = 1e-3,
                        npts: int = 8) -> FDReport:
    """Compare one-sided finite-difference derivatives of a curve at t0.

    Each side fits a polynomial of degree max_order + 1 by least squares to
    the samples at t0, t0 +- h, ..., t0 +- (npts - 1) h and differentiates it
    at t0. The weights are exact rationals applied to f(t) - f(t0), so the
    only error left on a polynomial of degree <= max_order + 1 is the
    round-off of the samples, about eps |f| / h^order.
    """
    degree = max_order + 1
    if npts < degree + 1:
        raise ValueError(f"need at least {degree + 1} points per side")
    rows = _fit_weights(npts, degree)
    W = np.array([[float(math.factorial(d) * w) for w in rows[d]] for d in range(1, max_order + 1)])
    scale = np.array([h ** d for d in range(1, max_order + 1)])[:, None]

    def side(sign):
        f0 = np.atleast_1d(np.asarray(curve(t0), dtype=float))
        vals = np.array([np.atleast_1d(np.asarray(curve(t0 + sign * m * h), dtype=float)) - f0
                         for m in range(npts)])
        return (W @ vals) / scale

    right = side(1)
    # the left samples run backwards, so odd derivatives flip sign
    signs = np.array([(-1) ** d for d in range(1, max_order + 1)], dtype=float)[:, None]
    left = side(-1) * signs
    mismatch = [float(np.max(np.abs(left[d] - right[d]))) for d in range(max_order)]
    return FDReport(t0, h, [[float(v) for v in r] for r in left], [[float(v) for v in r] for r in right], mismatch)


def segment(a, b) -> Callable:
    """Affine curve t -> a + t (b - a) in coordinate space."""
    a, b = np.asarray(_coords(a)), np.asarray(_coords(b))
    return lambda t: a + t * (b - a)
