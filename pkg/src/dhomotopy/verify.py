"""Verification suites behind ``dhomotopy verify`` and the acceptance tests.

Every suite returns a :class:`VerificationReport`. Reports hold no timings,
so the same inputs and seed always give the same report.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import smoothmaps as sm
from .complexes import (Cover, boundary_complex, cone, disjoint_union, euler_characteristic, is_isomorphic,
                        iterated_subdivision, nerve_of_cover, prism_complex, standard_complex,
                        star_cover_of_subdivision, subdivide, vertex_star_cover)
from .corpus import (complex_corpus, hawaiian_stage, random_complex, random_cover, random_posets,
                     random_splitting, random_subcomplex, three_arc_cover, two_arc_cover)
from .hocolim import blowup_total_complex, bru_isomorphism, verify_segal
from .homology import (HomologyGroup, chain_complex, cellular_chain_complex, direct_sum, homology,
                       induced_on_homology, last_vertex_map, mayer_vietoris, pair_long_exact_sequence,
                       sd_chain_map)
from .sset import from_ordered_complex, nerve_category

SUITES = ("axioms", "subdivision", "cellular", "segal", "smooth")

ALG_TOL = 1e-12
FD_TOL = 1e-4


@dataclass
class Check:
    name: str
    status: str                 # "pass", "fail" or "skip"
    measured: object = None
    tolerance: object = "exact"

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "measured": _plain(self.measured),
                "tolerance": _plain(self.tolerance)}


@dataclass
class VerificationReport:
    suite: str
    checks: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def add(self, name: str, ok: bool | None, measured=None, tolerance="exact") -> Check:
        c = Check(name, "skip" if ok is None else ("pass" if ok else "fail"), measured, tolerance)
        self.checks.append(c)
        return c

    def lines(self) -> list:
        head = f"suite {self.suite}"
        if self.params:
            head += " (" + ", ".join(f"{k}={_fmt(v)}" for k, v in self.params.items()) + ")"
        out = [head]
        width = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            line = f"  {c.status.upper():4}  {c.name.ljust(width)}"
            if c.measured is not None:
                line += f"  measured={_fmt(c.measured)}"
            if c.tolerance != "exact":
                line += f"  tol={_fmt(c.tolerance)}"
            out.append(line.rstrip())
        fails = sum(c.status == "fail" for c in self.checks)
        out.append(f"overall {self.status.upper()} ({len(self.checks) - fails}/{len(self.checks)} checks)")
        return out

    def to_dict(self) -> dict:
        return {"suite": self.suite, "params": _plain(self.params), "overall": self.status,
                "checks": [c.to_dict() for c in self.checks]}


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3e}"
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_fmt(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_fmt(x)}" for k, x in v.items()) + "}"
    return str(v)


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, HomologyGroup):
        return str(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _trim(groups) -> list:
    g = list(groups)
    while g and g[-1].is_zero:
        g.pop()
    return g


def same_groups(a, b) -> bool:
    return _trim(a) == _trim(b)


def groups_str(groups) -> str:
    g = _trim(groups)
    return "(" + ", ".join(str(x) for x in g) + ")" if g else "0"


def is_identity_on(M: list, group: HomologyGroup) -> bool:
    """Whether M is the identity of H, reading torsion rows modulo their order."""
    orders = group.orders
    for i, row in enumerate(M):
        for j, v in enumerate(row):
            want = 1 if i == j else 0
            d = orders[i]
            if (v - want) % d if d else v != want:
                return False
    return True


# -- axioms -----------------------------------------------------------------------

def suite_axioms(seed: int = 0, cases: int = 25) -> VerificationReport:
    R = VerificationReport("axioms", params={"seed": seed, "cases": cases})
    pt = homology(standard_complex(0))
    R.add("dimension: H(point) = Z in degree 0", pt == [HomologyGroup(1)], groups_str(pt))

    bad = []
    for p in range(1, 7):
        H = homology(chain_complex(standard_complex(p), boundary_complex(p)))
        want = [HomologyGroup()] * p + [HomologyGroup(1)]
        if H != want:
            bad.append(p)
    R.add("relative spheres: H(Delta(p), dDelta(p)) = Z[p], p = 1..6", not bad, f"failures={bad}")

    corpus = complex_corpus(3)
    names = list(corpus)
    fails = 0
    pairs = [(a, b) for a, b in itertools.combinations(names, 2)][:12]
    for a, b in pairs:
        Ha, Hb = homology(corpus[a]), homology(corpus[b])
        Hu = homology(disjoint_union(corpus[a], corpus[b]))
        top = max(len(Ha), len(Hb), len(Hu))
        pad = lambda H: H + [HomologyGroup()] * (top - len(H))
        if pad(Hu) != [direct_sum(x, y) for x, y in zip(pad(Ha), pad(Hb))]:
            fails += 1
    R.add("additivity: H(K + L) = H(K) + H(L)", fails == 0, f"{len(pairs) - fails}/{len(pairs)} pairs")

    rng = random.Random(seed)
    les_ok = mv_ok = 0
    for _ in range(cases):
        K = random_complex(rng)
        L = random_subcomplex(rng, K)
        les_ok += pair_long_exact_sequence(K, L).exact
        K1, K2 = random_splitting(rng, K)
        mv_ok += mayer_vietoris(K1, K2).exact
    R.add("pair long exact sequence exact at every node", les_ok == cases, f"{les_ok}/{cases}")
    R.add("Mayer-Vietoris exact at every node", mv_ok == cases, f"{mv_ok}/{cases}")
    return R


# -- subdivision ------------------------------------------------------------------

def suite_subdivision(max_n: int = 4) -> VerificationReport:
    R = VerificationReport("subdivision", params={"max_n": max_n})
    for name, K in complex_corpus(max_n).items():
        S = subdivide(K)
        CK, CS = chain_complex(K), chain_complex(S)
        sd = sd_chain_map(K, S)
        lv = last_vertex_map(K, S)
        comp = lv.compose(sd)
        mats = induced_on_homology(comp)
        HK = homology(CK)
        ident = all(is_identity_on(mats[n], HK[n]) for n in range(len(mats)))
        chi_k, chi_s = euler_characteristic(K), euler_characteristic(S)
        d = K.dim
        top_ok = S.f_vector[d] == K.f_vector[d] * math.factorial(d + 1)
        R.add(f"{name}: dSd = Sd d", sd.commutes())
        R.add(f"{name}: H(last_vertex o Sd) = id", ident, groups_str(HK))
        R.add(f"{name}: chi(sd K) = chi(K)", chi_k == chi_s, (chi_k, chi_s))
        R.add(f"{name}: top cells x (d+1)!", top_ok, (K.f_vector[d], S.f_vector[d]))
        R.add(f"{name}: H(sd K) = H(K)", same_groups(homology(CS), HK))

    for (p, k), fv in {(1, 1): (5, 7, 3), (1, 2): (10, 18, 9)}.items():
        P = prism_complex(p, k)
        R.add(f"prism({p},{k}) f-vector", P.complex.f_vector == fv, P.complex.f_vector)
        R.add(f"prism({p},{k}) top = Delta({p})", is_isomorphic(P.top, standard_complex(p)))
        R.add(f"prism({p},{k}) bottom = sd^{k} Delta({p})",
              is_isomorphic(P.bottom, iterated_subdivision(standard_complex(p), k)), P.bottom.f_vector)
        R.add(f"prism({p},{k}) chi = 1", euler_characteristic(P.complex) == 1)
    R.add("prism(0,1) = Delta(1)", is_isomorphic(prism_complex(0, 1).complex, standard_complex(1)))
    for p in range(4):
        R.add(f"nerve(star cover of sd Delta({p})) = sd Delta({p})",
              is_isomorphic(nerve_of_cover(star_cover_of_subdivision(p)), subdivide(standard_complex(p))))
    R.add("cone(dDelta(2)) f-vector", cone(boundary_complex(2)).f_vector == (4, 6, 3),
          cone(boundary_complex(2)).f_vector)
    return R


# -- cellular ---------------------------------------------------------------------

def suite_cellular(seed: int = 0, posets: int = 10, max_k: int = 10, max_n: int = 3) -> VerificationReport:
    R = VerificationReport("cellular", params={"seed": seed, "posets": posets})
    items = [(name, from_ordered_complex(K)) for name, K in complex_corpus(4).items()]
    items += [(f"nerve(poset {i})", nerve_category(C)) for i, C in enumerate(random_posets(posets, seed))]
    for name, X in items:
        a = homology(chain_complex(X))
        b = homology(cellular_chain_complex(X))
        R.add(f"{name}: simplicial = cellular", same_groups(a, b), groups_str(a))
    bad = []
    for n in range(1, max_n + 1):
        for k in range(1, max_k + 1):
            X = hawaiian_stage(k, n)
            H = homology(cellular_chain_complex(X))
            want = [HomologyGroup(1)] + [HomologyGroup()] * (n - 1) + [HomologyGroup(k)]
            if H != want or homology(chain_complex(X)) != want:
                bad.append((k, n))
    R.add(f"Hawaiian stages: H_n = Z^k for k <= {max_k}, n <= {max_n}", not bad, f"failures={bad}")
    return R


# -- segal ------------------------------------------------------------------------

def _permuted(cover: Cover, rng: random.Random) -> Cover:
    names = list(cover.names)
    rng.shuffle(names)
    return Cover(cover.base, [(n, cover.part(n)) for n in names])


def suite_segal(seed: int = 0, covers: int = 10) -> VerificationReport:
    R = VerificationReport("segal", params={"seed": seed, "covers": covers})
    fixtures = [(f"vertex stars of {name}", vertex_star_cover(K)) for name, K in complex_corpus(4).items()]
    fixtures += [("two arcs", two_arc_cover()), ("three arcs", three_arc_cover()),
                 ("one part", Cover(standard_complex(2), [("U", standard_complex(2))]))]
    for name, cov in fixtures:
        rep = verify_segal(cov)
        R.add(f"{name}: pr is a homology iso", rep.passed, groups_str(rep.source_groups))

    rng = random.Random(seed)
    bru = bic = perm = 0
    for _ in range(covers):
        K = random_complex(rng)
        cov = random_cover(rng, K)
        bru += bru_isomorphism(cov).ok
        checks = blowup_total_complex(cov).check_bicomplex()
        bic += all(checks.values())
        a = homology(blowup_total_complex(cov).total)
        b = homology(blowup_total_complex(_permuted(cov, rng)).total)
        perm += same_groups(a, b)
    R.add("B R_U = sd N U basis isomorphism", bru == covers, f"{bru}/{covers}")
    R.add("bicomplex identities dh^2 = dv^2 = dh dv + dv dh = 0", bic == covers, f"{bic}/{covers}")
    R.add("total homology invariant under renaming parts", perm == covers, f"{perm}/{covers}")

    bad = Cover(standard_complex(2), [("a", [(0, 1)]), ("b", [(1, 2)])])
    try:
        verify_segal(bad)
        rejected = False
    except ValueError:
        rejected = True
    R.add("non-covering family rejected", rejected)
    return R


# -- smooth -----------------------------------------------------------------------

def _face_biased(rng: np.random.Generator, p: int, n: int, alpha: float = 0.15) -> np.ndarray:
    """Points crowded toward the lower skeleta, where the smoothing maps act."""
    x = rng.dirichlet(np.full(p + 1, alpha), size=n)
    x = np.where(x < 1e-300, 0.0, x)
    return x / x.sum(axis=1, keepdims=True)


def _samples(rng, p, n):
    half = n // 2
    return np.vstack([sm.sample_simplex(rng, p, n - half), _face_biased(rng, p, half)])


def _err(a, b) -> float:
    return max(abs(x - y) for x, y in zip(a, b))


def _tie_point(rng: np.random.Generator, p: int, k: int) -> np.ndarray:
    """A random point whose (k+1)-th and (k+2)-th largest coordinates agree."""
    x = np.sort(rng.dirichlet(np.ones(p + 1)))[::-1].copy()
    x[k + 1] = x[k]
    x /= x.sum()
    return x[rng.permutation(p + 1)]


def _tie_direction(x: np.ndarray, k: int) -> np.ndarray:
    order = np.argsort(-x, kind="stable")
    v = np.zeros_like(x)
    v[order[k]], v[order[k + 1]] = 1.0, -1.0
    return v


def suite_smooth(p: int | None = None, k: int | None = None, eps: float | None = None, seed: int = 0,
                 samples: int = 1000, tol: float = ALG_TOL, fd_tol: float = FD_TOL) -> VerificationReport:
    """Numerical checks of the charts, smoothing maps and partitions.

    ``p`` and ``k`` restrict the smoothing-map checks to one pair; by default
    every p <= 4 and k < p is covered. ``eps`` overrides eps_0.
    """
    params = sm.SmoothingParams() if eps is None else sm.SmoothingParams(eps0=eps)
    R = VerificationReport("smooth", params={"p": "all" if p is None else p, "k": "all" if k is None else k,
                                             "eps0": params.eps0, "seed": seed, "samples": samples})
    rng = np.random.default_rng(seed)
    ps = range(1, 5) if p is None else [p]

    def ks(q):
        return range(q) if k is None else [k]

    # charts
    worst = 0.0
    for q in (range(1, 6) if p is None else [p]):
        for r in range(1, q + 2):
            for I in itertools.combinations(range(q + 1), r):
                pts = sm.sample_simplex(rng, q, samples)
                J = [j for j in range(q + 1) if j not in I]
                if J:
                    # half the points on the stratum where the outside coordinates vanish in part
                    mask = rng.random((samples // 2, len(J))) < 0.5
                    sub = pts[: samples // 2]
                    sub[:, J] = np.where(mask, 0.0, sub[:, J])
                    pts[: samples // 2] = sub / sub.sum(axis=1, keepdims=True)
                for x in pts:
                    y, z = sm.phi_I(q, I, x)
                    worst = max(worst, _err(sm.phi_I_inverse(q, I, y, z).coords, x))
    R.add("phi_I round trip", worst < tol, worst, tol)

    # smoothing maps
    eq = fix = face = 0.0
    active = 0
    fix_exact = h_exact = True
    for q in ps:
        pts = _samples(rng, q, min(samples, 200))
        perms = list(itertools.permutations(range(q + 1)))
        if q > 4:
            perms = perms[:: max(1, len(perms) // 120)]
        for kk in ks(q):
            for x in pts:
                psi = sm.psi_p_k(q, kk, x, params).coords
                active += psi != tuple(x)
                for pi in perms:
                    a = sm.permute(pi, psi).coords
                    b = sm.psi_p_k(q, kk, sm.permute(pi, x), params).coords
                    eq = max(eq, _err(a, b))
                if sm.h_p_k(q, kk, x, 0.0, params).coords != psi or sm.h_p_k(q, kk, x, 1.0, params).coords != tuple(x):
                    h_exact = False
            # the k-skeleton: points with at most k+1 nonzero coordinates
            for x in pts[:50]:
                for F in itertools.combinations(range(q + 1), kk + 1):
                    y = np.zeros(q + 1)
                    y[list(F)] = x[: kk + 1] / x[: kk + 1].sum() if x[: kk + 1].sum() > 0 else 1.0 / (kk + 1)
                    y = tuple(sm.BaryPoint(tuple(y)).coords)
                    out = sm.psi_p_k(q, kk, y, params).coords
                    fix = max(fix, _err(out, y))
                    if out != y:
                        fix_exact = False
            # facets: psi^q_k(d^i x) = d^i psi^{q-1}_k(x)
            if q >= 2:
                for x in _samples(rng, q - 1, min(samples, 200)):
                    for i in range(q + 1):
                        a = sm.psi_p_k(q, kk, sm.coface(q, i, x), params).coords
                        b = sm.coface(q, i, sm.psi_p_k(q - 1, kk, x, params)).coords
                        face = max(face, _err(a, b))
    # ``moved`` counts sampled points that psi actually moves, so the check is not vacuous
    R.add("psi equivariance under S_(p+1)", eq < tol and active > 0, {"max_error": eq, "moved": active}, tol)
    R.add("psi fixes the k-skeleton exactly", fix_exact, fix)
    R.add("psi facet compatibility", face < tol, face, tol)
    R.add("h endpoints exact", h_exact)

    # cover condition: psi^p_k is the identity on a neighbourhood of every tie
    moved = 0.0
    for q in ps:
        for kk in ks(q):
            if kk >= q:
                continue
            for _ in range(min(samples, 200)):
                x = _tie_point(rng, q, kk)
                v = _tie_direction(x, kk)
                for s in (-1e-6, 0.0, 1e-6):
                    y = x + s * v
                    moved = max(moved, _err(sm.psi_p_k(q, kk, y, params).coords, y))
    R.add("psi is the identity near V_I boundaries", moved < tol, moved, tol)

    # partitions of unity
    for q in range(sm.STAR_MAX_DIM + 1):
        P = sm.star_partition(q)
        pts = [sm.BaryPoint(tuple(x)) for x in _samples(rng, q, 10 * samples)]
        res = P.check(pts)
        ok = res["sum_error"] < tol and res["negative"] <= 0 and res["outside_support"] < sm.NEG_TOL
        R.add(f"star_partition({q}) sums to 1 within its supports", ok, res, tol)
        vals = P.values(sm.vertex(q, 0))
        R.add(f"star_partition({q}) vertex value", vals[(0,)] == 1.0, vals[(0,)])
        full = tuple(range(q + 1))
        R.add(f"star_partition({q}) barycenter weight > 0", P.values(sm.barycenter(q))[full] > 0,
              P.values(sm.barycenter(q))[full])

    # finite differences
    lam = sm.fd_smoothness_check(lambda t: sm.cutoff_lambda(0.5, t), 0.25)
    R.add("fd: lambda (eps = 0.5) at eps/2", lam.worst(3) < fd_tol, lam.mismatch, fd_tol)
    # the other flat end; sharper cutoffs (eps_0 = 1/4) are under-resolved by h = 1e-3
    lam1 = sm.fd_smoothness_check(lambda t: sm.cutoff_lambda(0.5, t), 0.5)
    R.add("fd: lambda (eps = 0.5) at eps", lam1.worst(3) < fd_tol, lam1.mismatch, fd_tol)
    worst = 0.0
    for q in ps:
        for kk in ks(q):
            if kk >= q:
                continue
            for _ in range(5):
                x = _tie_point(rng, q, kk)
                v = _tie_direction(x, kk) * 0.02
                a, b = x - v, x + v
                if a.min() < 0:
                    continue
                seg = sm.segment(a, b)
                rep = sm.fd_smoothness_check(lambda t: np.array(sm.psi_p_k(q, kk, seg(t), params).coords), 0.5)
                worst = max(worst, rep.worst(3))
    # a radial segment through the collapse threshold t = eps_0/2 of psi^p_0
    for q in ps:
        c = params.eps(0) / 2
        x = np.full(q + 1, c / q)
        x[0] = 1 - c
        dirn = np.full(q + 1, 1.0 / q)
        dirn[0] = -1.0
        seg = sm.segment(x - 0.05 * dirn, x + 0.05 * dirn)
        rep = sm.fd_smoothness_check(lambda t: np.array(sm.psi_p(q, seg(t), params).coords), 0.5)
        worst = max(worst, rep.worst(3))
    R.add("fd: psi along segments crossing boundaries", worst < fd_tol, worst, fd_tol)
    return R


def run_suite(name: str, seed: int = 0, **kw) -> VerificationReport:
    if name == "axioms":
        return suite_axioms(seed=seed, **kw)
    if name == "subdivision":
        return suite_subdivision(**kw)
    if name == "cellular":
        return suite_cellular(seed=seed, **kw)
    if name == "segal":
        return suite_segal(seed=seed, **kw)
    if name == "smooth":
        return suite_smooth(seed=seed, **kw)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
