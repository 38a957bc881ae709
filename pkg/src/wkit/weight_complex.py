"""Weight complex functors for the standard weight structure.

With the preferred choices (strict truncations and w_nX = [-n]X^n) the weak
weight complex of X is S(X), the complex with all differentials negated,
and a chain map is sent to itself.  The lift enumeration below exercises
the choices that the general construction leaves open.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .complex_core import (
    ChainMap,
    Complex,
    VerificationError,
    homotopy_witness,
    negate_differentials,
    negate_map,
    shift,
    shift_map,
    weak_homotopy_witness,
)
from .exact_linalg import Matrix
from .homotopy_cat import (
    CandidateTriangle,
    anti_triangle_check,
    morphism_solution_set,
)
from .weights import restrict, stupid_truncate


def wc_standard(X: Complex) -> Complex:
    return negate_differentials(X)


def wc_standard_map(f: ChainMap) -> ChainMap:
    return negate_map(f)


@dataclass
class OctahedronData:
    """The octahedron relating the weight decompositions of X at n and n-1.

    Objects: wge1 = w_{>=n+1}X, wge = w_{>=n}X, wle = w_{<=n}X,
    wle1 = w_{<=n-1}X, wn = w_nX (X^n placed in degree n) and X.
    """

    X: Complex
    n: int
    objects: dict
    maps: dict
    triangles: dict            # name -> WeightDecomposition
    relations: dict = field(default_factory=dict)

    def verify(self) -> bool:
        return all(t.verify() for t in self.triangles.values()) and all(
            w is not None for w in self.relations.values())


def octahedron_standard(X: Complex, n: int) -> OctahedronData:
    T_n = stupid_truncate(X, n)
    T_n1 = stupid_truncate(X, n - 1)
    wge = T_n1.wge          # degrees >= n
    wle = T_n.wle           # degrees <= n
    T_ge = stupid_truncate(wge, n)    # w_{>=n+1}X -> w_{>=n}X -> w_nX
    T_le = stupid_truncate(wle, n - 1)  # w_nX -> w_{<=n}X -> w_{<=n-1}X
    wn = T_ge.wle
    if wn != T_le.wge:
        raise VerificationError("the two descriptions of w_nX differ")
    objects = {"wge1": T_n.wge, "wge": wge, "wle": wle, "wle1": T_n1.wle, "wn": wn, "X": X}
    maps = {
        "g_n1": T_n.g, "k_n": T_n.k, "v_n": T_n.v,
        "g_n": T_n1.g, "k_n1": T_n1.k, "v_n1": T_n1.v,
        "h": T_ge.g, "e": T_ge.k, "c": T_ge.v,
        "a": T_le.g, "l": T_le.k, "b": T_le.v,
    }
    m = maps
    rel = {
        "g_n∘h = g_n1": homotopy_witness(m["g_n"] @ m["h"], m["g_n1"]),
        "l∘k_n = k_n1": homotopy_witness(m["l"] @ m["k_n"], m["k_n1"]),
        "k_n∘g_n = a∘e": homotopy_witness(m["k_n"] @ m["g_n"], m["a"] @ m["e"]),
        "c = v_n∘a": homotopy_witness(m["c"], m["v_n"] @ m["a"]),
        "b = [1]e∘v_n1": homotopy_witness(m["b"], shift_map(m["e"], 1) @ m["v_n1"]),
        "[1]h∘v_n = v_n1∘l": homotopy_witness(shift_map(m["h"], 1) @ m["v_n"], m["v_n1"] @ m["l"]),
    }
    tri = {"T_n": T_n, "T_n-1": T_n1, "T_>=n": T_ge, "T_<=n": T_le}
    return OctahedronData(X, n, objects, maps, tri, rel)


def wc_differential_from_octahedra(X: Complex, n: int) -> Matrix:
    """[n](b^{n+1} ∘ a^n) read off as a matrix X^n -> X^{n+1}."""
    a = octahedron_standard(X, n).maps["a"]
    b = octahedron_standard(X, n + 1).maps["b"]
    comp = shift_map(b @ a, n)
    return comp[0]


def check_shift_compatibility(X: Complex) -> bool:
    """S([1]X) = [1]S(X) strictly."""
    return wc_standard(shift(X, 1)) == shift(wc_standard(X), 1)


# ---------------------------------------------------------------------------
# lift enumeration

@dataclass
class LiftReport:
    n: int
    lifts: list                 # (f_{<=n}, f_{>=n+1}) pairs
    candidates: list            # distinct WC_c(f) chain maps S(X) -> S(Y)
    weak_pairs: dict            # (i, j) -> bool
    homotopic_pairs: dict       # (i, j) -> bool
    witness_shape_ok: bool
    skipped: int = 0

    @property
    def all_weakly_homotopic(self) -> bool:
        return all(self.weak_pairs.values())

    def table(self) -> list:
        """Lifts as (x, y): x the degree-n entry on w_{<=n}, y the degree-(n+1) entry on w_{>=n+1}."""
        out = []
        for fle, fge in self.lifts:
            out.append((fle[self.n].to_lists() if fle.comps else [], fge[self.n + 1].to_lists() if fge.comps else []))
        return out


def enumerate_lifts_and_check(f: ChainMap, n: int, limit: int = 4096) -> LiftReport:
    """Enumerate the extensions of f across the weight decompositions at n and
    the compatible maps on w_nX and w_{n+1}X; check pairwise weak homotopy."""
    ring = f.ring
    if not ring.is_finite:
        raise ValueError("lift enumeration needs a finite ring")
    X, Y = f.source, f.target
    TX, TY = stupid_truncate(X, n), stupid_truncate(Y, n)
    sols = morphism_solution_set(TX.triangle, TY.triangle, {"g": f}, limit)
    lifts = [(d["h"], d["f"]) for d in sols]     # (f_{<=n}, f_{>=n+1})
    # preferred lifts elsewhere: strict truncations of f
    def trunc(Z, lo=None, hi=None):
        return restrict(Z, lo, hi)

    def pref_le(m):
        S, T = trunc(X, hi=m), trunc(Y, hi=m)
        return ChainMap(S, T, {k: f[k] for k in S.support if T.rank(k)})

    SX, SY = wc_standard(X), wc_standard(Y)
    cands = []
    seen = set()
    skipped = 0
    for fle, _fge in lifts:
        # f^n from the triangle w_nX -> w_{<=n}X -> w_{<=n-1}X with (f_{<=n}, preferred f_{<=n-1})
        TnX, TnY = stupid_truncate(TX.wle, n - 1), stupid_truncate(TY.wle, n - 1)
        fn_opts = morphism_solution_set(TnX.triangle, TnY.triangle, {"g": fle, "h": pref_le(n - 1)}, limit)
        # f^{n+1} from w_{n+1}X -> w_{<=n+1}X -> w_{<=n}X with (preferred f_{<=n+1}, f_{<=n})
        Tn1X, Tn1Y = stupid_truncate(trunc(X, hi=n + 1), n), stupid_truncate(trunc(Y, hi=n + 1), n)
        fn1_opts = morphism_solution_set(Tn1X.triangle, Tn1Y.triangle, {"g": pref_le(n + 1), "h": fle}, limit)
        if not fn_opts or not fn1_opts:
            skipped += 1
            continue
        for a, b in itertools.product(fn_opts, fn1_opts):
            comps = {k: f[k] for k in X.support if Y.rank(k)}
            comps[n] = a["f"][n] if X.rank(n) and Y.rank(n) else None
            comps[n + 1] = b["f"][n + 1] if X.rank(n + 1) and Y.rank(n + 1) else None
            comps = {k: M for k, M in comps.items() if M is not None}
            try:
                g = ChainMap(SX, SY, comps)
            except VerificationError:
                skipped += 1
                continue
            if g not in seen:
                seen.add(g)
                cands.append(g)
    cands.sort(key=lambda g: str(sorted(g.comps.items())))
    weak, hom = {}, {}
    shape_ok = True
    for i, j in itertools.combinations(range(len(cands)), 2):
        w = weak_homotopy_witness(cands[i], cands[j])
        weak[(i, j)] = w is not None
        if w is not None and not w.verify(cands[i], cands[j]):
            shape_ok = False
        hom[(i, j)] = homotopy_witness(cands[i], cands[j]) is not None
    return LiftReport(n, lifts, cands, weak, hom, shape_ok, skipped)


# ---------------------------------------------------------------------------
# strong weight complex functor

def strong_wc_standard(X: Complex) -> Complex:
    return wc_standard(X)


def strong_wc_triangle(t: CandidateTriangle):
    """Image of a triangle under S together with its anti-triangle certificate."""
    St = CandidateTriangle(negate_map(t.u), negate_map(t.v), negate_map(t.w))
    return St, anti_triangle_check(St)
