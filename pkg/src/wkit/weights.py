"""The standard weight structure on the homotopy category.

Weights are cut by degree: a complex lies in K^{w<=n} when it is homotopy
equivalent to one vanishing in degrees > n, and in K^{w>=n} when it is
equivalent to one vanishing in degrees < n.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .complex_core import (
    ChainMap,
    Cohomology,
    Complex,
    HomotopyWitness,
    Undecided,
    VerificationError,
    cone,
    homotopy_witness,
    is_contractible,
    shift,
)
from .exact_linalg import Matrix, Ring, kernel_basis
from .homotopy_cat import CandidateTriangle, TriangleCertificate, certify_triangle
from .presented import PComplex, PMap, PTriangleCertificate, pcone, solve_linear_cols


@dataclass(frozen=True)
class WeightWindow:
    """The interval [a, b]; None stands for -inf (a) or +inf (b)."""

    a: int | None = None
    b: int | None = None

    @classmethod
    def parse(cls, text: str) -> "WeightWindow":
        lo, sep, hi = text.partition(":")
        if not sep:
            raise ValueError(f"window must look like a:b, got {text!r}")
        conv = lambda s: None if s.strip() in ("", "-inf", "inf", "+inf") else int(s)
        return cls(conv(lo), conv(hi))

    @property
    def is_empty(self) -> bool:
        return self.a is not None and self.b is not None and self.a > self.b

    def contains(self, n: int) -> bool:
        return (self.a is None or n >= self.a) and (self.b is None or n <= self.b)

    def __str__(self):
        return f"{'' if self.a is None else self.a}:{'' if self.b is None else self.b}"


def restrict(X: Complex, lo: int | None = None, hi: int | None = None) -> Complex:
    """The strict truncation keeping degrees in [lo, hi] (with X's differentials)."""
    keep = [n for n in X.support if (lo is None or n >= lo) and (hi is None or n <= hi)]
    lv = None if not X.is_filtered else {n: X.level(n) for n in keep}
    return Complex(X.ring, {n: X.rank(n) for n in keep}, {n: X.d(n) for n in keep if n + 1 in keep}, lv,
                   check=False)


def _sub_map(S: Complex, T: Complex) -> ChainMap:
    """Identity components between two strict truncations of one complex."""
    return ChainMap(S, T, {n: Matrix.identity(S.ring, S.rank(n)) for n in S.support if T.rank(n)})


@dataclass
class WeightDecomposition:
    """w_{>=n+1}X -g-> X -k-> w_{<=n}X -v-> [1]w_{>=n+1}X with a certificate."""

    n: int
    wge: Complex
    wle: Complex
    triangle: CandidateTriangle
    certificate: TriangleCertificate

    @property
    def g(self):
        return self.triangle.u

    @property
    def k(self):
        return self.triangle.v

    @property
    def v(self):
        return self.triangle.w

    def verify(self) -> bool:
        return self.certificate.verify()


def stupid_truncate(X: Complex, n: int) -> WeightDecomposition:
    """Split X at n into degrees >= n+1 (subcomplex) and <= n (quotient).

    The connecting map w_{<=n}X -> [1]w_{>=n+1}X is -d^n.  The triangle is
    certified with the explicit comparison b -> (b, -d b) into the cone of
    the inclusion, and the projection back.
    """
    ring = X.ring
    ge = restrict(X, lo=n + 1)
    le = restrict(X, hi=n)
    g = _sub_map(ge, X)
    k = _sub_map(X, le)
    sge = shift(ge, 1)
    v = ChainMap(le, sge, {n: -X.d(n)} if le.rank(n) and sge.rank(n) else {})
    t = CandidateTriangle(g, k, v)
    C, _, _ = cone(g)
    phi = {}
    psi = {}
    for p in C.support:
        xr, sr = X.rank(p), ge.rank(p + 1)
        if le.rank(p):
            top = Matrix.identity(ring, xr)
            bot = -X.d(p) if p == n and sr else Matrix.zeros(ring, sr, xr)
            phi[p] = Matrix.vstack(ring, xr, [top, bot])
            psi[p] = Matrix.hstack(ring, xr, [Matrix.identity(ring, xr), Matrix.zeros(ring, xr, sr)])
    phi = ChainMap(le, C, phi)
    psi = ChainMap(C, le, psi)
    cert = certify_triangle(t, phi, psi)
    return WeightDecomposition(n, ge, le, t, cert)


# ---------------------------------------------------------------------------
# membership

@dataclass
class MembershipResult:
    answer: str                       # "yes", "no" or "undecided"
    reason: str = ""
    model: Complex | None = None      # a complex supported in the window, when yes
    to_model: ChainMap | None = None
    from_model: ChainMap | None = None
    witnesses: dict = field(default_factory=dict)

    def __bool__(self):
        return self.answer == "yes"


def strict_support_in(X: Complex, W: WeightWindow) -> bool:
    return all(W.contains(n) for n in X.support)


def membership(X: Complex, W: WeightWindow) -> MembershipResult:
    """Is X isomorphic in K to a complex supported in the window?"""
    I = ChainMap.identity(X)
    if W.is_empty:
        h = is_contractible(X)
        if h is not None:
            Z = Complex.zero(X.ring)
            return MembershipResult("yes", "contractible", Z, ChainMap.zero(X, Z), ChainMap.zero(Z, X), {"id_zero": h})
        if X.ring.is_field:
            return MembershipResult("no", "empty window and X is not contractible")
        return MembershipResult("no", "empty window and id is not null-homotopic")
    if strict_support_in(X, W):
        return MembershipResult("yes", "strict support", X, I, I, {})
    if X.ring.is_field:
        coh = Cohomology(X)
        if all(W.contains(n) for n in coh.support):
            H, p, i, h = coh.equivalence()
            return MembershipResult("yes", "cohomology in window", H, p, i, {"id_ip": h})
        bad = [n for n in coh.support if not W.contains(n)]
        return MembershipResult("no", f"cohomology outside the window in degrees {bad}")
    h = is_contractible(X)
    if h is not None:
        Z = Complex.zero(X.ring)
        return MembershipResult("yes", "contractible", Z, ChainMap.zero(X, Z), ChainMap.zero(Z, X), {"id_zero": h})
    return MembershipResult("undecided", "strict support leaves the window and the ring is not a field")


@dataclass
class Retract:
    """X as a summand of the strict truncation T = w_[a,b]X: p∘i ≃ id_X."""

    T: Complex
    i: ChainMap   # X -> T
    p: ChainMap   # T -> X
    witness: HomotopyWitness

    def verify(self) -> bool:
        return self.witness.verify(self.p @ self.i, ChainMap.identity(self.i.source))


def retract_witness(X: Complex, a: int, b: int) -> Retract:
    T = restrict(X, a, b)
    if strict_support_in(X, WeightWindow(a, b)):
        I = ChainMap.identity(X)
        return Retract(T, I, I, HomotopyWitness(X, X, {}))
    if is_contractible(X) is not None:
        i = ChainMap.zero(X, T)
        p = ChainMap.zero(T, X)
        w = homotopy_witness(p @ i, ChainMap.identity(X))
        return Retract(T, i, p, w)
    if not X.ring.is_field:
        raise Undecided("retract witnesses beyond strict support need a field")
    m = membership(X, WeightWindow(a, b))
    if m.answer != "yes":
        raise ValueError(f"X is not in the window [{a},{b}]: {m.reason}")
    coh = Cohomology(X)
    H, pX, iX, _ = coh.equivalence()
    j = ChainMap(H, T, {n: coh.section[n] for n in H.support})
    q = ChainMap(T, H, {n: coh.proj[n] for n in H.support})
    i = j @ pX
    p = iX @ q
    w = homotopy_witness(p @ i, ChainMap.identity(X))
    if w is None:
        raise VerificationError("retract witness not found")
    return Retract(T, i, p, w)


def heart_membership(X: Complex) -> MembershipResult:
    return membership(X, WeightWindow(0, 0))


def staircase_homotopy(f: ChainMap, c: int) -> HomotopyWitness:
    """Null-homotopy of f: X -> Y when X vanishes above c and Y vanishes
    below c-1 with d_Y^{c-1} injective: h^c is the unique factorisation of
    f^c through d_Y^{c-1}; no search is involved.
    """
    X, Y = f.source, f.target
    if any(n > c for n in X.support) or any(n < c - 1 for n in Y.support):
        raise ValueError("staircase shape does not apply")
    K = Y.d(c - 1)
    h = {}
    if X.rank(c) and Y.rank(c - 1):
        H = solve_linear_cols(K, f[c])
        if H is None:
            raise VerificationError("f^c does not factor through the kernel")
        h[c] = H
    w = HomotopyWitness(X, Y, h)
    if not w.verify(f):
        raise VerificationError("staircase homotopy failed")
    return w


# ---------------------------------------------------------------------------
# torsion-pair truncations

@dataclass
class TorsionTruncation:
    """X' -a-> A -b-> Y' -w-> [1]X' with M in degree c of X' and c-1 of Y'."""

    mode: str
    c: int
    M_gens: int
    M_rel: Matrix
    Xp: PComplex
    Yp: PComplex
    a: PMap
    b: PMap
    w: PMap
    certificate: PTriangleCertificate

    def verify(self) -> bool:
        return self.certificate.verify()


def torsion_truncate(A: Complex, n: int, side: str = "kernel") -> TorsionTruncation:
    """Truncate A by one of the two torsion pairs of the homotopy category.

    kernel mode at n: M = ker d^{n-1} (as a presented module), X' ends with
    A^{n-2} -> M in degree n-1 and Y' = (M -> A^{n-1} -> A^n -> ...) with M
    in degree n-2.

    cokernel mode at n: M = coker d^{n-1}, X' = (... -> A^{n-1} -> A^n -> M)
    with M in degree n+1 and Y' = (M -> A^{n+1} -> ...) with M in degree n.
    """
    ring = A.ring
    if side == "kernel":
        c = n - 1
        K = kernel_basis(A.d(c)) if A.rank(c + 1) else Matrix.identity(ring, A.rank(c))
        m = K.cols
        rel = kernel_basis(K) if m else Matrix.zeros(ring, 0, 0)
        rel = Matrix.zeros(ring, m, 0) if (rel.cols == 0 or rel.is_zero()) else rel
        f = K                                   # M -> A^c
        g = solve_linear_cols(K, A.d(c - 1)) if A.rank(c - 1) and m else Matrix.zeros(ring, m, A.rank(c - 1))
        if g is None:
            raise VerificationError("image of d is not inside the kernel")
    elif side == "cokernel":
        c = n + 1
        m = A.rank(c - 1)
        rel = A.d(c - 2) if A.rank(c - 2) and m else Matrix.zeros(ring, m, 0)
        g = Matrix.identity(ring, m)            # A^{c-1} -> M
        f = A.d(c - 1)                          # M -> A^c
    else:
        raise ValueError("side must be 'kernel' or 'cokernel'")
    free = lambda k: Matrix.zeros(ring, A.rank(k), 0)
    # X': degrees < c from A, M in degree c
    xg = {k: A.rank(k) for k in A.support if k < c}
    xg[c] = m
    xr = {k: free(k) for k in xg if k < c}
    xr[c] = rel
    xd = {k: A.d(k) for k in xg if k < c - 1}
    xd[c - 1] = g
    Xp = PComplex(ring, xg, xr, xd)
    # Y': M in degree c-1, then A from degree c on
    yg = {k: A.rank(k) for k in A.support if k >= c}
    yg[c - 1] = m
    yr = {k: free(k) for k in yg if k >= c}
    yr[c - 1] = rel
    yd = {k: A.d(k) for k in yg if k >= c}
    yd[c - 1] = f
    Yp = PComplex(ring, yg, yr, yd)
    PA = PComplex.from_complex(A)
    ident = lambda k: Matrix.identity(ring, A.rank(k))
    a = PMap(Xp, PA, {**{k: ident(k) for k in Xp.support if k < c}, c: f})
    b = PMap(PA, Yp, {**{k: ident(k) for k in A.support if k >= c}, c - 1: g})
    w = PMap(Yp, Xp.shift(1), {c - 1: Matrix.identity(ring, m)})
    # comparison maps with the cone of a
    C, _, _ = pcone(a)
    phi, psi = {}, {}
    for p in C.support:
        ar, xr_ = A.rank(p), Xp.ngens(p + 1)
        if p == c - 1:
            phi[p] = Matrix.vstack(ring, m, [Matrix.zeros(ring, ar, m), Matrix.identity(ring, m)])
            psi[p] = Matrix.hstack(ring, m, [g, Matrix.identity(ring, m)])
        elif p >= c and ar:
            phi[p] = Matrix.vstack(ring, ar, [ident(p), Matrix.zeros(ring, xr_, ar)])
            psi[p] = Matrix.hstack(ring, ar, [ident(p), Matrix.zeros(ring, ar, xr_)])
    phi = PMap(Yp, C, phi)
    psi = PMap(C, Yp, psi)
    cert = PTriangleCertificate(a, b, w, phi, psi)
    if not cert.verify():
        raise VerificationError("torsion truncation triangle failed to certify")
    return TorsionTruncation(side, c, m, rel, Xp, Yp, a, b, w, cert)


def kernel_side_exact_below(Y: Complex, c: int) -> bool:
    """Over a field: Y has no cohomology in degrees < c."""
    coh = Cohomology(Y)
    return all(coh.dim(k) == 0 for k in Y.support if k < c)


# ---------------------------------------------------------------------------
# axiom suite

@dataclass
class SuiteReport:
    name: str
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record(self, check: str, ok: bool, detail: str = ""):
        c = self.counts.setdefault(check, [0, 0])
        c[0 if ok else 1] += 1
        if not ok:
            self.failures.append(f"{check}: {detail}")

    @property
    def passed(self) -> bool:
        return not self.failures

    def lines(self) -> list:
        out = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for k in sorted(self.counts):
            p, f = self.counts[k]
            out.append(f"  {k}: {p} passed, {f} failed")
        out.extend(f"  failure {x}" for x in self.failures)
        return out


def ws_axiom_suite(ring: Ring, samples: int = 200, seed: int = 0, max_rank: int = 2,
                   lo: int = -2, hi: int = 2, extra: list | None = None) -> SuiteReport:
    """Sampled checks of the weight structure axioms for the standard structure."""
    from .sampling import random_chain_map, random_complex

    rng = random.Random(seed)
    rep = SuiteReport(f"ws-suite[{ring.descriptor}]")
    objs = list(extra or [])
    objs += [random_complex(ring, rng, lo, hi, max_rank) for _ in range(samples)]
    for X in objs:
        n = rng.randint(lo - 1, hi)
        # ws2: strict inclusions between neighbouring classes
        le, ge = restrict(X, hi=n), restrict(X, lo=n + 1)
        rep.record("ws2", strict_support_in(le, WeightWindow(None, n + 1))
                   and strict_support_in(ge, WeightWindow(n, None)))
        # ws4: certified stupid weight decomposition
        try:
            wd = stupid_truncate(X, n)
            rep.record("ws4", wd.verify())
        except VerificationError as e:
            rep.record("ws4", False, str(e))
        # ws3: maps from >= n+1 supported to <= n supported objects are null-homotopic
        Y = random_complex(ring, rng, lo, n, max_rank) if n >= lo else Complex.zero(ring)
        Xg = restrict(X, lo=n + 1)
        f = random_chain_map(Xg, Y, rng)
        rep.record("ws3", homotopy_witness(f) is not None)
        # kernel-truncated targets get the explicit staircase homotopy
        if ring.is_field or ring.kind == "z":
            tt = torsion_truncate(X, n + 1, "kernel")
            if tt.Yp.is_free():
                Yk = tt.Yp.to_complex()
                c = tt.c
                Xs = random_complex(ring, rng, c - 1, c, max_rank)
                g = random_chain_map(Xs, Yk, rng)
                try:
                    staircase_homotopy(g, c)
                    rep.record("ws3-staircase", True)
                except VerificationError as e:
                    rep.record("ws3-staircase", False, str(e))
        # ws1: retract closure on field samples
        if ring.is_field:
            a = rng.randint(lo, hi)
            b = rng.randint(a, hi)
            m = membership(X, WeightWindow(a, b))
            if m.answer == "yes":
                r = retract_witness(X, a, b)
                rep.record("ws1-retract", r.verify())
            else:
                rep.record("ws1-retract", m.answer == "no")
    return rep
