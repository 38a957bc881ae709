"""Triangles in the homotopy category: certification, split triangles,
fill-ins of triangle morphisms, 3x3 diagrams and idempotent splitting.

A triangle X -u-> Y -v-> Z -w-> [1]X is certified by a comparison map
phi: Z -> Cone(u) making (id, id, phi) a morphism of triangles to the
mapping cone sequence of u, together with a homotopy inverse psi.  By the
five lemma for triangulated categories any such phi is invertible when the
triangle is distinguished, so solving first for phi and then for psi (both
linear problems) decides the question over every supported ring.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .complex_core import (
    ChainMap,
    Cohomology,
    Complex,
    HomotopyWitness,
    MapSystem,
    VerificationError,
    cone,
    direct_sum,
    homotopy_witness,
    inclusion,
    projection,
    shift,
    shift_map,
)
from .exact_linalg import Matrix, image_basis, solve_linear


@dataclass
class CandidateTriangle:
    """X -u-> Y -v-> Z -w-> [1]X."""

    u: ChainMap
    v: ChainMap
    w: ChainMap

    def __post_init__(self):
        if self.u.target != self.v.source or self.v.target != self.w.source:
            raise ValueError("triangle maps do not compose")
        if self.w.target != shift(self.u.source, 1):
            raise ValueError("third map must land in [1]X")

    @property
    def X(self) -> Complex:
        return self.u.source

    @property
    def Y(self) -> Complex:
        return self.u.target

    @property
    def Z(self) -> Complex:
        return self.v.target

    @property
    def ring(self):
        return self.u.ring

    def composite_witnesses(self):
        """Null-homotopies of v∘u, w∘v and [1]u∘w (None where missing)."""
        return (homotopy_witness(self.v @ self.u),
                homotopy_witness(self.w @ self.v),
                homotopy_witness(shift_map(self.u, 1) @ self.w))

    def is_candidate(self) -> bool:
        return all(h is not None for h in self.composite_witnesses())

    def negate_third(self) -> "CandidateTriangle":
        return CandidateTriangle(self.u, self.v, -self.w)

    def shift(self, k: int) -> "CandidateTriangle":
        """[k] applied to all objects and maps (no signs)."""
        return CandidateTriangle(shift_map(self.u, k), shift_map(self.v, k), shift_map(self.w, k))


@dataclass
class TriangleCertificate:
    """Comparison of a candidate with the cone triangle of its first map.

    phi: Z -> Cone(u), psi: Cone(u) -> Z with
    phi∘v ≃ iota, pi∘phi ≃ w, psi∘phi ≃ id_Z, phi∘psi ≃ id_Cone.
    """

    triangle: CandidateTriangle
    phi: ChainMap
    psi: ChainMap
    h_left: HomotopyWitness
    h_right: HomotopyWitness
    h_psiphi: HomotopyWitness
    h_phipsi: HomotopyWitness

    def verify(self) -> bool:
        t = self.triangle
        C, iota, pi = cone(t.u)
        return (self.phi.source == t.Z and self.phi.target == C
                and self.h_left.verify(self.phi @ t.v, iota)
                and self.h_right.verify(pi @ self.phi, t.w)
                and self.h_psiphi.verify(self.psi @ self.phi, ChainMap.identity(t.Z))
                and self.h_phipsi.verify(self.phi @ self.psi, ChainMap.identity(C)))


def cone_triangle(m: ChainMap) -> CandidateTriangle:
    C, iota, pi = cone(m)
    return CandidateTriangle(m, iota, pi)


def direct_sum_triangle(X: Complex, Z: Complex) -> CandidateTriangle:
    """X -> X+Z -> Z -0-> [1]X."""
    return CandidateTriangle(inclusion([X, Z], 0), projection([X, Z], 1), ChainMap.zero(Z, shift(X, 1)))


def _comparison_map(t: CandidateTriangle, filtered: bool = False):
    C, iota, pi = cone(t.u)
    ms = MapSystem(t.ring, filtered=filtered)
    ms.chain_map("phi", t.Z, C)
    ms.homotopy("hl", t.Y, C)
    ms.homotopy("hr", t.Z, shift(t.X, 1))
    ms.equation(t.Y, C, [(1, None, "phi", t.v)], rhs=iota, homotopy="hl")
    ms.equation(t.Z, shift(t.X, 1), [(1, pi, "phi", None)], rhs=t.w, homotopy="hr")
    sol = ms.solve()
    if sol is None:
        return None
    return sol["phi"], sol["hl"], sol["hr"]


def _inverse_of(phi: ChainMap, filtered: bool = False):
    X, Y = phi.source, phi.target
    ms = MapSystem(phi.ring, filtered=filtered)
    ms.chain_map("psi", Y, X)
    ms.homotopy("h1", X, X)
    ms.homotopy("h2", Y, Y)
    ms.equation(X, X, [(1, None, "psi", phi)], rhs=ChainMap.identity(X), homotopy="h1")
    ms.equation(Y, Y, [(1, phi, "psi", None)], rhs=ChainMap.identity(Y), homotopy="h2")
    sol = ms.solve()
    if sol is None:
        return None
    return sol["psi"], sol["h1"], sol["h2"]


def certify_triangle(t: CandidateTriangle, phi: ChainMap | None = None,
                     psi: ChainMap | None = None, filtered: bool = False) -> TriangleCertificate | None:
    """Certificate that t is isomorphic to the cone triangle of t.u, or None.

    With ``phi`` (and optionally ``psi``) supplied, only the homotopies are
    searched (checking mode).  Raises VerificationError if a supplied map
    fails.  With ``filtered=True`` all searched maps and homotopies respect
    generator levels, so the certificate is an isomorphism of filtered
    triangles.
    """
    C, iota, pi = cone(t.u)
    if phi is None:
        found = _comparison_map(t, filtered)
        if found is None:
            return None
        phi, hl, hr = found
    else:
        phi.check()
        hl = homotopy_witness(phi @ t.v, iota, filtered)
        hr = homotopy_witness(pi @ phi, t.w, filtered)
        if hl is None or hr is None:
            raise VerificationError("supplied comparison map is not a morphism of triangles")
    if psi is None:
        inv = _inverse_of(phi, filtered)
        if inv is None:
            return None
        psi, h1, h2 = inv
    else:
        h1 = homotopy_witness(psi @ phi, ChainMap.identity(t.Z), filtered)
        h2 = homotopy_witness(phi @ psi, ChainMap.identity(C), filtered)
        if h1 is None or h2 is None:
            raise VerificationError("supplied inverse is not a homotopy inverse")
    cert = TriangleCertificate(t, phi, psi, hl, hr, h1, h2)
    if not cert.verify():
        raise VerificationError("triangle certificate failed to replay")
    return cert


def trivial_certificate(m: ChainMap) -> TriangleCertificate:
    """The identity comparison for the cone triangle of m."""
    t = cone_triangle(m)
    I = ChainMap.identity(t.Z)
    return certify_triangle(t, I, I)


def anti_triangle_check(t: CandidateTriangle) -> TriangleCertificate | None:
    """Certify t as an anti-triangle: X -> Y -> Z -(-w)-> [1]X is a triangle."""
    return certify_triangle(t.negate_third())


# ---------------------------------------------------------------------------
# split triangles

@dataclass
class SplitCompletion:
    delta: ChainMap
    to_sum: ChainMap      # [eps; v]: Y -> X + Z
    from_sum: ChainMap    # [u, delta]: X + Z -> Y
    witnesses: dict = field(default_factory=dict)
    unique: bool | None = None

    def verify(self) -> bool:
        return all(w is not None for w in self.witnesses.values())


def split_triangle_completion(t: CandidateTriangle, eps: ChainMap, check_unique: bool = True) -> SplitCompletion:
    """Given eps∘u ≃ id_X, find delta: Z -> Y with eps∘delta ≃ 0 and v∘delta ≃ id_Z."""
    X, Y, Z = t.X, t.Y, t.Z
    if homotopy_witness(eps @ t.u, ChainMap.identity(X)) is None:
        raise ValueError("eps∘u is not homotopic to the identity")
    ms = MapSystem(t.ring)
    ms.chain_map("delta", Z, Y)
    ms.homotopy("h1", Z, X)
    ms.homotopy("h2", Z, Z)
    ms.equation(Z, X, [(1, eps, "delta", None)], homotopy="h1")
    ms.equation(Z, Z, [(1, t.v, "delta", None)], rhs=ChainMap.identity(Z), homotopy="h2")
    sol = ms.solve()
    if sol is None:
        raise VerificationError("no splitting map found; is the triangle distinguished?")
    delta = sol["delta"]
    delta.check()
    S = direct_sum(X, Z)
    to_sum = inclusion([X, Z], 0) @ eps + inclusion([X, Z], 1) @ t.v
    from_sum = t.u @ projection([X, Z], 0) + delta @ projection([X, Z], 1)
    wit = {
        "eps_delta": homotopy_witness(eps @ delta),
        "v_delta": homotopy_witness(t.v @ delta, ChainMap.identity(Z)),
        "to_from": homotopy_witness(to_sum @ from_sum, ChainMap.identity(S)),
        "from_to": homotopy_witness(from_sum @ to_sum, ChainMap.identity(Y)),
    }
    unique = None
    if check_unique:
        unique = all(homotopy_witness(g["delta"]) is not None for g in ms.homogeneous_generators())
    out = SplitCompletion(delta, to_sum, from_sum, wit, unique)
    if not out.verify():
        raise VerificationError("split completion failed to verify")
    return out


# ---------------------------------------------------------------------------
# splittings of idempotents

@dataclass
class Splitting:
    """Y with p: X -> Y, i: Y -> X, i∘p ≃ e and p∘i ≃ id_Y."""

    X: Complex
    e: ChainMap
    Y: Complex
    p: ChainMap
    i: ChainMap
    h_ip: HomotopyWitness | None = None
    h_pi: HomotopyWitness | None = None
    note: str = ""

    def verify(self) -> bool:
        if self.h_ip is None:
            self.h_ip = homotopy_witness(self.i @ self.p, self.e)
        if self.h_pi is None:
            self.h_pi = homotopy_witness(self.p @ self.i, ChainMap.identity(self.Y))
        return (self.h_ip is not None and self.h_pi is not None
                and self.h_ip.verify(self.i @ self.p, self.e)
                and self.h_pi.verify(self.p @ self.i, ChainMap.identity(self.Y)))


@dataclass
class Obstruction:
    reason: str
    euler_characteristic: int


@dataclass
class UndecidedResult:
    reason: str


def _is_idempotent(e: ChainMap) -> bool:
    return homotopy_witness(e @ e, e) is not None


def complement_splitting(e: ChainMap, Y: Complex, p: ChainMap, i: ChainMap, minimize: bool = True) -> Splitting:
    """From a splitting (Y, p, i) of e build a splitting (Z, q, j) of 1 - e."""
    X = e.source
    if homotopy_witness(i @ p, e) is None or homotopy_witness(p @ i, ChainMap.identity(Y)) is None:
        raise VerificationError("splitting witnesses fail")
    t = cone_triangle(i)
    comp = split_triangle_completion(t, p, check_unique=False)
    Z, q, j = t.Z, t.v, comp.delta
    if minimize and X.ring.is_field:
        H, pC, iC, _ = Cohomology(Z).equivalence()
        Z, q, j = H, pC @ q, j @ iC
    one_minus_e = ChainMap.identity(X) - e
    sp = Splitting(X, one_minus_e, Z, q, j)
    if not sp.verify():
        raise VerificationError("complement splitting failed to verify")
    return sp


def _pad_to_even(Y: Complex):
    """Y plus contractible pieces k -> k so that every term is even dimensional."""
    ring = Y.ring
    if Y.is_zero():
        return Y, []
    ranks = dict(Y.ranks)
    pads = []
    for n in range(Y.lo, Y.hi + 1):
        if ranks.get(n, 0) % 2:
            pads.append(n)
            ranks[n] = ranks.get(n, 0) + 1
            ranks[n + 1] = ranks.get(n + 1, 0) + 1
    parts = [Y] + [Complex.from_diffs(ring, n, [[[1]]]) for n in pads]
    return direct_sum(*parts), parts


def split_idempotent(e: ChainMap, even_constraint: bool = False):
    """Split an idempotent-up-to-homotopy e on X.

    Returns a Splitting, an Obstruction (only with ``even_constraint``, when
    the image has odd Euler characteristic, so it cannot live in the
    subcategory of complexes of even-dimensional spaces), or an
    UndecidedResult over non-fields.
    """
    X = e.source
    if e.target != X:
        raise ValueError("idempotent must be an endomorphism")
    if not _is_idempotent(e):
        raise ValueError("e∘e is not homotopic to e")
    ring = X.ring
    if not ring.is_field:
        if homotopy_witness(e, ChainMap.identity(X)) is not None:
            sp = Splitting(X, e, X, ChainMap.identity(X), ChainMap.identity(X), note="e ≃ id")
        elif homotopy_witness(e) is not None:
            Z = Complex.zero(ring)
            sp = Splitting(X, e, Z, ChainMap.zero(X, Z), ChainMap.zero(Z, X), note="e ≃ 0")
        else:
            return UndecidedResult("idempotent splitting is only decided over fields")
        if not sp.verify():
            raise VerificationError("trivial splitting failed")
        return sp
    coh = Cohomology(X)
    H, pX, iX, _ = coh.equivalence()
    E = pX @ e @ iX
    ranks, Im, Rm = {}, {}, {}
    for n in H.support:
        B = image_basis(E[n])
        if B.cols:
            ranks[n] = B.cols
            Im[n] = B
            cols = [solve_linear(B, E[n].submatrix(range(E[n].rows), [j])) for j in range(E[n].cols)]
            Rm[n] = Matrix.hstack(ring, B.cols, cols)
    Y = Complex(ring, ranks, {})
    p = ChainMap(H, Y, Rm, check=False) @ pX
    i = iX @ ChainMap(Y, H, Im, check=False)
    sp = Splitting(X, e, Y, p, i)
    if not sp.verify():
        raise VerificationError("field splitting failed to verify")
    if not even_constraint:
        return sp
    chi = sum((-1) ** (n % 2) * r for n, r in Y.ranks.items())
    if chi % 2:
        return Obstruction("the image has odd Euler characteristic, so it is not homotopy equivalent "
                           "to a complex of even-dimensional spaces", chi)
    Yp, parts = _pad_to_even(Y)
    p2 = inclusion(parts, 0) @ p
    i2 = i @ projection(parts, 0)
    sp2 = Splitting(X, e, Yp, p2, i2, note="padded with contractible pieces")
    if not sp2.verify():
        raise VerificationError("padded splitting failed to verify")
    return sp2


# ---------------------------------------------------------------------------
# morphisms of triangles

@dataclass
class TriangleMorphism:
    f: ChainMap
    g: ChainMap
    h: ChainMap
    witnesses: dict

    def verify(self, t: CandidateTriangle, t2: CandidateTriangle) -> bool:
        w = self.witnesses
        return (w["sq1"].verify(t2.u @ self.f, self.g @ t.u)
                and w["sq2"].verify(t2.v @ self.g, self.h @ t.v)
                and w["sq3"].verify(t2.w @ self.h, shift_map(self.f, 1) @ t.w))


def _morphism_system(t: CandidateTriangle, t2: CandidateTriangle, fixed: dict) -> MapSystem:
    """Linear system for the components of a morphism of triangles t -> t2
    not listed in ``fixed`` (keys "f", "g", "h")."""
    ms = MapSystem(t.ring)
    ends = {"f": (t.X, t2.X), "g": (t.Y, t2.Y), "h": (t.Z, t2.Z)}
    for name, (A, B) in ends.items():
        if name not in fixed:
            ms.chain_map(name, A, B)
    sX2 = shift(t2.X, 1)
    # each square: L∘a - b∘R ≃ 0, given as (a, L, b, R, k_b)
    squares = [
        ("k1", t.X, t2.Y, "f", t2.u, "g", t.u, 0),
        ("k2", t.Y, t2.Z, "g", t2.v, "h", t.v, 0),
        ("k3", t.Z, sX2, "h", t2.w, "f", t.w, 1),
    ]
    for hname, S, T, a, L, b, R, kb in squares:
        ms.homotopy(hname, S, T)
        terms = []
        rhs = ChainMap.zero(S, T)
        if a in fixed:
            rhs = rhs - L @ fixed[a]
        else:
            terms.append((1, L, a, None))
        if b in fixed:
            rhs = rhs + shift_map(fixed[b], kb) @ R
        else:
            terms.append((-1, None, b, R, kb))
        ms.equation(S, T, terms, rhs=rhs, homotopy=hname)
    return ms


def _fill_system(g: ChainMap, t: CandidateTriangle, t2: CandidateTriangle) -> MapSystem:
    return _morphism_system(t, t2, {"g": g})


def fill_triangle_morphism(g: ChainMap, t: CandidateTriangle, t2: CandidateTriangle) -> TriangleMorphism | None:
    """Complete g: Y -> Y' to a morphism (f, g, h) of triangles, or None."""
    if g.source != t.Y or g.target != t2.Y:
        raise ValueError("g must map the middle objects")
    sol = _fill_system(g, t, t2).solve()
    if sol is None:
        return None
    f, h = sol["f"], sol["h"]
    f.check()
    h.check()
    wit = {
        "sq1": homotopy_witness(t2.u @ f, g @ t.u),
        "sq2": homotopy_witness(t2.v @ g, h @ t.v),
        "sq3": homotopy_witness(t2.w @ h, shift_map(f, 1) @ t.w),
    }
    tm = TriangleMorphism(f, g, h, wit)
    if any(x is None for x in wit.values()) or not tm.verify(t, t2):
        raise VerificationError("triangle morphism failed to verify")
    return tm


def morphism_solution_set(t: CandidateTriangle, t2: CandidateTriangle, fixed: dict,
                          limit: int = 4096) -> list[dict]:
    """All strict values of the unfixed components of morphisms t -> t2, over a finite ring.

    The solution set is an affine module; it is enumerated by closing the
    span of the homogeneous generators (restricted to the map components)
    under addition and translating by one particular solution.
    """
    ring = t.ring
    if not ring.is_finite:
        raise ValueError("solution sets are only enumerated over finite rings")
    ms = _morphism_system(t, t2, fixed)
    names = [n for n in ("f", "g", "h") if n not in fixed]
    sol = ms.solve()
    if sol is None:
        return []

    def key(d):
        return tuple(d[n] for n in names)

    gens = {key(x) for x in ms.homogeneous_generators()}
    zero = key({n: ChainMap.zero(*ms.maps[n]) for n in names})
    span = {zero}
    frontier = [zero]
    while frontier:
        new = []
        for a in frontier:
            for b in gens:
                c = tuple(x + y for x, y in zip(a, b))
                if c not in span:
                    span.add(c)
                    new.append(c)
                    if len(span) > limit:
                        raise ValueError("solution set exceeds the enumeration limit")
        frontier = new
    base = key(sol)
    out = {tuple(x + y for x, y in zip(base, a)) for a in span}
    rows = [dict(zip(names, o)) for o in out]
    rows.sort(key=lambda d: tuple(str(sorted(d[n].comps.items())) for n in names))
    return rows


def fill_solution_set(g: ChainMap, t: CandidateTriangle, t2: CandidateTriangle, limit: int = 4096) -> list:
    """All strict pairs (f, h) completing g, over a finite ring."""
    return [(d["f"], d["h"]) for d in morphism_solution_set(t, t2, {"g": g}, limit)]


# ---------------------------------------------------------------------------
# 3x3 diagrams

def _assemble(S: Complex, T: Complex, sparts, tparts, entries) -> ChainMap:
    """Build a map between block complexes.

    ``sparts``/``tparts`` are lists of (complex, shift) describing the blocks
    in degree p as complex^(p + shift); ``entries`` maps (i, j) to a function
    p -> Matrix for the block from source part j to target part i.
    """
    ring = S.ring
    comps = {}
    for p in S.support:
        if not T.rank(p):
            continue
        rs = [c.rank(p + s) for c, s in tparts]
        cs = [c.rank(p + s) for c, s in sparts]
        grid = [[None] * len(sparts) for _ in tparts]
        for (i, j), fn in entries.items():
            if rs[i] and cs[j]:
                grid[i][j] = fn(p)
        comps[p] = Matrix.block(ring, rs, cs, grid)
    return ChainMap(S, T, comps)


@dataclass
class ThreeByThree:
    """A 3x3 diagram: rows[i] and cols[j] are triangles, grid[i][j] objects.

    Rows are indexed bottom-up: row 0 is X -> Y -> C_u, row 1 is
    X2 -> Y2 -> C_u2, row 2 is C_f -> C_g -> Z, row 3 is the shift of row 0.
    """

    grid: list
    hmaps: list        # hmaps[i][j]: grid[i][j] -> grid[i][j+1], i in 0..3, j in 0..2
    vmaps: list        # vmaps[i][j]: grid[i][j] -> grid[i+1][j], i in 0..2, j in 0..3
    row_certs: list
    col_certs: list
    squares: dict = field(default_factory=dict)
    theta: ChainMap | None = None
    filtered: bool = False

    def square_sign(self, i: int, j: int) -> int:
        return -1 if (i, j) == (2, 2) else 1

    def check_squares(self) -> dict:
        out = {}
        for i in range(3):
            for j in range(3):
                top = self.vmaps[i][j + 1] @ self.hmaps[i][j]
                bot = self.hmaps[i + 1][j] @ self.vmaps[i][j]
                if self.square_sign(i, j) < 0:
                    bot = -bot
                w = homotopy_witness(top, bot, self.filtered)
                out[(i, j)] = {"sign": self.square_sign(i, j), "strict": top == bot, "witness": w}
        self.squares = out
        return out

    def report(self) -> dict:
        sq = self.squares or self.check_squares()
        objects_ok = True
        for row in self.grid:
            for X in row:
                try:
                    X.check()
                except VerificationError:
                    objects_ok = False
        return {
            "objects_d2": objects_ok,
            "rows_certified": all(c is not None and c.verify() for c in self.row_certs),
            "cols_certified": all(c is not None and c.verify() for c in self.col_certs),
            "commutative": sum(1 for v in sq.values() if v["sign"] > 0 and v["witness"] is not None),
            "anticommutative": sum(1 for v in sq.values() if v["sign"] < 0 and v["witness"] is not None),
            "squares": len(sq),
        }

    def ok(self) -> bool:
        r = self.report()
        return (r["objects_d2"] and r["rows_certified"] and r["cols_certified"]
                and r["commutative"] == 8 and r["anticommutative"] == 1)


def complete_3x3(u: ChainMap, u2: ChainMap, f: ChainMap, g: ChainMap,
                 k: HomotopyWitness | None = None) -> ThreeByThree:
    """Complete the square (u: X -> Y, u2: X2 -> Y2, f: X -> X2, g: Y -> Y2)
    with g∘u ≃ u2∘f to a 3x3 diagram built from mapping cones.

    ``k`` is a homotopy with g∘u - u2∘f = d k + k d; it is searched for when
    omitted.
    """
    X, Y, X2, Y2 = u.source, u.target, u2.source, u2.target
    if f.source != X or f.target != X2 or g.source != Y or g.target != Y2:
        raise ValueError("square maps do not match")
    filt = all(Z.is_filtered for Z in (X, Y, X2, Y2))
    if k is None:
        k = homotopy_witness(g @ u, u2 @ f, filt)
        if k is None:
            raise ValueError("square does not commute up to homotopy")
    elif not k.verify(g @ u, u2 @ f):
        raise VerificationError("supplied commutativity witness fails")
    Cu, iu, pu = cone(u)
    Cu2, iu2, pu2 = cone(u2)
    Cf, i_f, p_f = cone(f)
    Cg, i_g, p_g = cone(g)
    # phi: C_u -> C_u2 = [[g, k], [0, f]]
    phi = _assemble(Cu, Cu2, [(Y, 0), (X, 1)], [(Y2, 0), (X2, 1)], {
        (0, 0): lambda p: g[p], (0, 1): lambda p: k.at(p + 1), (1, 1): lambda p: f[p + 1]})
    # psi: C_f -> C_g = [[u2, -k], [0, u]]
    psi = _assemble(Cf, Cg, [(X2, 0), (X, 1)], [(Y2, 0), (Y, 1)], {
        (0, 0): lambda p: u2[p], (0, 1): lambda p: -k.at(p + 1), (1, 1): lambda p: u[p + 1]})
    Z, i_phi, p_phi = cone(phi)
    zparts = [(Y2, 0), (X2, 1), (Y, 1), (X, 2)]
    ring = u.ring

    def eye(C):
        return lambda p: Matrix.identity(ring, C.rank(p))

    def neg_eye(C):
        return lambda p: Matrix.scalar(ring, C.rank(p), -1)

    # M: C_g -> Z and N: Z -> [1]C_f
    M = _assemble(Cg, Z, [(Y2, 0), (Y, 1)], zparts, {(0, 0): eye(Y2), (2, 1): lambda p: Matrix.identity(ring, Y.rank(p + 1))})
    sCf = shift(Cf, 1)
    N = _assemble(Z, sCf, zparts, [(X2, 1), (X, 2)], {
        (0, 1): lambda p: Matrix.identity(ring, X2.rank(p + 1)),
        (1, 3): lambda p: Matrix.scalar(ring, X.rank(p + 2), -1)})
    # explicit comparison Cone(psi) -> Z (a signed permutation, its own inverse)
    Cpsi, _, _ = cone(psi)
    cparts = [(Y2, 0), (Y, 1), (X2, 1), (X, 2)]
    theta = _assemble(Cpsi, Z, cparts, zparts, {
        (0, 0): eye(Y2), (2, 1): lambda p: Matrix.identity(ring, Y.rank(p + 1)),
        (1, 2): lambda p: Matrix.identity(ring, X2.rank(p + 1)),
        (3, 3): lambda p: Matrix.scalar(ring, X.rank(p + 2), -1)})
    theta_inv = _assemble(Z, Cpsi, zparts, cparts, {
        (0, 0): eye(Y2), (1, 2): lambda p: Matrix.identity(ring, Y.rank(p + 1)),
        (2, 1): lambda p: Matrix.identity(ring, X2.rank(p + 1)),
        (3, 3): lambda p: Matrix.scalar(ring, X.rank(p + 2), -1)})
    row2 = CandidateTriangle(psi, M, N)
    rows = [cone_triangle(u), cone_triangle(u2), row2]
    row_certs = [trivial_certificate(u), trivial_certificate(u2),
                 certify_triangle(row2, theta_inv, theta, filtered=filt)]
    col_certs = [trivial_certificate(f), trivial_certificate(g), trivial_certificate(phi)]
    grid = [
        [X, Y, Cu, shift(X, 1)],
        [X2, Y2, Cu2, shift(X2, 1)],
        [Cf, Cg, Z, sCf],
        [shift(X, 1), shift(Y, 1), shift(Cu, 1), shift(X, 2)],
    ]
    r3 = rows[0].shift(1)
    hmaps = [[t.u, t.v, t.w] for t in rows] + [[r3.u, r3.v, r3.w]]
    vmaps = [
        [f, g, phi, shift_map(f, 1)],
        [i_f, i_g, i_phi, shift_map(i_f, 1)],
        [p_f, p_g, p_phi, shift_map(p_f, 1)],
    ]
    d = ThreeByThree(grid, hmaps, vmaps, row_certs, col_certs, theta=theta, filtered=filt)
    d.check_squares()
    return d
