"""Eventually periodic complexes, the swindle S(X) = X + [2]X + [4]X + ...,
and Grothendieck-group bookkeeping.

A lazy complex is described degreewise by its pieces.  A piece
``(key, q, sign)`` in degree p is a copy of the degree-q term of the finite
complex ``atoms[key]``, sitting in a summand whose differential is
``sign * d``.  Sums, shifts and swindles only rearrange pieces, so the
differential in any degree is read off from the pieces and nothing is
materialized beyond the queried window.
"""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .complex_core import (
    ChainMap,
    Complex,
    HomotopyWitness,
    block_map,
    cone,
    direct_sum,
    homotopy_witness,
    inclusion,
    projection,
    shift,
)
from .exact_linalg import Matrix, Ring
from .homotopy_cat import (
    CandidateTriangle,
    Splitting,
    TriangleCertificate,
    complement_splitting,
    split_idempotent,
)
from .weights import MembershipResult, WeightWindow, membership, restrict, stupid_truncate

INF = math.inf


class SplittingUnavailable(ValueError):
    pass


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


# ---------------------------------------------------------------------------
# lazy complexes

class LazyComplex:
    ring: Ring
    atoms: dict

    def pieces(self, p: int) -> list:
        raise NotImplementedError

    def bounds(self) -> tuple:
        """(lowest, highest) possibly nonzero degree; +-inf when unbounded, (inf, -inf) when zero."""
        raise NotImplementedError

    def rank(self, p: int) -> int:
        return sum(self.atoms[k].rank(q) for k, q, _ in self.pieces(p))

    def sizes(self, p: int) -> list:
        return [self.atoms[k].rank(q) for k, q, _ in self.pieces(p)]

    def d(self, p: int) -> Matrix:
        cols, rows = self.pieces(p), self.pieces(p + 1)
        slots = defaultdict(list)
        for i, (k, q, s) in enumerate(rows):
            slots[(k, q - p - 1, s)].append(i)
        used = Counter()
        grid = [[None] * len(cols) for _ in rows]
        for j, (k, q, s) in enumerate(cols):
            cls = (k, q - p, s)
            occ = used[cls]
            used[cls] += 1
            if occ < len(slots[cls]):
                D = self.atoms[k].d(q)
                grid[slots[cls][occ]][j] = D if s == 1 else -D
        return Matrix.block(self.ring, self.sizes(p + 1), self.sizes(p), grid)

    def window(self, a: int, b: int) -> Complex:
        """The brutal truncation to degrees a..b as a finite complex."""
        ranks = {p: self.rank(p) for p in range(a, b + 1)}
        diffs = {p: self.d(p) for p in range(a, b) if ranks[p] and ranks[p + 1]}
        return Complex(self.ring, ranks, diffs)

    def is_bounded_above(self) -> bool:
        return self.bounds()[1] < INF

    def is_bounded_below(self) -> bool:
        return self.bounds()[0] > -INF


def _merge_atoms(parts) -> dict:
    out = {}
    for P in parts:
        for k, X in P.atoms.items():
            if k in out and out[k] != X:
                raise ValueError(f"atom {k!r} used for two different complexes")
            out[k] = X
    return out


class Atom(LazyComplex):
    """A finite complex seen as a lazy one."""

    def __init__(self, X: Complex, key: str = "X"):
        self.ring = X.ring
        self.X = X
        self.key = key
        self.atoms = {key: X}

    def pieces(self, p):
        return [(self.key, p, 1)] if self.X.rank(p) else []

    def bounds(self):
        if self.X.is_zero():
            return (INF, -INF)
        return (self.X.lo, self.X.hi)


class LazyShift(LazyComplex):
    """[k]L: degree p is L in degree p + k, differential times (-1)^k."""

    def __init__(self, L: LazyComplex, k: int):
        self.ring = L.ring
        self.L = L
        self.k = k
        self.atoms = L.atoms

    def pieces(self, p):
        s = _sign(self.k)
        return [(key, q, sg * s) for key, q, sg in self.L.pieces(p + self.k)]

    def bounds(self):
        lo, hi = self.L.bounds()
        return (lo - self.k, hi - self.k)


class LazySum(LazyComplex):
    def __init__(self, *parts: LazyComplex):
        if not parts:
            raise ValueError("empty sum")
        self.ring = parts[0].ring
        self.parts = parts
        self.atoms = _merge_atoms(parts)

    def pieces(self, p):
        return [x for P in self.parts for x in P.pieces(p)]

    def bounds(self):
        bs = [P.bounds() for P in self.parts]
        return (min(b[0] for b in bs), max(b[1] for b in bs))


def as_lazy(X, key: str = "X") -> LazyComplex:
    return X if isinstance(X, LazyComplex) else Atom(X, key)


class EventuallyPeriodicComplex(LazyComplex):
    """The sum over n >= 0 of [2n]X ("down", X bounded above) or of
    [-2n]X ("up", X bounded below).

    In degree p only finitely many summands are nonzero, so ranks and
    differentials are finite and computed on demand.
    """

    period = 2

    def __init__(self, seed, direction: str = "down", key: str = "X"):
        if direction not in ("down", "up"):
            raise ValueError("direction is 'down' or 'up'")
        self.seed = as_lazy(seed, key)
        self.direction = direction
        self.ring = self.seed.ring
        self.atoms = self.seed.atoms
        lo, hi = self.seed.bounds()
        if lo <= hi:
            if direction == "down" and hi == INF:
                raise ValueError("the seed is not bounded above, so the sum is not degreewise finite")
            if direction == "up" and lo == -INF:
                raise ValueError("the seed is not bounded below, so the sum is not degreewise finite")

    def _offsets(self, p: int) -> range:
        """The n whose summand [+-2n]X is nonzero in degree p."""
        lo, hi = self.seed.bounds()
        if lo > hi:
            return range(0)
        if self.direction == "down":     # need lo <= p + 2n <= hi
            start = 0 if lo == -INF else max(0, math.ceil((lo - p) / 2))
            stop = math.floor((hi - p) / 2)
        else:                            # need lo <= p - 2n <= hi
            start = 0 if hi == INF else max(0, math.ceil((p - hi) / 2))
            stop = math.floor((p - lo) / 2)
        return range(start, stop + 1)

    def _step(self) -> int:
        return self.period if self.direction == "down" else -self.period

    def pieces(self, p):
        st = self._step()
        return [x for n in self._offsets(p) for x in self.seed.pieces(p + st * n)]

    def contributing_shifts(self, p: int) -> int:
        return len(self._offsets(p))

    def closed_form_rank(self, p: int) -> int:
        """Sum of the seed ranks in degrees p, p+2, p+4, ... (or p, p-2, ...)."""
        if not isinstance(self.seed, Atom):
            raise ValueError("closed form needs a finite seed")
        X = self.seed.X
        if self.direction == "down":
            return sum(r for q, r in X.ranks.items() if q >= p and (q - p) % 2 == 0)
        return sum(r for q, r in X.ranks.items() if q <= p and (p - q) % 2 == 0)

    def bounds(self):
        lo, hi = self.seed.bounds()
        if lo > hi:
            return (INF, -INF)
        return (-INF, hi) if self.direction == "down" else (lo, INF)


# ---------------------------------------------------------------------------
# lazy maps and homotopies

class LazyMap:
    """Degreewise matrices source^p -> target^p, computed on demand."""

    def __init__(self, source: LazyComplex, target: LazyComplex, comp):
        self.source = source
        self.target = target
        self._comp = comp
        self._cache = {}

    def __getitem__(self, p: int) -> Matrix:
        if p not in self._cache:
            M = self._comp(p)
            if M.shape != (self.target.rank(p), self.source.rank(p)):
                raise ValueError(f"component {p} has the wrong shape")
            self._cache[p] = M
        return self._cache[p]

    def __matmul__(self, other: "LazyMap") -> "LazyMap":
        return LazyMap(other.source, self.target, lambda p: self[p] @ other[p])

    def __sub__(self, other: "LazyMap") -> "LazyMap":
        return LazyMap(self.source, self.target, lambda p: self[p] - other[p])

    @classmethod
    def identity(cls, L: LazyComplex) -> "LazyMap":
        return cls(L, L, lambda p: Matrix.identity(L.ring, L.rank(p)))

    def check(self, a: int, b: int) -> bool:
        """Chain map condition in degrees a..b (exact, no truncation involved)."""
        S, T = self.source, self.target
        return all(self[p + 1] @ S.d(p) == T.d(p) @ self[p] for p in range(a, b + 1))

    def agrees(self, other: "LazyMap", a: int, b: int) -> bool:
        return all(self[p] == other[p] for p in range(a, b + 1))

    def is_identity_on(self, a: int, b: int) -> bool:
        return all(self[p] == Matrix.identity(self.source.ring, self.source.rank(p)) for p in range(a, b + 1))

    def restrict(self, a: int, b: int) -> ChainMap:
        return ChainMap(self.source.window(a, b), self.target.window(a, b),
                        {p: self[p] for p in range(a, b + 1)}, check=False)


class LazyHomotopy:
    """h^p: source^p -> target^(p-1)."""

    def __init__(self, source: LazyComplex, target: LazyComplex, comp):
        self.source = source
        self.target = target
        self._comp = comp

    def at(self, p: int) -> Matrix:
        return self._comp(p)

    def verify(self, f: LazyMap, g: LazyMap, a: int, b: int) -> bool:
        """f - g = d h + h d in degrees a..b."""
        S, T = self.source, self.target
        return all(f[p] - g[p] == T.d(p - 1) @ self.at(p) + self.at(p + 1) @ S.d(p)
                   for p in range(a, b + 1))


def permutation_map(S: LazyComplex, T: LazyComplex) -> LazyMap:
    """The identity-block isomorphism S -> T matching pieces with the same
    atom, offset and sign (in order of occurrence)."""

    def comp(p):
        cols, rows = S.pieces(p), T.pieces(p)
        slots = defaultdict(list)
        for i, (k, q, s) in enumerate(rows):
            slots[(k, q - p, s)].append(i)
        used = Counter()
        grid = [[None] * len(cols) for _ in rows]
        for j, (k, q, s) in enumerate(cols):
            cls = (k, q - p, s)
            occ = used[cls]
            used[cls] += 1
            if occ >= len(slots[cls]):
                raise ValueError(f"degree {p}: no matching piece for {cls}")
            grid[slots[cls][occ]][j] = 1
        if sum(used.values()) != len(rows):
            raise ValueError(f"degree {p}: the pieces do not match")
        return Matrix.block(S.ring, T.sizes(p), S.sizes(p), grid)

    return LazyMap(S, T, comp)


def atomic_map(S: LazyComplex, T: LazyComplex, maps: dict) -> LazyMap:
    """Apply ``maps[(k1, k2)]: atoms[k1] -> atoms[k2]`` copywise.

    A piece of k1 is sent to the pieces of k2 with the same degree and sign,
    so this is meant for sums in which each (atom, offset, sign) occurs once.
    """

    def comp(p):
        cols, rows = S.pieces(p), T.pieces(p)
        grid = [[None] * len(cols) for _ in rows]
        for i, (k2, q2, s2) in enumerate(rows):
            for j, (k1, q1, s1) in enumerate(cols):
                f = maps.get((k1, k2))
                if f is not None and q1 == q2 and s1 == s2:
                    grid[i][j] = f[q1]
        return Matrix.block(S.ring, T.sizes(p), S.sizes(p), grid)

    return LazyMap(S, T, comp)


def atomic_homotopy(S: LazyComplex, T: LazyComplex, hs: dict) -> LazyHomotopy:
    """Copywise homotopies; on a copy with sign s the homotopy is s*h."""

    def comp(p):
        cols, rows = S.pieces(p), T.pieces(p - 1)
        grid = [[None] * len(cols) for _ in rows]
        for i, (k2, q2, s2) in enumerate(rows):
            for j, (k1, q1, s1) in enumerate(cols):
                h = hs.get((k1, k2))
                if h is not None and q2 == q1 - 1 and s1 == s2:
                    H = h.at(q1)
                    grid[i][j] = H if s1 == 1 else -H
        return Matrix.block(S.ring, T.sizes(p - 1), S.sizes(p), grid)

    return LazyHomotopy(S, T, comp)


# ---------------------------------------------------------------------------
# the swindle isomorphism

@dataclass
class SwindleIso:
    """S(X) -> X + [+-2]S(X) and its inverse, both identity blocks."""

    S: EventuallyPeriodicComplex
    target: LazyComplex
    iso: LazyMap
    inverse: LazyMap

    def default_window(self, width: int = 10) -> tuple:
        lo, hi = self.S.seed.bounds()
        if lo > hi:
            return (0, width - 1)
        if self.S.direction == "down":
            return (int(hi) - width + 1, int(hi))
        return (int(lo), int(lo) + width - 1)

    def verify(self, a: int, b: int) -> bool:
        return (self.iso.check(a, b) and self.inverse.check(a, b)
                and (self.inverse @ self.iso).is_identity_on(a, b)
                and (self.iso @ self.inverse).is_identity_on(a, b))


def build_swindle(X, direction: str = "down", key: str = "X") -> SwindleIso:
    """S(X) together with the strict isomorphism S(X) = X + [2]S(X)
    (or X + [-2]S(X) for the dual direction)."""
    if isinstance(X, LazyComplex):
        lo, hi = X.bounds()
        if lo == -INF and hi == INF:
            raise ValueError("two-sided unbounded seed")
    S = EventuallyPeriodicComplex(X, direction, key)
    k = 2 if direction == "down" else -2
    T = LazySum(S.seed, LazyShift(S, k))
    return SwindleIso(S, T, permutation_map(S, T), permutation_map(T, S))


# ---------------------------------------------------------------------------
# explicit triangle certificates

def _blocks(ring, rows: list, cols: list, entries: dict) -> Matrix:
    """Block matrix with ``entries[(i, j)]`` in block (i, j) (1 means identity, -1 minus identity)."""
    grid = [[entries.get((i, j)) for j in range(len(cols))] for i in range(len(rows))]
    return Matrix.block(ring, rows, cols, grid)


def direct_sum_certificate(X: Complex, Z: Complex) -> TriangleCertificate:
    """X -> X + Z -> Z -0-> [1]X with explicit comparison maps and homotopies."""
    ring = X.ring
    Y = direct_sum(X, Z)
    u, v = inclusion([X, Z], 0), projection([X, Z], 1)
    t = CandidateTriangle(u, v, ChainMap.zero(Z, shift(X, 1)))
    C, _, _ = cone(u)

    def cs(p):     # cone summands in degree p: X^p, Z^p, X^(p+1)
        return [X.rank(p), Z.rank(p), X.rank(p + 1)]

    degs = C.support
    phi = ChainMap(Z, C, {p: _blocks(ring, cs(p), [Z.rank(p)], {(1, 0): 1}) for p in Z.support if C.rank(p)})
    psi = ChainMap(C, Z, {p: _blocks(ring, [Z.rank(p)], cs(p), {(0, 1): 1}) for p in degs if Z.rank(p)})
    hl = HomotopyWitness(Y, C, {p: _blocks(ring, cs(p - 1), [X.rank(p), Z.rank(p)], {(2, 0): -1})
                                for p in Y.support})
    hr = HomotopyWitness(Z, shift(X, 1), {})
    h1 = HomotopyWitness(Z, Z, {})
    h2 = HomotopyWitness(C, C, {p: _blocks(ring, cs(p - 1), cs(p), {(2, 0): -1}) for p in degs})
    return TriangleCertificate(t, phi, psi, hl, hr, h1, h2)


def elementary_sum_certificate(A: Complex, B: Complex) -> TriangleCertificate:
    """The direct sum of 0 -> A -1-> A -> 0, A -> 0 -> [1]A -1-> [1]A and
    B -1-> B -> 0 -> [1]B, that is

        A+B -diag(0,1)-> A+B -diag(1,0)-> A+[1]A -(0 1; 0 0)-> [1](A+B),

    with explicit comparison maps and homotopies.
    """
    ring = A.ring
    X = direct_sum(A, B)
    sA = shift(A, 1)
    Z = direct_sum(A, sA)

    def xs(p):
        return [A.rank(p), B.rank(p)]

    def zs(p):
        return [A.rank(p), A.rank(p + 1)]

    def cs(p):     # A^p, B^p, A^(p+1), B^(p+1)
        return [A.rank(p), B.rank(p), A.rank(p + 1), B.rank(p + 1)]

    def cm(S, T, f):
        return ChainMap(S, T, {p: f(p) for p in S.support if T.rank(p)})

    u = cm(X, X, lambda p: _blocks(ring, xs(p), xs(p), {(1, 1): 1}))
    v = cm(X, Z, lambda p: _blocks(ring, zs(p), xs(p), {(0, 0): 1}))
    sX = shift(X, 1)
    w = cm(Z, sX, lambda p: _blocks(ring, xs(p + 1), zs(p), {(0, 1): 1}))
    t = CandidateTriangle(u, v, w)
    C, _, _ = cone(u)
    phi = cm(Z, C, lambda p: _blocks(ring, cs(p), zs(p), {(0, 0): 1, (2, 1): 1}))
    psi = cm(C, Z, lambda p: _blocks(ring, zs(p), cs(p), {(0, 0): 1, (1, 2): 1}))
    hl = HomotopyWitness(X, C, {p: _blocks(ring, cs(p - 1), xs(p), {(3, 1): -1}) for p in X.support})
    hr = HomotopyWitness(Z, sX, {})
    h1 = HomotopyWitness(Z, Z, {})
    h2 = HomotopyWitness(C, C, {p: _blocks(ring, cs(p - 1), cs(p), {(3, 1): -1}) for p in C.support})
    return TriangleCertificate(t, phi, psi, hl, hr, h1, h2)


def zero_map_certificate(Z: Complex) -> TriangleCertificate:
    """Z -> 0 -> [1]Z -1-> [1]Z; the cone of Z -> 0 is [1]Z itself."""
    O = Complex.zero(Z.ring)
    m = ChainMap.zero(Z, O)
    C, iota, pi = cone(m)
    t = CandidateTriangle(m, iota, pi)
    I = ChainMap.identity(C)
    return TriangleCertificate(t, I, I, HomotopyWitness(O, C, {}), HomotopyWitness(C, shift(Z, 1), {}),
                               HomotopyWitness(C, C, {}), HomotopyWitness(C, C, {}))


# ---------------------------------------------------------------------------
# K_0 bookkeeping

@dataclass
class K0Step:
    """sum(coeff * [label]) = 0, witnessed by ``certificate``."""

    relation: dict
    statement: str
    kind: str                 # "iso+triangle", "triangle" or "nested"
    replay: object            # callable -> bool

    def verify(self) -> bool:
        return bool(self.replay())


@dataclass
class K0Relation:
    """A derivation: the integer combination of the steps' relations equals
    ``conclusion`` (again read as sum(coeff * [label]) = 0)."""

    steps: list
    coefficients: list
    conclusion: dict
    window: tuple
    failures: list = field(default_factory=list)

    def combination(self) -> dict:
        tot = Counter()
        for c, st in zip(self.coefficients, self.steps):
            for lab, v in st.relation.items():
                tot[lab] += c * v
        return {k: v for k, v in tot.items() if v}

    def replay(self) -> bool:
        self.failures = [st.statement for st in self.steps if not st.verify()]
        conc = {k: v for k, v in self.conclusion.items() if v}
        if self.combination() != conc:
            self.failures.append("the combination of the steps does not give the conclusion")
        return not self.failures

    def lines(self) -> list:
        out = []
        for c, st in zip(self.coefficients, self.steps):
            out.append(f"{c:+d} x ({st.statement})  [{st.kind}]")
        conc = " + ".join(f"{v}[{k}]" for k, v in sorted(self.conclusion.items()))
        out.append(f"=> {conc} = 0")
        return out


def k0_relation(B: Complex, direction: str = "down", window: tuple | None = None,
                name: str = "B") -> K0Relation:
    """[B] = 0 from the swindle T = T(B).

    Steps: [T] = [B] + [[2]T] (strict iso plus the direct sum triangle),
    [T] + [[1]T] = 0 and [[1]T] + [[2]T] = 0 (triangles Z -> 0 -> [1]Z).
    For the dual direction the shifts are -1 and -2.  Every certificate is
    replayed on the finite window.
    """
    if not isinstance(B, Complex):
        raise TypeError("k0_relation expects a finite (bounded) complex")
    sw = build_swindle(B, direction, key=name)
    a, b = window if window is not None else sw.default_window()
    T = sw.S
    e = 1 if direction == "down" else -1
    lT, l1, l2 = f"T({name})", f"[{e}]T({name})", f"[{2 * e}]T({name})"

    def step_iso():
        Bw = restrict(B, a, b)
        T2w = LazyShift(T, 2 * e).window(a, b)
        return sw.verify(a, b) and direct_sum_certificate(Bw, T2w).verify()

    def step_tri(k):
        def run():
            Zw = LazyShift(T, k).window(a, b) if k else T.window(a, b)
            return zero_map_certificate(Zw).verify()
        return run

    if direction == "down":
        tri1, tri2 = (0, {lT: 1, l1: 1}), (1, {l1: 1, l2: 1})
    else:
        tri1, tri2 = (-1, {l1: 1, lT: 1}), (-2, {l2: 1, l1: 1})
    steps = [
        K0Step({lT: 1, name: -1, l2: -1}, f"[{lT}] = [{name}] + [{l2}]", "iso+triangle", step_iso),
        K0Step(tri1[1], f"[{lT}] + [{l1}] = 0" if e == 1 else f"[{l1}] + [{lT}] = 0", "triangle",
               step_tri(tri1[0])),
        K0Step(tri2[1], f"[{l1}] + [{l2}] = 0" if e == 1 else f"[{l2}] + [{l1}] = 0", "triangle",
               step_tri(tri2[0])),
    ]
    return K0Relation(steps, [1, -1, 1], {name: -1}, (a, b))


def k0_of_complex(X: Complex, n: int = 0, width: int = 10) -> K0Relation:
    """[X] = [A] + [B] with A = w_{>n}X (dual swindle) and B = w_{<=n}X (swindle), hence [X] = 0."""
    D = stupid_truncate(X, n)
    A, B = D.wge, D.wle
    rB = k0_relation(B, "down", (n - width + 1, n), name="B")
    rA = k0_relation(A, "up", (n + 1, n + width), name="A")
    tri = K0Step({"X": 1, "A": -1, "B": -1}, "[X] = [A] + [B]", "triangle", D.verify)
    steps = [tri]
    coeffs = [1]
    for sub in (rB, rA):
        for c, st in zip(sub.coefficients, sub.steps):
            steps.append(st)
            coeffs.append(-c)
    return K0Relation(steps, coeffs, {"X": 1}, (n - width + 1, n + width))


# ---------------------------------------------------------------------------
# the membership chain for a split idempotent

def le_membership(L: LazyComplex, n: int, a: int) -> MembershipResult:
    """Is the bounded-above lazy L in T^{w<=n}?  Over a field this is
    decided by cohomology above n, which the window a..top computes
    exactly as long as a < n."""
    lo, hi = L.bounds()
    if hi == INF:
        raise ValueError("not bounded above")
    if lo > hi:
        return MembershipResult("yes", "zero object")
    if a >= n:
        raise ValueError("the window must start below n")
    top = max(int(hi), n)
    return membership(L.window(a, top), WeightWindow(None, n))


def _split_blocks(H: Matrix, rows: list, cols: list) -> dict:
    out = {}
    r0 = 0
    for i, r in enumerate(rows):
        c0 = 0
        for j, c in enumerate(cols):
            out[(i, j)] = H.submatrix(range(r0, r0 + r), range(c0, c0 + c))
            c0 += c
        r0 += r
    return out


@dataclass
class SplitTrace:
    M: Complex
    E: Complex
    F: Complex
    n: int
    window: tuple
    steps: dict

    @property
    def ok(self) -> bool:
        return all(self.steps.values())

    def lines(self) -> list:
        return [f"{k}: {'ok' if v else 'FAIL'}" for k, v in self.steps.items()]


def swindle_split_trace(M: Complex, e: ChainMap, n: int | None = None,
                        window: tuple | None = None) -> SplitTrace:
    """Realize M = E + F for the idempotent e and replay the membership
    chain that shows E lies in T^{w<=n}, on a finite window."""
    if not M.ring.is_field:
        raise SplittingUnavailable("the trace needs a field")
    sp = split_idempotent(e)
    if not isinstance(sp, Splitting):
        raise SplittingUnavailable(getattr(sp, "reason", "splitting unavailable"))
    cp = complement_splitting(e, sp.Y, sp.p, sp.i)
    E, F = sp.Y, cp.Y
    if n is None:
        n = M.hi if not M.is_zero() else 0
    if window is None:
        lo = M.lo if not M.is_zero() else n
        a = min(lo, n) - 8
        b = max(M.hi if not M.is_zero() else n, n)
    else:
        a, b = window
    if not membership(M, WeightWindow(None, n)):
        raise ValueError(f"M is not in T(w<=n) for n = {n}")
    if a >= n:
        raise ValueError("the window must start below n")
    steps = {}
    steps["splitting"] = sp.verify() and cp.verify()

    # M = E + F in K, with homotopies for both composites
    EF = direct_sum(E, F)
    P = block_map([M], [E, F], [[sp.p], [cp.p]])
    I = block_map([E, F], [M], [[sp.i, cp.i]])
    h_M = homotopy_witness(I @ P, ChainMap.identity(M))
    h_EF = homotopy_witness(P @ I, ChainMap.identity(EF))
    steps["M = E + F"] = h_M is not None and h_EF is not None
    if not steps["M = E + F"]:
        return SplitTrace(M, E, F, n, (a, b), steps)

    # the four blocks of P∘I and of its homotopy, as atom-to-atom data
    keys = ["E", "F"]
    sizes = {"E": E, "F": F}
    PI = P @ I
    pi_maps, h_maps = {}, {}
    for i, k2 in enumerate(keys):
        for j, k1 in enumerate(keys):
            comps, hs = {}, {}
            for q in set(E.support) | set(F.support) | {x + 1 for x in EF.support}:
                if EF.rank(q):
                    bl = _split_blocks(PI[q], [E.rank(q), F.rank(q)], [E.rank(q), F.rank(q)])
                    comps[q] = bl[(i, j)]
                hq = h_EF.at(q)
                if hq.rows and hq.cols:
                    bl = _split_blocks(hq, [E.rank(q - 1), F.rank(q - 1)], [E.rank(q), F.rank(q)])
                    hs[q] = bl[(i, j)]
            src, tgt = sizes[k1], sizes[k2]
            pi_maps[(k1, k2)] = ChainMap(src, tgt, {q: m for q, m in comps.items() if src.rank(q) and tgt.rank(q)},
                                         check=False)
            h_maps[(k1, k2)] = HomotopyWitness(src, tgt, {q: m for q, m in hs.items()
                                                          if src.rank(q) and tgt.rank(q - 1)})

    SM = EventuallyPeriodicComplex(M, key="M")
    SE = EventuallyPeriodicComplex(E, key="E")
    SF = EventuallyPeriodicComplex(F, key="F")
    SEF = LazySum(SE, SF)
    sP = atomic_map(SM, SEF, {("M", "E"): sp.p, ("M", "F"): cp.p})
    sI = atomic_map(SEF, SM, {("E", "M"): sp.i, ("F", "M"): cp.i})
    sH_M = atomic_homotopy(SM, SM, {("M", "M"): h_M})
    sPI = atomic_map(SEF, SEF, pi_maps)
    sH_EF = atomic_homotopy(SEF, SEF, h_maps)
    steps["SM = SE + SF"] = (
        sP.check(a, b) and sI.check(a, b)
        and sPI.agrees(sP @ sI, a, b)
        and sH_M.verify(sI @ sP, LazyMap.identity(SM), a, b)
        and sH_EF.verify(sPI, LazyMap.identity(SEF), a, b))

    swE = build_swindle(E, key="E")
    steps["SE = E + [2]SE"] = swE.verify(a, b)
    smint = LazySum(swE.target, SF)
    fwd, back = permutation_map(SEF, smint), permutation_map(smint, SEF)
    steps["SE + SF = (E + [2]SE) + SF"] = (fwd.check(a, b) and back.check(a, b)
                                          and (back @ fwd).is_identity_on(a, b))
    steps["SM in T(w<=n)"] = bool(le_membership(SM, n, a))

    # SE + [1]SE and [1]SF + [2]SF
    SEw, SFw = SE.window(a, b), SF.window(a, b)
    steps["sum of elementary triangles (E)"] = elementary_sum_certificate(SEw, SFw).verify()
    steps["sum of elementary triangles (F)"] = elementary_sum_certificate(SFw, SEw).verify()
    steps["SE + [1]SE in T(w<=n)"] = bool(le_membership(LazySum(SE, LazyShift(SE, 1)), n, a))
    steps["[1]SF + [2]SF in T(w<=n)"] = bool(le_membership(LazySum(LazyShift(SF, 1), LazyShift(SF, 2)), n, a))

    # the big sum, rearranged
    lhs = LazySum(swE.target, SF, SE, LazyShift(SE, 1), LazyShift(SF, 1), LazyShift(SF, 2))
    rhs = LazySum(Atom(E, "E"), SE, SF, LazyShift(SE, 1), LazyShift(SF, 1),
                  LazyShift(SE, 2), LazyShift(SF, 2))
    fwd, back = permutation_map(lhs, rhs), permutation_map(rhs, lhs)
    steps["sum = E + [S' + [1]S' + [2]S'] with S' = SE + SF"] = (
        fwd.check(a, b) and back.check(a, b) and (back @ fwd).is_identity_on(a, b))
    R = LazySum(SM, LazyShift(SM, 1), LazyShift(SM, 2))
    steps["R in T(w<=n)"] = bool(le_membership(R, n, a))
    Ew = restrict(E, a, b)
    steps["triangle R -> R + E -> E -0-> [1]R"] = direct_sum_certificate(R.window(a, b), Ew).verify()
    steps["E in T(w<=n)"] = bool(membership(E, WeightWindow(None, n)))
    return SplitTrace(M, E, F, n, (a, b), steps)
