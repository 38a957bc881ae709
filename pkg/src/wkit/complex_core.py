"""Bounded cochain complexes of finite free modules, chain maps and homotopies.

Conventions used throughout the package:

* matrices act on column vectors, so the differential in degree n has shape
  rank(n+1) x rank(n);
* ([k]X)^n = X^(n+k) with differential (-1)^k d^(n+k); a shifted map has the
  same components, without sign;
* Cone(m: M -> N) = N + [1]M with differential [[d_N, m], [0, -d_M]];
* S(X) negates every differential.

A complex may carry *levels*: one integer per generator.  Levels are the
split-form filtration data used by :mod:`wkit.filtered`; all constructions
here (shift, cone, sums, S) carry them along.  When levels are present the
differential must not decrease levels, and chain maps between two complexes
with levels must not decrease levels either.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from .exact_linalg import (
    BlockSystem,
    Matrix,
    Ring,
    RingError,
    extend_to_basis,
    inverse,
    kernel_basis,
    rank,
)


class Undecided(Exception):
    """Raised when a question cannot be decided over the given ring."""


class VerificationError(AssertionError):
    """Raised when a stored certificate or structural invariant fails."""


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def level_mask(src_levels, tgt_levels):
    """Allowed (row, col) positions for a level-respecting matrix."""
    return {(i, j) for i, b in enumerate(tgt_levels) for j, a in enumerate(src_levels) if b >= a}


def _respects_levels(M: Matrix, src_levels, tgt_levels) -> bool:
    for i, b in enumerate(tgt_levels):
        for j, a in enumerate(src_levels):
            if b < a and M[i, j]:
                return False
    return True


class Complex:
    """A bounded complex of finite free modules over ``ring``.

    ``ranks`` maps degree -> rank (zero ranks are dropped), ``diffs`` maps
    degree n -> matrix rank(n+1) x rank(n); missing differentials are zero.
    ``levels`` optionally maps degree -> tuple of generator levels.
    """

    __slots__ = ("ring", "_ranks", "_diffs", "_levels", "_hash")

    def __init__(self, ring: Ring, ranks: Mapping[int, int], diffs: Mapping[int, Matrix] | None = None,
                 levels: Mapping[int, Iterable[int]] | None = None, check: bool = True):
        self.ring = ring
        self._ranks = {int(n): int(r) for n, r in sorted(ranks.items()) if int(r) > 0}
        if any(r < 0 for r in ranks.values()):
            raise ValueError("negative rank")
        diffs = dict(diffs or {})
        out = {}
        for n in self._ranks:
            if n + 1 in self._ranks:
                D = diffs.pop(n, None)
                shp = (self._ranks[n + 1], self._ranks[n])
                if D is None:
                    D = Matrix.zeros(ring, *shp)
                if D.ring != ring:
                    raise RingError(f"differential in degree {n} is over {D.ring.descriptor}")
                if D.shape != shp:
                    raise ValueError(f"differential in degree {n} has shape {D.shape}, expected {shp}")
                out[n] = D
        for n, D in diffs.items():
            if not D.is_zero():
                raise ValueError(f"nonzero differential in degree {n} outside the support")
        self._diffs = out
        if levels is not None:
            lv = {}
            for n, r in self._ranks.items():
                L = tuple(int(x) for x in levels.get(n, ()))
                if len(L) != r:
                    raise ValueError(f"degree {n}: {len(L)} levels for rank {r}")
                lv[n] = L
            self._levels = lv
        else:
            self._levels = None
        self._hash = None
        if check:
            self.check()

    # structure
    def check(self):
        for n, D in self._diffs.items():
            if n + 1 in self._diffs:
                if not (self._diffs[n + 1] @ D).is_zero():
                    raise VerificationError(f"d^{n + 1} d^{n} != 0")
        if self._levels is not None:
            for n, D in self._diffs.items():
                if not _respects_levels(D, self._levels[n], self._levels[n + 1]):
                    raise VerificationError(f"differential in degree {n} lowers the filtration level")

    def rank(self, n: int) -> int:
        return self._ranks.get(n, 0)

    def d(self, n: int) -> Matrix:
        D = self._diffs.get(n)
        if D is None:
            return Matrix.zeros(self.ring, self.rank(n + 1), self.rank(n))
        return D

    @property
    def ranks(self) -> dict:
        return dict(self._ranks)

    @property
    def diffs(self) -> dict:
        return dict(self._diffs)

    @property
    def levels(self) -> dict | None:
        return None if self._levels is None else dict(self._levels)

    @property
    def is_filtered(self) -> bool:
        return self._levels is not None

    def level(self, n: int) -> tuple:
        if self._levels is None:
            raise ValueError("complex carries no levels")
        return self._levels.get(n, ())

    @property
    def support(self) -> tuple:
        return tuple(self._ranks)

    @property
    def lo(self):
        return min(self._ranks) if self._ranks else None

    @property
    def hi(self):
        return max(self._ranks) if self._ranks else None

    def is_zero(self) -> bool:
        return not self._ranks

    @property
    def total_rank(self) -> int:
        return sum(self._ranks.values())

    def without_levels(self) -> "Complex":
        if self._levels is None:
            return self
        return Complex(self.ring, self._ranks, self._diffs, check=False)

    def with_levels(self, levels) -> "Complex":
        return Complex(self.ring, self._ranks, self._diffs, levels)

    def __eq__(self, other):
        return (isinstance(other, Complex) and self.ring == other.ring and self._ranks == other._ranks
                and self._diffs == other._diffs and self._levels == other._levels)

    def __hash__(self):
        if self._hash is None:
            lv = None if self._levels is None else tuple(sorted(self._levels.items()))
            self._hash = hash((self.ring, tuple(self._ranks.items()), tuple(sorted(self._diffs.items())), lv))
        return self._hash

    def __repr__(self):
        parts = []
        for n in self.support:
            s = f"{n}:{self.rank(n)}"
            if self._levels is not None:
                s += "@" + ",".join(map(str, self._levels[n]))
            parts.append(s)
        return f"Complex[{self.ring.descriptor}]({' '.join(parts) or '0'})"

    # constructors
    @classmethod
    def zero(cls, ring: Ring, filtered: bool = False) -> "Complex":
        return cls(ring, {}, {}, {} if filtered else None)

    @classmethod
    def stalk(cls, ring: Ring, rank: int, degree: int = 0) -> "Complex":
        return cls(ring, {degree: rank})

    @classmethod
    def from_diffs(cls, ring: Ring, start: int, matrices: list, ranks: list | None = None) -> "Complex":
        """Complex starting in degree ``start`` with the given consecutive differentials.

        ``matrices`` may contain Matrix objects or nested lists.
        """
        mats = [m if isinstance(m, Matrix) else Matrix.from_rows(ring, m) for m in matrices]
        if ranks is None:
            if not mats:
                raise ValueError("need ranks when there are no differentials")
            ranks = [mats[0].cols] + [m.rows for m in mats]
        rk = {start + i: r for i, r in enumerate(ranks)}
        ds = {start + i: m for i, m in enumerate(mats)}
        return cls(ring, rk, ds)


def direct_sum(*Xs: Complex) -> Complex:
    if not Xs:
        raise ValueError("empty direct sum")
    ring = Xs[0].ring
    degs = sorted(set().union(*[set(X.support) for X in Xs]))
    ranks = {n: sum(X.rank(n) for X in Xs) for n in degs}
    diffs = {n: Matrix.block_diag(ring, [X.d(n) for X in Xs]) for n in degs}
    levels = None
    if all(X.is_filtered for X in Xs):
        levels = {n: tuple(x for X in Xs for x in X.level(n)) for n in degs}
    return Complex(ring, ranks, diffs, levels, check=False)


class ChainMap:
    """A morphism of complexes ``source -> target`` given degreewise."""

    __slots__ = ("source", "target", "_comps")

    def __init__(self, source: Complex, target: Complex, comps: Mapping[int, Matrix] | None = None,
                 check: bool = True):
        if source.ring != target.ring:
            raise RingError("source and target over different rings")
        self.source = source
        self.target = target
        out = {}
        comps = comps or {}
        for n in source.support:
            if target.rank(n):
                M = comps.get(n)
                shp = (target.rank(n), source.rank(n))
                if M is None:
                    M = Matrix.zeros(source.ring, *shp)
                if M.shape != shp:
                    raise ValueError(f"component {n} has shape {M.shape}, expected {shp}")
                out[n] = M
        for n, M in comps.items():
            if n not in out and not M.is_zero():
                raise ValueError(f"nonzero component in degree {n} outside the common support")
        self._comps = out
        if check:
            self.check()

    def check(self):
        X, Y = self.source, self.target
        for n in set(X.support) | set(Y.support):
            lhs = Y.d(n) @ self[n]
            rhs = self[n + 1] @ X.d(n)
            if lhs != rhs:
                raise VerificationError(f"chain map condition fails in degree {n}")
        if X.is_filtered and Y.is_filtered:
            for n, M in self._comps.items():
                if not _respects_levels(M, X.level(n), Y.level(n)):
                    raise VerificationError(f"component {n} lowers the filtration level")

    def __getitem__(self, n: int) -> Matrix:
        M = self._comps.get(n)
        if M is None:
            return Matrix.zeros(self.source.ring, self.target.rank(n), self.source.rank(n))
        return M

    @property
    def comps(self) -> dict:
        return dict(self._comps)

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def _same_ends(self, other: "ChainMap"):
        if other.source != self.source or other.target != self.target:
            raise ValueError("maps do not share source and target")

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._same_ends(other)
        return ChainMap(self.source, self.target, {n: self[n] + other[n] for n in self._comps}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._same_ends(other)
        return ChainMap(self.source, self.target, {n: self[n] - other[n] for n in self._comps}, check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: -M for n, M in self._comps.items()}, check=False)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: M.scale(c) for n, M in self._comps.items()}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composition ``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("composition: target of the right map is not the source of the left map")
        comps = {n: self[n] @ other[n] for n in other.source.support if self.target.rank(n)}
        return ChainMap(other.source, self.target, comps, check=False)

    def __eq__(self, other):
        return (isinstance(other, ChainMap) and self.source == other.source and self.target == other.target
                and self._comps == other._comps)

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self._comps.items()))))

    def is_zero(self) -> bool:
        return all(M.is_zero() for M in self._comps.values())

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"

    @classmethod
    def identity(cls, X: Complex) -> "ChainMap":
        return cls(X, X, {n: Matrix.identity(X.ring, X.rank(n)) for n in X.support}, check=False)

    @classmethod
    def zero(cls, X: Complex, Y: Complex) -> "ChainMap":
        return cls(X, Y, {}, check=False)


def dsum_maps(*fs: ChainMap) -> ChainMap:
    """Block-diagonal sum of maps."""
    X = direct_sum(*[f.source for f in fs])
    Y = direct_sum(*[f.target for f in fs])
    comps = {n: Matrix.block_diag(X.ring, [f[n] for f in fs]) for n in X.support if Y.rank(n)}
    return ChainMap(X, Y, comps, check=False)


def inclusion(Xs: list, i: int) -> ChainMap:
    """Inclusion of the i-th summand into direct_sum(*Xs)."""
    S = direct_sum(*Xs)
    ring = S.ring
    comps = {}
    for n in Xs[i].support:
        blocks = [[Matrix.identity(ring, X.rank(n)) if k == i else Matrix.zeros(ring, X.rank(n), Xs[i].rank(n))]
                  for k, X in enumerate(Xs)]
        comps[n] = Matrix.vstack(ring, Xs[i].rank(n), [b[0] for b in blocks])
    return ChainMap(Xs[i], S, comps, check=False)


def projection(Xs: list, i: int) -> ChainMap:
    """Projection of direct_sum(*Xs) onto the i-th summand."""
    S = direct_sum(*Xs)
    ring = S.ring
    comps = {}
    for n in Xs[i].support:
        parts = [Matrix.identity(ring, X.rank(n)) if k == i else Matrix.zeros(ring, Xs[i].rank(n), X.rank(n))
                 for k, X in enumerate(Xs)]
        comps[n] = Matrix.hstack(ring, Xs[i].rank(n), parts)
    return ChainMap(S, Xs[i], comps, check=False)


def block_map(sources: list, targets: list, grid) -> ChainMap:
    """Map direct_sum(sources) -> direct_sum(targets) from a grid of maps / 0 / +-1 scalars."""
    X = direct_sum(*sources)
    Y = direct_sum(*targets)
    ring = X.ring
    comps = {}
    for n in X.support:
        if not Y.rank(n):
            continue
        rows = []
        for i, T in enumerate(targets):
            row = []
            for j, Sx in enumerate(sources):
                g = grid[i][j]
                if isinstance(g, ChainMap):
                    row.append(g[n])
                elif g is None or g == 0:
                    row.append(Matrix.zeros(ring, T.rank(n), Sx.rank(n)))
                else:
                    if T.rank(n) != Sx.rank(n):
                        raise ValueError("scalar block between summands of different rank")
                    row.append(Matrix.scalar(ring, T.rank(n), g))
            rows.append(row)
        comps[n] = Matrix.block(ring, [T.rank(n) for T in targets], [Sx.rank(n) for Sx in sources], rows)
    return ChainMap(X, Y, comps)


# ---------------------------------------------------------------------------
# shifts, cones, S

def shift(X: Complex, k: int) -> Complex:
    """([k]X)^n = X^(n+k) with differential (-1)^k d^(n+k)."""
    if k == 0:
        return X
    s = _sign(k)
    ranks = {n - k: r for n, r in X.ranks.items()}
    diffs = {n - k: (D if s == 1 else -D) for n, D in X.diffs.items()}
    levels = None if not X.is_filtered else {n - k: L for n, L in X.levels.items()}
    return Complex(X.ring, ranks, diffs, levels, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    """([k]f)^n = f^(n+k); no sign."""
    if k == 0:
        return f
    return ChainMap(shift(f.source, k), shift(f.target, k), {n - k: M for n, M in f.comps.items()}, check=False)


def negate_differentials(X: Complex) -> Complex:
    """The functor S: same terms, all differentials negated."""
    return Complex(X.ring, X.ranks, {n: -D for n, D in X.diffs.items()}, X.levels, check=False)


def negate_map(f: ChainMap) -> ChainMap:
    """S on morphisms: the same components between the S-images."""
    return ChainMap(negate_differentials(f.source), negate_differentials(f.target), f.comps, check=False)


class Cone:
    """Mapping cone of m: M -> N with its inclusion and projection."""

    def __init__(self, m: ChainMap):
        M, N = m.source, m.target
        ring = m.ring
        degs = sorted(set(N.support) | {n - 1 for n in M.support})
        ranks = {p: N.rank(p) + M.rank(p + 1) for p in degs}
        diffs = {}
        for p in degs:
            diffs[p] = Matrix.block(
                ring,
                [N.rank(p + 1), M.rank(p + 2)],
                [N.rank(p), M.rank(p + 1)],
                [[N.d(p), m[p + 1]], [None, -M.d(p + 1)]],
            )
        levels = None
        if M.is_filtered and N.is_filtered:
            levels = {p: N.level(p) + M.level(p + 1) for p in degs}
        C = Complex(ring, ranks, diffs, levels, check=False)
        self.map = m
        self.complex = C
        sM = shift(M, 1)
        iota = {}
        pi = {}
        for p in degs:
            if N.rank(p):
                iota[p] = Matrix.vstack(ring, N.rank(p), [Matrix.identity(ring, N.rank(p)),
                                                           Matrix.zeros(ring, M.rank(p + 1), N.rank(p))])
            if M.rank(p + 1):
                pi[p] = Matrix.hstack(ring, M.rank(p + 1), [Matrix.zeros(ring, M.rank(p + 1), N.rank(p)),
                                                             Matrix.identity(ring, M.rank(p + 1))])
        self.iota = ChainMap(N, C, iota, check=False)
        self.pi = ChainMap(C, sM, pi, check=False)

    def __iter__(self):
        return iter((self.complex, self.iota, self.pi))


def cone(m: ChainMap):
    """Return (Cone(m), iota: N -> Cone(m), pi: Cone(m) -> [1]M)."""
    c = Cone(m)
    return c.complex, c.iota, c.pi


# ---------------------------------------------------------------------------
# homotopies

class HomotopyWitness:
    """h^n: X^n -> Y^(n-1) with f - g = d_Y h + h d_X."""

    def __init__(self, source: Complex, target: Complex, h: Mapping[int, Matrix]):
        self.source = source
        self.target = target
        self.h = {n: M for n, M in h.items()}

    def at(self, n: int) -> Matrix:
        M = self.h.get(n)
        if M is None:
            return Matrix.zeros(self.source.ring, self.target.rank(n - 1), self.source.rank(n))
        return M

    def boundary(self) -> ChainMap:
        """The null-homotopic map d h + h d."""
        X, Y = self.source, self.target
        comps = {n: Y.d(n - 1) @ self.at(n) + self.at(n + 1) @ X.d(n) for n in X.support if Y.rank(n)}
        return ChainMap(X, Y, comps, check=False)

    def verify(self, f: ChainMap, g: ChainMap | None = None) -> bool:
        if g is None:
            g = ChainMap.zero(f.source, f.target)
        if f.source != self.source or f.target != self.target:
            return False
        return (f - g) == self.boundary()

    def is_zero(self) -> bool:
        return all(M.is_zero() for M in self.h.values())

    def shifted(self, k: int) -> "HomotopyWitness":
        s = _sign(k)
        return HomotopyWitness(shift(self.source, k), shift(self.target, k),
                               {n - k: (M if s == 1 else -M) for n, M in self.h.items()})

    def __repr__(self):
        return f"HomotopyWitness({len(self.h)} components)"


class WeakHomotopyWitness:
    """Independent s, t with f - g = d_Y s + t d_X."""

    def __init__(self, source: Complex, target: Complex, s: Mapping[int, Matrix], t: Mapping[int, Matrix]):
        self.source = source
        self.target = target
        self.s = dict(s)
        self.t = dict(t)

    def _get(self, d, n):
        M = d.get(n)
        if M is None:
            return Matrix.zeros(self.source.ring, self.target.rank(n - 1), self.source.rank(n))
        return M

    def verify(self, f: ChainMap, g: ChainMap | None = None) -> bool:
        if g is None:
            g = ChainMap.zero(f.source, f.target)
        X, Y = self.source, self.target
        if f.source != X or f.target != Y:
            return False
        for n in X.support:
            if not Y.rank(n):
                continue
            rhs = Y.d(n - 1) @ self._get(self.s, n) + self._get(self.t, n + 1) @ X.d(n)
            if f[n] - g[n] != rhs:
                return False
        return True


def _homotopy_mask(X: Complex, Y: Complex, n: int, filtered: bool):
    if filtered and X.is_filtered and Y.is_filtered:
        return level_mask(X.level(n), Y.level(n - 1))
    return None


class MapSystem:
    """Joint linear system whose unknowns are chain maps and homotopies.

    Typical use::

        ms = MapSystem(ring)
        ms.chain_map("phi", Z, C)
        ms.homotopy("h1", Y, C)
        ms.equation(Y, C, [(1, None, "phi", v)], rhs=iota, homotopy="h1")
        sol = ms.solve()

    An equation ``(X, Y, terms, rhs, homotopy)`` asserts, degreewise,
    sum coeff * L∘[k]U∘R  - rhs = d h + h d.  Terms are tuples
    ``(coeff, L, name, R)`` or ``(coeff, L, name, R, k)``; L and R are known
    chain maps or None (identity).
    """

    def __init__(self, ring: Ring, filtered: bool = False):
        self.ring = ring
        self.filtered = filtered
        self.bs = BlockSystem(ring)
        self.maps: dict = {}
        self.homs: dict = {}

    def chain_map(self, name, X: Complex, Y: Complex, fixed_zero_degrees=()):
        """Register an unknown chain map X -> Y (chain condition included)."""
        self.maps[name] = (X, Y)
        for n in X.support:
            if Y.rank(n) and n not in fixed_zero_degrees:
                mask = None
                if self.filtered and X.is_filtered and Y.is_filtered:
                    mask = level_mask(X.level(n), Y.level(n))
                self.bs.unknown((name, n), Y.rank(n), X.rank(n), mask)
        for n in sorted(set(X.support) | {m - 1 for m in X.support}):
            if Y.rank(n + 1) and (X.rank(n) or X.rank(n + 1)):
                terms = []
                if X.rank(n) and Y.rank(n):
                    terms.append((1, Y.d(n), (name, n), None))
                if X.rank(n + 1) and X.rank(n):
                    terms.append((-1, None, (name, n + 1), X.d(n)))
                self.bs.add(terms, shape=(Y.rank(n + 1), X.rank(n)))
        return name

    def homotopy(self, name, X: Complex, Y: Complex):
        self.homs[name] = (X, Y)
        for n in X.support:
            if Y.rank(n - 1):
                self.bs.unknown((name, n), Y.rank(n - 1), X.rank(n), _homotopy_mask(X, Y, n, self.filtered))
        return name

    def equation(self, X: Complex, Y: Complex, terms, rhs: ChainMap | None = None, homotopy=None):
        for n in X.support:
            if not Y.rank(n):
                continue
            eq = []
            for t in terms:
                coeff, L, name, R = t[:4]
                k = t[4] if len(t) > 4 else 0
                key = (name, n + k)
                if not self.bs.has(key):
                    continue
                Lm = None if L is None else L[n]
                Rm = None if R is None else R[n]
                eq.append((coeff, Lm, key, Rm))
            if homotopy is not None:
                if self.bs.has((homotopy, n)):
                    eq.append((-1, Y.d(n - 1), (homotopy, n), None))
                if self.bs.has((homotopy, n + 1)):
                    eq.append((-1, None, (homotopy, n + 1), X.d(n)))
            rhs_m = rhs[n] if rhs is not None else Matrix.zeros(self.ring, Y.rank(n), X.rank(n))
            self.bs.add(eq, rhs_m, shape=(Y.rank(n), X.rank(n)))

    def _collect(self, raw: dict) -> dict:
        out = {}
        for name, (X, Y) in self.maps.items():
            comps = {n: raw[(name, n)] for n in X.support if (name, n) in raw}
            out[name] = ChainMap(X, Y, comps, check=False)
        for name, (X, Y) in self.homs.items():
            h = {n: raw[(name, n)] for n in X.support if (name, n) in raw}
            out[name] = HomotopyWitness(X, Y, h)
        return out

    def solve(self) -> dict | None:
        raw = self.bs.solve()
        if raw is None:
            return None
        return self._collect(raw)

    def homogeneous_generators(self) -> list[dict]:
        return [self._collect(g) for g in self.bs.homogeneous_generators()]


def homotopy_witness(f: ChainMap, g: ChainMap | None = None, filtered: bool = False) -> HomotopyWitness | None:
    """Find h with f - g = d h + h d (one global solve), or None."""
    if g is None:
        g = ChainMap.zero(f.source, f.target)
    if f.source != g.source or f.target != g.target:
        raise ValueError("homotopy_witness: maps do not share source and target")
    X, Y = f.source, f.target
    diff = f - g
    if diff.is_zero():
        return HomotopyWitness(X, Y, {})
    ms = MapSystem(f.ring, filtered=filtered)
    ms.homotopy("h", X, Y)
    ms.equation(X, Y, [], rhs=-diff, homotopy="h")
    sol = ms.solve()
    if sol is None:
        return None
    w = sol["h"]
    if not w.verify(f, g):
        raise VerificationError("solver returned an invalid homotopy")
    return w


def weak_homotopy_witness(f: ChainMap, g: ChainMap | None = None) -> WeakHomotopyWitness | None:
    """Find independent s, t with f - g = d s + t d, or None."""
    if g is None:
        g = ChainMap.zero(f.source, f.target)
    if f.source != g.source or f.target != g.target:
        raise ValueError("weak_homotopy_witness: maps do not share source and target")
    X, Y = f.source, f.target
    diff = f - g
    if diff.is_zero():
        return WeakHomotopyWitness(X, Y, {}, {})
    bs = BlockSystem(f.ring)
    for n in X.support:
        if Y.rank(n - 1):
            bs.unknown(("s", n), Y.rank(n - 1), X.rank(n))
            bs.unknown(("t", n), Y.rank(n - 1), X.rank(n))
    for n in X.support:
        if not Y.rank(n):
            continue
        terms = []
        if bs.has(("s", n)):
            terms.append((1, Y.d(n - 1), ("s", n), None))
        if bs.has(("t", n + 1)):
            terms.append((1, None, ("t", n + 1), X.d(n)))
        bs.add(terms, diff[n], shape=(Y.rank(n), X.rank(n)))
    raw = bs.solve()
    if raw is None:
        return None
    s = {k[1]: M for k, M in raw.items() if k[0] == "s"}
    t = {k[1]: M for k, M in raw.items() if k[0] == "t"}
    w = WeakHomotopyWitness(X, Y, s, t)
    if not w.verify(f, g):
        raise VerificationError("solver returned an invalid weak homotopy")
    return w


def homotopic(f: ChainMap, g: ChainMap | None = None) -> bool:
    return homotopy_witness(f, g) is not None


def is_contractible(X: Complex) -> HomotopyWitness | None:
    """Witness for id_X ≃ 0, or None."""
    return homotopy_witness(ChainMap.identity(X))


# ---------------------------------------------------------------------------
# cohomology over fields

class Cohomology:
    """Cohomology of a complex over a field with a chosen splitting.

    For each degree the module X^n is split as B + H + C (boundaries, a
    complement of B inside the cycles, and a complement of the cycles).
    ``proj[n]``: X^n -> H^n and ``section[n]``: H^n -> X^n satisfy
    proj·section = id, proj kills boundaries, and section lands in cycles.
    """

    def __init__(self, X: Complex):
        ring = X.ring
        if not ring.is_field:
            raise RingError("cohomology is only computed over fields")
        self.complex = X
        self.dims: dict = {}
        self.proj: dict = {}
        self.section: dict = {}
        self._hmat: dict = {}  # homotopy components
        Cmat = {}
        Bmat = {}
        degs = sorted(X.support)
        for n in degs:
            r = X.rank(n)
            Z = kernel_basis(X.d(n)) if X.rank(n + 1) else Matrix.identity(ring, r)
            C = extend_to_basis(Z)
            Cmat[n] = C
        for n in degs:
            r = X.rank(n)
            Z = kernel_basis(X.d(n)) if X.rank(n + 1) else Matrix.identity(ring, r)
            if X.rank(n - 1) and Cmat[n - 1].cols:
                B = X.d(n - 1) @ Cmat[n - 1]
            else:
                B = Matrix.zeros(ring, r, 0)
            # complete B to a basis of Z using columns of Z
            cur = B
            Hcols = []
            for j in range(Z.cols):
                z = Z.submatrix(range(r), [j])
                cand = Matrix.hstack(ring, r, [cur, z])
                if rank(cand) > cur.cols:
                    cur = cand
                    Hcols.append(z)
            H = Matrix.hstack(ring, r, Hcols) if Hcols else Matrix.zeros(ring, r, 0)
            C = Cmat[n]
            P = Matrix.hstack(ring, r, [B, H, C])
            Pinv = inverse(P)
            b, h = B.cols, H.cols
            self.dims[n] = h
            self.proj[n] = Pinv.submatrix(range(b, b + h), range(r))
            self.section[n] = H
            Bmat[n] = Pinv.submatrix(range(0, b), range(r))
            # homotopy component X^n -> X^(n-1): boundary coordinates back to C^(n-1)
            if X.rank(n - 1):
                Cprev = Cmat[n - 1]
                if b:
                    self._hmat[n] = Cprev @ Bmat[n]
                else:
                    self._hmat[n] = Matrix.zeros(ring, X.rank(n - 1), r)

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.dims.values())

    @property
    def support(self) -> tuple:
        return tuple(n for n, v in sorted(self.dims.items()) if v)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * v for n, v in self.dims.items())

    def model(self) -> Complex:
        """The complex with zero differential and terms H^n."""
        return Complex(self.complex.ring, {n: v for n, v in self.dims.items() if v}, {})

    def equivalence(self):
        """(H, p, i, h): p: X -> H, i: H -> X, p∘i = id_H, id_X - i∘p = d h + h d."""
        X = self.complex
        H = self.model()
        p = ChainMap(X, H, {n: self.proj[n] for n in H.support}, check=True)
        i = ChainMap(H, X, {n: self.section[n] for n in H.support}, check=True)
        hw = HomotopyWitness(X, X, self._hmat)
        if not hw.verify(ChainMap.identity(X), i @ p):
            raise VerificationError("cohomology splitting homotopy failed")
        return H, p, i, hw

    def induced(self, f: ChainMap, target: "Cohomology") -> dict:
        """Matrices of H^n(f) in the chosen bases."""
        out = {}
        for n in self.complex.support:
            if self.dim(n) and target.dim(n):
                out[n] = target.proj[n] @ f[n] @ self.section[n]
        return out


def cohomology(X: Complex) -> Cohomology:
    return Cohomology(X)


def cohomology_dims(X: Complex) -> dict:
    """dim H^n = (rank - rank d^n) - rank d^(n-1), computed from ranks only."""
    out = {}
    for n in X.support:
        r = X.rank(n)
        rk_out = rank(X.d(n)) if X.rank(n + 1) else 0
        rk_in = rank(X.d(n - 1)) if X.rank(n - 1) else 0
        out[n] = r - rk_out - rk_in
    return out


def is_quasi_isomorphism(f: ChainMap) -> bool:
    """Over a field: does f induce isomorphisms on all cohomology groups?"""
    if not f.ring.is_field:
        raise Undecided("quasi-isomorphism test needs a field")
    cx, cy = Cohomology(f.source), Cohomology(f.target)
    degs = set(cx.complex.support) | set(cy.complex.support)
    Hf = cx.induced(f, cy)
    for n in degs:
        a, b = cx.dim(n), cy.dim(n)
        if a != b:
            return False
        if a and rank(Hf[n]) != a:
            return False
    return True


def homotopy_inverse(f: ChainMap):
    """Over a field: a homotopy inverse g of f with witnesses, or None.

    Returns (g, w1, w2) where w1: g∘f ≃ id_X and w2: f∘g ≃ id_Y.
    """
    if not f.ring.is_field:
        raise Undecided("homotopy inverse via cohomology needs a field")
    cx, cy = Cohomology(f.source), Cohomology(f.target)
    HX, pX, iX, _ = cx.equivalence()
    HY, pY, iY, _ = cy.equivalence()
    Hf = cx.induced(f, cy)
    comps = {}
    for n in set(HX.support) | set(HY.support):
        if cx.dim(n) != cy.dim(n):
            return None
        if cx.dim(n):
            try:
                comps[n] = inverse(Hf[n])
            except RingError:
                return None
    Hinv = ChainMap(HY, HX, comps, check=False)
    g = iX @ Hinv @ pY
    w1 = homotopy_witness(g @ f, ChainMap.identity(f.source))
    w2 = homotopy_witness(f @ g, ChainMap.identity(f.target))
    if w1 is None or w2 is None:
        raise VerificationError("homotopy inverse failed to verify")
    return g, w1, w2


def find_homotopy_inverse(f: ChainMap):
    """Any ring: solve for g with g∘f ≃ id and f∘g ≃ id (linear in g once f is fixed)."""
    X, Y = f.source, f.target
    ms = MapSystem(f.ring)
    ms.chain_map("g", Y, X)
    ms.homotopy("h1", X, X)
    ms.homotopy("h2", Y, Y)
    ms.equation(X, X, [(1, None, "g", f)], rhs=ChainMap.identity(X), homotopy="h1")
    ms.equation(Y, Y, [(1, f, "g", None)], rhs=ChainMap.identity(Y), homotopy="h2")
    sol = ms.solve()
    if sol is None:
        return None
    g = sol["g"]
    g.check()
    return g, sol["h1"], sol["h2"]
