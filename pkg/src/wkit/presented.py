"""Complexes of finitely presented modules.

A module is R^g modulo the column span of a relation matrix (g x r).  Maps
are matrices on generators, compared modulo the target relations.  This
small layer is only what the torsion-pair truncations need: kernels over
Z/n and cokernels are in general not free, so they cannot live in
:class:`~wkit.complex_core.Complex`.
"""
from __future__ import annotations

from typing import Mapping

from .complex_core import Complex, VerificationError
from .exact_linalg import BlockSystem, Matrix, Ring, solve_linear


def _in_span(rel: Matrix, M: Matrix) -> bool:
    """Every column of M lies in the span of the columns of rel."""
    if M.is_zero():
        return True
    if rel.cols == 0:
        return False
    return solve_linear_cols(rel, M) is not None


def solve_linear_cols(A: Matrix, B: Matrix):
    cols = []
    for j in range(B.cols):
        x = solve_linear(A, B.submatrix(range(B.rows), [j]))
        if x is None:
            return None
        cols.append(x)
    return Matrix.hstack(A.ring, A.cols, cols)


class PComplex:
    """Complex of presented modules: gens[n], rels[n] (gens x r), diffs[n]."""

    def __init__(self, ring: Ring, gens: Mapping[int, int], rels: Mapping[int, Matrix] | None = None,
                 diffs: Mapping[int, Matrix] | None = None, check: bool = True):
        self.ring = ring
        self.gens = {n: g for n, g in sorted(gens.items()) if g > 0}
        rels = rels or {}
        self.rels = {n: rels.get(n, Matrix.zeros(ring, g, 0)) for n, g in self.gens.items()}
        diffs = diffs or {}
        self.diffs = {}
        for n in self.gens:
            if n + 1 in self.gens:
                self.diffs[n] = diffs.get(n, Matrix.zeros(ring, self.gens[n + 1], self.gens[n]))
        if check:
            self.check()

    @classmethod
    def from_complex(cls, X: Complex) -> "PComplex":
        return cls(X.ring, X.ranks, {}, X.diffs, check=False)

    def ngens(self, n: int) -> int:
        return self.gens.get(n, 0)

    def rel(self, n: int) -> Matrix:
        return self.rels.get(n, Matrix.zeros(self.ring, self.ngens(n), 0))

    def d(self, n: int) -> Matrix:
        D = self.diffs.get(n)
        if D is None:
            return Matrix.zeros(self.ring, self.ngens(n + 1), self.ngens(n))
        return D

    @property
    def support(self):
        return tuple(self.gens)

    def is_free(self) -> bool:
        return all(R.is_zero() for R in self.rels.values())

    def to_complex(self) -> Complex:
        if not self.is_free():
            raise ValueError("complex has non-free terms")
        return Complex(self.ring, self.gens, self.diffs)

    def check(self):
        for n, D in self.diffs.items():
            if not _in_span(self.rel(n + 1), D @ self.rel(n)):
                raise VerificationError(f"differential in degree {n} is not well defined on the quotient")
            if n + 1 in self.diffs and not _in_span(self.rel(n + 2), self.diffs[n + 1] @ D):
                raise VerificationError(f"d∘d != 0 in degree {n}")

    def shift(self, k: int) -> "PComplex":
        s = -1 if k % 2 else 1
        return PComplex(self.ring, {n - k: g for n, g in self.gens.items()},
                        {n - k: R for n, R in self.rels.items()},
                        {n - k: D.scale(s) for n, D in self.diffs.items()}, check=False)

    def __eq__(self, other):
        return (isinstance(other, PComplex) and self.ring == other.ring and self.gens == other.gens
                and self.rels == other.rels and self.diffs == other.diffs)

    def __repr__(self):
        parts = [f"{n}:{g}/{self.rels[n].cols}" for n, g in self.gens.items()]
        return f"PComplex[{self.ring.descriptor}]({' '.join(parts) or '0'})"


class PMap:
    def __init__(self, source: PComplex, target: PComplex, comps: Mapping[int, Matrix] | None = None,
                 check: bool = True):
        self.source = source
        self.target = target
        comps = comps or {}
        self.comps = {n: comps.get(n, Matrix.zeros(source.ring, target.ngens(n), source.ngens(n)))
                      for n in source.support if target.ngens(n)}
        if check:
            self.check()

    def __getitem__(self, n):
        M = self.comps.get(n)
        if M is None:
            return Matrix.zeros(self.source.ring, self.target.ngens(n), self.source.ngens(n))
        return M

    def check(self):
        X, Y = self.source, self.target
        for n in X.support:
            if not _in_span(Y.rel(n), self[n] @ X.rel(n)):
                raise VerificationError(f"component {n} is not well defined")
        for n in set(X.support) | set(Y.support):
            if not _in_span(Y.rel(n + 1), Y.d(n) @ self[n] - self[n + 1] @ X.d(n)):
                raise VerificationError(f"chain map condition fails in degree {n}")

    def __matmul__(self, other: "PMap") -> "PMap":
        return PMap(other.source, self.target,
                    {n: self[n] @ other[n] for n in other.source.support if self.target.ngens(n)}, check=False)

    def __sub__(self, other: "PMap") -> "PMap":
        return PMap(self.source, self.target, {n: self[n] - other[n] for n in self.comps}, check=False)

    def __neg__(self):
        return PMap(self.source, self.target, {n: -M for n, M in self.comps.items()}, check=False)

    @classmethod
    def identity(cls, X: PComplex) -> "PMap":
        return cls(X, X, {n: Matrix.identity(X.ring, g) for n, g in X.gens.items()}, check=False)

    def shift(self, k: int) -> "PMap":
        return PMap(self.source.shift(k), self.target.shift(k), {n - k: M for n, M in self.comps.items()},
                    check=False)


def pcone(m: PMap):
    """Cone(m) = N + [1]M with differential [[d_N, m], [0, -d_M]], plus iota and pi."""
    M, N = m.source, m.target
    ring = M.ring
    degs = sorted(set(N.support) | {n - 1 for n in M.support})
    gens = {p: N.ngens(p) + M.ngens(p + 1) for p in degs}
    rels = {p: Matrix.block_diag(ring, [N.rel(p), M.rel(p + 1)]) for p in degs}
    diffs = {p: Matrix.block(ring, [N.ngens(p + 1), M.ngens(p + 2)], [N.ngens(p), M.ngens(p + 1)],
                             [[N.d(p), m[p + 1]], [None, -M.d(p + 1)]]) for p in degs}
    C = PComplex(ring, gens, rels, diffs, check=False)
    iota = {p: Matrix.vstack(ring, N.ngens(p), [Matrix.identity(ring, N.ngens(p)),
                                                Matrix.zeros(ring, M.ngens(p + 1), N.ngens(p))]) for p in degs}
    pi = {p: Matrix.hstack(ring, M.ngens(p + 1), [Matrix.zeros(ring, M.ngens(p + 1), N.ngens(p)),
                                                  Matrix.identity(ring, M.ngens(p + 1))]) for p in degs}
    return C, PMap(N, C, iota, check=False), PMap(C, M.shift(1), pi, check=False)


class PHomotopy:
    """h with f - g = d h + h d + rel_Y T (the T part records relation slack)."""

    def __init__(self, source: PComplex, target: PComplex, h: dict, slack: dict):
        self.source, self.target, self.h, self.slack = source, target, h, slack

    def at(self, n):
        return self.h.get(n, Matrix.zeros(self.source.ring, self.target.ngens(n - 1), self.source.ngens(n)))

    def verify(self, f: PMap, g: PMap) -> bool:
        X, Y = self.source, self.target
        for n in X.support:
            if not Y.ngens(n):
                continue
            lhs = f[n] - g[n] - Y.d(n - 1) @ self.at(n) - self.at(n + 1) @ X.d(n)
            T = self.slack.get(n)
            if T is not None:
                lhs = lhs - Y.rel(n) @ T
            if not lhs.is_zero():
                return False
        return True


def phomotopy_witness(f: PMap, g: PMap) -> PHomotopy | None:
    X, Y = f.source, f.target
    bs = BlockSystem(f.source.ring)
    for n in X.support:
        if Y.ngens(n - 1):
            bs.unknown(("h", n), Y.ngens(n - 1), X.ngens(n))
        if Y.ngens(n) and Y.rel(n).cols:
            bs.unknown(("T", n), Y.rel(n).cols, X.ngens(n))
    for n in X.support:
        if not Y.ngens(n):
            continue
        terms = [(1, Y.d(n - 1), ("h", n), None), (1, None, ("h", n + 1), X.d(n)), (1, Y.rel(n), ("T", n), None)]
        terms = [t for t in terms if bs.has(t[2])]
        bs.add(terms, f[n] - g[n], shape=(Y.ngens(n), X.ngens(n)))
    raw = bs.solve()
    if raw is None:
        return None
    w = PHomotopy(X, Y, {k[1]: M for k, M in raw.items() if k[0] == "h"},
                  {k[1]: M for k, M in raw.items() if k[0] == "T"})
    if not w.verify(f, g):
        raise VerificationError("presented homotopy failed to verify")
    return w


class PTriangleCertificate:
    """Explicit comparison of X -u-> A -v-> Y -w-> [1]X with the cone of u."""

    def __init__(self, u: PMap, v: PMap, w: PMap, phi: PMap, psi: PMap):
        self.u, self.v, self.w, self.phi, self.psi = u, v, w, phi, psi
        C, iota, pi = pcone(u)
        self.witnesses = {
            "phi_v": phomotopy_witness(phi @ v, iota),
            "pi_phi": phomotopy_witness(pi @ phi, w),
            "psi_phi": phomotopy_witness(psi @ phi, PMap.identity(v.target)),
            "phi_psi": phomotopy_witness(phi @ psi, PMap.identity(C)),
        }

    def verify(self) -> bool:
        return all(x is not None for x in self.witnesses.values())
