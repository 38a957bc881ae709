"""Seeded random complexes and maps for the verification suites."""
from __future__ import annotations

import random

from .complex_core import ChainMap, Complex, MapSystem
from .exact_linalg import Matrix, Ring, inverse, kernel_basis


def random_element(ring: Ring, rng: random.Random, bound: int = 3):
    if ring.is_finite:
        return rng.randrange(ring.size)
    return rng.randint(-bound, bound)


def random_matrix(ring: Ring, rows: int, cols: int, rng: random.Random, density: float = 1.0) -> Matrix:
    vals = [random_element(ring, rng) if rng.random() < density else 0 for _ in range(rows * cols)]
    return Matrix(ring, rows, cols, vals)


def _combine(ring: Ring, gens: Matrix, count: int, rng: random.Random) -> Matrix:
    """``count`` random combinations of the columns of gens, as a gens.rows x count matrix."""
    if gens.cols == 0:
        return Matrix.zeros(ring, gens.rows, count)
    coeffs = random_matrix(ring, gens.cols, count, rng)
    return gens @ coeffs


def random_complex(ring: Ring, rng: random.Random, lo: int = 0, hi: int = 2, max_rank: int = 2,
                   min_rank: int = 0, levels: tuple | None = None) -> Complex:
    """A random complex supported in [lo, hi] with d∘d = 0.

    With ``levels=(a, b)`` each generator gets a random level in [a, b] and
    the differential is level-respecting.
    """
    ranks = {n: rng.randint(min_rank, max_rank) for n in range(lo, hi + 1)}
    lv = None
    if levels is not None:
        lv = {n: tuple(sorted(rng.randint(*levels) for _ in range(r))) for n, r in ranks.items()}
    diffs = {}
    prev = None
    for n in range(lo, hi):
        r0, r1 = ranks[n], ranks[n + 1]
        if not r0 or not r1:
            prev = None
            continue
        # rows of d^n must kill the image of d^(n-1), and respect levels
        allowed = None
        if lv is not None:
            allowed = {(i, j) for i in range(r1) for j in range(r0) if lv[n + 1][i] >= lv[n][j]}
        rows = []
        left = kernel_basis(prev.transpose()) if prev is not None else Matrix.identity(ring, r0)
        for i in range(r1):
            if allowed is None:
                row = _combine(ring, left, 1, rng).transpose()
            else:
                # impose the level mask: solve for combinations vanishing off the mask
                free = [j for j in range(r0) if (i, j) in allowed]
                if not free:
                    rows.append([0] * r0)
                    continue
                forbidden = [j for j in range(r0) if (i, j) not in allowed]
                if forbidden:
                    sub = left.submatrix(forbidden, range(left.cols))
                    K = kernel_basis(sub)
                    gens = left @ K
                else:
                    gens = left
                row = _combine(ring, gens, 1, rng).transpose()
            rows.append(list(row.row(0)))
        diffs[n] = Matrix.from_rows(ring, rows, cols=r0)
        prev = diffs[n]
    return Complex(ring, ranks, diffs, lv)


def random_chain_map(X: Complex, Y: Complex, rng: random.Random, filtered: bool = False) -> ChainMap:
    """A random element of the module of chain maps X -> Y."""
    ms = MapSystem(X.ring, filtered=filtered)
    ms.chain_map("f", X, Y)
    gens = ms.homogeneous_generators()
    f = ChainMap.zero(X, Y)
    for g in gens:
        c = random_element(X.ring, rng)
        if c:
            f = f + g["f"].scale(c)
    f.check()
    return f


def random_filtered_automorphism(X: Complex, rng: random.Random) -> ChainMap:
    """A level-respecting chain isomorphism X -> X' with X' conjugated by it.

    Returns the map g: X -> X' where X' has differential g d g^{-1}; the
    new complex has the same levels.
    """
    ring = X.ring
    comps = {}
    for n in X.support:
        L = X.level(n) if X.is_filtered else (0,) * X.rank(n)
        r = X.rank(n)
        vals = []
        for i in range(r):
            for j in range(r):
                if i == j:
                    vals.append(1)
                elif (L[i], i) > (L[j], j) and rng.random() < 0.5:
                    vals.append(random_element(ring, rng))
                else:
                    vals.append(0)
        M = Matrix(ring, r, r, vals)
        # unitriangular in the (level, index) order, hence invertible
        comps[n] = M
    diffs = {n: comps[n + 1] @ X.d(n) @ inverse(comps[n]) for n in X.support if X.rank(n + 1)}
    X2 = Complex(ring, X.ranks, diffs, X.levels)
    return ChainMap(X, X2, comps)
