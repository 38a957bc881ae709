"""Independent reference computations used by the tests.

Nothing here calls into the solvers being tested: everything is brute
force over small finite rings, or a different algorithm altogether.
"""
import itertools
from fractions import Fraction
from math import gcd

from wkit.complex_core import Complex, direct_sum, shift


def all_vectors(n: int, mod: int):
    return itertools.product(range(mod), repeat=n)


def matvec(A, x, mod=None):
    out = [sum(a * b for a, b in zip(row, x)) for row in A]
    return [v % mod for v in out] if mod else out


def brute_solutions(A, b, mod):
    """All x over Z/mod with A x = b (A as nested lists)."""
    ncols = len(A[0]) if A else 0
    target = [v % mod for v in b]
    return [x for x in all_vectors(ncols, mod) if matvec(A, x, mod) == target]


def brute_kernel(A, mod, ncols):
    return [x for x in all_vectors(ncols, mod) if not any(matvec(A, x, mod))] if A else list(all_vectors(ncols, mod))


def span(gens, mod, n):
    """All Z/mod-combinations of the given vectors."""
    out = set()
    for coeffs in all_vectors(len(gens), mod):
        v = [0] * n
        for c, g in zip(coeffs, gens):
            v = [(a + c * x) % mod for a, x in zip(v, g)]
        out.add(tuple(v))
    if not gens:
        out.add(tuple([0] * n))
    return out


def _det(M):
    """Integer determinant by fraction-free expansion (Bareiss would do; size is tiny)."""
    n = len(M)
    if n == 0:
        return 1
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return int(det)


def determinantal_divisors(A):
    """d_k = gcd of all k x k minors; the invariant factors are d_k / d_{k-1}."""
    m = len(A)
    n = len(A[0]) if A else 0
    ds = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, _det([[A[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        ds.append(g)
    return [ds[i] // ds[i - 1] for i in range(1, len(ds))]


def rank_mod_p(A, p):
    """Rank over GF(p) by counting the image (brute force)."""
    ncols = len(A[0]) if A else 0
    img = {tuple(matvec(A, x, p)) for x in all_vectors(ncols, p)}
    r = 0
    while p ** r < len(img):
        r += 1
    return r


def brute_homotopy(f, g=None):
    """Enumerate all h over a finite ring with f - g = d h + h d; return the count.

    f, g: chain maps X -> Y.  Used only for tiny complexes.
    """
    X, Y = f.source, f.target
    ring = f.ring
    mod = ring.size
    degs = sorted(set(X.support) | {n + 1 for n in Y.support})
    shapes = [(n, Y.rank(n - 1), X.rank(n)) for n in degs if Y.rank(n - 1) and X.rank(n)]
    sizes = [r * c for _, r, c in shapes]
    total = sum(sizes)
    target = {}
    for n in X.support:
        if Y.rank(n):
            M = f[n] if g is None else f[n] - g[n]
            target[n] = M.to_lists()
    count = 0
    first = None
    for flat in all_vectors(total, mod):
        h = {}
        pos = 0
        for (n, r, c), s in zip(shapes, sizes):
            h[n] = [list(flat[pos + i * c: pos + (i + 1) * c]) for i in range(r)]
            pos += s
        ok = True
        for n in X.support:
            if not Y.rank(n):
                continue
            lhs = [[0] * X.rank(n) for _ in range(Y.rank(n))]
            if n in h and Y.rank(n - 1):
                D = Y.d(n - 1).to_lists()
                lhs = _add(lhs, _mul(D, h[n], mod), mod)
            if (n + 1) in h and X.rank(n + 1):
                D = X.d(n).to_lists()
                lhs = _add(lhs, _mul(h[n + 1], D, mod), mod)
            if lhs != [[x % mod for x in row] for row in target[n]]:
                ok = False
                break
        if ok:
            count += 1
            if first is None:
                first = h
    return count, first


def _mul(A, B, mod):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) % mod for j in range(len(B[0]))] for i in range(len(A))]


def _add(A, B, mod):
    return [[(a + b) % mod for a, b in zip(r, s)] for r, s in zip(A, B)]


def swindle_expansion(X: Complex, copies: int, direction: str = "down") -> Complex:
    """The finite sum X + [2]X + ... + [2 copies]X, materialized."""
    k = 2 if direction == "down" else -2
    return direct_sum(*[shift(X, k * n) for n in range(copies + 1)])


def cohomology_dims_mod_p(X: Complex, p: int) -> dict:
    """dim H^n = rank - rank d^n - rank d^(n-1), ranks by brute force."""
    out = {}
    for n in X.support:
        r_out = rank_mod_p(X.d(n).to_lists(), p) if X.rank(n + 1) else 0
        r_in = rank_mod_p(X.d(n - 1).to_lists(), p) if X.rank(n - 1) else 0
        h = X.rank(n) - r_out - r_in
        if h:
            out[n] = h
    return out
