"""Exact matrices over small commutative rings.

Supported rings are the prime fields GF(p), the rationals, the integers and
the residue rings Z/nZ.  Entries are always stored in canonical form (least
non-negative residues, or reduced fractions), so two matrices compare equal
exactly when they are equal as ring-valued arrays.

Every witness search in the package ends in :func:`solve_linear`, usually
through :class:`BlockSystem`, which assembles a linear system whose unknowns
are whole matrices.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class RingError(ValueError):
    """Raised on ring mismatches or operations a ring does not support."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Ring:
    """A small commutative ring: ``gf`` (prime field), ``q``, ``z`` or ``zmod``."""

    __slots__ = ("kind", "modulus")

    def __init__(self, kind: str, modulus: int | None = None):
        if kind == "gf":
            if modulus is None or not _is_prime(modulus):
                raise RingError(f"GF(p) needs a prime modulus, got {modulus}")
        elif kind == "zmod":
            if modulus is None or modulus < 2:
                raise RingError(f"Z/n needs n >= 2, got {modulus}")
        elif kind in ("q", "z"):
            modulus = None
        else:
            raise RingError(f"unknown ring kind {kind!r}")
        self.kind = kind
        self.modulus = modulus

    # constructors
    @classmethod
    def gf(cls, p: int) -> "Ring":
        return cls("gf", p)

    @classmethod
    def zmod(cls, n: int) -> "Ring":
        return cls("zmod", n)

    @classmethod
    def integers(cls) -> "Ring":
        return cls("z")

    @classmethod
    def rationals(cls) -> "Ring":
        return cls("q")

    def __eq__(self, other):
        return isinstance(other, Ring) and self.kind == other.kind and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.kind, self.modulus))

    def __repr__(self):
        return f"Ring({self.descriptor})"

    @property
    def descriptor(self) -> str:
        """Short textual name used in files and on the command line."""
        if self.kind == "gf":
            return f"gf{self.modulus}"
        if self.kind == "zmod":
            return f"z{self.modulus}"
        return self.kind

    @property
    def is_field(self) -> bool:
        return self.kind in ("gf", "q")

    @property
    def is_finite(self) -> bool:
        return self.kind in ("gf", "zmod")

    @property
    def size(self) -> int | None:
        return self.modulus if self.is_finite else None

    def elements(self) -> range:
        if not self.is_finite:
            raise RingError(f"{self.descriptor} is infinite")
        return range(self.modulus)

    # element arithmetic
    def norm(self, x):
        if self.kind == "q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if self.kind == "z":
                    raise RingError(f"{x} is not an integer")
                return (x.numerator * pow(x.denominator, -1, self.modulus)) % self.modulus
            x = x.numerator
        x = int(x)
        if self.modulus is not None:
            return x % self.modulus
        return x

    def inv(self, x):
        x = self.norm(x)
        if self.kind == "q":
            if x == 0:
                raise ZeroDivisionError("inverse of 0")
            return 1 / x
        if self.kind == "z":
            if x in (1, -1):
                return x
            raise RingError(f"{x} is not a unit in Z")
        if gcd(x, self.modulus) != 1:
            raise RingError(f"{x} is not a unit in {self.descriptor}")
        return pow(x, -1, self.modulus)

    def is_unit(self, x) -> bool:
        x = self.norm(x)
        if self.kind == "q":
            return x != 0
        if self.kind == "z":
            return x in (1, -1)
        return gcd(x, self.modulus) == 1

    def format(self, x) -> str:
        x = self.norm(x)
        if self.kind == "q":
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(x)

    def parse_element(self, s: str):
        s = s.strip()
        if "/" in s:
            return self.norm(Fraction(s))
        return self.norm(int(s))


_RING_PATTERNS = [
    (re.compile(r"^(?:gf|GF)\(?(\d+)\)?$"), lambda m: Ring.gf(int(m.group(1)))),
    (re.compile(r"^(?:z|Z|zmod|Z/)(\d+)(?:Z)?$"), lambda m: Ring.zmod(int(m.group(1)))),
    (re.compile(r"^(?:z|Z|ZZ|int|integers)$"), lambda m: Ring.integers()),
    (re.compile(r"^(?:q|Q|QQ|rationals)$"), lambda m: Ring.rationals()),
]


def parse_ring(text: str) -> Ring:
    """Parse ``gf2``, ``GF(3)``, ``z4``, ``Z/4``, ``z``, ``q`` and similar."""
    text = text.strip()
    for pat, make in _RING_PATTERNS:
        m = pat.match(text)
        if m:
            return make(m)
    raise RingError(f"cannot parse ring descriptor {text!r}")


class Matrix:
    """Immutable dense matrix; acts on column vectors."""

    __slots__ = ("ring", "rows", "cols", "entries", "_hash")

    def __init__(self, ring: Ring, rows: int, cols: int, entries: Iterable = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        if entries is None:
            ent = (ring.norm(0),) * (rows * cols)
        else:
            ent = tuple(ring.norm(e) for e in entries)
            if len(ent) != rows * cols:
                raise ValueError(f"expected {rows * cols} entries, got {len(ent)}")
        self.entries = ent
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, ring, rows, cols, entries):
        m = object.__new__(cls)
        m.ring = ring
        m.rows = rows
        m.cols = cols
        m.entries = tuple(entries)
        m._hash = None
        return m

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(ring, len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "Matrix":
        return cls._raw(ring, rows, cols, (ring.norm(0),) * (rows * cols))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        one, zero = ring.norm(1), ring.norm(0)
        return cls._raw(ring, n, n, (one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def scalar(cls, ring: Ring, n: int, c) -> "Matrix":
        c, zero = ring.norm(c), ring.norm(0)
        return cls._raw(ring, n, n, (c if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, ring: Ring, values: Sequence) -> "Matrix":
        return cls(ring, len(values), 1, values)

    @classmethod
    def diag(cls, ring: Ring, values: Sequence) -> "Matrix":
        n = len(values)
        m = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.from_rows(ring, m, n)

    # basic access
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_lists(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.rows, self.cols, self.entries))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(self.ring.format(e) for e in self.row(i)) for i in range(self.rows))
        return f"Matrix[{self.ring.descriptor} {self.rows}x{self.cols}]({body})"

    # arithmetic
    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if self.ring != other.ring:
            raise RingError(f"ring mismatch {self.ring.descriptor} vs {other.ring.descriptor}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        r = self.ring
        return Matrix._raw(r, self.rows, self.cols, (r.norm(a + b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        r = self.ring
        return Matrix._raw(r, self.rows, self.cols, (r.norm(a - b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        r = self.ring
        return Matrix._raw(r, self.rows, self.cols, (r.norm(-a) for a in self.entries))

    def scale(self, c) -> "Matrix":
        r = self.ring
        c = r.norm(c)
        return Matrix._raw(r, self.rows, self.cols, (r.norm(c * a) for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        r = self.ring
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [0] * (n * m)
        for i in range(n):
            base = i * k
            acc = [0] * m
            for t in range(k):
                x = a[base + t]
                if x:
                    off = t * m
                    for j in range(m):
                        y = b[off + j]
                        if y:
                            acc[j] += x * y
            out[i * m:(i + 1) * m] = acc
        return Matrix._raw(r, n, m, (r.norm(v) for v in out))

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.ring, self.cols, self.rows,
                           (self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.ring, len(rows), len(cols),
                           (self.entries[i * self.cols + j] for i in rows for j in cols))

    def lift(self, ring: Ring) -> "Matrix":
        """Reinterpret the entries in another ring (e.g. lift Z/n residues to Z)."""
        return Matrix(ring, self.rows, self.cols, self.entries)

    # block assembly
    @staticmethod
    def hstack(ring: Ring, rows: int, blocks: Sequence["Matrix"]) -> "Matrix":
        cols = sum(b.cols for b in blocks)
        out = []
        for i in range(rows):
            for b in blocks:
                if b.rows != rows:
                    raise ValueError("hstack row mismatch")
                out.extend(b.row(i))
        return Matrix._raw(ring, rows, cols, out)

    @staticmethod
    def vstack(ring: Ring, cols: int, blocks: Sequence["Matrix"]) -> "Matrix":
        out = []
        rows = 0
        for b in blocks:
            if b.cols != cols:
                raise ValueError("vstack column mismatch")
            out.extend(b.entries)
            rows += b.rows
        return Matrix._raw(ring, rows, cols, out)

    @staticmethod
    def block(ring: Ring, row_sizes: Sequence[int], col_sizes: Sequence[int], blocks) -> "Matrix":
        """Assemble from a grid; ``blocks[i][j]`` may be a Matrix, 0/None (zero) or 1 (identity)."""
        rows = []
        for i, rs in enumerate(row_sizes):
            parts = []
            for j, cs in enumerate(col_sizes):
                b = blocks[i][j]
                if b is None or (not isinstance(b, Matrix) and b == 0):
                    b = Matrix.zeros(ring, rs, cs)
                elif not isinstance(b, Matrix):
                    if rs != cs:
                        raise ValueError("scalar block must be square")
                    b = Matrix.scalar(ring, rs, b)
                if b.shape != (rs, cs):
                    raise ValueError(f"block ({i},{j}) has shape {b.shape}, expected {(rs, cs)}")
                parts.append(b)
            rows.append(Matrix.hstack(ring, rs, parts))
        return Matrix.vstack(ring, sum(col_sizes), rows)

    @staticmethod
    def block_diag(ring: Ring, blocks: Sequence["Matrix"]) -> "Matrix":
        rs = [b.rows for b in blocks]
        cs = [b.cols for b in blocks]
        grid = [[blocks[i] if i == j else None for j in range(len(blocks))] for i in range(len(blocks))]
        return Matrix.block(ring, rs, cs, grid)


# ---------------------------------------------------------------------------
# field elimination

def _rref(ring: Ring, rows: list[list], ncols: int):
    """In-place reduced row echelon form over a field.  Returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r >= nrows:
            break
        p = None
        for i in range(r, nrows):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = ring.inv(rows[r][c])
        if inv != 1:
            rows[r] = [ring.norm(inv * x) for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    rows[i] = [ring.norm(a - f * b) if b else a for a, b in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return pivots


def rank(A: Matrix) -> int:
    """Rank over a field."""
    if not A.ring.is_field:
        raise RingError("rank is only defined here over fields")
    rows = A.to_lists()
    return len(_rref(A.ring, rows, A.cols))


def inverse(A: Matrix) -> Matrix:
    """Inverse of a square matrix over a field (or unimodular over Z / Z/n)."""
    if A.rows != A.cols:
        raise ValueError("inverse of a non-square matrix")
    n = A.rows
    ring = A.ring
    if ring.is_field:
        rows = [list(A.row(i)) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
        rows = [[ring.norm(x) for x in r] for r in rows]
        piv = _rref(ring, rows, n)
        if piv != list(range(n)):
            raise RingError("matrix is singular")
        return Matrix.from_rows(ring, [r[n:] for r in rows], n)
    cols = []
    for j in range(n):
        e = Matrix.column(ring, [1 if i == j else 0 for i in range(n)])
        x = solve_linear(A, e)
        if x is None:
            raise RingError("matrix is not invertible")
        cols.append(x)
    return Matrix.hstack(ring, n, cols)


# ---------------------------------------------------------------------------
# Smith normal form

def _snf_lists(a: list[list[int]], m: int, n: int, mod: int | None):
    """Diagonalize ``a`` by unimodular row/column operations.

    Returns (D, U, V) as lists with U a V = D.  With ``mod`` set, every entry
    is reduced modulo ``mod`` after each step, which keeps numbers small and
    is harmless because all later use is modulo ``mod``.
    """
    def red(x):
        return x % mod if mod else x

    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    a = [[red(x) for x in row] for row in a]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [red(x + q * y) for x, y in zip(a[dst], a[src])]
        U[dst] = [red(x + q * y) for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in a:
            row[dst] = red(row[dst] + q * row[src])
        for row in V:
            row[dst] = red(row[dst] + q * row[src])

    t = 0
    while t < min(m, n):
        # pick the nonzero entry of least absolute value in the lower-right block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        changed = True
                        break
            if changed:
                continue
            # row and column are clear; enforce the divisibility chain
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return a, U, V


def smith_normal_form(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return (D, U, V) with U·A·V = D diagonal, d1 | d2 | ..., U and V unimodular."""
    if A.ring.kind != "z":
        raise RingError("smith_normal_form expects an integer matrix")
    D, U, V = _snf_lists(A.to_lists(), A.rows, A.cols, None)
    ring = A.ring
    return (Matrix.from_rows(ring, D, A.cols), Matrix.from_rows(ring, U, A.rows), Matrix.from_rows(ring, V, A.cols))


def _diag_mod(A: Matrix):
    """SNF-style diagonalization of a Z/n matrix, computed on integer lifts."""
    n = A.ring.modulus
    D, U, V = _snf_lists(A.to_lists(), A.rows, A.cols, n)
    return D, U, V


# ---------------------------------------------------------------------------
# solving

def _check_system(A: Matrix, b: Matrix):
    if A.ring != b.ring:
        raise RingError("ring mismatch between A and b")
    if b.cols != 1 or b.rows != A.rows:
        raise ValueError(f"b must be a column with {A.rows} rows, got shape {b.shape}")


def _matvec(M: list[list[int]], v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in M]


def solve_linear(A: Matrix, b: Matrix) -> Matrix | None:
    """Return some column x with A·x = b, or None if there is none."""
    _check_system(A, b)
    ring = A.ring
    m, n = A.rows, A.cols
    if ring.is_field:
        rows = [list(A.row(i)) + [b.entries[i]] for i in range(m)]
        piv = _rref(ring, rows, n + 1)
        if piv and piv[-1] == n:
            return None
        x = [ring.norm(0)] * n
        for r, c in enumerate(piv):
            x[c] = rows[r][n]
        return Matrix.column(ring, x)
    if ring.kind == "z":
        D, U, V = _snf_lists(A.to_lists(), m, n, None)
        c = _matvec(U, list(b.entries))
        y = [0] * n
        for i in range(m):
            d = D[i][i] if i < n else 0
            if d == 0:
                if c[i] != 0:
                    return None
            else:
                if c[i] % d:
                    return None
                y[i] = c[i] // d
        return Matrix.column(ring, _matvec(V, y))
    # Z/n via the integer diagonalization
    mod = ring.modulus
    D, U, V = _diag_mod(A)
    c = [x % mod for x in _matvec(U, list(b.entries))]
    y = [0] * n
    for i in range(m):
        d = D[i][i] % mod if i < n else 0
        g = gcd(d, mod)  # gcd(0, n) = n
        if c[i] % g:
            return None
        if d:
            nn = mod // g
            y[i] = ((c[i] // g) * pow(d // g, -1, nn)) % nn if nn > 1 else 0
    return Matrix.column(ring, [v % mod for v in _matvec(V, y)])


def kernel_basis(A: Matrix) -> Matrix:
    """Columns generating {x : A·x = 0}; a basis over fields and over Z."""
    ring = A.ring
    m, n = A.rows, A.cols
    gens: list[list] = []
    if ring.is_field:
        rows = A.to_lists()
        piv = _rref(ring, rows, n)
        free = [c for c in range(n) if c not in piv]
        for f in free:
            v = [0] * n
            v[f] = 1
            for r, c in enumerate(piv):
                v[c] = ring.norm(-rows[r][f])
            gens.append(v)
    elif ring.kind == "z":
        D, U, V = _snf_lists(A.to_lists(), m, n, None)
        for j in range(n):
            if j >= m or D[j][j] == 0:
                gens.append([V[i][j] for i in range(n)])
    else:
        mod = ring.modulus
        D, U, V = _diag_mod(A)
        for j in range(n):
            d = D[j][j] % mod if j < m else 0
            g = gcd(d, mod)
            if g == 1:
                continue
            k = mod // g if d else 1
            v = [(k * V[i][j]) % mod for i in range(n)]
            if any(v):
                gens.append(v)
    if not gens:
        return Matrix.zeros(ring, n, 0)
    return Matrix.hstack(ring, n, [Matrix.column(ring, g) for g in gens])


def image_basis(A: Matrix) -> Matrix:
    """Over a field: columns forming a basis of the column space of A."""
    if not A.ring.is_field:
        raise RingError("image_basis needs a field")
    rows = A.to_lists()
    piv = _rref(A.ring, rows, A.cols)
    if not piv:
        return Matrix.zeros(A.ring, A.rows, 0)
    return A.submatrix(range(A.rows), piv)


def extend_to_basis(B: Matrix) -> Matrix:
    """Over a field: columns completing the independent columns of B to a basis."""
    ring = B.ring
    n = B.rows
    cur = B
    extra = []
    for j in range(n):
        e = Matrix.column(ring, [1 if i == j else 0 for i in range(n)])
        cand = Matrix.hstack(ring, n, [cur, e])
        if rank(cand) > cur.cols:
            cur = cand
            extra.append(e)
    if not extra:
        return Matrix.zeros(ring, n, 0)
    return Matrix.hstack(ring, n, extra)


# ---------------------------------------------------------------------------
# systems with matrix-valued unknowns

class BlockSystem:
    """Linear equations of the form  sum_k L_k · X_k · R_k = C.

    Unknowns are matrices registered with :meth:`unknown`; an optional mask
    (set of allowed (i, j) positions) restricts which entries may be nonzero,
    which is how level-respecting (filtered) unknowns are expressed.
    ``L`` or ``R`` may be ``None`` to mean the identity.
    """

    def __init__(self, ring: Ring):
        self.ring = ring
        self._unknowns: dict = {}
        self._order: list = []
        self._nvars = 0
        self._eqs: list = []  # (dict var -> coeff, rhs)

    def unknown(self, key, rows: int, cols: int, mask=None):
        if key in self._unknowns:
            raise KeyError(f"duplicate unknown {key!r}")
        idx = {}
        for i in range(rows):
            for j in range(cols):
                if mask is None or (i, j) in mask:
                    idx[(i, j)] = self._nvars
                    self._nvars += 1
        self._unknowns[key] = (rows, cols, idx)
        self._order.append(key)
        return key

    def has(self, key) -> bool:
        return key in self._unknowns

    def shape(self, key):
        r, c, _ = self._unknowns[key]
        return r, c

    @property
    def nvars(self) -> int:
        return self._nvars

    def add(self, terms, rhs: Matrix | None = None, shape=None):
        """Add the matrix equation sum(L @ X[key] @ R) = rhs.

        ``terms`` is a list of (coeff, L, key, R) or (L, key, R) tuples.
        """
        ring = self.ring
        norm = ring.norm
        eqs: dict = {}
        nr = nc = None
        for t in terms:
            if len(t) == 3:
                coeff, (L, key, R) = 1, t
            else:
                coeff, L, key, R = t
            coeff = norm(coeff)
            if coeff == 0 or key not in self._unknowns:
                # unknowns never registered are identically zero
                continue
            xr, xc, idx = self._unknowns[key]
            er = L.rows if L is not None else xr
            ec = R.cols if R is not None else xc
            if L is not None and L.cols != xr:
                raise ValueError(f"left factor shape {L.shape} vs unknown {key!r} {xr}x{xc}")
            if R is not None and R.rows != xc:
                raise ValueError(f"right factor shape {R.shape} vs unknown {key!r} {xr}x{xc}")
            if nr is None:
                nr, nc = er, ec
            elif (nr, nc) != (er, ec):
                raise ValueError("inconsistent equation shapes")
            Lnz = ([(i, i, 1) for i in range(xr)] if L is None else
                   [(i, a, L.entries[i * L.cols + a]) for i in range(L.rows) for a in range(L.cols)
                    if L.entries[i * L.cols + a]])
            Rnz = ([(j, j, 1) for j in range(xc)] if R is None else
                   [(bb, j, R.entries[bb * R.cols + j]) for bb in range(R.rows) for j in range(R.cols)
                    if R.entries[bb * R.cols + j]])
            for i, a, lv in Lnz:
                for bb, j, rv in Rnz:
                    v = idx.get((a, bb))
                    if v is None:
                        continue
                    row = eqs.setdefault((i, j), {})
                    row[v] = row.get(v, 0) + coeff * lv * rv
        if nr is None:
            if shape is None and rhs is None:
                return
            nr, nc = shape if shape is not None else rhs.shape
        if rhs is None:
            rhs = Matrix.zeros(ring, nr, nc)
        if rhs.shape != (nr, nc):
            raise ValueError(f"rhs shape {rhs.shape} vs equation shape {(nr, nc)}")
        for i in range(nr):
            for j in range(nc):
                row = eqs.get((i, j), {})
                row = {k: norm(v) for k, v in row.items() if norm(v)}
                self._eqs.append((row, rhs.entries[i * nc + j]))

    def _matrix(self):
        ring = self.ring
        m = len(self._eqs)
        rows = []
        rhs = []
        for row, c in self._eqs:
            r = [0] * self._nvars
            for k, v in row.items():
                r[k] = v
            rows.append(r)
            rhs.append(c)
        A = Matrix(ring, m, self._nvars, [x for r in rows for x in r])
        b = Matrix(ring, m, 1, rhs)
        return A, b

    def _unpack(self, x: Sequence) -> dict:
        out = {}
        for key in self._order:
            r, c, idx = self._unknowns[key]
            vals = [0] * (r * c)
            for (i, j), v in idx.items():
                vals[i * c + j] = x[v]
            out[key] = Matrix(self.ring, r, c, vals)
        return out

    def solve(self) -> dict | None:
        """A solution as {key: Matrix}, or None if the system is inconsistent."""
        A, b = self._matrix()
        if self._nvars == 0:
            return {} if b.is_zero() else None
        x = solve_linear(A, b)
        if x is None:
            return None
        return self._unpack(x.entries)

    def homogeneous_generators(self) -> list[dict]:
        """Generators of the solution module of the homogeneous system."""
        A, _ = self._matrix()
        if self._nvars == 0:
            return []
        K = kernel_basis(A)
        return [self._unpack(K.col(j)) for j in range(K.cols)]
