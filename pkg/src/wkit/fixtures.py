"""Named inputs used by the CLI and the acceptance tests."""
from __future__ import annotations

from .complex_core import ChainMap, Complex
from .exact_linalg import Matrix, Ring
from .fcat_verify import THETA_PATTERN


def torsion_lifts() -> dict:
    """X = (Z/4 -2-> Z/4) in degrees 0, 1 with the zero endomorphism, cut at n = 0."""
    R = Ring.zmod(4)
    X = Complex.from_diffs(R, 0, [[[2]]])
    return {"X": X, "f": ChainMap.zero(X, X), "n": 0}


def rank_one_projector(ring: Ring | None = None) -> dict:
    """e = diag(1, 0) on the stalk k^2 in degree 0."""
    k = ring or Ring.gf(2)
    X = Complex.stalk(k, 2, 0)
    e = ChainMap(X, X, {0: Matrix.diag(k, [1, 0])})
    return {"X": X, "e": e}


def level_square(ring: Ring | None = None) -> dict:
    """A small level-respecting map for the 3x3 construction, and the sign
    pattern of the comparison map from the cone of psi."""
    k = ring or Ring.gf(2)
    # X: levels 0 and 1 in degree 0, mapping to level 1 in degree 1
    X = Complex(k, {0: 2, 1: 1}, {0: Matrix.from_rows(k, [[0, 1]])}, levels={0: (0, 1), 1: (1,)})
    Y = Complex(k, {0: 1, 1: 1}, {0: Matrix.from_rows(k, [[1]])}, levels={0: (1,), 1: (1,)})
    f = ChainMap(X, Y, {0: Matrix.from_rows(k, [[0, 1]]), 1: Matrix.from_rows(k, [[1]])})
    return {"f": f, "n": 1, "pattern": THETA_PATTERN}


FIXTURES = {
    "torsion-lifts": torsion_lifts,
    "rank-one-projector": rank_one_projector,
    "level-square": level_square,
}


def get(name: str, **kw) -> dict:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}")
    return FIXTURES[name](**kw)
