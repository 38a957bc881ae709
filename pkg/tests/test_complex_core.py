import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_homotopy, cohomology_dims_mod_p
from wkit.complex_core import (
    ChainMap,
    Complex,
    VerificationError,
    cohomology,
    cohomology_dims,
    cone,
    direct_sum,
    homotopic,
    homotopy_inverse,
    homotopy_witness,
    is_contractible,
    is_quasi_isomorphism,
    shift,
    shift_map,
    weak_homotopy_witness,
)
from wkit.exact_linalg import Matrix, Ring
from wkit.sampling import random_chain_map, random_complex

GF2, GF3, Z4 = Ring.gf(2), Ring.gf(3), Ring.zmod(4)


def two_term(ring, a):
    return Complex.from_diffs(ring, 0, [[[a]]])


def test_rejects_non_complex():
    k = GF2
    with pytest.raises(VerificationError):
        Complex(k, {0: 1, 1: 1, 2: 1}, {0: Matrix.from_rows(k, [[1]]), 1: Matrix.from_rows(k, [[1]])})


def test_shift_sign_and_degrees():
    X = Complex.from_diffs(GF3, 0, [[[1]]])
    Y = shift(X, 1)
    assert list(Y.support) == [-1, 0]
    assert Y.d(-1) == Matrix.from_rows(GF3, [[-1]])
    assert shift(X, 2).d(-2) == X.d(0)
    assert shift(shift(X, 1), -1) == X


def test_cone_block_layout():
    k = GF3
    M = two_term(k, 1)
    N = two_term(k, 2)
    m = ChainMap(M, N, {0: Matrix.from_rows(k, [[1]]), 1: Matrix.from_rows(k, [[2]])})
    C, iota, pi = cone(m)
    # degree 0 of the cone is N^0 + M^1; d = [[d_N, m], [0, -d_M]]
    assert C.rank(0) == 2
    assert C.rank(1) == 1
    assert C.d(0) == Matrix.from_rows(k, [[2, 2]])
    assert C.d(-1) == Matrix.from_rows(k, [[1], [-1]])
    iota.check()
    pi.check()
    assert (pi @ iota).is_zero()


def test_cone_of_identity_is_contractible():
    rng = random.Random(1)
    for ring in (GF2, Z4):
        X = random_complex(ring, rng, 0, 2, 2, min_rank=1)
        C, _, _ = cone(ChainMap.identity(X))
        assert is_contractible(C)


def test_homotopy_witness_replays():
    rng = random.Random(4)
    for ring in (GF2, GF3, Z4, Ring.integers()):
        for _ in range(10):
            X = random_complex(ring, rng, 0, 2, 2)
            Y = random_complex(ring, rng, 0, 2, 2)
            f = random_chain_map(X, Y, rng)
            h = homotopy_witness(f)
            if h is not None:
                assert h.verify(f)
            w = weak_homotopy_witness(f)
            if h is not None:
                assert w is not None
            if w is not None:
                assert w.verify(f)


@pytest.mark.parametrize("ring", [GF2, Z4], ids=["gf2", "z4"])
def test_homotopy_search_matches_enumeration(ring):
    rng = random.Random(9)
    checked = 0
    for _ in range(40):
        X = random_complex(ring, rng, 0, 1, 2)
        Y = random_complex(ring, rng, 0, 1, 2)
        if X.total_rank + Y.total_rank > 5:
            continue
        f = random_chain_map(X, Y, rng)
        count, _ = brute_homotopy(f)
        assert (homotopy_witness(f) is not None) == (count > 0)
        checked += 1
    assert checked >= 10


def test_torsion_two_term_complex():
    # on Z/4 -2-> Z/4 multiplication by 2 is d h + h d with h = 1, the
    # identity is not (it would need 1 = 2h)
    X = two_term(Z4, 2)
    two = ChainMap(X, X, {0: Matrix.from_rows(Z4, [[2]]), 1: Matrix.from_rows(Z4, [[2]])})
    h = homotopy_witness(two)
    assert h is not None and h.verify(two)
    assert brute_homotopy(two)[0] == 2
    idX = ChainMap.identity(X)
    assert homotopy_witness(idX) is None
    assert weak_homotopy_witness(idX) is None
    assert brute_homotopy(idX)[0] == 0


def test_cohomology_matches_brute_ranks():
    rng = random.Random(3)
    for p in (2, 3):
        ring = Ring.gf(p)
        for _ in range(20):
            X = random_complex(ring, rng, -1, 1, 3)
            dims = {n: d for n, d in dict(cohomology_dims(X)).items() if d}
            assert dims == cohomology_dims_mod_p(X, p)


def test_cohomology_equivalence_and_inverse():
    rng = random.Random(8)
    for _ in range(10):
        X = random_complex(GF3, rng, 0, 2, 2)
        H, p, i, _ = cohomology(X).equivalence()
        assert homotopic(p @ i, ChainMap.identity(H))
        assert homotopic(i @ p, ChainMap.identity(X))
        assert is_quasi_isomorphism(p)
        g, w1, w2 = homotopy_inverse(i)
        assert w1.verify(g @ i, ChainMap.identity(H))
        assert w2.verify(i @ g, ChainMap.identity(X))


def test_direct_sum_ranks():
    X = two_term(GF2, 1)
    S = direct_sum(X, shift(X, 1))
    assert S.rank(0) == 2 and S.rank(-1) == 1 and S.rank(1) == 1


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([GF2, GF3, Z4]), st.integers(0, 10 ** 6), st.integers(-3, 3))
def test_cone_is_a_complex_and_shift_commutes(ring, seed, k):
    rng = random.Random(seed)
    X = random_complex(ring, rng, 0, 2, 2)
    Y = random_complex(ring, rng, 0, 2, 2)
    f = random_chain_map(X, Y, rng)
    C, iota, pi = cone(f)
    C.check()
    iota.check()
    pi.check()
    shift(C, k).check()
    shift_map(f, k).check()
    assert shift(shift(X, k), -k) == X


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([GF2, GF3, Z4]), st.integers(0, 10 ** 6))
def test_null_homotopic_maps_are_found(ring, seed):
    # d h + h d is always null-homotopic; the solver must find a witness
    rng = random.Random(seed)
    X = random_complex(ring, rng, 0, 2, 2)
    Y = random_complex(ring, rng, 0, 2, 2)
    comps = {}
    h = {n: Matrix(ring, Y.rank(n - 1), X.rank(n), [rng.randrange(ring.size) for _ in range(Y.rank(n - 1) * X.rank(n))])
         for n in range(0, 4)}
    for n in X.support:
        M = Matrix.zeros(ring, Y.rank(n), X.rank(n))
        if Y.rank(n - 1):
            M = M + Y.d(n - 1) @ h[n]
        if X.rank(n + 1):
            M = M + h[n + 1] @ X.d(n)
        comps[n] = M
    f = ChainMap(X, Y, comps)
    w = homotopy_witness(f)
    assert w is not None and w.verify(f)
