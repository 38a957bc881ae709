import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cohomology_dims_mod_p
from wkit.complex_core import ChainMap, Complex
from wkit.exact_linalg import Matrix, Ring
from wkit.sampling import random_complex
from wkit.weights import (
    WeightWindow,
    membership,
    restrict,
    retract_witness,
    stupid_truncate,
    torsion_truncate,
    ws_axiom_suite,
)

GF2, GF3, Z4, Z = Ring.gf(2), Ring.gf(3), Ring.zmod(4), Ring.integers()


def test_window_parsing():
    assert WeightWindow.parse("1:3") == WeightWindow(1, 3)
    assert WeightWindow.parse(":0") == WeightWindow(None, 0)
    assert WeightWindow.parse("-inf:2") == WeightWindow(None, 2)
    assert WeightWindow.parse("2:1").is_empty
    with pytest.raises(ValueError):
        WeightWindow.parse("3")
    W = WeightWindow(None, 0)
    assert W.contains(-100) and W.contains(0) and not W.contains(1)


def test_stupid_truncation_pieces():
    X = Complex.from_diffs(GF3, -1, [[[1]], [[0]]])
    D = stupid_truncate(X, 0)
    assert list(D.wge.support) == [1]
    assert list(D.wle.support) == [-1, 0]
    assert D.verify()
    # connecting map is -d^0
    assert D.v[0] == -X.d(0)


def test_contractible_complex_is_in_every_window():
    X = Complex.from_diffs(Z4, 3, [[[1]]])
    m = membership(X, WeightWindow(5, 4))
    assert m.answer == "yes"
    assert m.witnesses["id_zero"].verify(ChainMap.identity(X))


def test_membership_over_non_field_can_be_undecided():
    X = Complex.from_diffs(Z4, 0, [[[2]]])
    assert membership(X, WeightWindow(None, 0)).answer == "undecided"
    assert membership(X, WeightWindow(0, 1)).answer == "yes"


@pytest.mark.parametrize("p", [2, 3])
def test_membership_matches_cohomology_oracle(p):
    rng = random.Random(p * 10)
    ring = Ring.gf(p)
    for _ in range(30):
        X = random_complex(ring, rng, -1, 2, 2)
        a, b = sorted((rng.randint(-2, 3), rng.randint(-2, 3)))
        W = WeightWindow(a, b)
        expect = all(W.contains(n) for n in cohomology_dims_mod_p(X, p))
        m = membership(X, W)
        assert (m.answer == "yes") == expect
        if m.answer == "yes" and "id_ip" in m.witnesses:
            assert m.witnesses["id_ip"].verify(ChainMap.identity(X), m.from_model @ m.to_model)


def test_retract_of_strict_truncation():
    rng = random.Random(1)
    for _ in range(10):
        X = random_complex(GF2, rng, 0, 3, 2)
        r = retract_witness(X, X.lo if not X.is_zero() else 0, X.hi if not X.is_zero() else 0)
        assert r.verify()


def test_torsion_truncation_presents_the_cokernel():
    A = Complex.from_diffs(Z, 0, [[[2]]])
    t = torsion_truncate(A, 1, "cokernel")
    assert t.c == 2
    assert t.M_gens == 1
    assert t.M_rel == Matrix.from_rows(Z, [[2]])
    assert t.verify()
    for n in range(-1, 3):
        for side in ("kernel", "cokernel"):
            assert torsion_truncate(A, n, side).verify()
    with pytest.raises(ValueError):
        torsion_truncate(A, 0, "sideways")


def test_ws_suite_runs_clean():
    r = ws_axiom_suite(GF2, samples=30, seed=4)
    assert r.passed, r.failures
    assert r.counts


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([GF2, GF3, Z4, Z]), st.integers(0, 10 ** 6), st.integers(-2, 3))
def test_weight_decomposition_certificate_replays(ring, seed, n):
    rng = random.Random(seed)
    X = random_complex(ring, rng, -1, 2, 2)
    D = stupid_truncate(X, n)
    assert D.verify()
    assert all(k <= n for k in D.wle.support)
    assert all(k >= n + 1 for k in D.wge.support)
    assert D.wle.total_rank + D.wge.total_rank == X.total_rank
    assert restrict(X, hi=n) == D.wle
