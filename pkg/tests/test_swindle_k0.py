import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cohomology_dims_mod_p, swindle_expansion
from wkit.complex_core import ChainMap, Complex, Cohomology
from wkit.exact_linalg import Matrix, Ring
from wkit.sampling import random_complex
from wkit.swindle_k0 import (
    Atom,
    LazyShift,
    LazySum,
    SplittingUnavailable,
    build_swindle,
    k0_of_complex,
    k0_relation,
    le_membership,
    swindle_split_trace,
)
from wkit.weights import restrict

GF2, GF3, Z4 = Ring.gf(2), Ring.gf(3), Ring.zmod(4)


def test_stalk_swindle_ranks():
    X = Complex.stalk(GF2, 1, 0)
    sw = build_swindle(X)
    assert [sw.S.rank(p) for p in range(-6, 3)] == [1, 0, 1, 0, 1, 0, 1, 0, 0]
    assert sw.verify(*sw.default_window())
    up = build_swindle(X, "up")
    assert [up.S.rank(p) for p in range(-2, 7)] == [0, 0, 1, 0, 1, 0, 1, 0, 1]
    assert up.verify(*up.default_window())


def test_two_term_swindle_against_expansion():
    # X = (k -1-> k) in degrees 0, 1: every degree <= 1 has rank 1 and the
    # differential alternates between 1 (inside a copy) and 0 (between copies)
    X = Complex.from_diffs(GF2, 0, [[[1]]])
    sw = build_swindle(X)
    assert [sw.S.rank(p) for p in range(-6, 3)] == [1] * 8 + [0]
    assert sw.S.d(-2) == Matrix.from_rows(GF2, [[1]])
    assert sw.S.d(-1) == Matrix.from_rows(GF2, [[0]])
    W = sw.S.window(-6, 1)
    E = restrict(swindle_expansion(X, 5), lo=-6)
    assert W == E


def test_zero_seed():
    sw = build_swindle(Complex.zero(GF2))
    lo, hi = sw.S.bounds()
    assert lo > hi
    assert all(sw.S.rank(p) == 0 for p in range(-5, 5))
    assert sw.verify(0, 9)


def test_two_sided_seed_is_rejected():
    X = Complex.stalk(GF2, 1, 0)
    down = build_swindle(X).S
    up = build_swindle(X, "up").S
    both = LazySum(down, up)
    assert both.bounds() == (-math.inf, math.inf)
    with pytest.raises(ValueError):
        build_swindle(both)


def test_lazy_building_blocks():
    X = Complex.from_diffs(GF3, 0, [[[2]]])
    A = Atom(X, "X")
    assert A.rank(0) == 1 and A.rank(2) == 0
    S = LazyShift(A, 1)
    assert S.rank(-1) == 1
    assert S.d(-1) == Matrix.from_rows(GF3, [[-2]])
    T = LazySum(A, S)
    expect = Complex(GF3, {-1: 1, 0: 2, 1: 1},
                     {-1: Matrix.from_rows(GF3, [[0], [-2]]), 0: Matrix.from_rows(GF3, [[2, 0]])})
    assert T.window(-1, 1) == expect


def test_k0_derivations_replay_and_detect_tampering():
    rng = random.Random(0)
    for ring in (GF2, GF3, Z4):
        X = random_complex(ring, rng, -1, 1, 2, min_rank=1)
        for direction in ("down", "up"):
            r = k0_relation(X, direction)
            assert r.replay(), r.failures
            assert r.coefficients == [1, -1, 1]
            assert r.conclusion == {"B": -1}
        c = k0_of_complex(X)
        assert c.replay(), c.failures
    r = k0_relation(Complex.stalk(GF3, 1, 0))
    r.coefficients = [1, 1, 1]
    assert not r.replay()


def test_le_membership_of_swindle():
    X = Complex.stalk(GF3, 1, 0)
    S = build_swindle(X).S
    assert le_membership(S, 0, -8).answer == "yes"
    assert le_membership(S, -1, -8).answer == "no"
    with pytest.raises(ValueError):
        le_membership(S, 0, 0)
    with pytest.raises(ValueError):
        le_membership(build_swindle(X, "up").S, 0, -8)


def test_split_trace_steps():
    rng = random.Random(1)
    done = 0
    while done < 5:
        M = random_complex(GF3, rng, -1, 1, 2)
        H, p, i, _ = Cohomology(M).equivalence()
        if H.total_rank < 2:
            continue
        D = {n: Matrix.diag(GF3, [1] + [0] * (H.rank(n) - 1)) for n in H.support}
        e = i @ ChainMap(H, H, D) @ p
        tr = swindle_split_trace(M, e)
        assert tr.ok, tr.lines()
        done += 1


def test_split_trace_needs_a_field():
    M = Complex.stalk(Z4, 1, 0)
    with pytest.raises(SplittingUnavailable):
        swindle_split_trace(M, ChainMap.identity(M))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([GF2, GF3, Z4]), st.integers(0, 10 ** 6), st.sampled_from(["down", "up"]))
def test_swindle_matches_materialized_sum(ring, seed, direction):
    rng = random.Random(seed)
    X = random_complex(ring, rng, -2, 2, 2)
    sw = build_swindle(X, direction)
    a, b = sw.default_window()
    assert sw.verify(a, b)
    for p in range(a, b + 1):
        assert sw.S.rank(p) == sw.S.closed_form_rank(p)
    E = swindle_expansion(X, 8, direction)
    # away from the cut-off end the window agrees with the finite sum
    inner = (a + 1, b) if direction == "down" else (a, b - 1)
    assert sw.S.window(*inner) == restrict(E, *inner)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_swindle_cohomology_repeats(seed):
    rng = random.Random(seed)
    X = random_complex(GF2, rng, 0, 1, 2)
    S = build_swindle(X).S
    dims = cohomology_dims_mod_p(S.window(-12, 1), 2)
    base = cohomology_dims_mod_p(X, 2)
    for n in range(-9, 2):
        expect = sum(base.get(n + 2 * k, 0) for k in range(0, 8))
        assert dims.get(n, 0) == expect
