import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cohomology_dims_mod_p
from wkit.complex_core import ChainMap, Complex, VerificationError, homotopy_witness
from wkit.exact_linalg import Matrix, Ring
from wkit.filtered import (
    MembershipError,
    alpha,
    c_functor,
    c_map,
    cone_alpha,
    constant_filtration,
    gr,
    gr_cohomology_dims,
    in_Ts,
    level_range,
    lift_object,
    lift_weight_decomposition,
    lifts_agree,
    memberships,
    omega,
    omega_adjunction_check,
    s,
    sigma_ge,
    sigma_le,
    sigma_truncate,
    strong_wc_via_fcat,
    stupid_filtration,
    trivial_filtration,
)
from wkit.sampling import random_chain_map, random_complex
from wkit.weight_complex import wc_standard

GF2, GF3 = Ring.gf(2), Ring.gf(3)


def test_filtration_constructors():
    L = Complex.from_diffs(GF3, 0, [[[1]]])
    assert trivial_filtration(L).level(0) == (0,)
    assert constant_filtration(L, 3).level(1) == (3,)
    X = stupid_filtration(L)
    assert X.level(0) == (0,) and X.level(1) == (1,)
    assert omega(X) == L
    assert level_range(s(X, 2)) == (2, 3)
    a = alpha(X)
    a.check()
    assert a.target == s(X)


def test_level_respecting_maps_only():
    X = constant_filtration(Complex.stalk(GF2, 1, 0), 1)
    Y = constant_filtration(Complex.stalk(GF2, 1, 0), 0)
    # maps may raise the level but not lower it
    ChainMap(Y, X, {0: Matrix.from_rows(GF2, [[1]])})
    with pytest.raises(VerificationError):
        ChainMap(X, Y, {0: Matrix.from_rows(GF2, [[1]])})


def test_graded_pieces_and_sigma():
    rng = random.Random(0)
    X = random_complex(GF3, rng, 0, 2, 2, min_rank=1, levels=(0, 1))
    assert sum(gr(X, n).total_rank for n in (0, 1)) == X.total_rank
    assert sigma_ge(X, 1).total_rank + sigma_le(X, 0).total_rank == X.total_rank
    st_ = sigma_truncate(X, 1)
    assert st_.verify()
    assert all(x >= 1 for L in st_.ge.levels.values() for x in L)
    assert all(x <= 0 for L in st_.le.levels.values() for x in L)


def test_stupid_lift_is_pure_and_c_gives_standard_complex():
    rng = random.Random(3)
    for ring in (GF2, GF3):
        for _ in range(10):
            Y = random_complex(ring, rng, -1, 2, 2)
            X = stupid_filtration(Y)
            assert in_Ts(X)
            assert c_functor(X) == wc_standard(Y)


def test_gr_cohomology_matches_oracle():
    rng = random.Random(4)
    for _ in range(15):
        X = random_complex(GF3, rng, 0, 2, 2, levels=(0, 2))
        got = gr_cohomology_dims(X)
        for a in range(0, 3):
            assert got.get(a, {}) == cohomology_dims_mod_p(gr(X, a), 3)


def test_c_rejects_impure_objects():
    # level 0 generator in degree 1: gr^0 has cohomology in degree 1 != 0
    X = constant_filtration(Complex.stalk(GF2, 1, 1), 0)
    assert not in_Ts(X)
    with pytest.raises(MembershipError):
        c_functor(X)


def test_omega_adjunction_on_nonpositive_levels():
    X = constant_filtration(Complex.from_diffs(GF2, 0, [[[1]]]), -1)
    assert all(omega_adjunction_check(X).values())
    with pytest.raises(MembershipError):
        omega_adjunction_check(s(X, 3))


def test_lifts_of_random_complexes():
    rng = random.Random(5)
    for _ in range(8):
        Y = random_complex(GF3, rng, -1, 1, 2)
        for strategy in ("stupid", "inductive"):
            r = lift_object(Y, None, strategy)
            assert r.verify()
            assert in_Ts(r.lift)
        assert lifts_agree(Y)


def test_c_of_a_map_between_stupid_lifts():
    rng = random.Random(6)
    X = random_complex(GF3, rng, 0, 1, 2)
    Y = random_complex(GF3, rng, 0, 1, 2)
    f = random_chain_map(X, Y, rng)
    F = ChainMap(stupid_filtration(X), stupid_filtration(Y), f.comps)
    g = c_map(F)
    g.check()
    assert homotopy_witness(g, ChainMap(wc_standard(X), wc_standard(Y), f.comps)) is not None


def test_cone_alpha_on_identity_and_random_maps():
    rng = random.Random(7)
    Y = random_complex(GF3, rng, 0, 1, 2, min_rank=1)
    X = stupid_filtration(Y)
    r = cone_alpha(ChainMap.identity(X))
    assert r.ok
    assert r.null_witness is not None
    for ring in (GF2, GF3, Ring.gf(5)):
        A = random_complex(ring, rng, -1, 1, 2)
        B = random_complex(ring, rng, -1, 1, 2)
        g = random_chain_map(A, B, rng)
        m = ChainMap(stupid_filtration(A), stupid_filtration(B), g.comps)
        r = cone_alpha(m)
        assert r.in_Ts and r.squares_commute and r.isos_invertible
        assert r.triangle_certificate is not None and r.triangle_certificate.verify()


def test_strong_weight_complex_through_lifts():
    rng = random.Random(8)
    for ring in (GF2, GF3):
        for _ in range(5):
            Y = random_complex(ring, rng, -1, 1, 2)
            assert strong_wc_via_fcat(Y).verify()


def test_lifted_weight_decomposition_bounds():
    rng = random.Random(9)
    for _ in range(10):
        X = random_complex(GF3, rng, -1, 1, 2, levels=(0, 1))
        n = rng.randint(-1, 1)
        D = lift_weight_decomposition(X, n)
        assert D.verify()
        assert all(D.bounds().values()), D.bounds()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([GF2, GF3]), st.integers(0, 10 ** 6), st.integers(-1, 2))
def test_sigma_truncation_triangles_replay(ring, seed, n):
    rng = random.Random(seed)
    X = random_complex(ring, rng, 0, 2, 2, levels=(-1, 2))
    t = sigma_truncate(X, n)
    assert t.verify()
    assert memberships(X).exact


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([GF2, GF3]), st.integers(0, 10 ** 6), st.integers(-2, 2))
def test_filtration_shift_is_invertible(ring, seed, k):
    rng = random.Random(seed)
    X = random_complex(ring, rng, 0, 2, 2, levels=(0, 1))
    assert s(s(X, k), -k) == X
    assert omega(s(X, k)) == omega(X)
    for a in range(-3, 4):
        assert gr(s(X, k), a + k) == gr(X, a)
