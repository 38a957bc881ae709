import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wkit.complex_core import ChainMap, Complex, cohomology, cohomology_dims
from wkit.exact_linalg import Matrix, Ring
from wkit.fixtures import rank_one_projector
from wkit.homotopy_cat import (
    CandidateTriangle,
    Obstruction,
    Splitting,
    UndecidedResult,
    anti_triangle_check,
    certify_triangle,
    complete_3x3,
    cone_triangle,
    direct_sum_triangle,
    fill_triangle_morphism,
    split_idempotent,
    trivial_certificate,
)
from wkit.sampling import random_chain_map, random_complex

GF2, GF3, Z4 = Ring.gf(2), Ring.gf(3), Ring.zmod(4)


def test_cone_triangle_is_certified():
    rng = random.Random(0)
    for ring in (GF2, GF3, Z4):
        X = random_complex(ring, rng, 0, 1, 2)
        Y = random_complex(ring, rng, 0, 1, 2)
        f = random_chain_map(X, Y, rng)
        t = cone_triangle(f)
        assert t.is_candidate()
        c = certify_triangle(t)
        assert c is not None and c.verify()
        assert trivial_certificate(f).verify()


def test_direct_sum_triangle():
    X = Complex.from_diffs(GF3, 0, [[[1]]])
    Z = Complex.stalk(GF3, 2, 1)
    c = certify_triangle(direct_sum_triangle(X, Z))
    assert c is not None and c.verify()


def test_non_triangle_gets_no_certificate():
    Z = Complex.stalk(GF2, 1, 0)
    O = Complex.zero(GF2)
    t = CandidateTriangle(ChainMap.identity(O), ChainMap.zero(O, Z), ChainMap.zero(Z, O))
    assert certify_triangle(t) is None


def test_tampered_certificate_fails():
    rng = random.Random(5)
    X = random_complex(GF3, rng, 0, 1, 2, min_rank=1)
    f = ChainMap.identity(X)
    c = certify_triangle(cone_triangle(f))
    c.phi = c.phi.scale(2)
    assert not c.verify()


def test_negated_cone_triangle_is_an_anti_triangle():
    X = Complex.from_diffs(GF3, 0, [[[1]]])
    Y = Complex.stalk(GF3, 1, 0)
    f = ChainMap(X, Y, {0: Matrix.from_rows(GF3, [[1]])})
    t = cone_triangle(f).negate_third()
    c = anti_triangle_check(t)
    assert c is not None and c.verify()


def test_idempotent_splits_to_rank_one():
    d = rank_one_projector()
    s = split_idempotent(d["e"])
    assert isinstance(s, Splitting)
    assert s.Y.total_rank == 1
    assert s.verify()


@pytest.mark.parametrize("ring", [GF2, GF3], ids=["gf2", "gf3"])
def test_even_constraint_obstruction(ring):
    d = rank_one_projector(ring)
    r = split_idempotent(d["e"], even_constraint=True)
    assert isinstance(r, Obstruction)
    assert abs(r.euler_characteristic) == 1
    # the complementary idempotent is diag(0, 1): same story
    X = d["X"]
    e2 = ChainMap.identity(X) - d["e"]
    assert isinstance(split_idempotent(e2, even_constraint=True), Obstruction)
    # the identity has even image and splits
    assert isinstance(split_idempotent(ChainMap.identity(X), even_constraint=True), Splitting)


def test_split_idempotent_rejects_and_defers():
    X = Complex.stalk(GF3, 1, 0)
    with pytest.raises(ValueError):
        split_idempotent(ChainMap(X, X, {0: Matrix.from_rows(GF3, [[2]])}))
    Y = Complex.stalk(Z4, 2, 0)
    r = split_idempotent(ChainMap(Y, Y, {0: Matrix.diag(Z4, [1, 0])}))
    assert isinstance(r, (UndecidedResult, Splitting))
    if isinstance(r, Splitting):
        assert r.verify()


def test_three_by_three_on_random_squares():
    rng = random.Random(2)
    for ring in (GF2, GF3):
        for _ in range(3):
            X = random_complex(ring, rng, 0, 1, 1)
            Y = random_complex(ring, rng, 0, 1, 1)
            u = random_chain_map(X, Y, rng)
            I = ChainMap.identity(Y)
            r = complete_3x3(u, I, u, I).report()
            assert r["objects_d2"] and r["rows_certified"] and r["cols_certified"]
            assert r["commutative"] == 8
            assert r["anticommutative"] == 1


def test_fill_morphism_of_cone_triangles():
    rng = random.Random(6)
    X = random_complex(GF3, rng, 0, 1, 2)
    Y = random_complex(GF3, rng, 0, 1, 2)
    u = random_chain_map(X, Y, rng)
    t = cone_triangle(u)
    m = fill_triangle_morphism(ChainMap.identity(Y), t, t)
    assert m is not None and m.verify(t, t)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([GF2, GF3, Z4]), st.integers(0, 10 ** 6))
def test_cone_certificates_replay(ring, seed):
    rng = random.Random(seed)
    X = random_complex(ring, rng, 0, 1, 2)
    Y = random_complex(ring, rng, 0, 1, 2)
    f = random_chain_map(X, Y, rng)
    c = certify_triangle(cone_triangle(f))
    assert c is not None and c.verify()
    # v u and w v are null-homotopic
    for h in cone_triangle(f).composite_witnesses():
        assert h is not None


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([GF2, GF3]), st.integers(0, 10 ** 6))
def test_splittings_satisfy_their_identities(ring, seed):
    # e = i D p with D a coordinate projector on cohomology is idempotent up to homotopy
    rng = random.Random(seed)
    X = random_complex(ring, rng, 0, 1, 2)
    H, p, i, _ = cohomology(X).equivalence()
    picks = {n: [rng.randint(0, 1) for _ in range(H.rank(n))] for n in H.support}
    e = i @ ChainMap(H, H, {n: Matrix.diag(ring, v) for n, v in picks.items()}) @ p
    s = split_idempotent(e)
    assert isinstance(s, Splitting) and s.verify()
    assert sum(dict(cohomology_dims(s.Y)).values()) == sum(sum(v) for v in picks.values())
