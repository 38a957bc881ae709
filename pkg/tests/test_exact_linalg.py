import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_kernel, brute_solutions, determinantal_divisors, rank_mod_p, span
from wkit.exact_linalg import (
    Matrix,
    Ring,
    RingError,
    image_basis,
    inverse,
    kernel_basis,
    parse_ring,
    rank,
    smith_normal_form,
    solve_linear,
)

SMALL_RINGS = [Ring.gf(2), Ring.gf(3), Ring.zmod(4), Ring.zmod(6)]


def small_matrix(ring, rng, rows=None, cols=None):
    r = rows if rows is not None else rng.randint(1, 3)
    c = cols if cols is not None else rng.randint(1, 3)
    return Matrix(ring, r, c, [rng.randrange(ring.size) for _ in range(r * c)])


def test_parse_ring_descriptors():
    assert parse_ring("gf2") == Ring.gf(2)
    assert parse_ring("GF(3)") == Ring.gf(3)
    assert parse_ring("z4") == Ring.zmod(4)
    assert parse_ring("Z/4") == Ring.zmod(4)
    assert parse_ring("z") == Ring.integers()
    assert parse_ring("q") == Ring.rationals()
    with pytest.raises(RingError):
        parse_ring("gf4")
    with pytest.raises(RingError):
        parse_ring("banana")


def test_ring_arithmetic():
    R = Ring.zmod(4)
    assert R.norm(-1) == 3
    assert R.inv(3) == 3
    assert not R.is_unit(2)
    with pytest.raises(RingError):
        R.inv(2)
    assert Ring.rationals().format(Ring.rationals().parse_element("6/4")) == "3/2"


@pytest.mark.parametrize("ring", SMALL_RINGS, ids=lambda r: r.descriptor)
def test_solve_matches_brute_force(ring):
    rng = random.Random(11)
    for _ in range(60):
        A = small_matrix(ring, rng)
        b = [rng.randrange(ring.size) for _ in range(A.rows)]
        sols = brute_solutions(A.to_lists(), b, ring.size)
        x = solve_linear(A, Matrix.column(ring, b))
        if not sols:
            assert x is None
        else:
            assert x is not None
            assert list(x.entries) in [list(s) for s in sols]


@pytest.mark.parametrize("ring", SMALL_RINGS, ids=lambda r: r.descriptor)
def test_kernel_generates_brute_kernel(ring):
    rng = random.Random(5)
    for _ in range(40):
        A = small_matrix(ring, rng)
        K = kernel_basis(A)
        gens = [K.col(j) for j in range(K.cols)]
        assert set(span(gens, ring.size, A.cols)) == set(brute_kernel(A.to_lists(), ring.size, A.cols))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rank_nullity_over_fields(p):
    rng = random.Random(p)
    ring = Ring.gf(p)
    for _ in range(40):
        A = small_matrix(ring, rng)
        r = rank(A)
        assert r == rank_mod_p(A.to_lists(), p)
        assert r + kernel_basis(A).cols == A.cols
        assert image_basis(A).cols == r


def test_smith_normal_form_against_determinantal_divisors():
    rng = random.Random(2)
    Z = Ring.integers()
    for _ in range(40):
        r, c = rng.randint(1, 3), rng.randint(1, 3)
        A = Matrix(Z, r, c, [rng.randint(-6, 6) for _ in range(r * c)])
        D, U, V = smith_normal_form(A)
        assert U @ A @ V == D
        diag = [abs(D[i, i]) for i in range(min(r, c)) if D[i, i] != 0]
        assert diag == determinantal_divisors(A.to_lists())
        assert all(b % a == 0 for a, b in zip(diag, diag[1:]))


def test_smith_normal_form_frozen():
    # invariant factors worked out by hand from the minors
    Z = Ring.integers()
    A = Matrix.from_rows(Z, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    D, U, V = smith_normal_form(A)
    assert [abs(D[i, i]) for i in range(3)] == [2, 6, 12]
    assert determinantal_divisors(A.to_lists()) == [2, 6, 12]


def test_inverse_over_zmod():
    R = Ring.zmod(4)
    A = Matrix.from_rows(R, [[1, 2], [0, 3]])
    assert A @ inverse(A) == Matrix.identity(R, 2)
    with pytest.raises(Exception):
        inverse(Matrix.from_rows(R, [[2, 0], [0, 1]]))


def test_solve_over_integers_and_rationals():
    Z = Ring.integers()
    A = Matrix.from_rows(Z, [[2, 0], [0, 3]])
    assert list(solve_linear(A, Matrix.column(Z, [4, 9])).entries) == [2, 3]
    assert solve_linear(A, Matrix.column(Z, [1, 0])) is None
    Q = Ring.rationals()
    B = Matrix.from_rows(Q, [[2, 0], [0, 3]])
    x = solve_linear(B, Matrix.column(Q, [1, 0]))
    assert B @ x == Matrix.column(Q, [1, 0])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_RINGS), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3),
       st.integers(0, 10 ** 6))
def test_matrix_product_is_associative(ring, a, b, c, seed):
    rng = random.Random(seed)
    A, B, C = small_matrix(ring, rng, a, b), small_matrix(ring, rng, b, c), small_matrix(ring, rng, c, a)
    assert (A @ B) @ C == A @ (B @ C)
    assert (A @ B).T == B.T @ A.T


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_RINGS), st.integers(0, 10 ** 6))
def test_solution_is_a_solution(ring, seed):
    rng = random.Random(seed)
    A = small_matrix(ring, rng)
    x0 = Matrix.column(ring, [rng.randrange(ring.size) for _ in range(A.cols)])
    b = A @ x0
    x = solve_linear(A, b)
    assert x is not None and A @ x == b


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_RINGS), st.integers(0, 10 ** 6))
def test_kernel_vectors_are_killed(ring, seed):
    rng = random.Random(seed)
    A = small_matrix(ring, rng)
    assert (A @ kernel_basis(A)).is_zero()
