import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stabring import ffield as ff
from stabring.errors import (
    DegreeMismatchError,
    DimensionMismatchError,
    NotPrimeError,
    ReducibleModulusError,
    SingularMatrixError,
)

from conftest import sympy_rank


def poly_mul_mod(a, b, modulus, p):
    """Schoolbook product of little-endian coefficient lists, reduced mod a monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    m = len(modulus) - 1
    for deg in range(len(prod) - 1, m - 1, -1):
        c = prod[deg]
        if c:
            for k in range(m + 1):
                prod[deg - m + k] = (prod[deg - m + k] - c * modulus[k]) % p
    return (prod + [0] * m)[:m]


FIELDS = [
    (2, 2, (1, 1, 1)),
    (3, 2, (1, 0, 1)),
    (2, 3, (1, 1, 0, 1)),
    (5, 2, (2, 0, 1)),
]


def test_prime_fields():
    assert ff.ff_make(2, 1, []).order == 2
    assert ff.ff_make(3, 1, []).order == 3
    assert ff.GF(3).is_prime_field


def test_gf4():
    F = ff.ff_make(2, 2, [1, 1, 1])
    assert F.order == 4
    # x^2 + x + 1 has no root in GF(2)
    assert all((x * x + x + 1) % 2 for x in range(2))


@pytest.mark.parametrize("args, err", [
    ((4, 1, []), NotPrimeError),
    ((1, 1, []), NotPrimeError),
    ((2, 2, [1, 0, 1]), ReducibleModulusError),
    ((3, 2, [2, 0, 1]), ReducibleModulusError),
    ((2, 2, [1, 1]), DegreeMismatchError),
    ((2, 2, [1, 1, 0]), DegreeMismatchError),
    ((2, 1, [1, 1, 1]), DegreeMismatchError),
])
def test_ff_make_errors(args, err):
    with pytest.raises(err):
        ff.ff_make(*args)


@pytest.mark.parametrize("p, m, modulus", FIELDS)
def test_mul_table_against_polynomials(p, m, modulus):
    F = ff.ff_make(p, m, modulus)
    for a, b in itertools.product(F.elements(), repeat=2):
        expect = F.encode(poly_mul_mod(F.decode(a), F.decode(b), list(modulus), p))
        assert int(F.mul(a, b)) == expect


@pytest.mark.parametrize("p, m, modulus", FIELDS)
def test_inverse_and_frobenius(p, m, modulus):
    F = ff.ff_make(p, m, modulus)
    for a in range(1, F.order):
        assert int(F.mul(a, F.inv(a))) == 1
    for a, b in itertools.product(F.elements(), repeat=2):
        assert F.frobenius(int(F.add(a, b))) == int(F.add(F.frobenius(a), F.frobenius(b)))
    images = {F.frobenius(a) for a in F.elements()}
    assert len(images) == F.order


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_gf9_axioms(a, b, c):
    F = ff.ff_make(3, 2, [1, 0, 1])
    add, mul = F.add, F.mul
    assert add(a, b) == add(b, a)
    assert mul(a, b) == mul(b, a)
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert add(a, F.neg(a)) == 0


def test_rank_examples(gf2):
    assert ff.mat_rank(gf2, ff.zeros(3, 3)) == 0
    assert ff.mat_rank(gf2, ff.identity(4)) == 4
    for q in (2, 4, 8):
        J = np.eye(q, k=-1, dtype=np.int64)
        assert ff.mat_rank(gf2, J) == q - 1


@st.composite
def matrices(draw, p=3):
    r = draw(st.integers(1, 6))
    c = draw(st.integers(1, 6))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(entries, dtype=np.int64).reshape(r, c)


@given(matrices())
def test_rank_matches_sympy_and_transpose(M):
    F = ff.GF(3)
    r = ff.mat_rank(F, M)
    assert r == sympy_rank(M, 3)
    assert r == ff.mat_rank(F, M.T)
    N = ff.mat_nullspace(F, M)
    assert N.shape[1] == M.shape[1] - r
    assert not np.any(F.matmul(M, N))


@given(matrices(p=2))
def test_rank_gf2(M):
    assert ff.mat_rank(ff.GF(2), M) == sympy_rank(M, 2)


def test_solve_examples(gf3):
    B = np.array([[1, 2], [0, 1], [2, 2]])
    sol = ff.mat_solve(gf3, ff.identity(3), B)
    assert sol.feasible and np.array_equal(sol.particular, B)
    assert sol.nullspace.shape[1] == 0
    sol = ff.mat_solve(gf3, ff.zeros(3, 4), ff.zeros(3, 1))
    assert sol.feasible and not np.any(sol.particular)
    assert sol.nullspace.shape == (4, 4)


def test_solve_random_consistent(gf3):
    rng = np.random.default_rng(7)
    for _ in range(20):
        A = rng.integers(0, 3, (5, 7))
        X0 = rng.integers(0, 3, (7, 2))
        B = gf3.matmul(A, X0)
        sol = ff.mat_solve(gf3, A, B)
        assert sol.feasible
        assert np.array_equal(gf3.matmul(A, sol.particular), B)
        assert not np.any(gf3.matmul(A, sol.nullspace))


def test_solve_infeasible_certificate(gf2):
    A = np.array([[1, 1], [1, 1]])
    sol = ff.mat_solve(gf2, A, np.array([1, 0]))
    assert not sol.feasible
    assert sol.rank < sol.augmented_rank


def test_solve_shape_error(gf2):
    with pytest.raises(DimensionMismatchError):
        ff.mat_solve(gf2, ff.identity(2), ff.zeros(3, 1))


@pytest.mark.parametrize("p, m, modulus", FIELDS)
def test_extension_matmul_against_loops(p, m, modulus):
    F = ff.ff_make(p, m, modulus)
    rng = np.random.default_rng(p * 10 + m)
    A = rng.integers(0, F.order, (4, 5))
    B = rng.integers(0, F.order, (5, 3))
    C = F.matmul(A, B)
    for i in range(4):
        for j in range(3):
            acc = 0
            for k in range(5):
                acc = int(F.add(acc, F.mul(int(A[i, k]), int(B[k, j]))))
            assert C[i, j] == acc


def test_inverse(gf4):
    rng = np.random.default_rng(3)
    for _ in range(10):
        M = rng.integers(0, 4, (4, 4))
        if ff.is_invertible(gf4, M):
            assert np.array_equal(gf4.matmul(M, ff.mat_inverse(gf4, M)), ff.identity(4))
        else:
            with pytest.raises(SingularMatrixError):
                ff.mat_inverse(gf4, M)


def test_span_and_complement(gf2):
    base = np.array([[1, 1, 0]])
    cands = np.array([[0, 0, 1], [1, 1, 1], [1, 0, 0]])
    assert ff.extend_to_complement(gf2, base, cands) == [0, 2]
    span = ff.SpanTest(gf2, base, 3)
    assert span.contains([1, 1, 0]) and not span.contains([1, 0, 0])


def test_json_round_trip(gf4):
    M = np.array([[0, 1, 2], [3, 2, 1]])
    data = ff.matrix_to_json(gf4, M)
    assert data["entries"][3] == [1, 1]
    assert np.array_equal(ff.matrix_from_json(gf4, data), M)
    assert ff.field_from_json(ff.field_to_json(gf4)) == gf4
    assert ff.scalar_to_json(ff.GF(3), 2) == 2
