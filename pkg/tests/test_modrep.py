import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stabring import ffield as ff
from stabring import modrep as mr
from stabring.errors import (
    FieldMismatchError,
    NotNilpotentError,
    OrderMismatchError,
    OutOfRangeError,
    ShapeMismatchError,
)

from conftest import random_invertible, sympy_inverse


def conjugated(F, q, blocks, seed):
    """A module with the given blocks, hidden behind a random change of basis."""
    A = mr.module_from_blocks(F, q, blocks)
    rng = np.random.default_rng(seed)
    P = random_invertible(F.p, A.dim, rng)
    T = F.matmul(F.matmul(P, A.t), sympy_inverse(P, F.p))
    return mr.Module(F, q, T)


def test_indec_examples(gf2, gf3):
    assert np.array_equal(mr.mod_indec(gf3, 3, 1).t, [[0]])
    assert mr.mod_decompose(mr.mod_indec(gf3, 3, 3)) == (3,)
    M = mr.mod_indec(gf2, 4, 3)
    T2 = gf2.matmul(M.t, M.t)
    assert M.dim == 3 and np.any(T2) and not np.any(gf2.matmul(T2, M.t))


def test_module_rejects_non_nilpotent(gf2):
    with pytest.raises(NotNilpotentError):
        mr.Module(gf2, 2, np.eye(1, dtype=np.int64))


def test_perm_examples(gf2):
    assert mr.mod_decompose(mr.mod_perm(gf2, 4, 4)) == (1,)
    assert mr.mod_decompose(mr.mod_perm(ff.GF(3), 9, 1)) == (9,)
    M = mr.mod_perm(gf2, 4, 2)
    assert np.array_equal(M.t, [[1, 1], [1, 1]])
    assert mr.mod_decompose(M) == (2,)
    with pytest.raises(OutOfRangeError):
        mr.mod_perm(gf2, 4, 3)


def test_direct_sum(gf2):
    one = mr.mod_indec(gf2, 4, 1)
    S = mr.mod_direct_sum(one, one)
    assert S.dim == 2 and not np.any(S.t)
    assert mr.mod_decompose(mr.mod_direct_sum(mr.mod_indec(gf2, 4, 2), mr.mod_indec(gf2, 4, 3))) == (2, 3)
    A = mr.mod_indec(gf2, 4, 3)
    assert mr.mod_direct_sum(A, mr.zero_module(gf2, 4)) == A
    with pytest.raises(OrderMismatchError):
        mr.mod_direct_sum(A, mr.mod_indec(gf2, 2, 1))
    with pytest.raises(FieldMismatchError):
        mr.mod_direct_sum(A, mr.mod_indec(ff.GF(3), 3, 1))


def test_tensor_examples(gf2, gf3):
    two = mr.mod_indec(gf2, 4, 2)
    assert mr.mod_decompose(mr.mod_tensor(two, two)) == (2, 2)
    two3 = mr.mod_indec(gf3, 3, 2)
    assert mr.mod_decompose(mr.mod_tensor(two3, two3)) == (1, 3)
    three = mr.mod_indec(gf2, 4, 3)
    assert mr.mod_decompose(mr.mod_tensor(three, three)) == (1, 4, 4)


def test_tensor_formula_examples():
    assert mr.tensor_formula_cp(5, 2, 3) == (2, 4)
    assert mr.tensor_formula_cp(3, 2, 2) == (1,)
    for p in (3, 5, 7):
        for j in range(1, p):
            assert mr.tensor_formula_cp(p, 1, j) == (j,)
    with pytest.raises(OutOfRangeError):
        mr.tensor_formula_cp(3, 3, 1)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_tensor_formula_matches_rank_sequence(p):
    F = ff.GF(p)
    for i, j in itertools.product(range(1, p), repeat=2):
        full = mr.mod_decompose(mr.mod_tensor(mr.mod_indec(F, p, i), mr.mod_indec(F, p, j)))
        assert tuple(b for b in full if b != p) == mr.tensor_formula_cp(p, i, j)
        assert sum(full) == i * j


def test_decompose_examples(gf3):
    assert mr.mod_decompose(mr.Module(gf3, 3, ff.zeros(3, 3))) == (1, 1, 1)
    assert mr.mod_decompose(mr.mod_indec(gf3, 9, 9)) == (9,)
    assert mr.mod_decompose(conjugated(gf3, 9, [2, 3, 3], 11)) == (2, 3, 3)


block_lists = st.lists(st.integers(1, 4), min_size=1, max_size=4)


@given(block_lists, st.integers(0, 2**31))
def test_decompose_conjugation_invariant(blocks, seed):
    F = ff.GF(2)
    M = conjugated(F, 4, blocks, seed)
    assert mr.mod_decompose(M) == tuple(sorted(blocks))


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3),
       st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_tensor_symmetric_unital_and_dimensional(a, b):
    F = ff.GF(3)
    A, B = mr.module_from_blocks(F, 3, a), mr.module_from_blocks(F, 3, b)
    AB, BA = mr.mod_tensor(A, B), mr.mod_tensor(B, A)
    assert mr.mod_decompose(AB) == mr.mod_decompose(BA)
    assert AB.dim == A.dim * B.dim
    S = mr.swap_matrix(A.dim, B.dim)
    # the swap is an isomorphism of modules
    assert np.array_equal(F.matmul(S, AB.t), F.matmul(BA.t, S))
    one = mr.unit_module(F, 3)
    assert mr.mod_decompose(mr.mod_tensor(one, A)) == mr.mod_decompose(A)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3))
def test_dual(blocks):
    F = ff.GF(2)
    A = mr.module_from_blocks(F, 4, blocks)
    D = mr.mod_dual(A)
    assert mr.mod_decompose(D) == mr.mod_decompose(A)
    # g acts on the dual by the inverse transpose
    assert np.array_equal(F.matmul(D.g, A.g.T), ff.identity(A.dim))
    assert mr.mod_dual(mr.unit_module(F, 4)) == mr.unit_module(F, 4)


def test_hom_examples(gf2):
    one = mr.unit_module(gf2, 4)
    assert mr.hom_dim(one, one) == 1
    assert mr.hom_dim(mr.mod_indec(gf2, 4, 3), mr.mod_indec(gf2, 4, 2)) == 2
    F9 = ff.GF(3)
    assert mr.hom_dim(mr.mod_indec(F9, 9, 3), mr.mod_indec(F9, 9, 5)) == 3


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3),
       st.lists(st.integers(1, 4), min_size=1, max_size=3), st.integers(0, 2**31))
def test_hom_basis_is_equivariant_and_matches_formula(a, b, seed):
    F = ff.GF(2)
    A, B = conjugated(F, 4, a, seed), conjugated(F, 4, b, seed + 1)
    basis = mr.hom_basis(A, B)
    assert len(basis) == mr.hom_dim_formula(a, b)
    assert all(f.is_equivariant() for f in basis)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=2),
       st.lists(st.integers(1, 3), min_size=1, max_size=2),
       st.lists(st.integers(1, 3), min_size=1, max_size=2))
def test_tensor_hom_adjunction(a, b, c):
    F = ff.GF(3)
    A, B, C = (mr.module_from_blocks(F, 3, x) for x in (a, b, c))
    lhs = mr.hom_dim(mr.mod_tensor(A, B), C)
    rhs = mr.hom_dim(A, mr.mod_tensor(mr.mod_dual(B), C))
    assert lhs == rhs


def test_unit_counit(gf3):
    one = mr.unit_module(gf3, 3)
    eta, eps = mr.unit_counit(one)
    assert np.array_equal(eta.matrix, [[1]]) and np.array_equal(eps.matrix, [[1]])
    M = mr.mod_indec(gf3, 3, 2)
    eta, eps = mr.unit_counit(M)
    assert eta.is_equivariant() and eps.is_equivariant()
    tr = mr.trace_map(M)
    assert int((tr @ eta).matrix[0, 0]) == 2


@pytest.mark.parametrize("q, i", [(3, 1), (3, 2), (4, 2), (4, 3), (9, 4)])
def test_triangle_identities(q, i):
    F = ff.GF(2 if q == 4 else 3)
    M = mr.mod_indec(F, q, i)
    eta, eps = mr.unit_counit(M)
    I = mr.identity_hom(M)
    # (eps (x) M)(M (x) eta) = 1_M under the identifications [1] (x) M = M = M (x) [1]
    assert np.array_equal((eps.tensor(I) @ I.tensor(eta)).matrix, ff.identity(M.dim))


def test_restrict_examples(gf2):
    assert mr.mod_decompose(mr.mod_restrict(mr.mod_indec(gf2, 4, 3), 1)) == (1, 2)
    assert mr.mod_decompose(mr.mod_restrict(mr.mod_indec(gf2, 4, 4), 1)) == (2, 2)
    for m in (0, 1, 2):
        assert mr.mod_decompose(mr.mod_restrict(mr.unit_module(gf2, 4), m)) == (1,)
    with pytest.raises(OutOfRangeError):
        mr.mod_restrict(mr.unit_module(gf2, 4), 3)


def test_induce_examples(gf2):
    ind = mr.mod_induce(mr.unit_module(gf2, 2), 2)
    assert mr.mod_decompose(ind) == (2,)
    assert mr.mod_decompose(ind) == mr.mod_decompose(mr.mod_perm(gf2, 4, 2))
    assert mr.mod_decompose(mr.mod_induce(mr.mod_indec(gf2, 2, 2), 2)) == (4,)
    F = ff.GF(3)
    assert mr.mod_decompose(mr.mod_induce(mr.mod_indec(F, 3, 2), 2)) == (6,)


@pytest.mark.parametrize("p, n, m", [(2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 1)])
def test_frobenius_reciprocity(p, n, m):
    F = ff.GF(p)
    q, qm = p**n, p**m
    for i in range(1, qm + 1):
        for j in range(1, q + 1):
            A, B = mr.mod_indec(F, qm, i), mr.mod_indec(F, q, j)
            assert mr.hom_dim(mr.mod_induce(A, n), B) == mr.hom_dim(A, mr.mod_restrict(B, m))


@given(st.lists(st.integers(1, 4), min_size=1, max_size=2),
       st.lists(st.integers(1, 4), min_size=1, max_size=2))
def test_restriction_is_monoidal(a, b):
    F = ff.GF(2)
    A, B = mr.module_from_blocks(F, 4, a), mr.module_from_blocks(F, 4, b)
    lhs = mr.mod_restrict(mr.mod_tensor(A, B), 1)
    rhs = mr.mod_tensor(mr.mod_restrict(A, 1), mr.mod_restrict(B, 1))
    assert mr.mod_decompose(lhs) == mr.mod_decompose(rhs)


def test_sympow_examples(gf3):
    A = mr.mod_indec(gf3, 3, 2)
    assert mr.mod_sympow(A, 1) == A
    assert mr.mod_decompose(mr.mod_sympow(A, 2)) == (3,)
    F5 = ff.GF(5)
    S = mr.mod_sympow(mr.mod_indec(F5, 5, 2), 4)
    assert S.dim == 5 and mr.mod_decompose(S) == (5,)


@given(st.integers(1, 3), st.integers(0, 4))
def test_sympow_dimension(i, k):
    F = ff.GF(3)
    S = mr.mod_sympow(mr.mod_indec(F, 9, i), k)
    assert S.dim == math.comb(i + k - 1, k)


def test_sym_idempotent_image():
    assert mr.sym_idempotent_image(1, 3) == (1,)
    assert mr.sym_idempotent_image(2, 3) == (3,)
    # S^4 of a 4-dim space has dimension C(7, 4) = 35
    assert mr.sym_idempotent_image(4, 5) == (5,) * 7
    # S^4 of a 5-dim space has dimension C(8, 4) = 70
    assert mr.sym_idempotent_image(5, 5) == (5,) * 14
    with pytest.raises(OutOfRangeError):
        mr.sym_idempotent_image(6, 5)


def test_extend(gf2, gf4):
    A = mr.mod_indec(gf2, 4, 3)
    E = mr.mod_extend(A, gf4)
    assert E.field == gf4 and mr.mod_decompose(E) == (3,)
    assert mr.mod_extend(A, gf2) == A
    with pytest.raises(FieldMismatchError):
        mr.mod_extend(A, ff.GF(3))


def test_hom_algebra(gf2):
    A, B = mr.mod_indec(gf2, 4, 2), mr.mod_indec(gf2, 4, 3)
    f, g = mr.hom_basis(A, B)[:2]
    assert (f + g).is_equivariant() and (f - f).is_zero()
    h = mr.hom_basis(B, A)[0]
    assert (h @ f).source == A and (h @ f).is_equivariant()
    with pytest.raises(ShapeMismatchError):
        f @ f


def test_json_round_trip(gf4):
    M = mr.mod_extend(mr.mod_indec(ff.GF(2), 4, 3), gf4)
    assert mr.Module.from_json(M.to_json()) == M
