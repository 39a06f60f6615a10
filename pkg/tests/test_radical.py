import numpy as np
import pytest
from hypothesis import given, strategies as st

from stabring import ffield as ff
from stabring import modrep as mr
from stabring import radical as rd
from stabring.errors import BudgetExceededError

from test_modrep import conjugated


def test_jordan_basis_examples(gf3):
    A = mr.module_from_blocks(gf3, 9, [2, 3])
    J = rd.jordan_basis(A)
    assert np.array_equal(J.change_of_basis, ff.identity(5))
    M = conjugated(gf3, 9, [2, 3], 5)
    J = rd.jordan_basis(M)
    assert sorted(J.sizes) == [2, 3]
    assert sorted(mr.mod_decompose(mr.Module(gf3, 9, rd.jordan_form(J)))) == [2, 3]
    Z = mr.Module(gf3, 3, ff.zeros(3, 3))
    J = rd.jordan_basis(Z)
    assert J.sizes == (1, 1, 1) and np.array_equal(J.change_of_basis, ff.identity(3))


@given(st.lists(st.integers(1, 4), min_size=1, max_size=4), st.integers(0, 2**31))
def test_jordan_form_is_block_diagonal(blocks, seed):
    F = ff.GF(2)
    M = conjugated(F, 4, blocks, seed)
    J = rd.jordan_basis(M)
    expect = mr.module_from_blocks(F, 4, J.sizes).t
    assert np.array_equal(rd.jordan_form(J), expect)
    assert tuple(sorted(J.sizes)) == tuple(sorted(blocks))


def test_jordan_of_tensor_square(gf2):
    three = mr.mod_indec(gf2, 4, 3)
    J = rd.jordan_basis(mr.mod_tensor(three, three))
    assert sorted(J.sizes) == [1, 4, 4]


def test_rad_examples(gf3):
    two = mr.mod_indec(gf3, 3, 2)
    t = mr.ModuleHom(two, two, two.t)
    assert rd.rad_member(t)
    assert not rd.rad_member(mr.identity_hom(two))
    for f in mr.hom_basis(mr.mod_indec(gf3, 3, 1), two):
        assert rd.rad_member(f)
        assert rd.rad_member(f.scale(2))


def random_hom(F, A, B, rng):
    basis = mr.hom_basis(A, B)
    M = ff.lin_comb(F, rng.integers(0, F.order, len(basis)), [h.matrix for h in basis], (B.dim, A.dim))
    return mr.ModuleHom(A, B, M)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=2),
       st.lists(st.integers(1, 4), min_size=1, max_size=2), st.integers(0, 2**31))
def test_rad_matches_definition(a, b, seed):
    F = ff.GF(2)
    A, B = conjugated(F, 4, a, seed), conjugated(F, 4, b, seed + 7)
    back = mr.hom_basis(B, A)
    if len(back) > 8:
        return
    f = random_hom(F, A, B, np.random.default_rng(seed))
    assert rd.rad_member(f) == rd.rad_member_definitional(f, back)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=2),
       st.lists(st.integers(1, 3), min_size=1, max_size=2), st.integers(0, 2**31))
def test_rad_matches_definition_gf3(a, b, seed):
    F = ff.GF(3)
    A, B = mr.module_from_blocks(F, 3, a), mr.module_from_blocks(F, 3, b)
    back = mr.hom_basis(B, A)
    if len(back) > 5:
        return
    f = random_hom(F, A, B, np.random.default_rng(seed))
    assert rd.rad_member(f) == rd.rad_member_definitional(f, back)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=2),
       st.lists(st.integers(1, 4), min_size=1, max_size=2),
       st.lists(st.integers(1, 4), min_size=1, max_size=2),
       st.integers(0, 2**31), st.sampled_from(["module", "stable"]))
def test_rad_and_ihat_are_ideals(a, b, c, seed, mode):
    F = ff.GF(2)
    A, B, C = (mr.module_from_blocks(F, 4, x) for x in (a, b, c))
    rng = np.random.default_rng(seed)
    f = random_hom(F, A, B, rng)
    g, h = random_hom(F, B, C, rng), random_hom(F, C, A, rng)
    if rd.rad_member(f, mode):
        assert rd.rad_member(g @ f, mode)
        assert rd.rad_member(f @ h @ g @ f, mode)
        # the tensor-closure contains the radical
        assert rd.ihat_member(f, mode)
    if rd.ihat_member(f, mode):
        assert rd.ihat_member(g @ f, mode)


def test_ihat_equals_rad_on_faithful_blocks(gf3):
    for i in (1, 2):
        for j in (1, 2):
            for f in mr.hom_basis(mr.mod_indec(gf3, 3, i), mr.mod_indec(gf3, 3, j)):
                assert rd.ihat_member(f) == rd.rad_member(f)


def test_faithful_examples(gf2, gf3):
    assert rd.tensor_faithful(mr.mod_indec(gf3, 3, 2))
    assert not rd.tensor_faithful(mr.mod_indec(gf2, 4, 2))
    assert rd.tensor_faithful(mr.mod_indec(gf2, 4, 3))
    for q, F in ((3, gf3), (4, gf2)):
        assert not rd.tensor_faithful(mr.mod_indec(F, q, q))


@pytest.mark.parametrize("q", [2, 3, 4, 8, 9])
def test_faithful_criteria_agree(q):
    F = ff.GF(3 if q in (3, 9) else 2)
    for i in range(1, q + 1):
        rd.tensor_faithful(mr.mod_indec(F, q, i))  # raises on disagreement
    rd.tensor_faithful(mr.module_from_blocks(F, q, [q, 1]))


def test_ihat_examples(gf2, gf3):
    assert rd.ihat_member(mr.identity_hom(mr.mod_indec(gf2, 4, 2)))
    assert not rd.ihat_member(mr.identity_hom(mr.unit_module(gf2, 4)))
    assert not rd.ihat_member(mr.identity_hom(mr.mod_indec(gf3, 3, 2)))


def test_stable_mode_discards_projective_blocks(gf2):
    free = mr.mod_indec(gf2, 4, 4)
    assert not rd.rad_member(mr.identity_hom(free), "module")
    assert rd.rad_member(mr.identity_hom(free), "stable")
    rep = rd.radical_report(mr.identity_hom(free), "stable")
    assert rep["blocks"] == [[4, 4, 4, "discarded"]]


def test_generators(gf2):
    for f in rd.radical_generators(gf2, 4):
        assert f.is_equivariant() and rd.rad_member(f)


def test_witness_dichotomy(gf2, gf3):
    w = rd.rad_tensor_witness(gf2, 4)
    assert w is not None and mr.mod_decompose(w.X) == (2,)
    assert w.to_json()["f_source"] == [1]
    assert rd.rad_tensor_witness(gf3, 3) is None
    assert rd.rad_tensor_witness(gf2, 2) is None
    assert rd.rad_tensor_witness(gf2, 8) is not None
    assert rd.rad_tensor_witness(gf3, 9) is not None
    assert rd.rad_tensor_witness(ff.GF(5), 5) is None
    with pytest.raises(BudgetExceededError):
        rd.rad_tensor_witness(gf2, 16)


def test_witness_identity_factors_through_eta(gf2):
    # 1_[2] = (eps (x) 1)(1 (x) eta): the identity of a non-faithful object lies in the ideal of eta
    M = mr.mod_indec(gf2, 4, 2)
    eta, eps = mr.unit_counit(M)
    I = mr.identity_hom(M)
    assert (eps.tensor(I) @ I.tensor(eta)) == I


def test_stable_invertible(gf2):
    three = mr.mod_indec(gf2, 4, 3)
    sq = mr.mod_tensor(three, three)
    one = mr.unit_module(gf2, 4)
    found = [f for f in mr.hom_basis(one, sq) if rd.stable_invertible(f)]
    assert found
    assert not rd.stable_invertible(mr.zero_hom(one, sq))
