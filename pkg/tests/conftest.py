import numpy as np
import pytest
from hypothesis import settings
from sympy import GF as SymGF
from sympy.polys.matrices import DomainMatrix

from stabring import ffield as ff

settings.register_profile("desk", max_examples=40, deadline=None)
settings.load_profile("desk")


def sympy_rank(M, p):
    """Rank over GF(p) computed by sympy, independent of stabring.ffield."""
    M = np.asarray(M)
    if M.size == 0:
        return 0
    K = SymGF(p)
    rows = [[K(int(x)) for x in row] for row in M]
    return DomainMatrix(rows, M.shape, K).rank()


def sympy_inverse(M, p):
    K = SymGF(p)
    M = np.asarray(M)
    D = DomainMatrix([[K(int(x)) for x in row] for row in M], M.shape, K).inv()
    return np.array([[int(x) % p for x in row] for row in D.to_list()], dtype=np.int64)


def random_invertible(p, d, rng):
    """Unit lower times unit upper triangular: invertible by construction."""
    L = np.tril(rng.integers(0, p, (d, d)), -1) + np.eye(d, dtype=np.int64)
    U = np.triu(rng.integers(0, p, (d, d)), 1) + np.eye(d, dtype=np.int64)
    P = (L @ U) % p
    perm = rng.permutation(d)
    return P[perm]


@pytest.fixture
def gf2():
    return ff.GF(2)


@pytest.fixture
def gf3():
    return ff.GF(3)


@pytest.fixture
def gf4():
    return ff.ff_make(2, 2, [1, 1, 1])
