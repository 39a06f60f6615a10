"""Modules over kG = k[t]/t^q for a cyclic p-group G of order q = p^n.

A module is a vector space with a nilpotent t-action matrix T; the group
generator acts as g = I + T.  Tensor bases are left-factor major: e_a (x) e_b
has index a * dim(B) + b.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import ffield as ff
from .errors import (
    BudgetExceededError,
    CriteriaDisagreeError,
    FieldMismatchError,
    InputError,
    NotNilpotentError,
    OrderMismatchError,
    OutOfRangeError,
    ShapeMismatchError,
)
from .ffield import FieldSpec

Decomposition = tuple  # sorted tuple of block sizes


def _exponent(p: int, q: int) -> int:
    n, r = 0, q
    while r % p == 0:
        r //= p
        n += 1
    if r != 1:
        raise InputError(f"group order {q} is not a power of {p}")
    return n


class Module:
    """A finite-dimensional k[t]/t^q-module given by its t-action matrix."""

    __slots__ = ("field", "q", "t", "_key")

    def __init__(self, field: FieldSpec, q: int, t):
        t = np.array(t, dtype=np.int64, copy=True)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ShapeMismatchError(f"t-action must be square, got shape {t.shape}")
        if t.size and (t.min() < 0 or t.max() >= field.order):
            raise InputError("t-action entries are not field codes")
        _exponent(field.p, q)
        if t.size and np.any(ff.mat_pow(field, t, q)):
            raise NotNilpotentError(f"t-action does not satisfy T^{q} = 0")
        t.flags.writeable = False
        self.field = field
        self.q = int(q)
        self.t = t
        self._key = (field, self.q, t.shape[0], t.tobytes())

    @property
    def dim(self) -> int:
        return self.t.shape[0]

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def n(self) -> int:
        return _exponent(self.field.p, self.q)

    @property
    def g(self) -> np.ndarray:
        """Matrix of the group generator, I + T."""
        return self.field.add(ff.identity(self.dim), self.t)

    def __eq__(self, other):
        return isinstance(other, Module) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Module({self.field}, q={self.q}, dim={self.dim})"

    def is_nilpotent(self) -> bool:
        return not np.any(ff.mat_pow(self.field, self.t, self.q))

    def to_json(self) -> dict:
        F = self.field
        return {
            "p": F.p,
            "n": self.n,
            "field_degree": F.m,
            "modulus": list(F.modulus),
            "dim": self.dim,
            "t": [ff.scalar_to_json(F, c) for c in self.t.reshape(-1)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Module":
        F = ff.field_from_json(data)
        d = int(data["dim"])
        entries = [ff.scalar_from_json(F, v) for v in data["t"]]
        if len(entries) != d * d:
            raise ShapeMismatchError("t must have dim*dim entries")
        t = np.array(entries, dtype=np.int64).reshape(d, d)
        return cls(F, F.p ** int(data["n"]), t)


@dataclass(frozen=True, eq=False)
class ModuleHom:
    """An equivariant map, stored as a (target.dim x source.dim) matrix."""

    source: Module
    target: Module
    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=np.int64).reshape(self.target.dim, self.source.dim)
        object.__setattr__(self, "matrix", M)
        _check_compatible(self.source, self.target)

    @property
    def field(self) -> FieldSpec:
        return self.source.field

    def is_equivariant(self) -> bool:
        F = self.field
        return np.array_equal(F.matmul(self.matrix, self.source.t), F.matmul(self.target.t, self.matrix))

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        """Composition: (g @ f) is g after f."""
        if other.target != self.source:
            raise ShapeMismatchError("composition of non-composable maps")
        return ModuleHom(other.source, self.target, self.field.matmul(self.matrix, other.matrix))

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        _check_same_shape(self, other)
        return ModuleHom(self.source, self.target, self.field.add(self.matrix, other.matrix))

    def __sub__(self, other: "ModuleHom") -> "ModuleHom":
        _check_same_shape(self, other)
        return ModuleHom(self.source, self.target, self.field.sub(self.matrix, other.matrix))

    def scale(self, c: int) -> "ModuleHom":
        return ModuleHom(self.source, self.target, self.field.mul(self.matrix, int(c)))

    def tensor(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(
            mod_tensor(self.source, other.source),
            mod_tensor(self.target, other.target),
            ff.mat_kron(self.field, self.matrix, other.matrix),
        )

    def is_zero(self) -> bool:
        return not np.any(self.matrix)

    def __eq__(self, other):
        return (
            isinstance(other, ModuleHom)
            and self.source == other.source
            and self.target == other.target
            and np.array_equal(self.matrix, other.matrix)
        )

    __hash__ = None


def _check_same_shape(f: ModuleHom, g: ModuleHom):
    if f.source != g.source or f.target != g.target:
        raise ShapeMismatchError("maps have different source or target")


def _check_compatible(A: Module, B: Module):
    if A.field != B.field:
        raise FieldMismatchError(f"{A.field} vs {B.field}")
    if A.q != B.q:
        raise OrderMismatchError(f"q={A.q} vs q={B.q}")


def identity_hom(M: Module) -> ModuleHom:
    return ModuleHom(M, M, ff.identity(M.dim))


def zero_hom(A: Module, B: Module) -> ModuleHom:
    return ModuleHom(A, B, ff.zeros(B.dim, A.dim))


# -- constructors --------------------------------------------------------


def shift_block(i: int) -> np.ndarray:
    """Lower-shift Jordan block: T e_a = e_{a+1}, T e_{i-1} = 0."""
    return np.eye(i, k=-1, dtype=np.int64)


def mod_indec(field: FieldSpec, q: int, i: int) -> Module:
    """The indecomposable [i] = k[t]/t^i."""
    if not 1 <= i <= q:
        raise OutOfRangeError(f"block size {i} not in [1, {q}]")
    return Module(field, q, shift_block(i))


def unit_module(field: FieldSpec, q: int) -> Module:
    return Module(field, q, ff.zeros(1, 1))


def zero_module(field: FieldSpec, q: int) -> Module:
    return Module(field, q, ff.zeros(0, 0))


def trivial_module(field: FieldSpec, q: int, d: int) -> Module:
    return Module(field, q, ff.zeros(d, d))


def cyclic_permutation(r: int) -> np.ndarray:
    """Permutation matrix of x -> x+1 on Z/r (coset basis of G/H)."""
    P = np.zeros((r, r), dtype=np.int64)
    for x in range(r):
        P[(x + 1) % r, x] = 1
    return P


def mod_perm(field: FieldSpec, q: int, subgroup_order: int) -> Module:
    """Permutation module k(G/H) for the subgroup H of the given order."""
    n = _exponent(field.p, q)
    try:
        m = _exponent(field.p, subgroup_order)
    except InputError:
        raise OutOfRangeError(f"{subgroup_order} is not a power of {field.p}") from None
    if m > n:
        raise OutOfRangeError(f"subgroup order {subgroup_order} exceeds {q}")
    r = q // subgroup_order
    T = field.sub(cyclic_permutation(r), ff.identity(r))
    M = Module(field, q, T)
    assert mod_decompose(M) == (r,)
    return M


def mod_direct_sum(*mods: Module) -> Module:
    if not mods:
        raise InputError("direct sum of no modules needs field and q; use zero_module")
    for M in mods[1:]:
        _check_compatible(mods[0], M)
    d = sum(M.dim for M in mods)
    T = ff.zeros(d, d)
    off = 0
    for M in mods:
        T[off : off + M.dim, off : off + M.dim] = M.t
        off += M.dim
    return Module(mods[0].field, mods[0].q, T)


def module_from_blocks(field: FieldSpec, q: int, blocks: Iterable[int]) -> Module:
    blocks = list(blocks)
    if not blocks:
        return zero_module(field, q)
    return mod_direct_sum(*(mod_indec(field, q, i) for i in blocks))


@lru_cache(maxsize=4096)
def mod_tensor(A: Module, B: Module) -> Module:
    """A (x) B with T = T_A(x)I + I(x)T_B + T_A(x)T_B, since g acts diagonally."""
    _check_compatible(A, B)
    F = A.field
    Ia, Ib = ff.identity(A.dim), ff.identity(B.dim)
    T = F.add(F.add(ff.mat_kron(F, A.t, Ib), ff.mat_kron(F, Ia, B.t)), ff.mat_kron(F, A.t, B.t))
    return Module(F, A.q, T)


def tensor_power(A: Module, k: int) -> Module:
    out = unit_module(A.field, A.q)
    for _ in range(k):
        out = mod_tensor(out, A)
    return out


def swap_matrix(da: int, db: int) -> np.ndarray:
    """Permutation A (x) B -> B (x) A, e_a (x) e_b -> e_b (x) e_a."""
    S = np.zeros((da * db, da * db), dtype=np.int64)
    for a in range(da):
        for b in range(db):
            S[b * da + a, a * db + b] = 1
    return S


def tensor_formula_cp(p: int, i: int, j: int) -> Decomposition:
    """Projective-free part of [i] (x) [j] over C_p from the closed formula."""
    if not (1 <= i <= p - 1 and 1 <= j <= p - 1):
        raise OutOfRangeError(f"formula covers 1 <= i, j <= {p - 1}; got ({i}, {j})")
    if i > j:
        i, j = j, i
    top = j + i - 1 if i + j <= p else 2 * p - i - j - 1
    return tuple(range(j - i + 1, top + 1, 2))


def rank_sequence(A: Module) -> list[int]:
    """[rank(T^0), rank(T^1), ...] up to the first zero; raises if T^q != 0."""
    F = A.field
    ranks = [A.dim]
    if A.dim == 0:
        return ranks
    P = A.t
    for _ in range(A.q):
        r = ff.mat_rank(F, P)
        ranks.append(r)
        if r == 0:
            return ranks
        P = F.matmul(P, A.t)
    raise NotNilpotentError(f"T^{A.q} != 0")


@lru_cache(maxsize=4096)
def mod_decompose(A: Module) -> Decomposition:
    """Jordan block multiset from the rank sequence r_i = rank(T^i).

    Multiplicity of [i] is r_{i-1} - 2 r_i + r_{i+1}.
    """
    r = rank_sequence(A) + [0, 0]
    blocks = []
    for i in range(1, len(r) - 1):
        blocks += [i] * (r[i - 1] - 2 * r[i] + r[i + 1])
    assert sum(blocks) == A.dim
    return tuple(blocks)


@lru_cache(maxsize=1024)
def mod_dual(A: Module) -> Module:
    """Contragredient: g acts by inverse transpose, T* = sum_{k>=1} (-T^t)^k."""
    F = A.field
    X = F.neg(A.t.T)
    total = ff.zeros(A.dim, A.dim)
    P = X
    while np.any(P):
        total = F.add(total, P)
        P = F.matmul(P, X)
    return Module(F, A.q, total)


@lru_cache(maxsize=4096)
def _hom_basis_array(A: Module, B: Module) -> np.ndarray:
    F = A.field
    da, db = A.dim, B.dim
    if da == 0 or db == 0:
        return np.zeros((0, db, da), dtype=np.int64)
    # row-major vec(F): vec(F T_A) = (I (x) T_A^t) vec F, vec(T_B F) = (T_B (x) I) vec F
    system = F.sub(ff.mat_kron(F, ff.identity(db), A.t.T), ff.mat_kron(F, B.t, ff.identity(da)))
    N = ff.mat_nullspace(F, system)
    out = N.T.reshape(-1, db, da).copy()
    out.flags.writeable = False
    return out


def hom_basis(A: Module, B: Module) -> list[ModuleHom]:
    """Basis of Hom_kG(A, B), the solutions of F T_A = T_B F."""
    _check_compatible(A, B)
    return [ModuleHom(A, B, M) for M in _hom_basis_array(A, B)]


def hom_dim(A: Module, B: Module) -> int:
    _check_compatible(A, B)
    return _hom_basis_array(A, B).shape[0]


def hom_dim_formula(blocks_a: Sequence[int], blocks_b: Sequence[int]) -> int:
    return sum(min(i, j) for i in blocks_a for j in blocks_b)


def unit_counit(M: Module) -> tuple[ModuleHom, ModuleHom]:
    """eta: [1] -> M^v (x) M (1 -> identity) and eps: M (x) M^v -> [1] (swap, trace)."""
    d = M.dim
    one = unit_module(M.field, M.q)
    Md = mod_dual(M)
    eta = ff.zeros(d * d, 1)
    eps = ff.zeros(1, d * d)
    for a in range(d):
        eta[a * d + a, 0] = 1
        eps[0, a * d + a] = 1
    return ModuleHom(one, mod_tensor(Md, M), eta), ModuleHom(mod_tensor(M, Md), one, eps)


def trace_map(M: Module) -> ModuleHom:
    """tr: M^v (x) M -> [1]."""
    d = M.dim
    tr = ff.zeros(1, d * d)
    for a in range(d):
        tr[0, a * d + a] = 1
    return ModuleHom(mod_tensor(mod_dual(M), M), unit_module(M.field, M.q), tr)


def mod_restrict(A: Module, m: int) -> Module:
    """Restriction to the subgroup of order p^m: t' = t^(p^(n-m))."""
    n = A.n
    if not 0 <= m <= n:
        raise OutOfRangeError(f"m={m} not in [0, {n}]")
    T = ff.mat_pow(A.field, A.t, A.p ** (n - m))
    return Module(A.field, A.p**m, T)


def mod_induce(A: Module, n: int) -> Module:
    """kG (x)_kH A on the basis g^a (x) e_b, a < p^(n-m); index a * dim + b."""
    m = A.n
    if not m <= n:
        raise OutOfRangeError(f"cannot induce from p^{m} to p^{n}")
    F = A.field
    r = A.p ** (n - m)
    d = A.dim
    G = ff.zeros(r * d, r * d)
    for a in range(r - 1):
        G[(a + 1) * d : (a + 2) * d, a * d : (a + 1) * d] = ff.identity(d)
    # g * (g^(r-1) (x) v) = 1 (x) h v, with h = I + T_A
    G[0:d, (r - 1) * d : r * d] = A.g
    T = F.sub(G, ff.identity(r * d))
    return Module(F, A.p**n, T)


def sympow_basis(d: int, m: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(d), m))


def mod_sympow(A: Module, m: int) -> Module:
    """Symmetric power S^m(A) on the monomial basis.

    g acts multiplicatively on monomials; T_sym = g_sym - I.
    """
    if m < 0:
        raise OutOfRangeError("negative symmetric power")
    F = A.field
    d = A.dim
    basis = sympow_basis(d, m)
    index = {mono: k for k, mono in enumerate(basis)}
    G = A.g
    columns = [[(b, int(G[b, a])) for b in range(d) if G[b, a]] for a in range(d)]
    memo: dict[tuple[int, ...], dict] = {(): {(): 1}}

    def image(mono):
        if mono in memo:
            return memo[mono]
        rest = image(mono[1:])
        out: dict = {}
        for sub, c in rest.items():
            for b, gb in columns[mono[0]]:
                key = tuple(sorted(sub + (b,)))
                out[key] = int(F.add(out.get(key, 0), F.mul(c, gb)))
        out = {k: v for k, v in out.items() if v}
        memo[mono] = out
        return out

    N = len(basis)
    Gs = ff.zeros(N, N)
    for col, mono in enumerate(basis):
        for key, c in image(mono).items():
            Gs[index[key], col] = c
    return Module(F, A.q, F.sub(Gs, ff.identity(N)))


def sym_idempotent_image(i: int, p: int, max_dim: int = 1024) -> Decomposition:
    """Decomposition of e * [i]^(x)(p-1), e = -sum of all factor permutations.

    Built over GF(p) with q = p, and cross-checked against mod_sympow.
    """
    if not 1 <= i <= p:
        raise OutOfRangeError(f"i={i} not in [1, {p}]")
    k = p - 1
    N = i**k
    if N > max_dim:
        raise BudgetExceededError(f"tensor dimension {N} exceeds cap {max_dim}")
    F = ff.GF(p)
    M = tensor_power(mod_indec(F, p, i), k)
    idx = np.array(list(itertools.product(range(i), repeat=k)), dtype=np.int64).reshape(N, k)
    weights = i ** np.arange(k - 1, -1, -1, dtype=np.int64)
    E = np.zeros((N, N), dtype=np.int64)
    cols = np.arange(N)
    for perm in itertools.permutations(range(k)):
        np.add.at(E, (idx[:, list(perm)] @ weights, cols), 1)
    E = F.neg(E % p)
    if not np.array_equal(F.matmul(E, E), E):
        raise CriteriaDisagreeError("symmetrizer is not idempotent")
    basis = ff.row_basis(F, E.T).T  # columns span image(e)
    sol = ff.mat_solve(F, basis, F.matmul(M.t, basis))
    assert sol.feasible
    image = Module(F, p, sol.particular)
    dec = mod_decompose(image)
    expected = mod_decompose(mod_sympow(mod_indec(F, p, i), k))
    if dec != expected:
        raise CriteriaDisagreeError(f"e-image {dec} != symmetric power {expected}")
    return dec


def mod_extend(A: Module, E: FieldSpec) -> Module:
    """Base change of a module over GF(p) to an extension field E."""
    if A.field == E:
        return A
    if A.field.m != 1 or A.field.p != E.p:
        raise FieldMismatchError(f"{E} does not extend {A.field}")
    # prime-field codes are the constant codes of E
    return Module(E, A.q, A.t)


def decomposition_to_json(dec: Sequence[int]) -> list[int]:
    return sorted(int(b) for b in dec)


def multiset(dec: Sequence[int]) -> Counter:
    return Counter(dec)


def binomial_dim(d: int, m: int) -> int:
    return math.comb(d + m - 1, m)
