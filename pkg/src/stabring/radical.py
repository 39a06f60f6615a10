"""Kelly radical, tensor-faithfulness and the tensor-closure ideal.

Membership is decided blockwise: conjugate a map into Jordan bases of its
source and target, then inspect each component between blocks.  An ideal of
morphisms in a Krull-Schmidt category is determined by these components.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import ffield as ff
from .errors import BudgetExceededError, CriteriaDisagreeError, InputError
from .modrep import (
    Module,
    ModuleHom,
    identity_hom,
    mod_decompose,
    mod_dual,
    mod_indec,
    mod_tensor,
    unit_counit,
)

MODULE, STABLE = "module", "stable"


@dataclass(frozen=True, eq=False)
class JordanBasis:
    """P with P^-1 T P block diagonal of lower-shift blocks.

    ``sizes[k]`` is the k-th block, occupying columns offsets[k] .. + sizes[k].
    """

    module: Module
    change_of_basis: np.ndarray
    inverse: np.ndarray
    sizes: tuple[int, ...]
    offsets: tuple[int, ...]

    def blocks(self):
        return zip(self.sizes, self.offsets)


def _first_nonzero(v: np.ndarray) -> int:
    nz = np.flatnonzero(v)
    return int(nz[0]) if nz.size else len(v)


@lru_cache(maxsize=1024)
def jordan_basis(A: Module) -> JordanBasis:
    """Jordan chains v, Tv, ..., T^(s-1) v for each block, deterministically.

    For each size s (largest first) the chain generators are a greedy
    complement of ker T^(s-1) + T(ker T^(s+1)) inside ker T^s, taken from the
    RREF nullspace basis; blocks are ordered by the leading index of their
    generator.
    """
    F = A.field
    d = A.dim
    dec = mod_decompose(A)  # raises NotNilpotentError
    if d == 0:
        return JordanBasis(A, ff.zeros(0, 0), ff.zeros(0, 0), (), ())
    top = max(dec)
    powers = [ff.identity(d)]
    for _ in range(top + 1):
        powers.append(F.matmul(powers[-1], A.t))
    kernels = [ff.mat_nullspace(F, P).T for P in powers]  # rows span ker T^s
    chains: list[tuple[int, np.ndarray]] = []
    for s in range(top, 0, -1):
        if dec.count(s) == 0:
            continue
        below = kernels[s - 1]
        above = F.matmul(A.t, kernels[s + 1].T).T if kernels[s + 1].shape[0] else np.zeros((0, d), np.int64)
        # generators already chosen also lie in ker T^s via T^k of longer chains
        existing = [F.matmul(powers[len_ - s], gen.reshape(-1, 1)).reshape(-1)
                    for len_, gen in chains if len_ > s]
        base = np.vstack([below, above] + ([np.array(existing)] if existing else []))
        picked = ff.extend_to_complement(F, base, kernels[s])
        if len(picked) != dec.count(s):
            raise CriteriaDisagreeError(f"found {len(picked)} chains of length {s}, expected {dec.count(s)}")
        for idx in picked:
            chains.append((s, kernels[s][idx]))
    chains.sort(key=lambda c: (_first_nonzero(c[1]), -c[0]))
    cols, sizes, offsets = [], [], []
    off = 0
    for s, gen in chains:
        v = gen.reshape(-1, 1)
        for _ in range(s):
            cols.append(v)
            v = F.matmul(A.t, v)
        sizes.append(s)
        offsets.append(off)
        off += s
    P = np.hstack(cols)
    Pinv = ff.mat_inverse(F, P)
    P.flags.writeable = False
    Pinv.flags.writeable = False
    return JordanBasis(A, P, Pinv, tuple(sizes), tuple(offsets))


def jordan_form(J: JordanBasis) -> np.ndarray:
    F = J.module.field
    return ff.mat_mul(F, J.inverse, J.module.t, J.change_of_basis)


def block_components(f: ModuleHom):
    """Yield (i, j, component) for every source block [i] and target block [j]."""
    Js, Jt = jordan_basis(f.source), jordan_basis(f.target)
    F = f.field
    M = ff.mat_mul(F, Jt.inverse, f.matrix, Js.change_of_basis)
    for i, oi in Js.blocks():
        for j, oj in Jt.blocks():
            yield i, j, M[oj : oj + j, oi : oi + i]


def _component_invertible(C: np.ndarray) -> bool:
    # an endomorphism of [s] in the shift basis is a polynomial in t:
    # invertible iff its constant term (the diagonal) is nonzero
    return bool(C[0, 0])


def is_tensor_faithful_block(i: int, q: int, p: int) -> bool:
    return i < q and i % p != 0


def _report(f: ModuleHom, mode: str, allow_invertible) -> dict:
    if mode not in (MODULE, STABLE):
        raise InputError(f"unknown mode {mode!r}")
    q, p = f.source.q, f.source.p
    F = f.field
    rows = []
    member = True
    for i, j, C in block_components(f):
        rank = ff.mat_rank(F, C)
        if mode == STABLE and (i == q or j == q):
            verdict = "discarded"
        elif i != j:
            verdict = "radical"
        elif _component_invertible(C) and not allow_invertible(i, q, p):
            verdict = "absorbed"
        elif _component_invertible(C):
            verdict = "invertible"
            member = False
        else:
            verdict = "radical"
        rows.append([i, j, rank, verdict])
    return {"member": member, "blocks": rows}


def radical_report(f: ModuleHom, mode: str = MODULE) -> dict:
    return _report(f, mode, lambda i, q, p: True)


def rad_member(f: ModuleHom, mode: str = MODULE) -> bool:
    """f in the Kelly radical: no component between equal blocks is invertible."""
    return radical_report(f, mode)["member"]


def ihat_report(f: ModuleHom, mode: str = MODULE) -> dict:
    return _report(f, mode, is_tensor_faithful_block)


def ihat_member(f: ModuleHom, mode: str = MODULE) -> bool:
    """f in the tensor-closure of the radical.

    Invertible components are only forbidden between equal, tensor-faithful
    blocks.
    """
    return ihat_report(f, mode)["member"]


def rad_member_definitional(f: ModuleHom, homs_back: list[ModuleHom]) -> bool:
    """Oracle: f in Rad iff 1 - g f is invertible for every g in span(homs_back).

    Enumerates the whole span, so only usable on tiny Hom spaces.
    """
    F = f.field
    d = f.source.dim
    I = ff.identity(d)
    mats = [g.matrix for g in homs_back]
    for coeffs in ff.iter_vectors(F, len(mats)):
        if mats:
            g = ff.lin_comb(F, coeffs, mats)
        else:
            g = ff.zeros(d, f.target.dim)
        if not ff.is_invertible(F, F.sub(I, F.matmul(g, f.matrix))):
            return False
    return True


def tensor_faithful(A: Module, mode: str = STABLE) -> bool:
    """Whether A (x) - is faithful on the stable category, decided two ways.

    (1) [1] is a summand of A^v (x) A; (2) A has a non-projective block of
    size prime to p.  The two must agree.
    """
    if mode not in (MODULE, STABLE):
        raise InputError(f"unknown mode {mode!r}")
    via_dual = 1 in mod_decompose(mod_tensor(mod_dual(A), A))
    via_dim = any(is_tensor_faithful_block(b, A.q, A.p) for b in mod_decompose(A))
    if via_dual != via_dim:
        raise CriteriaDisagreeError(f"dual criterion {via_dual} != dimension criterion {via_dim}")
    return via_dim


def alpha(field, q: int, i: int) -> ModuleHom:
    """[i] -> [i+1], multiplication by t."""
    M = np.zeros((i + 1, i), dtype=np.int64)
    for a in range(i):
        M[a + 1, a] = 1
    return ModuleHom(mod_indec(field, q, i), mod_indec(field, q, i + 1), M)


def beta(field, q: int, i: int) -> ModuleHom:
    """[i] -> [i-1], the projection."""
    M = np.zeros((i - 1, i), dtype=np.int64)
    for a in range(i - 1):
        M[a, a] = 1
    return ModuleHom(mod_indec(field, q, i), mod_indec(field, q, i - 1), M)


def radical_generators(field, q: int) -> list[ModuleHom]:
    gens = [alpha(field, q, i) for i in range(1, q)]
    gens += [beta(field, q, i) for i in range(2, q + 1)]
    return gens


@dataclass(frozen=True, eq=False)
class RadicalWitness:
    """f in Rad with f (x) 1_X not in Rad (stable category)."""

    f: ModuleHom
    X: Module
    note: str

    def to_json(self) -> dict:
        return {
            "f_source": list(mod_decompose(self.f.source)),
            "f_target": list(mod_decompose(self.f.target)),
            "X": list(mod_decompose(self.X)),
            "note": self.note,
        }


def rad_tensor_witness(field, q: int, max_q: int = 9):
    """Search for f in Rad and X with f (x) 1_X outside Rad in the stable category.

    For q = p^n with n >= 2 returns eta_[p] : [1] -> [p]^v (x) [p] with X = [p];
    for n = 1 checks every generator alpha_i, beta_i against every [j], j < p,
    and returns None when none escapes the radical.
    """
    if q > max_q:
        raise BudgetExceededError(f"q={q} exceeds cap {max_q}")
    p = field.p
    one = mod_indec(field, q, 1)
    n = one.n
    if n >= 2:
        M = mod_indec(field, q, p)
        eta, eps = unit_counit(M)
        f_x = eta.tensor(identity_hom(M))
        ok_f = rad_member(eta, STABLE)
        ok_fx = not rad_member(f_x, STABLE)
        # 1_M = (eps (x) M)(M (x) eta) exhibits 1_M in the tensor ideal generated by eta
        triangle = eps.tensor(identity_hom(M)) @ identity_hom(M).tensor(eta)
        ok_tri = np.array_equal(triangle.matrix, ff.identity(M.dim))
        if not (ok_f and ok_fx and ok_tri):
            raise CriteriaDisagreeError(
                f"witness check failed: eta in Rad={ok_f}, eta(x)X outside Rad={ok_fx}, triangle={ok_tri}"
            )
        return RadicalWitness(eta, M, f"eta_[{p}] (x) 1_[{p}] is not radical")
    for f in radical_generators(field, q):
        for j in range(1, p):
            X = mod_indec(field, q, j)
            if not rad_member(f.tensor(identity_hom(X)), STABLE):
                return RadicalWitness(f, X, "generator tensor escapes the radical")
    return None


def projective_free_compression(f: ModuleHom) -> np.ndarray:
    """Component matrix of f between the non-projective blocks (Jordan bases)."""
    Js, Jt = jordan_basis(f.source), jordan_basis(f.target)
    q = f.source.q
    F = f.field
    M = ff.mat_mul(F, Jt.inverse, f.matrix, Js.change_of_basis)
    src = [o + k for s, o in Js.blocks() if s != q for k in range(s)]
    tgt = [o + k for s, o in Jt.blocks() if s != q for k in range(s)]
    return M[np.ix_(tgt, src)]


def stable_invertible(f: ModuleHom) -> bool:
    """f is an isomorphism in the stable category."""
    C = projective_free_compression(f)
    return ff.is_invertible(f.field, C)
