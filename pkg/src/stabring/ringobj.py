"""Ring-objects (A, mu, u) in kG-mod and kG-stab.

mu is a (dim x dim^2) matrix on the tensor basis, u a (dim x 1) column.  In
stable mode every axiom is an identity modulo maps factoring through a
projective.  Separability is a linear system in sigma, so it is decided by
one rank computation.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from . import ffield as ff
from .errors import (
    BudgetExceededError,
    CriteriaDisagreeError,
    InputError,
    InvalidAlgebraError,
    ModeMismatchError,
    PrecheckFailedError,
)
from .ffield import FieldSpec
from .modrep import (
    Module,
    ModuleHom,
    _check_compatible,
    _hom_basis_array,
    hom_dim_formula,
    mod_decompose,
    mod_direct_sum,
    mod_extend,
    mod_perm,
    mod_tensor,
    swap_matrix,
    trivial_module,
    unit_module,
    zero_module,
)
from .radical import jordan_basis
from .stable import HomQuotient, _phom_array, is_projective, projective_free_part

MODULE, STABLE = "module", "stable"
MODES = (MODULE, STABLE)
DEFAULT_BUDGET = 2**24


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise InputError(f"mode must be 'module' or 'stable', got {mode!r}")
    return mode


@lru_cache(maxsize=4096)
def quotient(A: Module, B: Module) -> HomQuotient:
    return HomQuotient(A, B)


def _tensor3(A: Module) -> Module:
    # (A (x) A) (x) A and A (x) (A (x) A) have the same matrix, so one object serves both
    return mod_tensor(mod_tensor(A, A), A)


def _congruent(F: FieldSpec, X: np.ndarray, Y: np.ndarray, src: Module, tgt: Module, mode: str) -> bool:
    diff = F.sub(X, Y)
    if not np.any(diff):
        return True
    if mode == MODULE:
        return False
    if is_projective(src) or is_projective(tgt):
        return True
    return quotient(src, tgt).in_phom(diff)


def _kron_left_id(d: int, Hs: np.ndarray) -> np.ndarray:
    """Batched kron(I_d, H) for a stack of matrices H."""
    k, m, n = Hs.shape
    return np.einsum("ab,krc->karbc", np.eye(d, dtype=np.int64), Hs).reshape(k, d * m, d * n)


def _kron_right_id(d: int, Hs: np.ndarray) -> np.ndarray:
    """Batched kron(H, I_d)."""
    k, m, n = Hs.shape
    return np.einsum("krc,ab->kracb", Hs, np.eye(d, dtype=np.int64)).reshape(k, m * d, n * d)


def _left_batch(F: FieldSpec, M: np.ndarray, Hs: np.ndarray) -> np.ndarray:
    """M @ H for every H in the stack."""
    k, m, c = Hs.shape
    if k == 0:
        return np.zeros((0, M.shape[0], c), dtype=np.int64)
    out = F.matmul(M, Hs.transpose(1, 0, 2).reshape(m, k * c))
    return out.reshape(M.shape[0], k, c).transpose(1, 0, 2)


def _right_batch(F: FieldSpec, Hs: np.ndarray, M: np.ndarray) -> np.ndarray:
    """H @ M for every H in the stack."""
    k, r, m = Hs.shape
    if k == 0:
        return np.zeros((0, r, M.shape[1]), dtype=np.int64)
    return F.matmul(Hs.reshape(k * r, m), M).reshape(k, r, M.shape[1])


@dataclass(frozen=True, eq=False)
class RingObject:
    module: Module
    mu: ModuleHom
    unit: ModuleHom
    mode: str = MODULE

    def __post_init__(self):
        check_mode(self.mode)
        A = self.module
        if self.mu.matrix.shape != (A.dim, A.dim * A.dim):
            raise InputError(f"mu must be {A.dim} x {A.dim ** 2}")
        if self.unit.matrix.shape != (A.dim, 1):
            raise InputError(f"unit must be a {A.dim}-vector")

    @property
    def field(self) -> FieldSpec:
        return self.module.field

    @property
    def q(self) -> int:
        return self.module.q

    @property
    def dim(self) -> int:
        return self.module.dim

    def with_mode(self, mode: str) -> "RingObject":
        return RingObject(self.module, self.mu, self.unit, check_mode(mode))

    def to_json(self) -> dict:
        F = self.field
        return {
            "module": self.module.to_json(),
            "mu": [ff.scalar_to_json(F, c) for c in self.mu.matrix.reshape(-1)],
            "unit": [ff.scalar_to_json(F, c) for c in self.unit.matrix.reshape(-1)],
            "mode": self.mode,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RingObject":
        A = Module.from_json(data["module"])
        F = A.field
        d = A.dim
        mu = [ff.scalar_from_json(F, v) for v in data["mu"]]
        u = [ff.scalar_from_json(F, v) for v in data["unit"]]
        if len(mu) != d * d * d or len(u) != d:
            raise InputError("mu or unit has the wrong number of entries")
        return make_ring(A, np.array(mu, dtype=np.int64).reshape(d, d * d),
                         np.array(u, dtype=np.int64).reshape(d, 1), data.get("mode", MODULE))


def make_ring(A: Module, mu, unit, mode: str = MODULE) -> RingObject:
    d = A.dim
    mu = np.asarray(mu, dtype=np.int64).reshape(d, d * d)
    unit = np.asarray(unit, dtype=np.int64).reshape(d, 1)
    return RingObject(A, ModuleHom(mod_tensor(A, A), A, mu), ModuleHom(unit_module(A.field, A.q), A, unit), mode)


# -- constructions -------------------------------------------------------


def ring_perm(field: FieldSpec, q: int, subgroup_order: int, mode: str = MODULE) -> RingObject:
    """k(G/H): pointwise product on the coset basis, unit the sum of all cosets."""
    A = mod_perm(field, q, subgroup_order)
    r = A.dim
    mu = ff.zeros(r, r * r)
    for x in range(r):
        mu[x, x * r + x] = 1
    return make_ring(A, mu, np.ones((r, 1), dtype=np.int64), mode)


def diagonal_sigma(R: RingObject) -> np.ndarray:
    """sigma(e_x) = e_x (x) e_x, the canonical section for pointwise products."""
    d = R.dim
    S = ff.zeros(d * d, d)
    for x in range(d):
        S[x * d + x, x] = 1
    return S


def ring_unit(field: FieldSpec, q: int, mode: str = MODULE) -> RingObject:
    """The unit object k = k(G/G)."""
    return ring_perm(field, q, q, mode)


def ring_zero(field: FieldSpec, q: int, mode: str = MODULE) -> RingObject:
    return make_ring(zero_module(field, q), ff.zeros(0, 0), ff.zeros(0, 1), mode)


def ring_trivial(field: FieldSpec, q: int, mu, unit, mode: str = MODULE) -> RingObject:
    """A k-algebra given by structure constants, with trivial group action."""
    unit = np.asarray(unit, dtype=np.int64).reshape(-1)
    d = len(unit)
    mu = np.asarray(mu, dtype=np.int64)
    if mu.size != d * d * d:
        raise InputError(f"structure constants must have {d ** 3} entries")
    R = make_ring(trivial_module(field, q, d), mu.reshape(d, d * d), unit, mode)
    if not _unital_exact(R):
        raise InvalidAlgebraError("unit law fails for the given structure constants")
    return R


def field_extension_ring(field: FieldSpec, q: int, modulus, mode: str = MODULE) -> RingObject:
    """k[x]/(f) on the power basis 1, x, ..., x^(m-1), trivial action.

    ``modulus`` is monic with coefficients listed from the constant term.
    """
    F = field
    f = [F.scalar(c) for c in modulus]
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        raise InputError("modulus must be monic of degree >= 1")

    def reduce(coeffs):
        coeffs = list(coeffs)
        for deg in range(len(coeffs) - 1, m - 1, -1):
            c = coeffs[deg]
            if c:
                for k in range(m + 1):
                    coeffs[deg - m + k] = F.sub(coeffs[deg - m + k], F.mul(c, f[k]))
        return coeffs[:m]

    mu = ff.zeros(m, m * m)
    for a in range(m):
        for b in range(m):
            prod = [0] * (2 * m - 1)
            prod[a + b] = 1
            mu[:, a * m + b] = reduce(prod)
    unit = [1] + [0] * (m - 1)
    return ring_trivial(F, q, mu, unit, mode)


def _check_pair(R1: RingObject, R2: RingObject):
    _check_compatible(R1.module, R2.module)
    if R1.mode != R2.mode:
        raise ModeMismatchError(f"{R1.mode} vs {R2.mode}")


def ring_product(R1: RingObject, R2: RingObject) -> RingObject:
    """R1 x R2 on A1 (+) A2 with componentwise product and unit (u1, u2)."""
    _check_pair(R1, R2)
    d1, d2 = R1.dim, R2.dim
    d = d1 + d2
    mu = ff.zeros(d, d * d)
    m1 = R1.mu.matrix.reshape(d1, d1, d1)
    m2 = R2.mu.matrix.reshape(d2, d2, d2)
    full = mu.reshape(d, d, d)
    full[:d1, :d1, :d1] = m1
    full[d1:, d1:, d1:] = m2
    unit = np.vstack([R1.unit.matrix, R2.unit.matrix])
    return make_ring(mod_direct_sum(R1.module, R2.module), full.reshape(d, d * d), unit, R1.mode)


def ring_product_all(rings, field: FieldSpec, q: int, mode: str = MODULE) -> RingObject:
    out = ring_zero(field, q, mode)
    for R in rings:
        out = ring_product(out, R)
    return out


def product_sigma(R1: RingObject, R2: RingObject, s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
    """sigma1 (+) sigma2 placed inside (A1 (+) A2)^(x)2."""
    d1, d2 = R1.dim, R2.dim
    d = d1 + d2
    S = np.zeros((d, d, d), dtype=np.int64)
    S[:d1, :d1, :d1] = np.asarray(s1).reshape(d1, d1, d1)
    S[d1:, d1:, d1:] = np.asarray(s2).reshape(d2, d2, d2)
    return S.reshape(d * d, d)


def middle_swap(d1: int, d2: int) -> np.ndarray:
    """(A1 (x) A2) (x) (A1 (x) A2) -> (A1 (x) A1) (x) (A2 (x) A2)."""
    n = d1 * d2
    P = np.zeros((n * n, n * n), dtype=np.int64)
    for a1, a2, b1, b2 in itertools.product(range(d1), range(d2), range(d1), range(d2)):
        src = (a1 * d2 + a2) * n + (b1 * d2 + b2)
        dst = (a1 * d1 + b1) * d2 * d2 + (a2 * d2 + b2)
        P[dst, src] = 1
    return P


def ring_tensor(R1: RingObject, R2: RingObject) -> RingObject:
    """A1 (x) A2 with mu = (mu1 (x) mu2)(1 (x) swap (x) 1) and unit u1 (x) u2."""
    _check_pair(R1, R2)
    F = R1.field
    mu = F.matmul(ff.mat_kron(F, R1.mu.matrix, R2.mu.matrix), middle_swap(R1.dim, R2.dim))
    unit = ff.mat_kron(F, R1.unit.matrix, R2.unit.matrix)
    return make_ring(mod_tensor(R1.module, R2.module), mu, unit, R1.mode)


def transport(R: RingObject, phi: ModuleHom) -> RingObject:
    """The ring structure on phi's target making the isomorphism phi multiplicative."""
    F = R.field
    inv = ff.mat_inverse(F, phi.matrix)
    mu = ff.mat_mul(F, phi.matrix, R.mu.matrix, ff.mat_kron(F, inv, inv))
    return make_ring(phi.target, mu, F.matmul(phi.matrix, R.unit.matrix), R.mode)


def ring_extend(R: RingObject, E: FieldSpec) -> RingObject:
    """Base change of a ring over a prime field to the extension E."""
    if not R.field.is_prime_field or E.p != R.field.p:
        raise InputError(f"cannot extend scalars from {R.field} to {E}")
    return make_ring(mod_extend(R.module, E), R.mu.matrix, R.unit.matrix, R.mode)


def stable_reduce(R: RingObject):
    """Transfer R to its projective-free part A' along Jordan inclusion/projection.

    Returns (R', iota, pi); in the stable category iota and pi are mutually
    inverse ring isomorphisms.
    """
    F = R.field
    J = jordan_basis(R.module)
    keep = [o + k for s, o in J.blocks() if s != R.q for k in range(s)]
    iota = J.change_of_basis[:, keep]
    pi = J.inverse[keep, :]
    T = ff.mat_mul(F, pi, R.module.t, iota)
    A = Module(F, R.q, T)
    mu = ff.mat_mul(F, pi, R.mu.matrix, ff.mat_kron(F, iota, iota))
    unit = F.matmul(pi, R.unit.matrix)
    Rr = make_ring(A, mu, unit, STABLE)
    return Rr, ModuleHom(A, R.module, iota), ModuleHom(R.module, A, pi)


# -- axioms --------------------------------------------------------------


@dataclass(frozen=True)
class RingCheck:
    equivariant: bool
    associative: bool
    commutative: bool
    unital: bool

    @property
    def ok(self) -> bool:
        return self.equivariant and self.associative and self.commutative and self.unital

    def to_json(self) -> dict:
        return {
            "equivariant": self.equivariant,
            "associative": self.associative,
            "commutative": self.commutative,
            "unital": self.unital,
        }


def _unital_exact(R: RingObject) -> bool:
    F, d = R.field, R.dim
    I = ff.identity(d)
    left = F.matmul(R.mu.matrix, ff.mat_kron(F, R.unit.matrix, I))
    right = F.matmul(R.mu.matrix, ff.mat_kron(F, I, R.unit.matrix))
    return np.array_equal(left, I) and np.array_equal(right, I)


def _unital(R: RingObject) -> bool:
    F, d, A = R.field, R.dim, R.module
    I = ff.identity(d)
    left = F.matmul(R.mu.matrix, ff.mat_kron(F, R.unit.matrix, I))
    right = F.matmul(R.mu.matrix, ff.mat_kron(F, I, R.unit.matrix))
    return _congruent(F, left, I, A, A, R.mode) and _congruent(F, right, I, A, A, R.mode)


def _associative(R: RingObject) -> bool:
    F, d = R.field, R.dim
    I = ff.identity(d)
    mu = R.mu.matrix
    lhs = F.matmul(mu, ff.mat_kron(F, mu, I))
    rhs = F.matmul(mu, ff.mat_kron(F, I, mu))
    return _congruent(F, lhs, rhs, _tensor3(R.module), R.module, R.mode)


def _commutative(R: RingObject) -> bool:
    F, d = R.field, R.dim
    mu = R.mu.matrix
    swapped = F.matmul(mu, swap_matrix(d, d))
    return _congruent(F, mu, swapped, mod_tensor(R.module, R.module), R.module, R.mode)


def ring_check(R: RingObject) -> RingCheck:
    """Test the ring axioms as matrix identities, or modulo PHom in stable mode."""
    equivariant = R.mu.is_equivariant() and R.unit.is_equivariant()
    return RingCheck(equivariant, _associative(R), _commutative(R), _unital(R))


# -- separability --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SeparabilityCertificate:
    """A section sigma of mu satisfying the bimodule identities.

    ``slack`` holds, in stable mode, the PHom coefficients witnessing each
    congruence (keys unit, left, right); it is empty in module mode.
    """

    sigma: ModuleHom
    mode: str
    slack: dict = dc_field(default_factory=dict)
    solution_dim: int = 0

    def to_json(self) -> dict:
        F = self.sigma.field
        return {
            "sigma": ff.matrix_to_json(F, self.sigma.matrix),
            "mode": self.mode,
            "slack": {k: [ff.scalar_to_json(F, c) for c in v] for k, v in self.slack.items()},
            "solution_dim": self.solution_dim,
        }


@dataclass(frozen=True)
class Infeasible:
    """rank(A) < rank([A | b]) for the separability system: no sigma exists."""

    mode: str
    rank: int
    augmented_rank: int
    unknowns: int

    def to_json(self) -> dict:
        return {
            "separable": False,
            "mode": self.mode,
            "rank": self.rank,
            "augmented_rank": self.augmented_rank,
            "unknowns": self.unknowns,
        }


def _sep_blocks(R: RingObject, Hs: np.ndarray):
    """The three separability expressions, evaluated on each sigma in Hs."""
    F, d = R.field, R.dim
    mu = R.mu.matrix
    I = ff.identity(d)
    e1 = _left_batch(F, mu, Hs)
    hm = _right_batch(F, Hs, mu)
    left = _left_batch(F, ff.mat_kron(F, mu, I), _kron_left_id(d, Hs))
    right = _left_batch(F, ff.mat_kron(F, I, mu), _kron_right_id(d, Hs))
    return e1, F.sub(hm, left), F.sub(hm, right)


def verify_separability(R: RingObject, sigma) -> bool:
    """Check mu sigma = 1 and sigma mu = (mu (x) 1)(1 (x) sigma) = (1 (x) mu)(sigma (x) 1)."""
    F, d, A = R.field, R.dim, R.module
    S = np.asarray(sigma, dtype=np.int64).reshape(1, d * d, d)
    if not ModuleHom(A, mod_tensor(A, A), S[0]).is_equivariant():
        return False
    e1, e2, e3 = (x[0] for x in _sep_blocks(R, S))
    AA = mod_tensor(A, A)
    zero = ff.zeros(d * d, d * d)
    return (
        _congruent(F, e1, ff.identity(d), A, A, R.mode)
        and _congruent(F, e2, zero, AA, AA, R.mode)
        and _congruent(F, e3, zero, AA, AA, R.mode)
    )


def sep_solve(R: RingObject):
    """Solve for sigma in Hom(A, A (x) A); returns a certificate or Infeasible.

    In stable mode each equation gets its own PHom basis as slack unknowns.
    """
    check = ring_check(R)
    if not (check.equivariant and check.unital):
        raise PrecheckFailedError(f"ring_check failed: {check.to_json()}")
    F, d, A = R.field, R.dim, R.module
    AA = mod_tensor(A, A)
    if R.mode == STABLE and is_projective(A):
        return _zero_object_certificate(R)
    Hs = _hom_basis_array(A, AA)
    k = Hs.shape[0]
    e1, e2, e3 = _sep_blocks(R, Hs)
    n1, n2 = d * d, d**4
    cols = np.hstack([e1.reshape(k, n1), e2.reshape(k, n2), e3.reshape(k, n2)]).T
    blocks = [cols]
    names = []
    if R.mode == STABLE:
        p1 = _phom_array(A, A).reshape(-1, n1)
        p2 = _phom_array(AA, AA).reshape(-1, n2)
        z1, z2 = np.zeros((n1, p2.shape[0]), np.int64), np.zeros((n2, p1.shape[0]), np.int64)
        zz = np.zeros((n2, p2.shape[0]), np.int64)
        blocks.append(np.vstack([p1.T, z2, z2]))
        blocks.append(np.vstack([z1, p2.T, zz]))
        blocks.append(np.vstack([z1, zz, p2.T]))
        names = [("unit", p1.shape[0]), ("left", p2.shape[0]), ("right", p2.shape[0])]
    system = np.hstack(blocks)
    rhs = np.concatenate([ff.identity(d).reshape(-1), np.zeros(2 * n2, np.int64)])
    sol = ff.mat_solve(F, system, rhs)
    if not sol.feasible:
        return Infeasible(R.mode, sol.rank, sol.augmented_rank, system.shape[1])
    x = sol.particular.reshape(-1)
    sigma = ff.lin_comb(F, x[:k], list(Hs), shape=(d * d, d)) if k else ff.zeros(d * d, d)
    slack = {}
    off = k
    for name, n in names:
        slack[name] = [int(c) for c in x[off : off + n]]
        off += n
    if not verify_separability(R, sigma):
        raise CriteriaDisagreeError("solver returned a sigma that does not verify")
    return SeparabilityCertificate(ModuleHom(A, AA, sigma), R.mode, slack, sol.nullspace.shape[1])


def _zero_object_certificate(R: RingObject) -> SeparabilityCertificate:
    """Projective A is zero in the stable category: sigma = 0 works.

    The unit equation needs 1_A written in the PHom(A, A) basis; the other two
    hold exactly, so their slack is zero.  Any sigma would do, hence the
    solution dimension is dim Hom(A, A (x) A).
    """
    F, d, A = R.field, R.dim, R.module
    p1 = _phom_array(A, A).reshape(-1, d * d)
    sol = ff.mat_solve(F, p1.T, ff.identity(d).reshape(-1))
    if not sol.feasible:
        raise CriteriaDisagreeError("identity of a projective does not lie in PHom")
    dec, dec2 = mod_decompose(A), mod_decompose(mod_tensor(A, A))
    n2 = hom_dim_formula(dec2, dec2)
    slack = {"unit": [int(c) for c in sol.particular.reshape(-1)], "left": [0] * n2, "right": [0] * n2}
    sigma = ModuleHom(A, mod_tensor(A, A), ff.zeros(d * d, d))
    return SeparabilityCertificate(sigma, STABLE, slack, hom_dim_formula(dec, dec2))


def is_separable(R: RingObject) -> bool:
    return isinstance(sep_solve(R), SeparabilityCertificate)


def sep_exhaustive(R: RingObject, budget: int = DEFAULT_BUDGET) -> bool:
    """Oracle: try every sigma in Hom(A, A (x) A)."""
    F, d, A = R.field, R.dim, R.module
    Hs = _hom_basis_array(A, mod_tensor(A, A))
    k = Hs.shape[0]
    if F.order**k > budget:
        raise BudgetExceededError(f"{F.order}^{k} sigma candidates exceed {budget}")
    for coeffs in ff.iter_vectors(F, k):
        S = ff.lin_comb(F, coeffs, list(Hs), shape=(d * d, d)) if k else ff.zeros(d * d, d)
        if verify_separability(R, S):
            return True
    return False


# -- enumeration helpers -------------------------------------------------


def _affine_points(F: FieldSpec, base: np.ndarray, directions: np.ndarray):
    """base + sum t_i directions_i for t in lexicographic order."""
    for t in ff.iter_vectors(F, directions.shape[0]):
        if directions.shape[0]:
            yield t, F.add(base, ff.lin_comb(F, t, list(directions)))
        else:
            yield t, base


def first_hit(F: FieldSpec, k: int, test, jobs: int = 1):
    """Lexicographically least t in F^k with test(t) not None, and its value.

    With jobs > 1 the range is split into contiguous chunks scanned in
    parallel; the least hit across chunks is returned, so the answer does not
    depend on the worker count.
    """
    total = F.order**k
    if jobs <= 1 or total < 2 * jobs:
        for t in ff.iter_vectors(F, k):
            hit = test(t)
            if hit is not None:
                return t, hit
        return None
    step = -(-total // jobs)

    def scan(lo):
        for t in itertools.islice(ff.iter_vectors(F, k), lo, min(lo + step, total)):
            hit = test(t)
            if hit is not None:
                return t, hit
        return None

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(scan, range(0, total, step)))
    for res in results:
        if res is not None:
            return res
    return None


def _coset_space(A: Module, B: Module, mode: str) -> np.ndarray:
    """Basis of Hom(A, B) (module) or of a complement of PHom (stable), as flat rows."""
    if mode == MODULE:
        return _hom_basis_array(A, B).reshape(-1, A.dim * B.dim)
    return quotient(A, B).complement


# -- isomorphism ---------------------------------------------------------


def ring_iso_search(R1: RingObject, R2: RingObject, budget: int = DEFAULT_BUDGET, jobs: int = 1):
    """Lexicographically first ring isomorphism R1 -> R2, or None.

    Candidates are equivariant phi (coset representatives in stable mode)
    already satisfying phi u1 = u2; each is tested for invertibility and
    phi mu1 = mu2 (phi (x) phi).
    """
    _check_pair(R1, R2)
    F, mode = R1.field, R1.mode
    A1, A2 = R1.module, R2.module
    if mode == MODULE and mod_decompose(A1) != mod_decompose(A2):
        return None
    if mode == STABLE and projective_free_part(A1) != projective_free_part(A2):
        return None
    d1, d2 = A1.dim, A2.dim
    basis = _coset_space(A1, A2, mode)
    k = basis.shape[0]
    # phi u1 = u2 (+ PHom([1], A2) slack) is linear in the coefficients
    cols = [F.matmul(b.reshape(d2, d1), R1.unit.matrix).reshape(-1) for b in basis]
    system = np.array(cols, dtype=np.int64).T.reshape(d2, k)
    if mode == STABLE:
        slack = _phom_array(unit_module(F, R1.q), A2).reshape(-1, d2)
        system = np.hstack([system, slack.T])
    sol = ff.mat_solve(F, system, R2.unit.matrix.reshape(-1))
    if not sol.feasible:
        return None
    base = sol.particular.reshape(-1)[:k]
    dirs = ff.row_basis(F, sol.nullspace[:k].T) if sol.nullspace.shape[1] else np.zeros((0, k), np.int64)
    r = dirs.shape[0]
    if F.order**r > budget:
        raise BudgetExceededError(f"{F.order}^{r} isomorphism candidates exceed {budget}")

    if mode == STABLE:
        J1, J2 = jordan_basis(A1), jordan_basis(A2)
        src = [o + i for s, o in J1.blocks() if s != R1.q for i in range(s)]
        tgt = [o + i for s, o in J2.blocks() if s != R1.q for i in range(s)]
        left, right = J2.inverse[tgt, :], J1.change_of_basis[:, src]
        mult_q = quotient(mod_tensor(A1, A1), A2)

    def test(t):
        c = F.add(base, ff.lin_comb(F, t, list(dirs))) if r else base
        phi = ff.lin_comb(F, c, list(basis), shape=(d2, d1)) if k else ff.zeros(d2, d1)
        if mode == MODULE:
            if not ff.is_invertible(F, phi):
                return None
        elif not ff.is_invertible(F, ff.mat_mul(F, left, phi, right)):
            return None
        lhs = F.matmul(phi, R1.mu.matrix)
        rhs = F.matmul(R2.mu.matrix, ff.mat_kron(F, phi, phi))
        diff = F.sub(lhs, rhs)
        if np.any(diff) and (mode == MODULE or not mult_q.in_phom(diff)):
            return None
        return phi

    hit = first_hit(F, r, test, jobs)
    if hit is None:
        return None
    return ModuleHom(A1, A2, hit[1])


# -- idempotents and ideals ----------------------------------------------


def idempotents(R: RingObject, budget: int = DEFAULT_BUDGET) -> list[np.ndarray]:
    """All e: [1] -> A with mu(e (x) e) = e (one per coset in stable mode)."""
    F = R.field
    one = unit_module(F, R.q)
    basis = _coset_space(one, R.module, R.mode)
    k = basis.shape[0]
    if F.order**k > budget:
        raise BudgetExceededError(f"{F.order}^{k} idempotent candidates exceed {budget}")
    found = []
    for coeffs in ff.iter_vectors(F, k):
        e = ff.lin_comb(F, coeffs, list(basis), shape=(R.dim, 1)) if k else ff.zeros(R.dim, 1)
        sq = F.matmul(R.mu.matrix, ff.mat_kron(F, e, e))
        if _congruent(F, sq, e, one, R.module, R.mode):
            found.append(e)
    return found


def idempotent_count(R: RingObject, budget: int = DEFAULT_BUDGET) -> int:
    return len(idempotents(R, budget))


def _is_ideal(R: RingObject, e: np.ndarray) -> bool:
    F, d = R.field, R.dim
    I = ff.identity(d)
    out = F.sub(I, e)
    for inc in (ff.mat_kron(F, I, e), ff.mat_kron(F, e, I)):
        if np.any(ff.mat_mul(F, out, R.mu.matrix, inc)):
            return False
    return True


def _is_nilpotent_subspace(R: RingObject, W: np.ndarray) -> bool:
    """The subspace spanned by the columns of W has W^m = 0 for some m."""
    F = R.field
    base = W
    cur = W
    for _ in range(R.dim + 1):
        if cur.shape[1] == 0:
            return True
        prod = F.matmul(R.mu.matrix, ff.mat_kron(F, cur, base))
        rows = ff.row_basis(F, prod.T)
        cur = rows.T
    return cur.shape[1] == 0


def nilpotent_ideal_summands(R: RingObject, budget: int = DEFAULT_BUDGET) -> list[np.ndarray]:
    """Equivariant idempotent endomorphisms e whose image is a nonzero nilpotent ideal."""
    if R.mode != MODULE:
        raise ModeMismatchError("ideal-summand search works in module mode")
    F, d, A = R.field, R.dim, R.module
    Hs = _hom_basis_array(A, A)
    k = Hs.shape[0]
    if F.order**k > budget:
        raise BudgetExceededError(f"{F.order}^{k} endomorphisms exceed {budget}")
    out = []
    for coeffs in ff.iter_vectors(F, k):
        if not any(coeffs):
            continue
        e = ff.lin_comb(F, coeffs, list(Hs), shape=(d, d))
        if not np.array_equal(F.matmul(e, e), e) or not _is_ideal(R, e):
            continue
        W = ff.row_basis(F, e.T).T
        if _is_nilpotent_subspace(R, W):
            out.append(e)
    return out


# -- Z/2-graded algebras -------------------------------------------------


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    """Structure constants on V0 (+) V1; basis vectors 0..d0-1 are even."""

    field: FieldSpec
    d0: int
    d1: int
    mu: np.ndarray
    unit: np.ndarray

    @property
    def degrees(self) -> list[int]:
        return [0] * self.d0 + [1] * self.d1

    def to_json(self) -> dict:
        F = self.field
        return {
            "d0": self.d0,
            "d1": self.d1,
            "mu": [ff.scalar_to_json(F, c) for c in self.mu.reshape(-1)],
            "unit": [ff.scalar_to_json(F, c) for c in self.unit.reshape(-1)],
        }


@dataclass
class GradedEnumReport:
    d0: int
    d1: int
    candidates: int = 0
    associative: int = 0
    separable: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "d0": self.d0,
            "d1": self.d1,
            "candidates": self.candidates,
            "associative": self.associative,
            "separable": [A.to_json() for A in self.separable],
        }


def _graded_separable(F: FieldSpec, mu: np.ndarray, deg: list[int]) -> bool:
    """Even sigma with mu sigma = 1 and the two bimodule identities (no signs: all maps even)."""
    d = len(deg)
    allowed = [(a * d + b, c) for a in range(d) for b in range(d) for c in range(d)
               if (deg[a] + deg[b]) % 2 == deg[c]]
    Hs = np.zeros((len(allowed), d * d, d), dtype=np.int64)
    for idx, (r, c) in enumerate(allowed):
        Hs[idx, r, c] = 1
    R = RingObject(trivial_module(F, F.p, d),
                   ModuleHom(trivial_module(F, F.p, d * d), trivial_module(F, F.p, d), mu),
                   ModuleHom(unit_module(F, F.p), trivial_module(F, F.p, d), ff.zeros(d, 1)))
    e1, e2, e3 = _sep_blocks(R, Hs)
    k = len(allowed)
    system = np.hstack([e1.reshape(k, -1), e2.reshape(k, -1), e3.reshape(k, -1)]).T
    rhs = np.concatenate([ff.identity(d).reshape(-1), np.zeros(2 * d**4, np.int64)])
    return ff.mat_solve(F, system, rhs).feasible


def graded_sep_enum(field: FieldSpec, d0: int, d1: int, budget: int = DEFAULT_BUDGET,
                    strict: bool = True) -> GradedEnumReport:
    """All graded-commutative, associative, unital, separable structures on k^d0 (+) k^d1.

    The unit lies in degree 0.  With ``strict`` a survivor with d1 > 0
    raises CriteriaDisagreeError.
    """
    F = field
    if F.p != 2:
        raise InputError("graded enumeration is set up for characteristic 2")
    d = d0 + d1
    if d0 < 0 or d1 < 0:
        raise InputError("dimensions must be non-negative")
    if d > 3:
        raise BudgetExceededError(f"total dimension {d} exceeds the exhaustive bound 3")
    report = GradedEnumReport(d0, d1)
    if d0 == 0:
        return report
    deg = [0] * d0 + [1] * d1
    n = d * d * d
    idx = lambda k, a, b: (k * d + a) * d + b  # noqa: E731 - flat index of mu[k, a*d+b]
    allowed = [idx(k, a, b) for k in range(d) for a in range(d) for b in range(d)
               if (deg[a] + deg[b]) % 2 == deg[k]]
    pos = {v: i for i, v in enumerate(allowed)}
    minus = F.neg(1)
    I = ff.identity(d)
    for u0 in ff.iter_vectors(F, d0):
        if not any(u0):
            continue
        u = list(u0) + [0] * d1
        rows, rhs = [], []
        for k in range(d):
            for j in range(d):
                for left in (True, False):
                    row = np.zeros(len(allowed), np.int64)
                    for i in range(d):
                        flat = idx(k, i, j) if left else idx(k, j, i)
                        if u[i] and flat in pos:
                            row[pos[flat]] = F.add(row[pos[flat]], u[i])
                    rows.append(row)
                    rhs.append(int(I[k, j]))
        for k in range(d):
            for a in range(d):
                for b in range(a + 1, d):
                    row = np.zeros(len(allowed), np.int64)
                    sign = minus if deg[a] * deg[b] else 1
                    if idx(k, a, b) in pos:
                        row[pos[idx(k, a, b)]] = 1
                    if idx(k, b, a) in pos:
                        row[pos[idx(k, b, a)]] = F.sub(row[pos[idx(k, b, a)]], sign)
                    rows.append(row)
                    rhs.append(0)
        sol = ff.mat_solve(F, np.array(rows), np.array(rhs))
        if not sol.feasible:
            continue
        dirs = ff.row_basis(F, sol.nullspace.T) if sol.nullspace.shape[1] else np.zeros((0, len(allowed)), np.int64)
        if F.order ** dirs.shape[0] > budget:
            raise BudgetExceededError(f"{F.order}^{dirs.shape[0]} graded candidates exceed {budget}")
        for _, x in _affine_points(F, sol.particular.reshape(-1), dirs):
            report.candidates += 1
            flat = np.zeros(n, np.int64)
            flat[allowed] = x
            mu = flat.reshape(d, d * d)
            lhs = F.matmul(mu, ff.mat_kron(F, mu, I))
            rhs3 = F.matmul(mu, ff.mat_kron(F, I, mu))
            if not np.array_equal(lhs, rhs3):
                continue
            report.associative += 1
            if _graded_separable(F, mu, deg):
                report.separable.append(GradedAlgebra(F, d0, d1, mu, np.array(u, np.int64)))
    if strict:
        bad = [A for A in report.separable if A.d1]
        if bad:
            raise CriteriaDisagreeError(f"{len(bad)} separable graded algebras with nonzero odd part")
    return report
