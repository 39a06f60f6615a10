"""Bounded exhaustive search for commutative separable rings on small modules.

For each unit candidate the unit laws and commutativity are linear in mu,
so they cut the mu-space down to an affine subspace before anything is
enumerated.  Associativity and separability are checked per candidate;
survivors are grouped into isomorphism classes.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import ffield as ff
from .errors import BudgetExceededError, InputError, NotProjectiveFreeError
from .ffield import FieldSpec
from .modrep import Module, ModuleHom, mod_decompose, mod_tensor, module_from_blocks, swap_matrix, unit_module
from .ringobj import (
    DEFAULT_BUDGET,
    MODULE,
    STABLE,
    RingObject,
    SeparabilityCertificate,
    _coset_space,
    _tensor3,
    check_mode,
    field_extension_ring,
    idempotent_count,
    make_ring,
    quotient,
    ring_check,
    ring_extend,
    ring_iso_search,
    ring_perm,
    ring_product_all,
    ring_tensor,
    ring_unit,
    sep_solve,
    stable_reduce,
)
from .stable import _phom_array, projective_free_part


@dataclass(frozen=True)
class SearchBudget:
    max_candidates: int = DEFAULT_BUDGET
    max_module_dim: int | None = None
    time_cap: float | None = None


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.deadline = None if budget.time_cap is None else time.monotonic() + budget.time_cap

    def check(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceededError("time cap exceeded")


def unit_candidates(A: Module, mode: str = STABLE) -> list[ModuleHom]:
    """Nonzero equivariant u: [1] -> A, one per nonzero coset in stable mode."""
    check_mode(mode)
    F = A.field
    one = unit_module(F, A.q)
    basis = _coset_space(one, A, mode)
    out = []
    for coeffs in ff.iter_vectors(F, basis.shape[0]):
        if any(coeffs):
            u = ff.lin_comb(F, coeffs, list(basis), shape=(A.dim, 1))
            out.append(ModuleHom(one, A, u))
    return out


@dataclass(eq=False)
class RingClass:
    ring: RingObject
    certificate: SeparabilityCertificate
    idempotents: int
    members: int = 1
    catalog: str | None = None

    def key(self):
        return (mod_decompose(self.ring.module), tuple(self.ring.mu.matrix.reshape(-1)),
                tuple(self.ring.unit.matrix.reshape(-1)))

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "certificate": self.certificate.to_json(),
            "idempotent_count": self.idempotents,
            "members": self.members,
            "catalog_match": self.catalog,
        }


@dataclass(eq=False)
class ClassificationReport:
    decomposition: tuple
    mode: str
    classes: list = dc_field(default_factory=list)
    counts: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "decomposition": list(self.decomposition),
            "mode": self.mode,
            "counts": dict(self.counts),
            "classes": [c.to_json() for c in self.classes],
        }


def _map_ordered(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _linear_stage(A: Module, mode: str, basis: np.ndarray, u: np.ndarray):
    """Affine space of mu coefficients with mu(u(x)1) = 1 = mu(1(x)u) and mu(12) = mu.

    Returns (particular, directions) or None when the constraints are
    inconsistent.
    """
    F, d = A.field, A.dim
    k = basis.shape[0]
    I = ff.identity(d)
    Bs = basis.reshape(k, d, d * d)
    left = ff.mat_kron(F, u, I)
    right = ff.mat_kron(F, I, u)
    S = swap_matrix(d, d)
    ul = np.array([F.matmul(B, left).reshape(-1) for B in Bs]).reshape(k, d * d)
    ur = np.array([F.matmul(B, right).reshape(-1) for B in Bs]).reshape(k, d * d)
    cm = np.array([F.sub(B, F.matmul(B, S)).reshape(-1) for B in Bs]).reshape(k, d**3)
    cols = [np.hstack([ul, ur, cm]).T]
    if mode == STABLE:
        AA = mod_tensor(A, A)
        p1 = _phom_array(A, A).reshape(-1, d * d)
        p2 = _phom_array(AA, A).reshape(-1, d**3)
        zero = lambda r, c: np.zeros((r, c), np.int64)  # noqa: E731
        n1, n2 = p1.shape[0], p2.shape[0]
        cols.append(np.vstack([p1.T, zero(d * d, n1), zero(d**3, n1)]))
        cols.append(np.vstack([zero(d * d, n1), p1.T, zero(d**3, n1)]))
        cols.append(np.vstack([zero(d * d, n2), zero(d * d, n2), p2.T]))
    system = np.hstack(cols)
    rhs = np.concatenate([I.reshape(-1), I.reshape(-1), np.zeros(d**3, np.int64)])
    sol = ff.mat_solve(F, system, rhs)
    if not sol.feasible:
        return None
    base = sol.particular.reshape(-1)[:k]
    null = sol.nullspace[:k]
    dirs = ff.row_basis(F, null.T) if null.shape[1] else np.zeros((0, k), np.int64)
    return base, dirs


def _associative(R: RingObject, assoc_test) -> bool:
    F, d = R.field, R.dim
    I = ff.identity(d)
    mu = R.mu.matrix
    diff = F.sub(F.matmul(mu, ff.mat_kron(F, mu, I)), F.matmul(mu, ff.mat_kron(F, I, mu)))
    if not np.any(diff):
        return True
    return assoc_test is not None and assoc_test.in_phom(diff)


def _dedup(survivors: list[RingObject], budget: int, jobs: int) -> list[RingClass]:
    """Group survivors into isomorphism classes; the lexicographically least member represents each."""
    survivors = sorted(survivors, key=lambda R: (tuple(R.mu.matrix.reshape(-1)), tuple(R.unit.matrix.reshape(-1))))
    classes: list[RingClass] = []
    for R in survivors:
        inv = idempotent_count(R, budget)
        for c in classes:
            if c.idempotents == inv and ring_iso_search(c.ring, R, budget, jobs) is not None:
                c.members += 1
                break
        else:
            cert = sep_solve(R)
            classes.append(RingClass(R, cert, inv))
    classes.sort(key=RingClass.key)
    return classes


def _prepare(A: Module, mode: str, budget: SearchBudget):
    check_mode(mode)
    if mode == STABLE and A.q in mod_decompose(A):
        raise NotProjectiveFreeError(f"{mod_decompose(A)} has a projective summand")
    if budget.max_module_dim is not None and A.dim > budget.max_module_dim:
        raise BudgetExceededError(f"module dim {A.dim} exceeds {budget.max_module_dim}")


def enum_ttrings(A: Module, mode: str = STABLE, budget: SearchBudget | None = None, jobs: int = 1) -> ClassificationReport:
    """Isomorphism classes of commutative separable ring structures on A."""
    budget = budget or SearchBudget()
    _prepare(A, mode, budget)
    clock = _Clock(budget)
    F, d = A.field, A.dim
    AA = mod_tensor(A, A)
    basis = _coset_space(AA, A, mode)
    k = basis.shape[0]
    assoc_test = quotient(_tensor3(A), A) if mode == STABLE else None
    units = unit_candidates(A, mode)
    spaces = []
    for u in units:
        sp = _linear_stage(A, mode, basis, u.matrix)
        if sp is not None:
            spaces.append((u, *sp))
    total = sum(F.order ** dirs.shape[0] for _, _, dirs in spaces)
    if total > budget.max_candidates:
        raise BudgetExceededError(f"{total} candidates after unit-law pruning exceed {budget.max_candidates}")
    counts = {"units": len(units), "unit_feasible": len(spaces), "candidates": total,
              "associative": 0, "separable": 0}
    survivors = []

    def examine(args):
        u, c = args
        clock.check()
        mu = ff.lin_comb(F, c, list(basis), shape=(d, d * d)) if k else ff.zeros(d, d * d)
        R = make_ring(A, mu, u.matrix, mode)
        if not _associative(R, assoc_test):
            return None, False
        return R, isinstance(sep_solve(R), SeparabilityCertificate)

    work = []
    for u, base, dirs in spaces:
        for t in ff.iter_vectors(F, dirs.shape[0]):
            c = F.add(base, ff.lin_comb(F, t, list(dirs))) if dirs.shape[0] else base
            work.append((u, c))
    for R, sep in _map_ordered(examine, work, jobs):
        if R is None:
            continue
        counts["associative"] += 1
        if sep:
            counts["separable"] += 1
            survivors.append(R)
    classes = _dedup(survivors, budget.max_candidates, jobs)
    counts["classes"] = len(classes)
    return ClassificationReport(mod_decompose(A), mode, classes, counts)


def enum_ttrings_unpruned(A: Module, mode: str = STABLE, budget: SearchBudget | None = None) -> ClassificationReport:
    """Reference search over every (u, mu) pair, every axiom checked as a filter."""
    budget = budget or SearchBudget()
    _prepare(A, mode, budget)
    F, d = A.field, A.dim
    basis = _coset_space(mod_tensor(A, A), A, mode)
    k = basis.shape[0]
    units = unit_candidates(A, mode)
    total = len(units) * F.order**k
    if total > budget.max_candidates:
        raise BudgetExceededError(f"{total} unpruned candidates exceed {budget.max_candidates}")
    counts = {"units": len(units), "candidates": total, "ring": 0, "separable": 0}
    survivors = []
    for u in units:
        for c in ff.iter_vectors(F, k):
            mu = ff.lin_comb(F, c, list(basis), shape=(d, d * d)) if k else ff.zeros(d, d * d)
            R = make_ring(A, mu, u.matrix, mode)
            if not ring_check(R).ok:
                continue
            counts["ring"] += 1
            if isinstance(sep_solve(R), SeparabilityCertificate):
                counts["separable"] += 1
                survivors.append(R)
    classes = _dedup(survivors, budget.max_candidates, 1)
    counts["classes"] = len(classes)
    return ClassificationReport(mod_decompose(A), mode, classes, counts)


# -- catalog -------------------------------------------------------------


def first_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of the given degree over GF(p), little-endian."""
    for tail in itertools.product(range(p), repeat=degree):
        coeffs = tail + (1,)
        if ff.is_irreducible_mod_p(coeffs, p):
            return coeffs
    raise InputError(f"no irreducible of degree {degree} over GF({p})")


def etale_field(field: FieldSpec, q: int, degree: int, mode: str = STABLE) -> RingObject:
    """The degree-f extension field of a prime field as a ring with trivial action."""
    if degree == 1:
        return ring_unit(field, q, mode)
    if not field.is_prime_field:
        raise InputError("catalog extensions are built over prime fields")
    return field_extension_ring(field, q, first_irreducible(field.p, degree), mode)


def _orbit_name(field: FieldSpec, q: int, h: int, f: int) -> str:
    name = "k" if h == q else f"k(C{q}/C{h})"
    if f > 1:
        ext = f"GF({field.order ** f})"
        name = ext if h == q else f"{name}(x){ext}"
    return name


def catalog(field: FieldSpec, q: int, dim_bound: int, max_degree: int | None = None) -> list[tuple[str, RingObject]]:
    """Products of k(G/H) (x) L with L a field extension, stably reduced, dim <= dim_bound.

    Factors with H = 1 are projective, hence stably zero, and are left out.
    """
    factors = []
    h = field.p
    while h <= q:
        r = q // h
        f = 1
        while r * f <= dim_bound and (max_degree is None or f <= max_degree):
            R = ring_tensor(ring_perm(field, q, h, STABLE), etale_field(field, q, f, STABLE))
            factors.append((_orbit_name(field, q, h, f), r * f, R))
            f += 1
        h *= field.p
    out = []
    for n in range(1, dim_bound + 1):
        for combo in itertools.combinations_with_replacement(range(len(factors)), n):
            dim = sum(factors[i][1] for i in combo)
            if dim > dim_bound:
                continue
            R = ring_product_all([factors[i][2] for i in combo], field, q, STABLE)
            name = " x ".join(factors[i][0] for i in combo)
            out.append((name, stable_reduce(R)[0]))
    return out


def match_catalog(report: ClassificationReport, entries, budget: int = DEFAULT_BUDGET):
    """Attach the first catalog entry stably isomorphic to each class."""
    for cls in report.classes:
        target = projective_free_part(cls.ring.module)
        for name, R in entries:
            if projective_free_part(R.module) != target:
                continue
            if ring_iso_search(R, cls.ring.with_mode(STABLE), budget) is not None:
                cls.catalog = name
                break
    return report


def projective_free_modules(field: FieldSpec, q: int, dim_bound: int, min_dim: int = 1):
    """Every module with blocks of size < q and total dim in [min_dim, dim_bound]."""
    out = []
    for n in range(1, dim_bound + 1):
        for blocks in itertools.combinations_with_replacement(range(1, q), n):
            if min_dim <= sum(blocks) <= dim_bound:
                out.append(blocks)
    out.sort(key=lambda b: (sum(b), b))
    return [module_from_blocks(field, q, b) for b in out]


# -- verification suites -------------------------------------------------


def _class_summary(report: ClassificationReport) -> list[dict]:
    return [{"catalog_match": c.catalog, "idempotent_count": c.idempotents, "members": c.members}
            for c in report.classes]


def verify_cp(p: int, field: FieldSpec, dim_bound: int, budget: SearchBudget | None = None) -> dict:
    """Every class over C_p lives on a trivial module and is a separable algebra."""
    budget = budget or SearchBudget()
    if field.p != p:
        raise InputError(f"field characteristic {field.p} != {p}")
    q = p
    entries = catalog(field, q, dim_bound)
    modules = []
    ok = True
    for A in projective_free_modules(field, q, dim_bound):
        rep = match_catalog(enum_ttrings(A, STABLE, budget), entries, budget.max_candidates)
        rows = []
        for cls in rep.classes:
            trivial = all(b == 1 for b in mod_decompose(cls.ring.module))
            plain = trivial and isinstance(sep_solve(cls.ring.with_mode(MODULE)), SeparabilityCertificate)
            ok &= trivial and plain
            rows.append({"catalog_match": cls.catalog, "trivial_action": trivial, "plain_separable": plain})
        modules.append({"decomposition": list(rep.decomposition), "classes": rows, "counts": rep.counts})
    return {"suite": "cp", "p": p, "field": ff.field_to_json(field), "dim_bound": dim_bound,
            "modules": modules, "ok": bool(ok)}


def verify_c4(dim_bound: int = 4, budget: SearchBudget | None = None, control: bool = True) -> dict:
    """No class on any projective-free C_4-module with a [3] summand."""
    budget = budget or SearchBudget()
    if dim_bound > 4:
        raise BudgetExceededError("the C_4 suite is sized for dim_bound <= 4")
    F = ff.GF(2)
    modules = []
    ok = True
    for A in projective_free_modules(F, 4, dim_bound):
        dec = mod_decompose(A)
        if 3 not in dec and not (control and dec == (1,)):
            continue
        rep = enum_ttrings(A, STABLE, budget)
        expected = 0 if 3 in dec else 1
        ok &= len(rep.classes) == expected
        modules.append({"decomposition": list(dec), "classes": len(rep.classes), "expected": expected,
                        "counts": rep.counts})
    return {"suite": "c4", "dim_bound": dim_bound, "modules": modules, "ok": bool(ok)}


def split_match(R: RingObject, degree: int = 2, budget: int = DEFAULT_BUDGET) -> str | None:
    """Name of a product of permutation rings isomorphic to R after base change to GF(p^degree)."""
    E = ff.ff_make(R.field.p, degree, first_irreducible(R.field.p, degree))
    target = ring_extend(R.with_mode(STABLE), E)
    for name, C in catalog(E, R.q, R.dim, max_degree=1):
        if projective_free_part(C.module) == projective_free_part(target.module):
            if ring_iso_search(C, target, budget) is not None:
                return name
    return None


def verify_main(q: int, field: FieldSpec, dim_bound: int, budget: SearchBudget | None = None) -> dict:
    """Match every class found to the catalog of products of k(G/H) (x) L.

    Unmatched classes are listed, never dropped, together with the split
    form they become after base change to GF(p^2) if there is one.  ``ok``
    is True when all matched and every permutation ring within bound was
    found.
    """
    budget = budget or SearchBudget()
    entries = catalog(field, q, dim_bound)
    modules, unmatched, found = [], [], []
    for A in projective_free_modules(field, q, dim_bound):
        rep = match_catalog(enum_ttrings(A, STABLE, budget), entries, budget.max_candidates)
        for cls in rep.classes:
            found.append(cls)
            if cls.catalog is None:
                unmatched.append({"decomposition": list(rep.decomposition), "ring": cls.ring.to_json(),
                                  "split_over_degree_2": split_match(cls.ring, 2, budget.max_candidates)})
        modules.append({"decomposition": list(rep.decomposition), "classes": _class_summary(rep),
                        "counts": rep.counts})
    perm_found = {}
    h = field.p
    while h <= q:
        if 1 < q // h <= dim_bound or h == q:
            Rp = stable_reduce(ring_perm(field, q, h, STABLE))[0]
            hit = any(projective_free_part(c.ring.module) == projective_free_part(Rp.module)
                      and ring_iso_search(Rp, c.ring, budget.max_candidates) is not None for c in found)
            perm_found[_orbit_name(field, q, h, 1)] = hit
        h *= field.p
    ok = not unmatched and all(perm_found.values())
    return {"suite": "main", "q": q, "field": ff.field_to_json(field), "dim_bound": dim_bound,
            "modules": modules, "unmatched": unmatched, "permutation_rings_found": perm_found, "ok": bool(ok)}
