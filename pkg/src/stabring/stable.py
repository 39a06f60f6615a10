"""Stable module category: maps modulo those factoring through projectives.

Stable morphisms are always represented by honest module maps.  A
``HomQuotient`` fixes, for a pair of modules, a basis of PHom and a
complement of it inside Hom whose span gives canonical coset
representatives.
"""

from __future__ import annotations

import threading
from functools import lru_cache

import numpy as np

from . import ffield as ff
from .errors import FieldMismatchError, OrderMismatchError, ShapeMismatchError
from .modrep import (
    Decomposition,
    Module,
    ModuleHom,
    _check_compatible,
    _hom_basis_array,
    mod_decompose,
    mod_indec,
)


@lru_cache(maxsize=4096)
def _phom_array(A: Module, B: Module) -> np.ndarray:
    F = A.field
    da, db = A.dim, B.dim
    if da == 0 or db == 0:
        return np.zeros((0, db, da), dtype=np.int64)
    q = A.q
    if is_projective(A) or is_projective(B):
        # every map out of or into a projective factors through it
        return _hom_basis_array(A, B)
    free = mod_indec(F, q, q)
    Hs = _hom_basis_array(A, free)  # (nh, q, da)
    Gs = _hom_basis_array(free, B)  # (ng, db, q)
    nh, ng = Hs.shape[0], Gs.shape[0]
    prods = F.matmul(Gs.reshape(ng * db, q), Hs.transpose(1, 0, 2).reshape(q, nh * da))
    prods = prods.reshape(ng, db, nh, da).transpose(0, 2, 1, 3).reshape(ng * nh, db * da)
    basis = ff.row_basis(F, prods)
    out = basis.reshape(-1, db, da).copy()
    out.flags.writeable = False
    return out


def phom_basis(A: Module, B: Module) -> list[ModuleHom]:
    """Row-reduced basis of the maps A -> B factoring through a projective."""
    _check_compatible(A, B)
    return [ModuleHom(A, B, M) for M in _phom_array(A, B)]


def phom_dim_formula(i: int, j: int, q: int) -> int:
    return max(0, i + j - q)


def stable_hom_dim(A: Module, B: Module) -> int:
    _check_compatible(A, B)
    return _hom_basis_array(A, B).shape[0] - _phom_array(A, B).shape[0]


def stable_hom_dim_formula(i: int, j: int, q: int) -> int:
    return min(i, j) - phom_dim_formula(i, j, q)


class HomQuotient:
    """Hom(A, B) split as PHom(A, B) plus a fixed complement.

    ``complement`` rows are coset representatives: every stable map A -> B
    is represented by exactly one linear combination of them.
    """

    def __init__(self, A: Module, B: Module):
        _check_compatible(A, B)
        self.source, self.target = A, B
        F = self.field = A.field
        self.shape = (B.dim, A.dim)
        n = B.dim * A.dim
        self.hom = _hom_basis_array(A, B).reshape(-1, n)
        self.phom = _phom_array(A, B).reshape(-1, n)
        idx = ff.extend_to_complement(F, self.phom, self.hom)
        self.complement = self.hom[idx]
        self._phom_test = ff.SpanTest(F, self.phom, n)
        full = np.vstack([self.phom, self.complement])
        self._coord_rows = None
        if full.shape[0]:
            _, rows = ff.mat_rref(F, full)  # pivot columns = independent entries
            self._coord_rows = rows
            self._coord_inv = ff.mat_inverse(F, full[:, rows])

    @property
    def stable_dim(self) -> int:
        return self.complement.shape[0]

    def representative(self, coeffs) -> np.ndarray:
        """The coset representative sum(c_i * complement_i) as a matrix."""
        if not len(self.complement):
            return ff.zeros(*self.shape)
        return ff.lin_comb(self.field, coeffs, list(self.complement)).reshape(self.shape)

    def in_phom(self, M: np.ndarray) -> bool:
        return self._phom_test.contains(np.asarray(M).reshape(-1))

    def stable_coords(self, M: np.ndarray) -> np.ndarray:
        """Complement coordinates of an equivariant matrix (its stable class)."""
        if self._coord_rows is None:
            return np.zeros(0, dtype=np.int64)
        v = np.asarray(M, dtype=np.int64).reshape(-1)[self._coord_rows]
        coords = self.field.matmul(v.reshape(1, -1), self._coord_inv).reshape(-1)
        return coords[self.phom.shape[0]:]


class StableContext:
    """Per-(field, q) cache of HomQuotient objects, safe for concurrent use."""

    def __init__(self, field: ff.FieldSpec, q: int):
        self.field = field
        self.q = q
        self._cache: dict = {}
        self._lock = threading.Lock()

    def _check(self, M: Module):
        if M.field != self.field:
            raise FieldMismatchError(f"{M.field} vs context {self.field}")
        if M.q != self.q:
            raise OrderMismatchError(f"q={M.q} vs context q={self.q}")

    def quotient(self, A: Module, B: Module) -> HomQuotient:
        self._check(A)
        self._check(B)
        key = (A, B)
        with self._lock:
            hit = self._cache.get(key)
        if hit is None:
            hit = HomQuotient(A, B)
            with self._lock:
                hit = self._cache.setdefault(key, hit)
        return hit

    def phom_basis(self, A: Module, B: Module) -> list[ModuleHom]:
        return [ModuleHom(A, B, M.reshape(B.dim, A.dim)) for M in self.quotient(A, B).phom]

    def stable_hom_dim(self, A: Module, B: Module) -> int:
        return self.quotient(A, B).stable_dim

    def stable_equal(self, f: ModuleHom, g: ModuleHom) -> bool:
        if f.source != g.source or f.target != g.target:
            raise ShapeMismatchError("maps have different source or target")
        return self.quotient(f.source, f.target).in_phom((f - g).matrix)

    def in_phom(self, f: ModuleHom) -> bool:
        return self.quotient(f.source, f.target).in_phom(f.matrix)


def stable_equal(f: ModuleHom, g: ModuleHom) -> bool:
    """f == g in the stable category, i.e. f - g factors through a projective."""
    if f.source != g.source or f.target != g.target:
        raise ShapeMismatchError("maps have different source or target")
    basis = _phom_array(f.source, f.target)
    n = f.source.dim * f.target.dim
    diff = (f - g).matrix.reshape(1, n)
    if not np.any(diff):
        return True
    F = f.field
    stacked = np.vstack([basis.reshape(-1, n), diff])
    return ff.mat_rank(F, stacked) == basis.shape[0]


def is_projective(A: Module) -> bool:
    """Every block has size q (the zero module included): A is zero stably."""
    return all(b == A.q for b in mod_decompose(A))


def projective_free_part(A: Module) -> Decomposition:
    return tuple(b for b in mod_decompose(A) if b != A.q)


def stable_iso(A: Module, B: Module) -> bool:
    _check_compatible(A, B)
    return projective_free_part(A) == projective_free_part(B)
