"""Exact arithmetic in GF(p^m) and dense linear algebra over it.

A field element c_0 + c_1 x + ... + c_{m-1} x^{m-1} (reduced modulo the
field's modulus) is stored as the integer code ``sum(c_i * p**i)``.  Matrices
are plain 2-d ``numpy.int64`` arrays of such codes; every routine below takes
the field as its first argument.  Prime fields use modular arithmetic
directly, extension fields go through precomputed addition and
multiplication tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegreeMismatchError,
    DimensionMismatchError,
    NotPrimeError,
    ReducibleModulusError,
    SingularMatrixError,
)

# float64 matmul is exact while every partial sum stays below this bound
_FLOAT_EXACT = 2**52


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _polymod(a: list[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial b over GF(p), little-endian."""
    a = [c % p for c in a]
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - db
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def is_irreducible_mod_p(coeffs: Sequence[int], p: int) -> bool:
    """Exhaustive irreducibility test for a monic polynomial over GF(p).

    Tries every monic divisor of degree 1 .. deg//2; only meant for small
    degrees.
    """
    deg = len(coeffs) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _polymod(list(coeffs), list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The finite field GF(p^m) presented as GF(p)[x]/(modulus).

    ``modulus`` is the full little-endian coefficient vector of a monic
    irreducible polynomial of degree m (empty for prime fields).
    """

    p: int
    m: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "modulus", tuple(int(c) % self.p for c in self.modulus) if self.p > 0 else ())
        if not is_prime(self.p):
            raise NotPrimeError(f"{self.p} is not prime")
        if self.m < 1:
            raise DegreeMismatchError("extension degree must be >= 1")
        if self.m == 1:
            if self.modulus not in ((), (0, 1)):
                raise DegreeMismatchError("prime fields take an empty modulus")
            object.__setattr__(self, "modulus", ())
            return
        if len(self.modulus) != self.m + 1 or self.modulus[-1] != 1:
            raise DegreeMismatchError(
                f"modulus must be monic of degree {self.m}, got {list(self.modulus)}"
            )
        if not is_irreducible_mod_p(self.modulus, self.p):
            raise ReducibleModulusError(f"{list(self.modulus)} is reducible over GF({self.p})")

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}; {list(self.modulus)})"

    @property
    def order(self) -> int:
        return self.p**self.m

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    # -- element codes ---------------------------------------------------

    def encode(self, coeffs: Iterable[int]) -> int:
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.m:
            raise DegreeMismatchError("too many coefficients for this field")
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def decode(self, code: int) -> list[int]:
        code = int(code)
        out = []
        for _ in range(self.m):
            code, r = divmod(code, self.p)
            out.append(r)
        return out

    def scalar(self, n: int) -> int:
        """Image of the integer n under Z -> GF(p) -> GF(p^m)."""
        return int(n) % self.p

    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def _tables(self):
        q, p, m = self.order, self.p, self.m
        digits = np.array([self.decode(c) for c in range(q)], dtype=np.int64)
        powers = p ** np.arange(m, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ powers
        neg = ((-digits) % p) @ powers
        # x^k reduced modulo the modulus, k < 2m - 1
        red = np.zeros((2 * m - 1, m), dtype=np.int64)
        for k in range(2 * m - 1):
            red[k, :] = (_polymod([0] * k + [1], self.modulus, p) + [0] * m)[:m]
        prod = np.zeros((q, q, 2 * m - 1), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                prod[:, :, i + j] += digits[:, None, i] * digits[None, :, j]
        mul = ((prod @ red) % p) @ powers
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        return {"add": add, "neg": neg, "mul": mul, "inv": inv, "digits": digits,
                "red": red, "powers": powers}

    # -- vectorised arithmetic on codes ----------------------------------

    def add(self, a, b):
        if self.m == 1:
            return (np.asarray(a) + b) % self.p
        return self._tables["add"][a, b]

    def neg(self, a):
        if self.m == 1:
            return (-np.asarray(a)) % self.p
        return self._tables["neg"][a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return (np.asarray(a) * b) % self.p
        return self._tables["mul"][a, b]

    def inv(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return int(self._tables["inv"][a])

    def power(self, a: int, e: int) -> int:
        result, base = 1, int(a)
        if e < 0:
            base, e = self.inv(base), -e
        while e:
            if e & 1:
                result = int(self.mul(result, base))
            base = int(self.mul(base, base))
            e >>= 1
        return result

    def frobenius(self, a: int) -> int:
        return self.power(a, self.p)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[1] != B.shape[0]:
            raise DimensionMismatchError(f"cannot multiply {A.shape} by {B.shape}")
        n = A.shape[1]
        p = self.p
        if A.size == 0 or B.size == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        if self.m == 1:
            return _matmul_mod(A, B, p, n * (p - 1) ** 2)
        t = self._tables
        da, db = t["digits"][A], t["digits"][B]
        m = self.m
        bound = n * m * (p - 1) ** 2
        planes = []
        for k in range(2 * m - 1):
            acc = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
            for i in range(max(0, k - m + 1), min(k, m - 1) + 1):
                acc += _matmul_mod(da[:, :, i], db[:, :, k - i], p, bound)
            planes.append(acc % p)
        planes = np.stack(planes, axis=-1)
        return ((planes @ t["red"]) % p) @ t["powers"]


def _matmul_mod(A, B, p, bound):
    if bound < _FLOAT_EXACT:
        return np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64) % p
    if bound < 2**62:
        return (A @ B) % p
    return np.array((A.astype(object) @ B.astype(object)) % p, dtype=np.int64)


def ff_make(p: int, m: int = 1, modulus: Sequence[int] = ()) -> FieldSpec:
    """Build GF(p^m), validating primality and irreducibility of the modulus."""
    return FieldSpec(int(p), int(m), tuple(int(c) for c in modulus))


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


# -- matrices ------------------------------------------------------------


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def as_matrix(entries, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    M = np.asarray(entries, dtype=np.int64)
    if rows is not None:
        M = M.reshape(rows, cols)
    return M


def mat_mul(F: FieldSpec, *mats: np.ndarray) -> np.ndarray:
    """Product of matrices, left to right (mat_mul(F, G, H) is G @ H)."""
    out = mats[0]
    for M in mats[1:]:
        out = F.matmul(out, M)
    return out


def mat_add(F: FieldSpec, A, B) -> np.ndarray:
    return F.add(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))


def mat_sub(F: FieldSpec, A, B) -> np.ndarray:
    return F.sub(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))


def mat_scale(F: FieldSpec, c: int, A) -> np.ndarray:
    return F.mul(np.asarray(A, dtype=np.int64), int(c))


def mat_pow(F: FieldSpec, A: np.ndarray, e: int) -> np.ndarray:
    result = identity(A.shape[0])
    base = A
    while e:
        if e & 1:
            result = F.matmul(result, base)
        e >>= 1
        if e:
            base = F.matmul(base, base)
    return result


def mat_kron(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product; row index of the result is i*B.rows + k."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    ra, ca = A.shape
    rb, cb = B.shape
    out = F.mul(A[:, None, :, None], B[None, :, None, :])
    return np.asarray(out, dtype=np.int64).reshape(ra * rb, ca * cb)


def lin_comb(F: FieldSpec, coeffs: Sequence[int], mats: Sequence[np.ndarray], shape=None) -> np.ndarray:
    """sum(c_i * M_i) over the field."""
    if len(mats) == 0:
        return zeros(*shape)
    stack = np.stack([np.asarray(M, dtype=np.int64) for M in mats])
    c = np.asarray(coeffs, dtype=np.int64).reshape(-1, 1)
    flat = F.matmul(c.T, stack.reshape(len(mats), -1))
    return flat.reshape(shape if shape is not None else stack.shape[1:])


def mat_rref(F: FieldSpec, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns (first nonzero pivot rule)."""
    A = np.array(M, dtype=np.int64, copy=True)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        lead = int(A[r, c])
        if lead != 1:
            A[r, c:] = F.mul(A[r, c:], F.inv(lead))
        col = A[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            A[others, c:] = F.sub(A[others, c:], F.mul(col[others, None], A[r, c:][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def mat_rank(F: FieldSpec, M: np.ndarray) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    # eliminate along the shorter side
    if M.shape[0] > M.shape[1]:
        M = M.T
    return len(mat_rref(F, M)[1])


def _nullspace_from_rref(F: FieldSpec, R: np.ndarray, pivots: list[int], cols: int) -> np.ndarray:
    piv = set(pivots)
    free = [c for c in range(cols) if c not in piv]
    N = zeros(cols, len(free))
    if free:
        N[free, np.arange(len(free))] = 1
        if pivots:
            N[pivots, :] = F.neg(R[: len(pivots)][:, free])
    return N


def mat_nullspace(F: FieldSpec, M: np.ndarray) -> np.ndarray:
    """Columns form a basis of {x : M x = 0}; deterministic (free-variable order)."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return identity(cols)
    R, piv = mat_rref(F, M)
    return _nullspace_from_rref(F, R, piv, cols)


@dataclass(frozen=True)
class Solution:
    """Affine solution set of A X = B: particular + column span of nullspace.

    When infeasible, ``particular`` is None and the two ranks certify it
    (rank(A) < rank([A|B])).
    """

    feasible: bool
    particular: np.ndarray | None
    nullspace: np.ndarray
    rank: int
    augmented_rank: int


def mat_solve(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> Solution:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if B.ndim == 1:
        B = B.reshape(-1, 1)
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatchError(f"A has {A.shape[0]} rows, B has {B.shape[0]}")
    n = A.shape[1]
    aug = np.hstack([A, B])
    if aug.shape[0] == 0:
        return Solution(True, zeros(n, B.shape[1]), identity(n), 0, 0)
    R, piv = mat_rref(F, aug)
    a_piv = [c for c in piv if c < n]
    nullspace = _nullspace_from_rref(F, R[:, :n], a_piv, n)
    if len(a_piv) < len(piv):
        return Solution(False, None, nullspace, len(a_piv), len(piv))
    X = zeros(n, B.shape[1])
    for row, pc in enumerate(a_piv):
        X[pc, :] = R[row, n:]
    return Solution(True, X, nullspace, len(a_piv), len(piv))


def mat_inverse(F: FieldSpec, M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionMismatchError("inverse of a non-square matrix")
    R, piv = mat_rref(F, np.hstack([M, identity(n)]))
    if sum(1 for c in piv if c < n) < n:
        raise SingularMatrixError("matrix is singular")
    return R[:, n:]


def is_invertible(F: FieldSpec, M: np.ndarray) -> bool:
    M = np.asarray(M)
    return M.shape[0] == M.shape[1] and mat_rank(F, M) == M.shape[0]


def row_basis(F: FieldSpec, rows: np.ndarray) -> np.ndarray:
    """Nonzero rows of the RREF: a canonical basis of the row span."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.shape[0] == 0:
        return rows
    R, piv = mat_rref(F, rows)
    return R[: len(piv)]


class SpanTest:
    """Membership test for the column span of a fixed set of vectors.

    Precomputes a basis K of the annihilator, so x lies in the span iff
    K x = 0.
    """

    def __init__(self, F: FieldSpec, vectors: np.ndarray, length: int):
        self.field = F
        vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, length)
        self.rank = mat_rank(F, vectors) if vectors.shape[0] else 0
        if vectors.shape[0] == 0:
            self.annihilator = identity(length)
        else:
            self.annihilator = mat_nullspace(F, vectors).T

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=np.int64).reshape(-1)
        if self.annihilator.shape[0] == 0:
            return True
        return not np.any(self.field.matmul(self.annihilator, x.reshape(-1, 1)))


def extend_to_complement(F: FieldSpec, base: np.ndarray, candidates: np.ndarray) -> list[int]:
    """Indices of candidate rows that greedily extend span(base), in order."""
    candidates = np.asarray(candidates, dtype=np.int64)
    if candidates.shape[0] == 0:
        return []
    base = np.asarray(base, dtype=np.int64).reshape(-1, candidates.shape[1])
    nb = base.shape[0]
    # pivot columns of [base | candidates] (vectors as columns) are the greedy choice
    _, piv = mat_rref(F, np.vstack([base, candidates]).T)
    return [c - nb for c in piv if c >= nb]


def iter_vectors(F: FieldSpec, k: int):
    """All vectors of GF(q)^k in lexicographic order of codes."""
    return itertools.product(range(F.order), repeat=k)


# -- serialization -------------------------------------------------------


def scalar_to_json(F: FieldSpec, code: int):
    """Prime-field scalars serialize as ints, extension scalars as coefficient lists."""
    if F.m == 1:
        return int(code)
    return F.decode(code)


def scalar_from_json(F: FieldSpec, value) -> int:
    if isinstance(value, (list, tuple)):
        return F.encode(value)
    return F.scalar(value)


def matrix_to_json(F: FieldSpec, M: np.ndarray) -> dict:
    M = np.asarray(M)
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "entries": [scalar_to_json(F, c) for c in M.reshape(-1)],
    }


def matrix_from_json(F: FieldSpec, data: dict) -> np.ndarray:
    rows, cols = int(data["rows"]), int(data["cols"])
    entries = [scalar_from_json(F, v) for v in data["entries"]]
    if len(entries) != rows * cols:
        raise DimensionMismatchError("entry count does not match rows*cols")
    return as_matrix(entries, rows, cols) if rows * cols else zeros(rows, cols)


def field_to_json(F: FieldSpec) -> dict:
    return {"p": F.p, "field_degree": F.m, "modulus": list(F.modulus)}


def field_from_json(data: dict) -> FieldSpec:
    return ff_make(int(data["p"]), int(data.get("field_degree", 1)), data.get("modulus", []))
