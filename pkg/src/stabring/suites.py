"""Named verification suites, shared by the CLI and the acceptance tests.

Each criterion returns a ``CriterionResult``; ``detail`` is JSON-ready and
lists every failing case so a red result explains itself.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

from . import ffield as ff
from .classify import enum_ttrings, verify_c4, verify_cp, verify_main
from .errors import StabringError
from .modrep import (
    hom_dim,
    mod_decompose,
    mod_extend,
    mod_indec,
    mod_restrict,
    mod_sympow,
    mod_tensor,
    sym_idempotent_image,
    tensor_formula_cp,
)
from .modrep import identity_hom
from .radical import ihat_member, radical_generators, rad_tensor_witness, tensor_faithful
from .ringobj import (
    MODULE,
    STABLE,
    SeparabilityCertificate,
    diagonal_sigma,
    graded_sep_enum,
    ring_check,
    ring_perm,
    sep_solve,
    verify_separability,
)
from .stable import phom_basis, phom_dim_formula, projective_free_part


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    seconds: float = 0.0
    detail: dict = dc_field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number:>2} {self.name} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "ok": self.ok,
                "seconds": round(self.seconds, 3), "detail": self.detail}


def _field_for(q: int) -> ff.FieldSpec:
    for p in (2, 3, 5, 7):
        r = q
        while r % p == 0:
            r //= p
        if r == 1:
            return ff.GF(p)
    raise ValueError(f"{q} is not a prime power")


def tensor_formula() -> tuple[bool, dict]:
    bad = []
    cases = 0
    for p in (2, 3, 5, 7):
        F = ff.GF(p)
        for i in range(1, p):
            for j in range(i, p):
                cases += 1
                full = mod_decompose(mod_tensor(mod_indec(F, p, i), mod_indec(F, p, j)))
                stable = tuple(b for b in full if b != p)
                if stable != tensor_formula_cp(p, i, j):
                    bad.append([p, i, j, list(stable), list(tensor_formula_cp(p, i, j))])
    return not bad, {"cases": cases, "mismatches": bad}


def almkvist_fossum() -> tuple[bool, dict]:
    bad, cross = [], []
    for p in (3, 5, 7):
        F = ff.GF(p)
        for i in range(2, p):
            dec = mod_decompose(mod_sympow(mod_indec(F, p, i), p - 1))
            if set(dec) != {p}:
                bad.append([p, i, list(dec)])
            if p in (3, 5) and sym_idempotent_image(i, p) != dec:
                cross.append([p, i])
    return not bad and not cross, {"non_projective": bad, "idempotent_disagreements": cross}


def phom_closed_form() -> tuple[bool, dict]:
    bad = []
    for q in (2, 3, 4, 8, 9):
        F = _field_for(q)
        for i in range(1, q + 1):
            for j in range(1, q + 1):
                got = len(phom_basis(mod_indec(F, q, i), mod_indec(F, q, j)))
                if got != phom_dim_formula(i, j, q):
                    bad.append([q, i, j, got])
    return not bad, {"mismatches": bad}


def dichotomy(qs=(2, 3, 4, 5, 8, 9)) -> tuple[bool, dict]:
    out, ok = {}, True
    for q in qs:
        F = _field_for(q)
        w = rad_tensor_witness(F, q)
        expect = q % (F.p * F.p) == 0
        ok &= (w is not None) == expect
        out[str(q)] = w.to_json() if w is not None else None
    return ok, {"witnesses": out}


def ihat_tensor_ideal() -> tuple[bool, dict]:
    bad, checked = [], 0
    for q in (3, 4, 9):
        F = _field_for(q)
        gens = list(radical_generators(F, q))
        gens += [identity_hom(mod_indec(F, q, i)) for i in range(1, q + 1)
                 if not tensor_faithful(mod_indec(F, q, i))]
        for f in gens:
            for j in range(1, q):
                X = identity_hom(mod_indec(F, q, j))
                for mode in (MODULE, STABLE):
                    checked += 1
                    if not ihat_member(f.tensor(X), mode):
                        bad.append([q, f.source.dim, f.target.dim, j, mode])
    return not bad, {"checked": checked, "failures": bad}


def permutation_rings() -> tuple[bool, dict]:
    bad = []
    for q in (2, 3, 4, 8, 9):
        F = _field_for(q)
        h = 1
        while h <= q:
            for mode in (MODULE, STABLE):
                R = ring_perm(F, q, h, mode)
                ok = (ring_check(R).ok and isinstance(sep_solve(R), SeparabilityCertificate)
                      and verify_separability(R, diagonal_sigma(R)))
                if not ok:
                    bad.append([q, h, mode])
            h *= F.p
    return not bad, {"failures": bad}


def no_ring_on_two() -> tuple[bool, dict]:
    rep = enum_ttrings(mod_indec(ff.GF(3), 3, 2), STABLE)
    return len(rep.classes) == 0, {"classes": len(rep.classes), "counts": rep.counts}


def c4_exclusion() -> tuple[bool, dict]:
    rep = verify_c4(4)
    return rep["ok"], rep


def _names(rep: dict, dec: list[int]) -> list:
    for m in rep["modules"]:
        if m["decomposition"] == dec:
            return sorted(c["catalog_match"] or "?" for c in m["classes"])
    return []


def cp_classification() -> tuple[bool, dict]:
    r2 = verify_cp(2, ff.GF(2), 2)
    r3 = verify_cp(3, ff.GF(3), 2)
    on_two = [m for m in r3["modules"] if 2 in m["decomposition"] and m["classes"]]
    ok = (r2["ok"] and r3["ok"] and _names(r2, [1, 1]) == ["GF(4)", "k x k"]
          and _names(r2, [1]) == ["k"] and not on_two)
    return ok, {"p2": r2, "p3": r3}


def main_catalog() -> tuple[bool, dict]:
    rep = verify_main(4, ff.GF(2), 2)
    found = "k(C4/C2)" in _names(rep, [2])
    return rep["ok"] and found, rep


def graded_super() -> tuple[bool, dict]:
    F = ff.GF(2)
    rows, bad = [], []
    for d0 in range(0, 4):
        for d1 in range(0, 4 - d0):
            if d0 + d1 == 0:
                continue
            rep = graded_sep_enum(F, d0, d1, strict=False)
            odd = [A for A in rep.separable if A.d1]
            if odd:
                bad.append([d0, d1, len(odd)])
            rows.append({"d0": d0, "d1": d1, "candidates": rep.candidates,
                         "associative": rep.associative, "separable": len(rep.separable)})
    return not bad, {"cases": rows, "odd_survivors": bad}


def restriction_prop() -> tuple[bool, dict]:
    bad, rows = [], []
    for p, n, m in ((2, 2, 1), (3, 2, 1)):
        F, q, qm = ff.GF(p), p**n, p**m
        for r in range(1, q):
            dec = mod_decompose(mod_restrict(mod_indec(F, q, r), m))
            if qm in dec:
                rows.append([p, r, list(dec)])
                if qm - 1 not in dec:
                    bad.append([p, r, list(dec)])
    return not bad, {"with_projective": rows, "failures": bad}


def base_change() -> tuple[bool, dict]:
    F, E = ff.GF(2), ff.ff_make(2, 2, [1, 1, 1])
    bad = []
    for i in range(1, 5):
        for j in range(1, 5):
            A, B = mod_indec(F, 4, i), mod_indec(F, 4, j)
            if hom_dim(A, B) != hom_dim(mod_extend(A, E), mod_extend(B, E)):
                bad.append([i, j])
    return not bad, {"failures": bad}


CRITERIA = [
    (1, "tensor formula oracle", tensor_formula),
    (2, "Almkvist-Fossum projectivity", almkvist_fossum),
    (3, "PHom closed form", phom_closed_form),
    (4, "radical dichotomy", dichotomy),
    (5, "I-hat is a tensor ideal", ihat_tensor_ideal),
    (6, "permutation-ring separability", permutation_rings),
    (7, "no tt-ring on [2] over GF(3) C3", no_ring_on_two),
    (8, "C4 exclusion of [3]", c4_exclusion),
    (9, "C_p classification", cp_classification),
    (10, "catalog match over GF(2) C4", main_catalog),
    (11, "graded algebras concentrated in degree 0", graded_super),
    (12, "restriction block of size p-1", restriction_prop),
    (13, "Hom dimension under base change", base_change),
]

SUITES = {
    "formula": [1],
    "almkvist-fossum": [2],
    "phom": [3],
    "dichotomy": [4],
    "ihat": [5],
    "perm": [6],
    "c3": [7],
    "c4": [8],
    "cp": [9],
    "main": [10],
    "super": [11],
    "restriction": [12],
    "base-change": [13],
    "all": list(range(1, 14)),
}


def run_criterion(number: int) -> CriterionResult:
    num, name, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except StabringError as exc:
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return CriterionResult(num, name, bool(ok), time.perf_counter() - t0, detail)


def run_suite(name: str) -> list[CriterionResult]:
    return [run_criterion(n) for n in SUITES[name]]
