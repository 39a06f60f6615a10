"""stabring command line: every operation with JSON in and JSON out.

Exit codes: 0 success, 1 verification failure, 2 budget exceeded, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import ffield as ff
from . import modrep as mr
from .classify import SearchBudget, catalog, enum_ttrings, match_catalog, projective_free_modules
from .errors import BudgetExceededError, CriteriaDisagreeError, InputError, StabringError
from .radical import alpha, beta, ihat_report, radical_report, rad_tensor_witness, tensor_faithful
from .ringobj import DEFAULT_BUDGET, RingObject, ring_check, ring_perm, sep_solve
from .stable import phom_basis, projective_free_part, stable_hom_dim
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_json(text: str):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise InputError(f"expected a comma-separated list of integers, got {text!r}") from None


def _field(args) -> ff.FieldSpec:
    if args.p is None:
        raise InputError("--p is required")
    order = args.field or args.p
    m, r = 0, order
    while r % args.p == 0:
        r //= args.p
        m += 1
    if r != 1 or m == 0:
        raise InputError(f"--field {order} is not a power of p={args.p}")
    if m == 1:
        return ff.GF(args.p)
    if not args.modulus:
        raise InputError("--modulus is required for extension fields")
    return ff.ff_make(args.p, m, _ints(args.modulus))


def _q(args) -> int:
    if args.n is None:
        raise InputError("--n is required")
    return args.p ** args.n


def _module(args, which: str = "module") -> mr.Module:
    raw = getattr(args, which, None)
    if raw:
        return mr.Module.from_json(_load_json(raw))
    blocks = getattr(args, which.replace("module", "blocks"), None)
    if blocks:
        return mr.module_from_blocks(_field(args), _q(args), _ints(blocks))
    if which == "module" and getattr(args, "t", None):
        t = _load_json(args.t)
        return mr.Module(_field(args), _q(args), ff.as_matrix(t) if t else ff.zeros(0, 0))
    idx = args.i if which == "module" else args.j
    if idx is not None:
        return mr.mod_indec(_field(args), _q(args), idx)
    raise InputError(f"no {which} given (use --{which}, --{which.replace('module', 'blocks')} or a block size)")


def _map(args) -> mr.ModuleHom:
    if args.map:
        data = _load_json(args.map)
        A, B = mr.Module.from_json(data["source"]), mr.Module.from_json(data["target"])
        M = ff.matrix_from_json(A.field, data["matrix"])
        f = mr.ModuleHom(A, B, M)
        if not f.is_equivariant():
            raise InputError("map is not equivariant")
        return f
    F, q = _field(args), _q(args)
    if args.gen == "alpha":
        f = alpha(F, q, args.i)
    elif args.gen == "beta":
        f = beta(F, q, args.i)
    elif args.gen == "identity":
        f = mr.identity_hom(mr.mod_indec(F, q, args.i))
    else:
        raise InputError("give --map or --gen with --i")
    if args.j:
        f = f.tensor(mr.identity_hom(mr.mod_indec(F, q, args.j)))
    return f


def _ring(args) -> RingObject:
    if args.ring:
        R = RingObject.from_json(_load_json(args.ring))
        return R.with_mode(args.mode) if args.mode else R
    if args.perm is not None:
        return ring_perm(_field(args), _q(args), args.perm, args.mode or "module")
    raise InputError("give --ring JSON or --perm SUBGROUP_ORDER")


def _budget(args) -> SearchBudget:
    return SearchBudget(max_candidates=args.budget or DEFAULT_BUDGET, max_module_dim=None,
                        time_cap=args.time_cap)


def cmd_tensor(args):
    if args.i is not None and args.j is not None and not args.module:
        F, q = _field(args), _q(args)
        A, B = mr.mod_indec(F, q, args.i), mr.mod_indec(F, q, args.j)
    else:
        A, B = _module(args, "module"), _module(args, "module2")
    T = mr.mod_tensor(A, B)
    return {"stable": list(projective_free_part(T)), "full": list(mr.mod_decompose(T))}, EXIT_OK


def cmd_decompose(args):
    A = _module(args)
    return {"decomposition": list(mr.mod_decompose(A)), "stable": list(projective_free_part(A)),
            "rank_sequence": mr.rank_sequence(A)}, EXIT_OK


def cmd_restrict(args):
    R = mr.mod_restrict(_module(args), args.m)
    return {"q": R.q, "decomposition": list(mr.mod_decompose(R))}, EXIT_OK


def cmd_induce(args):
    R = mr.mod_induce(_module(args), args.to_n)
    return {"q": R.q, "decomposition": list(mr.mod_decompose(R))}, EXIT_OK


def cmd_sympow(args):
    R = mr.mod_sympow(_module(args), args.k)
    return {"dim": R.dim, "decomposition": list(mr.mod_decompose(R))}, EXIT_OK


def _pair(args):
    if args.i is not None and args.j is not None and not args.module:
        F, q = _field(args), _q(args)
        return mr.mod_indec(F, q, args.i), mr.mod_indec(F, q, args.j)
    return _module(args, "module"), _module(args, "module2")


def cmd_hom(args):
    A, B = _pair(args)
    formula = mr.hom_dim_formula(mr.mod_decompose(A), mr.mod_decompose(B))
    return {"dim": mr.hom_dim(A, B), "formula": formula}, EXIT_OK


def cmd_stable_hom(args):
    A, B = _pair(args)
    return {"dim": stable_hom_dim(A, B), "phom_dim": len(phom_basis(A, B))}, EXIT_OK


def cmd_radical(args):
    return radical_report(_map(args), args.mode or "module"), EXIT_OK


def cmd_ihat(args):
    return ihat_report(_map(args), args.mode or "module"), EXIT_OK


def cmd_faithful(args):
    A = _module(args)
    return {"decomposition": list(mr.mod_decompose(A)), "faithful": tensor_faithful(A)}, EXIT_OK


def cmd_check_ring(args):
    R = _ring(args)
    return {"mode": R.mode, **ring_check(R).to_json()}, EXIT_OK


def cmd_separable(args):
    res = sep_solve(_ring(args))
    out = res.to_json()
    out.setdefault("separable", True)
    return out, EXIT_OK


def cmd_classify(args):
    mode = args.mode or "stable"
    budget = _budget(args)
    if args.module or args.blocks:
        mods = [_module(args)]
    elif args.dim_bound:
        mods = projective_free_modules(_field(args), _q(args), args.dim_bound)
    else:
        raise InputError("give --blocks, --module or --dim-bound")
    reports = []
    for A in mods:
        rep = enum_ttrings(A, mode, budget, args.jobs)
        if mode == "stable" and A.field.is_prime_field and rep.classes:
            match_catalog(rep, catalog(A.field, A.q, A.dim), budget.max_candidates)
        reports.append(rep.to_json())
    return {"mode": mode, "reports": reports}, EXIT_OK


def cmd_verify(args):
    if args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    if args.suite == "dichotomy" and args.q:
        F = ff.GF(_prime_of(args.q))
        w = rad_tensor_witness(F, args.q)
        expect = args.q % (F.p * F.p) == 0
        ok = (w is not None) == expect
        return {"suite": "dichotomy", "q": args.q, "ok": ok,
                "witness": w.to_json() if w is not None else None}, EXIT_OK if ok else EXIT_FAIL
    results = run_suite(args.suite)
    ok = all(r.ok for r in results)
    out = {"suite": args.suite, "ok": ok, "results": [r.to_json() for r in results],
           "failed": [r.number for r in results if not r.ok]}
    return out, EXIT_OK if ok else EXIT_FAIL


def _prime_of(q: int) -> int:
    for p in range(2, q + 1):
        if q % p == 0:
            r = q
            while r % p == 0:
                r //= p
            if r == 1:
                return p
            break
    raise InputError(f"{q} is not a prime power")


COMMANDS = {
    "tensor": cmd_tensor,
    "decompose": cmd_decompose,
    "restrict": cmd_restrict,
    "induce": cmd_induce,
    "sympow": cmd_sympow,
    "hom": cmd_hom,
    "stable-hom": cmd_stable_hom,
    "radical": cmd_radical,
    "ihat": cmd_ihat,
    "faithful": cmd_faithful,
    "check-ring": cmd_check_ring,
    "separable": cmd_separable,
    "classify": cmd_classify,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stabring", description="Modular representations of cyclic p-groups and tt-rings.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--p", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--field", type=int, help="field size p^m")
        sp.add_argument("--modulus", help="little-endian coefficients of the defining polynomial")
        sp.add_argument("--mode", choices=["module", "stable"])
        sp.add_argument("--out")
        sp.add_argument("--i", type=int)
        sp.add_argument("--j", type=int)
        sp.add_argument("--module", help="module JSON, or @path")
        sp.add_argument("--module2", help="second module JSON, or @path")
        sp.add_argument("--blocks", help="block sizes, e.g. 3,1")
        sp.add_argument("--blocks2", help="block sizes of the second module")
        if name == "decompose":
            sp.add_argument("--t", help="t-action matrix as a JSON list of rows")
        if name == "restrict":
            sp.add_argument("--m", type=int, required=True)
        if name == "induce":
            sp.add_argument("--to-n", type=int, required=True)
        if name == "sympow":
            sp.add_argument("--k", type=int, required=True)
        if name in ("radical", "ihat"):
            sp.add_argument("--map", help="JSON {source, target, matrix}")
            sp.add_argument("--gen", choices=["alpha", "beta", "identity"])
        if name in ("check-ring", "separable"):
            sp.add_argument("--ring", help="ring JSON, or @path")
            sp.add_argument("--perm", type=int, help="subgroup order for a permutation ring")
        if name == "classify":
            sp.add_argument("--dim-bound", type=int)
            sp.add_argument("--budget", type=int)
            sp.add_argument("--time-cap", type=float)
            sp.add_argument("--jobs", type=int, default=1)
        if name == "verify":
            sp.add_argument("--suite", required=True)
            sp.add_argument("--q", type=int)
    return parser


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print(text)


def main(argv=None) -> int:
    out_path = None
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        out_path = args.out
        payload, code = COMMANDS[args.command](args)
    except BudgetExceededError as exc:
        payload, code = {"error": "BudgetExceeded", "message": str(exc)}, EXIT_BUDGET
    except CriteriaDisagreeError as exc:
        payload, code = {"error": "CriteriaDisagree", "message": str(exc)}, EXIT_FAIL
    except (InputError, OSError) as exc:
        payload, code = {"error": type(exc).__name__.removesuffix("Error"), "message": str(exc)}, EXIT_INPUT
    except StabringError as exc:
        payload, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_FAIL
    _emit(payload, out_path)
    return code


if __name__ == "__main__":
    sys.exit(main())
