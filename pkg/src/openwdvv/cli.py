"""Command line front end.

Examples:

    openwdvv potential D 4
    openwdvv open-potential I2 6 --lambda 1/2 --format json
    openwdvv flat-coords A 3
    openwdvv correlators A 4 --max-n 5
    openwdvv verify open-wdvv D 5
    openwdvv verify all --max-rank 5
    openwdvv classify I2 4 --branch minus
    openwdvv obstruction H 3

Groups are named by a family token and an integer, so 'I2 6' stands
for I2(6).  Exit status is 0 when every requested identity holds, 1
when a verification or classification fails, and 2 for requests the
library cannot serve (unknown groups, inadmissible lambda, and so on).
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .coxeter import (
    classify_I2,
    correlator_recursion_A,
    coxeter_structure,
    lambda_rescale,
    obstruction_check,
    open_family,
    potential_coxeter,
    printed_open_potential,
    printed_potential,
)
from .exactalg import GaussianRational, MPoly, ParseError, PolyError, rat
from .openext import (
    check_coefw_lemma,
    check_dn_second_derivative_identity,
    check_foan_relation,
    extract_v_from_open_D,
    omega_sequence,
    open_extension,
    open_potential_A,
    open_potential_D,
    verify_extension_theorems,
    verify_open_wdvv,
    verify_vector_potential,
)
from .report import Report, merge
from .saito import frobenius_structure, verify_wdvv

_IDENTITIES = (
    "wdvv",
    "open-wdvv",
    "extension",
    "foan",
    "extract",
    "vector",
    "omega",
    "all",
)


def _tag(family: str, n: int) -> str:
    return f"I2({n})" if family == "I2" else f"{family}{n}"


def _scalar(text: str) -> GaussianRational:
    if not re.fullmatch(r"-?\d+(/\d+)?", text.strip()):
        raise PolyError(f"not an integer or p/q rational: {text!r}")
    return GaussianRational(rat(text.strip()))


def _scalar_text(c: GaussianRational) -> str:
    if not c.im:
        return str(c.re)
    re = "" if not c.re else f"{c.re}"
    im = f"{c.im}*i"
    if not re:
        return im
    return f"{re}+{im}" if str(c.im)[0] != "-" else f"{re}{im}"


def _scalar_json(c: GaussianRational) -> list:
    return [
        [int(c.re.numerator), int(c.re.denominator)],
        [int(c.im.numerator), int(c.im.denominator)],
    ]


def _poly_json(p: MPoly) -> dict:
    return json.loads(p.to_json())


def _emit_poly(p: MPoly, fmt: str) -> None:
    print(p.to_json() if fmt == "json" else p.text())


def _emit_report(rep: Report, fmt: str, parts=None) -> int:
    if fmt == "json":
        obj = {
            "label": rep.label,
            "checked": rep.checked,
            "failures": list(rep.failures),
            "ok": rep.ok,
        }
        if parts is not None:
            obj["reports"] = [
                {
                    "label": r.label,
                    "checked": r.checked,
                    "failures": list(r.failures),
                    "ok": r.ok,
                }
                for r in parts
            ]
        print(json.dumps(obj, indent=2))
    else:
        if parts is not None:
            for r in parts:
                print(r.summary())
        print(rep.summary())
    return 0 if rep.ok else 1


# ---------- verb handlers ----------


def _cmd_potential(args) -> int:
    tag = _tag(args.family, args.n)
    if args.source == "printed":
        p = printed_potential(tag)
    elif args.family in ("A", "D"):
        p = frobenius_structure(args.family, args.n).potential
    else:
        p = potential_coxeter(tag, args.source)
    _emit_poly(p, args.format)
    return 0


def _cmd_open_potential(args) -> int:
    tag = _tag(args.family, args.n)
    lam = _scalar(args.lam)
    if args.source == "printed":
        if args.branch != "plus":
            raise PolyError("printed open potentials have no sign branch")
        p = lambda_rescale(printed_open_potential(tag), lam)
    elif args.family == "D":
        if args.branch != "plus":
            raise PolyError(f"{tag} has no sign branch")
        p = lambda_rescale(open_potential_D(args.n).potential, lam)
    else:
        p = open_family(tag).member(lam, args.branch)
    _emit_poly(p, args.format)
    return 0


def _coords(args, forward: bool) -> int:
    if args.family not in ("A", "D"):
        raise PolyError("flat coordinates are constructed for A and D only")
    fs = frobenius_structure(args.family, args.n)
    if forward:
        pairs = list(zip(fs.table.names, fs.t_of_v))
    else:
        pairs = list(zip(fs.v_table.names, fs.v_of_t))
    if args.format == "json":
        print(
            json.dumps(
                {
                    "group": _tag(args.family, args.n),
                    "coords": [
                        {"name": nm, "expr": _poly_json(p)} for nm, p in pairs
                    ],
                },
                indent=2,
            )
        )
    else:
        for nm, p in pairs:
            print(f"{nm} = {p.text()}")
    return 0


def _cmd_correlators(args) -> int:
    if args.family != "A":
        raise PolyError("boundary correlators are computed for A only")
    table = correlator_recursion_A(args.n, args.max_n)
    items = sorted(table.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def kof(t):
        return args.n + 2 - sum(args.n + 2 - a for a in t)

    if args.format == "json":
        print(
            json.dumps(
                {
                    "group": _tag(args.family, args.n),
                    "entries": [
                        {
                            "insertions": list(t),
                            "boundary_power": kof(t),
                            "value": [int(v.numerator), int(v.denominator)],
                        }
                        for t, v in items
                    ],
                },
                indent=2,
            )
        )
    else:
        for t, v in items:
            taus = " ".join(f"tau_{a}" for a in t)
            head = f"<{taus} sigma^{kof(t)}>" if taus else f"<sigma^{kof(t)}>"
            print(f"{head} = {v}")
    return 0


def _open_ext_for(family: str, n: int, lam, branch: str):
    if family == "D":
        if branch != "plus":
            raise PolyError(f"{_tag(family, n)} has no sign branch")
        ext = open_potential_D(n)
        if lam == 1:
            return ext
        return open_extension(ext.base, lambda_rescale(ext.potential, lam))
    return open_family(_tag(family, n)).extension(lam, branch)


def _omega_report(n: int) -> Report:
    failures = []
    try:
        omega_sequence(n, 2 * n)
    except PolyError as exc:
        failures.append(str(exc))
    if not check_coefw_lemma(n):
        failures.append("boundary coefficient expansion")
    if not check_dn_second_derivative_identity(n):
        failures.append("second-derivative reduction")
    return Report(f"omega(D{n})", 3, tuple(failures))


def _foan_report(n: int) -> Report:
    ok = check_foan_relation(open_potential_A(n))
    return Report(f"foan(A{n})", 1, () if ok else ("s-derivative expansion",))


def _extract_report(n: int) -> Report:
    ext = open_potential_D(n)
    got = extract_v_from_open_D(ext)
    ok = got == list(ext.base.v_of_t)
    return Report(f"extract(D{n})", 1, () if ok else ("recovered v(t)",))


def _classification_report(k: int) -> Report:
    try:
        classify_I2(k)
    except PolyError as exc:
        return Report(f"classification(I2({k}))", 1, (str(exc),))
    return Report(f"classification(I2({k}))", 1)


def _verify_all(max_rank: int) -> tuple:
    reports = []
    for n in range(1, max_rank + 1):
        reports.append(verify_wdvv(frobenius_structure("A", n)))
    for n in range(3, max_rank + 1):
        reports.append(verify_wdvv(frobenius_structure("D", n)))
    for n in range(2, max_rank + 1):
        reports.append(verify_wdvv(coxeter_structure(f"B{n}")))
    for k in range(3, 9):
        reports.append(verify_wdvv(coxeter_structure(f"I2({k})")))
    for tag in ("F4", "H3", "H4"):
        reports.append(verify_wdvv(coxeter_structure(tag)))
    for n in range(1, max_rank + 1):
        reports.append(verify_open_wdvv(open_potential_A(n)))
        reports.append(verify_extension_theorems("A", n))
        reports.append(_foan_report(n))
        funcs = open_potential_A(n).vector_potential()
        reports.append(verify_vector_potential(funcs, f"vector(A{n})"))
    for n in range(3, max_rank + 1):
        reports.append(verify_open_wdvv(open_potential_D(n)))
        reports.append(verify_extension_theorems("D", n))
        reports.append(_extract_report(n))
        funcs = open_potential_D(n).vector_potential()
        reports.append(verify_vector_potential(funcs, f"vector(D{n})"))
        reports.append(_omega_report(n))
    for n in range(2, max_rank + 1):
        reports.append(verify_open_wdvv(open_family(f"B{n}").extension()))
    for k in range(3, 9):
        fam = open_family(f"I2({k})")
        for br in fam.branches:
            reports.append(verify_open_wdvv(fam.extension(branch=br)))
        reports.append(_classification_report(k))
    for n in range(4, max_rank + 1):
        reports.append(obstruction_check(f"D{n}"))
    for n in (6, 7, 8):
        if n <= max_rank:
            reports.append(obstruction_check(f"E{n}"))
    for tag in ("F4", "H3", "H4"):
        reports.append(obstruction_check(tag))
    return merge(f"all(max_rank={max_rank})", reports), reports


def _cmd_verify(args) -> int:
    if args.identity == "all":
        rep, parts = _verify_all(args.max_rank)
        return _emit_report(rep, args.format, parts)
    if args.family is None or args.n is None:
        raise PolyError(f"verify {args.identity} needs a group")
    family, n = args.family, args.n
    tag = _tag(family, n)
    lam = _scalar(args.lam)
    if args.identity == "wdvv":
        fs = (
            frobenius_structure(family, n)
            if family in ("A", "D")
            else coxeter_structure(tag)
        )
        rep = verify_wdvv(fs)
    elif args.identity == "open-wdvv":
        rep = verify_open_wdvv(_open_ext_for(family, n, lam, args.branch))
    elif args.identity == "extension":
        if family not in ("A", "D"):
            raise PolyError("extension theorems cover A and D only")
        rep = verify_extension_theorems(family, n)
    elif args.identity == "foan":
        if family != "A":
            raise PolyError("the s-derivative expansion is an A identity")
        rep = _foan_report(n)
    elif args.identity == "extract":
        if family != "D":
            raise PolyError("coordinate recovery is a D identity")
        rep = _extract_report(n)
    elif args.identity == "vector":
        ext = _open_ext_for(family, n, lam, args.branch)
        rep = verify_vector_potential(ext.vector_potential(), f"vector({ext.label})")
    else:  # omega
        if family != "D":
            raise PolyError("the omega identities are D identities")
        rep = _omega_report(n)
    return _emit_report(rep, args.format)


def _cmd_classify(args) -> int:
    if args.family != "I2":
        raise PolyError("the classification verb covers I2 only")
    lam = _scalar(args.lam)
    try:
        fam = classify_I2(args.n)
        member = fam.member(lam, args.branch) if args.branch in fam.branches else None
    except PolyError as exc:
        print(f"classification failed: {exc}", file=sys.stderr)
        return 1
    if member is None:
        raise PolyError(f"{fam.spec.tag} has no {args.branch} branch")
    if args.format == "json":
        print(
            json.dumps(
                {
                    "group": fam.spec.tag,
                    "domain": fam.domain,
                    "branches": list(fam.branches),
                    "coefficients": [_scalar_json(c) for c in fam.coefficients],
                    "lambda": args.lam,
                    "branch": args.branch,
                    "member": _poly_json(member),
                },
                indent=2,
            )
        )
    else:
        print(f"group: {fam.spec.tag}")
        print(f"lambda domain: {fam.domain}")
        print(f"branches: {' '.join(fam.branches)}")
        for i, c in enumerate(fam.coefficients):
            print(f"beta_{i} = {_scalar_text(c)}")
        print(f"member(lambda={args.lam}, {args.branch}) = {member.text()}")
    return 0


def _cmd_obstruction(args) -> int:
    return _emit_report(obstruction_check(_tag(args.family, args.n)), args.format)


# ---------- argument wiring ----------


def _build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument(
        "--format", choices=("text", "json"), default="text", help="output form"
    )
    lam = argparse.ArgumentParser(add_help=False)
    lam.add_argument(
        "--lambda",
        dest="lam",
        default="1",
        metavar="P/Q",
        help="rescaling parameter, a rational like 2 or -1/3",
    )
    lam.add_argument(
        "--branch", choices=("plus", "minus"), default="plus", help="sign branch"
    )

    p = argparse.ArgumentParser(
        prog="openwdvv",
        description="exact potentials, open extensions and identity checks "
        "for the Coxeter families",
    )
    sub = p.add_subparsers(dest="verb", required=True, metavar="verb")

    def group_args(sp, optional=False):
        kw = {"nargs": "?", "default": None} if optional else {}
        sp.add_argument("family", help="A, B, D, E, F, H or I2", **kw)
        sp.add_argument("n", type=int, help="rank subscript (the k of I2)", **kw)

    sp = sub.add_parser("potential", parents=[fmt], help="closed potential")
    group_args(sp)
    sp.add_argument(
        "--source", choices=("auto", "substitution", "printed"), default="auto"
    )
    sp.set_defaults(fn=_cmd_potential)

    sp = sub.add_parser("open-potential", parents=[fmt, lam], help="open potential")
    group_args(sp)
    sp.add_argument("--source", choices=("auto", "printed"), default="auto")
    sp.set_defaults(fn=_cmd_open_potential)

    sp = sub.add_parser("flat-coords", parents=[fmt], help="t as polynomials in v")
    group_args(sp)
    sp.set_defaults(fn=lambda a: _coords(a, True))

    sp = sub.add_parser("invert-coords", parents=[fmt], help="v as polynomials in t")
    group_args(sp)
    sp.set_defaults(fn=lambda a: _coords(a, False))

    sp = sub.add_parser("correlators", parents=[fmt], help="boundary correlators")
    group_args(sp)
    sp.add_argument("--max-n", type=int, default=5, help="largest insertion count")
    sp.set_defaults(fn=_cmd_correlators)

    sp = sub.add_parser("verify", parents=[fmt, lam], help="run identity sweeps")
    sp.add_argument("identity", choices=_IDENTITIES)
    group_args(sp, optional=True)
    sp.add_argument(
        "--max-rank", type=int, default=5, help="rank bound for 'verify all'"
    )
    sp.set_defaults(fn=_cmd_verify)

    sp = sub.add_parser(
        "classify", parents=[fmt, lam], help="solve the open system for I2"
    )
    group_args(sp)
    sp.set_defaults(fn=_cmd_classify)

    sp = sub.add_parser(
        "obstruction", parents=[fmt], help="nonexistence checks for a group"
    )
    group_args(sp)
    sp.set_defaults(fn=_cmd_obstruction)

    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (PolyError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
