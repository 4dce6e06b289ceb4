"""Command-line front end.

Exit codes: 0 success, 1 verification failure or inadmissible construction
parameters, 2 parse/shape errors or unknown fixtures.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import sys

import numpy as np

from . import __version__
from .basis import gell_mann_set, partition_set, random_rotated_set
from .conical import (choi_map_residual, equivalence_report, fit_kappas, trace_profile,
                      validate_profile)
from .corpus import fixture, fixture_names
from .document import DocumentError, FamilyDocument, document_from_groups, dump_document, load_document
from .errors import DesignError, Violation
from .getf import Sign, Variant, construct_getf, verify_getf
from .mugetf import NotEquidistant, construct_mu_getf, equidistance, verify_mu_getf

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2
MODES = ("auto", "getf", "mu-getf", "conical")


def _sig12(obj):
    if isinstance(obj, dict):
        return {k: _sig12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sig12(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, np.ndarray):
        return _sig12(obj.tolist())
    return obj


def _params_dict(p) -> dict:
    return {"M": p.M, "gamma": p.gamma, "a": p.a, "b": p.b, "c": p.c}


def _violation_dict(v: Violation) -> dict:
    return {"violation": v.code, "message": v.message, "indices": list(v.indices), "magnitude": v.magnitude}


def _getf_section(doc: FamilyDocument, tol: float) -> tuple[bool, list]:
    ok, out = True, []
    for i, g in enumerate(doc.groups):
        entry = {"group": i, "label": g.label}
        res = verify_getf(g.operators, tol)
        if isinstance(res, Violation):
            ok = False
            entry.update(status="FAIL", **_violation_dict(res))
        else:
            entry.update(status="GETF", **_params_dict(res))
            if g.gamma is not None and abs(g.gamma - res.gamma) > tol * max(1.0, abs(g.gamma)):
                ok = False
                entry.update(status="FAIL", violation="GAMMA-MISMATCH", gamma_declared=g.gamma)
        out.append(entry)
    return ok, out


def _mu_section(doc: FamilyDocument, tol: float) -> tuple[bool, dict]:
    res = verify_mu_getf([g.operators for g in doc.groups], tol)
    if isinstance(res, Violation):
        return False, {"status": "FAIL", **_violation_dict(res)}
    out = {"status": "MU-GETF", "N": res.N, "sizes": list(res.sizes), "maximal": res.is_maximal,
           "f": res.f, "Gamma": res.Gamma, "mu": res.mu, "S_values": list(res.S_values),
           "groups": [_params_dict(g.params) for g in res.groups]}
    S = equidistance(res, tol)
    if isinstance(S, NotEquidistant):
        out["equidistant"] = False
        out["S_spread"] = S.spread
    else:
        out["equidistant"] = True
        out["S"] = S
    return True, out


def _conical_section(doc: FamilyDocument, tol: float) -> tuple[bool, dict]:
    ops = doc.operators
    fit = fit_kappas(ops, tol)
    out = {"verdict": fit.verdict.value, "kappa_plus": fit.kappa_plus, "kappa_minus": fit.kappa_minus,
           "kappa": fit.kappa, "residual": fit.residual, "choi_residual": choi_map_residual(ops, fit),
           "non_psd": list(fit.non_psd)}
    try:
        profile = trace_profile(ops, doc.grouping, tol)
    except DesignError as exc:
        out["trace_profile"] = {"status": exc.code, "message": exc.message}
    else:
        check = validate_profile(profile, fit)
        out["trace_profile"] = {"status": "OK", "kappa_groups": list(profile.kappa_groups),
                                "max_deviation": check.max_deviation, "bounds_ok": check.bounds_ok}
    rep = equivalence_report(ops, doc.grouping, tol)
    out["equivalence"] = {"classification": rep.classification, "precondition": rep.precondition,
                          "statements": list(rep.statements), "eta": list(rep.eta)}
    return fit.is_design, out


def verify_document(doc: FamilyDocument, mode: str = "auto", tol: float = 1e-9) -> tuple[bool, dict]:
    """Run the checks for ``mode``; returns the verdict and the report."""
    report = {"mode": mode, "dimension": doc.dimension, "grouping": doc.grouping}
    verdicts = []
    if mode in ("auto", "getf"):
        ok, report["getf"] = _getf_section(doc, tol)
        verdicts.append(ok)
    if mode in ("auto", "mu-getf"):
        ok, report["mu_getf"] = _mu_section(doc, tol)
        verdicts.append(ok)
    if mode in ("auto", "conical"):
        if doc.dimension < 2:
            report["conical"] = {"verdict": "DIMENSION"}
            verdicts.append(False)
        else:
            ok, report["conical"] = _conical_section(doc, tol)
            verdicts.append(ok)
    # auto succeeds when any of the three classes is recognized
    ok = any(verdicts) if mode == "auto" else verdicts[0]
    report["ok"] = ok
    return ok, report


def _render_text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                         (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            elif isinstance(v, dict):
                lines.append(f"{pad}{k}: " + ", ".join(f"{a}={b}" for a, b in v.items()))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            lines.append(f"{pad}- [{i}]")
            lines.extend(_render_text(v, indent + 1))
    else:
        lines.append(f"{pad}{obj}")
    return lines


def _emit(report, fmt: str, out) -> None:
    data = _sig12(report)
    if fmt == "json":
        out.write(json.dumps(data, indent=1) + "\n")
    else:
        out.write("\n".join(_render_text(data)) + "\n")


def _open_input(path: str):
    return contextlib.nullcontext(sys.stdin) if path == "-" else open(path, encoding="utf-8")


def cmd_verify(args) -> int:
    code = EXIT_OK
    reports = []
    for path in args.paths:
        try:
            with _open_input(path) as fp:
                doc = load_document(fp, args.herm_tol)
        except (OSError, DocumentError) as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            code = EXIT_PARSE
            continue
        ok, rep = verify_document(doc, args.mode, args.tol)
        rep = {"path": path, **rep}
        reports.append(rep)
        if not ok and code == EXIT_OK:
            code = EXIT_FAIL
    if args.format == "json":
        _emit(reports[0] if len(reports) == 1 else reports, "json", sys.stdout)
    else:
        for rep in reports:
            _emit(rep, "text", sys.stdout)
    return code


def _basis(d: int, seed):
    return gell_mann_set(d) if seed is None else random_rotated_set(d, seed)


def _csv(cast):
    def parse(text: str):
        try:
            return [cast(t) for t in text.split(",") if t.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fp:
            fp.write(text)


def cmd_construct(args) -> int:
    try:
        if args.kind == "getf":
            if args.b is None:
                raise DesignError("B-RANGE", "--b is required for a GETF")
            if not 2 <= args.m <= args.d**2:
                raise DesignError("M-RANGE", f"M = {args.m} outside [2, {args.d**2}]")
            group = _basis(args.d, args.seed).traceless[:args.m - 1]
            frame = construct_getf(group, args.gamma, args.b, args.variant, args.sign, args.tol)
            doc = document_from_groups([frame.elements], ["P"], [frame.params.gamma])
        else:
            if args.s is None or args.sizes is None:
                raise DesignError("S-RANGE", "--sizes and --s are required for an MU GETF family")
            part = partition_set(_basis(args.d, args.seed), args.sizes)
            gammas = args.gammas or [args.gamma] * len(args.sizes)
            variants = args.variants or [args.variant] * len(args.sizes)
            signs = args.signs or [args.sign] * len(args.sizes)
            fam = construct_mu_getf(part, gammas, args.s, variants, signs, args.tol)
            doc = document_from_groups([g.elements for g in fam.groups],
                                       [f"P{i + 1}" for i in range(fam.N)], list(fam.gammas))
    except DesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(dump_document(doc), args.out)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    if args.action == "list":
        for name in fixture_names():
            print(name)
        return EXIT_OK
    if not args.name:
        print("error: fixtures dump needs a fixture name", file=sys.stderr)
        return EXIT_PARSE
    try:
        fx = fixture(args.name)
    except DesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    labels = [f"R{i + 1}" for i in range(len(fx.grouping))]
    _write(dump_document(document_from_groups(fx.groups, labels)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="design-forge", description=__doc__.splitlines()[0],
                                formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify family documents", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    v.add_argument("paths", nargs="+", help="document paths, '-' for stdin")
    v.add_argument("--mode", choices=MODES, default="auto")
    v.add_argument("--tol", type=float, default=1e-9, help="verification tolerance")
    v.add_argument("--herm-tol", type=float, default=1e-10, help="Hermiticity tolerance at load")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("construct", help="construct a GETF or MU GETF family",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    c.add_argument("kind", choices=("getf", "mu-getf"))
    c.add_argument("--d", type=int, required=True, help="Hilbert space dimension")
    c.add_argument("--m", type=int, help="number of GETF elements (getf)")
    c.add_argument("--sizes", type=_csv(int), help="comma-separated M_alpha (mu-getf)")
    c.add_argument("--gamma", type=float, default=1.0, help="frame constant for every group")
    c.add_argument("--gammas", type=_csv(float), help="comma-separated gamma_alpha (mu-getf)")
    c.add_argument("--b", type=float, help="purity parameter b (getf)")
    c.add_argument("--s", type=float, help="common Frobenius distance S (mu-getf)")
    c.add_argument("--variant", choices=[x.value for x in Variant], default="plus")
    c.add_argument("--sign", choices=[x.value for x in Sign], default="pos")
    c.add_argument("--variants", type=_csv(str), help="per-group variants (mu-getf)")
    c.add_argument("--signs", type=_csv(str), help="per-group signs (mu-getf)")
    c.add_argument("--seed", type=int, help="use a seeded random rotated basis instead of Gell-Mann")
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--out", default="-", help="output path, '-' for stdout")
    c.set_defaults(func=cmd_construct)

    f = sub.add_parser("fixtures", help="list or dump the built-in fixtures",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    f.add_argument("action", choices=("list", "dump"))
    f.add_argument("name", nargs="?")
    f.add_argument("--out", default="-", help="output path, '-' for stdout")
    f.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "construct" and args.kind == "getf" and args.m is None:
        print("error: --m is required for a GETF", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except ValueError as exc:  # e.g. an unknown variant name in --variants
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
