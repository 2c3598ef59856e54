"""Command-line front end.

Commands: check, analyze, sectional, scalar, parallel, randers, flag,
report, catalog list. Input is a JSON algebra document or --case N for a
built-in fixture (with --alpha/--beta/--drift overrides). Exit codes:
0 success, 1 input error, 2 mathematical precondition violation,
3 nonempty discrepancy ledger under --strict.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import catalog
from .algebra import Vector, check_jacobi
from .documents import Document, document_digest, load_document
from .errors import InputError, LiecurvError, NonBerwaldError, PreconditionError
from .randers import (Flag, build_randers, flag_curvature, g_y,
                      parallel_fields, randers_norm)
from .riemann import levi_civita, riemann_tensor, scalar_curvature, sectional
from .scalars import format_scalar, parse_rational, scalar_to_json


@dataclasses.dataclass
class CommandResult:
    sections: dict
    text: list
    discrepancies: list = dataclasses.field(default_factory=list)
    status: int = 0
    digest: str | None = None


def _parse_vector(text: str, dim: int, flag_name: str) -> Vector:
    parts = text.split(",")
    if len(parts) != dim:
        raise InputError(f"{flag_name} needs {dim} comma-separated components")
    try:
        return Vector(parse_rational(p) for p in parts)
    except InputError as exc:
        raise InputError(f"{flag_name}: {exc}") from None


def _parse_grid(text: str, flag_name: str) -> list:
    lo, sep, hi = text.partition(":")
    try:
        lo_n, hi_n = int(lo), int(hi)
    except ValueError:
        raise InputError(f"{flag_name} must look like lo:hi, got {text!r}") from None
    if not sep or lo_n > hi_n:
        raise InputError(f"{flag_name} must be an inclusive integer range lo:hi")
    return list(range(lo_n, hi_n + 1))


def _resolve_document(args) -> tuple[Document, catalog.CatalogCase | None]:
    """Load from file or catalog, apply --drift/--alpha/--beta overrides."""
    if args.document and args.case is not None:
        raise InputError("give either a document file or --case, not both")
    if args.case is not None:
        case = catalog.get_case(args.case, alpha=args.alpha, beta=args.beta)
        doc = case.document
    else:
        if not args.document:
            raise InputError("no input: give a document file or --case N")
        if args.alpha is not None or args.beta is not None:
            raise InputError("--alpha/--beta only apply with --case; "
                             "put params in the document instead")
        doc = load_document(args.document)
        case = None
    if args.drift is not None:
        drift = _parse_vector(args.drift, doc.dim, "--drift")
        doc = dataclasses.replace(doc, drift=drift)
        if case is not None:
            case = dataclasses.replace(case, document=doc)
    return doc, case


def _vector_json(v: Vector, precision: int) -> list:
    return [scalar_to_json(x, precision) for x in v]


def _connection_entries(conn, precision: int) -> list:
    out = []
    for i in range(conn.dim):
        for j in range(conn.dim):
            value = conn.nabla(i, j)
            if not value.is_zero():
                out.append({"i": i, "j": j, "coeffs": _vector_json(value, precision)})
    return out


def _curvature_entries(rt, precision: int) -> list:
    out = []
    for i in range(rt.dim):
        for j in range(i + 1, rt.dim):
            for k in range(rt.dim):
                value = rt.basis_value(i, j, k)
                if not value.is_zero():
                    out.append({"i": i, "j": j, "k": k,
                                "coeffs": _vector_json(value, precision)})
    return out


# --- commands -----------------------------------------------------------------


def cmd_check(args) -> CommandResult:
    doc, _ = _resolve_document(args)
    alg = doc.algebra()
    report = check_jacobi(alg)
    pd = doc.metric.is_positive_definite()
    passed = report.passed and pd
    sections = {
        "jacobi": report.to_dict(args.precision),
        "metric_positive_definite": pd,
        "passed": passed,
    }
    text = [f"antisymmetry: {'pass' if report.antisymmetry_ok else 'FAIL'}",
            f"jacobi: {'pass' if not report.violations else 'FAIL'}"]
    for (i, j, k, res) in report.violations:
        triple = ", ".join(alg.labels[t] for t in (i, j, k))
        text.append(f"  residual on ({triple}): {res.describe(alg.labels)}")
    text.append(f"metric: {'positive definite' if pd else 'NOT positive definite'}")
    text.append(f"check: {'pass' if passed else 'FAIL'}")
    return CommandResult(sections, text, status=0 if passed else 1,
                         digest=document_digest(doc))


def cmd_analyze(args) -> CommandResult:
    doc, case = _resolve_document(args)
    alg = doc.algebra()
    labels = alg.labels
    jac = check_jacobi(alg)
    conn = levi_civita(alg, doc.metric)
    rt = riemann_tensor(conn)
    scalar = scalar_curvature(rt, doc.metric)
    par = parallel_fields(conn)
    planes = []
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            num, value = sectional(rt, doc.metric, Vector.basis(alg.dim, i),
                                   Vector.basis(alg.dim, j))
            planes.append((i, j, num, value))

    p = args.precision
    sections = {
        "jacobi_passed": jac.passed,
        "connection": _connection_entries(conn, p),
        "curvature": _curvature_entries(rt, p),
        "sectional_basis_planes": [
            {"i": i, "j": j, "numerator": scalar_to_json(num, p),
             "value": scalar_to_json(value, p)} for (i, j, num, value) in planes],
        "scalar": scalar_to_json(scalar, p),
        "parallel": [_vector_json(v, p) for v in par],
    }
    discrepancies = []
    if case is not None:
        sections["case"] = case.id
        sections["name"] = case.name
        rep = catalog.reproduce(case)
        sections["reproduce"] = rep.to_dict(p)
        discrepancies = [d.to_dict() for d in rep.discrepancies]

    text = []
    if case is not None:
        text.append(f"case {case.id}: {case.name}")
    text.append(f"jacobi: {'pass' if jac.passed else 'FAIL'}")
    text.append("connection (nonzero covariant derivatives):")
    entries = [(i, j, conn.nabla(i, j)) for i in range(alg.dim) for j in range(alg.dim)]
    for i, j, value in entries:
        if not value.is_zero():
            text.append(f"  nabla_{labels[i]} {labels[j]} = {value.describe(labels)}")
    text.append("curvature (nonzero R(,), first pair i<j):")
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            for k in range(alg.dim):
                value = rt.basis_value(i, j, k)
                if not value.is_zero():
                    text.append(f"  R({labels[i]},{labels[j]}){labels[k]} = "
                                f"{value.describe(labels)}")
    text.append("sectional curvature of basis planes:")
    for (i, j, _, value) in planes:
        text.append(f"  K({labels[i]},{labels[j]}) = {format_scalar(value, p)}")
    text.append(f"scalar curvature: {format_scalar(scalar, p)}")
    text.append("parallel fields: "
                + (", ".join(v.describe(labels) for v in par) if par else "none"))
    if case is not None:
        rep_passed = sections["reproduce"]["passed"]
        text.append(f"fixture reproduction: {'pass' if rep_passed else 'FAIL'}"
                    + (f" ({len(discrepancies)} discrepancy entries)" if discrepancies else ""))
    return CommandResult(sections, text, discrepancies=discrepancies,
                         digest=document_digest(doc))


def _two_vectors(args, doc: Document, names: tuple[str, str]) -> tuple[Vector, Vector]:
    raw_u = getattr(args, names[0], None)
    raw_v = getattr(args, names[1], None)
    if raw_u is None or raw_v is None:
        raise InputError(f"--{names[0]} and --{names[1]} are both required")
    return (_parse_vector(raw_u, doc.dim, f"--{names[0]}"),
            _parse_vector(raw_v, doc.dim, f"--{names[1]}"))


def cmd_sectional(args) -> CommandResult:
    doc, _ = _resolve_document(args)
    u, v = _two_vectors(args, doc, ("u", "v"))
    conn = levi_civita(doc.algebra(), doc.metric)
    rt = riemann_tensor(conn)
    num, value = sectional(rt, doc.metric, u, v)
    p = args.precision
    sections = {"numerator": scalar_to_json(num, p), "value": scalar_to_json(value, p)}
    text = [f"numerator: {format_scalar(num, p)}",
            f"sectional curvature: {format_scalar(value, p)}"]
    return CommandResult(sections, text, digest=document_digest(doc))


def cmd_scalar(args) -> CommandResult:
    doc, _ = _resolve_document(args)
    conn = levi_civita(doc.algebra(), doc.metric)
    value = scalar_curvature(riemann_tensor(conn), doc.metric)
    sections = {"scalar": scalar_to_json(value, args.precision)}
    return CommandResult(sections, [f"scalar curvature: {format_scalar(value, args.precision)}"],
                         digest=document_digest(doc))


def cmd_parallel(args) -> CommandResult:
    doc, _ = _resolve_document(args)
    alg = doc.algebra()
    par = parallel_fields(levi_civita(alg, doc.metric))
    sections = {"basis": [_vector_json(v, args.precision) for v in par],
                "dimension": len(par)}
    text = [f"parallel fields: dimension {len(par)}"]
    text += [f"  {v.describe(alg.labels)}" for v in par]
    return CommandResult(sections, text, digest=document_digest(doc))


def cmd_randers(args) -> CommandResult:
    doc, _ = _resolve_document(args)
    if doc.drift is None:
        raise InputError("randers needs a drift: give --drift or a document drift field")
    alg = doc.algebra()
    labels = alg.labels
    conn = levi_civita(alg, doc.metric)
    rm = build_randers(doc.metric, doc.drift, conn)
    if not rm.berwald:
        raise NonBerwaldError(
            "drift is not parallel (nabla Q != 0): not a Berwald-type metric; "
            "run `parallel` to list the admissible drifts")
    p = args.precision
    sections = {
        "drift": _vector_json(rm.drift, p),
        "drift_norm_sq": scalar_to_json(rm.drift_norm_sq, p),
        "berwald": rm.berwald,
        "parallel_basis": [_vector_json(v, p) for v in parallel_fields(conn)],
        "norms": {labels[i]: scalar_to_json(randers_norm(rm, Vector.basis(alg.dim, i)), p)
                  for i in range(alg.dim)},
    }
    text = [f"drift: {rm.drift.describe(labels)}",
            f"g(Q,Q): {format_scalar(rm.drift_norm_sq, p)}",
            f"berwald: {str(rm.berwald).lower()}",
            "F on the basis: "
            + ", ".join(f"F({labels[i]}) = {format_scalar(randers_norm(rm, Vector.basis(alg.dim, i)), p)}"
                        for i in range(alg.dim))]
    if args.pole is not None:
        pole = _parse_vector(args.pole, doc.dim, "--pole")
        basis = [Vector.basis(alg.dim, i) for i in range(alg.dim)]
        table = [[g_y(rm, pole, bi, bj) for bj in basis] for bi in basis]
        sections["pole"] = _vector_json(pole, p)
        sections["g_pole"] = [[scalar_to_json(x, p) for x in row] for row in table]
        sections["f_pole"] = scalar_to_json(randers_norm(rm, pole), p)
        text.append(f"F(pole) = {format_scalar(randers_norm(rm, pole), p)}")
        text.append("fundamental tensor at the pole:")
        for row in table:
            text.append("  [" + ", ".join(format_scalar(x, p) for x in row) + "]")
        if args.edge is not None:
            edge = _parse_vector(args.edge, doc.dim, "--edge")
            rt = riemann_tensor(conn)
            value = flag_curvature(rm, rt, Flag(pole, edge))
            sections["flag_curvature"] = scalar_to_json(value, p)
            text.append(f"flag curvature: {format_scalar(value, p)}")
    elif args.edge is not None:
        raise InputError("--edge needs --pole")
    return CommandResult(sections, text, digest=document_digest(doc))


def cmd_flag(args) -> CommandResult:
    doc, _ = _resolve_document(args)
    if doc.drift is None:
        raise InputError("flag needs a drift: give --drift or a document drift field")
    pole, edge = _two_vectors(args, doc, ("pole", "edge"))
    conn = levi_civita(doc.algebra(), doc.metric)
    rm = build_randers(doc.metric, doc.drift, conn)
    value = flag_curvature(rm, riemann_tensor(conn), Flag(pole, edge))
    sections = {"flag_curvature": scalar_to_json(value, args.precision)}
    return CommandResult(sections, [f"flag curvature: {format_scalar(value, args.precision)}"],
                         digest=document_digest(doc))


def cmd_report(args) -> CommandResult:
    if args.all == (args.case is not None):
        raise InputError("report needs exactly one of --all or --case N")
    ids = catalog.case_ids() if args.all else [args.case]
    alpha_grid = _parse_grid(args.alpha_grid, "--alpha-grid")
    beta_grid = _parse_grid(args.beta_grid, "--beta-grid")
    reports = []
    for cid in ids:
        if cid not in catalog.case_ids():
            raise InputError(f"no catalog case {cid}; valid ids: {catalog.case_ids()}")
        entry_needs_params = bool(catalog.case_summaries()[catalog.case_ids().index(cid)]["parameters"])
        if entry_needs_params:
            for alpha in alpha_grid:
                for beta in beta_grid:
                    reports.append(catalog.reproduce(catalog.get_case(cid, alpha=alpha, beta=beta)))
        else:
            reports.append(catalog.reproduce(catalog.get_case(cid)))
    p = args.precision
    passed = all(r.passed for r in reports)
    discrepancies = [d.to_dict() for r in reports for d in r.discrepancies]
    sections = {"cases": [r.to_dict(p) for r in reports], "passed": passed}
    text = []
    for r in reports:
        tag = f"case {r.case_id}"
        if r.params:
            tag += " [" + ", ".join(f"{k}={format_scalar(v, p)}"
                                    for k, v in sorted(r.params.items())) + "]"
        text.append(f"{tag}: {'pass' if r.passed else 'FAIL'} ({len(r.items)} items)")
        for item in r.items:
            if not item.passed:
                text.append(f"  FAIL {item.name}: {item.detail}")
    if discrepancies:
        text.append(f"discrepancies ({len(discrepancies)}):")
        for d in discrepancies:
            note = ", annotated" if d["annotated"] else ""
            text.append(f"  case {d['case']} {d['item']}: paper {d['paper_value']}, "
                        f"computed {d['computed_value']} "
                        f"(fixture line {d['fixture_line']}{note})")
    else:
        text.append("discrepancies: none")
    text.append(f"overall: {'pass' if passed else 'FAIL'}")
    result = CommandResult(sections, text, discrepancies=discrepancies)
    if args.out:
        envelope = _envelope("report", result)
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(envelope, fh, sort_keys=True, indent=2)
                fh.write("\n")
        except OSError as exc:
            raise InputError(f"cannot write report {args.out!r}: {exc}") from None
        text.append(f"wrote {args.out}")
    return result


def cmd_catalog(args) -> CommandResult:
    rows = catalog.case_summaries()
    sections = {"cases": rows}
    text = []
    for row in rows:
        suffix = ""
        if row["parameters"]:
            suffix = "  (requires --" + ", --".join(row["parameters"]) + ")"
        text.append(f"  {row['id']}  {row['name']}{suffix}")
    return CommandResult(sections, text)


# --- dispatch -----------------------------------------------------------------


def _envelope(command: str, result: CommandResult) -> dict:
    return {
        "command": command,
        "digest": result.digest,
        "sections": result.sections,
        "discrepancies": result.discrepancies,
        "status": result.status,
    }


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--precision", type=int, default=12,
                        help="significant digits for floating output")
    common.add_argument("--strict", action="store_true",
                        help="exit 3 when the discrepancy ledger is nonempty")

    doc_input = argparse.ArgumentParser(add_help=False)
    doc_input.add_argument("document", nargs="?",
                           help="path to a JSON algebra document")
    doc_input.add_argument("--case", type=int, help="built-in catalog case id")
    doc_input.add_argument("--alpha", help="case parameter (with --case)")
    doc_input.add_argument("--beta", help="case parameter (with --case)")
    doc_input.add_argument("--drift", help="drift vector, e.g. 0,0,1/2,0")

    parser = argparse.ArgumentParser(
        prog="liecurv",
        description="Left-invariant Riemannian and Randers geometry from "
                    "Lie algebra structure constants.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    sub.add_parser("check", parents=[common, doc_input],
                   help="validate a document: antisymmetry, Jacobi, metric")
    sub.add_parser("analyze", parents=[common, doc_input],
                   help="connection, curvature, sectional, scalar, parallel")
    p = sub.add_parser("sectional", parents=[common, doc_input],
                       help="sectional curvature of span{u, v}")
    p.add_argument("--u", required=True, help="first spanning vector")
    p.add_argument("--v", required=True, help="second spanning vector")
    sub.add_parser("scalar", parents=[common, doc_input],
                   help="scalar curvature")
    sub.add_parser("parallel", parents=[common, doc_input],
                   help="basis of parallel left-invariant fields")
    p = sub.add_parser("randers", parents=[common, doc_input],
                       help="Randers metric report for a parallel drift")
    p.add_argument("--pole", help="reference vector for the fundamental tensor")
    p.add_argument("--edge", help="with --pole: edge vector for flag curvature")
    p = sub.add_parser("flag", parents=[common, doc_input],
                       help="flag curvature of one flag")
    p.add_argument("--pole", required=True)
    p.add_argument("--edge", required=True)
    p = sub.add_parser("report", parents=[common],
                       help="reproduce catalog fixtures and diff")
    p.add_argument("--all", action="store_true", help="all six cases")
    p.add_argument("--case", type=int, help="one case id")
    p.add_argument("--alpha-grid", default="-2:1", help="inclusive grid lo:hi")
    p.add_argument("--beta-grid", default="-2:1", help="inclusive grid lo:hi")
    p.add_argument("--out", help="write the JSON report to this file")
    p = sub.add_parser("catalog", parents=[common],
                       help="catalog operations")
    p.add_argument("action", choices=("list",))
    return parser


_COMMANDS = {
    "check": cmd_check,
    "analyze": cmd_analyze,
    "sectional": cmd_sectional,
    "scalar": cmd_scalar,
    "parallel": cmd_parallel,
    "randers": cmd_randers,
    "flag": cmd_flag,
    "report": cmd_report,
    "catalog": cmd_catalog,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = _COMMANDS[args.cmd](args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LiecurvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.strict and result.discrepancies and result.status == 0:
        result.status = 3
    if args.format == "json":
        print(json.dumps(_envelope(args.cmd, result), sort_keys=True, indent=2))
    else:
        for line in result.text:
            print(line)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
