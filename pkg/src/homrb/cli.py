"""Command-line interface: check, construct, free, eval-tree, search-rb.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 for input errors (bad files, unknown names, budget exceeded).
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from pathlib import Path
from typing import Any

from . import __version__
from .algebra import AlgebraError
from .checkers import check_identity, resolve_weight
from .coeff import ExpressionError, FieldMatrix, parse_coefficient
from .constructors import CATALOG, ConstructionError, HypothesisError, construct
from .files import AlgebraFileError, algebra_to_dict, dump_algebra, load_algebra
from .free import (
    DCategoryObject,
    TruncationOverflow,
    free_basis,
    gamma_eval,
    ideal_span,
    induced_morphism,
    project,
    quotient_dim,
    relation_generators,
)
from .report import CheckReport
from .trees import TreeConstraintError, TreeSyntaxError, parse_tree, render

SCHEMA = "homrb.report/1"
DEFAULT_BUDGET = 200_000


class InputError(Exception):
    pass


def _report(command: list[str], checks: list[CheckReport], labels, start: float, **extra) -> dict[str, Any]:
    out = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "checks": [c.to_dict(labels) for c in checks],
        "passed": all(c.passed for c in checks),
    }
    out.update(extra)
    out["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return out


def _argv(args) -> list[str]:
    return args.argv if args.argv is not None else sys.argv[1:]


def _emit(report: dict, path: str | None) -> None:
    if path:
        Path(path).write_text(json.dumps(report, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")


def _print_checks(checks: list[CheckReport], labels) -> None:
    for c in checks:
        line = f"{c.identity}: {c.verdict}"
        if c.witness is not None:
            w = c.witness
            names = ",".join(labels[i] for i in w.indices) if labels and all(i < len(labels) for i in w.indices) else w.indices
            line += f"  witness ({names})"
            if w.equation:
                line += f" [{w.equation}]"
            line += "  defect (" + ", ".join(str(x) for x in w.defect) + ")"
        print(line)


def _weight_arg(A, text):
    if text is None:
        return None
    try:
        return parse_coefficient(text, A.parameters)
    except ExpressionError as exc:
        raise InputError(f"--weight: {exc}") from None


def _matrix_arg(A, text: str) -> FieldMatrix | str:
    """An operator name from the file, or a JSON list of rows of coefficient strings."""
    if text in A.operators:
        return text
    try:
        rows = json.loads(text)
    except json.JSONDecodeError:
        raise InputError(f"expected an operator name or a JSON matrix, got {text!r}") from None
    return FieldMatrix.from_rows([[parse_coefficient(str(c), A.parameters) for c in row] for row in rows])


# ---- commands ----------------------------------------------------------------------

def cmd_check(args) -> int:
    start = time.perf_counter()
    A = load_algebra(args.file)
    if args.alpha_identity:
        A = A.evolve(alpha=FieldMatrix.identity(A.dim))
    weight = _weight_arg(A, args.weight)
    beta = _matrix_arg(A, args.beta) if args.beta else None
    checks = []
    for ident in args.identity:
        checks.append(check_identity(A, ident, product=args.product, operator=args.operator,
                                     weight=weight, group=args.group, beta=beta))
    _print_checks(checks, A.labels)
    _emit(_report(_argv(args), checks, A.labels, start, algebra=A.name),
          args.report)
    return 0 if all(checks) else 1


def _parse_params(A, items: list[str]) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for item in items or []:
        if "=" not in item:
            raise InputError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        if key in ("n", "m"):
            params[key] = int(value)
        elif key == "beta":
            params[key] = _matrix_arg(A, value)
        elif key == "weight":
            params[key] = _weight_arg(A, value)
        else:
            params[key] = value
    return params


def cmd_construct(args) -> int:
    start = time.perf_counter()
    A = load_algebra(args.file)
    params = _parse_params(A, args.param)
    for key in ("operator", "product"):
        if getattr(args, key):
            params[key] = getattr(args, key)
    if args.weight is not None:
        params["weight"] = _weight_arg(A, args.weight)
    try:
        out = construct(A, args.name, params, verify_hypotheses=not args.no_verify)
    except HypothesisError as exc:
        print(f"hypothesis failed for {exc.construction}:")
        _print_checks([exc.report], A.labels)
        _emit(_report(_argv(args), [exc.report], A.labels, start, construction=exc.construction),
              args.report)
        return 1
    conclusions = list(out.provenance.conclusions)
    if args.out:
        dump_algebra(out, args.out)
    _print_checks(conclusions, out.labels)
    print(f"constructed {out.name}" + (f" -> {args.out}" if args.out else ""))
    _emit(_report(_argv(args), conclusions, out.labels, start, algebra=algebra_to_dict(out)),
          args.report)
    return 0 if all(conclusions) else 1


def _load_map(text: str, A, B) -> FieldMatrix:
    if text == "identity":
        if A.dim != B.dim:
            raise InputError("identity map needs equal dimensions")
        return FieldMatrix.identity(A.dim)
    if text == "zero":
        return FieldMatrix.zeros(B.dim, A.dim)
    data = json.loads(Path(text).read_text(encoding="utf-8"))
    rows = data["matrix"] if isinstance(data, dict) else data
    params = tuple(dict.fromkeys(A.parameters + B.parameters))
    m = FieldMatrix.from_rows([[parse_coefficient(str(c), params) for c in row] for row in rows])
    if m.shape != (B.dim, A.dim):
        raise InputError(f"map must be {B.dim}x{A.dim}")
    return m


def cmd_free(args) -> int:
    start = time.perf_counter()
    A = load_algebra(args.file)
    C = args.max_complexity
    if C < 1:
        raise InputError("--max-complexity must be at least 1")
    F = free_basis(A.module, C, overflow=args.overflow)
    argv = _argv(args)
    if args.list_basis:
        lines = F.basis_strings()
        for line in lines:
            print(line)
        _emit(_report(argv, [], A.labels, start, basis=lines, dim=len(lines), bound=C), args.report)
        return 0
    if args.quotient:
        lam = _weight_arg(A, args.weight) if args.weight is not None else A.weight
        if lam is None:
            raise InputError("--quotient needs --weight (or a weight in the file)")
        G = args.quotient.upper()
        gens = relation_generators(F, G, lam)
        span = ideal_span(F, gens)
        nonzero = [g for g in gens if not project(F, span, g).is_zero()]
        q = quotient_dim(F, span)
        info = {"group": G, "weight": str(lam), "bound": C, "dim_free": F.dim, "relations": len(gens),
                "skipped_instances": gens.skipped, "span_rank": span.rank, "quotient_dim": q,
                "closure_passes": span.passes, "truncated": True}
        print(f"truncated quotient at C={C}: dim F = {F.dim}, relations = {len(gens)} "
              f"(skipped {gens.skipped}), span rank = {span.rank}, quotient dim = {q}")
        _emit(_report(argv, [], A.labels, start, quotient=info), args.report)
        return 0 if not nonzero else 1
    if args.universal:
        target_file, map_text = args.universal
        T = load_algebra(target_file)
        B = DCategoryObject(T, args.product, args.operator)
        f = _load_map(map_text, A, T)
        try:
            _, rep = induced_morphism(F, f, B)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        _print_checks([rep], None)
        _emit(_report(argv, [rep], None, start, bound=C, dim_free=F.dim), args.report)
        return 0 if rep else 1
    raise InputError("choose one of --list-basis, --quotient, --universal")


def cmd_eval_tree(args) -> int:
    start = time.perf_counter()
    tau = parse_tree(args.tree)
    names = [s.strip() for s in args.args.split(",")] if args.args else []
    if (names or args.algebra) and len(names) != tau.leaves:
        raise InputError(f"tree has {tau.leaves} leaves but {len(names)} arguments were given")
    word = render(tau, names or None)
    print(word)
    extra: dict[str, Any] = {"tree": args.tree, "word": word}
    if args.algebra:
        A = load_algebra(args.algebra)
        B = DCategoryObject(A, args.product, args.operator) if A.operators else _NoOperator(A, args.product)
        vectors = [A.label_vector(n) for n in names]
        value = gamma_eval(tau, vectors, B)
        shown = A.format_vector(value)
        print(shown)
        extra["value"] = [str(c) for c in value]
        extra["value_text"] = shown
    _emit(_report(_argv(args), [], None, start, **extra), args.report)
    return 0


class _NoOperator:
    def __init__(self, A, product):
        self.A, self.p = A, A.resolve_product(product)

    def mu(self, x, y):
        return self.A.products[self.p](x, y)

    def alpha(self, x):
        return self.A.alpha.apply(x)

    def R(self, x):
        raise InputError("the algebra has no operator")


def cmd_search_rb(args) -> int:
    start = time.perf_counter()
    A = load_algebra(args.file)
    lam = _weight_arg(A, args.weight)
    prod = A.resolve_product(args.product)
    argv = _argv(args)
    if args.strategy == "verify":
        if not A.operators:
            raise InputError("verify mode needs operators in the file")
        checks = [check_identity(A, "rota_baxter", product=prod, operator=name, weight=lam) for name in A.operators]
        for name, c in zip(A.operators, checks):
            print(f"{name}: {c.verdict}")
        found = [n for n, c in zip(A.operators, checks) if c]
        _emit(_report(argv, checks, A.labels, start, operators=found), args.report)
        return 0 if all(checks) else 1
    if args.values is None:
        raise InputError("grid mode needs --values")
    values = [parse_coefficient(v.strip(), A.parameters) for v in args.values.split(",") if v.strip()]
    cells = A.dim * A.dim
    total = len(values) ** cells
    if total > args.budget:
        raise InputError(f"grid of {total} candidates exceeds the budget {args.budget}")
    lam = resolve_weight(A, lam)
    found = []
    for entries in itertools.product(values, repeat=cells):
        R = FieldMatrix(A.dim, A.dim, entries)
        if check_identity(A, "rota_baxter", product=prod, operator=R, weight=lam):
            found.append([[str(c) for c in row] for row in R.to_rows()])
    for m in found:
        print(json.dumps(m))
    print(f"{len(found)} of {total} candidates satisfy the Rota-Baxter identity at weight {lam}")
    _emit(_report(argv, [], A.labels, start, operators=found, candidates=total), args.report)
    return 0


# ---- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homrb", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"homrb {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide identities on an algebra file")
    c.add_argument("file")
    c.add_argument("--identity", action="append", required=True,
                   help="identity id (repeatable): skew_symmetry, hom_jacobi, g1..g6, rota_baxter, ...")
    c.add_argument("--product")
    c.add_argument("--operator")
    c.add_argument("--weight")
    c.add_argument("--group", help="subgroup for g_hom_associative (G1..G6)")
    c.add_argument("--beta", help="operator name or JSON matrix for centroid_member")
    c.add_argument("--alpha-identity", action="store_true", help="replace alpha by the identity map")
    c.add_argument("--report", help="write the JSON report here")
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("construct", help="apply a construction and write the new algebra")
    k.add_argument("file")
    k.add_argument("--name", required=True, help=f"one of: {', '.join(sorted(CATALOG))}")
    k.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="construction parameter, e.g. n=2, beta='[[\"1\",\"0\"],[\"0\",\"2\"]]'")
    k.add_argument("--operator")
    k.add_argument("--product")
    k.add_argument("--weight")
    k.add_argument("--no-verify", action="store_true", help="skip hypothesis and conclusion checks")
    k.add_argument("--out")
    k.add_argument("--report")
    k.set_defaults(func=cmd_construct)

    f = sub.add_parser("free", help="truncated free object computations")
    f.add_argument("file")
    f.add_argument("--max-complexity", type=int, required=True)
    mode = f.add_mutually_exclusive_group(required=True)
    mode.add_argument("--list-basis", action="store_true")
    mode.add_argument("--quotient", metavar="G")
    mode.add_argument("--universal", nargs=2, metavar=("TARGET", "MAP"),
                      help="target algebra file and map (JSON matrix file, 'identity' or 'zero')")
    f.add_argument("--weight")
    f.add_argument("--product", help="target product for --universal")
    f.add_argument("--operator", help="target operator for --universal")
    f.add_argument("--overflow", choices=("error", "drop"), default="error")
    f.add_argument("--report")
    f.set_defaults(func=cmd_free)

    e = sub.add_parser("eval-tree", help="evaluate a decorated tree")
    e.add_argument("--tree", required=True)
    e.add_argument("--algebra")
    e.add_argument("--product")
    e.add_argument("--operator")
    e.add_argument("--args", default="", help="comma-separated basis labels, one per leaf")
    e.add_argument("--report")
    e.set_defaults(func=cmd_eval_tree)

    s = sub.add_parser("search-rb", help="verify or grid-search Rota-Baxter operators")
    s.add_argument("file")
    s.add_argument("--product")
    s.add_argument("--weight")
    s.add_argument("--strategy", choices=("verify", "grid"), default="verify")
    s.add_argument("--values", help="comma-separated coefficient values for grid mode")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum number of grid candidates")
    s.add_argument("--report")
    s.set_defaults(func=cmd_search_rb)
    return p


INPUT_ERRORS = (InputError, AlgebraFileError, AlgebraError, ConstructionError, ExpressionError,
                TreeSyntaxError, TreeConstraintError, TruncationOverflow, OSError, ValueError, KeyError)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = list(argv) if argv is not None else None
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
