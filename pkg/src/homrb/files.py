"""Reading and writing algebra definition files (JSON)."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .algebra import AlgebraError, BilinearOp, HomAlgebra, HomModule, Provenance
from .coeff import ExpressionError, FieldElem, FieldMatrix, parse_coefficient

FORMAT = "homrb.algebra/1"


class AlgebraFileError(ValueError):
    """Invalid algebra file; ``where`` names the offending field."""

    def __init__(self, message: str, where: str = "", line: int | None = None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if where:
            loc.append(where)
        super().__init__(f"{': '.join(loc)}: {message}" if loc else message)
        self.where = where
        self.line = line


def _coeff(text, params, where: str) -> FieldElem:
    if isinstance(text, int) and not isinstance(text, bool):
        return FieldElem.coerce(text)
    if not isinstance(text, str):
        raise AlgebraFileError(f"expected a coefficient string, got {text!r}", where)
    try:
        return parse_coefficient(text, params)
    except ExpressionError as exc:
        raise AlgebraFileError(f"{exc} (character {exc.position} of {text!r})", where) from None
    except ZeroDivisionError:
        raise AlgebraFileError(f"division by zero in {text!r}", where) from None


def _matrix(rows, n: int, params, where: str) -> FieldMatrix:
    if not isinstance(rows, list) or len(rows) != n:
        raise AlgebraFileError(f"expected {n} rows", where)
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise AlgebraFileError(f"expected {n} entries", f"{where}[{i}]")
        out.append([_coeff(c, params, f"{where}[{i}][{j}]") for j, c in enumerate(row)])
    return FieldMatrix.from_rows(out)


def _tensor(arr, n: int, params, where: str) -> list:
    if not isinstance(arr, list) or len(arr) != n:
        raise AlgebraFileError(f"expected a {n}x{n}x{n} array", where)
    out = []
    for i, plane in enumerate(arr):
        if not isinstance(plane, list) or len(plane) != n:
            raise AlgebraFileError(f"expected {n} rows", f"{where}[{i}]")
        row = []
        for j, vec in enumerate(plane):
            if not isinstance(vec, list) or len(vec) != n:
                raise AlgebraFileError(f"expected {n} coefficients", f"{where}[{i}][{j}]")
            row.append(tuple(_coeff(c, params, f"{where}[{i}][{j}][{k}]") for k, c in enumerate(vec)))
        out.append(row)
    return out


def algebra_from_dict(data: dict[str, Any]) -> HomAlgebra:
    if not isinstance(data, dict):
        raise AlgebraFileError("top level must be an object")
    fmt = data.get("format", FORMAT)
    if fmt != FORMAT:
        raise AlgebraFileError(f"unsupported format {fmt!r}", "format")
    params = data.get("parameters", [])
    if not isinstance(params, list) or not all(isinstance(p, str) and p.isidentifier() for p in params):
        raise AlgebraFileError("parameters must be a list of identifiers", "parameters")
    if len(set(params)) != len(params):
        raise AlgebraFileError("duplicate parameter", "parameters")
    params = tuple(params)
    n = data.get("dim")
    if not isinstance(n, int) or n < 1:
        raise AlgebraFileError("dim must be a positive integer", "dim")
    labels = data.get("basis") or [f"e{i + 1}" for i in range(n)]
    if not isinstance(labels, list) or len(labels) != n or len(set(labels)) != n:
        raise AlgebraFileError(f"basis must list {n} distinct labels", "basis")
    alpha = _matrix(data["alpha"], n, params, "alpha") if "alpha" in data else FieldMatrix.identity(n)
    products = data.get("products")
    if not isinstance(products, dict) or not products:
        raise AlgebraFileError("products must be a non-empty object", "products")
    prods = {name: BilinearOp(name, _tensor(t, n, params, f"products.{name}")) for name, t in products.items()}
    ops = {name: _matrix(m, n, params, f"operators.{name}") for name, m in (data.get("operators") or {}).items()}
    weight = data.get("weight")
    weight = _coeff(weight, params, "weight") if weight is not None else None
    prov = data.get("provenance")
    provenance = None
    if prov:
        provenance = Provenance(prov.get("construction", ""), prov.get("source", ""),
                                dict(prov.get("parameters", {})), tuple(prov.get("source_products", ())))
    try:
        return HomAlgebra(
            name=data.get("name", "algebra"),
            module=HomModule(n, tuple(labels), alpha),
            products=prods, operators=ops, weight=weight, parameters=params,
            kind=data.get("kind"), provenance=provenance,
        )
    except AlgebraError as exc:
        raise AlgebraFileError(str(exc)) from None


def algebra_to_dict(A: HomAlgebra) -> dict[str, Any]:
    mat = lambda m: [[str(c) for c in row] for row in m.to_rows()]
    out: dict[str, Any] = {
        "format": FORMAT,
        "name": A.name,
        "parameters": list(A.parameters),
        "dim": A.dim,
        "basis": list(A.labels),
        "products": {name: [[[str(c) for c in v] for v in row] for row in op.table]
                     for name, op in A.products.items()},
        "alpha": mat(A.alpha),
        "operators": {name: mat(m) for name, m in A.operators.items()},
    }
    if A.weight is not None:
        out["weight"] = str(A.weight)
    if A.kind is not None:
        out["kind"] = A.kind
    if A.provenance is not None:
        out["provenance"] = A.provenance.to_dict()
    return out


def loads_algebra(text: str) -> HomAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(f"invalid JSON: {exc.msg} (column {exc.colno})", line=exc.lineno) from None
    return algebra_from_dict(data)


def load_algebra(path: str | Path) -> HomAlgebra:
    return loads_algebra(Path(path).read_text(encoding="utf-8"))


def dumps_algebra(A: HomAlgebra) -> str:
    return json.dumps(algebra_to_dict(A), indent=1, ensure_ascii=False) + "\n"


def dump_algebra(A: HomAlgebra, path: str | Path) -> None:
    Path(path).write_text(dumps_algebra(A), encoding="utf-8")


def algebras_equal(A: HomAlgebra, B: HomAlgebra) -> bool:
    """Structural equality: same labels, parameters, products, alpha, operators, weight."""
    if (A.dim, A.labels, A.parameters, A.kind) != (B.dim, B.labels, B.parameters, B.kind):
        return False
    if set(A.products) != set(B.products) or set(A.operators) != set(B.operators):
        return False
    if not A.alpha.equals(B.alpha):
        return False
    if any(not A.products[k].equals(B.products[k]) for k in A.products):
        return False
    if any(not A.operators[k].equals(B.operators[k]) for k in A.operators):
        return False
    if (A.weight is None) != (B.weight is None):
        return False
    return A.weight is None or A.weight == B.weight
