"""Finite-dimensional Hom-algebras given by structure constants."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Mapping, Sequence

from .coeff import (
    FieldElem,
    FieldMatrix,
    Vector,
    basis_vector,
    vec_add,
    vec_is_zero,
    vec_sub,
    zero_vector,
)
from .report import CheckReport, Witness

KINDS = ("associative", "dendriform", "tridendriform", "lie")
DENDRIFORM_PRODUCTS = ("prec", "succ")
TRIDENDRIFORM_PRODUCTS = ("prec", "succ", "dot")


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class HomModule:
    dim: int
    basis_labels: tuple[str, ...]
    alpha: FieldMatrix

    def __post_init__(self):
        if self.dim < 1:
            raise AlgebraError("dimension must be positive")
        if len(self.basis_labels) != self.dim or len(set(self.basis_labels)) != self.dim:
            raise AlgebraError("basis labels must be dim distinct strings")
        if self.alpha.shape != (self.dim, self.dim):
            raise AlgebraError(f"alpha must be {self.dim}x{self.dim}")

    @classmethod
    def plain(cls, dim: int, alpha: FieldMatrix | None = None, labels: Sequence[str] | None = None) -> HomModule:
        labels = tuple(labels) if labels else tuple(f"e{i + 1}" for i in range(dim))
        return cls(dim, labels, alpha if alpha is not None else FieldMatrix.identity(dim))


class BilinearOp:
    """Structure constants ``table[i][j][k]`` = coefficient of e_k in e_i * e_j."""

    __slots__ = ("name", "dim", "table")

    def __init__(self, name: str, table: Sequence[Sequence[Sequence]]):
        self.name = name
        self.dim = len(table)
        self.table = tuple(tuple(tuple(FieldElem.coerce(c) for c in vec) for vec in row) for row in table)
        for row in self.table:
            if len(row) != self.dim or any(len(v) != self.dim for v in row):
                raise AlgebraError(f"product {name!r} is not a {self.dim}x{self.dim}x{self.dim} tensor")

    @classmethod
    def from_function(cls, name: str, dim: int, fn: Callable[[int, int], Vector]) -> BilinearOp:
        return cls(name, [[fn(i, j) for j in range(dim)] for i in range(dim)])

    @classmethod
    def zero(cls, name: str, dim: int) -> BilinearOp:
        z = zero_vector(dim)
        return cls(name, [[z] * dim for _ in range(dim)])

    def __call__(self, x: Vector, y: Vector) -> Vector:
        n = self.dim
        if len(x) != n or len(y) != n:
            raise AlgebraError(f"product {self.name!r} expects vectors of length {n}")
        acc = [FieldElem.zero()] * n
        ys = [(j, b) for j, b in enumerate(y) if b.num.terms]
        for i, a in enumerate(x):
            if not a.num.terms:
                continue
            row = self.table[i]
            for j, b in ys:
                ab = None
                for k, c in enumerate(row[j]):
                    if c.num.terms:
                        if ab is None:
                            ab = a * b
                        acc[k] = acc[k] + ab * c
        return tuple(acc)

    def basis_product(self, i: int, j: int) -> Vector:
        return self.table[i][j]

    def renamed(self, name: str) -> BilinearOp:
        return BilinearOp(name, self.table)

    def then(self, matrix: FieldMatrix, name: str | None = None) -> BilinearOp:
        """The product followed by a linear map: (x, y) -> matrix(x * y)."""
        return BilinearOp(name or self.name, [[matrix.apply(v) for v in row] for row in self.table])

    def opposite(self, name: str | None = None) -> BilinearOp:
        n = self.dim
        return BilinearOp(name or self.name, [[self.table[j][i] for j in range(n)] for i in range(n)])

    def scaled(self, c, name: str | None = None) -> BilinearOp:
        c = FieldElem.coerce(c)
        return BilinearOp(name or self.name, [[tuple(c * x for x in v) for v in row] for row in self.table])

    def __add__(self, other: BilinearOp) -> BilinearOp:
        return BilinearOp(self.name, [[vec_add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.table, other.table)])

    def __sub__(self, other: BilinearOp) -> BilinearOp:
        return BilinearOp(self.name, [[vec_sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.table, other.table)])

    def equals(self, other: BilinearOp) -> bool:
        return self.dim == other.dim and all(
            all(a == b for a, b in zip(u, v))
            for r1, r2 in zip(self.table, other.table) for u, v in zip(r1, r2))

    def is_zero(self) -> bool:
        return all(vec_is_zero(v) for row in self.table for v in row)

    def __repr__(self) -> str:
        return f"BilinearOp({self.name!r}, dim={self.dim})"


@dataclass(frozen=True)
class Provenance:
    construction: str
    source: str
    parameters: dict[str, Any] = field(default_factory=dict)
    source_products: tuple[str, ...] = ()
    conclusions: tuple[CheckReport, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "construction": self.construction,
            "source": self.source,
            "parameters": {k: str(v) for k, v in self.parameters.items()},
            "source_products": list(self.source_products),
        }
        if self.conclusions:
            out["conclusions"] = [r.to_dict() for r in self.conclusions]
        return out


@dataclass(frozen=True, eq=False)
class HomAlgebra:
    """A Hom-module with named products, named linear operators and a weight.

    All coefficients are re-expressed over ``parameters`` on construction, so
    one algebra never mixes variable lists.
    """

    name: str
    module: HomModule
    products: Mapping[str, BilinearOp]
    operators: Mapping[str, FieldMatrix] = field(default_factory=dict)
    weight: FieldElem | None = None
    parameters: tuple[str, ...] = ()
    kind: str | None = None
    provenance: Provenance | None = None

    def __post_init__(self):
        if not self.products:
            raise AlgebraError("an algebra needs at least one product")
        n = self.module.dim
        params = tuple(self.parameters)
        object.__setattr__(self, "parameters", params)
        align = lambda e: e.with_variables(params)
        try:
            prods = {}
            for key, op in self.products.items():
                if op.dim != n:
                    raise AlgebraError(f"product {key!r} has dimension {op.dim}, module has {n}")
                prods[key] = BilinearOp(key, [[tuple(align(c) for c in v) for v in row] for row in op.table])
            ops = {}
            for key, m in self.operators.items():
                if m.shape != (n, n):
                    raise AlgebraError(f"operator {key!r} must be {n}x{n}")
                ops[key] = m.map_entries(align)
            module = replace(self.module, alpha=self.module.alpha.map_entries(align))
            weight = align(FieldElem.coerce(self.weight)) if self.weight is not None else None
        except ValueError as exc:
            if isinstance(exc, AlgebraError):
                raise
            raise AlgebraError(f"coefficient outside the declared parameters {params}: {exc}") from exc
        object.__setattr__(self, "products", prods)
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "module", module)
        object.__setattr__(self, "weight", weight)
        if self.kind is not None and self.kind not in KINDS:
            raise AlgebraError(f"unknown kind {self.kind!r}")
        if self.kind == "dendriform" and set(prods) != set(DENDRIFORM_PRODUCTS):
            raise AlgebraError("a dendriform algebra has exactly the products prec, succ")
        if self.kind == "tridendriform" and set(prods) != set(TRIDENDRIFORM_PRODUCTS):
            raise AlgebraError("a tridendriform algebra has exactly the products prec, succ, dot")

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def alpha(self) -> FieldMatrix:
        return self.module.alpha

    @property
    def labels(self) -> tuple[str, ...]:
        return self.module.basis_labels

    def basis(self) -> list[Vector]:
        return [basis_vector(self.dim, i) for i in range(self.dim)]

    def product(self, name: str | None = None) -> BilinearOp:
        return self.products[self.resolve_product(name)]

    def resolve_product(self, name: str | None) -> str:
        if name is None:
            if len(self.products) == 1:
                return next(iter(self.products))
            raise AlgebraError(f"algebra {self.name!r} has several products {sorted(self.products)}; name one")
        if name not in self.products:
            raise AlgebraError(f"unknown product {name!r}; available: {sorted(self.products)}")
        return name

    def operator(self, name: str | None = None) -> FieldMatrix:
        return self.operators[self.resolve_operator(name)]

    def resolve_operator(self, name: str | None) -> str:
        if name is None:
            if len(self.operators) == 1:
                return next(iter(self.operators))
            raise AlgebraError(f"algebra {self.name!r} has operators {sorted(self.operators)}; name one")
        if name not in self.operators:
            raise AlgebraError(f"unknown operator {name!r}; available: {sorted(self.operators)}")
        return name

    def evolve(self, **changes) -> HomAlgebra:
        if "alpha" in changes:
            changes["module"] = replace(self.module, alpha=changes.pop("alpha"))
        return replace(self, **changes)

    def vector(self, coords: Iterable) -> Vector:
        v = tuple(FieldElem.coerce(c) for c in coords)
        if len(v) != self.dim:
            raise AlgebraError(f"expected {self.dim} coordinates")
        return v

    def label_vector(self, label: str) -> Vector:
        if label not in self.labels:
            raise AlgebraError(f"unknown basis label {label!r}")
        return basis_vector(self.dim, self.labels.index(label))

    def format_vector(self, v: Vector) -> str:
        parts = []
        for c, lab in zip(v, self.labels):
            if c.is_zero():
                continue
            s = str(c)
            if s == "1":
                parts.append(lab)
            elif s == "-1":
                parts.append(f"-{lab}")
            else:
                if len(c.num.terms) > 1 and c.den.is_one():
                    s = f"({s})"
                parts.append(f"{s}*{lab}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


def apply_product(A: HomAlgebra, op_name: str | None, x: Vector, y: Vector) -> Vector:
    return A.product(op_name)(tuple(x), tuple(y))


def hom_associator(A: HomAlgebra, op_name: str | None, x: Vector, y: Vector, z: Vector,
                   alpha: FieldMatrix | None = None) -> Vector:
    """mu(mu(x, y), alpha(z)) - mu(alpha(x), mu(y, z))."""
    mu = A.product(op_name)
    a = A.alpha if alpha is None else alpha
    return vec_sub(mu(mu(x, y), a.apply(z)), mu(a.apply(x), mu(y, z)))


def classical_associator(A: HomAlgebra, op_name: str | None, x: Vector, y: Vector, z: Vector) -> Vector:
    return hom_associator(A, op_name, x, y, z, alpha=FieldMatrix.identity(A.dim))


@dataclass(frozen=True, eq=False)
class Morphism:
    source: HomAlgebra
    target: HomAlgebra
    matrix: FieldMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise AlgebraError(f"morphism matrix must be {self.target.dim}x{self.source.dim}")

    def __call__(self, v: Vector) -> Vector:
        return self.matrix.apply(v)


def check_morphism(f: Morphism, op_pairs: Sequence[tuple[str, str]] = (), check_alpha: bool = True,
                   check_operators: Sequence[tuple[str, str]] = ()) -> CheckReport:
    """Check f∘mu = mu'∘(f⊗f) for each product pair, f∘alpha = alpha'∘f and
    f∘R = R'∘f for each operator pair, on basis vectors."""
    src, tgt = f.source, f.target
    pairs = [(src.resolve_product(a), tgt.resolve_product(b)) for a, b in op_pairs]
    ops = [(src.resolve_operator(a), tgt.resolve_operator(b)) for a, b in check_operators]
    basis = src.basis()
    images = [f(e) for e in basis]
    checked = 0
    for a, b in pairs:
        mu, nu = src.products[a], tgt.products[b]
        for i in range(src.dim):
            for j in range(src.dim):
                checked += 1
                d = vec_sub(f(mu(basis[i], basis[j])), nu(images[i], images[j]))
                if not vec_is_zero(d):
                    return CheckReport("morphism", False, Witness((i, j), d, f"{a}->{b}"), checked)
    unary = []
    if check_alpha:
        unary.append(("alpha", src.alpha, tgt.alpha))
    unary += [(f"{a}->{b}", src.operators[a], tgt.operators[b]) for a, b in ops]
    for label, m_src, m_tgt in unary:
        for i in range(src.dim):
            checked += 1
            d = vec_sub(f(m_src.apply(basis[i])), m_tgt.apply(images[i]))
            if not vec_is_zero(d):
                return CheckReport("morphism", False, Witness((i,), d, label), checked)
    return CheckReport("morphism", True, checked=checked)
