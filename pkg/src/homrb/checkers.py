"""Exact identity checks on basis tuples, with first-failure witnesses."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import AlgebraError, HomAlgebra, hom_associator
from .coeff import FieldElem, FieldMatrix, Vector, parse_coefficient, vec_add, vec_is_zero, vec_scale, vec_sub
from .report import CheckReport, Witness

__all__ = [
    "CheckReport", "Witness", "IdentityError", "IDENTITIES", "GROUPS", "check_identity",
    "g_hom_assoc_defect", "rota_baxter_defect", "hom_jacobi_defect", "resolve_weight",
]


class IdentityError(AlgebraError):
    pass


# Subgroups of S3 as (permutation, sign); a permutation p sends the argument
# tuple (x1, x2, x3) to (x_p[0], x_p[1], x_p[2]).
_ID = ((0, 1, 2), 1)
_T12 = ((1, 0, 2), -1)
_T23 = ((0, 2, 1), -1)
_T13 = ((2, 1, 0), -1)
_C1 = ((1, 2, 0), 1)
_C2 = ((2, 0, 1), 1)
GROUPS: dict[str, tuple[tuple[tuple[int, int, int], int], ...]] = {
    "G1": (_ID,),
    "G2": (_ID, _T12),
    "G3": (_ID, _T23),
    "G4": (_ID, _T13),
    "G5": (_ID, _C1, _C2),
    "G6": (_ID, _T12, _T23, _T13, _C1, _C2),
}


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    arity: int
    needs: tuple[str, ...]
    summary: str


IDENTITIES: dict[str, IdentitySpec] = {s.id: s for s in (
    IdentitySpec("skew_symmetry", 2, ("product",), "mu(x,y) + mu(y,x) = 0"),
    IdentitySpec("hom_jacobi", 3, ("product",), "cyclic sum of [alpha(x),[y,z]] = 0"),
    IdentitySpec("g_hom_associative", 3, ("product", "group"), "signed sum over G of Hom-associators = 0"),
    IdentitySpec("associative", 3, ("product",), "classical associator = 0 (alpha ignored)"),
    IdentitySpec("rota_baxter", 2, ("product", "operator", "weight"), "R(x)R(y) = R(R(x)y + xR(y) + lam xy)"),
    IdentitySpec("multiplicative", 2, (), "alpha(mu(x,y)) = mu(alpha x, alpha y); alpha R = R alpha"),
    IdentitySpec("alpha_commutes", 1, ("operator",), "alpha R = R alpha"),
    IdentitySpec("centroid_member", 2, ("product", "beta"), "beta(mu(x,y)) = mu(beta x, y) = mu(x, beta y)"),
    IdentitySpec("hom_dendriform", 3, (), "three Hom-dendriform axioms in prec, succ"),
    IdentitySpec("hom_tridendriform", 3, (), "seven Hom-tridendriform axioms in prec, succ, dot"),
    IdentitySpec("hom_lie", 3, ("product",), "skew_symmetry and hom_jacobi"),
)}

ALIASES = {f"g{i}": ("g_hom_associative", f"G{i}") for i in range(1, 7)}
ALIASES["associative-classical"] = ("associative", None)
ALIASES["hom_associative"] = ("g_hom_associative", "G1")
ALIASES["hom_lie_admissible"] = ("g_hom_associative", "G6")


def resolve_identity(name: str) -> tuple[str, str | None]:
    if name in IDENTITIES:
        return name, None
    key = name.lower().replace("-", "_") if name.lower() not in ALIASES else name.lower()
    if key in ALIASES:
        return ALIASES[key]
    if key in IDENTITIES:
        return key, None
    raise IdentityError(f"unknown identity {name!r}; known: {sorted(IDENTITIES) + sorted(ALIASES)}")


def resolve_weight(A: HomAlgebra, weight=None) -> FieldElem:
    """The weight to use: explicit value, else A.weight; both given and different is an error."""
    w = None
    if weight is not None:
        w = parse_coefficient(weight, A.parameters) if isinstance(weight, str) else FieldElem.coerce(weight)
    if A.weight is not None:
        if w is not None and w != A.weight:
            raise IdentityError(f"weight {w} conflicts with the algebra's weight {A.weight}")
        return A.weight
    if w is None:
        raise IdentityError("a weight is required (none given and the algebra declares none)")
    return w


def _resolve_matrix(A: HomAlgebra, m, what: str) -> FieldMatrix:
    if isinstance(m, FieldMatrix):
        if m.shape != (A.dim, A.dim):
            raise IdentityError(f"{what} must be {A.dim}x{A.dim}")
        return m
    if isinstance(m, str):
        return A.operator(m)
    raise IdentityError(f"{what} must be a matrix or an operator name")


# ---- defect expressions -------------------------------------------------

def g_hom_assoc_defect(A: HomAlgebra, op_name: str | None, G: str, x: Vector, y: Vector, z: Vector,
                       alpha: FieldMatrix | None = None) -> Vector:
    if G not in GROUPS:
        raise IdentityError(f"unknown subgroup {G!r}; expected one of {sorted(GROUPS)}")
    args = (x, y, z)
    total = None
    for perm, sign in GROUPS[G]:
        a = hom_associator(A, op_name, *(args[p] for p in perm), alpha=alpha)
        a = a if sign > 0 else vec_scale(-1, a)
        total = a if total is None else vec_add(total, a)
    return total


def rota_baxter_defect(A: HomAlgebra, op_name: str | None, R_name, lam, x: Vector, y: Vector) -> Vector:
    mu = A.product(op_name)
    R = _resolve_matrix(A, R_name, "operator") if R_name is not None else A.operator(None)
    lam = resolve_weight(A, lam)
    Rx, Ry = R.apply(x), R.apply(y)
    inner = vec_add(vec_add(mu(Rx, y), mu(x, Ry)), vec_scale(lam, mu(x, y)))
    return vec_sub(mu(Rx, Ry), R.apply(inner))


def hom_jacobi_defect(A: HomAlgebra, op_name: str | None, x: Vector, y: Vector, z: Vector) -> Vector:
    mu = A.product(op_name)
    al = A.alpha.apply
    return vec_add(vec_add(mu(al(x), mu(y, z)), mu(al(y), mu(z, x))), mu(al(z), mu(x, y)))


def _dendriform_axioms(A: HomAlgebra, x, y, z, tri: bool):
    p, s = A.products["prec"], A.products["succ"]
    al = A.alpha.apply
    ax, az = al(x), al(z)
    if tri:
        d = A.products["dot"]
        yall = vec_add(vec_add(p(y, z), s(y, z)), d(y, z))
        xall = vec_add(vec_add(p(x, y), s(x, y)), d(x, y))
        yield "axiom1", vec_sub(p(p(x, y), az), p(ax, yall))
        yield "axiom2", vec_sub(p(s(x, y), az), s(ax, p(y, z)))
        yield "axiom3", vec_sub(s(ax, s(y, z)), s(xall, az))
        yield "axiom4", vec_sub(d(p(x, y), az), d(ax, s(y, z)))
        yield "axiom5", vec_sub(d(s(x, y), az), s(ax, d(y, z)))
        yield "axiom6", vec_sub(p(d(x, y), az), d(ax, p(y, z)))
        yield "axiom7", vec_sub(d(d(x, y), az), d(ax, d(y, z)))
    else:
        yield "axiom1", vec_sub(p(p(x, y), az), p(ax, vec_add(p(y, z), s(y, z))))
        yield "axiom2", vec_sub(p(s(x, y), az), s(ax, p(y, z)))
        yield "axiom3", vec_sub(s(vec_add(p(x, y), s(x, y)), az), s(ax, s(y, z)))


# ---- scanning ------------------------------------------------------------

def _scan(identity: str, A: HomAlgebra, arity: int, defects, params: dict) -> CheckReport:
    basis = A.basis()
    checked = 0
    for idx in itertools.product(range(A.dim), repeat=arity):
        checked += 1
        for label, d in defects(tuple(basis[i] for i in idx)):
            if not vec_is_zero(d):
                return CheckReport(identity, False, Witness(idx, d, label), checked, params)
    return CheckReport(identity, True, None, checked, params)


def _single(label, fn):
    return lambda args: ((label, fn(*args)),)


def check_identity(A: HomAlgebra, identity: str, *, product: str | None = None, operator=None,
                   weight=None, group: str | None = None, beta=None) -> CheckReport:
    """Decide one catalog identity on all basis tuples of A."""
    ident, implied_group = resolve_identity(identity)
    if implied_group is not None:
        if group is not None and group.upper() != implied_group:
            raise IdentityError(f"identity {identity!r} fixes the subgroup {implied_group}, got {group}")
        group = implied_group
    params: dict = {}

    if ident == "skew_symmetry":
        name = A.resolve_product(product)
        mu = A.products[name]
        params["product"] = name
        return _scan(ident, A, 2, _single("skew", lambda x, y: vec_add(mu(x, y), mu(y, x))), params)

    if ident == "hom_jacobi":
        name = A.resolve_product(product)
        params["product"] = name
        return _scan(ident, A, 3, _single("jacobi", lambda x, y, z: hom_jacobi_defect(A, name, x, y, z)), params)

    if ident == "hom_lie":
        skew = check_identity(A, "skew_symmetry", product=product)
        if not skew:
            return CheckReport(ident, False, skew.witness, skew.checked, skew.params)
        jac = check_identity(A, "hom_jacobi", product=product)
        return CheckReport(ident, jac.passed, jac.witness, skew.checked + jac.checked, jac.params)

    if ident in ("g_hom_associative", "associative"):
        name = A.resolve_product(product)
        if ident == "associative":
            group = group or "G1"
        if group is None:
            raise IdentityError("g_hom_associative needs a subgroup (G1..G6)")
        G = group.upper()
        if G not in GROUPS:
            raise IdentityError(f"unknown subgroup {group!r}; expected one of {sorted(GROUPS)}")
        alpha = FieldMatrix.identity(A.dim) if ident == "associative" else None
        params.update(product=name, group=G)
        return _scan(ident, A, 3, _single(G, lambda x, y, z: g_hom_assoc_defect(A, name, G, x, y, z, alpha)), params)

    if ident == "rota_baxter":
        name = A.resolve_product(product)
        rname = A.resolve_operator(operator) if not isinstance(operator, FieldMatrix) else None
        R = A.operators[rname] if rname else _resolve_matrix(A, operator, "operator")
        lam = resolve_weight(A, weight)
        params.update(product=name, operator=rname or "<matrix>", weight=lam)
        return _scan(ident, A, 2, _single("rb", lambda x, y: rota_baxter_defect(A, name, R, lam, x, y)), params)

    if ident == "alpha_commutes":
        rname = A.resolve_operator(operator) if not isinstance(operator, FieldMatrix) else None
        R = A.operators[rname] if rname else _resolve_matrix(A, operator, "operator")
        params["operator"] = rname or "<matrix>"
        al = A.alpha
        return _scan(ident, A, 1, _single("alpha R - R alpha", lambda x: vec_sub(al.apply(R.apply(x)), R.apply(al.apply(x)))), params)

    if ident == "multiplicative":
        names = [A.resolve_product(product)] if product is not None else list(A.products)
        al = A.alpha.apply
        if isinstance(operator, FieldMatrix):
            ops = [("<matrix>", operator)]
        elif operator is not None:
            ops = [(A.resolve_operator(operator), A.operator(operator))]
        else:
            ops = list(A.operators.items())
        params["products"] = ",".join(names)
        if ops:
            params["operators"] = ",".join(n for n, _ in ops)

        def mult_defects(args):
            x, y = args
            for n in names:
                mu = A.products[n]
                yield n, vec_sub(al(mu(x, y)), mu(al(x), al(y)))

        def commute_defects(args):
            (x,) = args
            for n, R in ops:
                yield f"alpha {n} - {n} alpha", vec_sub(al(R.apply(x)), R.apply(al(x)))

        first = _scan(ident, A, 2, mult_defects, params)
        if not first or not ops:
            return first
        second = _scan(ident, A, 1, commute_defects, params)
        return CheckReport(ident, second.passed, second.witness, first.checked + second.checked, params)

    if ident == "centroid_member":
        name = A.resolve_product(product)
        if beta is None:
            raise IdentityError("centroid_member needs beta (a matrix or an operator name)")
        B = _resolve_matrix(A, beta, "beta")
        mu = A.products[name]
        params["product"] = name

        def cent(args):
            x, y = args
            bxy = B.apply(mu(x, y))
            yield "beta(xy) - beta(x)y", vec_sub(bxy, mu(B.apply(x), y))
            yield "beta(xy) - x beta(y)", vec_sub(bxy, mu(x, B.apply(y)))
        return _scan(ident, A, 2, cent, params)

    if ident in ("hom_dendriform", "hom_tridendriform"):
        tri = ident == "hom_tridendriform"
        need = ("prec", "succ", "dot") if tri else ("prec", "succ")
        missing = [n for n in need if n not in A.products]
        if missing:
            raise IdentityError(f"{ident} needs products {list(need)}; missing {missing}")
        return _scan(ident, A, 3, lambda args: _dendriform_axioms(A, *args, tri=tri), params)

    raise IdentityError(f"identity {ident!r} is not implemented")
