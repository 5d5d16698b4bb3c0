"""Constructions producing new Hom-algebras, each with hypothesis and conclusion checks."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Any, Callable, Sequence

from .algebra import AlgebraError, BilinearOp, HomAlgebra, Morphism, Provenance, check_morphism
from .checkers import GROUPS, check_identity, resolve_weight
from .coeff import FieldElem, FieldMatrix, Vector, solve_linear, vec_add, vec_is_zero, vec_sub
from .report import CheckReport, Witness


class ConstructionError(AlgebraError):
    pass


class HypothesisError(ConstructionError):
    """A hypothesis of a construction failed; ``report`` is the failing check."""

    def __init__(self, construction: str, report: CheckReport):
        super().__init__(f"{construction}: hypothesis failed: {report}")
        self.construction = construction
        self.report = report


@dataclass(frozen=True)
class Construction:
    name: str
    summary: str
    build: Callable[[HomAlgebra, dict], HomAlgebra]
    hypotheses: Callable[[HomAlgebra, dict], list[CheckReport]]
    conclusions: Callable[[HomAlgebra, HomAlgebra, dict], list[CheckReport]]
    param_names: tuple[str, ...] = ()


# ---- parameter handling ---------------------------------------------------

def _operator(A: HomAlgebra, p: dict) -> tuple[str, FieldMatrix]:
    name = A.resolve_operator(p.get("operator"))
    return name, A.operators[name]


def _weight(A: HomAlgebra, p: dict) -> FieldElem:
    return resolve_weight(A, p.get("weight"))


def _matrix_param(A: HomAlgebra, p: dict, key: str) -> FieldMatrix:
    m = p.get(key)
    if m is None:
        raise ConstructionError(f"parameter {key!r} is required")
    if isinstance(m, str):
        return A.operator(m)
    if not isinstance(m, FieldMatrix):
        m = FieldMatrix.from_rows(m)
    if m.shape != (A.dim, A.dim):
        raise ConstructionError(f"{key} must be {A.dim}x{A.dim}")
    return m


def _int_param(p: dict, key: str, minimum: int) -> int:
    v = p.get(key)
    if v is None:
        raise ConstructionError(f"parameter {key!r} is required")
    v = int(v)
    if v < minimum:
        raise ConstructionError(f"parameter {key!r} must be at least {minimum}")
    return v


def _product_name(A: HomAlgebra, p: dict) -> str:
    return A.resolve_product(p.get("product"))


def _derived(A: HomAlgebra, products: dict[str, BilinearOp], kind: str | None, keep_operators: bool = False,
             **changes) -> HomAlgebra:
    ops = dict(A.operators) if keep_operators else {}
    weight = A.weight if keep_operators else None
    params = A.parameters
    if "weight" in changes and changes["weight"] is not None:
        extra = [v for v in changes["weight"].variables if v not in params]
        if extra:
            params = params + tuple(extra)
    fields = dict(products=products, operators=ops, weight=weight, kind=kind, parameters=params, provenance=None)
    fields.update(changes)
    return A.evolve(**fields)


def _fn_op(A: HomAlgebra, name: str, fn: Callable[[Vector, Vector], Vector]) -> BilinearOp:
    basis = A.basis()
    return BilinearOp.from_function(name, A.dim, lambda i, j: fn(basis[i], basis[j]))


# ---- generic hypothesis / conclusion pieces ---------------------------------

def _report(identity: str, A: HomAlgebra, arity: int, fn, label: str = "") -> CheckReport:
    """Basis scan for an ad-hoc defect function (used for construction-specific equations)."""
    basis = A.basis()
    checked = 0
    for idx in itertools.product(range(A.dim), repeat=arity):
        checked += 1
        d = fn(*(basis[i] for i in idx))
        if not vec_is_zero(d):
            return CheckReport(identity, False, Witness(idx, d, label), checked)
    return CheckReport(identity, True, checked=checked)


def _commutes(identity: str, A: HomAlgebra, X: FieldMatrix, Y: FieldMatrix) -> CheckReport:
    return _report(identity, A, 1, lambda x: vec_sub(X.apply(Y.apply(x)), Y.apply(X.apply(x))), "XY - YX")


def _preserved(src: HomAlgebra, out: HomAlgebra, p: dict, classical_source: bool = False) -> list[CheckReport]:
    """Conclusions of the twisting theorems: whatever held in the source holds in the output."""
    reports = []
    view = src.evolve(alpha=FieldMatrix.identity(src.dim)) if classical_source else src
    if src.kind == "dendriform" or src.kind == "tridendriform":
        ident = "hom_dendriform" if src.kind == "dendriform" else "hom_tridendriform"
        if check_identity(view, ident):
            reports.append(check_identity(out, ident))
    else:
        groups = [p["group"]] if p.get("group") else list(GROUPS)
        for prod in src.products:
            for G in groups:
                if check_identity(view, "g_hom_associative", product=prod, group=G):
                    reports.append(check_identity(out, "g_hom_associative", product=prod, group=G))
    if src.weight is not None or p.get("weight") is not None:
        for name in src.operators:
            for prod in src.products:
                kw = dict(product=prod, operator=name, weight=p.get("weight"))
                if check_identity(src, "rota_baxter", **kw):
                    reports.append(check_identity(out, "rota_baxter", **kw))
    return reports


def _multiplicative_preserved(src: HomAlgebra, out: HomAlgebra) -> list[CheckReport]:
    return [check_identity(out, "multiplicative")] if check_identity(src, "multiplicative") else []


# ---- twists -------------------------------------------------------------------

def _twist_hyp(A, p):
    beta = _matrix_param(A, p, "beta")
    reports = [check_morphism(Morphism(A, A, beta), [(n, n) for n in A.products], check_alpha=True,
                              check_operators=[(n, n) for n in A.operators])]
    return reports


def _twist_build(A, p):
    beta = _matrix_param(A, p, "beta")
    prods = {n: op.then(beta) for n, op in A.products.items()}
    return _derived(A, prods, A.kind, keep_operators=True, alpha=beta @ A.alpha)


def _twist_concl(src, out, p):
    return _preserved(src, out, p) + _multiplicative_preserved(src, out)


def _power_hyp(A, p):
    _int_param(p, "n", 1)
    return [check_identity(A, "multiplicative")]


def _power_build(A, p):
    n = _int_param(p, "n", 1)
    an = A.alpha ** n
    prods = {k: op.then(an) for k, op in A.products.items()}
    return _derived(A, prods, A.kind, keep_operators=True, alpha=an @ A.alpha)


def _untwist_hyp(A, p):
    _inverse_alpha(A)
    return [check_identity(A, "multiplicative")]


def _inverse_alpha(A):
    try:
        return A.alpha.inverse()
    except ZeroDivisionError:
        raise ConstructionError("untwist needs an invertible alpha; alpha is singular") from None


def _untwist_build(A, p):
    inv = _inverse_alpha(A)
    prods = {k: op.then(inv) for k, op in A.products.items()}
    return _derived(A, prods, A.kind, keep_operators=True, alpha=FieldMatrix.identity(A.dim))


def _centroid_hyp(A, p):
    beta = _matrix_param(A, p, "beta")
    _int_param(p, "n", 0)
    _int_param(p, "m", 0)
    reports = [check_identity(A, "centroid_member", product=k, beta=beta) for k in A.products]
    reports += [_commutes(f"beta {name} = {name} beta", A, beta, R) for name, R in A.operators.items()]
    return reports


def _centroid_build(A, p):
    beta = _matrix_param(A, p, "beta")
    n, m = _int_param(p, "n", 0), _int_param(p, "m", 0)
    bn = beta ** n
    prods = {k: op.then(bn) for k, op in A.products.items()}
    return _derived(A, prods, A.kind, keep_operators=True, alpha=beta ** m)


def _centroid_concl(src, out, p):
    return _preserved(src, out, p, classical_source=True)


# ---- weight transforms -----------------------------------------------------------

def _rb_hyp(A, p):
    _operator(A, p)
    return [check_identity(A, "rota_baxter", product=_product_name(A, p), operator=p.get("operator"),
                           weight=p.get("weight"))]


def _negate_shift_build(A, p):
    name, R = _operator(A, p)
    lam = _weight(A, p)
    ops = dict(A.operators)
    ops[name] = -R - FieldMatrix.identity(A.dim).scale(lam)
    return _derived(A, dict(A.products), A.kind, keep_operators=True, operators=ops, weight=lam)


def _negate_build(A, p):
    name, R = _operator(A, p)
    lam = _weight(A, p)
    ops = dict(A.operators)
    ops[name] = -R
    return _derived(A, dict(A.products), A.kind, keep_operators=True, operators=ops, weight=-lam)


def _normalize_check(A, p):
    lam = _weight(A, p)
    if lam.is_zero():
        raise ConstructionError("rb_normalize needs a nonzero weight")
    return lam


def _normalize_hyp(A, p):
    _normalize_check(A, p)
    return _rb_hyp(A, p)


def _normalize_build(A, p):
    name, R = _operator(A, p)
    lam = _normalize_check(A, p)
    ops = dict(A.operators)
    ops[name] = R.scale(FieldElem.one() / lam)
    return _derived(A, dict(A.products), A.kind, keep_operators=True, operators=ops, weight=FieldElem.one())


def _weight_concl(src, out, p):
    name = out.resolve_operator(p.get("operator"))
    return [check_identity(out, "rota_baxter", product=_product_name(out, p), operator=name)]


def _rtilde_build(A, p):
    name, R = _operator(A, p)
    lam = _weight(A, p)
    ops = dict(A.operators)
    ops[name + "tilde"] = -R - FieldMatrix.identity(A.dim).scale(lam)
    return _derived(A, dict(A.products), A.kind, keep_operators=True, operators=ops, weight=lam)


def _rtilde_concl(src, out, p):
    name = src.resolve_operator(p.get("operator")) + "tilde"
    return [check_identity(out, "rota_baxter", product=_product_name(out, p), operator=name)]


# ---- derived products --------------------------------------------------------------

def _commutator_build(A, p):
    mu = A.product(p.get("product"))
    return _derived(A, {"bracket": (mu - mu.opposite()).renamed("bracket")}, "lie", keep_operators=True)


def _commutator_concl(src, out, p):
    reports = [check_identity(out, "skew_symmetry")]
    if check_identity(src, "g_hom_associative", product=_product_name(src, p), group="G6"):
        reports.append(check_identity(out, "hom_jacobi"))
    return reports


def _prelie_hyp(weight: int, group: str):
    def hyp(A, p):
        lam = _weight(A, p)
        if lam != FieldElem.coerce(weight):
            bad = CheckReport("weight", False, Witness((), (lam - weight,), f"weight must be {weight}"))
            return [bad]
        prod = _product_name(A, p)
        op = A.resolve_operator(p.get("operator"))
        return [
            check_identity(A, "g_hom_associative", product=prod, group=group),
            check_identity(A, "alpha_commutes", operator=op),
            check_identity(A, "rota_baxter", product=prod, operator=op, weight=lam),
        ]
    return hyp


def _prelie_build(with_product: bool):
    def build(A, p):
        mu = A.product(p.get("product"))
        _, R = _operator(A, p)

        def star(x, y):
            d = vec_sub(mu(R.apply(x), y), mu(y, R.apply(x)))
            return vec_sub(d, mu(x, y)) if with_product else d
        return _derived(A, {"star": _fn_op(A, "star", star)}, None)
    return build


def _single_check(identity: str, **kw):
    return lambda src, out, p: [check_identity(out, identity, **kw)]


def _kind_hyp(identity: str):
    return lambda A, p: [check_identity(A, identity)]


def _dend_build(name: str, fn):
    def build(A, p):
        P, S = A.products["prec"], A.products["succ"]
        op = _fn_op(A, name, lambda x, y: fn(P, S, x, y))
        return _derived(A, {name: op}, "associative" if name == "star" else None)
    return build


def _tridend_assoc_build(A, p):
    P, S, D = A.products["prec"], A.products["succ"], A.products["dot"]
    return _derived(A, {"star": (P + S + D).renamed("star")}, "associative")


def _tridend_assoc_concl(src, out, p):
    return [check_identity(out, "g_hom_associative", group="G1"),
            check_identity(src, "g_hom_associative", product="dot", group="G1")]


def _tridend_dend_hyp(A, p):
    D = A.products["dot"]
    return [check_identity(A, "hom_tridendriform"),
            _report("dot_vanishes", A, 2, lambda x, y: D(x, y), "x dot y")]


def _tridend_dend_build(A, p):
    return _derived(A, {"prec": A.products["prec"], "succ": A.products["succ"]}, "dendriform")


def _rb_functor_hyp(A, p):
    prod = _product_name(A, p)
    op = A.resolve_operator(p.get("operator"))
    return [
        check_identity(A, "g_hom_associative", product=prod, group="G1"),
        check_identity(A, "alpha_commutes", operator=op),
        check_identity(A, "rota_baxter", product=prod, operator=op, weight=p.get("weight")),
    ]


def _rb_products(A: HomAlgebra, p: dict):
    mu = A.product(p.get("product"))
    _, R = _operator(A, p)
    lam = _weight(A, p)
    xR = _fn_op(A, "prec", lambda x, y: mu(x, R.apply(y)))
    Rx = _fn_op(A, "succ", lambda x, y: mu(R.apply(x), y))
    return mu, R, lam, xR, Rx, mu.scaled(lam, "dot")


def _rb_dend_build(A, p):
    mu, R, lam, xR, Rx, dot = _rb_products(A, p)
    return _derived(A, {"prec": (xR + dot).renamed("prec"), "succ": Rx}, "dendriform")


def _rb_tridend_build(A, p):
    mu, R, lam, xR, Rx, dot = _rb_products(A, p)
    return _derived(A, {"prec": xR, "succ": Rx, "dot": dot}, "tridendriform")


def _rb_star_build(A, p):
    mu, R, lam, xR, Rx, dot = _rb_products(A, p)
    star = (xR + Rx + dot).renamed("star")
    name, _ = _operator(A, p)
    return _derived(A, {"star": star}, "associative", operators={name: R}, weight=lam)


def _rb_star_concl(src, out, p):
    prod = _product_name(src, p)
    name, R = _operator(src, p)
    lam = _weight(src, p)
    rt = -R - FieldMatrix.identity(src.dim).scale(lam)
    neg = src.evolve(products={prod: src.products[prod].scaled(-1)}, provenance=None)
    return [
        check_identity(out, "g_hom_associative", group="G1"),
        _named(check_morphism(Morphism(out, src, R), [("star", prod)], check_alpha=False), "R(x*y) = R(x)R(y)"),
        _named(check_morphism(Morphism(out, neg, rt), [("star", prod)], check_alpha=False),
               "Rtilde(x*y) = -Rtilde(x)Rtilde(y)"),
    ]


def _named(r: CheckReport, identity: str) -> CheckReport:
    return replace(r, identity=identity)


CATALOG: dict[str, Construction] = {c.name: c for c in (
    Construction("twist_by_morphism", "(A, beta mu, beta alpha, R) for a morphism beta",
                 _twist_build, _twist_hyp, _twist_concl, ("beta",)),
    Construction("power_twist", "(A, alpha^n mu, alpha^(n+1), R) for multiplicative A",
                 _power_build, _power_hyp, _twist_concl, ("n",)),
    Construction("untwist", "(A, alpha^-1 mu, Id, R) for invertible alpha",
                 _untwist_build, _untwist_hyp, _preserved, ()),
    Construction("centroid_twist", "(A, beta^n mu, beta^m, R) for beta in the centroid",
                 _centroid_build, _centroid_hyp, _centroid_concl, ("beta", "n", "m")),
    Construction("rb_negate_shift", "R -> -R - lam Id, same weight",
                 _negate_shift_build, _rb_hyp, _weight_concl, ("operator", "weight")),
    Construction("rb_negate", "R -> -R, weight -lam",
                 _negate_build, _rb_hyp, _weight_concl, ("operator", "weight")),
    Construction("rb_normalize", "R -> R/lam, weight 1",
                 _normalize_build, _normalize_hyp, _weight_concl, ("operator", "weight")),
    Construction("rtilde", "adds the operator Rtilde = -lam Id - R",
                 _rtilde_build, _rb_hyp, _rtilde_concl, ("operator", "weight")),
    Construction("commutator_bracket", "[x,y] = xy - yx",
                 _commutator_build, lambda A, p: [], _commutator_concl, ("product",)),
    Construction("rb_to_left_prelie_w0", "x*y = R(x)y - yR(x) at weight 0",
                 _prelie_build(False), _prelie_hyp(0, "G6"), _single_check("g_hom_associative", group="G2"),
                 ("operator", "weight")),
    Construction("rb_to_left_prelie_wm1", "x*y = R(x)y - yR(x) - xy at weight -1",
                 _prelie_build(True), _prelie_hyp(-1, "G1"), _single_check("g_hom_associative", group="G2"),
                 ("operator", "weight")),
    Construction("dend_to_assoc", "x*y = x<y + x>y",
                 _dend_build("star", lambda P, S, x, y: vec_add(P(x, y), S(x, y))),
                 _kind_hyp("hom_dendriform"), _single_check("g_hom_associative", group="G1")),
    Construction("dend_to_left_prelie", "x|>y = x>y - y<x",
                 _dend_build("rhd", lambda P, S, x, y: vec_sub(S(x, y), P(y, x))),
                 _kind_hyp("hom_dendriform"), _single_check("g_hom_associative", group="G2")),
    Construction("dend_to_right_prelie", "x<|y = x<y - y>x",
                 _dend_build("lhd", lambda P, S, x, y: vec_sub(P(x, y), S(y, x))),
                 _kind_hyp("hom_dendriform"), _single_check("g_hom_associative", group="G3")),
    Construction("tridend_to_assoc", "x*y = x<y + x>y + x.y",
                 _tridend_assoc_build, _kind_hyp("hom_tridendriform"), _tridend_assoc_concl),
    Construction("tridend_to_dend", "forget a vanishing dot product",
                 _tridend_dend_build, _tridend_dend_hyp, _single_check("hom_dendriform")),
    Construction("rb_to_dend", "x<y = xR(y) + lam xy, x>y = R(x)y",
                 _rb_dend_build, _rb_functor_hyp, _single_check("hom_dendriform"), ("operator", "weight")),
    Construction("rb_to_tridend", "x<y = xR(y), x>y = R(x)y, x.y = lam xy",
                 _rb_tridend_build, _rb_functor_hyp, _single_check("hom_tridendriform"), ("operator", "weight")),
    Construction("rb_star", "x*y = xR(y) + R(x)y + lam xy",
                 _rb_star_build, _rb_functor_hyp, _rb_star_concl, ("operator", "weight")),
)}

ALIASES = {"commutator": "commutator_bracket"}


def construct(A: HomAlgebra, name: str, params: dict[str, Any] | None = None,
              verify_hypotheses: bool = True) -> HomAlgebra:
    """Apply a catalog construction to A.

    With ``verify_hypotheses`` the hypothesis checks must pass (otherwise
    HypothesisError carries the failing report) and the conclusion checks are
    run on the output and recorded in its provenance.
    """
    key = ALIASES.get(name, name)
    if key not in CATALOG:
        raise ConstructionError(f"unknown construction {name!r}; known: {sorted(CATALOG)}")
    c = CATALOG[key]
    p = dict(params or {})
    if key.startswith(("dend_to", "tridend_to")):
        need = ("prec", "succ", "dot") if key.startswith("tridend") else ("prec", "succ")
        missing = [n for n in need if n not in A.products]
        if missing:
            raise ConstructionError(f"{key} needs products {list(need)}; missing {missing}")
    if verify_hypotheses:
        for report in c.hypotheses(A, p):
            if not report:
                raise HypothesisError(key, report)
    out = c.build(A, p)
    conclusions = tuple(c.conclusions(A, out, p)) if verify_hypotheses else ()
    shown = {k: v for k, v in p.items() if v is not None}
    if isinstance(shown.get("beta"), FieldMatrix):
        shown["beta"] = [[str(x) for x in row] for row in shown["beta"].to_rows()]
    prov = Provenance(key, A.name, shown, tuple(A.products), conclusions)
    return out.evolve(name=f"{key}({A.name})", provenance=prov)


def commutator_hom_lie(A: HomAlgebra, op_name: str | None = None) -> HomAlgebra:
    return construct(A, "commutator_bracket", {"product": op_name}, verify_hypotheses=False)


def _rank(cols: Sequence[Vector]) -> int:
    if not cols:
        return 0
    return solve_linear(FieldMatrix.from_columns(cols), "rank")


def build_projection_rb(A: HomAlgebra, op_name: str | None, sub1: Sequence[Vector],
                        sub2: Sequence[Vector]) -> FieldMatrix:
    """Projection onto span(sub1) along span(sub2); both must be subalgebras and complementary."""
    mu = A.product(op_name)
    sub1 = [A.vector(v) for v in sub1]
    sub2 = [A.vector(v) for v in sub2]
    for label, sub in (("first", sub1), ("second", sub2)):
        r = _rank(sub)
        if r != len(sub):
            raise ConstructionError(f"{label} subspace basis is linearly dependent")
        for u in sub:
            for v in sub:
                if _rank(sub + [mu(u, v)]) != r:
                    raise ConstructionError(f"{label} subspace is not closed under the product")
    if len(sub1) + len(sub2) != A.dim or _rank(sub1 + sub2) != A.dim:
        raise ConstructionError("subspaces are not complementary")
    Q = FieldMatrix.from_columns(sub1 + sub2)
    D = FieldMatrix.diagonal([1] * len(sub1) + [0] * len(sub2))
    return Q @ D @ Q.inverse()


__all__ = [
    "CATALOG", "Construction", "ConstructionError", "HypothesisError", "construct",
    "commutator_hom_lie", "build_projection_rb",
]
