"""Truncated free objects over decorated trees.

F(A) is spanned by pairs (tree, index tuple) standing for (e_i1 ⊗ ... ⊗ e_in)_tree.
Everything is cut off at a complexity bound C (leaves + decoration sum);
operations whose result leaves the bound either raise or drop terms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .algebra import HomAlgebra, HomModule
from .checkers import GROUPS
from .coeff import FieldElem, FieldMatrix, SparseEchelon, Vector, vec_add, vec_is_zero, vec_scale, vec_sub, zero_vector
from .report import CheckReport, Witness
from .trees import (
    BARE_LEAF,
    MLEAF,
    DecoratedTree,
    ModifiedDecoratedTree,
    apply_unary,
    decoration_word,
    graft,
    graft_tagged,
    trees_up_to_complexity,
    enumerate_modified,
)

OVERFLOW_POLICIES = ("error", "drop")


class TruncationOverflow(ArithmeticError):
    pass


class FreeElement:
    """Finite linear combination of (tree, index tuple) basis symbols."""

    __slots__ = ("terms", "truncated")

    def __init__(self, terms: Mapping | None = None, truncated: bool = False):
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}
        self.truncated = truncated

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: FreeElement) -> FreeElement:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return FreeElement(out, self.truncated or other.truncated)

    def __neg__(self) -> FreeElement:
        return FreeElement({k: -v for k, v in self.terms.items()}, self.truncated)

    def __sub__(self, other: FreeElement) -> FreeElement:
        return self + (-other)

    def scale(self, c) -> FreeElement:
        c = FieldElem.coerce(c)
        return FreeElement({k: c * v for k, v in self.terms.items()}, self.truncated)

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeElement) and (self - other).is_zero()

    __hash__ = None

    def max_complexity(self) -> int:
        return max((_complexity(k[0]) for k in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (t, idx), c in sorted(self.terms.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])):
            sym = f"{t}{list(i + 1 for i in idx)}"
            s = str(c)
            parts.append(sym if s == "1" else f"-{sym}" if s == "-1" else f"({s})*{sym}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _complexity(t) -> int:
    return t.complexity


class _TruncatedFree:
    """Bookkeeping shared by the free objects in D and in E."""

    def __init__(self, base: HomModule, bound: int | None, overflow: str = "error"):
        if bound is not None and bound < 1:
            raise ValueError("the complexity bound must be at least 1")
        if overflow not in OVERFLOW_POLICIES:
            raise ValueError(f"overflow policy must be one of {OVERFLOW_POLICIES}")
        self.base = base
        self.bound = bound
        self.overflow = overflow
        self._basis: list | None = None
        self._index: dict | None = None

    # basis ------------------------------------------------------------------
    def _trees(self) -> list:
        raise NotImplementedError

    @property
    def basis(self) -> list[tuple[Any, tuple[int, ...]]]:
        if self.bound is None:
            raise ValueError("an unbounded free object has no finite basis")
        if self._basis is None:
            d = self.base.dim
            self._basis = [(t, idx) for t in self._trees()
                           for idx in itertools.product(range(d), repeat=t.leaves)]
            self._index = {key: i for i, key in enumerate(self._basis)}
        return self._basis

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index_of(self, key) -> int:
        self.basis
        return self._index[key]

    def in_bound(self, t) -> bool:
        return self.bound is None or t.complexity <= self.bound

    def basis_element(self, i: int) -> FreeElement:
        return FreeElement({self.basis[i]: FieldElem.one()})

    def element(self, tree, idx: Sequence[int], coeff=1) -> FreeElement:
        key = (tree, tuple(idx))
        if len(key[1]) != tree.leaves:
            raise ValueError("index tuple length must equal the number of leaves")
        if not self.in_bound(tree):
            raise TruncationOverflow(f"{tree} exceeds the complexity bound {self.bound}")
        return FreeElement({key: FieldElem.coerce(coeff)})

    def iota(self, v: Iterable) -> FreeElement:
        """The base vector v placed on the bare 1-leaf tree."""
        return FreeElement({(self._leaf, (i,)): FieldElem.coerce(c) for i, c in enumerate(v)})

    def generator(self, i: int) -> FreeElement:
        return FreeElement({(self._leaf, (i,)): FieldElem.one()})

    def to_sparse(self, x: FreeElement) -> dict[int, FieldElem]:
        return {self.index_of(k): v for k, v in x.terms.items()}

    def from_sparse(self, vec: Mapping[int, FieldElem]) -> FreeElement:
        return FreeElement({self.basis[i]: c for i, c in vec.items()})

    def as_vector(self, x: FreeElement) -> Vector:
        out = [FieldElem.zero()] * self.dim
        for i, c in self.to_sparse(x).items():
            out[i] = c
        return tuple(out)

    # linear-structure protocol used by gamma_eval and morphism checks --------
    def zero(self) -> FreeElement:
        return FreeElement()

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def scale(self, c, x):
        return x.scale(c)

    def is_zero(self, x) -> bool:
        return x.is_zero()

    # term-level helpers ---------------------------------------------------------
    def _collect(self, pieces, strict: bool = False) -> FreeElement:
        """Sum (tree, idx, coeff) pieces, applying the overflow policy."""
        out: dict = {}
        truncated = False
        for t, idx, c in pieces:
            if not self.in_bound(t):
                if strict or self.overflow == "error":
                    raise TruncationOverflow(f"{t} has complexity {t.complexity} > {self.bound}")
                truncated = True
                continue
            key = (t, idx)
            out[key] = out[key] + c if key in out else c
        return FreeElement(out, truncated)

    def _base_alpha(self, idx: tuple[int, ...], c: FieldElem):
        col = self.base.alpha.column(idx[0])
        for k, a in enumerate(col):
            if not a.is_zero():
                yield self._leaf, (k,), c * a


class TruncatedFreeAlgebra(_TruncatedFree):
    """Free object on a Hom-module in the category of (A, mu, alpha, R) with no identities."""

    _leaf = BARE_LEAF

    def _trees(self):
        return trees_up_to_complexity(self.bound)

    def mu(self, x: FreeElement, y: FreeElement, strict: bool = False) -> FreeElement:
        pieces = ((graft(t1, t2), i1 + i2, c1 * c2)
                  for (t1, i1), c1 in x.terms.items() for (t2, i2), c2 in y.terms.items())
        r = self._collect(pieces, strict)
        r.truncated |= x.truncated or y.truncated
        return r

    def R(self, x: FreeElement, strict: bool = False) -> FreeElement:
        r = self._collect(((apply_unary(t, "R"), i, c) for (t, i), c in x.terms.items()), strict)
        r.truncated |= x.truncated
        return r

    def alpha(self, x: FreeElement, strict: bool = False) -> FreeElement:
        def pieces():
            for (t, i), c in x.terms.items():
                if t.is_bare_leaf():
                    yield from self._base_alpha(i, c)
                else:
                    yield apply_unary(t, "alpha"), i, c
        r = self._collect(pieces(), strict)
        r.truncated |= x.truncated
        return r

    def basis_strings(self) -> list[str]:
        labels = self.base.basis_labels
        return [f"{t} ⊗({','.join(labels[i] for i in idx)})" for t, idx in self.basis]


def free_basis(base: HomModule, bound: int, overflow: str = "error") -> TruncatedFreeAlgebra:
    return TruncatedFreeAlgebra(base, bound, overflow)


# ---- target objects ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DCategoryObject:
    """An algebra seen as (A, mu, alpha, R) with no identities assumed."""

    algebra: HomAlgebra
    product: str | None = None
    operator: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "product", self.algebra.resolve_product(self.product))
        object.__setattr__(self, "operator", self.algebra.resolve_operator(self.operator))

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def mu(self, x: Vector, y: Vector) -> Vector:
        return self.algebra.products[self.product](x, y)

    def alpha(self, x: Vector) -> Vector:
        return self.algebra.alpha.apply(x)

    def R(self, x: Vector) -> Vector:
        return self.algebra.operators[self.operator].apply(x)

    def zero(self) -> Vector:
        return zero_vector(self.dim)

    def add(self, x, y):
        return vec_add(x, y)

    def sub(self, x, y):
        return vec_sub(x, y)

    def scale(self, c, x):
        return vec_scale(c, x)

    def is_zero(self, x) -> bool:
        return vec_is_zero(x)

    def as_vector(self, x) -> Vector:
        return x


def apply_word_in(B, word: Sequence[str], x):
    for letter in word:
        x = B.R(x) if letter == "R" else B.alpha(x)
    return x


def gamma_eval(tau: DecoratedTree, args: Sequence, B):
    """Evaluate a decorated tree on arguments b_1..b_n in a target object B."""
    if len(args) != tau.leaves:
        raise ValueError(f"tree has {tau.leaves} leaves but {len(args)} arguments were given")
    if tau.is_leaf:
        v = args[0]
    else:
        n = tau.left.leaves
        v = B.mu(gamma_eval(tau.left, args[:n], B), gamma_eval(tau.right, args[n:], B))
    return apply_word_in(B, decoration_word(tau.decoration), v)


# ---- induced morphisms and the universal property ----------------------------------------

@dataclass
class InducedMorphism:
    F: TruncatedFreeAlgebra
    B: Any
    images: dict  # basis key -> element of B

    def __call__(self, x: FreeElement):
        acc = self.B.zero()
        for key, c in x.terms.items():
            acc = self.B.add(acc, self.B.scale(c, self.images[key]))
        return acc


def _fvec(B, x) -> Vector:
    return tuple(B.as_vector(x))


def _as_target(B, v: Vector):
    """A base-coordinate vector viewed in B (B's own coordinates, or iota into a free object)."""
    return B.iota(v) if isinstance(B, _TruncatedFree) else tuple(v)


def hom_module_morphism_report(F: _TruncatedFree, f: FieldMatrix, B) -> CheckReport:
    """f∘alpha_base = alpha_B∘f on base basis vectors."""
    n = F.base.dim
    for i in range(n):
        lhs = _as_target(B, f.apply(F.base.alpha.column(i)))
        rhs = B.alpha(_as_target(B, f.column(i)))
        d = _fvec(B, B.sub(lhs, rhs))
        if not vec_is_zero(d):
            return CheckReport("hom_module_morphism", False, Witness((i,), d, "f alpha - alpha f"), i + 1)
    return CheckReport("hom_module_morphism", True, checked=n)


def induced_morphism(F: TruncatedFreeAlgebra, f: FieldMatrix, B) -> tuple[InducedMorphism, CheckReport]:
    """phi((a_1⊗...⊗a_n)_tau) = gamma(tau; f(a_1), ..., f(a_n)), with its verification report.

    ``f`` has shape (dim B) x (dim base) when B is a DCategoryObject; when B is
    a free object, f is given in base coordinates and composed with iota.
    """
    pre = hom_module_morphism_report(F, f, B)
    if not pre:
        raise ValueError(f"f is not a Hom-module morphism: {pre}")
    fe = [_as_target(B, f.column(i)) for i in range(F.base.dim)]
    images = {}
    for key in F.basis:
        tau, idx = key
        images[key] = gamma_eval(tau, [fe[i] for i in idx], B)
    phi = InducedMorphism(F, B, images)
    return phi, check_free_morphism(F, phi.images, B, f)


def check_free_morphism(F: TruncatedFreeAlgebra, images: Mapping, B, f: FieldMatrix) -> CheckReport:
    """Verify phi∘iota = f and phi intertwining mu, alpha, R on in-bound basis elements."""
    phi = InducedMorphism(F, B, dict(images))
    basis = F.basis
    checked = 0

    def fail(idx, d, label):
        return CheckReport("universal_property", False, Witness(idx, d, label), checked)

    for i in range(F.base.dim):
        checked += 1
        d = _fvec(B, B.sub(images[(F._leaf, (i,))], _as_target(B, f.column(i))))
        if not vec_is_zero(d):
            return fail((F.index_of((F._leaf, (i,))),), d, "phi iota - f")
    comp = [t.complexity for t, _ in basis]
    for a, (ka, ca) in enumerate(zip(basis, comp)):
        ea = FreeElement({ka: FieldElem.one()})
        for label, op, op_b in (("phi R - R phi", F.R, B.R), ("phi alpha - alpha phi", F.alpha, B.alpha)):
            try:
                img = op(ea, strict=True)
            except TruncationOverflow:
                continue
            checked += 1
            d = _fvec(B, B.sub(phi(img), op_b(images[ka])))
            if not vec_is_zero(d):
                return fail((a,), d, label)
        for b, (kb, cb) in enumerate(zip(basis, comp)):
            if ca + cb > F.bound:
                continue
            checked += 1
            prod = F.mu(ea, FreeElement({kb: FieldElem.one()}), strict=True)
            d = _fvec(B, B.sub(phi(prod), B.mu(images[ka], images[kb])))
            if not vec_is_zero(d):
                return fail((a, b), d, "phi mu - mu (phi x phi)")
    return CheckReport("universal_property", True, checked=checked)


# ---- relations, ideals, quotients ------------------------------------------------------------

class RelationList(list):
    """Relation instances; ``skipped`` counts instances dropped for overflowing the bound."""

    def __init__(self, items=(), skipped: int = 0):
        super().__init__(items)
        self.skipped = skipped


def _hom_associator_free(F: TruncatedFreeAlgebra, x, y, z) -> FreeElement:
    return F.mu(F.mu(x, y, True), F.alpha(z, True), True) - F.mu(F.alpha(x, True), F.mu(y, z, True), True)


def relation_generators(F: TruncatedFreeAlgebra, G: str, lam) -> RelationList:
    """All in-bound basis instances of the G-Hom-associative and Rota-Baxter relations."""
    if G not in GROUPS:
        raise ValueError(f"unknown subgroup {G!r}")
    lam = FieldElem.coerce(lam)
    basis = F.basis
    elems = [FreeElement({k: FieldElem.one()}) for k in basis]
    comp = [t.complexity for t, _ in basis]
    out: list[FreeElement] = []
    skipped = 0
    N = len(basis)
    attempted = 0
    for a, b, c in itertools.product(range(N), repeat=3):
        if comp[a] + comp[b] + comp[c] > F.bound:
            continue
        attempted += 1
        args = (elems[a], elems[b], elems[c])
        try:
            total = FreeElement()
            for perm, sign in GROUPS[G]:
                term = _hom_associator_free(F, *(args[p] for p in perm))
                total = total + (term if sign > 0 else -term)
        except TruncationOverflow:
            skipped += 1
            continue
        if not total.is_zero():
            out.append(total)
    skipped += N ** 3 - attempted
    attempted = 0
    for a, b in itertools.product(range(N), repeat=2):
        if comp[a] + comp[b] + 2 > F.bound:
            continue
        attempted += 1
        x, y = elems[a], elems[b]
        try:
            Rx, Ry = F.R(x, True), F.R(y, True)
            inner = F.mu(Rx, y, True) + F.mu(x, Ry, True) + F.mu(x, y, True).scale(lam)
            rel = F.mu(Rx, Ry, True) - F.R(inner, True)
        except TruncationOverflow:
            skipped += 1
            continue
        if not rel.is_zero():
            out.append(rel)
    skipped += N ** 2 - attempted
    return RelationList(out, skipped)


@dataclass
class RelationSpan:
    generators: list
    echelon: SparseEchelon
    passes: int = 0
    discarded: int = 0

    @property
    def rank(self) -> int:
        return self.echelon.rank

    def span_basis(self, F) -> list[FreeElement]:
        return [F.from_sparse(row) for _, row in sorted(self.echelon.rows.items())]


def _in_bound_part(rows: list[dict], allowed) -> tuple[list[dict], int]:
    """A basis of span(rows) ∩ span{e_i : allowed(i)}, and how many rows had to be given up.

    Rows are reduced against pivots taken in disallowed columns, in insertion
    order; whatever ends up free of disallowed columns spans the intersection.
    """
    pivots: list[tuple[int, dict]] = []
    good = []
    for row in rows:
        r = dict(row)
        for p, prow in pivots:
            f = r.get(p)
            if f is None:
                continue
            for k, v in prow.items():
                s = r.get(k, FieldElem.zero()) - f * v
                if s.num.terms:
                    r[k] = s
                else:
                    r.pop(k, None)
        bad = [k for k in r if not allowed(k)]
        if not bad:
            if r:
                good.append(r)
            continue
        p = min(bad)
        inv = FieldElem.one() / r[p]
        pivots.append((p, {k: v * inv for k, v in r.items()}))
    return good, len(pivots)


def _unary_allowed(F, name: str) -> set[int]:
    cache = F.__dict__.setdefault("_allowed_cache", {})
    if name not in cache:
        op = getattr(F, name)
        ok = set()
        for i in range(F.dim):
            try:
                op(F.basis_element(i), strict=True)
                ok.add(i)
            except TruncationOverflow:
                pass
        cache[name] = ok
    return cache[name]


def closure_pass(F, echelon: SparseEchelon) -> tuple[int, int]:
    """Apply every in-bound operation to the current span; return (rank gained, rows given up).

    For each operation the span is first cut down to the subspace on which the
    operation stays within the bound, so combinations whose overflowing terms
    cancel are closed too.
    """
    rows = [dict(r) for _, r in sorted(echelon.rows.items())]
    comp = [t.complexity for t, _ in F.basis]
    gained = discarded = 0
    images = []
    for name in F.unary_ops:
        allowed = _unary_allowed(F, name)
        part, lost = _in_bound_part(rows, allowed.__contains__)
        discarded += lost
        op = getattr(F, name)
        images.extend(op(F.from_sparse(r), strict=True) for r in part)
    by_room: dict[int, list[dict]] = {}
    for key in F.basis:
        room = F.bound - key[0].complexity
        if room < 1:
            continue
        if room not in by_room:
            part, lost = _in_bound_part(rows, lambda i, room=room: comp[i] <= room)
            by_room[room] = part
            discarded += lost
        b = FreeElement({key: FieldElem.one()})
        for r in by_room[room]:
            x = F.from_sparse(r)
            for name in F.binary_ops:
                op = getattr(F, name)
                images.append(op(b, x, strict=True))
                images.append(op(x, b, strict=True))
    for img in images:
        if echelon.add(F.to_sparse(img)):
            gained += 1
    return gained, discarded


def ideal_span(F, gens: Sequence[FreeElement], max_passes: int | None = None) -> RelationSpan:
    """Smallest subspace of the truncation containing gens and closed under the in-bound operations."""
    ech = SparseEchelon()
    for g in gens:
        ech.add(F.to_sparse(g))
    passes = discarded = 0
    while True:
        if max_passes is not None and passes >= max_passes:
            break
        gained, dropped = closure_pass(F, ech)
        passes += 1
        discarded += dropped
        if not gained:
            break
    return RelationSpan(list(gens), ech, passes, discarded)


def quotient_dim(F, span: RelationSpan) -> int:
    return F.dim - span.rank


def project(F, span: RelationSpan, x: FreeElement) -> FreeElement:
    """Canonical representative of x modulo the span."""
    return F.from_sparse(span.echelon.reduce(F.to_sparse(x)))


TruncatedFreeAlgebra.unary_ops = ("alpha", "R")
TruncatedFreeAlgebra.binary_ops = ("mu",)


# ---- free object in E: two products and alpha, over modified decorated trees ----------------

class FreeDendriformObject(_TruncatedFree):
    """Free object on a Hom-module in the category of (A, mu_l, mu_r, alpha)."""

    _leaf = MLEAF
    unary_ops = ("alpha",)
    binary_ops = ("mu_l", "mu_r")

    def _trees(self):
        out = []
        for n in range(1, self.bound + 1):
            out.extend(enumerate_modified(n, self.bound - n))
        return out

    def _graft(self, x, y, tag, strict):
        pieces = ((graft_tagged(t1, t2, tag), i1 + i2, c1 * c2)
                  for (t1, i1), c1 in x.terms.items() for (t2, i2), c2 in y.terms.items())
        r = self._collect(pieces, strict)
        r.truncated |= x.truncated or y.truncated
        return r

    def mu_l(self, x, y, strict: bool = False):
        return self._graft(x, y, "l", strict)

    def mu_r(self, x, y, strict: bool = False):
        return self._graft(x, y, "r", strict)

    def alpha(self, x, strict: bool = False):
        def pieces():
            for (t, i), c in x.terms.items():
                if t.is_leaf:
                    yield from self._base_alpha(i, c)
                else:
                    yield ModifiedDecoratedTree(t.left, t.right, t.m + 1, t.tag), i, c
        r = self._collect(pieces(), strict)
        r.truncated |= x.truncated
        return r


def free_dendriform_basis(base: HomModule, bound: int, overflow: str = "error") -> FreeDendriformObject:
    return FreeDendriformObject(base, bound, overflow)


@dataclass(frozen=True, eq=False)
class EObject:
    """A Hom-dendriform-shaped algebra viewed as (A, mu_l, mu_r, alpha), no identities assumed."""

    algebra: HomAlgebra
    left: str = "prec"
    right: str = "succ"

    def mu_l(self, x, y):
        return self.algebra.products[self.left](x, y)

    def mu_r(self, x, y):
        return self.algebra.products[self.right](x, y)

    def alpha(self, x):
        return self.algebra.alpha.apply(x)


def gamma_eval_modified(t: ModifiedDecoratedTree, args: Sequence, B):
    if len(args) != t.leaves:
        raise ValueError(f"tree has {t.leaves} leaves but {len(args)} arguments were given")
    if t.is_leaf:
        return args[0]
    n = t.left.leaves
    mu = B.mu_l if t.tag == "l" else B.mu_r
    v = mu(gamma_eval_modified(t.left, args[:n], B), gamma_eval_modified(t.right, args[n:], B))
    for _ in range(t.m):
        v = B.alpha(v)
    return v


def dendriform_relation_generators(F: FreeDendriformObject) -> RelationList:
    """In-bound basis instances of the three Hom-dendriform axioms."""
    basis = F.basis
    elems = [FreeElement({k: FieldElem.one()}) for k in basis]
    comp = [t.complexity for t, _ in basis]
    N = len(basis)
    out, skipped, attempted = [], 0, 0
    L, Rr, al = F.mu_l, F.mu_r, F.alpha
    for a, b, c in itertools.product(range(N), repeat=3):
        if comp[a] + comp[b] + comp[c] > F.bound:
            continue
        attempted += 1
        x, y, z = elems[a], elems[b], elems[c]
        try:
            ax, az = al(x, True), al(z, True)
            rels = [
                L(L(x, y, True), az, True) - L(ax, L(y, z, True) + Rr(y, z, True), True),
                L(Rr(x, y, True), az, True) - Rr(ax, L(y, z, True), True),
                Rr(L(x, y, True) + Rr(x, y, True), az, True) - Rr(ax, Rr(y, z, True), True),
            ]
        except TruncationOverflow:
            skipped += 1
            continue
        out.extend(r for r in rels if not r.is_zero())
    skipped += N ** 3 - attempted
    return RelationList(out, skipped)
