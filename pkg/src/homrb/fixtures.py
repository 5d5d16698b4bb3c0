"""Ready-made algebras: the bundled data files plus generated Rota-Baxter examples."""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from .algebra import BilinearOp, HomAlgebra, HomModule
from .coeff import FieldElem, FieldMatrix, Vector, zero_vector
from .constructors import build_projection_rb, construct
from .files import loads_algebra

DATA_FILES = ("jackson-sl2", "example1", "field-weight-m1", "upper-triangular")


def data_path(name: str):
    return resources.files("homrb") / "data" / f"{name}.json"


def load_data(name: str) -> HomAlgebra:
    if name not in DATA_FILES:
        raise KeyError(f"no bundled algebra {name!r}; available: {DATA_FILES}")
    return loads_algebra(data_path(name).read_text(encoding="utf-8"))


def _table(dim: int, rules: dict[tuple[int, int], dict[int, object]]) -> list:
    zero = FieldElem.zero()
    t = [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
    for (i, j), vec in rules.items():
        for k, c in vec.items():
            t[i][j][k] = FieldElem.coerce(c)
    return [[tuple(v) for v in row] for row in t]


def matrix_units(n: int, upper_only: bool) -> tuple[list[str], dict]:
    """Structure constants of (upper triangular) n x n matrices in the basis of matrix units.

    Diagonal units come first, then off-diagonal units in row-major order.
    """
    units = [(i, i) for i in range(n)]
    units += [(i, j) for i in range(n) for j in range(n) if i != j and (j > i or not upper_only)]
    pos = {u: k for k, u in enumerate(units)}
    rules = {}
    for a, (i, j) in enumerate(units):
        for b, (k, l) in enumerate(units):
            if j == k:
                rules[(a, b)] = {pos[(i, l)]: 1}
    labels = [f"e{i + 1}{j + 1}" for i, j in units]
    return labels, rules


def associative_algebra(name: str, dim: int, rules, labels=None, parameters=()) -> HomAlgebra:
    return HomAlgebra(name, HomModule.plain(dim, labels=labels), {"mul": BilinearOp("mul", _table(dim, rules))},
                      parameters=tuple(parameters), kind="associative")


def upper_triangular(n: int = 2) -> HomAlgebra:
    labels, rules = matrix_units(n, True)
    return associative_algebra(f"upper-triangular-{n}", len(labels), rules, labels)


def full_matrices(n: int = 2) -> HomAlgebra:
    labels, rules = matrix_units(n, False)
    return associative_algebra(f"matrices-{n}", len(labels), rules, labels)


def dual_numbers() -> HomAlgebra:
    """K[x]/(x^2): e1 the unit, e2 = x."""
    return associative_algebra("dual-numbers", 2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}, ["e1", "e2"])


def with_operator(A: HomAlgebra, R: FieldMatrix, weight, name: str, op: str = "R", parameters=None) -> HomAlgebra:
    params = tuple(parameters) if parameters is not None else A.parameters
    return A.evolve(name=name, operators={op: R}, weight=FieldElem.coerce(weight), parameters=params)


def _e(dim: int, i: int) -> Vector:
    return tuple(FieldElem.one() if k == i else FieldElem.zero() for k in range(dim))


@dataclass
class Fixture:
    """An algebra with one product and operator R, plus maps suitable for the twisting constructions."""

    name: str
    algebra: HomAlgebra
    morphisms: list = field(default_factory=list)   # beta for twist_by_morphism
    centroid: list = field(default_factory=list)    # beta for centroid_twist


def projection_fixtures() -> list[Fixture]:
    """Weight -1 Rota-Baxter algebras from projections onto a subalgebra along a complementary one."""
    out = []
    U = upper_triangular(2)          # basis e11, e22, e12
    e = lambda i: _e(3, i)
    ident = [(1, 1, 0)]
    for tag, s1, s2 in (
        ("diag|strict", [e(0), e(1)], [e(2)]),
        ("e11|e22,e12", [e(0)], [e(1), e(2)]),
        ("e11,e12|e22", [e(0), e(2)], [e(1)]),
        ("unit|e11,e12", ident, [e(0), e(2)]),
    ):
        P = build_projection_rb(U, "mul", s1, s2)
        out.append(Fixture(f"upper-triangular[{tag}]", with_operator(U, P, -1, f"upper-triangular[{tag}]")))
    M = full_matrices(2)             # basis e11, e22, e12, e21
    f = lambda i: _e(4, i)
    P = build_projection_rb(M, "mul", [f(0), f(1), f(2)], [f(3)])
    out.append(Fixture("matrices-2[upper|e21]", with_operator(M, P, -1, "matrices-2[upper|e21]")))
    D = dual_numbers()
    P = build_projection_rb(D, "mul", [_e(2, 0)], [_e(2, 1)])
    out.append(Fixture("dual-numbers[unit|x]", with_operator(D, P, -1, "dual-numbers[unit|x]")))
    return out


def scalar_matrix(dim: int, s) -> FieldMatrix:
    return FieldMatrix.identity(dim).scale(FieldElem.coerce(s))


def rb_fixtures() -> list[Fixture]:
    """Rota-Baxter fixtures with one product 'mul' (or 'bracket') and one operator 'R'."""
    t = FieldElem.variable("t")
    s = FieldElem.variable("s")
    lam = FieldElem.variable("lam")
    fixtures = []

    field1 = load_data("field-weight-m1")
    fixtures.append(Fixture("field-weight-m1", field1, [scalar_matrix(1, 1)], [scalar_matrix(1, 2)]))

    for fx in projection_fixtures():
        n = fx.algebra.dim
        fx.morphisms.append(FieldMatrix.identity(n))
        fx.centroid.append(scalar_matrix(n, 3))
        fixtures.append(fx)

    # conjugation by diag(1, t) is an automorphism of upper triangular matrices commuting with P
    base = projection_fixtures()[0].algebra
    base_t = base.evolve(parameters=("t",))
    beta_t = FieldMatrix.diagonal([1, 1, t])

    twisted = construct(base_t, "twist_by_morphism", {"beta": beta_t})
    fixtures.append(Fixture("upper-triangular[diag|strict] twisted by diag(1,1,t)",
                            twisted.evolve(name="upper-triangular-twisted", provenance=None),
                            [beta_t]))
    scaled = construct(base.evolve(parameters=("s",)), "centroid_twist",
                       {"beta": scalar_matrix(3, s), "n": 1, "m": 1})
    fixtures.append(Fixture("upper-triangular[diag|strict] centroid-twisted by s",
                            scaled.evolve(name="upper-triangular-scaled", provenance=None),
                            [FieldMatrix.identity(3)]))

    # symbolic weight: -lam P and -lam Id are Rota-Baxter of weight lam
    U = upper_triangular(2)
    P = projection_fixtures()[0].algebra.operators["R"]
    fixtures.append(Fixture("upper-triangular[-lam P]",
                            with_operator(U, P.scale(-lam), lam, "upper-triangular[-lam P]", parameters=("lam",)),
                            [FieldMatrix.identity(3)], [scalar_matrix(3, 2)]))
    fixtures.append(Fixture("upper-triangular[-lam Id]",
                            with_operator(U, scalar_matrix(3, -lam), lam, "upper-triangular[-lam Id]",
                                          parameters=("lam",)),
                            [FieldMatrix.identity(3)]))

    # weight 0: R(e11) = e12 on upper triangular matrices
    N = FieldMatrix.from_columns([_e(3, 2), zero_vector(3), zero_vector(3)])
    fixtures.append(Fixture("upper-triangular[nilpotent, weight 0]", with_operator(U, N, 0, "upper-nilpotent"),
                            [FieldMatrix.identity(3)], [scalar_matrix(3, 5)]))

    # the 3-dim example with a = b, where alpha commutes with R
    E = load_data("example1")
    b = FieldElem.variable("b")
    Eb = E.evolve(name="example1[a=b]", alpha=FieldMatrix.diagonal([b, b, b]),
                  products={"mul": BilinearOp("mul", [[tuple(c.evaluate({"a": b}) for c in v) for v in row]
                                                      for row in E.products["mul"].table])},
                  operators={"R": E.operators["R"]})
    fixtures.append(Fixture("example1[a=b]", Eb))

    # Jackson sl2 at q = 1 with R1, R2 (classical sl2; weight 0)
    J = load_data("jackson-sl2")
    for rname in ("R1", "R2"):
        Jq = J.evolve(
            name=f"jackson-sl2[q=1,{rname}]",
            alpha=FieldMatrix.identity(3),
            products={"bracket": BilinearOp("bracket", [[tuple(c.evaluate({"q": 1}) for c in v) for v in row]
                                                        for row in J.products["bracket"].table])},
            operators={"R": J.operators[rname].map_entries(lambda c: c.evaluate({"q": 1}))},
            weight=FieldElem.zero(), kind="lie",
        )
        fixtures.append(Fixture(f"jackson-sl2[q=1,{rname}]", Jq))
    return fixtures


def dendriform_fixtures() -> list[HomAlgebra]:
    """Hom-dendriform algebras obtained from the associative Rota-Baxter fixtures."""
    out = []
    for fx in rb_fixtures():
        A = fx.algebra
        if "mul" in A.products:
            try:
                out.append(construct(A, "rb_to_dend"))
            except ValueError:
                continue
    return out
