"""Independent reference implementations used to cross-check the package.

Nothing here imports the tree calculus, the free-object engine or the
checkers: trees are nested tuples, decorations are rebuilt from operator
words by run-length encoding, and linear algebra is dense over Fraction.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

# ---- decorations and trees as plain tuples -------------------------------------------------


def admissible(dec: tuple[int, ...], leaf: bool) -> bool:
    if not dec or any(a < 0 for a in dec):
        return False
    if any(a == 0 for a in dec[:-1]):
        return False
    if leaf and len(dec) > 1 and dec[-1] == 0:
        return False
    return True


def brute_force_decorations(max_sum: int, leaf: bool) -> list[tuple[int, ...]]:
    """Every admissible sequence with entry sum <= max_sum, by exhaustive search."""
    out = []
    for k in range(1, max_sum + 2):
        for dec in itertools.product(range(max_sum + 1), repeat=k):
            if sum(dec) <= max_sum and admissible(dec, leaf):
                out.append(dec)
    return out


def brute_force_shapes(n: int) -> list:
    if n == 1:
        return ["L"]
    return [(a, b) for i in range(1, n) for a in brute_force_shapes(i) for b in brute_force_shapes(n - i)]


def _nodes(shape) -> list[bool]:
    """Leaf flags of the nodes of a shape in prefix order (lowest vertex first)."""
    if shape == "L":
        return [True]
    return [False] + _nodes(shape[0]) + _nodes(shape[1])


def _decorate(shape, decs: list):
    dec = decs.pop(0)
    if shape == "L":
        return ("L", dec)
    left = _decorate(shape[0], decs)
    right = _decorate(shape[1], decs)
    return ("N", left, right, dec)


def brute_force_trees(n: int, weight_bound: int) -> set:
    """All decorated n-trees with total weight <= weight_bound, as nested tuples."""
    leaf_decs = brute_force_decorations(weight_bound, True)
    inner_decs = brute_force_decorations(weight_bound, False)
    out = set()

    def choose(pools, budget, prefix):
        if not pools:
            yield prefix
            return
        for d in pools[0]:
            if sum(d) <= budget:
                yield from choose(pools[1:], budget - sum(d), prefix + [d])

    for shape in brute_force_shapes(n):
        flags = _nodes(shape)
        pools = [leaf_decs if f else inner_decs for f in flags]
        for choice in choose(pools, weight_bound, []):
            out.add(_decorate(shape, list(choice)))
    return out


def encode(tau) -> tuple:
    """Nested-tuple form of a package DecoratedTree (reads only its public fields)."""
    if tau.left is None:
        return ("L", tuple(tau.decoration))
    return ("N", encode(tau.left), encode(tau.right), tuple(tau.decoration))


def word_to_decoration(word: list[str]) -> tuple[int, ...]:
    """Run-length encode an application-order word in R/a; the first run counts R's (maybe zero)."""
    runs: list[int] = []
    current = "R"
    count = 0
    for letter in word:
        if letter == current:
            count += 1
        else:
            runs.append(count)
            current = letter
            count = 1
    runs.append(count)
    return tuple(reversed(runs))


def decoration_to_word(dec: tuple[int, ...]) -> list[str]:
    word = []
    for j, a in enumerate(reversed(dec)):
        word += ["R" if j % 2 == 0 else "a"] * a
    return word


def complexity(t) -> int:
    if t[0] == "L":
        return 1 + sum(t[1])
    return complexity(t[1]) + complexity(t[2]) + sum(t[3])


# ---- a truncated free object on a 1-dim base, over tuple trees -------------------------------

BARE = ("L", (0,))


class TupleFree:
    """Free (mu, alpha, R) object on a 1-dim base with alpha = scalar a, cut at complexity C."""

    def __init__(self, bound: int, a: Fraction):
        self.C = bound
        self.a = Fraction(a)
        trees = set()
        for n in range(1, bound + 1):
            trees |= brute_force_trees(n, bound - n)
        self.basis = sorted(trees, key=lambda t: (complexity(t), repr(t)))
        self.index = {t: i for i, t in enumerate(self.basis)}

    @staticmethod
    def _on_top(t, letter: str):
        dec = word_to_decoration(decoration_to_word(t[-1]) + [letter])
        return t[:-1] + (dec,)

    def R(self, x: dict) -> dict:
        return {self._on_top(t, "R"): c for t, c in x.items()}

    def alpha(self, x: dict) -> dict:
        out: dict = {}
        for t, c in x.items():
            if t == BARE:
                out[t] = out.get(t, 0) + self.a * c
            else:
                s = self._on_top(t, "a")
                out[s] = out.get(s, 0) + c
        return out

    @staticmethod
    def mu(x: dict, y: dict) -> dict:
        out: dict = {}
        for s, c in x.items():
            for t, d in y.items():
                key = ("N", s, t, (0,))
                out[key] = out.get(key, 0) + c * d
        return out

    def fits(self, x: dict) -> bool:
        return all(complexity(t) <= self.C for t, c in x.items() if c)

    def dense(self, x: dict) -> list[Fraction]:
        v = [Fraction(0)] * len(self.basis)
        for t, c in x.items():
            if c:
                v[self.index[t]] += c
        return v

    def sparse(self, v: list[Fraction]) -> dict:
        return {self.basis[i]: c for i, c in enumerate(v) if c}

    @staticmethod
    def combine(*pairs) -> dict:
        out: dict = {}
        for sign, x in pairs:
            for t, c in x.items():
                out[t] = out.get(t, 0) + sign * c
        return {t: c for t, c in out.items() if c}

    def relation_instances(self, lam: Fraction) -> list[dict]:
        """Hom-associator and Rota-Baxter instances on basis elements whose every piece fits."""
        units = [{t: Fraction(1)} for t in self.basis]
        out = []
        for x, y, z in itertools.product(units, repeat=3):
            left = self.mu(self.mu(x, y), self.alpha(z))
            right = self.mu(self.alpha(x), self.mu(y, z))
            if self.fits(left) and self.fits(right):
                out.append(self.combine((1, left), (-1, right)))
        for x, y in itertools.product(units, repeat=2):
            Rx, Ry = self.R(x), self.R(y)
            inner = self.combine((1, self.mu(Rx, y)), (1, self.mu(x, Ry)), (lam, self.mu(x, y)))
            pieces = [self.mu(Rx, Ry), self.mu(Rx, y), self.mu(x, Ry), self.mu(x, y), self.R(inner)]
            if all(self.fits(p) for p in pieces):
                out.append(self.combine((1, self.mu(Rx, Ry)), (-1, self.R(inner))))
        return [r for r in out if r]

    def operations(self):
        """(op, allowed columns) for R, alpha and both-sided products with each basis element."""
        units = [{t: Fraction(1)} for t in self.basis]
        n = len(self.basis)
        ops = [self.R, self.alpha]
        for b in units:
            ops.append(lambda x, b=b: self.mu(b, x))
            ops.append(lambda x, b=b: self.mu(x, b))
        for op in ops:
            allowed = [i for i in range(n) if self.fits(op(units[i]))]
            yield op, allowed

    def ideal_rank(self, gens: list[dict]) -> int:
        """Rank of the smallest subspace containing gens that is closed under every operation
        on the part of the subspace where that operation stays within the bound."""
        n = len(self.basis)
        rows = row_basis([self.dense(g) for g in gens])
        ops = list(self.operations())
        while True:
            new = list(rows)
            for op, allowed in ops:
                keep = set(allowed)
                bad = [i for i in range(n) if i not in keep]
                for v in intersect_coordinate(rows, bad):
                    new.append(self.dense(op(self.sparse(v))))
            grown = row_basis(new)
            if len(grown) == len(rows):
                return len(rows)
            rows = grown

    def quotient_dim(self, lam=Fraction(0)) -> int:
        return len(self.basis) - self.ideal_rank(self.relation_instances(Fraction(lam)))


# ---- dense linear algebra over Fraction -----------------------------------------------------


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def row_basis(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    return rref(rows)[0]


def rank(rows: list[list[Fraction]]) -> int:
    return len(rref(rows)[1])


def intersect_coordinate(rows: list[list[Fraction]], bad: list[int]) -> list[list[Fraction]]:
    """Basis of span(rows) ∩ {v : v_i = 0 for i in bad}, via the kernel of the bad-column block."""
    if not rows:
        return []
    if not bad:
        return rows
    k = len(rows)
    block = [[rows[j][i] for j in range(k)] for i in bad]  # len(bad) x k
    red, pivots = rref(block)
    free = [j for j in range(k) if j not in pivots]
    out = []
    for f in free:
        coeffs = [Fraction(0)] * k
        coeffs[f] = Fraction(1)
        for row, p in zip(red, pivots):
            coeffs[p] = -row[f]
        out.append([sum(c * rows[j][i] for j, c in enumerate(coeffs)) for i in range(len(rows[0]))])
    return out


# ---- a straight-line program for one fixed decorated 3-tree ----------------------------------


def straight_line_word(b1, b2, b3, mu, alpha, R):
    """R α^8 { [ α^7 R^4 α^9 R^2 ( (R^3 α^5 R^2 (b1)) · b2 ) ] · [ α^2 R^6 (b3) ] }, innermost first."""
    def times(f, k, x):
        for _ in range(k):
            x = f(x)
        return x

    u = times(R, 2, b1)
    u = times(alpha, 5, u)
    u = times(R, 3, u)
    v = mu(u, b2)
    v = times(R, 2, v)
    v = times(alpha, 9, v)
    v = times(R, 4, v)
    v = times(alpha, 7, v)
    w = times(R, 6, b3)
    w = times(alpha, 2, w)
    r = mu(v, w)
    r = times(alpha, 8, r)
    return R(r)


# ---- pointwise Rota-Baxter test for grid search ---------------------------------------------


def rb_holds(table, R, lam) -> bool:
    """R(x)R(y) == R(R(x)y + xR(y) + lam xy) on basis pairs; table[i][j][k], R[i][j] rational."""
    n = len(R)

    def mul(x, y):
        out = [Fraction(0)] * n
        for i in range(n):
            for j in range(n):
                if x[i] and y[j]:
                    for k in range(n):
                        out[k] += x[i] * y[j] * table[i][j][k]
        return out

    def app(v):
        return [sum(R[i][j] * v[j] for j in range(n)) for i in range(n)]

    for i in range(n):
        for j in range(n):
            ei = [Fraction(int(k == i)) for k in range(n)]
            ej = [Fraction(int(k == j)) for k in range(n)]
            Rx, Ry = app(ei), app(ej)
            lhs = mul(Rx, Ry)
            inner = [a + b + lam * c for a, b, c in zip(mul(Rx, ej), mul(ei, Ry), mul(ei, ej))]
            if lhs != app(inner):
                return False
    return True
