"""Exact coefficient arithmetic.

Rationals come from :mod:`fractions`. On top of them sit sparse multivariate
polynomials (:class:`MultiPoly`), rational functions kept as unreduced
numerator/denominator pairs (:class:`FieldElem`), dense matrices over those
(:class:`FieldMatrix`) and exact row reduction.

Rational functions are never reduced by a multivariate gcd. Equality is
decided by cross-multiplication, and normalization only does cheap things:
cancel the common monomial factor, strip the denominator content, and cancel
the denominator outright when it divides the numerator exactly.
"""
from __future__ import annotations

import math
import operator
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction

_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class ExpressionError(ValueError):
    """Malformed coefficient expression; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}" + (f" in {text!r}" if text else ""))
        self.position = position
        self.text = text


class NoSolution(ValueError):
    pass


def _grlex(exps: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    return (sum(exps), exps)


def _remap(terms, old: tuple[str, ...], new: tuple[str, ...]):
    where = [new.index(v) for v in old]
    n = len(new)
    out = {}
    for e, c in terms.items():
        ne = [0] * n
        for k, p in zip(where, e):
            ne[k] = p
        out[tuple(ne)] = c
    return out


def _merge_vars(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    return a + tuple(v for v in b if v not in a)


class MultiPoly:
    """Sparse polynomial over Q in an ordered list of named variables.

    ``terms`` maps exponent tuples to nonzero ``Fraction`` coefficients and is
    kept in graded-lex descending order, so equal polynomials over the same
    variables have identical representations.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping[tuple[int, ...], object] | None = None):
        self.variables = tuple(variables)
        clean = {}
        n = len(self.variables)
        for e, c in (terms or {}).items():
            e = tuple(int(p) for p in e)
            if len(e) != n or any(p < 0 for p in e):
                raise ValueError(f"bad exponent vector {e} for variables {self.variables}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = _sorted({e: c for e, c in clean.items() if c})

    @classmethod
    def _raw(cls, variables, terms) -> MultiPoly:
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        return p

    @classmethod
    def constant(cls, c, variables: Iterable[str] = ()) -> MultiPoly:
        variables = tuple(variables)
        c = Fraction(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def variable(cls, name: str, variables: Iterable[str] | None = None) -> MultiPoly:
        variables = tuple(variables) if variables is not None else (name,)
        e = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise ValueError(f"{name!r} is not among {variables}")
        return cls._raw(variables, {e: Fraction(1)})

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def is_one(self) -> bool:
        if len(self.terms) != 1:
            return False
        (e, c), = self.terms.items()
        return c == 1 and not any(e)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        return next(iter(self.terms.items()))

    def used_variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(v for v, p in zip(self.variables, e) if p)
        return used

    # -- alignment --------------------------------------------------------
    def with_variables(self, variables: Sequence[str]) -> MultiPoly:
        variables = tuple(variables)
        if variables == self.variables:
            return self
        missing = self.used_variables() - set(variables)
        if missing:
            raise ValueError(f"variables {sorted(missing)} not in {variables}")
        terms = {}
        for e, c in self.terms.items():
            d = dict(zip(self.variables, e))
            terms[tuple(d.get(v, 0) for v in variables)] = c
        return MultiPoly._raw(variables, _sorted(terms))

    def _align(self, other: MultiPoly):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        if not other.variables:
            n = len(self.variables)
            return self.variables, self.terms, {(0,) * n: c for c in other.terms.values()}
        if not self.variables:
            n = len(other.variables)
            return other.variables, {(0,) * n: c for c in self.terms.values()}, other.terms
        merged = _merge_vars(self.variables, other.variables)
        return (merged, _sorted(_remap(self.terms, self.variables, merged)),
                _sorted(_remap(other.terms, other.variables, merged)))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: MultiPoly) -> MultiPoly:
        vs, a, b = self._align(other)
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(vs, _sorted(out))

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        return self + (-other)

    def __mul__(self, other: MultiPoly) -> MultiPoly:
        vs, a, b = self._align(other)
        if not a or not b:
            return MultiPoly._raw(vs, {})
        if len(b) == 1:
            (eb, cb), = b.items()
            if not any(eb):
                return MultiPoly._raw(vs, {e: c * cb for e, c in a.items()})
        out: dict[tuple[int, ...], Fraction] = {}
        add = operator.add
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(map(add, ea, eb))
                s = out.get(e, 0) + ca * cb
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly._raw(vs, _sorted(out))

    def scale(self, c) -> MultiPoly:
        c = Fraction(c)
        if not c:
            return MultiPoly._raw(self.variables, {})
        return MultiPoly._raw(self.variables, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int) -> MultiPoly:
        if n < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def monomial_gcd(self) -> tuple[int, ...]:
        it = iter(self.terms)
        g = list(next(it))
        for e in it:
            g = [min(x, y) for x, y in zip(g, e)]
        return tuple(g)

    def divide_monomial(self, m: tuple[int, ...]) -> MultiPoly:
        return MultiPoly._raw(self.variables, {tuple(p - q for p, q in zip(e, m)): c for e, c in self.terms.items()})

    def content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive."""
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        return Fraction(math.gcd(*nums), math.lcm(*dens))

    def exact_quotient(self, divisor: MultiPoly) -> MultiPoly | None:
        """Return q with self == q * divisor, or None when divisor does not divide."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        vs, rem, d = self._align(divisor)
        if not rem:
            return MultiPoly._raw(vs, {})
        dlead_e, dlead_c = next(iter(d.items()))
        if sum(next(iter(rem))) < sum(dlead_e):
            return None
        rem = dict(rem)
        quot: dict[tuple[int, ...], Fraction] = {}
        while rem:
            le = max(rem, key=_grlex)
            qe = tuple(p - q for p, q in zip(le, dlead_e))
            if any(p < 0 for p in qe):
                return None
            qc = rem[le] / dlead_c
            quot[qe] = qc
            for e, c in d.items():
                t = tuple(p + q for p, q in zip(qe, e))
                s = rem.get(t, 0) - qc * c
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
            if len(quot) > 4096:
                return None
        return MultiPoly._raw(vs, _sorted(quot))

    def evaluate(self, values: Mapping[str, object]):
        """Substitute; unknown variables stay symbolic. Returns a FieldElem."""
        total = FieldElem.zero()
        for e, c in self.terms.items():
            term = FieldElem.constant(c)
            for v, p in zip(self.variables, e):
                if not p:
                    continue
                if v in values:
                    term = term * FieldElem.coerce(values[v]) ** p
                else:
                    term = term * FieldElem(MultiPoly.variable(v)) ** p
            total = total + term
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(v if p == 1 else f"{v}^{p}" for v, p in zip(self.variables, e) if p)
            mag = abs(c)
            if not mono:
                body = _fmt_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_fmt_rational(mag)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f"{sign}{body}"
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


def _sorted(terms: dict) -> dict:
    if len(terms) < 2:
        return terms
    return dict(sorted(terms.items(), key=lambda kv: _grlex(kv[0]), reverse=True))


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class FieldElem:
    """Element of Q(parameters), stored as an unreduced num/den pair.

    Normal form: the denominator is a polynomial with positive leading
    coefficient and content 1, no monomial divides both parts, and a
    denominator that divides the numerator is cancelled. Zero is ``0/1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly | int | Fraction = 0, den: MultiPoly | int | Fraction | None = None):
        if not isinstance(num, MultiPoly):
            num = MultiPoly.constant(num)
        if den is None:
            den = MultiPoly.constant(1, num.variables)
        elif not isinstance(den, MultiPoly):
            den = MultiPoly.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        vs, nt, dt = num._align(den)
        self.num, self.den = _normalize(MultiPoly._raw(vs, nt), MultiPoly._raw(vs, dt))

    @classmethod
    def _raw(cls, num: MultiPoly, den: MultiPoly) -> FieldElem:
        f = object.__new__(cls)
        f.num = num
        f.den = den
        return f

    @classmethod
    def zero(cls, variables: Iterable[str] = ()) -> FieldElem:
        vs = tuple(variables)
        return cls._raw(MultiPoly._raw(vs, {}), MultiPoly.constant(1, vs))

    @classmethod
    def one(cls, variables: Iterable[str] = ()) -> FieldElem:
        vs = tuple(variables)
        return cls._raw(MultiPoly.constant(1, vs), MultiPoly.constant(1, vs))

    @classmethod
    def constant(cls, c, variables: Iterable[str] = ()) -> FieldElem:
        vs = tuple(variables)
        return cls._raw(MultiPoly.constant(c, vs), MultiPoly.constant(1, vs))

    @classmethod
    def variable(cls, name: str, variables: Iterable[str] | None = None) -> FieldElem:
        p = MultiPoly.variable(name, variables)
        return cls._raw(p, MultiPoly.constant(1, p.variables))

    @classmethod
    def coerce(cls, x) -> FieldElem:
        if isinstance(x, FieldElem):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.constant(x)
        if isinstance(x, str):
            return parse_coefficient(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to FieldElem")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.num.variables

    def with_variables(self, variables: Sequence[str]) -> FieldElem:
        return FieldElem._raw(self.num.with_variables(variables), self.den.with_variables(variables))

    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num.constant_value() / self.den.constant_value()

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> FieldElem:
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den.is_one() and other.den.is_one():
            n = self.num + other.num
            return FieldElem._raw(n, MultiPoly.constant(1, n.variables))
        if self.den.variables == other.den.variables and _same_poly(self.den, other.den):
            return FieldElem(self.num + other.num, self.den)
        return FieldElem(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> FieldElem:
        return FieldElem._raw(-self.num, self.den)

    def __sub__(self, other) -> FieldElem:
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> FieldElem:
        return (-self) + other

    def __mul__(self, other) -> FieldElem:
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        if not self.num.terms or not other.num.terms:
            vs = _merge_vars(self.variables, other.variables)
            return FieldElem.zero(vs)
        if self.den.is_one() and other.den.is_one():
            n = self.num * other.num
            return FieldElem._raw(n, MultiPoly.constant(1, n.variables))
        return FieldElem(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> FieldElem:
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        if not other.num.terms:
            raise ZeroDivisionError("division by the zero element")
        return FieldElem(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> FieldElem:
        return _coerce_operand(other) / self

    def __pow__(self, n: int) -> FieldElem:
        if n < 0:
            return FieldElem.one(self.variables) / (self ** -n)
        return FieldElem(self.num ** n, self.den ** n)

    def __eq__(self, other) -> bool:
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        return field_equals(self, other)

    __hash__ = None

    def evaluate(self, values: Mapping[str, object]) -> FieldElem:
        return self.num.evaluate(values) / self.den.evaluate(values)

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = str(self.den)
        if len(self.den.terms) > 1 or not self.den.is_constant() and len(self.den.terms) == 1 and "*" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"FieldElem({str(self)!r})"

    def pretty(self) -> str:
        return str(self).replace("*", "")


def _same_poly(a: MultiPoly, b: MultiPoly) -> bool:
    return a.terms == b.terms


def _coerce_operand(x):
    if isinstance(x, FieldElem):
        return x
    if isinstance(x, (int, Fraction)):
        return FieldElem.constant(x)
    return NotImplemented


def _normalize(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    vs = num.variables
    if not num.terms:
        return num, MultiPoly.constant(1, vs)
    if den.is_constant():
        c = den.constant_value()
        if c == 1:
            return num, den
        return num.scale(1 / c), MultiPoly.constant(1, vs)
    if vs:
        g = num.monomial_gcd()
        g = tuple(min(x, y) for x, y in zip(g, den.monomial_gcd()))
        if any(g):
            num, den = num.divide_monomial(g), den.divide_monomial(g)
    if den.is_constant():
        return num.scale(1 / den.constant_value()), MultiPoly.constant(1, vs)
    q = num.exact_quotient(den)
    if q is not None:
        return q, MultiPoly.constant(1, vs)
    if not num.is_constant():
        q = den.exact_quotient(num)
        if q is not None:
            num, den = MultiPoly.constant(1, vs), q
    lead = den.leading()[1]
    c = den.content()
    if lead < 0:
        c = -c
    if c != 1:
        num, den = num.scale(1 / c), den.scale(1 / c)
    if den.is_constant():
        return num.scale(1 / den.constant_value()), MultiPoly.constant(1, vs)
    return num, den


# -- named operation entry points ------------------------------------------

def field_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def field_equals(a: FieldElem, b: FieldElem) -> bool:
    """Cross-multiplication test num(a)*den(b) - num(b)*den(a) == 0."""
    if a.den.is_one() and b.den.is_one():
        return (a.num - b.num).is_zero()
    return (a.num * b.den - b.num * a.den).is_zero()


# -- coefficient expression grammar -------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.replace("−", "-")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExpressionError(f"unexpected character {ch!r}", start, text)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExpressionError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> FieldElem:
        if self.peek()[0] == "end":
            raise ExpressionError("empty expression", 0, self.text)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return value

    def expr(self) -> FieldElem:
        value = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> FieldElem:
        value = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ExpressionError("division by zero", pos, self.text)
                value = value / rhs
        return value

    def unary(self) -> FieldElem:
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> FieldElem:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            exp = self.take("int")[1]
            base = base ** exp
        return base

    def atom(self) -> FieldElem:
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            return FieldElem.constant(value, self.variables or ())
        if kind == "name":
            self.take()
            if self.variables is not None and value not in self.variables:
                raise ExpressionError(f"undeclared parameter {value!r}", pos, self.text)
            return FieldElem.variable(value, self.variables or (value,))
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(value)
        raise ExpressionError(f"unexpected {what}", pos, self.text)


def parse_coefficient(text: str, variables: Sequence[str] | None = None) -> FieldElem:
    """Parse e.g. ``"-(1+q)/2"`` or ``"q*rho1^2/rho2"``.

    With ``variables`` given, identifiers outside that list are rejected and
    the result is expressed over exactly that variable list.
    """
    vs = tuple(variables) if variables is not None else None
    value = _Parser(str(text), vs).parse()
    return value.with_variables(vs) if vs is not None else value


# -- matrices ---------------------------------------------------------------

Vector = tuple  # tuple[FieldElem, ...]


def zero_vector(n: int) -> Vector:
    z = FieldElem.zero()
    return (z,) * n


def basis_vector(n: int, i: int) -> Vector:
    z, o = FieldElem.zero(), FieldElem.one()
    return tuple(o if k == i else z for k in range(n))


def vec_add(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c, x: Vector) -> Vector:
    return tuple(c * a for a in x)


def vec_is_zero(x: Vector) -> bool:
    return all(a.is_zero() for a in x)


def vec_equals(x: Vector, y: Vector) -> bool:
    return len(x) == len(y) and all(field_equals(a, b) for a, b in zip(x, y))


def to_vector(values: Iterable) -> Vector:
    return tuple(FieldElem.coerce(v) for v in values)


class FieldMatrix:
    """Dense rows x cols matrix of FieldElem, row-major and immutable.

    As a linear map it acts on column vectors: entry (i, j) is the
    coefficient of basis vector i in the image of basis vector j.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        self.rows = rows
        self.cols = cols
        self.entries = tuple(FieldElem.coerce(e) for e in entries)
        if len(self.entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> FieldMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix rows")
        return cls(len(rows), ncols, [e for r in rows for e in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> FieldMatrix:
        return cls.from_rows(list(zip(*columns))) if columns else cls(0, 0, [])

    @classmethod
    def identity(cls, n: int) -> FieldMatrix:
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> FieldMatrix:
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence) -> FieldMatrix:
        n = len(values)
        return cls(n, n, [values[i] if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> FieldElem:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[FieldElem]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def apply(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for a {self.rows}x{self.cols} matrix")
        out = []
        nz = [(j, x) for j, x in enumerate(v) if x.num.terms]
        for i in range(self.rows):
            acc = FieldElem.zero()
            base = i * self.cols
            for j, x in nz:
                m = self.entries[base + j]
                if m.num.terms:
                    acc = acc + m * x
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, FieldMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in matrix product")
            cols = [self.apply(other.column(j)) for j in range(other.cols)]
            return FieldMatrix(self.rows, other.cols,
                               [cols[j][i] for i in range(self.rows) for j in range(other.cols)])
        return self.apply(tuple(other))

    def __add__(self, other: FieldMatrix) -> FieldMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return FieldMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: FieldMatrix) -> FieldMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return FieldMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> FieldMatrix:
        return FieldMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> FieldMatrix:
        c = FieldElem.coerce(c)
        return FieldMatrix(self.rows, self.cols, [c * a for a in self.entries])

    def __pow__(self, n: int) -> FieldMatrix:
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldMatrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def transpose(self) -> FieldMatrix:
        return FieldMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def equals(self, other: FieldMatrix) -> bool:
        return self.shape == other.shape and all(field_equals(a, b) for a, b in zip(self.entries, other.entries))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def inverse(self) -> FieldMatrix:
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = FieldMatrix.from_rows([list(self.row(i)) + list(basis_vector(n, i)) for i in range(n)])
        red, pivots = rref(aug)
        if pivots != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return FieldMatrix.from_rows([list(red.row(i))[n:] for i in range(n)])

    def map_entries(self, fn) -> FieldMatrix:
        return FieldMatrix(self.rows, self.cols, [fn(e) for e in self.entries])

    def __repr__(self) -> str:
        return f"FieldMatrix({[[str(e) for e in r] for r in self.to_rows()]})"


# -- row reduction --------------------------------------------------------------

def rref(m: FieldMatrix) -> tuple[FieldMatrix, list[int]]:
    """Reduced row echelon form; pivot chosen as the first nonzero entry below."""
    a = m.to_rows()
    rows, cols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if a[i][c].num.terms), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = FieldElem.one() / a[r][c]
        a[r] = [x * inv if x.num.terms else x for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c].num.terms:
                f = a[i][c]
                a[i] = [x - f * y if y.num.terms else x for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return FieldMatrix.from_rows(a) if rows else m, pivots


def solve_linear(m: FieldMatrix, mode: str = "rank", rhs: Sequence | None = None):
    """Exact linear algebra dispatcher.

    ``mode`` is one of ``rank`` (int), ``rref`` ((matrix, pivot columns)),
    ``kernel_basis`` (list of vectors spanning the null space) or ``solve``
    (a particular solution of m x = rhs; raises :class:`NoSolution`).
    """
    if mode == "rank":
        return len(rref(m)[1])
    if mode == "rref":
        return rref(m)
    if mode == "kernel_basis":
        red, pivots = rref(m)
        free = [c for c in range(m.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [FieldElem.zero()] * m.cols
            v[f] = FieldElem.one()
            for i, p in enumerate(pivots):
                v[p] = -red[i, f]
            basis.append(tuple(v))
        return basis
    if mode == "solve":
        if rhs is None or len(rhs) != m.rows:
            raise ValueError("solve mode needs a right-hand side with one entry per row")
        aug = FieldMatrix.from_rows([list(m.row(i)) + [FieldElem.coerce(rhs[i])] for i in range(m.rows)])
        red, pivots = rref(aug)
        if pivots and pivots[-1] == m.cols:
            raise NoSolution("inconsistent linear system")
        x = [FieldElem.zero()] * m.cols
        for i, p in enumerate(pivots):
            x[p] = red[i, m.cols]
        return tuple(x)
    raise ValueError(f"unknown mode {mode!r}")


class SparseEchelon:
    """Incrementally maintained reduced echelon basis of sparse row vectors.

    Rows are dicts ``column -> FieldElem``. Every stored row has pivot
    coefficient 1 and a zero in every other row's pivot column, so reducing a
    vector needs a single pass over the pivots it touches.
    """

    def __init__(self):
        self.rows: dict[int, dict[int, FieldElem]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping[int, FieldElem]) -> dict[int, FieldElem]:
        out = {k: v for k, v in vec.items() if v.num.terms}
        for p in [k for k in out if k in self.rows]:
            f = out.get(p)
            if f is None or not f.num.terms:
                continue
            for k, v in self.rows[p].items():
                s = out.get(k, FieldElem.zero()) - f * v
                if s.num.terms:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def add(self, vec: Mapping[int, FieldElem]) -> bool:
        """Insert vec; True iff it was independent of the stored rows."""
        red = self.reduce(vec)
        if not red:
            return False
        p = min(red)
        inv = FieldElem.one() / red[p]
        red = {k: v * inv for k, v in red.items()}
        for q, row in self.rows.items():
            f = row.get(p)
            if f is not None and f.num.terms:
                for k, v in red.items():
                    s = row.get(k, FieldElem.zero()) - f * v
                    if s.num.terms:
                        row[k] = s
                    else:
                        row.pop(k, None)
        self.rows[p] = red
        return True

    def contains(self, vec: Mapping[int, FieldElem]) -> bool:
        return not self.reduce(vec)

    def copy(self) -> SparseEchelon:
        other = SparseEchelon()
        other.rows = {p: dict(r) for p, r in self.rows.items()}
        return other


def superscript(n: int) -> str:
    return str(n).translate(_SUPERSCRIPT)
