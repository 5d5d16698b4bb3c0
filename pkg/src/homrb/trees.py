"""Planar binary trees, decorated trees and their alpha/R decoration calculus.

A decoration (a_k, ..., a_1) at a node stands for the operator word
... alpha^a4 R^a3 alpha^a2 R^a1, with R^a1 applied first. Entries a_j with
j >= 2 are positive; at a leaf, a_1 = 0 forces k = 1.

Text grammar (canonical, no whitespace)::

    tree := "L" dec? | "(" tree "," tree ")" dec?
    dec  := "[" int ("," int)* "]"        # (a_k, ..., a_1); omitted means (0)
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

from .coeff import superscript

ZERO = (0,)


class TreeSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class TreeConstraintError(ValueError):
    pass


class UndefinedOperation(ValueError):
    pass


# ---- undecorated shapes ------------------------------------------------------

class PlanarBinaryTree:
    __slots__ = ("left", "right", "leaves", "_key")

    def __init__(self, left: PlanarBinaryTree | None = None, right: PlanarBinaryTree | None = None):
        if (left is None) != (right is None):
            raise ValueError("a planar binary tree is a leaf or a graft of two trees")
        self.left, self.right = left, right
        self.leaves = 1 if left is None else left.leaves + right.leaves
        self._key = () if left is None else (left._key, right._key)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def __eq__(self, other) -> bool:
        return isinstance(other, PlanarBinaryTree) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __str__(self) -> str:
        return "|" if self.is_leaf else f"({self.left},{self.right})"

    __repr__ = __str__


LEAF = PlanarBinaryTree()


def graft_shapes(a: PlanarBinaryTree, b: PlanarBinaryTree) -> PlanarBinaryTree:
    return PlanarBinaryTree(a, b)


@lru_cache(maxsize=None)
def _trees(n: int) -> tuple[PlanarBinaryTree, ...]:
    if n == 1:
        return (LEAF,)
    out = []
    for i in range(1, n):
        for a in _trees(i):
            for b in _trees(n - i):
                out.append(PlanarBinaryTree(a, b))
    return tuple(out)


def enumerate_trees(n: int) -> list[PlanarBinaryTree]:
    """All planar binary trees with n leaves, in recursive split order."""
    if n < 1:
        raise ValueError("a planar binary tree has at least one leaf")
    return list(_trees(n))


# ---- decorations --------------------------------------------------------------

def check_decoration(dec: Sequence[int], leaf: bool) -> tuple[int, ...]:
    dec = tuple(dec)
    if not dec:
        raise TreeConstraintError("a decoration is a non-empty sequence")
    if any((not isinstance(a, int)) or a < 0 for a in dec):
        raise TreeConstraintError(f"decoration entries must be non-negative integers: {dec}")
    if any(a == 0 for a in dec[:-1]):
        raise TreeConstraintError(f"entries a_j with j >= 2 must be positive: {list(dec)}")
    if leaf and dec[-1] == 0 and len(dec) > 1:
        raise TreeConstraintError(f"a leaf with a_1 = 0 must have k = 1: {list(dec)}")
    return dec


def bump(dec: tuple[int, ...], which: str) -> tuple[int, ...]:
    """Decoration after applying one more R or alpha on the outside."""
    k = len(dec)
    if which == "R":
        grow = k % 2 == 1
    elif which == "alpha":
        grow = k % 2 == 0
    else:
        raise ValueError(f"unknown operation {which!r}")
    if grow:
        return (dec[0] + 1,) + dec[1:]
    return (1,) + dec


def reduced_form(word: Sequence[str]) -> tuple[int, ...]:
    """Decoration of a word of letters 'R'/'alpha' (application order) applied to (0)."""
    dec = ZERO
    for letter in word:
        dec = bump(dec, letter)
    return dec


def decoration_word(dec: Sequence[int]) -> list[str]:
    """Letters of the operator word in application order (R^a1 first)."""
    word: list[str] = []
    for j, a in enumerate(reversed(tuple(dec)), start=1):
        word += ["R" if j % 2 == 1 else "alpha"] * a
    return word


def format_word(dec: Sequence[int], alpha_symbol: str = "α") -> str:
    """Outermost letter first, e.g. (1, 8, 0) -> 'Rα⁸'."""
    parts = []
    k = len(dec)
    for pos, a in enumerate(dec):
        j = k - pos
        if a == 0:
            continue
        letter = "R" if j % 2 == 1 else alpha_symbol
        parts.append(letter + (superscript(a) if a != 1 else ""))
    return "".join(parts)


# ---- decorated trees -------------------------------------------------------------

class DecoratedTree:
    """A decorated planar binary tree; ``decoration`` sits at the lowest vertex."""

    __slots__ = ("left", "right", "decoration", "leaves", "weight", "_key", "_hash")

    def __init__(self, left: DecoratedTree | None, right: DecoratedTree | None,
                 decoration: Sequence[int] = ZERO, _checked: bool = False):
        if (left is None) != (right is None):
            raise ValueError("a decorated tree is a leaf or a graft of two trees")
        dec = tuple(decoration) if _checked else check_decoration(decoration, left is None)
        self.left, self.right, self.decoration = left, right, dec
        if left is None:
            self.leaves = 1
            self.weight = sum(dec)
            self._key = (dec,)
        else:
            self.leaves = left.leaves + right.leaves
            self.weight = left.weight + right.weight + sum(dec)
            self._key = (left._key, right._key, dec)
        self._hash = hash(self._key)

    @classmethod
    def leaf(cls, decoration: Sequence[int] = ZERO) -> DecoratedTree:
        return cls(None, None, decoration)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def complexity(self) -> int:
        return self.leaves + self.weight

    @property
    def shape(self) -> PlanarBinaryTree:
        if self.is_leaf:
            return LEAF
        return PlanarBinaryTree(self.left.shape, self.right.shape)

    def is_bare_leaf(self) -> bool:
        return self.left is None and self.decoration == ZERO

    def decorations(self) -> list[tuple[int, ...]]:
        """All decorations in prefix order (lowest vertex first, then left, then right)."""
        if self.is_leaf:
            return [self.decoration]
        return [self.decoration] + self.left.decorations() + self.right.decorations()

    def with_decoration(self, dec: Sequence[int]) -> DecoratedTree:
        return DecoratedTree(self.left, self.right, dec)

    def __eq__(self, other) -> bool:
        return isinstance(other, DecoratedTree) and self._hash == other._hash and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: DecoratedTree) -> bool:
        return sort_key(self) < sort_key(other)

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"DecoratedTree({serialize(self)!r})"


BARE_LEAF = DecoratedTree.leaf()


def sort_key(t: DecoratedTree):
    return (t.complexity, t.leaves, serialize(t))


def graft(tau: DecoratedTree, sigma: DecoratedTree) -> DecoratedTree:
    """Join two decorated trees at a new lowest vertex decorated (0)."""
    return DecoratedTree(tau, sigma, ZERO, _checked=True)


def apply_unary(tau: DecoratedTree, which: str) -> DecoratedTree:
    """Apply R or alpha at the tree level; only the lowest decoration changes."""
    if which not in ("R", "alpha"):
        raise ValueError(f"unknown operation {which!r}")
    if which == "alpha" and tau.is_bare_leaf():
        raise UndefinedOperation("alpha is not defined on the bare 1-tree")
    return DecoratedTree(tau.left, tau.right, bump(tau.decoration, which), _checked=True)


def apply_word(tau: DecoratedTree, word: Sequence[str]) -> DecoratedTree:
    for letter in word:
        tau = apply_unary(tau, letter)
    return tau


def decompose(tau: DecoratedTree) -> tuple[DecoratedTree, DecoratedTree, list[str]]:
    """Split an n-tree (n >= 2) as graft(left, right) followed by a word in R/alpha."""
    if tau.is_leaf:
        raise ValueError("a 1-tree is not a graft")
    return tau.left, tau.right, decoration_word(tau.decoration)


def rebuild(left: DecoratedTree, right: DecoratedTree, word: Sequence[str]) -> DecoratedTree:
    return apply_word(graft(left, right), word)


# ---- text form ----------------------------------------------------------------------

def _fmt_dec(dec: tuple[int, ...]) -> str:
    return "" if dec == ZERO else "[" + ",".join(str(a) for a in dec) + "]"


def serialize(tau: DecoratedTree) -> str:
    if tau.is_leaf:
        return "L" + _fmt_dec(tau.decoration)
    return f"({serialize(tau.left)},{serialize(tau.right)}){_fmt_dec(tau.decoration)}"


class _TreeParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str, pos: int | None = None):
        raise TreeSyntaxError(msg, self.pos if pos is None else pos, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            self.error(f"expected {ch!r}, got {got!r}")
        self.pos += 1

    def parse(self) -> DecoratedTree:
        t = self.tree()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return t

    def tree(self) -> DecoratedTree:
        start = self.pos
        ch = self.peek()
        if ch == "L":
            self.pos += 1
            left = right = None
        elif ch == "(":
            self.pos += 1
            left = self.tree()
            self.expect(",")
            right = self.tree()
            self.expect(")")
        else:
            self.error(f"expected 'L' or '(', got {ch or 'end of input'!r}")
        dec = self.dec() if self.peek() == "[" else ZERO
        try:
            return DecoratedTree(left, right, dec)
        except TreeConstraintError as exc:
            raise TreeConstraintError(f"{exc} (node starting at position {start})") from None

    def dec(self) -> tuple[int, ...]:
        self.expect("[")
        out = [self.int()]
        while self.peek() == ",":
            self.pos += 1
            out.append(self.int())
        self.expect("]")
        return tuple(out)

    def int(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a non-negative integer")
        return int(self.text[start:self.pos])


def parse_tree(text: str) -> DecoratedTree:
    return _TreeParser(text).parse()


parse = parse_tree


# ---- enumeration ------------------------------------------------------------------------

def _compositions(total: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of positive integers summing to ``total`` (including the empty one for 0)."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def decorations_of_weight(weight: int, leaf: bool) -> tuple[tuple[int, ...], ...]:
    """All admissible decorations with entry sum exactly ``weight``."""
    out = []
    for a1 in range(weight + 1):
        if leaf and a1 == 0 and weight > 0:
            continue
        for head in _compositions(weight - a1):
            out.append(head + (a1,))
    return tuple(out)


@lru_cache(maxsize=None)
def _decorated_exact(n: int, weight: int) -> tuple[DecoratedTree, ...]:
    if n == 1:
        return tuple(DecoratedTree(None, None, d, _checked=True) for d in decorations_of_weight(weight, True))
    out = []
    for i in range(1, n):
        for w_root in range(weight + 1):
            roots = decorations_of_weight(w_root, False)
            for w_left in range(weight - w_root + 1):
                lefts = _decorated_exact(i, w_left)
                rights = _decorated_exact(n - i, weight - w_root - w_left)
                for a in lefts:
                    for b in rights:
                        for d in roots:
                            out.append(DecoratedTree(a, b, d, _checked=True))
    return tuple(out)


def enumerate_decorated(n: int, weight_bound: int) -> list[DecoratedTree]:
    """All decorated n-trees of weight at most ``weight_bound``, ordered by weight."""
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    if weight_bound < 0:
        return []
    out: list[DecoratedTree] = []
    for w in range(weight_bound + 1):
        out.extend(_decorated_exact(n, w))
    return out


def trees_up_to_complexity(bound: int) -> list[DecoratedTree]:
    """All decorated trees with complexity (leaves + weight) at most ``bound``."""
    out: list[DecoratedTree] = []
    for n in range(1, bound + 1):
        out.extend(enumerate_decorated(n, bound - n))
    return out


# ---- operator-word rendering ----------------------------------------------------------

_DELIMS = ("()", "[]", "{}")


def _height(t: DecoratedTree) -> int:
    return 0 if t.is_leaf else 1 + max(_height(t.left), _height(t.right))


def render(tau: DecoratedTree, names: Sequence[str] | None = None, product: str = "·") -> str:
    """Symbolic evaluation as an operator word, e.g. 'Rα⁸{[...]·[...]}'.

    Product factors that are not bare leaves are bracketed by nesting depth
    with (), [], {}; the outermost word wraps its argument in the next size up.
    """
    n = tau.leaves
    if names is None:
        names = [f"b{_subscript(i + 1)}" for i in range(n)]
    if len(names) != n:
        raise ValueError(f"expected {n} argument names, got {len(names)}")
    it = iter(names)

    def go(t: DecoratedTree, outermost: bool) -> str:
        word = format_word(t.decoration)
        if t.is_leaf:
            name = next(it)
            return f"{word}({name})" if word else name
        h = _height(t)
        d = _DELIMS[(h - 1) % len(_DELIMS)]
        parts = []
        for child in (t.left, t.right):
            s = go(child, False)
            parts.append(s if child.is_bare_leaf() else f"{d[0]}{s}{d[1]}")
        body = product.join(parts)
        if not word:
            return body
        wrap = _DELIMS[h % len(_DELIMS)] if outermost else "()"
        return f"{word}{wrap[0]}{body}{wrap[1]}"

    return go(tau, True)


_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _subscript(n: int) -> str:
    return str(n).translate(_SUB)


# ---- modified decorated trees (internal nodes tagged l/r) ----------------------------------

class ModifiedDecoratedTree:
    """Planar binary tree with (m, tag) on internal vertices; leaves are bare.

    Text form: ``L`` or ``(t,t)`` followed by the tag ``l``/``r`` and an
    optional ``[m]`` when m > 0, e.g. ``((L,L)r[2],L)l``.
    """

    __slots__ = ("left", "right", "m", "tag", "leaves", "weight", "_key", "_hash")

    def __init__(self, left=None, right=None, m: int = 0, tag: str | None = None):
        if (left is None) != (right is None):
            raise ValueError("a tree is a leaf or a graft of two trees")
        if left is None:
            if m or tag is not None:
                raise TreeConstraintError("leaves carry no decoration")
            self.leaves, self.weight, self._key = 1, 0, ()
        else:
            if tag not in ("l", "r") or not isinstance(m, int) or m < 0:
                raise TreeConstraintError("internal vertices carry (m >= 0, tag in {l, r})")
            self.leaves = left.leaves + right.leaves
            self.weight = left.weight + right.weight + m
            self._key = (left._key, right._key, m, tag)
        self.left, self.right, self.m, self.tag = left, right, m, tag
        self._hash = hash(self._key)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def complexity(self) -> int:
        return self.leaves + self.weight

    def __eq__(self, other) -> bool:
        return isinstance(other, ModifiedDecoratedTree) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if self.is_leaf:
            return "L"
        return f"({self.left},{self.right}){self.tag}" + (f"[{self.m}]" if self.m else "")

    __repr__ = __str__


MLEAF = ModifiedDecoratedTree()


def graft_tagged(a: ModifiedDecoratedTree, b: ModifiedDecoratedTree, tag: str) -> ModifiedDecoratedTree:
    return ModifiedDecoratedTree(a, b, 0, tag)


def alpha_modified(t: ModifiedDecoratedTree) -> ModifiedDecoratedTree:
    if t.is_leaf:
        raise UndefinedOperation("alpha on the 1-leaf tree acts through the base module")
    return ModifiedDecoratedTree(t.left, t.right, t.m + 1, t.tag)


@lru_cache(maxsize=None)
def _modified_exact(n: int, weight: int) -> tuple[ModifiedDecoratedTree, ...]:
    if n == 1:
        return (MLEAF,) if weight == 0 else ()
    out = []
    for i in range(1, n):
        for m in range(weight + 1):
            for w_left in range(weight - m + 1):
                for a in _modified_exact(i, w_left):
                    for b in _modified_exact(n - i, weight - m - w_left):
                        for tag in ("l", "r"):
                            out.append(ModifiedDecoratedTree(a, b, m, tag))
    return tuple(out)


def enumerate_modified(n: int, weight_bound: int) -> list[ModifiedDecoratedTree]:
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    out: list[ModifiedDecoratedTree] = []
    for w in range(max(weight_bound, -1) + 1):
        out.extend(_modified_exact(n, w))
    return out


def parse_modified(text: str) -> ModifiedDecoratedTree:
    pos = 0

    def err(msg):
        raise TreeSyntaxError(msg, pos, text)

    def tree():
        nonlocal pos
        if text.startswith("L", pos):
            pos += 1
            return MLEAF
        if not text.startswith("(", pos):
            err("expected 'L' or '('")
        pos += 1
        a = tree()
        if not text.startswith(",", pos):
            err("expected ','")
        pos += 1
        b = tree()
        if not text.startswith(")", pos):
            err("expected ')'")
        pos += 1
        if pos >= len(text) or text[pos] not in "lr":
            err("expected tag 'l' or 'r'")
        tag = text[pos]
        pos += 1
        m = 0
        if text.startswith("[", pos):
            end = text.find("]", pos)
            if end < 0 or not text[pos + 1:end].isdigit():
                err("expected '[m]'")
            m = int(text[pos + 1:end])
            pos = end + 1
        return ModifiedDecoratedTree(a, b, m, tag)

    t = tree()
    if pos != len(text):
        err("unexpected trailing input")
    return t
