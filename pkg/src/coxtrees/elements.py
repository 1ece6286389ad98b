"""Word problem for Coxeter groups through the Tits representation.

Group elements are identified by their ShortLex normal form: the
lexicographically least among the reduced words.  Everything is driven by the
descent test ``l(ws) < l(w)  <=>  sigma(w)(u_s) < 0``.

The matrices used internally are integral: entries of ``sigma_s`` are 0, +-1
and ``2cos(pi/m)``, all algebraic integers, so a matrix is stored as nested
tuples of integer coefficient vectors in ``theta`` (plain ints when the field
is Q).  This keeps hashing and arithmetic cheap in the breadth-first searches.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .coxeter_core import CoxeterSystem, InvariantViolation, Matrix, is_spherical
from .exact_real import ExactReal, sign_of_coeffs

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    """An enumeration hit its element cap; ``partial`` is how far it got."""

    def __init__(self, message: str, partial: int):
        super().__init__(message)
        self.partial = partial


def default_budget() -> int:
    return int(os.environ.get("COXTREES_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True, order=True)
class GroupElement:
    """Element of W given by its ShortLex normal form (generator indices)."""

    word: tuple[int, ...] = ()

    def __len__(self):
        return len(self.word)

    @property
    def length(self) -> int:
        return len(self.word)

    def is_identity(self) -> bool:
        return not self.word

    def label(self, sys: CoxeterSystem) -> str:
        return "".join(sys.generators[i] for i in self.word) or "e"

    def __repr__(self):
        return f"GroupElement({list(self.word)})"


IDENTITY = GroupElement(())


def shortlex_key(w: GroupElement):
    return (len(w.word), w.word)


# ---------------------------------------------------------------------------
# integral matrix kernel


class Kernel:
    """Integral matrix arithmetic for one system, with rows as tuples of scalars."""

    def __init__(self, sys: CoxeterSystem):
        self.sys = sys
        self.n = n = sys.rank
        self.ctx = ctx = sys.field
        self.d = d = ctx.degree
        self.f = ctx.min_poly
        if d == 1:
            self.zero, self.one = 0, 1
        else:
            self.zero, self.one = (0,) * d, (1,) + (0,) * (d - 1)
        # coupling[s] = [(t, 2cos(pi/m_st))] over t != s with m_st != 2
        self.coupling = []
        for s in range(n):
            row = []
            for t in range(n):
                if t == s:
                    continue
                c = -sys.two_gram[t][s]
                assert c.den == 1
                if not c.is_zero():
                    row.append((t, c.num[0] if d == 1 else c.num))
            self.coupling.append(tuple(row))
        self.identity = tuple(
            tuple(self.one if i == j else self.zero for j in range(n)) for i in range(n))

    # scalars --------------------------------------------------------------

    def add(self, a, b):
        if self.d == 1:
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        if self.d == 1:
            return -a
        return tuple(-x for x in a)

    def mul(self, a, b):
        if self.d == 1:
            return a * b
        d, f = self.d, self.f
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            if c:
                for j in range(d):
                    prod[i - d + j] -= c * f[j]
        return tuple(prod[:d])

    def sign(self, a) -> int:
        if self.d == 1:
            return (a > 0) - (a < 0)
        return sign_of_coeffs(self.ctx, a)

    def is_zero(self, a) -> bool:
        return a == self.zero

    def to_exact(self, a) -> ExactReal:
        return self.ctx.from_coeffs([a] if self.d == 1 else a)

    # matrices -------------------------------------------------------------

    def left(self, s: int, m):
        """sigma_s * m: only row s changes."""
        row = [self.neg(x) for x in m[s]]
        for t, c in self.coupling[s]:
            other = m[t]
            for j in range(self.n):
                if other[j] != self.zero:
                    row[j] = self.add(row[j], self.mul(c, other[j]))
        out = list(m)
        out[s] = tuple(row)
        return tuple(out)

    def right(self, m, s: int):
        """m * sigma_s: column s is negated and added (scaled) to the coupled columns."""
        out = []
        for row in m:
            x = row[s]
            if x == self.zero:
                out.append(row)
                continue
            new = list(row)
            new[s] = self.neg(x)
            for t, c in self.coupling[s]:
                new[t] = self.add(new[t], self.mul(c, x))
            out.append(tuple(new))
        return tuple(out)

    def column_sign(self, m, s: int, strict: bool = False) -> int:
        """Sign of the root m(u_s); with ``strict`` all coordinates are checked."""
        if not strict:
            for row in m:
                x = row[s]
                if x != self.zero:
                    return self.sign(x)
            raise InvariantViolation("zero column in an invertible matrix")
        signs = {self.sign(row[s]) for row in m} - {0}
        if len(signs) != 1:
            raise InvariantViolation(
                f"root with mixed or no signs: {[row[s] for row in m]}")
        return signs.pop()

    def of_word(self, word: Iterable[int]):
        m = self.identity
        for s in word:
            m = self.right(m, s)
        return m

    def inverse_of_word(self, word: Sequence[int]):
        """Matrix of the inverse element, built by left multiplication."""
        m = self.identity
        for s in word:
            m = self.left(s, m)
        return m

    def to_exact_matrix(self, m) -> Matrix:
        return tuple(tuple(self.to_exact(x) for x in row) for row in m)

    def column(self, m, s: int) -> tuple[ExactReal, ...]:
        return tuple(self.to_exact(row[s]) for row in m)


def kernel(sys: CoxeterSystem) -> Kernel:
    k = sys.__dict__.get("_kernel")
    if k is None:
        k = Kernel(sys)
        sys.__dict__["_kernel"] = k
    return k


# ---------------------------------------------------------------------------
# elements


def as_word(sys: CoxeterSystem, word) -> tuple[int, ...]:
    if isinstance(word, GroupElement):
        return word.word
    if isinstance(word, str):
        if word in ("", "e"):
            return ()
        labels = sorted(sys.generators, key=len, reverse=True)
        out, i = [], 0
        while i < len(word):
            for lab in labels:
                if word.startswith(lab, i):
                    out.append(sys.generators.index(lab))
                    i += len(lab)
                    break
            else:
                raise KeyError(f"cannot read {word!r} as a word in {sys.generators}")
        return tuple(out)
    return tuple(sys.index(s) for s in word)


def _normal_form_from_inverse(k: Kernel, minv) -> tuple[int, ...]:
    """Strip least left descents off x, given sigma(x^-1)."""
    out = []
    n = k.n
    while True:
        for s in range(n):
            if k.column_sign(minv, s) < 0:
                out.append(s)
                minv = k.right(minv, s)
                break
        else:
            return tuple(out)


def normal_form(sys: CoxeterSystem, word) -> tuple[int, ...]:
    k = kernel(sys)
    return _normal_form_from_inverse(k, k.inverse_of_word(as_word(sys, word)))


def element(sys: CoxeterSystem, word=()) -> GroupElement:
    """Canonical element represented by an arbitrary word (labels or indices)."""
    return GroupElement(normal_form(sys, word))


def generator(sys: CoxeterSystem, s) -> GroupElement:
    return GroupElement((sys.index(s),))


def length(sys: CoxeterSystem, word) -> int:
    return len(normal_form(sys, word))


def is_reduced(sys: CoxeterSystem, word) -> bool:
    w = as_word(sys, word)
    return length(sys, w) == len(w)


def matrix_of(sys: CoxeterSystem, w) -> Matrix:
    """sigma(w) with exact entries, in the basis of simple roots."""
    k = kernel(sys)
    return k.to_exact_matrix(k.of_word(as_word(sys, w)))


def root(sys: CoxeterSystem, w, s) -> tuple[ExactReal, ...]:
    """The root sigma(w)(u_s)."""
    k = kernel(sys)
    return k.column(k.of_word(as_word(sys, w)), sys.index(s))


def is_right_descent(sys: CoxeterSystem, w, s) -> bool:
    """l(ws) < l(w), read off the sign of sigma(w)(u_s); mixed signs abort."""
    k = kernel(sys)
    return k.column_sign(k.of_word(as_word(sys, w)), sys.index(s), strict=True) < 0


def is_left_descent(sys: CoxeterSystem, w, s) -> bool:
    k = kernel(sys)
    return k.column_sign(k.inverse_of_word(as_word(sys, w)), sys.index(s), strict=True) < 0


def right_descents(sys: CoxeterSystem, w) -> tuple[int, ...]:
    k = kernel(sys)
    m = k.of_word(as_word(sys, w))
    return tuple(s for s in range(sys.rank) if k.column_sign(m, s) < 0)


def multiply(sys: CoxeterSystem, w, v) -> GroupElement:
    """Canonical form of the product, recomputed from the concatenated word."""
    return element(sys, as_word(sys, w) + as_word(sys, v))


def inverse(sys: CoxeterSystem, w) -> GroupElement:
    return element(sys, tuple(reversed(as_word(sys, w))))


def power(sys: CoxeterSystem, w, j: int) -> GroupElement:
    word = as_word(sys, w)
    if j < 0:
        word, j = tuple(reversed(word)), -j
    return element(sys, word * j)


def conjugate(sys: CoxeterSystem, g, x) -> GroupElement:
    """g x g^-1."""
    gw = as_word(sys, g)
    return element(sys, gw + as_word(sys, x) + tuple(reversed(gw)))


def min_coset_rep(sys: CoxeterSystem, w, subset: Iterable) -> GroupElement:
    """Minimal-length element of the coset w W_T, found by stripping right descents in T."""
    k = kernel(sys)
    T = sorted({sys.index(t) for t in subset})
    word = list(as_word(sys, w))
    m = k.of_word(word)
    while True:
        for t in T:
            if k.column_sign(m, t) < 0:
                word.append(t)
                m = k.right(m, t)
                break
        else:
            break
    return element(sys, word)


# ---------------------------------------------------------------------------
# balls


@dataclass
class Ball:
    """Elements of length <= radius in ShortLex order, with right-multiplication adjacency.

    ``adjacency[i][s]`` is the index of ``elements[i] * s`` or -1 when that
    product lies outside the ball.
    """

    sys: CoxeterSystem
    radius: int
    elements: list[GroupElement]
    adjacency: list[tuple[int, ...]]
    exhausted: bool
    generators: tuple[int, ...] = ()
    _index: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.elements)

    def index(self, w) -> int:
        return self._index[w.word if isinstance(w, GroupElement) else tuple(w)]

    def get(self, w) -> int | None:
        return self._index.get(w.word if isinstance(w, GroupElement) else tuple(w))

    def __contains__(self, w) -> bool:
        return self.get(w) is not None

    def growth(self) -> list[int]:
        """Number of elements of each length 0..radius."""
        counts = [0] * (self.radius + 1)
        for w in self.elements:
            counts[len(w.word)] += 1
        return counts

    def edges(self) -> list[tuple[int, int, int]]:
        """Chamber-graph edges (i, j, s) with i < j and elements[i] * s = elements[j]."""
        out = []
        for i, row in enumerate(self.adjacency):
            for s, j in enumerate(row):
                if j > i:
                    out.append((i, j, s))
        return out

    def to_json(self) -> dict:
        edges = self.edges()
        return {
            "radius": self.radius,
            "generators": list(self.sys.generators),
            "exhausted": self.exhausted,
            "elements": [list(w.word) for w in self.elements],
            "adjacency": [[i, j] for i, j, _ in edges],
            "edge_generators": [s for _, _, s in edges],
        }


def _bfs(sys: CoxeterSystem, radius: int | None, gens: Sequence[int], budget: int):
    """Layered enumeration by left multiplication.

    x = s*y gets the normal form s + NF(y) exactly when s is the least left
    descent of x, so every element is produced once, already canonical, and
    each layer comes out ShortLex-sorted.
    """
    k = kernel(sys)
    words = [()]
    inv = [k.identity]
    layer = [0]
    depth = 0
    while layer and (radius is None or depth < radius):
        nxt = []
        for s in gens:
            for y in layer:
                my = inv[y]
                if k.column_sign(my, s) < 0:
                    continue
                mx = k.right(my, s)
                if any(k.column_sign(mx, t) < 0 for t in gens if t < s):
                    continue
                words.append((s,) + words[y])
                inv.append(mx)
                nxt.append(len(words) - 1)
                if len(words) > budget:
                    raise BudgetExceeded(
                        f"ball enumeration exceeded budget of {budget} elements", len(words))
        layer = nxt
        depth += 1
    # exhausted iff the next layer would be empty: every generator is a left descent on top
    exhausted = not layer or all(k.column_sign(inv[y], s) < 0 for y in layer for s in gens)
    return words, inv, exhausted


def ball(sys: CoxeterSystem, radius: int, budget: int | None = None) -> Ball:
    if radius < 0:
        raise ValueError("radius must be >= 0")
    budget = default_budget() if budget is None else budget
    k = kernel(sys)
    gens = tuple(range(sys.rank))
    words, inv, exhausted = _bfs(sys, radius, gens, budget)
    key = {m: i for i, m in enumerate(inv)}
    adjacency = []
    for i, m in enumerate(inv):
        row = []
        for s in gens:
            # (ws)^-1 = s w^-1
            row.append(key.get(k.left(s, m), -1))
        adjacency.append(tuple(row))
    elements = [GroupElement(w) for w in words]
    return Ball(sys, radius, elements, adjacency, exhausted, gens,
                {w: i for i, w in enumerate(words)})


def enumerate_special(sys: CoxeterSystem, subset: Iterable, budget: int | None = None) -> list[GroupElement]:
    """All elements of the finite special subgroup W_T, ShortLex ordered."""
    T = tuple(sorted({sys.index(t) for t in subset}))
    if not is_spherical(sys, T):
        raise ValueError(f"subset {T} is not spherical; W_T is infinite")
    budget = default_budget() if budget is None else budget
    words, _, _ = _bfs(sys, None, T, budget)
    return [GroupElement(w) for w in words]


def enumerate_group(sys: CoxeterSystem, budget: int | None = None) -> list[GroupElement]:
    """All elements of a finite W."""
    return enumerate_special(sys, range(sys.rank), budget)
