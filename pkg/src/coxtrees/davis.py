"""Finite pieces of the Davis complex: spherical cosets, flags and walls.

Walls are handled through reflections.  A reflection ``r = w s w^-1`` is in
bijection with its positive root ``sigma(w)(u_s)`` (sign-normalised), so the
root vector is the hash key for walls everywhere in this module.  The chamber
edge ``{w, ws}`` is crossed by the wall of ``w s w^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .coxeter_core import CoxeterSystem, InvariantViolation, spherical_subsets
from .elements import (
    Ball,
    BudgetExceeded,
    GroupElement,
    Kernel,
    as_word,
    ball as make_ball,
    element,
    kernel,
)
from .exact_real import ExactReal

EQUAL, CROSS, DISJOINT = "Equal", "Cross", "Disjoint"


# ---------------------------------------------------------------------------
# spherical cosets and flags


@dataclass(frozen=True, order=True)
class SphericalCoset:
    """The coset rep * W_T, with rep the minimal-length element."""

    rep: GroupElement
    subset: tuple[int, ...]

    def label(self, sys: CoxeterSystem) -> str:
        gens = ",".join(sys.generators[i] for i in self.subset)
        return f"{self.rep.label(sys)}W<{gens}>"


@dataclass
class FlagComplexBall:
    """Cosets u W_T (T spherical, l(u) <= radius) and all flags among them.

    ``simplices`` holds chains of vertex indices listed from the smallest coset
    to the largest; vertices are the 0-simplices.
    """

    sys: CoxeterSystem
    radius: int
    vertices: list[SphericalCoset]
    simplices: list[tuple[int, ...]]
    exhausted: bool

    def f_vector(self) -> list[int]:
        counts: dict[int, int] = {}
        for simplex in self.simplices:
            counts[len(simplex) - 1] = counts.get(len(simplex) - 1, 0) + 1
        return [counts.get(d, 0) for d in range(max(counts) + 1)] if counts else []

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.f_vector()))

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "exhausted": self.exhausted,
            "vertices": [{"rep": list(v.rep.word), "subset": list(v.subset)} for v in self.vertices],
            "f_vector": self.f_vector(),
            "simplices": [list(s) for s in self.simplices],
        }

    def face_list(self) -> str:
        """Plain-text face list: a header, one vertex label per line, then one face per line."""
        lines = [f"FLAGS {len(self.vertices)} {len(self.simplices)}"]
        lines += [v.label(self.sys) for v in self.vertices]
        lines += [f"{len(s)} " + " ".join(map(str, s)) for s in self.simplices]
        return "\n".join(lines) + "\n"


def _strip(b: Ball, i: int, subset: Iterable[int]) -> int:
    """Index of the minimal coset representative of elements[i] W_T, walking the ball."""
    length = len(b.elements[i].word)
    subset = tuple(subset)
    while True:
        for t in subset:
            j = b.adjacency[i][t]
            if j >= 0 and len(b.elements[j].word) < length:
                i, length = j, length - 1
                break
        else:
            return i


def davis_ball(sys: CoxeterSystem, radius: int, budget: int | None = None) -> FlagComplexBall:
    b = make_ball(sys, radius, budget)
    spherical = spherical_subsets(sys)
    vertices: list[SphericalCoset] = []
    vindex: dict[tuple[int, tuple[int, ...]], int] = {}
    for T in spherical:
        for i, w in enumerate(b.elements):
            if all(not (b.adjacency[i][t] >= 0 and len(b.elements[b.adjacency[i][t]].word) < len(w.word))
                   for t in T):
                vindex[(i, T)] = len(vertices)
                vertices.append(SphericalCoset(w, T))
    budget_left = budget
    # proper supersets of each coset among the vertices
    up: list[list[int]] = [[] for _ in vertices]
    supersets = {T: [U for U in spherical if len(U) > len(T) and set(T) <= set(U)] for T in spherical}
    for (i, T), v in vindex.items():
        for U in supersets[T]:
            j = _strip(b, i, U)
            up[v].append(vindex[(j, U)])
    simplices: list[tuple[int, ...]] = []
    stack = [(v,) for v in range(len(vertices))]
    while stack:
        chain = stack.pop()
        simplices.append(chain)
        if budget_left is not None and len(simplices) > budget_left:
            raise BudgetExceeded("flag enumeration exceeded budget", len(simplices))
        for u in up[chain[-1]]:
            stack.append(chain + (u,))
    simplices.sort(key=lambda c: (len(c), c))
    return FlagComplexBall(sys, radius, vertices, simplices, b.exhausted)


# ---------------------------------------------------------------------------
# walls


@dataclass(frozen=True)
class Wall:
    """Wall of a reflection: the reflection, its positive root and crossed ball edges.

    Walls compare by reflection only.
    """

    reflection: GroupElement
    root: tuple[ExactReal, ...] = field(compare=False)
    crossed_edges: frozenset = field(default=frozenset(), compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "reflection": list(self.reflection.word),
            "root": [str(x.coeffs[0]) if x.is_rational() else [str(c) for c in x.coeffs] for x in self.root],
            "crossed_edges": sorted([list(e) for e in self.crossed_edges]),
        }


def positive(k: Kernel, vec: tuple) -> tuple:
    """Sign-normalise an integral root so that its first nonzero coordinate is positive."""
    for x in vec:
        if x != k.zero:
            return vec if k.sign(x) > 0 else tuple(k.neg(y) for y in vec)
    raise InvariantViolation("zero root")


def column(m, s: int) -> tuple:
    return tuple(row[s] for row in m)


def mat_vec(k: Kernel, m, v: tuple) -> tuple:
    out = []
    for row in m:
        acc = k.zero
        for x, y in zip(row, v):
            if x != k.zero and y != k.zero:
                acc = k.add(acc, k.mul(x, y))
        out.append(acc)
    return tuple(out)


def two_form(k: Kernel, a: tuple, b: tuple):
    """2B(a, b) for integral vectors, as an integral scalar."""
    acc = k.zero
    for i, x in enumerate(a):
        if x == k.zero:
            continue
        inner = k.zero
        for j, y in enumerate(b):
            if y == k.zero:
                continue
            g = k.two_gram_int[i][j]
            if g != k.zero:
                inner = k.add(inner, k.mul(g, y))
        if inner != k.zero:
            acc = k.add(acc, k.mul(x, inner))
    return acc


def relation_of_roots(k: Kernel, a: tuple, b: tuple) -> str:
    """Equal / Cross / Disjoint for the walls of two positive roots.

    Cross iff B(a,b)^2 < B(a,a)B(b,b): the reflections then generate a finite
    dihedral group and the walls meet.  The parabolic equality case is Disjoint.
    """
    if a == b:
        return EQUAL
    ab = two_form(k, a, b)
    lhs = k.mul(ab, ab)
    rhs = k.mul(two_form(k, a, a), two_form(k, b, b))
    return CROSS if k.sign(k.add(lhs, k.neg(rhs))) < 0 else DISJOINT


def _ensure_form(k: Kernel) -> None:
    if not hasattr(k, "two_gram_int"):
        sys = k.sys
        k.two_gram_int = tuple(
            tuple(x.num[0] if k.d == 1 else x.num for x in row) for row in sys.two_gram)


def root_key(sys: CoxeterSystem, w, s) -> tuple:
    """Integral positive root of the reflection w s w^-1 (hashable wall key)."""
    k = kernel(sys)
    return positive(k, column(k.of_word(as_word(sys, w)), sys.index(s)))


def wall_of(sys: CoxeterSystem, w, s) -> Wall:
    """Wall of the reflection w s w^-1."""
    k = kernel(sys)
    word = as_word(sys, w)
    key = positive(k, column(k.of_word(word), sys.index(s)))
    refl = element(sys, word + (sys.index(s),) + tuple(reversed(word)))
    return Wall(refl, tuple(k.to_exact(x) for x in key))


def wall_key(sys: CoxeterSystem, wall: Wall) -> tuple:
    k = kernel(sys)
    out = []
    for x in wall.root:
        if x.den != 1:
            raise InvariantViolation("roots are integral")
        out.append(x.num[0] if k.d == 1 else x.num)
    return tuple(out)


def wall_relation(sys: CoxeterSystem, h1: Wall, h2: Wall) -> str:
    k = kernel(sys)
    _ensure_form(k)
    if h1.reflection == h2.reflection:
        return EQUAL
    return relation_of_roots(k, wall_key(sys, h1), wall_key(sys, h2))


@dataclass
class WallInventory:
    """Walls met by a ball: every w s w^-1 with w in the ball.

    ``edge_wall[i][s]`` is the wall index of the chamber edge
    {elements[i], elements[i] s}, whether or not the far chamber is in the ball.
    """

    sys: CoxeterSystem
    ball: Ball
    walls: list[Wall]
    keys: list[tuple]
    edge_wall: list[tuple[int, ...]]
    index: dict = field(repr=False, default_factory=dict)
    matrices: list = field(repr=False, default_factory=list)

    def __len__(self):
        return len(self.walls)

    def find(self, key: tuple) -> int | None:
        return self.index.get(key)


def wall_inventory(sys: CoxeterSystem, radius: int | None = None, ball: Ball | None = None,
                   budget: int | None = None) -> WallInventory:
    if ball is None:
        if radius is None:
            raise ValueError("need a radius or a ball")
        ball = make_ball(sys, radius, budget)
    k = kernel(sys)
    _ensure_form(k)
    # sigma(w) for every chamber, built along the ShortLex prefix tree
    matrices = [None] * len(ball)
    matrices[0] = k.identity
    for i, w in enumerate(ball.elements[1:], start=1):
        parent = ball.index(w.word[:-1])
        matrices[i] = k.right(matrices[parent], w.word[-1])
    keys: list[tuple] = []
    index: dict[tuple, int] = {}
    conj: list[tuple[int, int]] = []
    edge_wall = []
    for i, m in enumerate(matrices):
        row = []
        for s in range(sys.rank):
            key = positive(k, column(m, s))
            j = index.get(key)
            if j is None:
                j = index[key] = len(keys)
                keys.append(key)
                conj.append((i, s))
            row.append(j)
        edge_wall.append(tuple(row))
    crossed: list[set] = [set() for _ in keys]
    for i, row in enumerate(ball.adjacency):
        for s, j in enumerate(row):
            if j > i:
                crossed[edge_wall[i][s]].add((i, j))
    walls = []
    for j, key in enumerate(keys):
        i, s = conj[j]
        word = ball.elements[i].word
        refl = element(sys, word + (s,) + tuple(reversed(word)))
        walls.append(Wall(refl, tuple(k.to_exact(x) for x in key), frozenset(crossed[j])))
    return WallInventory(sys, ball, walls, keys, edge_wall, index, matrices)


def reflections_in_ball(sys: CoxeterSystem, radius: int, budget: int | None = None) -> list[Wall]:
    """All walls of reflections w s w^-1 with l(w) <= radius, deduplicated."""
    return wall_inventory(sys, radius, budget=budget).walls


def separating_walls(sys: CoxeterSystem, w) -> list[Wall]:
    """Walls crossed by the gallery from e to w along its normal form, in order."""
    k = kernel(sys)
    word = element(sys, as_word(sys, w)).word
    out = []
    m = k.identity
    for i, s in enumerate(word):
        key = positive(k, column(m, s))
        prefix = word[:i]
        refl = element(sys, prefix + (s,) + tuple(reversed(prefix)))
        out.append(Wall(refl, tuple(k.to_exact(x) for x in key)))
        m = k.right(m, s)
    return out


def separating_keys(sys: CoxeterSystem, word) -> list[tuple]:
    """Root keys of the walls crossed along a reduced word (no normal forms computed)."""
    k = kernel(sys)
    out = []
    m = k.identity
    for s in as_word(sys, word):
        out.append(positive(k, column(m, s)))
        m = k.right(m, s)
    return out


def separates(sys: CoxeterSystem, key: tuple, w) -> bool:
    """Does the wall with positive root ``key`` separate e from w?  (w^-1 key < 0.)"""
    k = kernel(sys)
    minv = k.inverse_of_word(as_word(sys, w))
    v = mat_vec(k, minv, key)
    for x in v:
        if x != k.zero:
            return k.sign(x) < 0
    raise InvariantViolation("zero root image")
