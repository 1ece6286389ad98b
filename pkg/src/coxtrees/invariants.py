"""Invariant checks shared by the ``verify`` command and the acceptance tests.

Each check returns a :class:`CheckReport` with pass/fail counts; none of them
print or time anything, so reports are reproducible byte for byte.
"""

from __future__ import annotations

import itertools
import random

import networkx as nx

from .coxeter_core import (
    CoxeterSystem,
    InvariantViolation,
    classify,
    identity,
    mat_mul,
    table_name,
    transpose,
)
from .davis import wall_inventory
from .elements import ball as make_ball, kernel
from .exact_real import INF
from .wall_trees import CheckReport


def representation_soundness(sys: CoxeterSystem) -> CheckReport:
    """sigma_s^2 = 1, sigma_s^T B sigma_s = B and (sigma_s sigma_t)^m = 1, all exactly."""
    one = identity(sys.field, sys.rank)
    checked = failures = 0
    witness = None
    for s, sig in enumerate(sys.sigma):
        for name, ok in (("involution", mat_mul(sig, sig) == one),
                         ("form", mat_mul(transpose(sig), mat_mul(sys.gram, sig)) == sys.gram)):
            checked += 1
            if not ok:
                failures += 1
                witness = witness or {"generator": sys.generators[s], "relation": name}
    for s, t in itertools.combinations(range(sys.rank), 2):
        m = sys.m(s, t)
        if m == INF:
            continue
        prod = mat_mul(sys.sigma[s], sys.sigma[t])
        acc = one
        for _ in range(int(m)):
            acc = mat_mul(acc, prod)
        checked += 1
        if acc != one:
            failures += 1
            witness = witness or {"pair": [sys.generators[s], sys.generators[t]], "relation": "braid"}
    return CheckReport("representation", failures == 0, checked, failures, witness=witness)


# ---------------------------------------------------------------------------
# combinatorial word problem (braid moves), independent of the representation


def _braid_moves(sys: CoxeterSystem) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    moves = []
    for s in range(sys.rank):
        for t in range(sys.rank):
            m = sys.m(s, t)
            if s != t and m != INF:
                m = int(m)
                moves.append((tuple((s, t)[i % 2] for i in range(m)),
                              tuple((t, s)[i % 2] for i in range(m))))
    return moves


def braid_closure(sys: CoxeterSystem, word, limit: int = 200_000, stop_on_square: bool = False):
    """All words reachable from ``word`` by braid moves.

    Returns ``(words, has_square)``.  A word is reduced iff no word of its
    closure has two equal adjacent letters; for a reduced word the closure is
    the set of all its reduced expressions.
    """
    moves = _braid_moves(sys)
    start = tuple(word)
    seen = {start}
    frontier = [start]
    square = any(a == b for a, b in zip(start, start[1:]))
    while frontier and not (square and stop_on_square):
        nxt = []
        for w in frontier:
            for pat, rep in moves:
                m = len(pat)
                for i in range(len(w) - m + 1):
                    if w[i:i + m] == pat:
                        v = w[:i] + rep + w[i + m:]
                        if v not in seen:
                            seen.add(v)
                            nxt.append(v)
                            if any(v[j] == v[j + 1] for j in range(max(0, i - 1), min(len(v) - 1, i + m))):
                                square = True
                            if len(seen) > limit:
                                raise InvariantViolation(f"braid closure of {start} exceeds {limit} words")
        frontier = nxt
    return seen, square


def faithfulness(sys: CoxeterSystem, radius: int, budget: int | None = None) -> CheckReport:
    """Distinct ShortLex normal forms have distinct matrices, and the ball is complete.

    For every element u of the ball: u is reduced and the least word in its
    braid closure (so distinct u are distinct elements of W), each u s is
    either non-reduced or has its least reduced expression in the ball, and
    the integral Tits matrices of the ball are pairwise distinct.
    """
    b = make_ball(sys, radius, budget)
    k = kernel(sys)
    index = {w.word: i for i, w in enumerate(b.elements)}
    mats = {}
    checked = failures = 0
    witness = None
    for i, w in enumerate(b.elements):
        checked += 1
        closure, square = braid_closure(sys, w.word)
        problems = []
        if square:
            problems.append("not reduced")
        if min(closure) != w.word:
            problems.append("not ShortLex-least")
        m = k.of_word(w.word)
        if m in mats:
            problems.append(f"same matrix as {list(b.elements[mats[m]].word)}")
        mats[m] = i
        if len(w.word) < radius or b.exhausted:
            for s in range(sys.rank):
                ext, sq = braid_closure(sys, w.word + (s,), stop_on_square=True)
                if not sq and min(ext) not in index:
                    problems.append(f"reduced extension by {sys.generators[s]} missing from ball")
        if problems:
            failures += 1
            witness = witness or {"element": list(w.word), "problems": problems}
    return CheckReport("faithfulness", failures == 0, checked, failures,
                       details={"radius": radius, "ball": len(b), "exhausted": b.exhausted},
                       witness=witness)


def wall_length_identity(sys: CoxeterSystem, radius: int, budget: int | None = None,
                         sample: int = 200, seed: int = 0) -> CheckReport:
    """|walls separating e and w| = l(w), with the walls along the normal form pairwise distinct.

    For a seeded sample of chambers the crossed walls are also compared with
    the half-space test over the whole inventory.
    """
    inv = wall_inventory(sys, radius, budget=budget)
    b = inv.ball
    k = kernel(sys)
    crossed: list[frozenset] = [frozenset()]
    checked = failures = 0
    witness = None
    for i, w in enumerate(b.elements[1:], start=1):
        s = w.word[-1]
        parent = b.adjacency[i][s]
        wall = inv.edge_wall[parent][s]
        walls = crossed[parent] | {wall}
        crossed.append(walls)
        checked += 1
        if wall in crossed[parent] or len(walls) != len(w.word):
            failures += 1
            witness = witness or {"element": list(w.word), "walls": len(walls)}
    rng = random.Random(seed)
    picks = sorted(rng.sample(range(len(b)), min(sample, len(b))))
    for i in picks:
        w = b.elements[i]
        minv = k.inverse_of_word(w.word)
        sep = set()
        for j, key in enumerate(inv.keys):
            for row in minv:
                x = sum_row(k, row, key)
                if x != k.zero:
                    if k.sign(x) < 0:
                        sep.add(j)
                    break
        checked += 1
        if sep != set(crossed[i]):
            failures += 1
            witness = witness or {"element": list(w.word), "half_space": len(sep), "path": len(crossed[i])}
    return CheckReport("wall_length", failures == 0, checked, failures,
                       details={"radius": radius, "ball": len(b), "walls": len(inv),
                                "half_space_sample": len(picks)},
                       witness=witness)


def sum_row(k, row, vec):
    acc = k.zero
    for x, y in zip(row, vec):
        if x != k.zero and y != k.zero:
            acc = k.add(acc, k.mul(x, y))
    return acc


def connected_subsets(sys: CoxeterSystem, max_rank: int = 6) -> list[tuple[int, ...]]:
    """Subsets of S of size <= max_rank inducing a connected subdiagram."""
    g = sys.diagram
    out = []
    for size in range(1, min(max_rank, sys.rank) + 1):
        for sub in itertools.combinations(range(sys.rank), size):
            if nx.is_connected(g.subgraph(sub)):
                out.append(sub)
    return out


def classification_agreement(sys: CoxeterSystem, max_rank: int = 6) -> CheckReport:
    """Table lookup and Gram inertia agree on every connected subset (a mismatch raises inside classify)."""
    checked = tabulated = failures = 0
    witness = None
    kinds: dict[str, int] = {}
    for sub in connected_subsets(sys, max_rank):
        checked += 1
        try:
            verdict = classify(sys, sub)
        except InvariantViolation as exc:
            failures += 1
            witness = witness or {"subset": [sys.generators[i] for i in sub], "error": str(exc)}
            continue
        kinds[verdict.kind] = kinds.get(verdict.kind, 0) + 1
        if len(sub) == 1 or table_name(sys, sub) is not None:
            tabulated += 1
    return CheckReport("classification", failures == 0, checked, failures,
                       details={"tabulated": tabulated, "kinds": dict(sorted(kinds.items()))},
                       witness=witness)
