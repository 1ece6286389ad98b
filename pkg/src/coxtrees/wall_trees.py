"""Trees from orbits of walls under a torsion-free finite-index subgroup.

``W0`` is the congruence kernel of the Tits representation reduced modulo an
odd prime ``p``: the matrices of ``sigma(W)`` have entries in ``Z[theta]``, and
``w`` lies in ``W0`` iff ``sigma(w) = 1`` in ``M_n(Z[theta]/p)``.  The finite
image is enumerated by breadth-first search, which also yields Schreier
generators of the kernel.

For a family of walls closed under ``W0`` the complement of the walls in the
Davis complex has a tree of components.  At ball scale we work with the
chamber graph of a ball: delete the edges crossed by the walls of one orbit,
take connected components with a union-find, and join two components by an
edge for every orbit wall between them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .coxeter_core import CoxeterSystem, spherical_subsets
from .davis import (
    CROSS,
    DISJOINT,
    EQUAL,
    WallInventory,
    _ensure_form,
    column,
    mat_vec,
    positive,
    relation_of_roots,
    wall_inventory,
)
from .elements import (
    Ball,
    BudgetExceeded,
    GroupElement,
    Kernel,
    as_word,
    default_budget,
    element,
    enumerate_special,
    kernel,
)

DEFAULT_PRIMES = (3, 5, 7, 11)
DEFAULT_IMAGE_BUDGET = 250_000


class TreeViolation(AssertionError):
    """A constructed quotient failed to be a tree where the theory says it must be."""


# ---------------------------------------------------------------------------
# reduction modulo p


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _poly_mod(a: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = list(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for j, x in enumerate(b):
            a[shift + j] = (a[shift + j] - c * x) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def divides_discriminant(min_poly: Sequence[int], p: int) -> bool:
    """True iff p divides disc(f), i.e. f mod p has a repeated factor (f monic)."""
    f = _poly_mod(list(min_poly), p)
    df = _poly_mod([i * c for i, c in enumerate(min_poly)][1:], p)
    if len(f) <= 2:
        return False
    if not df:
        return True
    a, b = f, df
    while b:
        a, b = b, _poly_rem(a, b, p)
    return len(a) > 1


class ModKernel(Kernel):
    """The same matrix kernel with all coefficients reduced modulo p."""

    def __init__(self, base: Kernel, p: int):
        self.__dict__.update(base.__dict__)
        self.p = p
        self.coupling = [tuple((t, self.red(c)) for t, c in row) for row in base.coupling]
        self.identity = tuple(tuple(self.red(x) for x in row) for row in base.identity)

    def red(self, a):
        if self.d == 1:
            return a % self.p
        return tuple(x % self.p for x in a)

    def add(self, a, b):
        if self.d == 1:
            return (a + b) % self.p
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def neg(self, a):
        if self.d == 1:
            return -a % self.p
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        return self.red(Kernel.mul(self, a, b))

    def reduce_matrix(self, m):
        return tuple(tuple(self.red(x) for x in row) for row in m)


# ---------------------------------------------------------------------------


@dataclass
class CongruenceSubgroup:
    """Kernel W0 of W -> GL_n(Z[theta]/p), given by the finite image and Schreier data."""

    sys: CoxeterSystem
    prime: int
    image_order: int | None  # None when the image was too large to enumerate
    coset_words: list[tuple[int, ...]] = field(repr=False)
    schreier_pairs: list[tuple[int, int]] = field(repr=False)
    torsion_report: dict = field(default_factory=dict)
    _mod: ModKernel = field(repr=False, default=None)
    _targets: dict = field(repr=False, default_factory=dict)
    _parents: list = field(repr=False, default_factory=list)
    _cache: dict = field(repr=False, default_factory=dict)

    @property
    def index(self) -> int | None:
        return self.image_order

    @property
    def enumerated(self) -> bool:
        return self.image_order is not None

    def reduce(self, w):
        """Image of w in the finite quotient, as a reduced matrix."""
        return self._mod.of_word(as_word(self.sys, w))

    def contains(self, w) -> bool:
        return self.reduce(w) == self._mod.identity

    def schreier_word(self, i: int) -> tuple[int, ...]:
        """Unreduced Schreier generator u_g s u_{gs}^-1 for the i-th non-tree edge."""
        g, s = self.schreier_pairs[i]
        h = self._targets[(g, s)]
        return self.coset_words[g] + (s,) + tuple(reversed(self.coset_words[h]))

    def _coset_matrix(self, g: int):
        """Integral matrix of the transversal word u_g, memoised along the BFS tree."""
        memo = self._cache.setdefault("coset_matrix", {0: kernel(self.sys).identity})
        chain = []
        while g not in memo:
            chain.append(g)
            g = self._parents[g][0]
        k = kernel(self.sys)
        for x in reversed(chain):
            parent, s = self._parents[x]
            memo[x] = k.right(memo[parent], s)
        return memo[chain[0]] if chain else memo[g]

    def schreier_generators(self, limit: int | None = None) -> list[GroupElement]:
        """Distinct nontrivial Schreier generators in normal form, shortest raw words first.

        Most short Schreier words are relations of W (u_g s = u_h already in W);
        those are discarded by comparing integral matrices.
        """
        if not self.enumerated:
            return []
        key = ("schreier", limit)
        if key in self._cache:
            return self._cache[key]
        k = kernel(self.sys)
        order = sorted(range(len(self.schreier_pairs)),
                       key=lambda i: (len(self.coset_words[self.schreier_pairs[i][0]])
                                      + len(self.coset_words[self._targets[self.schreier_pairs[i]]]), i))
        seen, out = set(), []
        for i in order:
            if limit is not None and len(out) >= limit:
                break
            g, s = self.schreier_pairs[i]
            if k.right(self._coset_matrix(g), s) == self._coset_matrix(self._targets[(g, s)]):
                continue
            w = element(self.sys, self.schreier_word(i))
            if w not in seen:
                seen.add(w)
                out.append(w)
        self._cache[key] = out
        return out

    def power_elements(self, candidates: Iterable[GroupElement], limit: int = 16,
                       max_order: int = 1000) -> list[tuple[int, ...]]:
        """Words w^k with k the order of w mod p, skipping those trivial in W.

        These lie in W0 whatever the size of the image, so they serve
        membership-only subgroups too.
        """
        mk, k = self._mod, kernel(self.sys)
        out, seen = [], set()
        for w in candidates:
            if len(out) >= limit:
                break
            if not w.word:
                continue
            step = mk.of_word(w.word)
            m, order = step, 1
            while m != mk.identity and order <= max_order:
                m = _mod_matmul(mk, m, step)
                order += 1
            if m != mk.identity:
                continue
            word = w.word * order
            full = k.of_word(word)
            if full == k.identity or full in seen:
                continue
            seen.add(full)
            out.append(word)
        return out

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "image_order": self.image_order,
            "image_enumerated": self.enumerated,
            "schreier_edges": len(self.schreier_pairs),
            "torsion_check": self.torsion_report,
        }


def _mod_matmul(mk: ModKernel, a, b):
    cols = list(zip(*b))
    return tuple(
        tuple(_dot(mk, row, col) for col in cols) for row in a)


def _dot(k: Kernel, row, col):
    acc = k.zero
    for x, y in zip(row, col):
        if x != k.zero and y != k.zero:
            acc = k.add(acc, k.mul(x, y))
    return acc


def _check_prime(sys: CoxeterSystem, p: int) -> None:
    if p % 2 == 0 or p < 3 or not _is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if divides_discriminant(sys.field.min_poly, p):
        raise ValueError(f"p={p} divides the discriminant of the minimal polynomial "
                         f"of 2cos(pi/{sys.field.level})")


class _CodedRing:
    """Z[theta]/p with elements coded as integers sum a_i p^i and full add/mul tables."""

    LIMIT = 729

    def __init__(self, mk: ModKernel):
        p, d = mk.p, mk.d
        self.size = size = p ** d
        if d == 1:
            elems = list(range(p))
        else:
            elems = [tuple((c // p ** i) % p for i in range(d)) for c in range(size)]
        self.code = {e: i for i, e in enumerate(elems)}
        self.add = [[self.code[mk.add(a, b)] for b in elems] for a in elems]
        self.mul = [[self.code[mk.mul(a, b)] for b in elems] for a in elems]
        self.neg = [self.code[mk.neg(a)] for a in elems]

    def encode(self, m) -> tuple[int, ...]:
        return tuple(self.code[x] for row in m for x in row)


def _image_bfs(sys: CoxeterSystem, mk: ModKernel, budget: int):
    """Breadth-first search of the image; returns words, BFS parents, targets and Schreier pairs."""
    n = sys.rank
    if mk.p ** mk.d <= _CodedRing.LIMIT:
        ring = _CodedRing(mk)
        add, neg = ring.add, ring.neg
        couplings = [[(t, ring.mul[ring.code[c]]) for t, c in mk.coupling[s]] for s in range(n)]

        def right(m, s):
            new = list(m)
            for r in range(0, n * n, n):
                x = m[r + s]
                if x:
                    new[r + s] = neg[x]
                    for t, row in couplings[s]:
                        new[r + t] = add[new[r + t]][row[x]]
            return tuple(new)

        start = ring.encode(mk.identity)
    else:
        right, start = mk.right, mk.identity
    index = {start: 0}
    mats = [start]
    words: list[tuple[int, ...]] = [()]
    parents: list[tuple[int, int]] = [(0, -1)]
    targets: dict[tuple[int, int], int] = {}
    schreier: list[tuple[int, int]] = []
    i = 0
    while i < len(mats):
        m = mats[i]
        for s in range(n):
            ms = right(m, s)
            j = index.get(ms)
            if j is None:
                j = index[ms] = len(mats)
                mats.append(ms)
                words.append(words[i] + (s,))
                parents.append((i, s))
                if len(mats) > budget:
                    raise BudgetExceeded(
                        f"image of W mod {mk.p} exceeds budget of {budget} elements; "
                        "try a larger prime or a smaller system", len(mats))
            targets[(i, s)] = j
            if parents[j] != (i, s):
                schreier.append((i, s))
        i += 1
    return words, parents, targets, schreier


def congruence_subgroup(sys: CoxeterSystem, p: int, budget: int | None = None) -> CongruenceSubgroup:
    """Enumerate the image of W mod p by breadth-first search; at most ``budget`` matrices."""
    _check_prime(sys, p)
    budget = DEFAULT_IMAGE_BUDGET if budget is None else budget
    mk = ModKernel(kernel(sys), p)
    words, parents, targets, schreier = _image_bfs(sys, mk, budget)
    sub = CongruenceSubgroup(sys, p, len(words), words, schreier, _mod=mk,
                             _targets=targets, _parents=parents)
    sub.torsion_report = torsion_check(sub)
    return sub


def membership_subgroup(sys: CoxeterSystem, p: int) -> CongruenceSubgroup:
    """The same kernel without enumerating the image: membership test only, index unknown."""
    _check_prime(sys, p)
    sub = CongruenceSubgroup(sys, p, None, [()], [], _mod=ModKernel(kernel(sys), p))
    sub.torsion_report = torsion_check(sub)
    return sub


def default_subgroup(sys: CoxeterSystem, primes: Iterable[int] = DEFAULT_PRIMES,
                     budget: int | None = None) -> CongruenceSubgroup:
    """First prime of the ladder that passes the discriminant and budget checks."""
    last = None
    for p in primes:
        try:
            return congruence_subgroup(sys, p, budget)
        except (ValueError, BudgetExceeded) as exc:
            last = exc
    raise last


def torsion_check(sub: CongruenceSubgroup) -> dict:
    """No nontrivial element of a finite special subgroup may lie in W0.

    Finite-order elements of W are conjugate into finite special subgroups and
    W0 is normal, so this covers every conjugate as well.
    """
    checked = bad = 0
    witnesses = []
    for T in spherical_subsets(sub.sys):
        if not T:
            continue
        for w in enumerate_special(sub.sys, T):
            if not w.word:
                continue
            checked += 1
            if sub.contains(w):
                bad += 1
                witnesses.append(list(w.word))
    return {"checked": checked, "in_kernel": bad, "witnesses": witnesses[:5],
            "passed": bad == 0}


# ---------------------------------------------------------------------------
# orbits of walls


@dataclass
class WallOrbit:
    id: int
    walls: tuple[int, ...]  # indices into the inventory, sorted
    key: tuple = field(repr=False, default=())  # image of the reflection mod p
    truncated: int = 0

    def __len__(self):
        return len(self.walls)


def reflection_image(sub: CongruenceSubgroup, root: tuple):
    """The reflection in ``root`` reduced mod p: v -> v - 2B(v, a) a."""
    mk = sub._mod
    k = kernel(sub.sys)
    _ensure_form(k)
    n = sub.sys.rank
    a = tuple(mk.red(x) for x in root)
    g = tuple(tuple(mk.red(x) for x in row) for row in k.two_gram_int)
    # (a^T 2B)_j
    w = []
    for j in range(n):
        acc = mk.zero
        for i in range(n):
            if a[i] != mk.zero and g[i][j] != mk.zero:
                acc = mk.add(acc, mk.mul(a[i], g[i][j]))
        w.append(acc)
    return tuple(
        tuple(mk.add(mk.identity[i][j], mk.neg(mk.mul(a[i], w[j]))) for j in range(n))
        for i in range(n))


def conjugators(sub: CongruenceSubgroup, inventory: WallInventory, limit: int = 64,
                schreier_limit: int = 16, power_limit: int = 16) -> list[tuple[int, ...]]:
    """Words of nontrivial W0 elements used to move walls.

    Sources, in order: W0 inside the ball, the shortest Schreier generators,
    powers w^k of ball elements with k the order of w mod p, and products
    r_a r_b of two reflections of the inventory with the same image mod p
    (such a product reduces to the identity).  The last two sources need no
    enumeration of the image, so they also serve membership-only subgroups.
    """
    out: list[tuple[int, ...]] = [w.word for w in inventory.ball.elements[1:] if sub.contains(w)]
    out += [g.word for g in sub.schreier_generators(schreier_limit)]
    out += sub.power_elements(inventory.ball.elements[1:], power_limit)
    first: dict = {}
    pairs = []
    for j, key in enumerate(inventory.keys):
        img = reflection_image(sub, key)
        i = first.setdefault(img, j)
        if i != j:
            pairs.append(inventory.walls[i].reflection.word + inventory.walls[j].reflection.word)
    pairs.sort(key=lambda w: (len(w), w))
    out += pairs[:limit]
    seen, uniq = set(), []
    for w in out:
        if w not in seen:
            seen.add(w)
            uniq.append(w)
    return uniq


class _UnionFind:
    def __init__(self, items: Iterable[int] = ()):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        parent = self.parent
        root = parent.setdefault(x, x)
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        self.parent[max(a, b)] = min(a, b)
        return True


class _Fingerprint:
    """Ring map Z[theta] -> F_q, theta -> a root of its minimal polynomial mod q.

    q = 1 mod 2L splits the cyclotomic field, so zeta + 1/zeta for a primitive
    2L-th root of unity zeta mod q is such a root.  q < 2^26 keeps rank-many
    products of residues inside int64.
    """

    def __init__(self, k: Kernel):
        level = k.ctx.level
        step = 2 * level
        q = (1 << 26) // step * step + 1
        while True:
            q -= step
            if _is_prime(q):
                break
        self.q = q
        f = k.f
        self.degree = k.d
        factors = [d for d in range(2, step + 1) if step % d == 0 and _is_prime(d)]
        for a in range(2, q):
            zeta = pow(a, (q - 1) // step, q)
            if all(pow(zeta, step // d, q) != 1 for d in factors):
                break
        root = (zeta + pow(zeta, -1, q)) % q if k.d > 1 else 0
        assert sum(c * pow(root, i, q) for i, c in enumerate(f)) % q == 0 or k.d == 1
        self.powers = [pow(root, i, q) for i in range(max(1, k.d))]

    def scalar(self, a) -> int:
        if self.degree == 1:
            return a % self.q
        return sum(c * p for c, p in zip(a, self.powers)) % self.q

    def vectors(self, vecs: Sequence[tuple]) -> np.ndarray:
        return np.array([[self.scalar(x) for x in v] for v in vecs], dtype=np.int64).T

    def matrix(self, m) -> np.ndarray:
        return np.array([[self.scalar(x) for x in row] for row in m], dtype=np.int64)


def wall_orbits(sub: CongruenceSubgroup, inventory: WallInventory,
                conj: Sequence[Sequence[int]] | None = None) -> list[WallOrbit]:
    """Classes of the inventory under conjugation by W0 elements, closed within the inventory.

    Images are screened by fingerprint and confirmed exactly.  Images that
    leave the inventory are counted in ``truncated`` on every orbit.
    """
    sys = sub.sys
    k = kernel(sys)
    if conj is None:
        conj = conjugators(sub, inventory)
    keys = inventory.keys
    uf = _UnionFind(range(len(keys)))
    missed = 0
    if keys and conj:
        fp = _Fingerprint(k)
        q = fp.q
        cols = fp.vectors(keys)
        lookup = {}
        for j, col in enumerate(cols.T):
            lookup[tuple(col.tolist())] = j
            lookup[tuple(((q - col) % q).tolist())] = j
        for g in conj:
            for word in (g, tuple(reversed(g))):
                m = k.of_word(word)
                images = (fp.matrix(m) @ cols) % q
                for j, col in enumerate(images.T):
                    t = lookup.get(tuple(col.tolist()))
                    if t is None or inventory.find(positive(k, mat_vec(k, m, keys[j]))) != t:
                        missed += 1
                        continue
                    uf.union(j, t)
    classes: dict[int, list[int]] = {}
    for j in range(len(keys)):
        classes.setdefault(uf.find(j), []).append(j)
    return [WallOrbit(i, tuple(members), reflection_image(sub, keys[members[0]]), missed)
            for i, members in enumerate(sorted(classes.values()))]


# ---------------------------------------------------------------------------
# tree quotients


@dataclass
class TreeQuotient:
    """Components of the ball's chamber graph minus one orbit's walls, joined by those walls.

    Vertices are numbered by their smallest chamber; ``edges`` lists
    ``(wall index, vertex a, vertex b)`` with a < b.
    """

    orbit: WallOrbit
    n_vertices: int
    edges: list[tuple[int, int, int]]
    interior: list[bool]
    boundary_cycles: int
    _vertex: object = field(repr=False)  # list of vertices per chamber, or a callable
    inventory: WallInventory | None = field(repr=False, default=None)
    _adj: list = field(repr=False, default=None)

    def vertex_of(self, chamber: int) -> int:
        v = self._vertex
        return v[chamber] if isinstance(v, list) else v(chamber)

    @property
    def component(self) -> list[int]:
        """Vertex of every chamber (materialised on demand)."""
        if not isinstance(self._vertex, list):
            n = len(self.inventory.ball)
            self._vertex = [self._vertex(i) for i in range(n)]
        return self._vertex

    def neighbours(self, v: int) -> list[int]:
        if self._adj is None:
            adj = [[] for _ in range(self.n_vertices)]
            for _, a, b in self.edges:
                adj[a].append(b)
                adj[b].append(a)
            self._adj = adj
        return self._adj[v]

    def distances_from(self, v: int) -> list[int]:
        dist = [-1] * self.n_vertices
        dist[v] = 0
        frontier = [v]
        while frontier:
            nxt = []
            for x in frontier:
                for y in self.neighbours(x):
                    if dist[y] < 0:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        return dist

    def is_acyclic(self) -> bool:
        uf = _UnionFind(range(self.n_vertices))
        return all(uf.union(a, b) for _, a, b in self.edges)

    def to_json(self, inventory: WallInventory | None = None) -> dict:
        out = {
            "orbit": self.orbit.id,
            "vertices": self.n_vertices,
            "interior": [v for v in range(self.n_vertices) if self.interior[v]],
            "edges": [[a, b] for _, a, b in self.edges],
            "boundary_cycles": self.boundary_cycles,
        }
        if inventory is not None:
            sys = inventory.sys
            out["edge_labels"] = [inventory.walls[w].reflection.label(sys) for w, _, _ in self.edges]
        return out

    def to_dot(self, inventory: WallInventory | None = None) -> str:
        lines = [f"graph orbit{self.orbit.id} {{"]
        for v in range(self.n_vertices):
            shape = "circle" if self.interior[v] else "box"
            lines.append(f"  v{v} [shape={shape}];")
        for w, a, b in self.edges:
            label = str(w)
            if inventory is not None:
                label = inventory.walls[w].reflection.label(inventory.sys)
            lines.append(f'  v{a} -- v{b} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _finish_tree(orbit: WallOrbit, inventory: WallInventory, vertex_of, n_vertices: int,
                 interior: list[bool], vertex_list=None) -> TreeQuotient:
    """Add one edge per (orbit wall, pair of components) and check the interior for cycles."""
    pairs = set()
    for w in orbit.walls:
        for i, j in inventory.walls[w].crossed_edges:
            a, b = vertex_of(i), vertex_of(j)
            if a == b:
                raise TreeViolation(
                    f"wall {inventory.walls[w].reflection} does not separate chambers {i} and {j}")
            pairs.add((w, min(a, b), max(a, b)))
    edges = sorted(pairs)
    uf = _UnionFind(range(n_vertices))
    inner = _UnionFind(range(n_vertices))
    boundary_cycles = 0
    for w, a, b in edges:
        if interior[a] and interior[b] and not inner.union(a, b):
            raise TreeViolation(f"cycle among interior components through wall {w}")
        if not uf.union(a, b):
            boundary_cycles += 1
    return TreeQuotient(orbit, n_vertices, edges, interior, boundary_cycles,
                        vertex_list if vertex_list is not None else vertex_of, inventory)


def build_tree(orbit: WallOrbit, inventory: WallInventory) -> TreeQuotient:
    """Direct construction: union-find over all chambers along edges not crossed by orbit walls."""
    ball = inventory.ball
    members = set(orbit.walls)
    uf = _UnionFind(range(len(ball)))
    for i, row in enumerate(ball.adjacency):
        for s, j in enumerate(row):
            if j > i and inventory.edge_wall[i][s] not in members:
                uf.union(i, j)
    number: dict[int, int] = {}
    component = []
    for i in range(len(ball)):
        component.append(number.setdefault(uf.find(i), len(number)))
    interior = [True] * len(number)
    for i, row in enumerate(ball.adjacency):
        for s, j in enumerate(row):
            if j < 0 and inventory.edge_wall[i][s] not in members:
                interior[component[i]] = False
    return _finish_tree(orbit, inventory, component.__getitem__, len(number), interior, component)


class _Pieces:
    """Per chamber, the deepest ShortLex-prefix edge of each orbit on its path from e.

    Cutting the prefix tree at the edges of one orbit leaves subtrees
    ("pieces") rooted at e and at the lower ends of those edges; chamber i
    lies in piece ``pieces[i].get(orbit, 0)``.  Components of a tree are
    unions of pieces, merged by the remaining chamber edges.
    """

    def __init__(self, inventory: WallInventory, orbit_of_wall: list[int]):
        ball = inventory.ball
        self.maps: list[dict[int, int]] = [{}]
        for i, w in enumerate(ball.elements[1:], start=1):
            s = w.word[-1]
            parent = ball.adjacency[i][s]
            d = dict(self.maps[parent])
            d[orbit_of_wall[inventory.edge_wall[i][s]]] = i
            self.maps.append(d)


def build_trees(orbits: list[WallOrbit], inventory: WallInventory) -> tuple[list[TreeQuotient], _Pieces]:
    """All trees of a partition of the inventory at once, sharing the prefix-tree pieces."""
    ball = inventory.ball
    orbit_of_wall = [0] * len(inventory)
    for o in orbits:
        for w in o.walls:
            orbit_of_wall[w] = o.id
    pieces = _Pieces(inventory, orbit_of_wall)
    maps = pieces.maps
    ufs = [_UnionFind([0]) for _ in orbits]
    for i, d in enumerate(maps):
        for o, root in d.items():
            ufs[o].find(root)
    for i, row in enumerate(ball.adjacency):
        di = maps[i]
        for s, j in enumerate(row):
            if j <= i:
                continue
            dj = maps[j]
            own = orbit_of_wall[inventory.edge_wall[i][s]]
            for o in di.keys() | dj.keys():
                if o != own:
                    a, b = di.get(o, 0), dj.get(o, 0)
                    if a != b:
                        ufs[o].union(a, b)
    # interior: components with no chamber edge leaving the ball except through orbit walls
    blocked: list[set] = [set() for _ in orbits]
    root_hits = [0] * len(orbits)
    boundary = 0
    for i, row in enumerate(ball.adjacency):
        missing = {orbit_of_wall[inventory.edge_wall[i][s]] for s, j in enumerate(row) if j < 0}
        if not missing:
            continue
        boundary += 1
        d = maps[i]
        for o, root in d.items():
            root_hits[o] += 1  # i does not sit in the root piece of o (unless merged)
            if missing != {o}:
                blocked[o].add(ufs[o].find(root))
        if len(missing) == 1:
            (o,) = missing
            if o not in d:
                root_hits[o] += 1
    trees = []
    for o in orbits:
        uf = ufs[o.id]
        if boundary - root_hits[o.id] > 0:
            blocked[o.id].add(uf.find(0))
        reps = sorted({uf.find(x) for x in uf.parent})
        # components are numbered by their smallest chamber, which is the smallest piece root
        mins: dict[int, int] = {}
        for x in uf.parent:
            r = uf.find(x)
            mins[r] = min(mins.get(r, x), x)
        order = sorted(reps, key=mins.__getitem__)
        number = {r: n for n, r in enumerate(order)}
        interior = [r not in blocked[o.id] for r in order]

        def vertex_of(i, d=maps, oid=o.id, uf=uf, number=number):
            return number[uf.find(d[i].get(oid, 0))]

        trees.append(_finish_tree(o, inventory, vertex_of, len(order), interior))
    return trees, pieces


@dataclass
class ProductProjection:
    """F = (p_1, ..., p_k): each chamber of the ball mapped to its vertex in every tree."""

    trees: list[TreeQuotient]
    inventory: WallInventory
    pieces: _Pieces | None = field(repr=False, default=None)

    def assignment(self, i: int) -> tuple[int, ...]:
        return tuple(t.vertex_of(i) for t in self.trees)

    def moved(self, i: int, j: int = 0) -> Iterable[int]:
        """Indices of trees in which chambers i and j may have different images."""
        if self.pieces is None:
            return range(len(self.trees))
        return self.pieces.maps[i].keys() | self.pieces.maps[j].keys()

    def d_sum(self, i: int, j: int = 0) -> int:
        """Sum over trees of the distance between the images of chambers i and j."""
        total = 0
        for o in self.moved(i, j):
            t = self.trees[o]
            total += self._dist(o, t.vertex_of(j))[t.vertex_of(i)]
        return total

    def _dist(self, o: int, v: int) -> list[int]:
        cache = self.__dict__.setdefault("_dist_cache", {})
        if (o, v) not in cache:
            cache[(o, v)] = self.trees[o].distances_from(v)
        return cache[(o, v)]


def product_projection(sub: CongruenceSubgroup, inventory: WallInventory,
                       orbits: list[WallOrbit] | None = None) -> ProductProjection:
    if orbits is None:
        orbits = wall_orbits(sub, inventory)
    trees, pieces = build_trees(orbits, inventory)
    return ProductProjection(trees, inventory, pieces)


# ---------------------------------------------------------------------------
# checks


def sample_kernel_elements(sub: CongruenceSubgroup, inventory: WallInventory, count: int,
                           seed: int = 0, max_factors: int = 3) -> list[tuple[int, ...]]:
    """Words for elements of W0: the conjugators first, then random products of them.

    Words are not reduced; callers that need lengths reduce them.
    """
    rng = random.Random(seed)
    gens = conjugators(sub, inventory)
    out = gens[:count]
    if not gens:
        return out
    while len(out) < count:
        word: tuple[int, ...] = ()
        for _ in range(rng.randint(1, max_factors)):
            g = rng.choice(gens)
            if rng.random() < 0.5:
                g = tuple(reversed(g))
            word += g
        out.append(word)
    return out


@dataclass
class CheckReport:
    name: str
    passed: bool
    checked: int = 0
    violations: int = 0
    boundary: int = 0
    details: dict = field(default_factory=dict)
    witness: object = None

    def to_json(self) -> dict:
        out = {"check": self.name, "passed": self.passed, "checked": self.checked,
               "violations": self.violations, "boundary_misses": self.boundary}
        out.update(self.details)
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def check_dichotomy(sub: CongruenceSubgroup, inventory: WallInventory, samples: int = 10_000,
                    seed: int = 0, gammas: Sequence[tuple[int, ...]] | None = None) -> CheckReport:
    """For gamma in W0 and walls H: gamma(H) = H or gamma(H) and H are disjoint, never crossing.

    At least ``samples`` pairs are tested when W0 has sampled elements; each
    gamma meets every wall of the inventory or a seeded random subset of it.
    """
    k = kernel(sub.sys)
    _ensure_form(k)
    keys = inventory.keys
    if gammas is None:
        want = max(64, -(-samples // max(1, len(keys))))
        gammas = sample_kernel_elements(sub, inventory, want, seed)
    if not keys or not gammas:
        return CheckReport("dichotomy", True, details={"kernel_elements": len(gammas or ())})
    per = -(-samples // len(gammas))
    rng = random.Random(seed)
    counts = {EQUAL: 0, DISJOINT: 0, CROSS: 0}
    witness = None
    for g in gammas:
        m = k.of_word(g)
        pool = keys if per >= len(keys) else rng.sample(keys, per)
        for key in pool:
            rel = relation_of_roots(k, key, positive(k, mat_vec(k, m, key)))
            counts[rel] += 1
            if rel == CROSS and witness is None:
                witness = {"gamma": list(g), "wall_root": [str(x) for x in key]}
    return CheckReport("dichotomy", counts[CROSS] == 0, sum(counts.values()), counts[CROSS],
                       details={"equal": counts[EQUAL], "disjoint": counts[DISJOINT],
                                "kernel_elements": len(gammas)},
                       witness=witness)


def check_properness(proj: ProductProjection) -> CheckReport:
    """Sum of tree distances from F(e) to F(w) equals l(w) for every chamber of the ball."""
    ball = proj.inventory.ball
    checked = violations = boundary = 0
    witness = None
    for i, w in enumerate(ball.elements):
        total = proj.d_sum(i, 0)
        on_boundary = len(w.word) == ball.radius and not ball.exhausted
        if total != len(w.word):
            if on_boundary:
                boundary += 1
                continue
            violations += 1
            if witness is None:
                witness = {"chamber": list(w.word), "d_sum": total, "length": len(w.word)}
        checked += 1
    return CheckReport("properness", violations == 0, checked, violations, boundary,
                       details={"trees": len(proj.trees)}, witness=witness)


def check_trees(proj: ProductProjection) -> CheckReport:
    """Summary of the quotients; interior cycles and non-separating walls already raised while building.

    ``boundary_misses`` counts cycles that pass through a boundary component.
    """
    interior = sum(sum(t.interior) for t in proj.trees)
    cycles = sum(t.boundary_cycles for t in proj.trees)
    return CheckReport("tree", True, len(proj.trees), 0, cycles,
                       details={"forest": cycles == 0, "interior_vertices": interior,
                                "vertices": sum(t.n_vertices for t in proj.trees),
                                "edges": sum(len(t.edges) for t in proj.trees)})


def check_equivariance(sub: CongruenceSubgroup, proj: ProductProjection,
                       gammas: Sequence[GroupElement] | None = None) -> CheckReport:
    """p(gamma w) depends only on p(w), for gamma in W0 and chambers w, gamma w in the ball.

    A conflict only counts as a violation when all the vertices involved are interior.
    """
    k = kernel(sub.sys)
    ball = proj.inventory.ball
    if gammas is None:
        gammas = [w for w in ball.elements[1:] if sub.contains(w)]
    matrices = proj.inventory.matrices
    fp = _Fingerprint(k)
    stack = np.stack([fp.matrix(m) for m in matrices])
    lookup = {x.tobytes(): i for i, x in enumerate(stack)}
    checked = violations = boundary = 0
    for g in gammas:
        mg = k.of_word(g.word)
        prods = np.einsum("ij,njk->nik", fp.matrix(mg), stack) % fp.q
        moves = []
        for i, x in enumerate(prods):
            j = lookup.get(x.tobytes())
            if j is not None and _matmul(k, mg, matrices[i]) == matrices[j]:
                moves.append((i, j))
        explicit: dict[int, int] = {}
        image: dict[tuple[int, int], int] = {}
        for i, j in moves:
            for o in proj.moved(i, j):
                explicit[o] = explicit.get(o, 0) + 1
                t = proj.trees[o]
                v, u = t.vertex_of(i), t.vertex_of(j)
                prev = image.setdefault((o, v), u)
                checked += 1
                if prev != u:
                    if t.interior[v] and t.interior[u] and t.interior[prev]:
                        violations += 1
                    else:
                        boundary += 1
        # trees not touched by a pair send the base vertex to itself
        for (o, v), u in image.items():
            t = proj.trees[o]
            if v == t.vertex_of(0) and u != v and explicit[o] < len(moves):
                if t.interior[v] and t.interior[u]:
                    violations += 1
                else:
                    boundary += 1
    return CheckReport("equivariance", violations == 0, checked, violations, boundary,
                       details={"kernel_elements": len(gammas)})


def _matmul(k: Kernel, a, b):
    n = len(a)
    cols = list(zip(*b))
    out = []
    for row in a:
        new = []
        for col in cols:
            acc = k.zero
            for x, y in zip(row, col):
                if x != k.zero and y != k.zero:
                    acc = k.add(acc, k.mul(x, y))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def class_displacements(sub: CongruenceSubgroup, word: Sequence[int]) -> dict:
    """Per wall class (reflection image mod p): number of class walls crossed along ``word``'s normal form."""
    sys = sub.sys
    k = kernel(sys)
    nf = element(sys, word).word
    counts: dict = {}
    m = k.identity
    for s in nf:
        key = positive(k, column(m, s))
        img = reflection_image(sub, key)
        counts[img] = counts.get(img, 0) + 1
        m = k.right(m, s)
    return counts


def check_free_action(sub: CongruenceSubgroup, proj: ProductProjection | None = None,
                      samples: int = 20, seed: int = 0, powers: int = 4,
                      gammas: Sequence[tuple[int, ...]] | None = None) -> CheckReport:
    """Evidence that W0 acts freely on the product of trees.

    (a) each sampled gamma must be hyperbolic on some tree: with v = F(e),
        translation length d(v, g^2 v) - d(v, g v) >= 1.  Distances in the tree
        of a W0-invariant class of walls count the class walls crossed by a
        geodesic gallery, so they are computed exactly for any gamma.
    (b) the product displacement l(gamma^j) = sum of tree distances grows:
        nondecreasing in j and at least j.
    """
    sys = sub.sys
    if gammas is None:
        if proj is None:
            raise ValueError("need a projection or explicit kernel elements")
        gammas = sample_kernel_elements(sub, proj.inventory, samples, seed, max_factors=2)
    checked = violations = 0
    witness = None
    translations = []
    for g in gammas:
        if not element(sys, g).word:
            continue
        checked += 1
        d1 = class_displacements(sub, g)
        d2 = class_displacements(sub, tuple(g) * 2)
        best = max(((d2.get(c, 0) - d1.get(c, 0), c) for c in d2), default=(0, None),
                   key=lambda x: x[0])
        lengths = [len(element(sys, tuple(g) * j).word) for j in range(1, powers + 1)]
        growing = all(b >= a for a, b in zip(lengths, lengths[1:])) and all(
            lengths[j - 1] >= j for j in range(1, powers + 1))
        translations.append(best[0])
        if best[0] < 1 or not growing:
            violations += 1
            if witness is None:
                witness = {"gamma": list(g), "translation": best[0], "lengths": lengths}
    return CheckReport("free_action", violations == 0, checked, violations,
                       details={"min_translation": min(translations, default=0)},
                       witness=witness)


def index_identity(sub: CongruenceSubgroup, ball: Ball) -> dict:
    """|ball ∩ W0| * index against |ball|; exact when the ball exhausts a finite W."""
    inside = sum(1 for w in ball.elements if sub.contains(w))
    if not sub.enumerated:
        return {"ball": len(ball), "ball_in_W0": inside, "index": None, "product": None,
                "exact": False, "passed": True}
    return {"ball": len(ball), "ball_in_W0": inside, "index": sub.image_order,
            "product": inside * sub.image_order, "exact": ball.exhausted,
            "passed": (inside * sub.image_order == len(ball)) if ball.exhausted else True}


@dataclass
class TreeRun:
    """Everything the tree construction produces for one system, radius and prime."""

    subgroup: CongruenceSubgroup
    inventory: WallInventory
    orbits: list[WallOrbit]
    projection: ProductProjection
    reports: list[CheckReport]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_json(self) -> dict:
        return {
            "subgroup": self.subgroup.to_json(),
            "ball": {"radius": self.inventory.ball.radius, "chambers": len(self.inventory.ball),
                     "exhausted": self.inventory.ball.exhausted},
            "walls": len(self.inventory),
            "orbits": len(self.orbits),
            "orbit_sizes": [len(o) for o in self.orbits],
            "index_identity": index_identity(self.subgroup, self.inventory.ball),
            "checks": [r.to_json() for r in self.reports],
            "passed": self.passed,
        }


def run_trees(sys: CoxeterSystem, radius: int, prime: int | None = None, seed: int = 0,
              dichotomy_samples: int = 10_000, free_samples: int = 20,
              budget: int | None = None) -> TreeRun:
    """Build W0, the wall orbits and trees of a ball, and run every check."""
    if prime is None:
        sub = default_subgroup(sys, budget=budget)
    else:
        try:
            sub = congruence_subgroup(sys, prime, budget)
        except BudgetExceeded:
            sub = membership_subgroup(sys, prime)
    inv = wall_inventory(sys, radius, budget=budget)
    orbits = wall_orbits(sub, inv)
    proj = product_projection(sub, inv, orbits)
    reports = [
        CheckReport("torsion", sub.torsion_report["passed"], sub.torsion_report["checked"],
                    sub.torsion_report["in_kernel"]),
        check_dichotomy(sub, inv, dichotomy_samples, seed),
        check_trees(proj),
        check_properness(proj),
        check_equivariance(sub, proj),
        check_free_action(sub, proj, free_samples, seed),
    ]
    return TreeRun(sub, inv, orbits, proj, reports)
