"""Coxeter systems, their Tits representation and the classification of subsystems.

A system is stored through its Coxeter matrix.  On construction we fix the
field the cosine values live in, the Gram matrix ``B[s][t] = -cos(pi/m_st)``
and the generator matrices ``sigma_s(v) = v - 2B(v, u_s) u_s`` written in the
basis of simple roots.  All of it is exact.

Text format accepted by :func:`parse_system`::

    <n>
    m_11 m_12 ... m_1n
    ...
    m_n1 m_n2 ... m_nn

with each ``m`` a positive integer or ``inf``.  A JSON document
``{"generators": [...], "matrix": [[...], ...]}`` (``"inf"`` strings allowed)
is accepted as well.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import networkx as nx

from .exact_real import INF, ExactReal, FieldContext, cos_pi_over, make_context, two_cos_pi_over

Matrix = tuple[tuple[ExactReal, ...], ...]


class ParseError(ValueError):
    pass


class InvariantViolation(AssertionError):
    """An exact identity that must hold failed; signals a bug, never bad input."""


# ---------------------------------------------------------------------------
# small exact linear algebra


def identity(ctx: FieldContext, n: int) -> Matrix:
    zero, one = ctx.zero, ctx.one
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = a[i]
        out_row = []
        for j in range(m):
            acc = None
            for t in range(k):
                x = row[t]
                if x.is_zero():
                    continue
                y = b[t][j]
                if y.is_zero():
                    continue
                acc = x * y if acc is None else acc + x * y
            out_row.append(acc if acc is not None else a[0][0].ctx.zero)
        out.append(tuple(out_row))
    return tuple(out)


def mat_vec(a: Matrix, v: Sequence[ExactReal]) -> tuple[ExactReal, ...]:
    ctx = v[0].ctx
    out = []
    for row in a:
        acc = ctx.zero
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                acc = acc + x * y
        out.append(acc)
    return tuple(out)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def bilinear(gram: Matrix, u: Sequence[ExactReal], v: Sequence[ExactReal]) -> ExactReal:
    return sum((u[i] * sum((gram[i][j] * v[j] for j in range(len(v)) if not v[j].is_zero()),
                           u[0].ctx.zero)
                for i in range(len(u)) if not u[i].is_zero()), u[0].ctx.zero)


def inertia(gram: Matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric matrix, by exact congruence."""
    n = len(gram)
    a = [list(row) for row in gram]
    remaining = list(range(n))
    pos = neg = 0
    while remaining:
        piv = next((i for i in remaining if not a[i][i].is_zero()), None)
        if piv is None:
            if any(not a[i][j].is_zero() for i in remaining for j in remaining):
                # a hyperbolic 2x2 block [[0, x], [x, 0]] contributes one of each
                i, j = next((i, j) for i in remaining for j in remaining if not a[i][j].is_zero())
                # replace row/col i by i + j, which now has diagonal 2x != 0
                for k in range(n):
                    a[i][k] = a[i][k] + a[j][k]
                for k in range(n):
                    a[k][i] = a[k][i] + a[k][j]
                continue
            return pos, neg, len(remaining)
        d = a[piv][piv]
        if d.sign() > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in remaining if i != piv]
        dinv = d.inverse()
        for i in rest:
            f = a[i][piv]
            if f.is_zero():
                continue
            f = f * dinv
            for j in rest:
                if not a[piv][j].is_zero():
                    a[i][j] = a[i][j] - f * a[piv][j]
        remaining = rest
    return pos, neg, 0


def leading_minors(gram: Matrix) -> list[ExactReal]:
    """Leading principal minors via exact Gaussian elimination."""
    n = len(gram)
    out = []
    for k in range(1, n + 1):
        a = [list(row[:k]) for row in gram[:k]]
        det = a[0][0].ctx.one
        for c in range(k):
            p = next((r for r in range(c, k) if not a[r][c].is_zero()), None)
            if p is None:
                det = det.ctx.zero
                break
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det = det * a[c][c]
            inv = a[c][c].inverse()
            for r in range(c + 1, k):
                f = a[r][c]
                if not f.is_zero():
                    f = f * inv
                    for j in range(c, k):
                        a[r][j] = a[r][j] - f * a[c][j]
        out.append(det)
    return out


# ---------------------------------------------------------------------------


def _fmt_order(m) -> str:
    return "inf" if m == INF else str(int(m))


class CoxeterSystem:
    """A Coxeter system (W, S) with its exact Tits representation.

    ``matrix[i][j]`` is the order of ``s_i s_j``; ``math.inf`` marks a free pair.
    """

    def __init__(self, matrix: Sequence[Sequence], generators: Sequence[str] | None = None):
        n = len(matrix)
        if n == 0:
            raise ParseError("a Coxeter system needs at least one generator")
        rows = []
        for i, row in enumerate(matrix):
            if len(row) != n:
                raise ParseError(f"row {i} has {len(row)} entries, expected {n}")
            rows.append(tuple(INF if m == INF else int(m) for m in row))
        for i in range(n):
            if rows[i][i] != 1:
                raise ParseError(f"diagonal must be 1 (entry {i},{i} is {_fmt_order(rows[i][i])})")
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise ParseError(f"matrix is asymmetric at ({i},{j})")
                if i != j and rows[i][j] < 2:
                    raise ParseError(f"off-diagonal entry ({i},{j}) must be >= 2 or inf")
        self.matrix: tuple[tuple, ...] = tuple(rows)
        if generators is None:
            generators = [f"s{i}" for i in range(n)]
        generators = [str(g) for g in generators]
        if len(generators) != n or len(set(generators)) != n:
            raise ParseError("generator labels must be distinct and match the matrix size")
        self.generators: tuple[str, ...] = tuple(generators)
        self.rank = n
        # 2cos(pi/m) is rational for m in {1, 2, 3, inf}; the field only needs the rest
        irrational = {m for row in rows for m in row if m != INF and m > 3}
        self.field: FieldContext = make_context(irrational or {1})
        ctx = self.field
        self.gram: Matrix = tuple(
            tuple(-cos_pi_over(ctx, rows[i][j]) for j in range(n)) for i in range(n))
        # 2B entries are algebraic integers, so sigma matrices have integral entries
        self.two_gram: Matrix = tuple(
            tuple(-two_cos_pi_over(ctx, rows[i][j]) for j in range(n)) for i in range(n))
        self.sigma: tuple[Matrix, ...] = tuple(self._sigma(s) for s in range(n))

    def _sigma(self, s: int) -> Matrix:
        ident = identity(self.field, self.rank)
        rows = list(ident)
        rows[s] = tuple(ident[s][t] - self.two_gram[t][s] for t in range(self.rank))
        return tuple(rows)

    def __repr__(self):
        return f"CoxeterSystem({self.to_text().strip()!r})"

    def __eq__(self, other):
        return isinstance(other, CoxeterSystem) and (
            self.matrix, self.generators) == (other.matrix, other.generators)

    def __hash__(self):
        return hash((self.matrix, self.generators))

    def index(self, s) -> int:
        if isinstance(s, int):
            if 0 <= s < self.rank:
                return s
            raise KeyError(f"no generator with index {s}")
        try:
            return self.generators.index(s)
        except ValueError:
            raise KeyError(f"unknown generator {s!r}") from None

    def m(self, s, t):
        return self.matrix[self.index(s)][self.index(t)]

    def is_right_angled(self) -> bool:
        return all(m in (1, 2, INF) for row in self.matrix for m in row)

    def restrict(self, subset: Iterable) -> "CoxeterSystem":
        idx = sorted({self.index(s) for s in subset})
        return CoxeterSystem([[self.matrix[i][j] for j in idx] for i in idx],
                             [self.generators[i] for i in idx])

    @cached_property
    def diagram(self) -> nx.Graph:
        """Coxeter diagram: s ~ t iff m_st >= 3 (inf included), edge attribute ``m``."""
        g = nx.Graph()
        g.add_nodes_from(range(self.rank))
        for i, j in itertools.combinations(range(self.rank), 2):
            if self.matrix[i][j] >= 3:
                g.add_edge(i, j, m=self.matrix[i][j])
        return g

    def to_text(self) -> str:
        lines = [str(self.rank)]
        lines += [" ".join(_fmt_order(m) for m in row) for row in self.matrix]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"generators": list(self.generators),
                "matrix": [[m if m != INF else "inf" for m in row] for row in self.matrix]}


_TOKEN = re.compile(r"^(inf|[0-9]+)$")


def _order(tok) -> int | float:
    if isinstance(tok, bool):
        raise ParseError(f"malformed token {tok!r}")
    if isinstance(tok, int):
        return tok
    if isinstance(tok, float) and tok == INF:
        return INF
    if isinstance(tok, str) and _TOKEN.match(tok):
        return INF if tok == "inf" else int(tok)
    raise ParseError(f"malformed token {tok!r}")


def parse_system(text: str) -> CoxeterSystem:
    """Parse the whitespace matrix format or its JSON alternative."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict) or "matrix" not in doc:
            raise ParseError("JSON input needs a 'matrix' field")
        extra = set(doc) - {"generators", "matrix"}
        if extra:
            raise ParseError(f"unexpected JSON fields {sorted(extra)}")
        mat = doc["matrix"]
        if not isinstance(mat, list) or not all(isinstance(r, list) for r in mat):
            raise ParseError("'matrix' must be a list of rows")
        return CoxeterSystem([[_order(t) for t in row] for row in mat], doc.get("generators"))
    lines = [ln for ln in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty input")
    head = lines[0].split()
    if len(head) != 1 or not head[0].isdigit():
        raise ParseError(f"first line must be the rank, got {lines[0]!r}")
    n = int(head[0])
    if n < 1:
        raise ParseError("rank must be positive")
    body = lines[1:]
    if len(body) < n:
        raise ParseError(f"expected {n} matrix rows, found {len(body)}")
    if len(body) > n:
        raise ParseError(f"trailing garbage after row {n}: {body[n]!r}")
    rows = []
    for i, line in enumerate(body):
        toks = line.split()
        if len(toks) != n:
            raise ParseError(f"row {i} has {len(toks)} tokens, expected {n}")
        rows.append([_order(t) for t in toks])
    return CoxeterSystem(rows)


# ---------------------------------------------------------------------------
# constructors for familiar systems


def from_diagram(n: int, edges: dict[tuple[int, int], int | float], labels=None) -> CoxeterSystem:
    """System of rank n with m = 2 except on the listed diagram edges."""
    mat = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for (i, j), m in edges.items():
        mat[i][j] = mat[j][i] = m
    return CoxeterSystem(mat, labels)


def _path(n: int, labels: dict[int, int] | None = None) -> dict:
    labels = labels or {}
    return {(i, i + 1): labels.get(i, 3) for i in range(n - 1)}


def _branch(arms: Sequence[int]) -> tuple[int, dict]:
    """Star with a center (node 0) and arms of the given lengths, all labels 3."""
    edges, nxt = {}, 1
    for length in arms:
        prev = 0
        for _ in range(length):
            edges[(prev, nxt)] = 3
            prev, nxt = nxt, nxt + 1
    return nxt, edges


def dihedral(m) -> CoxeterSystem:
    return from_diagram(2, {(0, 1): m}, ["s", "t"])


def triangle(p, q, r) -> CoxeterSystem:
    """Rank-3 system with m(s0,s1)=p, m(s1,s2)=q, m(s0,s2)=r."""
    return CoxeterSystem([[1, p, r], [p, 1, q], [r, q, 1]])


def right_angled_polygon(k: int) -> CoxeterSystem:
    """Reflection group of a right-angled k-gon: consecutive sides commute, others free."""
    mat = [[1 if i == j else (2 if (i - j) % k in (1, k - 1) else INF) for j in range(k)]
           for i in range(k)]
    return CoxeterSystem(mat)


def _named_diagram(name: str) -> tuple[int, dict] | None:
    mt = re.fullmatch(r"I2\((\d+|inf)\)", name)
    if mt:
        return 2, {(0, 1): _order(mt.group(1))}
    mt = re.fullmatch(r"(affine-)?([A-HI])(\d+)", name)
    if not mt:
        return None
    aff, typ, n = bool(mt.group(1)), mt.group(2), int(mt.group(3))
    if not aff:
        if typ == "A" and n >= 1:
            return n, _path(n)
        if typ == "B" and n >= 2:
            return n, _path(n, {n - 2: 4})
        if typ == "D" and n >= 4:
            return _branch([1, 1, n - 3])
        if typ == "E" and n in (6, 7, 8):
            return _branch([1, 2, n - 4])
        if typ == "F" and n == 4:
            return 4, _path(4, {1: 4})
        if typ == "H" and n in (3, 4):
            return n, _path(n, {n - 2: 5})
        return None
    if typ == "A" and n == 1:
        return 2, {(0, 1): INF}
    if typ == "A" and n >= 2:
        edges = _path(n + 1)
        edges[(0, n)] = 3
        return n + 1, edges
    if typ == "B" and n >= 3:
        k, edges = _branch([1, 1, n - 2])
        last = max(edges, key=lambda e: e[1])
        edges[last] = 4
        return k, edges
    if typ == "C" and n >= 2:
        return n + 1, _path(n + 1, {0: 4, n - 1: 4})
    if typ == "D" and n == 4:
        return _branch([1, 1, 1, 1])
    if typ == "D" and n >= 5:
        edges = _path(n - 1)
        edges[(1, n - 1)] = 3
        edges[(n - 3, n)] = 3
        return n + 1, edges
    if typ == "E" and n == 6:
        return _branch([2, 2, 2])
    if typ == "E" and n == 7:
        return _branch([1, 3, 3])
    if typ == "E" and n == 8:
        return _branch([1, 2, 5])
    if typ == "F" and n == 4:
        return 5, _path(5, {2: 4})
    if typ == "G" and n == 2:
        return 3, _path(3, {1: 6})
    return None


def named_system(name: str) -> CoxeterSystem:
    """Build a system from a classification label such as ``"B3"``, ``"I2(7)"`` or ``"affine-E8"``."""
    diagram = _named_diagram(name)
    if diagram is None:
        raise KeyError(f"unknown Coxeter type {name!r}")
    n, edges = diagram
    return from_diagram(n, edges)


@lru_cache(maxsize=None)
def _table(rank: int) -> tuple[tuple[str, bool, nx.Graph], ...]:
    """(name, is_affine, labelled diagram) for every tabulated connected type of this rank."""
    names: list[str] = []
    if rank == 1:
        names.append("A1")
    elif rank == 2:
        names.append("affine-A1")
    else:
        names += [f"{t}{rank}" for t in "ABDEFH"]
        names += [f"affine-{t}{rank - 1}" for t in "ABCDEFG"]
    out = []
    for name in names:
        diagram = _named_diagram(name)
        if diagram is None or diagram[0] != rank:
            continue
        g = nx.Graph()
        g.add_nodes_from(range(rank))
        for (i, j), m in diagram[1].items():
            g.add_edge(i, j, m=m)
        out.append((name, name.startswith("affine-"), g))
    return tuple(out)


def _match(a, b) -> bool:
    return a["m"] == b["m"]


def table_name(sys: CoxeterSystem, subset: Sequence[int]) -> tuple[str, str] | None:
    """Classification label and expected kind of a diagram-connected subset, if tabulated."""
    subset = sorted(subset)
    if len(subset) == 2:
        m = sys.matrix[subset[0]][subset[1]]
        if m == INF:
            return "affine-A1", AFFINE
        return f"I2({m})", POSITIVE_DEFINITE
    g = nx.relabel_nodes(sys.diagram.subgraph(subset), {s: i for i, s in enumerate(subset)})
    for name, affine, h in _table(len(subset)):
        if h.number_of_edges() == g.number_of_edges() and nx.is_isomorphic(g, h, edge_match=_match):
            return name, (AFFINE if affine else POSITIVE_DEFINITE)
    return None


POSITIVE_DEFINITE = "PositiveDefinite"
AFFINE = "Affine"
INDEFINITE = "Indefinite"


@dataclass(frozen=True)
class TypeVerdict:
    kind: str
    name: str | None = None
    parts: tuple["TypeVerdict", ...] = field(default=(), repr=False)
    inertia: tuple[int, int, int] | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "name": self.name}
        if self.inertia is not None:
            out["inertia"] = list(self.inertia)
        if self.parts:
            out["components"] = [p.to_json() for p in self.parts]
        return out


@dataclass(frozen=True)
class DiagramComponentization:
    components: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)


def components(sys: CoxeterSystem, subset: Iterable | None = None) -> DiagramComponentization:
    """Partition of S (or of a subset) into connected components of the Coxeter diagram."""
    nodes = range(sys.rank) if subset is None else sorted({sys.index(s) for s in subset})
    g = sys.diagram.subgraph(nodes)
    comps = sorted(tuple(sorted(c)) for c in nx.connected_components(g))
    return DiagramComponentization(tuple(comps))


def sigma_of(sys: CoxeterSystem, s) -> Matrix:
    return sys.sigma[sys.index(s)]


def restricted_gram(sys: CoxeterSystem, subset: Sequence[int]) -> Matrix:
    return tuple(tuple(sys.gram[i][j] for j in subset) for i in subset)


def _kind_from_inertia(inert: tuple[int, int, int]) -> str:
    pos, neg, zero = inert
    if neg:
        return INDEFINITE
    return AFFINE if zero else POSITIVE_DEFINITE


@lru_cache(maxsize=4096)
def _classify_connected(sys: CoxeterSystem, subset: tuple[int, ...]) -> TypeVerdict:
    inert = inertia(restricted_gram(sys, subset))
    kind = _kind_from_inertia(inert)
    if kind == AFFINE and inert[2] != 1:
        raise InvariantViolation(f"connected semidefinite diagram with nullity {inert[2]}")
    found = table_name(sys, subset) if len(subset) > 1 else ("A1", POSITIVE_DEFINITE)
    name = None
    if found is not None:
        name, expected = found
        if expected != kind:
            raise InvariantViolation(
                f"table says {name} is {expected} but Gram minors say {kind}")
    return TypeVerdict(kind, name, inertia=inert)


def classify(sys: CoxeterSystem, subset: Iterable | None = None) -> TypeVerdict:
    """Positive definite / affine / indefinite verdict for the Gram form restricted to a subset."""
    idx = tuple(range(sys.rank)) if subset is None else tuple(sorted({sys.index(s) for s in subset}))
    if not idx:
        raise ValueError("classify needs a nonempty subset")
    parts = tuple(_classify_connected(sys, c) for c in components(sys, idx))
    if len(parts) == 1:
        return parts[0]
    kinds = {p.kind for p in parts}
    if INDEFINITE in kinds:
        kind = INDEFINITE
    elif AFFINE in kinds:
        kind = AFFINE
    else:
        kind = POSITIVE_DEFINITE
    name = " x ".join(p.name or "?" for p in parts)
    return TypeVerdict(kind, name, parts)


def is_spherical(sys: CoxeterSystem, subset: Iterable) -> bool:
    """True iff the special subgroup W_T is finite."""
    idx = {sys.index(s) for s in subset}
    if not idx:
        return True
    return classify(sys, idx).kind == POSITIVE_DEFINITE


def is_euclidean_irreducible(sys: CoxeterSystem) -> bool:
    if len(components(sys)) != 1:
        raise ValueError("system is reducible; test each of components() separately")
    return classify(sys).kind == AFFINE


def spherical_subsets(sys: CoxeterSystem) -> list[tuple[int, ...]]:
    """All spherical subsets of S (including the empty set), by size then lexicographically."""
    out = [()]
    known = {()}
    # subsets of spherical sets are spherical, so grow level by level
    frontier = [()]
    for size in range(1, sys.rank + 1):
        nxt = []
        for base in frontier:
            start = base[-1] + 1 if base else 0
            for s in range(start, sys.rank):
                cand = base + (s,)
                if all(cand[:i] + cand[i + 1:] in known for i in range(size)) and is_spherical(sys, cand):
                    nxt.append(cand)
        known.update(nxt)
        out += nxt
        frontier = nxt
    return out
