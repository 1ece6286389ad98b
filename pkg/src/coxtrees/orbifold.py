"""Closed orientable 2-orbifolds: Euler characteristic, hyperbolicity, presentations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from .coxeter_core import ParseError


@dataclass(frozen=True)
class TwoOrbifold:
    genus: int
    cone_points: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 0:
            raise ValueError(f"genus must be a non-negative integer, got {self.genus!r}")
        object.__setattr__(self, "cone_points", tuple(self.cone_points))
        for m in self.cone_points:
            if not isinstance(m, int) or m < 2:
                raise ValueError(f"cone multiplicities must be integers >= 2, got {m!r}")

    def with_cone_point(self, m: int) -> "TwoOrbifold":
        return TwoOrbifold(self.genus, self.cone_points + (m,))

    def to_json(self) -> dict:
        return {"genus": self.genus, "cone_points": list(self.cone_points)}


def parse_orbifold(text: str) -> TwoOrbifold:
    """JSON ``{"genus": g, "cone_points": [m1, ...]}``."""
    try:
        data = json.loads(text)
        return TwoOrbifold(int(data["genus"]), tuple(int(m) for m in data.get("cone_points", [])))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad orbifold description: {exc}") from exc


def euler_char(o: TwoOrbifold) -> Fraction:
    """chi(S) minus the sum of (1 - 1/m) over cone points, with chi(S) = 2 - 2g."""
    return Fraction(2 - 2 * o.genus) - sum((1 - Fraction(1, m) for m in o.cone_points), Fraction(0))


def is_hyperbolic(o: TwoOrbifold) -> bool:
    return euler_char(o) < 0


@dataclass
class OrbifoldPresentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[tuple[int, int], ...], ...]  # (generator index, exponent) syllables
    abelian_rank: int
    torsion: tuple[int, ...]

    def relator_strings(self) -> list[str]:
        out = []
        for r in self.relators:
            parts = [self.generators[g] + ("" if e == 1 else f"^{e}") for g, e in r]
            out.append(" ".join(parts))
        return out

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": self.relator_strings(),
            "abelianization": {"free_rank": self.abelian_rank, "torsion": list(self.torsion)},
        }


def orbifold_group_presentation(o: TwoOrbifold) -> OrbifoldPresentation:
    """Generators a_j, b_j, x_i; relators x_i^{m_i} and prod [a_j, b_j] * prod x_i."""
    g, n = o.genus, len(o.cone_points)
    gens = tuple(x for j in range(1, g + 1) for x in (f"a{j}", f"b{j}")) + tuple(
        f"x{i}" for i in range(1, n + 1))
    rels = [((2 * g + i, m),) for i, m in enumerate(o.cone_points)]
    long = []
    for j in range(g):
        a, b = 2 * j, 2 * j + 1
        long += [(a, 1), (b, 1), (a, -1), (b, -1)]
    long += [(2 * g + i, 1) for i in range(n)]
    rels.append(tuple(long))
    rank, torsion = _abelianization(len(gens), rels)
    return OrbifoldPresentation(gens, tuple(rels), rank, torsion)


def _abelianization(n_gens: int, relators) -> tuple[int, tuple[int, ...]]:
    """Free rank and torsion invariants of Z^n modulo the relator exponent sums."""
    if n_gens == 0:
        return 0, ()
    rows = []
    for r in relators:
        row = [0] * n_gens
        for gi, e in r:
            row[gi] += e
        rows.append(row)
    snf = smith_normal_form(Matrix(rows)) if rows else Matrix.zeros(1, n_gens)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    nonzero = [d for d in diag if d != 0]
    torsion = tuple(sorted(d for d in nonzero if d != 1))
    return n_gens - len(nonzero), torsion
