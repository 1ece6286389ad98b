from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coxtrees.coxeter_core import ParseError
from coxtrees.orbifold import (
    TwoOrbifold,
    euler_char,
    is_hyperbolic,
    orbifold_group_presentation,
    parse_orbifold,
)
from oracles import orbifold_chi


def test_euler_char_examples():
    assert euler_char(TwoOrbifold(2)) == -2
    assert euler_char(TwoOrbifold(0, (2, 3, 7))) == Fraction(-1, 42)
    assert euler_char(TwoOrbifold(0, (2, 2))) == 1


def test_hyperbolic_examples():
    assert is_hyperbolic(TwoOrbifold(2))
    assert is_hyperbolic(TwoOrbifold(0, (2, 3, 7)))
    assert not is_hyperbolic(TwoOrbifold(1))
    assert not is_hyperbolic(TwoOrbifold(0, (2, 3, 6)))


def test_presentation_examples():
    torus = orbifold_group_presentation(TwoOrbifold(1))
    assert torus.generators == ("a1", "b1")
    assert torus.relator_strings() == ["a1 b1 a1^-1 b1^-1"]
    assert (torus.abelian_rank, torus.torsion) == (2, ())
    tri = orbifold_group_presentation(TwoOrbifold(0, (2, 3, 7)))
    assert tri.relator_strings() == ["x1^2", "x2^3", "x3^7", "x1 x2 x3"]
    assert (tri.abelian_rank, tri.torsion) == (0, ())  # perfect
    one = orbifold_group_presentation(TwoOrbifold(0, (5,)))
    assert (one.abelian_rank, one.torsion) == (0, ())
    assert orbifold_group_presentation(TwoOrbifold(0, (2, 4, 4))).torsion == (2, 4)


def test_validation_and_parsing():
    with pytest.raises(ValueError):
        TwoOrbifold(-1)
    with pytest.raises(ValueError):
        TwoOrbifold(0, (1,))
    assert parse_orbifold('{"genus": 3, "cone_points": [2]}') == TwoOrbifold(3, (2,))
    for bad in ("{", '{"cone_points": []}', '{"genus": 0, "cone_points": [1]}'):
        with pytest.raises(ParseError):
            parse_orbifold(bad)


orbifolds = st.builds(TwoOrbifold, st.integers(0, 4), st.lists(st.integers(2, 12), max_size=6).map(tuple))


@given(orbifolds, st.integers(2, 30))
def test_cone_point_additivity_and_monotonicity(o, m):
    bigger = o.with_cone_point(m)
    assert euler_char(o) - euler_char(bigger) == 1 - Fraction(1, m)
    if is_hyperbolic(o):
        assert is_hyperbolic(bigger)


@given(orbifolds)
def test_formula_against_oracle_and_abelian_rank(o):
    assert euler_char(o) == orbifold_chi(o.genus, o.cone_points)
    assert orbifold_group_presentation(o).abelian_rank == 2 * o.genus
