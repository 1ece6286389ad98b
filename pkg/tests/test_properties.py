"""Random-word invariants across the test systems."""

from hypothesis import given, settings, strategies as st

from coxtrees.coxeter_core import dihedral, named_system, right_angled_polygon, triangle
from coxtrees.davis import CROSS, DISJOINT, EQUAL, wall_of, wall_relation
from coxtrees.elements import element, inverse, is_reduced, length, multiply
from coxtrees.exact_real import INF

SYSTEMS = [dihedral(5), dihedral(INF), named_system("B3"), named_system("affine-A2"),
           triangle(2, 3, 7), right_angled_polygon(5)]


@st.composite
def system_and_words(draw, count=1, max_size=12):
    sys = draw(st.sampled_from(SYSTEMS))
    letters = st.integers(0, sys.rank - 1)
    words = [tuple(draw(st.lists(letters, max_size=max_size))) for _ in range(count)]
    return sys, words


@settings(max_examples=80, deadline=None)
@given(system_and_words(), st.data())
def test_length_changes_by_one(case, data):
    sys, (word,) = case
    s = data.draw(st.integers(0, sys.rank - 1))
    assert abs(length(sys, word + (s,)) - length(sys, word)) == 1


@settings(max_examples=80, deadline=None)
@given(system_and_words(count=2))
def test_group_axioms(case):
    sys, (u, v) = case
    w = element(sys, u)
    assert is_reduced(sys, w.word)
    assert not multiply(sys, w, inverse(sys, w)).word
    assert len(multiply(sys, u, v).word) <= len(w.word) + length(sys, v)
    assert length(sys, tuple(reversed(u))) == len(w.word)


@settings(max_examples=60, deadline=None)
@given(system_and_words(count=2, max_size=8), st.data())
def test_wall_relation_is_symmetric_and_reflexive(case, data):
    sys, (u, v) = case
    s, t = data.draw(st.integers(0, sys.rank - 1)), data.draw(st.integers(0, sys.rank - 1))
    h1, h2 = wall_of(sys, u, s), wall_of(sys, v, t)
    rel = wall_relation(sys, h1, h2)
    assert rel in (EQUAL, CROSS, DISJOINT)
    assert rel == wall_relation(sys, h2, h1)
    assert wall_relation(sys, h1, h1) == EQUAL
    # translating both walls by the same element preserves the relation
    g = data.draw(st.lists(st.integers(0, sys.rank - 1), max_size=4))
    moved = wall_relation(sys, wall_of(sys, tuple(g) + u, s), wall_of(sys, tuple(g) + v, t))
    assert moved == rel
