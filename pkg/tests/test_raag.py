import pytest
from hypothesis import given, settings, strategies as st

from coxtrees.coxeter_core import (
    AFFINE,
    ParseError,
    classify,
    components,
    dihedral,
    named_system,
    right_angled_polygon,
    triangle,
)
from coxtrees.elements import normal_form
from coxtrees.exact_real import INF
from coxtrees.raag import (
    EUCLIDEAN,
    FAIL,
    FINITE,
    OTHER,
    PASS,
    SURFACE,
    DefiningGraph,
    RaagWords,
    RacgWords,
    all_graphs,
    complete_graph,
    coset_enumeration,
    coxeter_relators,
    cycle_graph,
    decompose,
    dj_embedding,
    dj_target,
    factor_relators_agree,
    kahler_candidate_coxeter,
    kahler_candidate_raag,
    parse_graph,
    path_graph,
    presentation,
    raag_ball,
    racg_of,
)
from oracles import order_from_degrees


def test_parse_text_and_dot_agree():
    text = "# a path\nv a\nv b\nv c\na b\nb c\n"
    dot = 'graph G { a; b; c; a -- b; "b" -- c; }'
    assert parse_graph(text) == parse_graph(dot)
    assert parse_graph(parse_graph(text).to_text()) == parse_graph(text)


@pytest.mark.parametrize("text", ["v a\na a\n", "v a\nv b\na b\nb a\n", "v a\nv a\n", "a b c\n",
                                  "graph { a -- a; }"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_graph(text)


def test_racg_examples():
    k3 = racg_of(complete_graph(3))
    assert all(k3.m(i, j) == 2 for i in range(3) for j in range(3) if i != j)
    assert racg_of(DefiningGraph.build(["a", "b"])).matrix == dihedral(INF).matrix
    c5 = racg_of(cycle_graph(5))
    assert c5.matrix == right_angled_polygon(5).matrix
    assert len(components(c5)) == 1


def test_decompose_examples():
    assert [f.vertices for f in decompose(complete_graph(4)).factors] == [("v0",), ("v1",), ("v2",), ("v3",)]
    path = parse_graph("v a\nv b\nv c\na b\nb c\n")
    d = decompose(path)
    assert [f.vertices for f in d.factors] == [("a", "c"), ("b",)]
    assert all(not f.edges for f in d.factors)
    assert all(factor_relators_agree(path, f) for f in d.factors)
    assert decompose(cycle_graph(5)).is_irreducible()


@pytest.mark.parametrize("g", all_graphs(4) + all_graphs(3), ids=lambda g: g.to_text().replace("\n", ";"))
def test_decomposition_matches_racg_components(g):
    d = decompose(g)
    assert len(d.factors) == len(components(racg_of(g)))
    assert all(factor_relators_agree(g, f) for f in d.factors)


def test_graph_census():
    assert [len(all_graphs(n)) for n in range(1, 5)] == [1, 2, 4, 11]


def test_presentation():
    p = presentation(path_graph(3))
    assert p.relator_strings() == ["v0 v1 v0^-1 v1^-1", "v1 v2 v1^-1 v2^-1"]


def test_dj_examples():
    single = dj_embedding(DefiningGraph.build(["a"]))
    assert single.verified_index == 2 and single.target.matrix == dihedral(INF).matrix
    free = dj_embedding(DefiningGraph.build(["a", "b"]))
    assert free.verified_index == 4 and free.passed
    abelian = dj_embedding(DefiningGraph.build(["a", "b"], [("a", "b")]))
    assert abelian.verified_index == 4 and abelian.relator_check["passed"]


def test_dj_target_is_right_angled():
    for g in all_graphs(3):
        target = dj_target(g)
        assert target.is_right_angled() and target.rank == 2 * g.order


@pytest.mark.parametrize("name", ["A3", "B3", "H3", "I2(7)", "A4"])
def test_coset_enumeration_of_trivial_subgroup(name):
    sys = named_system(name)
    assert coset_enumeration(sys.rank, coxeter_relators(sys), []) == order_from_degrees(name)


def test_coset_enumeration_of_parabolic():
    sys = named_system("B3")
    assert coset_enumeration(3, coxeter_relators(sys), [(0,), (1,)]) == 48 // 6  # <s0, s1> is A2
    assert coset_enumeration(3, coxeter_relators(sys), [(1,), (2,)]) == 48 // 8  # <s1, s2> is B2


def test_kahler_raag_examples():
    assert kahler_candidate_raag(complete_graph(4)).verdict == PASS
    k3 = kahler_candidate_raag(complete_graph(3))
    assert k3.verdict == FAIL and "odd rank" in k3.reason
    p = kahler_candidate_raag(path_graph(3))
    assert p.verdict == FAIL and "not complete" in p.reason


def test_kahler_coxeter_examples():
    assert [v.verdict for v in kahler_candidate_coxeter(triangle(2, 3, 7))] == [SURFACE]
    assert [v.verdict for v in kahler_candidate_coxeter(triangle(3, 3, 3))] == [EUCLIDEAN]
    assert [v.verdict for v in kahler_candidate_coxeter(dihedral(5))] == [FINITE]
    assert [v.verdict for v in kahler_candidate_coxeter(right_angled_polygon(6))] == [SURFACE]
    other = kahler_candidate_coxeter(racg_of(DefiningGraph.build(["a", "b", "c"])))
    assert [v.verdict for v in other] == [OTHER]
    assert "cannot certify" in other[0].reason
    assert classify(dihedral(INF)).kind == AFFINE
    assert [v.verdict for v in kahler_candidate_coxeter(dihedral(INF))] == [EUCLIDEAN]


def test_raag_ball_sizes():
    # free group of rank 2: 1 + 4 * (3^r - 1) / 2 elements of length <= r
    free = DefiningGraph.build(["a", "b"])
    assert len(raag_ball(free, 4)) == 1 + 4 * (3**4 - 1) // 2
    # Z^2: lattice points with |x| + |y| <= r
    z2 = complete_graph(2)
    assert len(raag_ball(z2, 4)) == 2 * 4 * 4 + 2 * 4 + 1


graphs = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=10).map(
        lambda es: DefiningGraph.build([f"v{i}" for i in range(n)],
                                       sorted({(f"v{min(a, b)}", f"v{max(a, b)}") for a, b in es if a != b}))))


@settings(max_examples=60, deadline=None)
@given(graphs, st.data())
def test_racg_normal_form_agrees_with_tits_representation(g, data):
    sys = racg_of(g)
    word = data.draw(st.lists(st.integers(0, g.order - 1), max_size=14))
    assert RacgWords(sys).normal_form(word) == normal_form(sys, word)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.data())
def test_raag_identity_in_extreme_cases(n, data):
    letters = st.tuples(st.integers(0, n - 1), st.sampled_from([1, -1]))
    word = data.draw(st.lists(letters, max_size=16))
    # complete graph: free abelian, trivial iff every exponent sum vanishes
    abelian = RaagWords(complete_graph(n))
    sums = [sum(e for v, e in word if v == i) for i in range(n)]
    assert abelian.is_identity(word) == (not any(sums))
    # edgeless graph: free group, trivial iff free reduction is empty
    stack = []
    for x in word:
        if stack and stack[-1] == (x[0], -x[1]):
            stack.pop()
        else:
            stack.append(x)
    free = RaagWords(DefiningGraph.build([f"v{i}" for i in range(n)]))
    assert free.is_identity(word) == (not stack)
    assert free.normal_form(word) == tuple(stack)
