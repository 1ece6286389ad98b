import itertools
import random

import pytest

from coxtrees.coxeter_core import (
    CoxeterSystem,
    bilinear,
    dihedral,
    mat_vec,
    named_system,
    right_angled_polygon,
    spherical_subsets,
    triangle,
)
from coxtrees.davis import (
    CROSS,
    DISJOINT,
    EQUAL,
    davis_ball,
    reflections_in_ball,
    separates,
    separating_keys,
    separating_walls,
    wall_inventory,
    wall_key,
    wall_of,
    wall_relation,
)
from coxtrees.elements import matrix_of, multiply
from coxtrees.exact_real import INF
from oracles import number_of_reflections

I3 = dihedral(3)
S, T = 0, 1


def test_davis_ball_of_i2_3():
    cx = davis_ball(I3, 10)
    assert len(cx.vertices) == 13
    assert cx.exhausted and cx.euler_characteristic() == 1


def test_davis_ball_radius_zero():
    sys = triangle(2, 3, 7)
    cx = davis_ball(sys, 0)
    assert all(v.rep.word == () for v in cx.vertices)
    assert len(cx.vertices) == len(spherical_subsets(sys))


def test_davis_ball_skips_nonspherical_top():
    cx = davis_ball(dihedral(INF), 2)
    assert all(v.subset != (0, 1) for v in cx.vertices)


@pytest.mark.parametrize("name", ["A3", "B3", "H3", "I2(5)"])
def test_finite_davis_complex_is_acyclic(name):
    cx = davis_ball(named_system(name), 40)
    assert cx.exhausted and cx.euler_characteristic() == 1


@pytest.mark.parametrize("sys", [named_system("B3"), right_angled_polygon(5), triangle(2, 3, 7)],
                         ids=["B3", "pentagon", "237"])
def test_flags_are_chains_and_closed_under_faces(sys):
    cx = davis_ball(sys, 3)
    stored = set(cx.simplices)
    for chain in cx.simplices:
        for a, b in zip(chain, chain[1:]):
            lo, hi = cx.vertices[a], cx.vertices[b]
            assert set(lo.subset) < set(hi.subset)
            # hi.rep^-1 lo.rep lies in W_{hi.subset}
            diff = multiply(sys, tuple(reversed(hi.rep.word)), lo.rep)
            assert set(diff.word) <= set(hi.subset)
        for r in range(1, len(chain)):
            for face in itertools.combinations(chain, r):
                assert face in stored


def test_face_list_export():
    text = davis_ball(I3, 3).face_list()
    head = text.splitlines()[0].split()
    assert head[0] == "FLAGS" and int(head[1]) == 13


def test_wall_counts():
    assert len(reflections_in_ball(I3, 5)) == 3
    assert len(reflections_in_ball(CoxeterSystem([[1]]), 3)) == 1
    # conjugates w s w^-1 with l(w) <= 2: s, t, sts, tst, ststs, tstst
    assert len(reflections_in_ball(dihedral(INF), 2)) == 6


@pytest.mark.parametrize("name", ["A3", "B3", "H3", "D4", "I2(7)"])
def test_reflection_count_matches_degrees(name):
    assert len(reflections_in_ball(named_system(name), 40)) == number_of_reflections(name)


def test_wall_relation_examples():
    h = wall_of(I3, (), S)
    assert wall_relation(I3, h, h) == EQUAL
    assert wall_relation(I3, h, wall_of(I3, (), T)) == CROSS
    inf = dihedral(INF)
    assert wall_relation(inf, wall_of(inf, (), S), wall_of(inf, (T,), S)) == DISJOINT


def test_wall_relation_symmetric_and_finite_groups_always_cross():
    pent = right_angled_polygon(5)
    walls = wall_inventory(pent, 3).walls
    seen = set()
    for a, b in itertools.combinations(walls[:40], 2):
        rel = wall_relation(pent, a, b)
        assert rel == wall_relation(pent, b, a) != EQUAL
        seen.add(rel)
    assert seen == {CROSS, DISJOINT}
    h3 = named_system("H3")
    walls = reflections_in_ball(h3, 40)
    assert all(wall_relation(h3, a, b) == CROSS for a, b in itertools.combinations(walls, 2))


def test_separating_walls_examples():
    assert separating_walls(I3, ()) == []
    assert separating_walls(I3, (S,)) == [wall_of(I3, (), S)]
    walls = separating_walls(I3, (S, T, S))
    assert len(set(walls)) == 3 and set(walls) == set(reflections_in_ball(I3, 5))


@pytest.mark.parametrize("sys", [triangle(2, 3, 7), right_angled_polygon(5), named_system("affine-A2")],
                         ids=["237", "pentagon", "affine-A2"])
def test_reflection_geometry(sys):
    inv = wall_inventory(sys, 4)
    rng = random.Random(1)
    one = tuple(tuple(sys.field.one if i == j else sys.field.zero for j in range(sys.rank))
                for i in range(sys.rank))
    for wall in rng.sample(inv.walls, min(25, len(inv.walls))):
        r = wall.reflection
        assert multiply(sys, r, r).word == ()
        alpha = wall.root
        sig = matrix_of(sys, r)
        aa = bilinear(sys.gram, alpha, alpha)
        for t in range(sys.rank):
            u = one[t]
            coeff = 2 * bilinear(sys.gram, u, alpha) / aa
            expect = tuple(u[i] - coeff * alpha[i] for i in range(sys.rank))
            assert mat_vec(sig, u) == expect
        # left multiplication by r swaps the ends of each crossed edge, up to truncation
        for i, j in wall.crossed_edges:
            ri = inv.ball.get(multiply(sys, r, inv.ball.elements[i]))
            rj = inv.ball.get(multiply(sys, r, inv.ball.elements[j]))
            assert ri == j and rj == i


@pytest.mark.parametrize("sys", [triangle(2, 3, 7), right_angled_polygon(5)], ids=["237", "pentagon"])
def test_separating_walls_match_half_space_test(sys):
    inv = wall_inventory(sys, 5)
    rng = random.Random(2)
    for w in rng.sample(inv.ball.elements, 30):
        keys = separating_keys(sys, w.word)
        assert len(set(keys)) == len(w.word)
        assert [wall_key(sys, h) for h in separating_walls(sys, w)] == keys
        crossing = {key for key in inv.keys if separates(sys, key, w)}
        assert crossing == set(keys)

