import pytest

from coxtrees.coxeter_core import CoxeterSystem, dihedral, named_system, right_angled_polygon, triangle
from coxtrees.davis import DISJOINT, wall_inventory, wall_of, wall_relation
from coxtrees.elements import ball, element, multiply, power
from coxtrees.exact_real import INF
from coxtrees.wall_trees import (
    TreeViolation,
    WallOrbit,
    build_tree,
    build_trees,
    check_dichotomy,
    check_equivariance,
    check_free_action,
    check_properness,
    congruence_subgroup,
    conjugators,
    default_subgroup,
    divides_discriminant,
    index_identity,
    membership_subgroup,
    product_projection,
    run_trees,
    wall_orbits,
)

INF2 = dihedral(INF)
S, T = 0, 1


@pytest.fixture(scope="module")
def inf_run():
    return run_trees(INF2, 12, prime=3)


def test_finite_group_mod_5_is_faithful():
    sub = congruence_subgroup(dihedral(3), 5)
    assert sub.image_order == 6
    assert [w for w in ball(dihedral(3), 5).elements if sub.contains(w)] == [element(dihedral(3))]


def test_infinite_dihedral_mod_3():
    sub = congruence_subgroup(INF2, 3)
    assert sub.image_order == 6 and sub.index == 6
    assert not sub.contains((S,)) and not sub.contains((T,))
    assert sub.contains(power(INF2, (S, T), 3).word)
    assert not sub.contains(power(INF2, (S, T), 2).word)


def test_prime_validation():
    with pytest.raises(ValueError):
        congruence_subgroup(INF2, 2)
    with pytest.raises(ValueError):
        congruence_subgroup(INF2, 9)
    # Q(sqrt 5): x^2 - x - 1 has discriminant 5
    assert divides_discriminant((-1, -1, 1), 5)
    with pytest.raises(ValueError, match="discriminant"):
        congruence_subgroup(named_system("H3"), 5)


def test_default_ladder_skips_bad_primes():
    assert default_subgroup(named_system("H3")).prime == 3
    assert congruence_subgroup(named_system("H3"), 11).image_order == 120


def test_generators_never_in_kernel():
    for sys in (triangle(2, 3, 7), right_angled_polygon(5), named_system("affine-A2")):
        sub = default_subgroup(sys)
        assert all(not sub.contains((s,)) for s in range(sys.rank))
        assert sub.torsion_report["passed"]


def test_schreier_generators_lie_in_kernel():
    sub = congruence_subgroup(triangle(2, 3, 7), 3)
    gens = sub.schreier_generators(8)
    assert gens and all(sub.contains(g) and g.word for g in gens)


def test_membership_only_subgroup_still_tests_membership():
    sys = right_angled_polygon(5)
    sub = membership_subgroup(sys, 5)
    assert not sub.enumerated and sub.schreier_generators() == []
    words = sub.power_elements(ball(sys, 2).elements[1:], limit=4)
    assert words and all(sub.contains(w) for w in words)


def test_index_identity_exact_on_finite_group():
    sys = named_system("B3")
    sub = congruence_subgroup(sys, 3)
    report = index_identity(sub, ball(sys, 20))
    assert report["exact"] and report["passed"] and report["product"] == 48


def test_trivial_kernel_gives_singleton_orbits():
    sys = named_system("A3")
    sub = congruence_subgroup(sys, 5)
    inv = wall_inventory(sys, 10)
    orbits = wall_orbits(sub, inv)
    assert len(orbits) == len(inv) == 6 and all(len(o) == 1 for o in orbits)


def test_rank_one_single_orbit():
    sys = CoxeterSystem([[1]])
    sub = congruence_subgroup(sys, 3)
    orbits = wall_orbits(sub, wall_inventory(sys, 3))
    assert len(orbits) == 1


def test_orbit_ids_ordered_by_smallest_member():
    sys = triangle(2, 3, 7)
    orbits = wall_orbits(congruence_subgroup(sys, 3), wall_inventory(sys, 6))
    assert [o.walls[0] for o in orbits] == sorted(o.walls[0] for o in orbits)
    assert sorted(w for o in orbits for w in o.walls) == list(range(sum(len(o) for o in orbits)))


def _line_position(word):
    # chambers of I2(inf) sit on a line: e at 0, words starting with s to the right
    return len(word) if word[:1] == (S,) else -len(word)


def test_infinite_dihedral_orbits_follow_index(inf_run):
    # W0 = <(st)^3> translates the line by 6 chambers, so the six orbits are the
    # wall positions modulo 6
    assert len(inf_run.orbits) == 6
    inv = inf_run.inventory
    classes = []
    for o in inf_run.orbits:
        spots = set()
        for w in o.walls:
            for i, j in inv.walls[w].crossed_edges:
                a, b = (_line_position(inv.ball.elements[x].word) for x in (i, j))
                spots.add((a + b) % 12)
        assert len(spots) == 1
        classes.append(spots.pop())
    assert len(set(classes)) == 6


def test_i2_3_single_wall_trees():
    sys = dihedral(3)
    inv = wall_inventory(sys, 5)
    for w in range(len(inv)):
        tree = build_tree(WallOrbit(w, (w,)), inv)
        assert tree.n_vertices == 2 and len(tree.edges) == 1


def test_infinite_dihedral_single_wall_tree_is_a_path():
    inv = wall_inventory(INF2, 6)
    tree = build_tree(WallOrbit(0, (0,)), inv)
    assert tree.n_vertices == 2 and tree.is_acyclic()
    orbit = WallOrbit(0, tuple(range(len(inv))))
    line = build_tree(orbit, inv)
    assert line.n_vertices == len(inv.ball)
    degrees = sorted(len(line.neighbours(v)) for v in range(line.n_vertices))
    assert degrees[:2] == [1, 1] and set(degrees[2:]) == {2}


def test_empty_orbit_is_one_vertex():
    tree = build_tree(WallOrbit(0, ()), wall_inventory(triangle(2, 3, 7), 4))
    assert tree.n_vertices == 1 and tree.edges == []


def test_crossing_walls_make_a_cycle():
    # the walls of s and t in I2(3) cross; cutting both leaves a 4-cycle of quadrants
    inv = wall_inventory(dihedral(3), 5)
    pair = (inv.find(inv.keys[0]), inv.find(inv.keys[1]))
    with pytest.raises(TreeViolation, match="cycle"):
        build_tree(WallOrbit(0, tuple(sorted(pair))), inv)


@pytest.mark.parametrize("sys, prime, radius", [(right_angled_polygon(5), 3, 5), (triangle(2, 3, 7), 3, 8),
                                                (INF2, 5, 10)], ids=["pentagon", "237", "I2(inf)"])
def test_fast_trees_match_direct_construction(sys, prime, radius):
    sub = congruence_subgroup(sys, prime)
    inv = wall_inventory(sys, radius)
    orbits = wall_orbits(sub, inv)
    fast, _ = build_trees(orbits, inv)
    step = max(1, len(orbits) // 60)
    for orbit in orbits[::step]:
        direct = build_tree(orbit, inv)
        tree = fast[orbit.id]
        assert tree.n_vertices == direct.n_vertices
        assert [tree.vertex_of(i) for i in range(len(inv.ball))] == direct.component
        assert tree.edges == direct.edges
        assert list(tree.interior) == list(direct.interior)


def test_dichotomy_examples(inf_run):
    sub, inv = inf_run.subgroup, inf_run.inventory
    assert check_dichotomy(sub, inv, gammas=[()]).to_json()["equal"] == len(inv)
    finite = named_system("B3")
    report = check_dichotomy(congruence_subgroup(finite, 3), wall_inventory(finite, 20))
    assert report.passed
    gamma = power(INF2, (S, T), 3)
    h = wall_of(INF2, (), S)
    moved = wall_of(INF2, gamma, S)
    assert wall_relation(INF2, h, moved) == DISJOINT


def test_properness_examples(inf_run):
    proj = inf_run.projection
    ball_ = inf_run.inventory.ball
    assert proj.d_sum(0) == 0
    assert proj.d_sum(ball_.index((S,))) == 1
    assert check_properness(proj).passed


def test_free_action_linear_growth(inf_run):
    sub, proj = inf_run.subgroup, inf_run.projection
    gamma = power(INF2, (S, T), 3).word
    report = check_free_action(sub, proj, gammas=[gamma])
    assert report.passed
    ball_ = proj.inventory.ball
    for j in (1, 2):
        w = power(INF2, gamma, j)
        if w in ball_:
            assert proj.d_sum(ball_.index(w)) == 6 * j


def test_finite_group_checks_are_vacuous():
    run = run_trees(named_system("A3"), 10, prime=5)
    assert run.passed and len(run.orbits) == 6


def test_equivariance_on_pentagon():
    sys = right_angled_polygon(5)
    sub = congruence_subgroup(sys, 3)
    inv = wall_inventory(sys, 5)
    proj = product_projection(sub, inv)
    gammas = [element(sys, w) for w in conjugators(sub, inv)[:24]]
    report = check_equivariance(sub, proj, gammas)
    assert report.passed and report.checked > 0


def test_conjugators_are_kernel_elements():
    sys = triangle(2, 3, 7)
    sub = congruence_subgroup(sys, 3)
    inv = wall_inventory(sys, 6)
    words = conjugators(sub, inv)
    assert words and all(sub.contains(w) for w in words)
    assert all(multiply(sys, w, ()).word for w in words)


def test_tree_exports(inf_run):
    tree = inf_run.projection.trees[0]
    dot = tree.to_dot(inf_run.inventory)
    assert dot.startswith("graph orbit0 {") and "--" in dot
    js = tree.to_json(inf_run.inventory)
    assert len(js["edge_labels"]) == len(js["edges"])
