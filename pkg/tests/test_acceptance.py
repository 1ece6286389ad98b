"""Acceptance criteria, one test each; every test logs a PASS/FAIL line."""

import time
from fractions import Fraction

import pytest

from coxtrees import cli
from coxtrees.coxeter_core import AFFINE, INDEFINITE, classify, dihedral, named_system, right_angled_polygon, triangle
from coxtrees.elements import ball
from coxtrees.exact_real import INF
from coxtrees.invariants import (
    classification_agreement,
    faithfulness,
    representation_soundness,
    wall_length_identity,
)
from coxtrees.orbifold import TwoOrbifold, euler_char
from coxtrees.raag import (
    EUCLIDEAN,
    FAIL,
    PASS,
    SURFACE,
    all_graphs,
    complete_graph,
    dj_embedding,
    kahler_candidate_coxeter,
    kahler_candidate_raag,
    path_graph,
)
from coxtrees.wall_trees import check_dichotomy, congruence_subgroup, run_trees, wall_inventory
from oracles import order_from_degrees, orbifold_chi

SYSTEMS = {
    "I2(3)": dihedral(3),
    "I2(4)": dihedral(4),
    "I2(5)": dihedral(5),
    "I2(6)": dihedral(6),
    "I2(inf)": dihedral(INF),
    "A3": named_system("A3"),
    "B3": named_system("B3"),
    "H3": named_system("H3"),
    "affine-A2": named_system("affine-A2"),
    "(2,3,7)": triangle(2, 3, 7),
    "pentagon": right_angled_polygon(5),
}
INFINITE = ["I2(inf)", "affine-A2", "(2,3,7)", "pentagon"]
TREE_SYSTEMS = ["I2(inf)", "pentagon", "(2,3,7)"]
TREE_RADIUS = 8
PRIMES = (3, 5)

_runs: dict = {}


def tree_run(name: str, prime: int):
    key = (name, prime)
    if key not in _runs:
        _runs[key] = run_trees(SYSTEMS[name], TREE_RADIUS, prime=prime)
    return _runs[key]


def test_1_representation_soundness(record):
    start = time.perf_counter()
    failed = [n for n, s in SYSTEMS.items() if not representation_soundness(s).passed]
    elapsed = time.perf_counter() - start
    ok = record(1, "representation soundness", not failed and elapsed < 10,
                f"{len(SYSTEMS)} systems, {elapsed:.2f}s, failed={failed}")
    assert ok


def test_2_faithfulness(record):
    mismatches = {}
    sizes = {}
    for name, sys in SYSTEMS.items():
        radius = 8 if name in INFINITE else 40
        report = faithfulness(sys, radius)
        sizes[name] = report.checked
        if not report.passed:
            mismatches[name] = report.violations
    ok = record(2, "faithfulness at ball scale", not mismatches,
                f"elements={sum(sizes.values())}, mismatches={mismatches}")
    assert ok


def test_3_finite_orders(record):
    cases = {"A3": 24, "B3": 48, "H3": 120}
    cases.update({f"I2({m})": 2 * m for m in (3, 4, 5, 6)})
    bad = []
    for name, expected in cases.items():
        b = ball(SYSTEMS[name], 40)
        if not (b.exhausted and len(b) == expected == order_from_degrees(name)):
            bad.append((name, len(b)))
    ok = record(3, "finite orders vs product of degrees", not bad, f"bad={bad}")
    assert ok


def test_4_classification_agreement(record):
    systems = dict(SYSTEMS, **{"(3,3,3)": triangle(3, 3, 3)})
    disagreements = [n for n, s in systems.items() if not classification_agreement(s).passed]
    kinds_ok = (classify(triangle(2, 3, 7)).kind == INDEFINITE
                and classify(triangle(3, 3, 3)).kind == AFFINE
                and classify(dihedral(INF)).kind == AFFINE)
    ok = record(4, "classification agreement", not disagreements and kinds_ok,
                f"disagreements={disagreements}, named kinds ok={kinds_ok}")
    assert ok


def test_5_wall_length_identity(record):
    failures = {}
    checked = 0
    for name in INFINITE:
        report = wall_length_identity(SYSTEMS[name], 8)
        checked += report.checked
        if not report.passed:
            failures[name] = report.violations
    ok = record(5, "wall/length identity at radius 8", not failures,
                f"elements={checked}, failures={failures}")
    assert ok


def test_6_dichotomy(record):
    counts = {}
    crosses = 0
    for name in INFINITE:
        if name in TREE_SYSTEMS:
            report = next(r for r in tree_run(name, 3).reports if r.name == "dichotomy")
        else:
            sys = SYSTEMS[name]
            report = check_dichotomy(congruence_subgroup(sys, 3), wall_inventory(sys, TREE_RADIUS))
        counts[name] = report.checked
        crosses += report.violations
    ok = record(6, "dichotomy: Equal or Disjoint", crosses == 0 and min(counts.values()) >= 10_000,
                f"pairs={counts}, cross={crosses}")
    assert ok


@pytest.mark.parametrize("name", TREE_SYSTEMS)
@pytest.mark.parametrize("prime", PRIMES)
def test_7_trees_and_d_sum(record, name, prime):
    run = tree_run(name, prime)
    reports = {r.name: r for r in run.reports}
    trees, proper = reports["tree"], reports["properness"]
    ok = record(7, f"trees and d-sum, {name} p={prime} R={TREE_RADIUS}",
                trees.passed and proper.passed and proper.checked > 0,
                f"orbits={len(run.orbits)}, interior chambers={proper.checked}, "
                f"violations={trees.violations + proper.violations}, boundary misses={proper.boundary}")
    assert ok


@pytest.mark.parametrize("name", TREE_SYSTEMS)
def test_8_free_action(record, name):
    report = next(r for r in tree_run(name, 3).reports if r.name == "free_action")
    ok = record(8, f"free action evidence, {name}", report.passed and report.checked > 0,
                f"kernel elements={report.checked}, counterexamples={report.violations}")
    assert ok


def test_9_dj_embedding(record):
    start = time.perf_counter()
    graphs = [g for n in range(1, 5) for g in all_graphs(n)]
    bad = [g.to_text() for g in graphs if not dj_embedding(g, radius=6).passed]
    elapsed = time.perf_counter() - start
    ok = record(9, "DJ embedding on graphs with <= 4 vertices", not bad and elapsed < 60,
                f"graphs={len(graphs)}, {elapsed:.1f}s, failed={len(bad)}")
    assert ok


def test_10_kahler_checkers(record):
    chi = euler_char(TwoOrbifold(0, (2, 3, 7)))
    checks = {
        "K4": kahler_candidate_raag(complete_graph(4)).verdict == PASS,
        "K3": kahler_candidate_raag(complete_graph(3)).verdict == FAIL,
        "path": kahler_candidate_raag(path_graph(3)).verdict == FAIL,
        "(2,3,7)": [v.verdict for v in kahler_candidate_coxeter(triangle(2, 3, 7))] == [SURFACE],
        "affine-A2": [v.verdict for v in kahler_candidate_coxeter(named_system("affine-A2"))] == [EUCLIDEAN],
        "chi": chi == Fraction(-1, 42) == orbifold_chi(0, (2, 3, 7)),
    }
    failed = [k for k, v in checks.items() if not v]
    ok = record(10, "Kahler checkers and orbifold Euler characteristic", not failed,
                f"chi={chi}, failed={failed}")
    assert ok


def test_11_determinism(record):
    cfg = cli.RunConfig(command="verify", system="triangle(2,3,7)", radius=8, seed=11)
    first = cli.render_json(cli.run(cfg).report)
    second = cli.render_json(cli.run(cfg).report)
    ok = record(11, "verify is byte-identical across runs", first == second,
                f"{len(first)} bytes")
    assert ok
