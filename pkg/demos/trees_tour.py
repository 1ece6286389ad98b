"""Build the wall-orbit trees of a congruence subgroup and check the product embedding."""

from coxtrees import dihedral, right_angled_polygon, run_trees
from coxtrees.exact_real import INF

for label, sys, radius in [("I2(inf)", dihedral(INF), 12), ("pentagon", right_angled_polygon(5), 6)]:
    run = run_trees(sys, radius, prime=3)
    sub = run.subgroup
    print(f"{label}: W0 has index {sub.index} (mod 3 image), "
          f"{len(run.inventory)} walls in {len(run.orbits)} orbits")
    for report in run.reports:
        r = report.to_json()
        print(f"  {r['check']:<12} passed={r['passed']} checked={r['checked']} "
              f"violations={r['violations']} boundary={r['boundary_misses']}")

    # distance in the product of trees recovers word length
    proj = run.projection
    ball = run.inventory.ball
    for i in range(0, len(ball), max(1, len(ball) // 5)):
        w = ball.elements[i]
        print(f"  chamber {w.word}: sum of tree distances {proj.d_sum(i)}, length {len(w.word)}")

# the infinite dihedral group acts on a line; each orbit tree is a line too
run = run_trees(dihedral(INF), 8, prime=3)
print(run.projection.trees[0].to_dot(run.inventory))
