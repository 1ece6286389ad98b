"""Euler characteristics and presentations of closed 2-orbifolds."""

from coxtrees import TwoOrbifold, euler_char, is_hyperbolic, orbifold_group_presentation

for orb in [TwoOrbifold(0, (2, 3, 7)), TwoOrbifold(0, (2, 3, 6)), TwoOrbifold(0, (3, 3, 3)),
            TwoOrbifold(1), TwoOrbifold(2), TwoOrbifold(1, (2,))]:
    pres = orbifold_group_presentation(orb)
    print(f"genus {orb.genus} cones {list(orb.cone_points)}: chi = {euler_char(orb)}, "
          f"hyperbolic={is_hyperbolic(orb)}, H1 = Z^{pres.abelian_rank} + torsion {list(pres.torsion)}")

print("(2,3,7) relators:", orbifold_group_presentation(TwoOrbifold(0, (2, 3, 7))).relator_strings())
