"""Walk through a handful of Coxeter systems: type, growth and a few words."""

from coxtrees import ball, classify, dihedral, element, named_system, right_angled_polygon, triangle
from coxtrees.exact_real import INF

SYSTEMS = {
    "H3": named_system("H3"),
    "affine-A2": named_system("affine-A2"),
    "I2(inf)": dihedral(INF),
    "(2,3,7) triangle": triangle(2, 3, 7),
    "right-angled pentagon": right_angled_polygon(5),
}

for label, sys in SYSTEMS.items():
    verdict = classify(sys)
    growth = ball(sys, 7).growth()
    print(f"{label:<22} {verdict.kind:<18} growth {growth}")

# normal forms pick the ShortLex-least reduced word
h3 = SYSTEMS["H3"]
for word in [(0, 1, 0, 1, 0, 1, 0, 1, 0, 1), (2, 0, 1, 2, 1), (0, 0, 1, 1)]:
    print(word, "->", element(h3, word).word)

# the longest element of H3 has length 15, the number of reflections
full = ball(h3, 20)
print("|W(H3)| =", len(full), "longest word length", max(len(w.word) for w in full.elements))
