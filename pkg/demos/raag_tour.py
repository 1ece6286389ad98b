"""Right-angled Artin groups: decomposition, the doubling embedding and the Kahler checker."""

from coxtrees import decompose, dj_embedding, parse_graph
from coxtrees.raag import complete_graph, cycle_graph, kahler_candidate_raag

path = parse_graph("v a\nv b\nv c\na b\nb c\n")
print("path a-b-c factors:", [f.vertices for f in decompose(path).factors])
print("5-cycle irreducible:", decompose(cycle_graph(5)).is_irreducible())

for g in (path, complete_graph(3)):
    emb = dj_embedding(g, radius=5)
    print(f"{g.order} vertices: relators ok={emb.relator_check['passed']}, "
          f"injective on ball={emb.injectivity['passed']}, index {emb.verified_index} "
          f"(expected {emb.expected_index})")

for n in (2, 3, 4):
    v = kahler_candidate_raag(complete_graph(n))
    print(f"K{n}: {v.verdict} ({v.reason})")
