"""Walk through the quotient of BS(1,2) by <a>.

Builds the window of cosets met by Ball(6), shows that neighbouring cosets
sit at Hausdorff distance 2, that the scale-2 graph is a tree branching
like the Bass-Serre tree, and how badly <a> is distorted.
"""

from coarsegrp.cosets import (commensuration_witness, coset_hausdorff, quotient_window,
                              subgroup, verify_bundle_axioms)
from coarsegrp.ends import ends_estimate, quotient_graph_window
from coarsegrp.groups import parse_group

G = parse_group("baumslag_solitar(1,2)")
H = subgroup(G, ["a"])
t = G.gen("t")

print("d(H, tH) =", coset_hausdorff(H, G.identity(), t))
for g in ("t", "t^-1", "a"):
    c = commensuration_witness(G, H, G.element(g), 8)
    print(f"[H : H cap gHg^-1] at g = {g}: {c.index} ({c.verdict})")

qw = quotient_window(G, H, 6)
print("cosets met by Ball(r):", qw.coset_counts())
edges = qw.edges(2, extended=True)
print(f"scale-2 graph: {len(qw)} cosets, {len(edges)} edges (a tree has {len(qw) - 1})")
print("scale-1 edges:", len(qw.edges(1, extended=True)))

g = quotient_graph_window(qw, 2)
e = ends_estimate(g, [1, 2])
print("components past B_r:", [(r, c) for r, c, _ in e.schedule], "->", e.describe())

# the distortion table needs a bigger window to look superlinear
rep = verify_bundle_axioms(quotient_window(G, H, 8))
print("K =", rep.K, " A =", rep.A)
print("max |h|_H over |h|_G <= r:", rep.distortion)
print("superlinear:", rep.superlinear)
