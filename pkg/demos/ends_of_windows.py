"""Counting ends on finite windows.

Z, Z^2 and the 3-regular tree, with the reliability flag showing where the
window is too small to trust a count, and the collar-relative H^1 rank
next to the end count.
"""

from coarsegrp.ends import coarse_h1_rank, ends_estimate, grid_window, path_window, tree_window


def show(name, g, schedule, **h1):
    e = ends_estimate(g, schedule)
    rows = ", ".join(f"r={r}:{c}{'' if ok else '?'}" for r, c, ok in e.schedule)
    print(f"{name:10s} radius {g.radius:3d}  {rows}  -> {e.describe()}")
    if h1:
        rep = coarse_h1_rank(g, ends=e, **h1)
        print(f"{'':10s} relative H^1 rank {rep.rank} (ends - 1 check: {rep.consistent})")


show("Z", path_window(50), [1, 2, 4, 8, 16], scale=1)
show("Z^2", grid_window(30), [2, 4, 6, 8, 10])
show("Z^2 small", grid_window(10), [1, 2, 3], scale=2)
# '?' marks counts taken too close to the frontier
show("tree R=10", tree_window(10), range(1, 7))
show("tree R=18", tree_window(18), range(1, 7))
