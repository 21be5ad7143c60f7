"""The splitting report on the four reference pairs."""

from coarsegrp.cosets import subgroup
from coarsegrp.ends import splitting_criterion
from coarsegrp.errors import RefusalError
from coarsegrp.groups import parse_group

CASES = [
    ("free_abelian(2)", ["a"], {"R": 10, "r_schedule": [1, 2, 3]}),
    ("baumslag_solitar(1,2)", ["a"], {}),
    ("free_abelian(1)", ["a^2"], {}),
    ("free(2)", ["a"], {}),
]

for gid, gens, params in CASES:
    G = parse_group(gid)
    H = subgroup(G, gens)
    try:
        rep = splitting_criterion(G, H, params)
    except RefusalError as exc:
        bad = exc.details["failing"]
        print(f"{gid} > <{', '.join(gens)}>: refused, index unbounded up to radius "
              f"{bad['radius']} at g = {bad['conjugator']}")
        continue
    counts = [e["count"] for e in rep.ends_schedule]
    print(f"{gid} > <{', '.join(gens)}>: {rep.verdict} ({rep.detail}) counts {counts}")
