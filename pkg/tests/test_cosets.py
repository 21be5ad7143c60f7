import random

import pytest
from hypothesis import given, settings, strategies as st

from coarsegrp.cosets import (CosetDistances, DistortionProfile, coset_hausdorff,
                              commensuration_witness, finite_index_check, hausdorff_distance,
                              proper_inverse, quotient_window, require_almost_normal, subgroup,
                              verify_bundle_axioms)
from coarsegrp.errors import ContractError, InputError, RefusalError, WindowError
from coarsegrp.groups import ball, parse_group

import oracles

EXACT_PAIRS = [
    ("free_abelian(2)", ["a"]),
    ("free_abelian(3)", ["a b", "c^2"]),
    ("baumslag_solitar(1,2)", ["a"]),
    ("baumslag_solitar(1,3)", ["a^2"]),
    ("free(2)", ["a^3"]),
    ("direct_product(free(2),free_abelian(1))", ["a_2"]),
    ("free_product(free(1),free(1))", ["a_1"]),
    ("euclidean_triangle_333", ["a b c b"]),
]


@pytest.fixture(scope="module")
def bs_window():
    G = parse_group("baumslag_solitar(1,2)")
    return quotient_window(G, subgroup(G, ["a"]), 6)


@pytest.fixture(scope="module")
def z2_window():
    G = parse_group("free_abelian(2)")
    return quotient_window(G, subgroup(G, ["a"]), 10)


# -- distortion profiles -----------------------------------------------------

def test_proper_inverse_examples():
    assert proper_inverse(lambda x: x, 7) == pytest.approx(7)
    assert proper_inverse(lambda x: x * x, 9) == pytest.approx(3)
    assert proper_inverse({0: 0, 1: 5, 2: 5, 3: 9}, 5) == 2
    assert proper_inverse(lambda x: x + 2, 1) == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=8), st.integers(0, 40))
def test_proper_inverse_implications(steps, R):
    # table of a nondecreasing phi; both implications of the inverse hold on table points
    ys = [sum(steps[:i + 1]) for i in range(len(steps))]
    table = dict(enumerate(ys))
    inv = proper_inverse(table, R)
    for x, y in table.items():
        if y <= R:
            assert x <= inv
        if x > inv:
            assert y > R


def test_distortion_profile_tail():
    p = DistortionProfile(((0, 0), (1, 2), (2, 4)), ((0, 0), (1, 1)), tail="linear")
    assert p.evaluate("eta", 1.5) == 2
    assert p.evaluate("eta", 4) == 8
    with pytest.raises(ValueError):
        DistortionProfile(((0, 0),), ((0, 0),)).evaluate("phi", 3)


# -- coset keys --------------------------------------------------------------

@pytest.mark.parametrize("gid,gens", EXACT_PAIRS)
def test_coset_keys_agree_on_representatives(gid, gens):
    G = parse_group(gid)
    H = subgroup(G, gens)
    assert H.coset_oracle_kind == "exact"
    rng = random.Random(1)
    letters = G.letter_order()
    n = 10**4 // len(EXACT_PAIRS)
    for _ in range(n):
        g = G.element(tuple(rng.choice(letters) for _ in range(rng.randint(0, 8))))
        h = G.identity()
        for _ in range(rng.randint(1, 4)):
            x = rng.choice(H.generators)
            h = h * (x if rng.random() < 0.5 else x.inverse())
        assert H.coset_key(g) == H.coset_key(g * h)


@pytest.mark.parametrize("gid,gens", EXACT_PAIRS)
def test_coset_keys_separate(gid, gens):
    # distinct keys must come from distinct cosets: g^-1 k is not in H
    G = parse_group(gid)
    H = subgroup(G, gens)
    elems = list(ball(G, 3))
    for g in elems[:30]:
        for k in elems:
            same = H.coset_key(g) == H.coset_key(k)
            assert same == H.contains(g.inverse() * k)


def test_bs_membership_matches_matrix_oracle():
    G = parse_group("baumslag_solitar(1,2)")
    H = subgroup(G, ["a"])
    for g in ball(G, 5):
        M = oracles.bs1n_matrix(g.letters(), 2)
        # <a> is exactly the unipotent matrices with integer translation
        in_h = M[0][0] == 1 and M[0][1].denominator == 1
        assert H.contains(g) == in_h


def test_fallback_oracle_is_flagged():
    G = parse_group("free(2)")
    H = subgroup(G, ["a", "b a b^-1"])
    assert H.coset_oracle_kind == "window-approximate"
    with pytest.raises(ContractError):
        H.coset_key(G.identity())


def test_generators_must_belong():
    with pytest.raises(InputError):
        subgroup(parse_group("free(2)"), [parse_group("free(3)").gen("c")])


# -- Hausdorff distances -------------------------------------------------------

def test_hausdorff_trivial_examples():
    Z = parse_group("free_abelian(1)")
    w = ball(Z, 6)
    a = Z.gen("a")
    est = hausdorff_distance([Z.identity()], [a ** 3], w)
    assert (est.value, est.converged) == (3, True)
    assert hausdorff_distance([a], [a], w).value == 0
    with pytest.raises(WindowError):
        hausdorff_distance([a ** 20], [a], w)


def test_bs_adjacent_cosets_at_distance_two():
    G = parse_group("baumslag_solitar(1,2)")
    H = subgroup(G, ["a"])
    t = G.gen("t")
    assert coset_hausdorff(H, G.identity(), t) == 2
    # independent check on a in H: nothing within one step of a lies in tH,
    # something within two steps does
    a = G.gen("a")
    one_step = [a * s for s in (a, t, a.inverse(), t.inverse())]
    assert not any(H.coset_key(y) == H.coset_key(t) for y in one_step + [a])
    two_step = [a * s * u for s in (a, t, a.inverse(), t.inverse())
                for u in (a, t, a.inverse(), t.inverse())]
    assert any(H.coset_key(y) == H.coset_key(t) for y in two_step)


def test_windowed_estimate_bounds_exact_value():
    G = parse_group("baumslag_solitar(1,2)")
    H = subgroup(G, ["a"])
    est = hausdorff_distance(H.contains, lambda g: H.coset_key(g) == H.coset_key(G.gen("t")),
                             ball(G, 6))
    assert est.value >= 2


# -- quotient windows ----------------------------------------------------------

def test_z2_window_is_a_segment(z2_window):
    qw = z2_window
    assert len(qw) == 21
    second = [g.normal_form[1] for g in qw.representatives]
    assert sorted(second) == list(range(-10, 11))
    for i, m in enumerate(second):
        for j, n in enumerate(second):
            assert qw.distance[i][j] == abs(m - n)
    assert qw.all_converged()


def test_finite_index_window_is_bounded():
    Z = parse_group("free_abelian(1)")
    qw = quotient_window(Z, subgroup(Z, ["a^2"]), 5)
    assert len(qw) == 2
    assert max(max(r) for r in qw.distance) <= 1
    v = finite_index_check(qw)
    assert v.finite and v.index_bound == 2
    assert v.label == "finite-index (index 2)"


def test_metric_axioms_on_converged_triples(bs_window):
    qw = bs_window
    n = len(qw)
    D, C = qw.distance, qw.converged
    for i in range(n):
        assert D[i][i] == 0
        for j in range(n):
            assert D[i][j] == D[j][i]
            if i != j:
                assert D[i][j] > 0
    rng = random.Random(3)
    for _ in range(4000):
        i, j, k = (rng.randrange(n) for _ in range(3))
        if C[i][j] and C[j][k] and C[i][k]:
            assert D[i][k] <= D[i][j] + D[j][k]


def test_bs_window_counts_and_tree(bs_window):
    qw = bs_window
    assert qw.coset_counts() == [1, 3, 6, 12, 22, 38, 66]
    edges = qw.edges(2, extended=True)
    assert len(edges) == len(qw) - 1
    assert qw.edges(1, extended=True) == []


def test_monotonicity_in_R():
    G = parse_group("baumslag_solitar(1,2)")
    H = subgroup(G, ["a"])
    small = quotient_window(G, H, 4)
    large = quotient_window(G, H, 5)
    pos = {c: i for i, c in enumerate(large.cosets)}
    for i, ci in enumerate(small.cosets):
        for j, cj in enumerate(small.cosets):
            d_new = large.distance[pos[ci]][pos[cj]]
            assert d_new >= small.distance[i][j]
            if small.converged[i][j]:
                assert d_new == small.distance[i][j]


def test_approximate_window_runs():
    G = parse_group("free(2)")
    H = subgroup(G, ["a", "b a b^-1"])
    qw = quotient_window(G, H, 2)
    assert not qw.exact
    assert len(qw) >= 2
    assert all(qw.distance[i][i] == 0 for i in range(len(qw)))


def test_quotient_window_bad_radius():
    G = parse_group("free_abelian(2)")
    with pytest.raises(InputError):
        quotient_window(G, subgroup(G, ["a"]), 2, margin=3)


def test_window_json_and_edges(z2_window):
    import json
    doc = json.loads(z2_window.to_json())
    assert doc["R"] == 10 and doc["oracle"] == "exact"
    assert len(z2_window.edge_list(1).splitlines()) == 20


def test_schreier_lengths_match_balls():
    G = parse_group("baumslag_solitar(1,2)")
    H = subgroup(G, ["a"])
    cd = CosetDistances(H)
    b = ball(G, 5)
    best = {}
    for g in b:
        k = H.coset_key(g)
        best[k] = min(best.get(k, 99), b.length(g))
    for k, d in best.items():
        assert cd.length_of_key(k) == d


# -- commensuration ------------------------------------------------------------

def test_normal_subgroup_index_one():
    G = parse_group("free_abelian(2)")
    H = subgroup(G, ["a"])
    for g in ("b", "a b^-1", "b^3"):
        c = commensuration_witness(G, H, G.element(g), 4)
        assert (c.verdict, c.index) == ("exact-finite", 1)


def test_bs_index_two_at_t():
    G = parse_group("baumslag_solitar(1,2)")
    H = subgroup(G, ["a"])
    c = commensuration_witness(G, H, G.gen("t"), 8)
    assert (c.verdict, c.index) == ("exact-finite", 2)
    c_inv = commensuration_witness(G, H, G.gen("t").inverse(), 8)
    assert c_inv.index == 1


def test_free_group_lower_bound_grows():
    G = parse_group("free(2)")
    H = subgroup(G, ["a"])
    bounds = [commensuration_witness(G, H, G.gen("b"), R).index_lower_bound for R in (2, 4, 6)]
    assert bounds == sorted(bounds) and bounds[0] < bounds[-1]
    c = commensuration_witness(G, H, G.gen("b"), 6)
    assert c.verdict == "no-bound-up-to-radius" and c.radius == 6


def test_refusal_names_failing_generator():
    G = parse_group("free(2)")
    with pytest.raises(RefusalError) as info:
        require_almost_normal(G, subgroup(G, ["a"]), 6)
    assert info.value.details["failing"]["conjugator"] == "b"
    assert info.value.precondition == "H almost normal in G"


# -- finite index and bundle axioms --------------------------------------------

def test_unbounded_quotients(z2_window, bs_window):
    assert not finite_index_check(z2_window).finite
    v = finite_index_check(bs_window)
    assert not v.finite
    assert v.label == "unbounded-at-radius 6"


def test_bundle_axioms_z2(z2_window):
    rep = verify_bundle_axioms(z2_window)
    assert (rep.K, rep.A) == (1, 0)
    assert rep.violations == []
    assert [y for _, y in rep.distortion] == list(range(11))
    assert not rep.superlinear


def test_bundle_axioms_bs_superlinear():
    G = parse_group("baumslag_solitar(1,2)")
    qw = quotient_window(G, subgroup(G, ["a"]), 8)
    rep = verify_bundle_axioms(qw)
    assert rep.K >= 1 and rep.violations == []
    assert rep.superlinear
    # a^(2^k) has length 2k + 2 for k >= 1, so the table doubles every two steps
    d = dict(rep.distortion)
    assert d[8] == 16 and d[6] == 8


def test_bundle_axioms_finite_index():
    Z = parse_group("free_abelian(1)")
    qw = quotient_window(Z, subgroup(Z, ["a^2"]), 6)
    rep = verify_bundle_axioms(qw)
    assert rep.fiber_spread <= 1


def test_bundle_axioms_need_exact_oracle():
    G = parse_group("free(2)")
    qw = quotient_window(G, subgroup(G, ["a", "b a b^-1"]), 2)
    with pytest.raises(ContractError):
        verify_bundle_axioms(qw)


def test_bundle_axioms_refuse_unconverged():
    G = parse_group("free(2)")
    qw = quotient_window(G, subgroup(G, ["a^2"]), 3)
    # these coset distances never stabilize, and the fit must not silently use them
    qw.converged = [[False] * len(qw) for _ in range(len(qw))]
    for i in range(len(qw)):
        qw.converged[i][i] = True
    with pytest.raises(ContractError):
        verify_bundle_axioms(qw)
