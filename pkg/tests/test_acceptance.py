"""Acceptance criteria 1-8.

Each test records a PASS/FAIL line (printed in the terminal summary) and
then asserts, so a failure is both visible in the summary and red.
"""

import random
import time
from fractions import Fraction
from pathlib import Path

import pytest
import yaml

from conftest import ACCEPTANCE
from coarsegrp.cli import render, run_task
from coarsegrp.complexes import cycle_complex, multiplication_complex
from coarsegrp.cosets import commensuration_witness, subgroup
from coarsegrp.ends import (coarse_h1_rank, ends_estimate, grid_window, path_window,
                            splitting_criterion, tree_window)
from coarsegrp.errors import RefusalError
from coarsegrp.gog import HNN, Amalgam, chi_amalgam, gogeuler_check, one_relator_chi
from coarsegrp.groups import ball, parse_group
from coarsegrp.homology import (INTEGERS, RATIONALS, all_equal, exhaustive_family,
                                family_complex, kunneth_check, mod, uct_check)
from coarsegrp.snf import smith_normal_form

import oracles
from test_groups import CATALOG, random_word, same_element

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def record(n, ok, detail):
    ACCEPTANCE[n] = (bool(ok), detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _kunneth_report(seed):
    cfg = yaml.safe_load((CONFIGS / "kunneth.yaml").read_text())
    code, rep = run_task(cfg, seed=seed)
    return code, rep


_REPORTS = {}


def test_criterion_1_snf_suite():
    rng = random.Random(20240601)
    t0 = time.perf_counter()
    bad = []
    nonsingular = 0
    for n in range(500):
        M = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(6)]
        r = smith_normal_form(M)
        nz = [d for d in r.diagonal if d]
        chain = all(b % a == 0 for a, b in zip(nz, nz[1:]))
        rank_ok = r.rank == oracles.fraction_rank(M)
        det = oracles.bareiss_det(M)
        det_ok = True
        if det:
            nonsingular += 1
            prod = 1
            for d in r.diagonal:
                prod *= d
            det_ok = prod == abs(det)
        if not (chain and rank_ok and det_ok):
            bad.append(n)
    dt = time.perf_counter() - t0
    record(1, not bad and dt < 10,
           f"500 matrices, {nonsingular} nonsingular, {len(bad)} failures, {dt:.2f} s (< 10 s)")


def test_criterion_2_kunneth():
    t0 = time.perf_counter()
    code, rep = _kunneth_report(7)
    dt = time.perf_counter() - t0
    _REPORTS["kunneth"] = render(rep, "json")
    res = rep["result"]
    torus = kunneth_check(cycle_complex(4), cycle_complex(4))
    torus_ok = all_equal(torus) and [str(v.lhs) for v in torus][:3] == ["Z", "Z^2", "Z"]
    tor = kunneth_check(multiplication_complex(2), multiplication_complex(2))
    tor_ok = all_equal(tor) and [str(v.lhs) for v in tor][:2] == ["Z/2", "Z/2"]
    ok = code == 0 and res["all_pass"] and torus_ok and tor_ok and dt < 120
    record(2, ok, f"{res['classes']} iso classes of {res['family_size']} complexes, "
                  f"{res['cases']} pair checks over {'/'.join(res['rings'])}, "
                  f"{len(res['failures'])} failures; C4xC4 = Z, Z^2, Z; x2 (x) x2 Tor ok; "
                  f"{dt:.1f} s (< 120 s)")


def test_criterion_3_uct():
    fails = 0
    cases = 0
    for r, m in exhaustive_family():
        C = family_complex(r, m)
        for t in (RATIONALS, mod(2), mod(3)):
            cases += 1
            fails += not all_equal(uct_check(C, t))
    record(3, fails == 0, f"{cases} complex/target checks, {fails} failures")


def test_criterion_4_ends():
    z = ends_estimate(path_window(50), [1, 2, 3, 4, 5])
    z2 = ends_estimate(grid_window(30), [2, 4, 6, 8, 10])
    tree = ends_estimate(tree_window(18), range(1, 7))
    want = [3 * 2 ** (r - 1) for r in range(1, 7)]
    tree_ok = tree.counts == want and all(ok for _, _, ok in tree.schedule)
    h1_z = coarse_h1_rank(path_window(20), ends=ends_estimate(path_window(20), [1, 2, 3]))
    g = grid_window(10)
    h1_z2 = coarse_h1_rank(g, scale=2, ends=ends_estimate(g, [1, 2, 3]))
    ok = (z.verdict == "exact" and z.value == 2 and z2.verdict == "one-end" and tree_ok
          and h1_z.rank == 1 and h1_z2.rank == 0 and h1_z.consistent and h1_z2.consistent)
    record(4, ok, f"e(Z) {z.describe()}; e(Z^2) {z2.describe()}; tree R=18 counts "
                  f"{tree.counts}; H1 ranks Z={h1_z.rank}, Z^2={h1_z2.rank}")


def test_criterion_5_splitting():
    times = []
    Z2 = parse_group("free_abelian(2)")
    t0 = time.perf_counter()
    r1 = splitting_criterion(Z2, subgroup(Z2, ["a"]), {"R": 10, "r_schedule": [1, 2, 3]})
    times.append(time.perf_counter() - t0)
    ok1 = r1.verdict == "splits" and [e["count"] for e in r1.ends_schedule] == [2, 2, 2]

    BS = parse_group("baumslag_solitar(1,2)")
    H = subgroup(BS, ["a"])
    t0 = time.perf_counter()
    r2 = splitting_criterion(BS, H)
    times.append(time.perf_counter() - t0)
    at2 = [e["count"] for e in r2.ends_schedule if e["r"] == 2]
    cert = commensuration_witness(BS, H, BS.gen("t"), 8)
    ok2 = r2.verdict == "splits" and at2 and at2[0] >= 3 and cert.index == 2

    Z = parse_group("free_abelian(1)")
    t0 = time.perf_counter()
    r3 = splitting_criterion(Z, subgroup(Z, ["a^2"]))
    times.append(time.perf_counter() - t0)
    ok3 = r3.verdict == "finite-index" and r3.index == 2

    F = parse_group("free(2)")
    t0 = time.perf_counter()
    try:
        splitting_criterion(F, subgroup(F, ["a"]))
        failing = None
    except RefusalError as exc:
        failing = exc.details["failing"]["conjugator"]
    times.append(time.perf_counter() - t0)
    ok4 = failing == "b"
    ok = ok1 and ok2 and ok3 and ok4 and max(times) < 30
    record(5, ok, f"Z2>Z {r1.verdict} {[e['count'] for e in r1.ends_schedule]}; "
                  f"BS(1,2)>a {r2.verdict} ends at r=2 {at2}, index at t {cert.index}; "
                  f"2Z<Z {r3.detail}; F2>a refused at g={failing}; "
                  f"slowest {max(times):.1f} s (< 30 s)")


def test_criterion_6_euler():
    bad = []
    zeros = set()
    for chi_H in range(-3, 0):
        for c in range(1, 5):
            for p in range(2, 7):
                for q in range(2, 7):
                    chk = gogeuler_check(chi_H, Amalgam(p, q, c))
                    if chk.ratio_sign > 0 or not isinstance(chk.chi_G, Fraction):
                        bad.append(("amalgam", p, q, c, chi_H))
                    if chk.chi_G == 0:
                        zeros.add(("amalgam", p, q))
            for p in range(1, 7):
                chk = gogeuler_check(chi_H, HNN(p, c))
                if chk.ratio_sign > 0:
                    bad.append(("hnn", p, c, chi_H))
                if chk.chi_G == 0:
                    zeros.add(("hnn", p))
    zeros_ok = zeros == {("amalgam", 2, 2), ("hnn", 1)}
    f2 = chi_amalgam(0, 0, 1)
    locus = {(n, m) for n in range(1, 21) for m in range(1, 21)
             if one_relator_chi(n, m).chi == 0}
    flagged = {(n, m) for n in range(1, 21) for m in range(1, 21)
               if one_relator_chi(n, m).outside_regime}
    locus_ok = locus == {(2, 1)} and flagged == {(1, m) for m in range(1, 21)}
    ok = not bad and zeros_ok and f2 == -1 and isinstance(f2, Fraction) and locus_ok
    record(6, ok, f"{len(bad)} sign violations; zero cases {sorted(zeros)}; chi(F2) = {f2}; "
                  f"one-relator zero locus {sorted(locus)} plus {len(flagged)} flagged n=1")


def test_criterion_7_group_core():
    disagreements = 0
    for gid in CATALOG:
        G = parse_group(gid)
        rng = random.Random(sum(map(ord, gid)))
        for _ in range(1000):
            w1 = random_word(rng, G.rank, 10)
            if rng.random() < 0.5:
                cut = rng.randint(0, len(w1))
                x = random_word(rng, G.rank, 3)
                w2 = w1[:cut] + x + tuple(-y for y in reversed(x)) + w1[cut:]
            else:
                w2 = random_word(rng, G.rank, 10)
            disagreements += (G.element(w1) == G.element(w2)) != same_element(gid, w1, w2)
    b2 = len(ball(parse_group("free(2)"), 2))
    BS = parse_group("baumslag_solitar(1,2)")
    a, t = BS.gen("a"), BS.gen("t")
    rel = all(t * a ** k * t.inverse() == a ** (2 * k) for k in range(9))
    ok = disagreements == 0 and b2 == 17 and rel
    record(7, ok, f"{len(CATALOG)} groups x 1000 pairs, {disagreements} disagreements; "
                  f"|B2(F2)| = {b2}; t a^k t^-1 = a^2k for k <= 8: {rel}")


def test_criterion_8_determinism():
    names = sorted(p.name for p in CONFIGS.glob("*.yaml"))
    first, second = {}, {}
    for out in (first, second):
        for name in names:
            cfg = yaml.safe_load((CONFIGS / name).read_text())
            if name == "kunneth.yaml" and "kunneth" in _REPORTS and out is first:
                out[name] = _REPORTS["kunneth"]
                continue
            out[name] = render(run_task(cfg, seed=7)[1], "json")
    same = [n for n in names if first[n] == second[n]]
    record(8, len(same) == len(names),
           f"{len(same)}/{len(names)} shipped task reports byte-identical across two runs")
