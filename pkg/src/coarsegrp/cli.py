"""Batch front end.

Usage::

    coarsegrp --config task.yaml [--task NAME] [--seed N] [--budget N]
              [--out PATH] [--format json|csv]

Exit codes: 0 success, 2 unreadable config or input, 3 contract or
refusal (reason written to the report), 4 budget exceeded (partial
results flagged).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
import tempfile

import yaml

from . import __version__
from .errors import BudgetExceeded, ContractError, InputError

TASKS = ("ball", "quotient", "ends", "split-report", "homology", "kunneth-check",
         "uct-check", "euler")
SCHEMA = "coarsegrp-report/1"
EXIT_OK, EXIT_PARSE, EXIT_CONTRACT, EXIT_BUDGET = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def build_parser():
    p = _Parser(prog="coarsegrp", description="Coarse-geometry computations on marked groups.")
    p.add_argument("--config", required=True, help="YAML task description")
    p.add_argument("--task", choices=TASKS, help="override the task named in the config")
    p.add_argument("--seed", type=int, help="seed for randomized parts (default 0)")
    p.add_argument("--budget", type=int, help="node budget for enumerations")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), help="report format (default json)")
    return p


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = yaml.safe_load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config: {exc}") from exc
    except yaml.YAMLError as exc:
        raise InputError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(cfg, dict):
        raise InputError("config must be a mapping")
    return cfg


def config_hash(cfg):
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# tasks


def _group(cfg):
    from .groups import parse_group
    if "group" not in cfg:
        raise InputError("config needs a 'group'")
    return parse_group(str(cfg["group"]))


def _subgroup(cfg, G):
    from .cosets import subgroup
    gens = cfg.get("subgroup")
    if gens is None:
        raise InputError("config needs a 'subgroup'")
    if isinstance(gens, str):
        gens = [g.strip() for g in gens.split(",")]
    return subgroup(G, [str(g) for g in gens])


def task_ball(cfg, params, ctx):
    from .groups import ball
    G = _group(cfg)
    R = int(params.get("radius", 2))
    b = ball(G, R, budget=ctx["budget"])
    out = {"group": G.catalog_id, "radius": R, "size": len(b),
           "layer_sizes": b.layer_sizes()}
    if params.get("list_elements", False):
        out["elements"] = [str(g) for g in b]
    return out


def task_quotient(cfg, params, ctx):
    from .cosets import finite_index_check, quotient_window
    G = _group(cfg)
    H = _subgroup(cfg, G)
    qw = quotient_window(G, H, int(params.get("R", 4)), int(params.get("margin", 1)),
                         budget=ctx["budget"])
    fi = finite_index_check(qw, int(params.get("finite_steps", 3)))
    scale = int(params.get("edge_scale", 1))
    return {"window": json.loads(qw.to_json()), "coset_count_schedule": qw.coset_counts(),
            "diameters": qw.diameters(), "finite_index": fi.label,
            "all_converged": qw.all_converged(),
            "edge_list": [list(e) for e in qw.edges(scale)], "edge_scale": scale}


def _window(spec, ctx):
    from .ends import cayley_window, grid_window, path_window, tree_window
    kind = spec.get("kind", "path")
    R = int(spec.get("R", 10))
    if kind == "path":
        return path_window(R)
    if kind == "grid":
        return grid_window(R)
    if kind == "tree":
        return tree_window(R, int(spec.get("degree", 3)))
    if kind == "cayley":
        from .groups import parse_group
        return cayley_window(parse_group(str(spec["group"])), R, budget=ctx["budget"])
    raise InputError(f"unknown window kind {kind!r}")


def task_ends(cfg, params, ctx):
    from .ends import coarse_h1_rank, ends_estimate
    g = _window(cfg.get("window", {}), ctx)
    sched = [int(r) for r in params.get("r_schedule", [1, 2, 3])]
    margin = params.get("margin")
    e = ends_estimate(g, sched, None if margin is None else int(margin))
    out = {"window": dict(cfg.get("window", {})), "vertices": len(g.vertices),
           "radius": g.radius, "ends": e.as_dict(), "describe": e.describe()}
    if "collar" in params:
        h1 = coarse_h1_rank(g, int(params["collar"]), int(params.get("h1_scale", 1)), ends=e)
        out["h1"] = {"rank": h1.rank, "consistent": h1.consistent, "scale": h1.scale,
                     "relative_f_vector": list(h1.relative_f_vector)}
    return out


def task_split(cfg, params, ctx):
    from .ends import splitting_criterion
    G = _group(cfg)
    H = _subgroup(cfg, G)
    report = splitting_criterion(G, H, params)
    out = report.as_dict()
    if "euler" in cfg:
        out["euler"] = task_euler({"euler": cfg["euler"]}, {}, ctx)
    return out


def _complex(spec):
    from .complexes import (algebraic_complex, cycle_complex, interval_complex,
                            multiplication_complex, point_complex, rips_complex)
    if isinstance(spec, str):
        spec = {"named": spec}
    if "named" in spec:
        name = str(spec["named"])
        if name == "point":
            return point_complex()
        if name == "interval":
            return interval_complex()
        if name.startswith("cycle"):
            return cycle_complex(int(name[5:].strip("()_ ") or spec.get("n", 4)))
        if name.startswith("times"):
            return multiplication_complex(int(name[5:].strip("()_ ") or spec.get("k", 2)))
        raise InputError(f"unknown named complex {name!r}")
    if "rips" in spec:
        r = spec["rips"]
        pts = [tuple(p) if isinstance(p, list) else p for p in r["points"]]
        return rips_complex(pts, r.get("r", 1), int(r.get("dim_cap", 3)))
    if "ranks" in spec:
        bounds = {int(k): v for k, v in (spec.get("boundaries") or {}).items()}
        return algebraic_complex([int(x) for x in spec["ranks"]], bounds)
    raise InputError("cannot read complex description")


def _ring(text):
    from .homology import RingSpec
    return RingSpec.parse(text)


def task_homology(cfg, params, ctx):
    from .homology import cohomology_c, homology
    C = _complex(cfg.get("complex", "point"))
    ring = _ring(params.get("ring", "Z"))
    collar = params.get("collar")
    out = {"ranks": list(C.ranks), "ring": ring.name,
           "homology": [h.invariants() for h in homology(C, ring)]}
    if params.get("cohomology", True):
        out["cohomology_c"] = [h.invariants() for h in cohomology_c(C, ring, collar)]
    return out


def _family_plan():
    from .homology import exhaustive_family, family_complex, iso_class_key
    fam = [family_complex(r, m) for r, m in exhaustive_family()]
    classes = {}
    for C in fam:
        classes.setdefault(iso_class_key(C), C)
    return fam, list(classes.values())


def task_kunneth(cfg, params, ctx):
    from .homology import all_equal, kunneth_check
    rings = [_ring(r) for r in params.get("rings", ["Z", "Q", "Z2", "Z3"])]
    if "complexes" in cfg:
        C, D = (_complex(x) for x in cfg["complexes"])
        return {"rings": [r.name for r in rings],
                "verdicts": {r.name: [v.as_dict() for v in kunneth_check(C, D, r)]
                             for r in rings}}
    fam, reps = _family_plan()
    rng = random.Random(ctx["seed"])
    n_random = int(params.get("random_pairs", 200))
    pairs = []
    if params.get("class_pairs", True):
        pairs = [(i, j) for i in range(len(reps)) for j in range(len(reps))]
    sample = [(rng.randrange(len(fam)), rng.randrange(len(fam))) for _ in range(n_random)]
    fails = []
    cases = 0
    for ring in rings:
        for i, j in pairs:
            cases += 1
            if not all_equal(kunneth_check(reps[i], reps[j], ring)):
                fails.append({"ring": ring.name, "classes": [i, j]})
        for i, j in sample:
            cases += 1
            if not all_equal(kunneth_check(fam[i], fam[j], ring)):
                fails.append({"ring": ring.name, "members": [i, j]})
    return {"family_size": len(fam), "classes": len(reps), "random_pairs": sample,
            "rings": [r.name for r in rings], "cases": cases, "failures": fails,
            "all_pass": not fails}


def task_uct(cfg, params, ctx):
    from .homology import all_equal, uct_check
    targets = [_ring(r) for r in params.get("targets", ["Q", "Z2", "Z3"])]
    if "complex" in cfg:
        C = _complex(cfg["complex"])
        return {"verdicts": {t.name: [v.as_dict() for v in uct_check(C, t)] for t in targets}}
    fam, _ = _family_plan()
    fails = []
    for t in targets:
        for i, C in enumerate(fam):
            if not all_equal(uct_check(C, t)):
                fails.append({"target": t.name, "member": i})
    return {"family_size": len(fam), "targets": [t.name for t in targets],
            "cases": len(fam) * len(targets), "failures": fails, "all_pass": not fails}


def task_euler(cfg, params, ctx):
    from .gog import (GraphOfGroups, chi_amalgam, chi_graph, chi_hnn, eulerchar_report,
                      gogeuler_check, one_relator_chi, parse_shape)
    spec = cfg.get("euler")
    if not isinstance(spec, dict):
        raise InputError("config needs an 'euler' mapping")
    out = {}
    if "one_relator" in spec:
        o = spec["one_relator"]
        r = one_relator_chi(int(o["n"]), int(o.get("m", 1)))
        out["one_relator"] = {"chi": str(r.chi), "outside_regime": r.outside_regime}
        if "chi_H" in o:
            out["classification"] = eulerchar_report(r.chi, o["chi_H"],
                                                     parse_shape(o.get("shape"))).as_dict()
        elif r.chi == 0:
            out["classification"] = {"classification": "chi-zero",
                                     "detail": "chi(G) = 0 with n >= 2 forces n = 2, m = 1"}
        else:
            out["classification"] = {"classification": "outside-regime" if r.outside_regime
                                     else "negative", "detail": f"chi(G) = {r.chi}"}
    if "amalgam" in spec:
        a = spec["amalgam"]
        out["chi_amalgam"] = str(chi_amalgam(a["a"], a["b"], a["c"]))
    if "hnn" in spec:
        h = spec["hnn"]
        out["chi_hnn"] = str(chi_hnn(h["a"], h["c"]))
    if "graph" in spec:
        g = spec["graph"]
        gog = GraphOfGroups.build([(v["label"], v["chi"]) for v in g["vertices"]],
                                  [(e["ends"], e["chi"], e.get("indices", ["equal", "equal"]))
                                   for e in g["edges"]])
        out["chi_graph"] = str(chi_graph(gog))
        out["reduced"] = gog.reduced
    if "check" in spec:
        c = spec["check"]
        out["check"] = gogeuler_check(c["chi_H"], parse_shape(c["shape"])).as_dict()
    if "report" in spec:
        r = spec["report"]
        out["report"] = eulerchar_report(r["chi_G"], r["chi_H"],
                                         parse_shape(r.get("shape"))).as_dict()
    if not out:
        raise InputError("euler section names no computation")
    return out


HANDLERS = {"ball": task_ball, "quotient": task_quotient, "ends": task_ends,
            "split-report": task_split, "homology": task_homology,
            "kunneth-check": task_kunneth, "uct-check": task_uct, "euler": task_euler}


# ---------------------------------------------------------------------------
# output


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, (list, tuple)):
        if not obj:
            yield prefix, "[]"
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(obj) if not isinstance(obj, str) else obj


def render(report, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in _flatten(report):
            w.writerow([k, v])
        return buf.getvalue()
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


def write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".coarsegrp-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run_task(cfg, task=None, seed=None, budget=None):
    """Run one task; returns ``(exit_code, report_dict)``."""
    from .groups import DEFAULT_BUDGET
    cfg = dict(cfg)
    task = task or cfg.get("task")
    if task not in HANDLERS:
        raise InputError(f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    cfg["task"] = task
    if seed is not None:
        cfg["seed"] = seed
    if budget is not None:
        cfg["budget"] = budget
    seed = int(cfg.get("seed", 0))
    budget = int(cfg.get("budget", DEFAULT_BUDGET))
    params = dict(cfg.get("params") or {})
    report = {"schema": SCHEMA, "version": __version__, "task": task,
              "config_hash": config_hash(cfg), "seed": seed, "budget": budget}
    ctx = {"seed": seed, "budget": budget}
    try:
        try:
            report["result"] = HANDLERS[task](cfg, params, ctx)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"bad {task} config: {exc!r}") from exc
        report["status"] = "ok"
        return EXIT_OK, report
    except BudgetExceeded as exc:
        report["status"] = "budget-exceeded"
        report["error"] = {"message": str(exc), "completed": exc.completed, "partial": True}
        return EXIT_BUDGET, report
    except ContractError as exc:
        report["status"] = "refused"
        report["error"] = {"message": str(exc), "kind": type(exc).__name__,
                           "precondition": exc.precondition, "anchor": exc.anchor,
                           "details": exc.details}
        return EXIT_CONTRACT, report


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        code, report = run_task(cfg, args.task, args.seed, args.budget)
    except InputError as exc:
        print(f"coarsegrp: {exc}", file=sys.stderr)
        return EXIT_PARSE
    fmt = args.format or (cfg.get("output") or {}).get("format", "json")
    text = render(report, fmt)
    out = args.out or (cfg.get("output") or {}).get("path")
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)
    if code:
        print(f"coarsegrp: {report['status']}: {report['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
