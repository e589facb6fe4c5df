"""Command-line front end.

Every subcommand prints one JSON report (sorted keys) with a top-level
``match``.  Exit status is 0 when everything requested matched, 1 on a
mismatch, 2 when a budget is exceeded and 3 for invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import graphs as gr
from .complexes import bounded_degree_complex, independence_complex, matching_complex
from .errors import BudgetExceeded, KMatchError
from .homology import SphereWedge, homology, profile_matches
from .morse import FacePoset, claw_induced_matching, morse_vector, toggle_sequence
from .mta import check_node_invariants, policy_by_name, post_cancel, run_mta
from .predictions import (
    FAMILIES,
    bd_m2_towers,
    caterpillar_tables,
    jonsson_gap,
    k_matching_sequence,
    predict,
    remark_unit_check,
    verify,
)
from .sites import attaching_site_analysis, compare_random, maximize_sites, optimal_toggles

log = logging.getLogger("kmatch")

EXIT_OK, EXIT_MISMATCH, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3

SCRIPTS = {"triangle-path": gr.TRIANGLE_PATH_SCRIPT, "square-two-paths": gr.SQUARE_TWO_PATHS_SCRIPT, "triangle-two-paths": gr.TRIANGLE_TWO_PATHS_SCRIPT}


def load_graph(src: str) -> gr.Graph:
    """A builder string such as ``wheel:5`` or a path to a graph JSON file."""
    if src.endswith(".json") or os.path.sep in src:
        with open(src, encoding="utf-8") as fh:
            return gr.Graph.from_json(json.load(fh))
    return gr.parse_builder(src)


def load_script(src: str) -> gr.ClawedBuildScript:
    if src in SCRIPTS:
        return SCRIPTS[src]
    if src.startswith("cycle:"):
        return gr.ClawedBuildScript(int(src.split(":")[1]))
    with open(src, encoding="utf-8") as fh:
        return gr.ClawedBuildScript.from_json(json.load(fh))


def _complex(g: gr.Graph, args):
    kind = getattr(args, "complex", "matching")
    if kind == "ind":
        return independence_complex(g, args.budget)
    if kind == "bd":
        if args.bound:
            caps = {}
            for item in args.bound.split(","):
                v, c = item.split("=")
                caps[v] = int(c)
            base = {v: args.k for v in g.vertices}
            base.update(caps)
            return bounded_degree_complex(g, base, args.budget)
        return bounded_degree_complex(g, args.k, args.budget)
    return matching_complex(g, args.k, args.budget)


def _parse_spheres(text: str | None) -> SphereWedge | None:
    if text is None:
        return None
    if text.strip() in ("", "pt"):
        return SphereWedge(())
    return SphereWedge(tuple(int(x) for x in text.split(",")))


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> dict:
    if args.script:
        b = gr.build_clawed_nonseparable(load_script(args.script))
        g = b.graph
        extra = {"T": b.T, "L": b.L, "claws": [c.center for c in b.claws]}
    else:
        g = load_graph(args.graph)
        extra = {}
    out = {"graph": g.to_json(), "match": True, **extra}
    if args.k:
        cx = _complex(g, args)
        out["complex"] = {"faces": len(cx), "dim": cx.dim, "f_vector": {str(k): v for k, v in cx.f_vector().items()}}
        if args.facets:
            out["complex"]["facets"] = [list(f) for f in cx.facets()]
    return out


def cmd_homology(args) -> dict:
    g = load_graph(args.graph)
    cx = _complex(g, args)
    r = homology(cx, rational_check=not args.no_rational, check_dd=args.check_dd, budget=args.budget)
    out = {"faces": len(cx), "cells_after_reduction": r.cells_kept, "homology": r.profile.to_json()}
    if r.profile.void:
        out["describe"] = "void complex"
    else:
        w = r.profile.wedge()
        out["describe"] = w.describe() if w is not None else "has torsion"
    ok = r.rational_agrees is not False and r.dd_ok is not False
    if r.rational_betti is not None:
        out["rational_check"] = r.rational_agrees
    if r.dd_ok is not None:
        out["dd_zero"] = r.dd_ok
    claim = _parse_spheres(args.expect)
    if claim is not None:
        good, rep = profile_matches(r.profile, claim)
        out["expected"] = claim.to_json()
        out["mismatches"] = rep
        ok &= good
    out["match"] = bool(ok)
    return out


def cmd_morse(args) -> dict:
    g = load_graph(args.graph)
    cx = _complex(g, args)
    poset = FacePoset(cx, include_empty=not args.no_empty)
    if args.claw:
        choice = {}
        for item in args.toggles or []:
            c, e = item.split("=", 1)
            choice[c] = e
        units = gr.find_claw_units(g)
        for u in units:
            choice.setdefault(u.center, u.edges[0])
        m = claw_induced_matching(g, choice, poset=poset)
    else:
        m = toggle_sequence(poset, args.toggles or [])
    mv = morse_vector(m) if m.acyclic else None
    prof = homology(cx, rational_check=False, budget=args.budget).profile
    out = {
        "acyclic": bool(m.acyclic),
        "critical": [list(c) for c in m.critical()],
        "homology": prof.to_json(),
    }
    if mv is not None:
        out["morse"] = mv.to_json()
        out["morse_inequalities"] = mv.dominates(prof.betti)
        out["euler_agrees"] = mv.euler() == cx.euler_reduced()
    else:
        out["cycle"] = [list(m.poset.labels(int(x))) for x in m.certificate.cycle]
    out["match"] = bool(m.acyclic) and out.get("morse_inequalities", False) and out.get("euler_agrees", False)
    return out


def cmd_mta(args) -> dict:
    g = load_graph(args.graph)
    if args.line:
        g = gr.line_graph(g)
    tree = run_mta(g, policy_by_name(args.policy, g))
    bad = check_node_invariants(tree)
    m = tree.matching()
    out = {
        "policy": tree.policy,
        "critical": [list(c) for c in tree.critical_cells()],
        "sizes": {str(k): v for k, v in tree.count_by_size().items()},
        "invariant_violations": bad,
        "acyclic": bool(m.acyclic),
    }
    if args.tree:
        out["tree"] = tree.to_json()["root"]
    ok = not bad and bool(m.acyclic)
    if args.cancel:
        pairs = []
        for item in args.cancel:
            lo, hi = item.split(":")
            pairs.append((tuple(x for x in lo.split(",") if x), tuple(x for x in hi.split(",") if x)))
        mv = post_cancel(tree, pairs, m)
        out["after_cancel"] = mv.to_json()
    prof = homology(independence_complex(g), rational_check=False).profile
    out["homology"] = prof.to_json()
    out["match"] = ok
    return out


def _family_params(args) -> dict:
    p = {}
    for name in ("n", "m"):
        v = getattr(args, name)
        if v is not None:
            p[name] = v
    if args.graph:
        p["graph"] = args.graph
    return p


def cmd_predict(args) -> dict:
    pred = predict(args.family, **_family_params(args))
    return {"family": args.family, "params": _family_params(args), "predicted": pred.to_json(), "match": pred.status != "unknown"}


def cmd_verify(args) -> dict:
    v = verify(args.family, budget=args.budget, **_family_params(args))
    return v.to_json()


def cmd_caterpillar(args) -> dict:
    tab = caterpillar_tables(args.m, args.depth)
    out = tab.to_json()
    out["remark_unit_check"] = remark_unit_check()
    towers = []
    for n in range(1, args.depth + 1):
        bd, m2 = bd_m2_towers(args.m, n)
        towers.append({"n": n, "BD": bd.to_json(), "M2": m2.to_json()})
    out["towers"] = towers
    return out


def cmd_sites(args) -> dict:
    b = gr.build_clawed_nonseparable(load_script(args.script))
    g = b.graph
    best = maximize_sites(b)
    analysis = attaching_site_analysis(g, best.toggles, check_matching=args.check)
    optimum = attaching_site_analysis(g, optimal_toggles(g)).n_sites
    rnd = compare_random(b, trials=args.trials, seed=args.seed)
    out = {
        "script": b.script.to_json(),
        "assignment": best.to_json(),
        "analysis": analysis.to_json(),
        "optimum": optimum,
        "random": rnd.to_json(),
    }
    ok = best.sites <= best.T and rnd.ok
    if args.check:
        ok &= bool(analysis.matching_checked)
    out["match"] = ok
    return out


def cmd_sequence(args) -> dict:
    return k_matching_sequence(load_graph(args.graph), args.budget).to_json()


def cmd_gap(args) -> dict:
    return jonsson_gap(load_graph(args.graph), args.budget).to_json()


def cmd_suite(args) -> dict:
    from .suite import run_suite

    nums = [int(x) for x in args.only.split(",")] if args.only else None

    def show(c):
        print(c.line(), file=sys.stderr)

    results = run_suite(nums, seed=args.seed, progress=show)
    return {"criteria": [c.to_json() for c in results], "match": all(c.passed for c in results)}


# ---------------------------------------------------------------------------


def _add_complex_args(p, k_default=2):
    p.add_argument("--k", type=int, default=k_default, help="degree bound for the matching complex")
    p.add_argument("--complex", choices=("matching", "ind", "bd"), default="matching")
    p.add_argument("--bound", help="per-vertex caps for --complex bd, e.g. 'x3=1'")


def build_parser() -> argparse.ArgumentParser:
    # shared options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="face budget (default from KMATCH_BUDGET or 2^24)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the JSON report here instead of standard output")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    ap = argparse.ArgumentParser(prog="kmatch", description="k-matching complexes: construction, Morse matchings, homology and predictions", parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    p = sub.add_parser("build", help="build a graph (and optionally its complex)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph")
    g.add_argument("--script", help="clawed build script: triangle-path, square-two-paths, triangle-two-paths, cycle:N or a JSON path")
    _add_complex_args(p, k_default=0)
    p.add_argument("--facets", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("homology", help="reduced integral homology of a complex")
    p.add_argument("--graph", required=True)
    _add_complex_args(p)
    p.add_argument("--expect", help="claimed sphere dimensions, e.g. '3,3' or 'pt'")
    p.add_argument("--no-rational", action="store_true")
    p.add_argument("--check-dd", action="store_true")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("morse", help="toggle or claw-induced Morse matching")
    p.add_argument("--graph", required=True)
    _add_complex_args(p)
    p.add_argument("--toggles", nargs="*", help="vertices to toggle in order, or center=edge with --claw")
    p.add_argument("--claw", action="store_true", help="claw-induced matching on every claw unit")
    p.add_argument("--no-empty", action="store_true", help="leave the empty face out of the matching")
    p.set_defaults(func=cmd_morse)

    p = sub.add_parser("mta", help="Matching Tree Algorithm on an independence complex")
    p.add_argument("--graph", required=True)
    p.add_argument("--line", action="store_true", help="run on the line graph (so Ind = M1 of the input)")
    p.add_argument("--policy", default="min-label", help="min-label or wheel:N")
    p.add_argument("--cancel", nargs="*", help="extra pairs 'a,b:a,b,c' among critical cells")
    p.add_argument("--tree", action="store_true", help="include the full tree")
    p.set_defaults(func=cmd_mta)

    fams = sorted(FAMILIES) + ["bridge", "clawed"]
    for name, fn, helptext in (("predict", cmd_predict, "predicted homotopy descriptor"), ("verify", cmd_verify, "predict, build, compute and compare")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--family", required=True, choices=fams)
        p.add_argument("--n", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--graph", help="graph for the bridge family, base graph for clawed")
        p.set_defaults(func=fn)

    p = sub.add_parser("caterpillar-tables", help="caterpillar recurrences and closed-form comparison")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=cmd_caterpillar)

    p = sub.add_parser("sites", help="attaching-site assignment for a clawed build script")
    p.add_argument("--script", required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--check", action="store_true", help="build the matching and confirm its critical cell")
    p.set_defaults(func=cmd_sites)

    p = sub.add_parser("sequence", help="homology of M_1, M_2, ... up to the first cone")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("gap", help="connectivity bound against the observed sphere for a clawed graph")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("paper-suite", help="run every acceptance criterion")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name, default in (("budget", None), ("seed", 0), ("out", None), ("verbose", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.budget is not None and args.budget <= 0:
        print("error: --budget must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        report = args.func(args)
        code = EXIT_OK if report.get("match") else EXIT_MISMATCH
    except BudgetExceeded as exc:
        report, code = {"error": str(exc), "match": False}, EXIT_BUDGET
        print(f"error: {exc}", file=sys.stderr)
    except (KMatchError, OSError, ValueError, KeyError) as exc:
        report, code = {"error": str(exc), "match": False}, EXIT_INPUT
        print(f"error: {exc}", file=sys.stderr)
    report = {"command": args.command, "seed": args.seed, **report}
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"{args.command}: {'match' if report['match'] else 'MISMATCH'} (report in {args.out})")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
