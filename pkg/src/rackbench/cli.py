"""Command line front end: ``rackbench <command> ...``."""

import argparse
import json
import sys
from collections import Counter

from . import io, perms
from .racks import (RackError, describe, k_stats, make_affine, make_conjugation,
                    make_dihedral, make_trivial, shape_string, survivor_profiles, validate)


class UsageError(ValueError):
    pass


def parse_rack(spec):
    """aff:q,α | dihedral:p | trivial:n | conj:<gens>;<seed>;<degree> | file:path[#i]"""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "aff":
            q, a = (int(v) for v in arg.split(","))
            return make_affine(q, a)
        if kind == "dihedral":
            return make_dihedral(int(arg))
        if kind == "trivial":
            return make_trivial(int(arg))
        if kind == "conj":
            gens, seed, n = arg.split(";")
            n = int(n)
            gl = [perms.parse_cycles(g, n) for g in gens.split("|")]
            return make_conjugation(gl, perms.parse_cycles(seed, n))
        if kind == "file":
            path, _, idx = arg.partition("#")
            racks = io.ingest_racks(path)
            return racks[int(idx or 0)]
    except (ValueError, IndexError) as exc:
        raise UsageError("bad rack spec %r: %s" % (spec, exc)) from None
    raise UsageError("unknown rack kind %r" % kind)


def parse_covering(spec):
    """'4A:5:3,2' -> CoveringDesc."""
    from .catalog import CoveringDesc

    try:
        base, N, vals = spec.split(":")
        return CoveringDesc.make(base, int(N), *(int(v) for v in vals.split(",") if v))
    except ValueError as exc:
        raise UsageError("bad covering spec %r: %s" % (spec, exc)) from None


def parse_triple(text, t):
    vals = [int(v) for v in text.replace(" ", "").split(",")]
    if len(vals) != 3 or any(not 0 <= v < t.size for v in vals):
        raise UsageError("triple needs three indices in [0, %d)" % t.size)
    return tuple(vals)


def _emit(args, result, text=None):
    if args.json or text is None:
        print(json.dumps(io.to_jsonable(result), indent=2, ensure_ascii=False))
    else:
        print(text)


# -- commands ------------------------------------------------------------------------

def cmd_rack(args):
    if args.action == "survivors":
        shapes = survivor_profiles(args.max_moved)
        _emit(args, [shape_string(s) for s in shapes],
              "\n".join(shape_string(s) for s in shapes))
        return 0
    t = parse_rack(args.rack)
    if args.action == "info":
        d = describe(t)
        _emit(args, d, "\n".join("%s: %s" % (k, io.to_jsonable(v)) for k, v in d.items()))
    elif args.action == "validate":
        flags = validate(t)
        _emit(args, flags, " ".join("%s=%s" % kv for kv in flags.items()))
        return 0 if flags["is_rack"] else 1
    elif args.action == "kstats":
        ks = k_stats(t)
        res = {"k": ks.as_dict(), "kprime2": ks.kprime(2), "kprime3": ks.kprime(3)}
        _emit(args, res, "k=%s k'2=%d k'3=%d" % (res["k"], res["kprime2"], res["kprime3"]))
    return 0


def cmd_cube(args):
    from .hurwitz import decompose_cube

    t = parse_rack(args.rack)
    sizes = Counter(o.n for o in decompose_cube(t))
    res = {"rack": t.name, "orbits": dict(sorted(sizes.items()))}
    _emit(args, res, " ".join("%d×%d" % (m, n) for n, m in sorted(sizes.items())))
    return 0


def cmd_orbit(args):
    from .automaton import exception_predicates
    from .catalog import classify
    from .hurwitz import orbit_of, simply_intersecting

    t = parse_rack(args.rack)
    o = orbit_of(t, parse_triple(args.triple, t))
    cl = classify(o)
    res = {"size": o.n, "classification": str(cl), "simply_intersecting": simply_intersecting(o),
           "exception_predicates": exception_predicates(o, cl)}
    if args.dot:
        io.export_dot(o, args.dot)
    _emit(args, res, "size %d, %s, simply intersecting: %s"
          % (o.n, cl, res["simply_intersecting"]))
    return 0


def cmd_catalog(args):
    from .catalog import base_graph, base_graphs, enumerate_coverings

    if args.action == "list":
        rows = [{"id": g.id, "points": g.n, "letters": "".join(g.letters)} for g in base_graphs()]
        _emit(args, rows, "\n".join("%-4s %2d  %s" % (r["id"], r["points"], r["letters"])
                                    for r in rows))
    elif args.action == "show":
        g = base_graph(args.id)
        text = io.dot_text(g)
        if args.dot:
            io.export_dot(g, args.dot)
        _emit(args, {"id": g.id, "dot": text}, text)
    elif args.action == "enumerate":
        res = {N: [str(c) for c in enumerate_coverings(args.id, N)]
               for N in range(1, args.max_n + 1)}
        _emit(args, res, "\n".join("N=%d: %s" % (N, " ".join(v)) for N, v in res.items() if v))
    return 0


def cmd_plague(args):
    from .automaton import (PointSet, b3_rule, closure, is_plague, minimal_plague,
                            parse_seed)
    from .catalog import build_covering

    c = parse_covering(args.covering)
    sp = build_covering(c)
    rule = b3_rule()
    if args.action == "closure":
        seed = PointSet.of(sp, parse_seed(args.seed, c.N))
        cl = closure(rule, seed)
        res = {"covering": str(c), "seed": len(seed), "closure": len(cl), "points": sp.n,
               "plague": is_plague(rule, seed)}
        _emit(args, res, "closure %d of %d points (plague: %s)" % (len(cl), sp.n, res["plague"]))
    else:
        r = minimal_plague(rule, sp, exact_limit=args.exact_limit)
        res = {"covering": str(c), "upper": r.upper, "lower": r.lower, "exact": r.exact,
               "method": r.method, "witness": list(r.witness)}
        _emit(args, res, "plague size %s (bounds %d..%d, %s)"
              % (r.size, r.lower, r.upper, r.method))
    return 0


def cmd_imm(args):
    from .acceptance import imm_verify_sweep

    families = [args.family] if args.family else None
    items = imm_verify_sweep(args.max_n, args.exact_limit, families)
    ok = all(i["passed"] for i in items)
    lines = []
    for i in items:
        for r in i["results"]:
            lines.append("%-18s %-7s ω=%-7s %s" % (r["covering"], r["upper"], r["omega"],
                                                 "ok" if r["passed"] else "FAIL"))
    _emit(args, {"ok": ok, "items": items}, "\n".join(lines + ["all passed: %s" % ok]))
    return 0 if ok else 1


def cmd_psl2z(args):
    from .hurwitz import enumerate_psl2z_spaces

    spaces = enumerate_psl2z_spaces(args.max_points, args.max_cycle)
    res = {"classes": len(spaces), "sizes": sorted(s.n for s in spaces)}
    _emit(args, res, "%d classes, sizes %s" % (res["classes"], res["sizes"]))
    return 0


def cmd_nichols(args):
    from .nichols import affine_model_for, constant_cocycle, induced_cocycle, many_cubic_report

    t = parse_rack(args.rack)
    kind, _, val = args.cocycle.partition(":")
    if kind == "const":
        c = constant_cocycle(t, int(val))
    elif kind == "char":
        gm = affine_model_for(t)
        if gm is None:
            raise UsageError("characters need an affine rack of prime order")
        c = induced_cocycle(gm, int(val))
    else:
        raise UsageError("cocycle must be const:<±1> or char:<k>")
    res = many_cubic_report(c, workers=args.threads)
    _emit(args, res, "kernel %d, threshold %s, many cubic relations: %s"
          % (res["kernel_total"], res["threshold"], res["holds"]))
    return 0


def cmd_pipeline(args):
    from .nichols import classification_pipeline

    diags = []
    racks = io.ingest_racks(args.db, diags)
    for d in diags:
        print("skipped: " + d, file=sys.stderr)
    report = classification_pipeline(racks, args.exact_limit)
    out = io.make_report("pipeline classify", {"db": open(args.db).read()}, report)
    if args.report:
        io.dump_report(out, args.report)
    survivors = [e["rack"] for e in report if e["stage"] == "survivor"]
    _emit(args, out, "\n".join("%-12s %s" % (e["rack"], e["stage"]) for e in report)
          + "\nsurvivors: %s" % ", ".join(survivors))
    return 0


def cmd_suite(args):
    cfg = {"suite": args.name, "max_n": args.max_n, "exact_limit": args.exact_limit}
    if args.db:
        cfg["db"] = args.db
    rep = io.run_suite(cfg, args.cache_dir)
    lines = []
    for item in rep["results"]:
        tag = "PASS" if item.get("passed") else "FAIL"
        key = item.get("criterion") or item.get("rack") or "%s N=%s" % (item.get("family"), item.get("N"))
        lines.append("%s %s" % (tag, key))
    _emit(args, rep, "\n".join(lines))
    return 0 if rep["ok"] else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON")
    common.add_argument("--dot", metavar="PATH", help="write a DOT graph")
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--max-n", type=int, default=8)
    common.add_argument("--exact-limit", type=int, default=30)
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="rackbench")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rack", parents=[common])
    r.add_argument("action", choices=["info", "validate", "kstats", "survivors"])
    r.add_argument("--rack", default="aff:5,2")
    r.add_argument("--max-moved", type=int, default=9)
    r.set_defaults(func=cmd_rack)

    c = sub.add_parser("cube", parents=[common])
    c.add_argument("--rack", required=True)
    c.set_defaults(func=cmd_cube)

    o = sub.add_parser("orbit", parents=[common])
    o.add_argument("--rack", required=True)
    o.add_argument("--triple", required=True, help="0-based, e.g. 1,1,2")
    o.set_defaults(func=cmd_orbit)

    g = sub.add_parser("catalog", parents=[common])
    g.add_argument("action", choices=["list", "show", "enumerate"])
    g.add_argument("id", nargs="?", default="1A")
    g.set_defaults(func=cmd_catalog)

    pl = sub.add_parser("plague", parents=[common])
    pl.add_argument("action", choices=["closure", "min"])
    pl.add_argument("--covering", required=True, help="e.g. 4A:5:3,2")
    pl.add_argument("--seed", default="")
    pl.set_defaults(func=cmd_plague)

    im = sub.add_parser("imm", parents=[common])
    im.add_argument("action", choices=["verify"])
    im.add_argument("--family")
    im.set_defaults(func=cmd_imm)

    ps = sub.add_parser("psl2z", parents=[common])
    ps.add_argument("--max-points", type=int, default=24)
    ps.add_argument("--max-cycle", type=int, default=4)
    ps.set_defaults(func=cmd_psl2z)

    ni = sub.add_parser("nichols", parents=[common])
    ni.add_argument("action", choices=["cubic"])
    ni.add_argument("--rack", required=True)
    ni.add_argument("--cocycle", default="const:-1")
    ni.set_defaults(func=cmd_nichols)

    pi = sub.add_parser("pipeline", parents=[common])
    pi.add_argument("action", choices=["classify"])
    pi.add_argument("--db", required=True)
    pi.add_argument("--report")
    pi.set_defaults(func=cmd_pipeline)

    su = sub.add_parser("suite", parents=[common])
    su.add_argument("name")
    su.add_argument("--db")
    su.set_defaults(func=cmd_suite)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, RackError, io.IngestError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
